"""Command-line interface: build-dataset, split, train, evaluate, predict,
stats, translit, and grid subcommands.

Exit codes: 0 success, 2 usage or input error, 3 numerical failure.
All randomness flows from a single --seed flag (default 42) that is
echoed into metadata sidecars and model files.
"""

from __future__ import annotations

import hashlib
import json
import sys
import time
from pathlib import Path

import click

from . import __version__
from .corpus import (
    PRNG_ID,
    PairingConfig,
    PairingMode,
    SplitRatios,
    build_dataset,
    char_frequency,
    dedupe_first_names,
    gender_balance,
    homonym_stats,
    read_raw_csv,
    split_dataset,
    write_char_csv,
    write_homonym_csv,
    write_metadata,
)
from .errors import GendecError, NonFiniteError, UnknownKanaError
from .evaluate import (
    Cell,
    ablation_grid,
    classical_full_grid,
    evaluate_predictions,
    extract_texts,
    run_cells,
    train_cell_model,
    write_reports_csv,
    write_reports_json,
)
from .model_io import ModelFile, deterministic_created_at, load_model, save_model
from .models import ModelKind, predict, predict_proba, supports_proba
from .name_core import (
    Gender,
    InputVariant,
    NamePart,
    NameRole,
    normalize_romaji,
    read_corpus_csv,
    write_corpus_csv,
)
from .translit import ReadingDictionary, build_reading_dictionary, kana_to_romaji
from .vectorize import TokenizerConfig, TokenizerMode, Weighting, fit_vocabulary, transform

_MODEL_CHOICES = [kind.value for kind in ModelKind]
_FEATURE_CHOICES = [w.value for w in Weighting]
_PART_CHOICES = [p.value for p in NamePart]
_VARIANT_CHOICES = [v.value for v in InputVariant]


def _fail(message: str, code: int = 2) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Gender detection from Japanese names."""


@main.command("build-dataset")
@click.option("--firsts", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Raw given-name CSV (romaji,hiragana,kanji,gender,role).")
@click.option("--lasts", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Raw family-name CSV.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--pairing", type=click.Choice([m.value for m in PairingMode]),
              default=PairingMode.ONE_TO_ONE.value, show_default=True)
@click.option("--k", type=click.IntRange(1), default=1, show_default=True,
              help="Families per given name in cross-k mode.")
@click.option("--seed", type=click.IntRange(0), default=42, show_default=True)
def cmd_build_dataset(firsts, lasts, out, pairing, k, seed) -> None:
    """Join raw name parts into a full-name corpus CSV plus metadata."""
    try:
        given_rows = dedupe_first_names(
            [r for r in read_raw_csv(firsts) if r.role is NameRole.GIVEN]
        )
        family_rows = [r for r in read_raw_csv(lasts) if r.role is NameRole.FAMILY]
        config = PairingConfig(mode=PairingMode(pairing), k=k)
        records = build_dataset(given_rows, family_rows, config, seed)
        write_corpus_csv(out, records)
        balance = gender_balance(records)
        write_metadata(
            Path(out).with_suffix(Path(out).suffix + ".meta.json"),
            {
                "command": "build-dataset",
                "seed": seed,
                "pairing": config.mode.value,
                "k": config.k,
                "prng": PRNG_ID,
                "rows": {
                    "total": len(records),
                    "female": sum(1 for r in records if r.gender is Gender.FEMALE),
                    "male": sum(1 for r in records if r.gender is Gender.MALE),
                },
            },
        )
        click.echo(
            f"wrote {len(records)} records to {out} "
            f"(male {balance['male']:.2%}, female {balance['female']:.2%})"
        )
    except GendecError as exc:
        _fail(str(exc))


def _parse_ratios(raw: str) -> SplitRatios:
    parts = raw.split(",")
    if len(parts) != 3:
        raise GendecError(f"--ratios needs three comma-separated values, got {raw!r}")
    try:
        train, val, test = (float(p) for p in parts)
    except ValueError:
        raise GendecError(f"--ratios values must be numbers, got {raw!r}") from None
    return SplitRatios(train=train, val=val, test=test)


@main.command("split")
@click.option("--in", "corpus_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--train-out", type=click.Path(dir_okay=False), required=True)
@click.option("--val-out", type=click.Path(dir_okay=False), required=True)
@click.option("--test-out", type=click.Path(dir_okay=False), required=True)
@click.option("--ratios", default="0.7,0.2,0.1", show_default=True)
@click.option("--seed", type=click.IntRange(0), default=42, show_default=True)
@click.option("--stratify/--no-stratify", default=True, show_default=True)
def cmd_split(corpus_path, train_out, val_out, test_out, ratios, seed, stratify) -> None:
    """Split a corpus into train/val/test CSVs."""
    try:
        records = read_corpus_csv(corpus_path)
        split_ratios = _parse_ratios(ratios)
        train, val, test = split_dataset(records, split_ratios, seed, stratify)
        write_corpus_csv(train_out, train)
        write_corpus_csv(val_out, val)
        write_corpus_csv(test_out, test)
        write_metadata(
            Path(train_out).with_suffix(Path(train_out).suffix + ".meta.json"),
            {
                "command": "split",
                "seed": seed,
                "ratios": [split_ratios.train, split_ratios.val, split_ratios.test],
                "stratify": stratify,
                "prng": PRNG_ID,
                "rows": {"train": len(train), "val": len(val), "test": len(test)},
            },
        )
        click.echo(f"train={len(train)} val={len(val)} test={len(test)}")
    except GendecError as exc:
        _fail(str(exc))


def _sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


@main.command("train")
@click.option("--model", "model_kind", type=click.Choice(_MODEL_CHOICES), required=True)
@click.option("--features", type=click.Choice(_FEATURE_CHOICES), required=True)
@click.option("--part", type=click.Choice(_PART_CHOICES), default="full",
              show_default=True)
@click.option("--variant", type=click.Choice(_VARIANT_CHOICES), default="original",
              show_default=True)
@click.option("--train", "train_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--seed", type=click.IntRange(0), default=42, show_default=True)
@click.option("--tokenizer", type=click.Choice([m.value for m in TokenizerMode]),
              default="word", show_default=True)
@click.option("--ngram-min", type=click.IntRange(1, 8), default=2, show_default=True,
              help="Only used with --tokenizer char_ngram.")
@click.option("--ngram-max", type=click.IntRange(1, 8), default=4, show_default=True)
@click.option("--dict", "dict_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Prebuilt reading dictionary for --variant converted "
              "(default: build from the training CSV).")
@click.option("--alpha", type=float, default=None, help="NB smoothing.")
@click.option("--learning-rate", type=float, default=None, help="LR step size.")
@click.option("--epochs", type=int, default=None, help="LR/SVM passes.")
@click.option("--l2", type=float, default=None, help="LR regularization.")
@click.option("--lam", type=float, default=None, help="SVM regularization.")
@click.option("--max-depth", type=int, default=None, help="Tree/forest depth cap.")
@click.option("--min-samples-leaf", type=int, default=None)
@click.option("--n-trees", type=int, default=None, help="Forest size.")
@click.option("--features-per-split", type=int, default=None)
@click.option("--bootstrap/--no-bootstrap", default=None)
def cmd_train(model_kind, features, part, variant, train_path, out, seed, tokenizer,
              ngram_min, ngram_max, dict_path, alpha, learning_rate, epochs, l2, lam,
              max_depth, min_samples_leaf, n_trees, features_per_split, bootstrap) -> None:
    """Train one grid cell's model and write a self-contained model file."""
    started = time.monotonic()
    try:
        records = read_corpus_csv(train_path)
        if not records:
            raise GendecError(f"{train_path}: training CSV has no rows")
        kind = ModelKind(model_kind)
        weighting = Weighting(features)
        name_part = NamePart(part)
        input_variant = InputVariant(variant)
        if tokenizer == TokenizerMode.WORD.value:
            tok_config = TokenizerConfig()
        else:
            tok_config = TokenizerConfig(
                mode=TokenizerMode.CHAR_NGRAM, ngram_min=ngram_min, ngram_max=ngram_max
            )

        reading_dict = None
        if input_variant is InputVariant.CONVERTED:
            if dict_path:
                reading_dict = ReadingDictionary.load(dict_path)
            else:
                reading_dict, _ = build_reading_dictionary(records)

        texts, _ = extract_texts(records, name_part, input_variant, reading_dict)
        labels = [r.gender for r in records]
        vocab = fit_vocabulary(texts, tok_config, weighting)
        X = transform(texts, vocab, weighting)

        overrides = {}
        flag_map = {
            "alpha": alpha, "learning_rate": learning_rate, "epochs": epochs,
            "l2": l2, "lam": lam, "max_depth": max_depth,
            "min_samples_leaf": min_samples_leaf, "n_trees": n_trees,
            "features_per_split": features_per_split, "bootstrap": bootstrap,
        }
        from .evaluate import DEFAULT_HYPERPARAMETERS

        for name, value in flag_map.items():
            if value is not None and name in DEFAULT_HYPERPARAMETERS[kind.value]:
                overrides[name] = value

        model = train_cell_model(kind, X, labels, seed, overrides)
        model_file = ModelFile(
            model=model,
            kind=kind,
            weighting=weighting,
            part=name_part,
            variant=input_variant,
            vocabulary=vocab,
            reading_dictionary=reading_dict,
            metadata={
                "train_rows": len(records),
                "seed": seed,
                "created_at": deterministic_created_at(),
                "corpus_sha256": _sha256_file(train_path),
            },
        )
        save_model(out, model_file)
        elapsed = time.monotonic() - started
        click.echo(f"trained {kind.value} on {len(records)} rows in {elapsed:.2f}s -> {out}")
    except NonFiniteError as exc:
        _fail(str(exc), code=3)
    except GendecError as exc:
        _fail(str(exc))


@main.command("evaluate")
@click.option("--model-file", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--test", "test_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--report", type=click.Path(dir_okay=False), required=True,
              help="JSON report output.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None,
              help="Optional CSV mirror.")
def cmd_evaluate(model_file, test_path, report, csv_path) -> None:
    """Evaluate a trained model on a test CSV and write its report."""
    try:
        loaded = load_model(model_file)
        records = read_corpus_csv(test_path)
        if not records:
            raise GendecError(f"{test_path}: test CSV has no rows")
        texts, fallback_rate = extract_texts(
            records, loaded.part, loaded.variant, loaded.reading_dictionary
        )
        X = transform(texts, loaded.vocabulary, loaded.weighting)
        y_pred = predict(loaded.model, X)
        y_true = [r.gender for r in records]
        result = evaluate_predictions(y_true, y_pred, loaded.cell, fallback_rate)
        with open(report, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(result.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        if csv_path:
            from .evaluate import REPORT_CSV_HEADER

            with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(REPORT_CSV_HEADER + "\n")
                fh.write(result.csv_row() + "\n")
        click.echo(
            f"{result.cell.label()}: macro_f1={result.macro_f1:.4f} "
            f"accuracy={result.accuracy:.4f}"
        )
    except GendecError as exc:
        _fail(str(exc))


def _predict_one(loaded: ModelFile, name: str) -> str:
    norm = normalize_romaji(name)
    tokens = norm.split(" ")
    if len(tokens) != 2 or not all(tokens):
        raise GendecError(f"expected 'Family Given', got {name!r}")
    family, given = tokens
    if loaded.part is NamePart.LAST:
        text = family
    elif loaded.part is NamePart.FIRST:
        text = given
    else:
        text = norm
    X = transform([text], loaded.vocabulary, loaded.weighting)
    gender = predict(loaded.model, X)[0]
    if supports_proba(loaded.model):
        proba = predict_proba(loaded.model, X)[0]
        return f"{name}\t{gender.value}\t{max(proba):.6f}"
    return f"{name}\t{gender.value}"


@main.command("predict")
@click.option("--model-file", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--name", default=None, help='Romaji full name, e.g. "Tamai Kazuyoshi".')
@click.option("--batch", type=click.Path(exists=True, dir_okay=False), default=None,
              help="File with one romaji full name per line.")
def cmd_predict(model_file, name, batch) -> None:
    """Predict gender for romaji names (converted-variant models fall back
    to the romaji input, since no kanji is available here)."""
    if (name is None) == (batch is None):
        _fail("provide exactly one of --name or --batch")
    try:
        loaded = load_model(model_file)
        if name is not None:
            if not name.strip():
                raise GendecError("empty name")
            click.echo(_predict_one(loaded, name))
        else:
            with open(batch, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        click.echo(_predict_one(loaded, line))
    except GendecError as exc:
        _fail(str(exc))


@main.command("stats")
@click.argument("statistic", type=click.Choice(["homonyms", "chars"]))
@click.option("--in", "corpus_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--gender", type=click.Choice([g.value for g in Gender]), required=True)
@click.option("--part", type=click.Choice(_PART_CHOICES), default="first",
              show_default=True, help="Name part for chars.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def cmd_stats(statistic, corpus_path, gender, part, out) -> None:
    """Write homonym histograms or kanji character frequencies as CSV."""
    try:
        records = read_corpus_csv(corpus_path)
        target = Gender(gender)
        if statistic == "homonyms":
            hist = homonym_stats(records)
            write_homonym_csv(out, hist.for_gender(target))
        else:
            items = char_frequency(records, target, NamePart(part))
            write_char_csv(out, items)
        click.echo(f"wrote {statistic} for {gender} to {out}")
    except GendecError as exc:
        _fail(str(exc))


@main.command("translit")
@click.option("--kana", required=True, help="Hiragana text (may be empty).")
def cmd_translit(kana) -> None:
    """Transliterate hiragana to romaji."""
    try:
        click.echo(kana_to_romaji(kana))
    except UnknownKanaError as exc:
        _fail(str(exc))


@main.command("grid")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              required=True,
              help="JSON: train/test paths, seed, cells or preset, hyperparameters.")
@click.option("--report-json", type=click.Path(dir_okay=False), required=True)
@click.option("--report-csv", type=click.Path(dir_okay=False), required=True)
def cmd_grid(config_path, report_json, report_csv) -> None:
    """Run a full experiment grid from one config file."""
    try:
        with open(config_path, encoding="utf-8") as fh:
            config = json.load(fh)
        for key in ("train", "test"):
            if key not in config:
                raise GendecError(f"grid config missing {key!r}")
            if not Path(config[key]).exists():
                raise GendecError(f"grid config {key} path does not exist: {config[key]}")
        if "cells" in config:
            cells = [
                Cell(
                    model=ModelKind(c["model"]),
                    weighting=Weighting(c["features"]),
                    variant=InputVariant(c["variant"]),
                    part=NamePart(c["part"]),
                )
                for c in config["cells"]
            ]
        else:
            preset = config.get("preset", "classical-full")
            if preset == "classical-full":
                cells = classical_full_grid()
            elif preset == "ablation":
                cells = ablation_grid()
            elif preset == "all":
                cells = classical_full_grid()
                cells += [c for c in ablation_grid() if c not in cells]
            else:
                raise GendecError(f"unknown preset {preset!r}")
        tokenizer_doc = config.get("tokenizer")
        tokenizer = (
            TokenizerConfig.from_json_dict(tokenizer_doc) if tokenizer_doc
            else TokenizerConfig()
        )
        train_records = read_corpus_csv(config["train"])
        test_records = read_corpus_csv(config["test"])
        results = run_cells(
            cells,
            train_records,
            test_records,
            seed=int(config.get("seed", 42)),
            hyperparameters=config.get("hyperparameters", {}),
            tokenizer=tokenizer,
        )
        write_reports_json(report_json, results)
        write_reports_csv(report_csv, results)
        for result in results:
            if result.report is not None:
                click.echo(
                    f"{result.cell.label()}: macro_f1={result.report.macro_f1:.4f}"
                )
            else:
                click.echo(f"{result.cell.label()}: FAILED ({result.error})")
    except (GendecError, ValueError, KeyError) as exc:
        _fail(str(exc))


if __name__ == "__main__":
    main()
