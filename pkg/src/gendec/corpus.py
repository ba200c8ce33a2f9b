"""Dataset construction from raw name-part lists, splitting, and statistics.

Raw input CSVs have the header ``romaji,hiragana,kanji,gender,role``.
Family-role rows are gender-neutral (the gender field may be empty or
"neutral"); given-role rows carry exactly one gender.  The built corpus
uses the ``name_core`` CSV schema, with a JSON metadata sidecar recording
seed, pairing mode, ratios, PRNG identifier, and row counts.
"""

from __future__ import annotations

import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    ConfigError,
    EmptyInputError,
    LabelError,
    MalformedNameError,
    RatioError,
    SchemaError,
)
from .name_core import (
    Gender,
    GENDERS,
    NamePart,
    NameRecord,
    NameRole,
    normalize_romaji,
)
from .translit import RecordAligner

RAW_CSV_HEADER = "romaji,hiragana,kanji,gender,role"

#: Identifier of the shuffle PRNG, recorded in metadata sidecars.
PRNG_ID = "pcg64"


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class RawNamePart:
    """One raw inventory row: a single family or given name in three scripts."""

    romaji: str
    hiragana: str
    kanji: str
    gender: Optional[Gender]
    role: NameRole

    def __post_init__(self) -> None:
        for name, value in (("romaji", self.romaji), ("hiragana", self.hiragana),
                            ("kanji", self.kanji)):
            if not value:
                raise MalformedNameError(f"empty {name} in raw name part")
        if " " in self.romaji:
            raise MalformedNameError(
                f"raw name part romaji must be a single token, got {self.romaji!r}"
            )
        if self.role is NameRole.GIVEN and self.gender is None:
            raise LabelError(f"given-name row {self.romaji!r} requires a gender")


def parse_raw_row(line: str) -> RawNamePart:
    fields = line.rstrip("\n").split(",")
    if len(fields) != 5:
        raise SchemaError(f"expected 5 columns, got {len(fields)}: {line!r}")
    romaji, hiragana, kanji, gender_raw, role_raw = fields
    try:
        role = NameRole(role_raw)
    except ValueError:
        raise SchemaError(f"role must be 'family' or 'given', got {role_raw!r}") from None
    gender: Optional[Gender]
    if role is NameRole.FAMILY:
        # Family names are usable for both genders; any label is dropped.
        gender = None
        if gender_raw not in ("", "neutral", "female", "male"):
            raise LabelError(f"unknown gender label {gender_raw!r}")
    else:
        gender = Gender.parse(gender_raw)
    return RawNamePart(
        romaji=romaji.strip(),
        hiragana=hiragana,
        kanji=kanji,
        gender=gender,
        role=role,
    )


def read_raw_csv(path: str | Path) -> list[RawNamePart]:
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().split("\n")
    if not lines or lines[0] != RAW_CSV_HEADER:
        raise SchemaError(f"{path}: expected header {RAW_CSV_HEADER!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        try:
            rows.append(parse_raw_row(line))
        except (SchemaError, LabelError, MalformedNameError) as exc:
            raise type(exc)(f"{path}:{lineno}: {exc}") from None
    return rows


def write_raw_csv(path: str | Path, rows: Iterable[RawNamePart]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(RAW_CSV_HEADER + "\n")
        for row in rows:
            gender = row.gender.value if row.gender else "neutral"
            fh.write(f"{row.romaji},{row.hiragana},{row.kanji},{gender},{row.role.value}\n")


def dedupe_first_names(rows: Sequence[RawNamePart]) -> list[RawNamePart]:
    """Keep one row per distinct (kanji, gender) pair; first occurrence wins."""
    seen: set[tuple[str, Optional[Gender]]] = set()
    out = []
    for row in rows:
        key = (row.kanji, row.gender)
        if key in seen:
            continue
        seen.add(key)
        out.append(row)
    return out


class PairingMode(str, Enum):
    """How given names are joined with family names."""

    ONE_TO_ONE = "one-to-one"
    CROSS_K = "cross-k"


@dataclass(frozen=True)
class PairingConfig:
    mode: PairingMode = PairingMode.ONE_TO_ONE
    k: int = 1

    def __post_init__(self) -> None:
        if self.mode is PairingMode.CROSS_K and self.k < 1:
            raise ConfigError(f"cross-k pairing requires k >= 1, got {self.k}")


def build_dataset(
    firsts: Sequence[RawNamePart],
    lasts: Sequence[RawNamePart],
    pairing: PairingConfig = PairingConfig(),
    seed: int = 42,
) -> list[NameRecord]:
    """Join given names with family names into full-name records.

    Each record's gender is its given name's gender; family names carry
    none.  One-to-one mode draws one family name per given name (with
    replacement); cross-k pairs each given name with k distinct families.
    """
    if not firsts or not lasts:
        raise EmptyInputError("need at least one given name and one family name")
    if any(row.role is not NameRole.GIVEN for row in firsts):
        raise ConfigError("firsts must contain only given-role rows")
    if any(row.role is not NameRole.FAMILY for row in lasts):
        raise ConfigError("lasts must contain only family-role rows")
    rng = _rng(seed)
    records = []

    def make_record(family: RawNamePart, given: RawNamePart) -> NameRecord:
        assert given.gender is not None
        return NameRecord(
            romaji=f"{family.romaji} {given.romaji}",
            kanji=f"{family.kanji}{given.kanji}",
            hiragana=f"{family.hiragana}{given.hiragana}",
            gender=given.gender,
        )

    if pairing.mode is PairingMode.ONE_TO_ONE:
        choices = rng.integers(0, len(lasts), size=len(firsts))
        for given, last_idx in zip(firsts, choices):
            records.append(make_record(lasts[int(last_idx)], given))
    else:
        if pairing.k > len(lasts):
            raise ConfigError(
                f"cross-k k={pairing.k} exceeds family inventory {len(lasts)}"
            )
        for given in firsts:
            picked = rng.choice(len(lasts), size=pairing.k, replace=False)
            for last_idx in picked:
                records.append(make_record(lasts[int(last_idx)], given))
    return records


@dataclass(frozen=True)
class SplitRatios:
    train: float
    val: float
    test: float

    def __post_init__(self) -> None:
        for name, value in (("train", self.train), ("val", self.val), ("test", self.test)):
            if not 0.0 < value < 1.0:
                raise RatioError(f"{name} ratio must be in (0, 1), got {value}")
        if abs(self.train + self.val + self.test - 1.0) > 1e-9:
            raise RatioError(
                f"ratios must sum to 1, got {self.train + self.val + self.test}"
            )


def _shuffle_slice(
    records: Sequence[NameRecord], ratios: SplitRatios, rng: np.random.Generator
) -> tuple[list[NameRecord], list[NameRecord], list[NameRecord]]:
    n = len(records)
    order = rng.permutation(n)
    shuffled = [records[int(i)] for i in order]
    i = math.floor(n * ratios.train)
    j = math.floor(n * (ratios.train + ratios.val))
    return shuffled[:i], shuffled[i:j], shuffled[j:]


def split_dataset(
    records: Sequence[NameRecord],
    ratios: SplitRatios,
    seed: int = 42,
    stratify: bool = True,
) -> tuple[list[NameRecord], list[NameRecord], list[NameRecord]]:
    """Seeded shuffle then contiguous slicing into train/val/test.

    With ``stratify`` the shuffle-and-slice runs per gender and the
    slices are concatenated (female block first), keeping each split's
    gender balance within one record of the corpus balance.
    """
    if not records:
        raise EmptyInputError("cannot split an empty record list")
    rng = _rng(seed)
    if not stratify:
        return _shuffle_slice(records, ratios, rng)
    train: list[NameRecord] = []
    val: list[NameRecord] = []
    test: list[NameRecord] = []
    for gender in GENDERS:
        subset = [r for r in records if r.gender is gender]
        if not subset:
            continue
        tr, va, te = _shuffle_slice(subset, ratios, rng)
        train.extend(tr)
        val.extend(va)
        test.extend(te)
    return train, val, test


@dataclass
class HomonymHistogram:
    """Per gender: distinct-kanji-expression count -> number of romaji names."""

    female: dict[int, int] = field(default_factory=dict)
    male: dict[int, int] = field(default_factory=dict)

    def for_gender(self, gender: Gender) -> dict[int, int]:
        return self.female if gender is Gender.FEMALE else self.male


def homonym_stats(
    records: Sequence[NameRecord], aligner: Optional[RecordAligner] = None
) -> HomonymHistogram:
    """Histogram of kanji spellings per romaji first name, per gender.

    Records whose scripts cannot be aligned into parts are skipped.
    """
    if aligner is None:
        aligner = RecordAligner(records)
    expressions: dict[tuple[Gender, str], set[str]] = defaultdict(set)
    for record, aligned in zip(records, aligner.aligned):
        if aligned is None:
            continue
        first = normalize_romaji(record.romaji).split(" ")[1]
        expressions[(record.gender, first)].add(aligned.kanji_given)
    hist = HomonymHistogram()
    for (gender, _first), kanji_set in expressions.items():
        table = hist.for_gender(gender)
        k = len(kanji_set)
        table[k] = table.get(k, 0) + 1
    return hist


def char_frequency(
    records: Sequence[NameRecord],
    gender: Gender,
    part: NamePart = NamePart.FIRST,
    aligner: Optional[RecordAligner] = None,
) -> list[tuple[str, int]]:
    """Kanji character counts over one gender's name parts.

    Sorted by count descending, ties by code point ascending.  ``FULL``
    counts the whole kanji column; first/last need script alignment and
    skip unalignable records.
    """
    counts: Counter = Counter()
    if part is NamePart.FULL:
        for record in records:
            if record.gender is gender:
                counts.update(record.kanji)
    else:
        if aligner is None:
            aligner = RecordAligner(records)
        for record, aligned in zip(records, aligner.aligned):
            if record.gender is not gender or aligned is None:
                continue
            counts.update(
                aligned.kanji_given if part is NamePart.FIRST else aligned.kanji_family
            )
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))


def gender_balance(records: Sequence[NameRecord]) -> dict[str, float]:
    """Fraction of records per gender label."""
    counts = Counter(r.gender for r in records)
    total = len(records)
    return {g.value: counts.get(g, 0) / total if total else 0.0 for g in GENDERS}


def write_metadata(path: str | Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_homonym_csv(path: str | Path, table: dict[int, int]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("key,count\n")
        for k in sorted(table):
            fh.write(f"{k},{table[k]}\n")


def write_char_csv(path: str | Path, items: Sequence[tuple[str, int]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("char,count\n")
        for char, count in items:
            fh.write(f"{char},{count}\n")
