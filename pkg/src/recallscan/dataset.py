"""Merge, clean and persist the canonical 7-column recall dataset."""

from __future__ import annotations

import csv
import datetime as dt
import io
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import FormatError

DATASET_HEADER = (
    "product_code",
    "event_date_posted",
    "recalling_firm",
    "root_cause_description",
    "product_quantity",
    "device_name",
    "device_class",
)

DEVICE_CLASSES = ("1", "2", "3")
UNKNOWN_DEVICE_CLASS = "unknown"

# Characters preserved by the cleaning pass, beyond letters/digits/space.
# These all occur inside legitimate FDA category names and firm names.
ALLOWED_PUNCTUATION = set("/,()-.")


@dataclass(frozen=True)
class RecallRecord:
    """One cleaned, merged recall event."""

    product_code: str
    event_date_posted: dt.date | None
    recalling_firm: str
    root_cause_description: str
    product_quantity: str
    device_name: str
    device_class: str


@dataclass
class MergeStats:
    """Join statistics reported by merge_datasets."""

    duplicate_classification_codes: int = 0
    unmatched_product_codes: int = 0


@dataclass
class CleaningRules:
    """Date window used by the outlier rule (the configured fetch range)."""

    date_from: dt.date
    date_to: dt.date


@dataclass
class CleaningReport:
    """Removal counters, one per cleaning rule."""

    dropped_null_root_cause: int = 0
    dropped_duplicates: int = 0
    dropped_date_outliers: int = 0
    stripped_char_count: int = 0
    unmatched_product_codes: int = 0

    def to_dict(self) -> dict:
        return {
            "dropped_null_root_cause": self.dropped_null_root_cause,
            "dropped_duplicates": self.dropped_duplicates,
            "dropped_date_outliers": self.dropped_date_outliers,
            "stripped_char_count": self.stripped_char_count,
            "unmatched_product_codes": self.unmatched_product_codes,
        }


def parse_date(value: str) -> dt.date | None:
    """Accept YYYY-MM-DD or YYYYMMDD; anything else is an absent date."""
    for fmt in ("%Y-%m-%d", "%Y%m%d"):
        try:
            return dt.datetime.strptime(value, fmt).date()
        except ValueError:
            continue
    return None


def merge_datasets(
    recalls: list[dict], classifications: list[dict]
) -> tuple[list[RecallRecord], MergeStats]:
    """Join recall records to device name/class on product_code.

    The first classification entry per code wins (page order); later
    duplicates only bump the warning counter. Unmatched codes get an empty
    device name and the unknown class. Recall order and count are preserved;
    unmatched_product_codes counts distinct codes.
    """
    lookup: dict[str, tuple[str, str]] = {}
    stats = MergeStats()
    for entry in classifications:
        code = entry.get("product_code", "")
        if code in lookup:
            stats.duplicate_classification_codes += 1
            continue
        raw_class = entry.get("device_class", "")
        device_class = raw_class if raw_class in DEVICE_CLASSES else UNKNOWN_DEVICE_CLASS
        lookup[code] = (entry.get("device_name", ""), device_class)

    records: list[RecallRecord] = []
    unmatched: set[str] = set()
    for entry in recalls:
        code = entry.get("product_code", "")
        if code in lookup:
            device_name, device_class = lookup[code]
        else:
            unmatched.add(code)
            device_name, device_class = "", UNKNOWN_DEVICE_CLASS
        records.append(
            RecallRecord(
                product_code=code,
                event_date_posted=parse_date(entry.get("event_date_posted", "")),
                recalling_firm=entry.get("recalling_firm", ""),
                root_cause_description=entry.get("root_cause_description", ""),
                product_quantity=entry.get("product_quantity", ""),
                device_name=device_name,
                device_class=device_class,
            )
        )
    stats.unmatched_product_codes = len(unmatched)
    return records, stats


def _strip_text(s: str) -> tuple[str, int]:
    kept = [ch for ch in s if ch.isalnum() or ch == " " or ch in ALLOWED_PUNCTUATION]
    return "".join(kept), len(s) - len(kept)


def clean(
    records: list[RecallRecord], rules: CleaningRules
) -> tuple[list[RecallRecord], CleaningReport]:
    """Apply the cleaning rules in order and report removals per rule.

    Rules: strip disallowed characters from the text fields, drop records
    whose stripped root cause is empty, drop exact duplicates (all seven
    fields, first occurrence kept), drop records dated outside the rules
    window (absent dates count as outside). Survivor order follows input
    order, and the pass is idempotent.
    """
    report = CleaningReport()
    survivors: list[RecallRecord] = []
    seen: set[RecallRecord] = set()
    for rec in records:
        stripped = {}
        removed = 0
        for field_name in (
            "product_code",
            "recalling_firm",
            "root_cause_description",
            "product_quantity",
            "device_name",
        ):
            value, n = _strip_text(getattr(rec, field_name))
            stripped[field_name] = value
            removed += n
        report.stripped_char_count += removed
        if not stripped["root_cause_description"].strip():
            report.dropped_null_root_cause += 1
            continue
        cleaned = replace(rec, **stripped)
        if cleaned in seen:
            report.dropped_duplicates += 1
            continue
        seen.add(cleaned)
        date = cleaned.event_date_posted
        if date is None or not rules.date_from <= date <= rules.date_to:
            report.dropped_date_outliers += 1
            continue
        survivors.append(cleaned)
    return survivors, report


def _record_row(rec: RecallRecord) -> list[str]:
    return [
        rec.product_code,
        rec.event_date_posted.isoformat() if rec.event_date_posted else "",
        rec.recalling_firm,
        rec.root_cause_description,
        rec.product_quantity,
        rec.device_name,
        rec.device_class,
    ]


def write_dataset(records: list[RecallRecord], path: str | Path) -> None:
    """Write the canonical CSV (UTF-8, RFC-4180 quoting, CRLF rows)."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(DATASET_HEADER)
    for rec in records:
        writer.writerow(_record_row(rec))
    Path(path).write_bytes(buf.getvalue().encode("utf-8"))


def read_dataset(path: str | Path) -> list[RecallRecord]:
    """Read a canonical CSV back; raises FormatError on a wrong header."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise FormatError(f"cannot read dataset {path}: {exc}") from exc
    if not rows or tuple(rows[0]) != DATASET_HEADER:
        raise FormatError(f"dataset {path} does not carry the expected header")
    records = []
    for idx, row in enumerate(rows[1:], start=2):
        if len(row) != len(DATASET_HEADER):
            raise FormatError(f"dataset {path} row {idx} has {len(row)} fields")
        records.append(
            RecallRecord(
                product_code=row[0],
                event_date_posted=dt.date.fromisoformat(row[1]) if row[1] else None,
                recalling_firm=row[2],
                root_cause_description=row[3],
                product_quantity=row[4],
                device_name=row[5],
                device_class=row[6],
            )
        )
    return records
