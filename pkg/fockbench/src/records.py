"""
Run records on disk: canonical JSON, config hashes, CSV emission.

Records are stored one file per run id. Identical configs hash identically, so
a finished record can be reused instead of recomputed.
"""

import csv
import hashlib
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .config import RunConfig
from .defaults import CSV_DIGITS

logger = logging.getLogger(__name__)


def make_json_safe(obj: Any) -> Any:
    """
    Plain-JSON form of nested results.

    Complex numbers become [re, im]; non-finite floats become "inf", "-inf" or
    "nan"; numpy scalars and arrays become Python values and lists.
    """
    if isinstance(obj, dict):
        return {str(k): make_json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [make_json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return make_json_safe(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, np.complexfloating)):
        return make_json_safe(obj.item())
    if isinstance(obj, complex):
        return [make_json_safe(obj.real), make_json_safe(obj.imag)]
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, Path):
        return str(obj)
    return obj


def canonical_json(obj: Any) -> str:
    """Sorted keys, fixed separators, shortest round-trip float repr."""
    return json.dumps(make_json_safe(obj), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def config_hash(config: RunConfig) -> str:
    """SHA-256 of the canonical config echo."""
    return hashlib.sha256(canonical_json(config.canonical()).encode("utf-8")).hexdigest()


def run_id_for(config: RunConfig) -> str:
    return config.run_id or config.case_id or config_hash(config)[:12]


def store_record(record: Dict[str, Any], out_dir: Path) -> Path:
    """
    Write a record as canonical JSON to out_dir/<run_id>.json.

    Returns:
        Path of the written file
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{record['run_id']}.json"
    path.write_text(canonical_json(record), encoding="utf-8")
    logger.info("stored record %s", path)
    return path


def load_record(path: Path) -> Dict[str, Any]:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def find_record(config: RunConfig, out_dir: Path) -> Optional[Dict[str, Any]]:
    """A stored record whose config hash matches, or None."""
    wanted = config_hash(config)
    for record in retrieve_records(out_dir):
        if record.get("config_hash") == wanted:
            logger.debug("reusing record %s for hash %s", record.get("run_id"), wanted[:12])
            return record
    return None


def retrieve_records(out_dir: Path) -> List[Dict[str, Any]]:
    """All records in out_dir, sorted by run id. Non-record JSON files are skipped."""
    out_dir = Path(out_dir)
    if not out_dir.is_dir():
        return []
    records = []
    for path in sorted(out_dir.glob("*.json")):
        try:
            record = load_record(path)
        except (OSError, json.JSONDecodeError) as exc:
            logger.warning("skipping unreadable record %s: %s", path, exc)
            continue
        if isinstance(record, dict) and "run_id" in record:
            records.append(record)
    return sorted(records, key=lambda r: str(r["run_id"]))


def format_number(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{CSV_DIGITS}g}"
    return str(value)


def write_field_csv(rows: Iterable[Tuple[float, float, float]], path: Path) -> Path:
    """Columns re, im, value at 17 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["re", "im", "value"])
        for row in rows:
            writer.writerow([format_number(float(x)) for x in row])
    return path


def write_summary_csv(rows: Sequence[Dict[str, Any]], columns: Sequence[str], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_number(row.get(column, "")) for column in columns])
    return path
