"""
Run configuration: environment, logging and JSON config documents.

A run config is one JSON object; a corpus is a JSON array of them. Infinite
exponents are written as the string "inf".
"""

import json
import logging
import math
import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from dotenv import load_dotenv

from .criteria import CriterionGrid
from .defaults import (
    B_GRID_ANGLES,
    B_GRID_RADII,
    B_GRID_RADIUS,
    DEFAULT_LOG_LEVEL,
    DEFAULT_OUT_DIR,
    FAMILY_ANGLES,
    FAMILY_MONOMIALS,
    FAMILY_RADII,
    FAMILY_RADIUS,
    MAX_TOL,
    MIN_TOL,
    PROBE_DOUBLINGS,
    TRANSFORM_TOL,
)
from .errors import ConfigError, SymbolSyntaxError
from .fock import FockParams
from .operators import FamilySpec, OperatorKind, SymbolPair

logger = logging.getLogger(__name__)

# .env at the repository root
ENV_PATH = Path(__file__).parent.parent.parent / ".env"


def load_environment(env_path: Path = ENV_PATH) -> None:
    """Load FOCKBENCH_* variables from the .env file, if present."""
    load_dotenv(dotenv_path=env_path)


def configure_logging(level: Optional[str] = None) -> None:
    """Configure the root logger once; level falls back to FOCKBENCH_LOG_LEVEL."""
    name = (level or os.getenv("FOCKBENCH_LOG_LEVEL") or DEFAULT_LOG_LEVEL).upper()
    numeric = getattr(logging, name, None)
    if not isinstance(numeric, int):
        logger.warning("Unknown log level %r, using %s", name, DEFAULT_LOG_LEVEL)
        numeric = getattr(logging, DEFAULT_LOG_LEVEL)
    logging.basicConfig(
        level=numeric,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def default_out_dir() -> str:
    return os.getenv("FOCKBENCH_OUT", DEFAULT_OUT_DIR)


@dataclass
class RunConfig:
    """
    One verdict run.

    radii/angles/W/monomials shape the empirical test family; the b_* fields
    shape the w-grid of the Berezin transform; probes is the number of
    doubling radii.
    """

    op: OperatorKind
    g: str
    psi: str = "z"
    alpha: float = 1.0
    p: float = 2.0
    q: float = 2.0
    radii: int = FAMILY_RADII
    angles: int = FAMILY_ANGLES
    W: float = FAMILY_RADIUS
    monomials: int = FAMILY_MONOMIALS
    b_radius: float = B_GRID_RADIUS
    b_radii: int = B_GRID_RADII
    b_angles: int = B_GRID_ANGLES
    probes: int = PROBE_DOUBLINGS
    tol: float = TRANSFORM_TOL
    emit_field: Optional[str] = None
    counterpart: bool = False
    out: Optional[str] = None
    run_id: Optional[str] = None
    case_id: Optional[str] = None
    line: Optional[int] = field(default=None, compare=False, repr=False)

    def pair(self) -> SymbolPair:
        try:
            g = SymbolPair.from_text(self.g, "z").g
        except SymbolSyntaxError as exc:
            raise ConfigError(str(exc), "g", self.line) from exc
        try:
            psi = SymbolPair.from_text("1", self.psi).psi
        except SymbolSyntaxError as exc:
            raise ConfigError(str(exc), "psi", self.line) from exc
        return SymbolPair(g, psi)

    def params(self) -> FockParams:
        try:
            return FockParams(self.alpha, self.p, self.q)
        except ValueError as exc:
            raise ConfigError(str(exc), "alpha/p/q", self.line) from exc

    def family(self) -> FamilySpec:
        return FamilySpec(self.W, self.radii, self.angles, self.monomials)

    def grid(self) -> CriterionGrid:
        return CriterionGrid(
            w_radius=self.b_radius,
            w_radii=self.b_radii,
            w_angles=self.b_angles,
            probe_count=self.probes,
            tol=self.tol,
        )

    def validate(self) -> "RunConfig":
        self.pair()
        self.params()
        if not MIN_TOL < self.tol < MAX_TOL:
            raise ConfigError(f"tol must lie in ({MIN_TOL}, {MAX_TOL})", "tol", self.line)
        for name in ("radii", "angles", "b_radii", "b_angles", "probes"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1", name, self.line)
        if self.probes < 2:
            raise ConfigError("at least two doubling probes are needed", "probes", self.line)
        return self

    def canonical(self) -> Dict[str, Any]:
        """Config echo: everything that affects the numbers, exponents as strings when infinite."""
        data = asdict(self)
        for key in ("out", "line"):
            data.pop(key)
        data["op"] = self.op.value
        for key in ("p", "q"):
            data[key] = "inf" if math.isinf(data[key]) else data[key]
        return data

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """Copy with non-None overrides applied; flags win over file values."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


_NUMBER_FIELDS = {"alpha", "W", "tol", "b_radius"}
_INT_FIELDS = {"radii", "angles", "monomials", "b_radii", "b_angles", "probes"}
_TEXT_FIELDS = {"g", "psi", "out", "run_id", "case_id", "emit_field"}


def parse_exponent(value: Any, name: str, line: Optional[int] = None) -> float:
    """A positive exponent, or "inf"."""
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity"):
            return math.inf
        raise ConfigError(f"expected a number or \"inf\", got {value!r}", name, line)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number or \"inf\", got {value!r}", name, line)
    return float(value)


def config_from_dict(data: Dict[str, Any], line: Optional[int] = None) -> RunConfig:
    """
    Build and validate a RunConfig.

    Raises:
        ConfigError: unknown or malformed field, unparseable symbol, bad exponent
    """
    if not isinstance(data, dict):
        raise ConfigError("a run config must be a JSON object", "<document>", line)
    known = {f.name for f in fields(RunConfig)} - {"line"}
    for key in data:
        if key not in known:
            raise ConfigError(f"unknown field {key!r}", key, line)
    for required in ("op", "g"):
        if required not in data:
            raise ConfigError("missing required field", required, line)
    try:
        op = OperatorKind(data["op"])
    except ValueError as exc:
        choices = ", ".join(k.value for k in OperatorKind)
        raise ConfigError(f"unknown operator {data['op']!r}; expected one of {choices}", "op", line) from exc

    kwargs: Dict[str, Any] = {"op": op, "line": line}
    for key, value in data.items():
        if key == "op":
            continue
        if key in ("p", "q"):
            kwargs[key] = parse_exponent(value, key, line)
        elif key in _NUMBER_FIELDS:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"expected a number, got {value!r}", key, line)
            kwargs[key] = float(value)
        elif key in _INT_FIELDS:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"expected an integer, got {value!r}", key, line)
            kwargs[key] = value
        elif key in _TEXT_FIELDS:
            if value is not None and not isinstance(value, str):
                raise ConfigError(f"expected a string, got {value!r}", key, line)
            kwargs[key] = value
        elif key == "counterpart":
            kwargs[key] = bool(value)
    return RunConfig(**kwargs).validate()


def _read_json(path: Path) -> Tuple[str, Any]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}", "<file>") from exc
    try:
        return text, json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", "<document>", exc.lineno) from exc


def load_config(path: Path) -> RunConfig:
    _, data = _read_json(path)
    return config_from_dict(data, line=1)


@dataclass
class CorpusEntry:
    """One corpus case: a config, or the error that stopped it from parsing."""

    case_id: str
    config: Optional[RunConfig] = None
    error: Optional[ConfigError] = None


def _element_lines(text: str) -> List[int]:
    """Line on which each top-level array element starts."""
    decoder = json.JSONDecoder()
    index = text.index("[") + 1
    lines = []
    while True:
        while index < len(text) and text[index] in " \t\r\n,":
            index += 1
        if index >= len(text) or text[index] == "]":
            return lines
        lines.append(text.count("\n", 0, index) + 1)
        _, index = decoder.raw_decode(text, index)


def load_corpus(path: Path) -> List[CorpusEntry]:
    """
    Parse a corpus file. A malformed case becomes an entry carrying its
    ConfigError; only an unreadable document raises.
    """
    text, data = _read_json(path)
    if not isinstance(data, list):
        raise ConfigError("a corpus must be a JSON array", "<document>", 1)
    lines = _element_lines(text)
    entries = []
    for index, (item, line) in enumerate(zip(data, lines)):
        default_id = f"case{index:03d}"
        case_id = item.get("case_id", default_id) if isinstance(item, dict) else default_id
        try:
            config = config_from_dict(item, line)
        except ConfigError as exc:
            logger.warning("corpus case %s: %s", case_id, exc)
            entries.append(CorpusEntry(str(case_id), error=exc))
            continue
        if config.case_id is None:
            config.case_id = str(case_id)
        entries.append(CorpusEntry(str(case_id), config))
    return entries
