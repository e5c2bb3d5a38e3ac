"""
Verdict pipeline and corpus runs.

A verdict run is a LangGraph workflow over a VerdictState:

    classify -> theorem -> cross_check -> persist

classify tries the exact symbol-class rules, theorem runs the matching
criterion when no exact answer exists, cross_check attaches the empirical norm
and the compactness probe, persist writes the record.
"""

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from langgraph.graph import END, StateGraph
from typing_extensions import TypedDict

from .. import __version__
from .config import CorpusEntry, RunConfig, load_corpus
from .criteria import (
    CRITERION_FIELDS,
    NEGATIVE,
    POSITIVE,
    Verdict,
    VerdictPair,
    classify_special,
    criterion_field,
    norm_window,
    verdict_theorem1,
    verdict_theorem2,
)
from .defaults import DECAY_FACTOR
from .errors import CertificateError, ConfigError, ConvergenceError, DomainError, FockbenchError
from .fock import FockParams
from .operators import (
    OperatorKind,
    SymbolPair,
    compactness_probe,
    counterpart_check,
    empirical_norm,
    probe_radii,
)
from .records import (
    config_hash,
    find_record,
    make_json_safe,
    run_id_for,
    store_record,
    write_field_csv,
    write_summary_csv,
)

logger = logging.getLogger(__name__)

# Operators decided by the criteria; J_g and M_g share the J_(g, z) criterion
_THEOREM_OPERATORS = {
    OperatorKind.J_G_PSI: OperatorKind.J_G_PSI,
    OperatorKind.C_G_PSI: OperatorKind.C_G_PSI,
    OperatorKind.JG: OperatorKind.J_G_PSI,
    OperatorKind.MG: OperatorKind.J_G_PSI,
}

SUMMARY_COLUMNS = (
    "case_id",
    "op",
    "route",
    "bounded",
    "compact",
    "sup",
    "integral",
    "empirical",
    "witness",
    "error",
)


class VerdictState(TypedDict):
    """
    State for the verdict workflow.

    verdict stays None until classify or theorem settles it; for operators the
    criteria do not cover, cross_check derives it from the empirical numbers.
    """
    config: RunConfig
    pair: SymbolPair
    params: FockParams
    route: str
    verdict: Optional[VerdictPair]
    cross_check: Dict[str, Any]
    record: Dict[str, Any]
    out_dir: Optional[str]
    started: float


def classify_node(state: VerdictState) -> VerdictState:
    """Exact answers from symbol classes."""
    config = state["config"]
    verdict = classify_special(config.op, state["pair"], state["params"])
    if verdict is not None:
        state["verdict"] = verdict
        state["route"] = verdict.bounded.route
        logger.info("%s: exact route %s", run_id_for(config), state["route"])
    return state


def theorem_node(state: VerdictState) -> VerdictState:
    """Bounded-kernel criteria for p <= q, tail integrability for q < p."""
    if state["verdict"] is not None:
        return state
    config = state["config"]
    params = state["params"]
    op = _THEOREM_OPERATORS.get(config.op)
    if op is None:
        state["route"] = "empirical"
        return state
    pair = state["pair"]
    if config.op in (OperatorKind.JG, OperatorKind.MG):
        pair = SymbolPair(pair.g)
    if params.theorem == "theorem1":
        state["verdict"] = verdict_theorem1(op, pair, params, config.grid())
    else:
        state["verdict"] = verdict_theorem2(op, pair, params, config.grid())
    state["route"] = state["verdict"].bounded.route
    return state


def _empirical_verdict(cross: Dict[str, Any]) -> VerdictPair:
    values = [v for _, v in cross["compactness"]["table"]]
    growing = (
        all(b > a for a, b in zip(values, values[1:]))
        and values[0] > 0
        and values[-1] >= DECAY_FACTOR * values[0]
    )
    diagnostics = {"empirical": cross["empirical"]["value"], "decay_table": values}
    if cross["empirical"]["diverges"] or growing or cross["compactness"]["diverges"]:
        bounded = compact = NEGATIVE
    else:
        bounded = POSITIVE
        compact = POSITIVE if cross["compactness"]["decaying"] else NEGATIVE
    return VerdictPair(
        Verdict("bounded", "empirical", bounded, dict(diagnostics)),
        Verdict("compact", "empirical", compact, dict(diagnostics)),
    )


def cross_check_node(state: VerdictState) -> VerdictState:
    """Empirical lower bound on the norm and the kernel compactness probe."""
    config, pair, params = state["config"], state["pair"], state["params"]
    empirical = empirical_norm(config.op, pair, params, config.family(), config.tol)
    probe = compactness_probe(config.op, pair, params, probe_radii(count=config.probes), config.tol)
    cross: Dict[str, Any] = {
        "empirical": {"value": empirical.value, "witness": empirical.witness, "diverges": empirical.diverges},
        "compactness": {"decaying": probe.decaying, "table": probe.table, "diverges": probe.diverges},
    }
    if state["verdict"] is None:
        state["verdict"] = _empirical_verdict(cross)
    verdict = state["verdict"]
    if not empirical.diverges:
        cross["window"] = norm_window(verdict, params, empirical.value)
    if config.counterpart and config.op in (OperatorKind.J_G_PSI, OperatorKind.C_G_PSI) and verdict.bounded.positive:
        report = counterpart_check(config.op, pair, params, config.family(), config.tol)
        cross["counterpart"] = {
            "companion": report.companion.value,
            "counterpart": report.counterpart.value,
            "ratio": report.ratio,
        }
    state["cross_check"] = cross
    return state


def persist_node(state: VerdictState) -> VerdictState:
    """Assemble the record; write it (and the optional field CSV) when an output directory is set."""
    config = state["config"]
    verdict = state["verdict"]
    record: Dict[str, Any] = {
        "tool_version": __version__,
        "run_id": run_id_for(config),
        "config": config.canonical(),
        "config_hash": config_hash(config),
        "route": state["route"],
        "verdict": verdict.to_dict() if verdict else None,
        "cross_check": state["cross_check"],
    }
    out_dir = state["out_dir"]
    if config.emit_field and out_dir:
        try:
            samples = criterion_field(config.emit_field, state["pair"], state["params"])
        except DomainError as exc:
            logger.warning("%s: field %s skipped: %s", record["run_id"], config.emit_field, exc)
            record["field_error"] = str(exc)
        else:
            path = write_field_csv(samples.rows(), Path(out_dir) / f"{record['run_id']}_{config.emit_field}.csv")
            record["field_csv"] = path.name
    record["wall_time"] = time.perf_counter() - state["started"]
    record = make_json_safe(record)
    if out_dir:
        store_record(record, Path(out_dir))
    state["record"] = record
    return state


def create_verdict_graph():
    """
    Create the LangGraph workflow for one verdict run.

    Returns:
        Compiled StateGraph
    """
    workflow = StateGraph(VerdictState)

    workflow.add_node("classify", classify_node)
    workflow.add_node("theorem", theorem_node)
    workflow.add_node("cross_check", cross_check_node)
    workflow.add_node("persist", persist_node)

    workflow.set_entry_point("classify")
    workflow.add_edge("classify", "theorem")
    workflow.add_edge("theorem", "cross_check")
    workflow.add_edge("cross_check", "persist")
    workflow.add_edge("persist", END)

    return workflow.compile()


def run_verdict(config: RunConfig, out_dir: Optional[Path] = None, reuse: bool = False) -> Dict[str, Any]:
    """
    Run one config through the verdict workflow.

    Args:
        config: validated run configuration
        out_dir: where to store the record; None keeps it in memory
        reuse: return a stored record with the same config hash instead of recomputing

    Returns:
        The record as plain JSON data

    Raises:
        ConfigError: symbols or exponents do not parse
        ConvergenceError, CertificateError: a numerical procedure failed hard
    """
    if config.emit_field and config.emit_field not in CRITERION_FIELDS:
        raise ConfigError(f"unknown criterion field {config.emit_field!r}", "emit_field", config.line)
    if reuse and out_dir is not None:
        stored = find_record(config, out_dir)
        if stored is not None:
            return stored
    initial_state = VerdictState(
        config=config,
        pair=config.pair(),
        params=config.params(),
        route="",
        verdict=None,
        cross_check={},
        record={},
        out_dir=str(out_dir) if out_dir is not None else None,
        started=time.perf_counter(),
    )
    graph = create_verdict_graph()
    result = graph.invoke(initial_state)
    return result["record"]


@dataclass
class SuiteSummary:
    rows: List[Dict[str, Any]] = field(default_factory=list)
    summary_path: Optional[Path] = None

    @property
    def hard_failures(self) -> int:
        return sum(1 for row in self.rows if row["route"] == "numeric-error")

    @property
    def exit_code(self) -> int:
        return 2 if self.hard_failures else 0


def summary_row(case_id: str, record: Dict[str, Any]) -> Dict[str, Any]:
    verdict = record.get("verdict") or {}
    bounded = verdict.get("bounded", {})
    compact = verdict.get("compact", {})
    diagnostics = bounded.get("diagnostics", {})
    empirical = record.get("cross_check", {}).get("empirical", {})
    return {
        "case_id": case_id,
        "op": record["config"]["op"],
        "route": record["route"],
        "bounded": bounded.get("outcome", ""),
        "compact": compact.get("outcome", ""),
        "sup": diagnostics.get("sup", ""),
        "integral": diagnostics.get("integral", ""),
        "empirical": empirical.get("value", ""),
        "witness": empirical.get("witness", ""),
        "error": "",
    }


def _error_row(case_id: str, kind: str, exc: Exception, op: str = "") -> Dict[str, Any]:
    row = {column: "" for column in SUMMARY_COLUMNS}
    row.update(case_id=case_id, op=op, route=kind, bounded=kind, compact=kind, error=str(exc))
    return row


def run_suite(entries: Sequence[CorpusEntry], out_dir: Optional[Path] = None) -> SuiteSummary:
    """
    Run every case; one failing case never stops the others.

    Rows are sorted by case id. Unparseable cases and arguments outside an
    operation's domain become 'config-error' rows, hard numerical failures
    'numeric-error' rows.
    """
    rows = []
    for entry in entries:
        if entry.error is not None:
            rows.append(_error_row(entry.case_id, "config-error", entry.error))
            continue
        config = entry.config
        try:
            record = run_verdict(config, out_dir)
        except (ConfigError, DomainError) as exc:
            logger.warning("case %s: %s", entry.case_id, exc)
            rows.append(_error_row(entry.case_id, "config-error", exc, config.op.value))
            continue
        except (ConvergenceError, CertificateError, FockbenchError) as exc:
            logger.error("case %s failed: %s", entry.case_id, exc)
            rows.append(_error_row(entry.case_id, "numeric-error", exc, config.op.value))
            continue
        rows.append(summary_row(entry.case_id, record))
    rows.sort(key=lambda row: row["case_id"])
    summary = SuiteSummary(rows)
    if out_dir is not None:
        summary.summary_path = write_summary_csv(rows, SUMMARY_COLUMNS, Path(out_dir) / "summary.csv")
    return summary


def run_suite_file(path: Path, out_dir: Optional[Path] = None) -> SuiteSummary:
    return run_suite(load_corpus(path), out_dir)


# =============================================================================
# CONSOLE FORMATTING
# =============================================================================

def _short(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, list):
        return "[" + ", ".join(_short(v) for v in value) + "]"
    return str(value)


def format_verdict(record: Dict[str, Any]) -> str:
    """Human-readable verdict block."""
    config = record["config"]
    lines = [
        f"{config['op']}  g = {config['g']}  psi = {config['psi']}",
        f"alpha = {config['alpha']}  p = {config['p']}  q = {config['q']}",
        f"route: {record['route']}",
    ]
    verdict = record.get("verdict") or {}
    for question in ("bounded", "compact"):
        if question in verdict:
            lines.append(f"  {question:<8} {verdict[question]['outcome']}")
    diagnostics = verdict.get("bounded", {}).get("diagnostics", {})
    if diagnostics:
        lines.append("diagnostics:")
        for key in sorted(diagnostics):
            lines.append(f"  {key}: {_short(diagnostics[key])}")
    cross = record.get("cross_check", {})
    if "empirical" in cross:
        emp = cross["empirical"]
        lines.append(f"empirical norm >= {_short(emp['value'])} (witness {emp['witness']})")
    if "compactness" in cross:
        table = cross["compactness"]["table"]
        lines.append("kernel growth table:")
        for radius, value in table:
            lines.append(f"  |w| = {_short(radius):>6}   ||T k_w|| = {_short(value)}")
    if cross.get("window") is not None:
        lines.append(f"norm window: {_short(cross['window'])}")
    return "\n".join(lines)


def format_table(rows: Sequence[Dict[str, Any]], columns: Sequence[str]) -> str:
    """Fixed-width table of selected columns."""
    cells = [[_short(row.get(c, "")) for c in columns] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    header = "  ".join(c.ljust(w) for c, w in zip(columns, widths))
    rule = "-" * len(header)
    body = ["  ".join(v.ljust(w) for v, w in zip(r, widths)) for r in cells]
    return "\n".join([header, rule] + body)
