"""Plain-text report rendering.

Every data line carries the literal ``FMI – `` prefix; scores print with a
dot decimal separator and four half-up-rounded decimals so the file stays
machine-parsable.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from decimal import ROUND_HALF_UP, Decimal
from typing import Optional, Sequence

from .compare import ComparisonReport, IntegrationMode
from .merge import Choice, Conflict
from .model import FeatureModel, preorder

PREFIX = "FMI – "

_MODE_LABEL = {
    IntegrationMode.AUTOMATIC: "Automática",
    IntegrationMode.SEMI_AUTOMATIC: "Semiautomática",
}

_CHOICE_LABEL = {
    Choice.KEEP_BASE: "keep-base",
    Choice.KEEP_OTHER: "keep-other",
    None: "unresolved",
}


def format_score(x: float) -> str:
    """Round half-up to four decimals, with trailing zeros kept."""
    return str(Decimal(repr(x)).quantize(Decimal("0.0001"), rounding=ROUND_HALF_UP))


def _vector(values: Sequence[float]) -> str:
    return "[" + ", ".join(format_score(v) for v in values) + "]"


@dataclass(frozen=True)
class ReportDocument:
    lines: tuple[str, ...]
    inputs: tuple[str, str]
    timestamp: str

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"

    def default_filename(self) -> str:
        return f"{self.inputs[0]}_{self.inputs[1]}_fmit.txt"


def render_report(
    report: ComparisonReport,
    conflicts: Sequence[Conflict],
    base: FeatureModel,
    other: FeatureModel,
    merged: Optional[FeatureModel] = None,
    post_report: Optional[ComparisonReport] = None,
    timestamp: Optional[str] = None,
) -> ReportDocument:
    """Render comparison results, conflict decisions, and the merged model."""
    ts = timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds")
    lines: list[str] = []

    def put(text: str) -> None:
        lines.append(PREFIX + text)

    put(f"Gerado em: {ts}")
    put(f"Modelos de Entrada: {base.name}, {other.name}")
    put(f"Vetor de Comparação Estrutural: {_vector(report.structural_vector)}")
    put(f"Grau de Equivalência Estrutural: {format_score(report.estest)}")
    put(f"Vetor de Comparação Sintática: {_vector(report.syntactic_vector)}")
    put(f"Grau de Equivalência Sintática: {format_score(report.estsin)}")
    put(f"Vetor de Comparação Semântica: {_vector(report.semantic_vector)}")
    put(f"Grau de Equivalência Semântica: {format_score(report.estsem)}")
    put(f"Cálculo de Equivalência Global: {format_score(report.cee)}")
    put(f"Estratégia de Integração: {_MODE_LABEL[report.recommended_mode]}")
    put("Conflitos:")
    if not conflicts:
        put("none")
    for c in conflicts:
        decision = _CHOICE_LABEL[c.resolution] if c.resolvable else "report-only"
        put(
            f"Conflito #{c.id} [{c.kind.value}] "
            f"base={c.base_value!r} other={c.other_value!r} -> {decision}"
        )
    if merged is not None:
        names = ", ".join(merged.features[fid].name for fid in preorder(merged))
        put(f"Modelo de Feature Pretendido: [{names}]")
    if post_report is not None:
        put(f"Equivalência Pós-Integração: {format_score(post_report.cee)}")
    return ReportDocument(tuple(lines), (base.name, other.name), ts)
