"""Command-line front end: compare, merge, enumerate, validate, bench, serve."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .compare import DEFAULT_MODE_THRESHOLD, DEFAULT_NAME_THRESHOLD, compute_cee
from .logic import CapExceeded, enumerate_configurations
from .merge import (
    AUTO_STRATEGIES,
    Choice,
    MergeStrategy,
    SessionError,
    auto_integrate,
    finalize,
    integrate,
    resolve,
    start_session,
)
from .model import FeatureModel, Severity, preorder, validate
from .report import format_score, render_report
from .xmlio import DiagnosticSeverity, parse_xml, serialize_xml

EXIT_OK = 0
EXIT_MODEL_ERROR = 1
EXIT_USAGE = 2


def _default_theta() -> float:
    raw = os.environ.get("FMIT_THRESHOLD")
    if raw is None:
        return DEFAULT_MODE_THRESHOLD
    try:
        return float(raw)
    except ValueError:
        print(f"warning: ignoring non-numeric FMIT_THRESHOLD={raw!r}", file=sys.stderr)
        return DEFAULT_MODE_THRESHOLD


def _load_model(path: str) -> FeatureModel:
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise CliModelError(f"{path}: {exc}") from exc
    result = parse_xml(data, model_name=p.stem)
    for d in result.diagnostics:
        print(f"{path}: {d.severity.value}: {d.location}: {d.message}", file=sys.stderr)
    if result.model is None:
        raise CliModelError(f"{path}: not a valid feature model")
    return result.model


class CliModelError(Exception):
    pass


def _report_json(report, conflicts) -> dict:
    return {
        "estsin": report.estsin,
        "estsem": report.estsem,
        "estest": report.estest,
        "cee": report.cee,
        "syntactic_vector": list(report.syntactic_vector),
        "semantic_vector": list(report.semantic_vector),
        "structural_vector": list(report.structural_vector),
        "f_denominator": report.f_denominator,
        "c_denominator": report.c_denominator,
        "mode": report.recommended_mode.value,
        "conflicts": [
            {
                "id": c.id,
                "kind": c.kind.value,
                "base_value": c.base_value,
                "other_value": c.other_value,
                "resolvable": c.resolvable,
            }
            for c in conflicts
        ],
    }


def cmd_compare(args) -> int:
    base = _load_model(args.base)
    other = _load_model(args.other)
    session = start_session(base, other, args.tau, args.threshold)
    if args.json:
        print(json.dumps(_report_json(session.report, session.conflicts), indent=2))
    doc = render_report(session.report, session.conflicts, base, other)
    if args.report:
        Path(args.report).write_text(doc.text(), encoding="utf-8")
    elif not args.json:
        print(doc.text(), end="")
    return EXIT_OK


def _parse_decisions(path: str) -> dict[int, Choice]:
    choices = {
        "b": Choice.KEEP_BASE,
        "base": Choice.KEEP_BASE,
        "keep_base": Choice.KEEP_BASE,
        "o": Choice.KEEP_OTHER,
        "other": Choice.KEEP_OTHER,
        "keep_other": Choice.KEEP_OTHER,
    }
    out: dict[int, Choice] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2 or parts[1].lower() not in choices:
            raise CliModelError(f"{path}:{lineno}: expected '<conflictId> <b|o>' lines")
        out[int(parts[0])] = choices[parts[1].lower()]
    return out


def _prompt_choice(conflict) -> Choice:
    while True:
        answer = input(
            f"Conflict #{conflict.id} [{conflict.kind.value}] "
            f"base={conflict.base_value!r} other={conflict.other_value!r} "
            "- keep (b)ase or (o)ther? "
        ).strip().lower()
        if answer in ("b", "base"):
            return Choice.KEEP_BASE
        if answer in ("o", "other"):
            return Choice.KEEP_OTHER
        print("Invalid choice, answer 'b' or 'o'.")


def cmd_merge(args) -> int:
    base = _load_model(args.base)
    other = _load_model(args.other)
    session = start_session(base, other, args.tau, args.threshold)

    if args.mode == "auto":
        out_stem = args.out or f"{Path(args.base).stem}_{Path(args.other).stem}"
        matching = session.report.matching
        if args.strategy:
            strategy = MergeStrategy(args.strategy)
            merged = integrate(base, other, matching, strategy)
            path = Path(args.out) if args.out else Path(f"{out_stem}_{strategy.value}.xml")
            path.write_bytes(serialize_xml(merged))
            print(path)
        else:
            for strategy, merged in zip(AUTO_STRATEGIES, auto_integrate(base, other, matching)):
                path = Path(f"{out_stem}_{strategy.value}.xml")
                path.write_bytes(serialize_xml(merged))
                print(path)
        return EXIT_OK

    decisions = _parse_decisions(args.decisions) if args.decisions else None
    for conflict in session.conflicts:
        if not conflict.resolvable:
            continue
        if decisions is not None:
            if conflict.id not in decisions:
                raise CliModelError(f"decisions file lacks an entry for conflict {conflict.id}")
            choice = decisions[conflict.id]
        else:
            choice = _prompt_choice(conflict)
        session = resolve(session, conflict.id, choice)
    session = finalize(session)
    merged = session.merged_model
    out = Path(args.out) if args.out else Path(
        f"{Path(args.base).stem}_{Path(args.other).stem}_merged.xml"
    )
    out.write_bytes(serialize_xml(merged))
    doc = render_report(
        session.report, session.conflicts, base, other, merged, session.post_report
    )
    report_path = out.with_name(doc.default_filename())
    report_path.write_text(doc.text(), encoding="utf-8")
    print(out)
    print(report_path)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    model = _load_model(args.model)
    try:
        configs = enumerate_configurations(model, cap=args.max)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL_ERROR
    print(f"{len(configs)} configurations")
    for cfg in configs:
        print("{" + ", ".join(sorted(cfg.selected)) + "}")
    return EXIT_OK


def cmd_validate(args) -> int:
    p = Path(args.model)
    result = parse_xml(p.read_bytes(), model_name=p.stem)
    has_error = False
    for d in result.diagnostics:
        print(f"{d.severity.value}: {d.location}: {d.message}")
        has_error = has_error or d.severity is DiagnosticSeverity.ERROR
    if result.model is not None:
        for v in validate(result.model):
            print(f"{v.severity.value}: {v.subject}: {v.message}")
            has_error = has_error or v.severity is Severity.ERROR
    if not has_error:
        print("ok")
    return EXIT_MODEL_ERROR if has_error else EXIT_OK


def cmd_bench(args) -> int:
    directory = Path(args.scenarios)
    pairs = sorted(directory.glob("*_base.xml"))
    if not pairs:
        print(f"error: no '*_base.xml' fixtures in {directory}", file=sys.stderr)
        return EXIT_MODEL_ERROR
    for base_path in pairs:
        other_path = base_path.with_name(base_path.name.replace("_base.xml", "_other.xml"))
        if not other_path.exists():
            print(f"warning: {base_path.name} has no counterpart, skipped", file=sys.stderr)
            continue
        base = _load_model(str(base_path))
        other = _load_model(str(other_path))
        session = start_session(base, other, args.tau, args.threshold)
        name = base_path.name.removesuffix("_base.xml")
        print(
            f"{name}: conflicts={len(session.conflicts)} "
            f"cee={format_score(session.report.cee)} "
            f"mode={session.report.recommended_mode.value}"
        )
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(ui_dir=args.ui_dir, allow_cors=args.open_cors)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fmit", description="Feature-model comparison and integration")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tau", type=float, default=DEFAULT_NAME_THRESHOLD,
                       help="name-matching threshold in (0,1]")
        p.add_argument("--threshold", type=float, default=_default_theta(),
                       help="automatic/semi-automatic dispatch threshold")

    p = sub.add_parser("compare", help="compare two models and report scores")
    p.add_argument("base")
    p.add_argument("other")
    p.add_argument("--report", help="write the text report to this path")
    p.add_argument("--json", action="store_true", help="print scores as JSON")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("merge", help="integrate two models")
    p.add_argument("base")
    p.add_argument("other")
    p.add_argument("--mode", choices=["auto", "semi"], required=True)
    p.add_argument("--strategy",
                   choices=[s.value for s in MergeStrategy if s is not MergeStrategy.NULL])
    p.add_argument("--decisions", help="file of '<conflictId> <b|o>' lines for scripted runs")
    p.add_argument("--out", help="output path (auto without --strategy derives names from it)")
    common(p)
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("enumerate", help="list valid configurations")
    p.add_argument("model")
    p.add_argument("--max", type=int, default=1_000_000)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("validate", help="check a model file")
    p.add_argument("model")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="run scenario fixtures")
    p.add_argument("--scenarios", required=True, help="directory of *_base.xml/*_other.xml pairs")
    common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8087)
    p.add_argument("--ui-dir", default=None, help="directory with the built UI bundle")
    p.add_argument("--open-cors", action="store_true", help="allow cross-origin requests")
    p.set_defaults(func=cmd_serve)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliModelError, SessionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
