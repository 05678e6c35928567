"""Command-line interface for value-based goal model analysis."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import canonical
from .analysis import (
    MissingPrioritiesError,
    explain,
    rank,
    run_analysis,
)
from .canonical import LoadError, canonical_dumps
from .fuzzy import Level
from .model import Prioritization, validate
from .pistar import PiStarParseError, import_pistar
from .propagation import InvalidModelError, PropagationConfig
from .store import SessionStore, SnapshotNotFoundError

EPOCH = "1970-01-01T00:00:00+00:00"

TABLE_COLUMNS = (
    "Name",
    "Importance",
    "Confidence",
    "Global",
    "Local",
    "Same actor",
    "Other actors",
)


class CliError(Exception):
    """Domain failure surfaced as exit code 1."""


def _lambda_arg(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid float: {text!r}") from None
    if not (0.0 < value < 1.0):
        raise argparse.ArgumentTypeError("lambda must be strictly between 0 and 1")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid float: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("value must be positive")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("value must be at least 1")
    return value


def _set_arg(text: str) -> tuple[str, Level, Level]:
    try:
        element, levels = text.split("=", 1)
        importance, confidence = levels.split(",", 1)
        return element, Level.from_label(importance), Level.from_label(confidence)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected <elementId>=<Importance>,<Confidence>: {exc}"
        ) from None


def _stakeholder_arg(text: str) -> tuple[str, Level]:
    try:
        actor, level = text.split("=", 1)
        return actor, Level.from_label(level)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected <actorId>=<Level>: {exc}"
        ) from None


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lambda", dest="lambda_", type=_lambda_arg, default=0.9,
                        help="damping factor in (0, 1)")
    parser.add_argument("--epsilon", type=_positive_float, default=1e-9,
                        help="convergence threshold")
    parser.add_argument("--max-iters", type=_positive_int, default=10000,
                        help="iteration cap")


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--deterministic", action="store_true",
                        help="fix timestamps for reproducible output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="goalvalue",
        description="Analyze goal models by value: fuzzy prioritization, "
        "impact propagation, and TOPSIS ranking.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("import", help="import a piStar JSON model")
    p.add_argument("pistar_file")
    p.add_argument("-o", "--output", help="canonical model file to write")
    _add_output_flags(p)

    p = sub.add_parser("validate", help="validate a canonical model file")
    p.add_argument("model_file")
    _add_output_flags(p)

    p = sub.add_parser("prioritize", help="edit prioritizations in a model file")
    p.add_argument("model_file")
    p.add_argument("--set", dest="sets", action="append", type=_set_arg, default=[],
                   metavar="ELEM=IMP,CONF")
    p.add_argument("--stakeholder", dest="stakeholders", action="append",
                   type=_stakeholder_arg, default=[], metavar="ACTOR=LEVEL")
    p.add_argument("--from-file", help="JSON file with a batch prioritization")
    p.add_argument("-o", "--output", help="write result here instead of in place")
    _add_output_flags(p)

    p = sub.add_parser("analyze", help="run the value analysis")
    p.add_argument("model_file")
    p.add_argument("--store", help="session store directory; records a snapshot")
    _add_config_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("rank", help="ordered elements by value")
    p.add_argument("model_file")
    p.add_argument("--by", choices=("global", "local"), default="global")
    p.add_argument("--actor", help="restrict to one actor's elements")
    _add_config_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("explain", help="provenance of one element's value")
    p.add_argument("model_file")
    p.add_argument("element_id")
    _add_config_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("history", help="list recorded versions")
    p.add_argument("model_file")
    p.add_argument("--store", required=True)
    _add_output_flags(p)

    p = sub.add_parser("diff", help="compare two recorded versions")
    p.add_argument("model_file")
    p.add_argument("--store", required=True)
    p.add_argument("--from", dest="from_version", type=_positive_int, required=True)
    p.add_argument("--to", dest="to_version", type=_positive_int, required=True)
    _add_output_flags(p)

    p = sub.add_parser("serve", help="start the local analysis service")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--store", default=".goalvalue-store")

    return parser


def _load_model_file(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    try:
        return canonical.load(text)
    except LoadError as exc:
        raise CliError(f"{path}: {exc}") from None


def _emit(payload: dict, as_json: bool, human: str) -> None:
    if as_json:
        sys.stdout.write(canonical_dumps(payload))
    else:
        sys.stdout.write(human if human.endswith("\n") else human + "\n")


def _format_table(table: list[dict]) -> str:
    rows = [
        (
            r["name"],
            r["importance"],
            r["confidence"],
            f"{r['globalValue']:.2f}",
            f"{r['localValue']:.2f}",
            f"{r['sameActorValue']:.2f}",
            f"{r['otherActorValue']:.2f}",
        )
        for r in table
    ]
    widths = [
        max(len(TABLE_COLUMNS[i]), *(len(row[i]) for row in rows)) if rows else len(TABLE_COLUMNS[i])
        for i in range(len(TABLE_COLUMNS))
    ]
    lines = [
        "  ".join(name.ljust(w) for name, w in zip(TABLE_COLUMNS, widths)),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def _config_from_args(args) -> PropagationConfig:
    return PropagationConfig(
        lambda_=args.lambda_, epsilon=args.epsilon, max_iterations=args.max_iters
    )


def _created_at(args) -> str | None:
    return EPOCH if args.deterministic else None


def _cmd_import(args) -> int:
    try:
        text = Path(args.pistar_file).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {args.pistar_file}: {exc}") from None
    try:
        model, report = import_pistar(text)
    except PiStarParseError as exc:
        raise CliError(str(exc)) from None
    document = canonical.save(model, Prioritization())
    output = args.output or str(Path(args.pistar_file).with_suffix(".canonical.json"))
    Path(output).write_text(document)
    if not report.ok:
        sys.stderr.write(
            "\n".join(f"error: {i.code}: {i.message}" for i in report.errors) + "\n"
        )
        return 1
    _emit(
        {"modelId": model.id, "output": output, "validation": report.to_json()},
        args.json,
        f"imported {model.id} -> {output} "
        f"({len(report.warnings)} warning(s))",
    )
    return 0


def _cmd_validate(args) -> int:
    model, prioritization = _load_model_file(args.model_file)
    report = validate(model, prioritization)
    human_lines = [
        *(f"error: {i.code}: {i.message}" for i in report.errors),
        *(f"warning: {i.code}: {i.message}" for i in report.warnings),
    ]
    human = "\n".join(human_lines) if human_lines else "model is valid"
    _emit(report.to_json(), args.json, human)
    return 0 if report.ok else 1


def _cmd_prioritize(args) -> int:
    model, prioritization = _load_model_file(args.model_file)
    if args.from_file:
        try:
            batch = json.loads(Path(args.from_file).read_text())
            incoming = canonical.prioritization_from_json(batch, "prioritization")
        except (OSError, ValueError) as exc:
            raise CliError(f"cannot read batch file: {exc}") from None
        prioritization = prioritization.merged(incoming)
    for element, importance, confidence in args.sets:
        prioritization.element_priorities[element] = (importance, confidence)
    for actor, level in args.stakeholders:
        prioritization.stakeholder_weights[actor] = level

    report = validate(model, prioritization)
    if not report.ok:
        raise CliError(
            "; ".join(f"{i.code}: {i.message}" for i in report.errors)
        )
    output = args.output or args.model_file
    Path(output).write_text(canonical.save(model, prioritization))
    _emit(
        {"output": output, "prioritization": canonical.prioritization_to_json(prioritization)},
        args.json,
        f"updated {output}",
    )
    return 0


def _analyze(args):
    model, prioritization = _load_model_file(args.model_file)
    try:
        result, prop = run_analysis(
            model, prioritization, _config_from_args(args), _created_at(args)
        )
    except (MissingPrioritiesError, InvalidModelError) as exc:
        raise CliError(str(exc)) from None
    return model, prioritization, result, prop


def _cmd_analyze(args) -> int:
    model, prioritization, result, _ = _analyze(args)
    payload = result.to_json()
    if args.store:
        version = SessionStore(args.store).record(model.id, prioritization, result)
        payload["version"] = version
    _emit(payload, args.json, _format_table(payload["table"]))
    return 0


def _cmd_rank(args) -> int:
    _, _, result, _ = _analyze(args)
    try:
        ordered = rank(result, by=args.by, actor_filter=args.actor)
    except (KeyError, ValueError) as exc:
        raise CliError(str(exc)) from None
    payload = {
        "by": args.by,
        "ranking": [
            {"id": eid, "name": result.rows[eid].name, "value": round(value, 2)}
            for eid, value in ordered
        ],
    }
    human = "\n".join(
        f"{i + 1:3d}. {result.rows[eid].name}  {value:.2f}"
        for i, (eid, value) in enumerate(ordered)
    )
    _emit(payload, args.json, human or "no elements")
    return 0


def _cmd_explain(args) -> int:
    model, _, result, prop = _analyze(args)
    try:
        entries = explain(result, model, prop, args.element_id)
    except (KeyError, ValueError) as exc:
        raise CliError(str(exc)) from None
    payload = {
        "elementId": args.element_id,
        "provenance": [e.to_json() for e in entries],
    }
    human = "\n".join(
        f"{e.source_id} ({'same' if e.same_actor else 'other'} actor "
        f"{e.source_actor}): {e.impact:+.4f}"
        for e in entries
    )
    _emit(payload, args.json, human)
    return 0


def _cmd_history(args) -> int:
    model, _ = _load_model_file(args.model_file)
    entries = SessionStore(args.store).history(model.id)
    payload = {"modelId": model.id, "history": [e.to_json() for e in entries]}
    human = "\n".join(
        f"v{e.version}  {e.created_at}  top={e.summary.get('topElement')}"
        for e in entries
    )
    _emit(payload, args.json, human or "no recorded versions")
    return 0


def _cmd_diff(args) -> int:
    model, _ = _load_model_file(args.model_file)
    try:
        diff = SessionStore(args.store).diff(
            model.id, args.from_version, args.to_version
        )
    except SnapshotNotFoundError as exc:
        raise CliError(str(exc.args[0])) from None
    payload = diff.to_json()
    lines = []
    for eid, entry in sorted(diff.entries.items()):
        if entry.delta or entry.importance_before != entry.importance_after:
            lines.append(
                f"{eid}: {entry.importance_before}->{entry.importance_after} "
                f"value {entry.global_before:.2f}->{entry.global_after:.2f} "
                f"(delta {entry.delta:+.2f}, rank {entry.rank_before}->{entry.rank_after})"
            )
    for eid in diff.added:
        lines.append(f"added: {eid}")
    for eid in diff.removed:
        lines.append(f"removed: {eid}")
    _emit(payload, args.json, "\n".join(lines) or "no changes")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(Path(args.store)), host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "import": _cmd_import,
    "validate": _cmd_validate,
    "prioritize": _cmd_prioritize,
    "analyze": _cmd_analyze,
    "rank": _cmd_rank,
    "explain": _cmd_explain,
    "history": _cmd_history,
    "diff": _cmd_diff,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.verb](args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
