"""
Matroid Strata CLI
==================
`python -m app <command> ...`

Commands:
    info       structure flags, lines/planes, cyclic flats
    present    stratum or realization presentation
    reduce     eliminate variables from a presentation
    classify   realizability, smoothness, components, nodes
    batch      catalog pipeline with per-stage counts
    corank     corank vector (and the cell of a probe)
    star       star subdivision with dimension bookkeeping
    witness    t-adic witness valuations
    plan       structural reduction plan
    flag       complete flag extension

JSON goes to stdout (or --out); summaries and logs go to stderr.
Exit status: 0 success, 2 undecided results only, 1 error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from app.config import LOG_LEVEL, MAX_REFERENCE_CIRCUITS, Config
from app.models import MatroidIn, PresentationIn
from app.services import catalog, planner, subdivision
from app.services.groebner import ResourceLimitExceeded
from app.services.matroid import Matroid
from app.services.presentation import (
    Presentation,
    ReferenceCircuit,
    realization_presentation,
    stratum_presentation,
)
from app.services.reduction import reduce
from app.services.smoothness import UNDECIDED, classify

logger = logging.getLogger("app.cli")

EXIT_OK, EXIT_ERROR, EXIT_UNDECIDED = 0, 1, 2


class CliError(ValueError):
    """Bad input file or argument."""


# =============================================================================
# INPUT / OUTPUT
# =============================================================================

def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise CliError(f"{path} is not valid JSON: {e}") from e


def load_matroid(spec: Optional[str]) -> Matroid:
    """A JSON file, or gallery:<name>."""
    if not spec:
        raise CliError("--matroid is required")
    if spec.startswith("gallery:"):
        return MatroidIn(gallery=spec.split(":", 1)[1]).to_matroid()
    return MatroidIn.model_validate(_read_json(spec)).to_matroid()


def load_presentation(path: str) -> Presentation:
    return PresentationIn.model_validate(_read_json(path)).to_presentation()


def _ints(text: Optional[str]) -> Optional[list[int]]:
    if text is None:
        return None
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError as e:
        raise CliError(f"expected a list of integers, got {text!r}") from e


def emit(payload, out: Optional[str]) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
        say(f"✓ wrote {out}")
    else:
        sys.stdout.write(text + "\n")


def say(message: str) -> None:
    print(message, file=sys.stderr)


def _config(args) -> Config:
    return Config.from_env().with_overrides(
        max_degree=args.max_degree,
        max_basis=args.max_basis,
        budget=args.budget,
        workers=args.workers,
        cache_path=args.cache,
    )


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_info(args, config: Config) -> int:
    Q = load_matroid(args.matroid)
    data = planner.describe(Q)
    say(f"✓ {Q}: {len(data['hyperplanes'])} nontrivial hyperplanes, paving={data['paving']}")
    emit(data, args.out)
    return EXIT_OK


def cmd_present(args, config: Config) -> int:
    Q = load_matroid(args.matroid)
    reference = _ints(args.reference)
    if args.kind == "stratum":
        P = stratum_presentation(Q, reference)
    else:
        P = realization_presentation(Q, ReferenceCircuit.of(reference, Q.n) if reference else None)
    say(f"✓ {args.kind} presentation: {P.num_vars} variables, "
        f"{len(P.ideal_gens)} generators, {len(P.semigroup_gens)} inverted factors")
    emit(P.to_json(), args.out)
    return EXIT_OK


def cmd_reduce(args, config: Config) -> int:
    if args.presentation:
        P = load_presentation(args.presentation)
    else:
        P = realization_presentation(load_matroid(args.matroid))
    trace = reduce(P, caps=config.caps)
    say(f"✓ reduced {P.num_vars} -> {trace.result.num_vars} variables ({trace.stopped})")
    emit(trace.to_json(), args.out)
    return EXIT_UNDECIDED if trace.stopped in ("budget", "resource") else EXIT_OK


def cmd_classify(args, config: Config) -> int:
    Q = load_matroid(args.matroid)
    report = classify(Q, config.caps, args.max_circuits)
    marker = "⚠️ " if report.undecided else "✓"
    say(f"{marker} {report.matroid}: realizable={report.realizable} smooth={report.smooth} "
        f"components={report.component_count} nodes={report.nodes}")
    for reason in report.reasons:
        say(f"   {reason}")
    emit(report.to_json(), args.out)
    return EXIT_UNDECIDED if report.undecided else EXIT_OK


def _default_stages(d: int) -> list[str]:
    if d == 3:
        return ["simple", "realizable"]
    if d == 4:
        return ["simple", "connected", "four_planes", "realizable"]
    return ["simple", "connected", "realizable"]


def cmd_batch(args, config: Config) -> int:
    if not args.catalog:
        raise CliError("--catalog is required")
    entries = list(catalog.read_catalog(Path(args.catalog), args.d, args.n, args.order))
    d = entries[0].d if entries else (args.d or 0)
    stages = args.stages.split(",") if args.stages else _default_stages(d)
    report = catalog.batch(entries, stages, config, args.order)
    say("✓ " + " -> ".join(f"{k} {v}" for k, v in report.counts.items()))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for summary in report.summaries:
                fh.write(json.dumps(summary, sort_keys=True) + "\n")
        say(f"✓ wrote {len(report.summaries)} summaries to {args.out}")
    emit(report.to_json(), None)
    if report.undecided:
        say(f"⚠️  {report.undecided} undecided verdicts")
    decided = report.counts.get("realizable", 0)
    return EXIT_UNDECIDED if report.undecided and not decided else EXIT_OK


def cmd_corank(args, config: Config) -> int:
    Q = load_matroid(args.matroid)
    w = subdivision.corank_vector(Q)
    data = {"corank": w.to_json()}
    probe = _ints(args.probe)
    if probe is not None:
        data["cell"] = subdivision.cell_matroid(w, probe).to_json()
    say(f"✓ corank vector of {Q}: {len(w.support())} nonzero entries")
    emit(data, args.out)
    return EXIT_OK


def cmd_star(args, config: Config) -> int:
    Q = load_matroid(args.matroid)
    star = subdivision.star_subdivision(Q)
    data = star.to_json()
    center = args.center_dim
    if center is None:
        center = subdivision.center_dimension(Q, config.caps)
    if center is not None:
        data["dimension"] = subdivision.limit_dimension(star, center).to_json()
    say(f"✓ star of {Q}: {len(star.leaves)} leaves, covered={star.covered}")
    emit(data, args.out)
    return EXIT_OK


def cmd_witness(args, config: Config) -> int:
    report = subdivision.witness_valuations(args.d, args.n)
    say(f"{'✓' if report.matches else '⚠️ '} valuations match corank: {str(report.matches).lower()}")
    emit(report.to_json(), args.out)
    return EXIT_OK


def cmd_plan(args, config: Config) -> int:
    Q = load_matroid(args.matroid)
    result = planner.plan(Q)
    say(f"✓ {len(result.moves)} moves, {len(result.terminals)} terminal matroids")
    emit(result.to_json(), args.out)
    return EXIT_OK


def cmd_flag(args, config: Config) -> int:
    Q = load_matroid(args.matroid)
    flag = planner.flag_extension(Q, verify=not args.no_verify)
    say(f"✓ flag of {len(flag.constituents)} constituents")
    emit(flag.to_json(), args.out)
    return EXIT_OK


COMMANDS = {
    "info": cmd_info,
    "present": cmd_present,
    "reduce": cmd_reduce,
    "classify": cmd_classify,
    "batch": cmd_batch,
    "corank": cmd_corank,
    "star": cmd_star,
    "witness": cmd_witness,
    "plan": cmd_plan,
    "flag": cmd_flag,
}


# =============================================================================
# PARSER
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--matroid", help="matroid JSON file or gallery:<name>")
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--workers", type=int)
    common.add_argument("--max-degree", type=int)
    common.add_argument("--max-basis", type=int)
    common.add_argument("--budget", type=int)
    common.add_argument("--cache", help="verdict cache (JSON lines)")

    parser = argparse.ArgumentParser(prog="python -m app", description="Matroid realization spaces and strata")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("info", parents=[common])

    p = sub.add_parser("present", parents=[common])
    p.add_argument("--kind", choices=["stratum", "realization"], default="realization")
    p.add_argument("--reference", help="reference circuit (realization) or basis (stratum), e.g. 1,2,3,4")

    p = sub.add_parser("reduce", parents=[common])
    p.add_argument("--presentation", help="presentation JSON; defaults to the realization presentation of --matroid")

    p = sub.add_parser("classify", parents=[common])
    p.add_argument("--max-circuits", type=int, default=MAX_REFERENCE_CIRCUITS)

    p = sub.add_parser("batch", parents=[common])
    p.add_argument("--catalog", help="catalog file, one encoding per line")
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--order", choices=["colex", "lex", "revlex"], default=catalog.CATALOG_SUBSET_ORDER)
    p.add_argument("--stages", help=f"comma separated, from {','.join(catalog.STAGES)}")

    p = sub.add_parser("corank", parents=[common])
    p.add_argument("--probe", help="weight vector v, e.g. 0,0,-1,...")

    p = sub.add_parser("star", parents=[common])
    p.add_argument("--center-dim", type=int, help="dimension of the center stratum; classified when omitted")

    p = sub.add_parser("witness", parents=[common])
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--n", type=int, default=12)

    sub.add_parser("plan", parents=[common])

    p = sub.add_parser("flag", parents=[common])
    p.add_argument("--no-verify", action="store_true")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL.upper(), logging.INFO),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; 2 is reserved for undecided results
        return EXIT_OK if e.code in (0, None) else EXIT_ERROR
    try:
        config = _config(args)
        return COMMANDS[args.command](args, config)
    except ValidationError as e:
        say(f"⚠️  invalid input: {e.errors()[0]['msg']}")
    except ResourceLimitExceeded as e:
        say(f"⚠️  {UNDECIDED}: {e}")
        return EXIT_UNDECIDED
    except (ValueError, OSError) as e:
        say(f"⚠️  {e}")
    return EXIT_ERROR
