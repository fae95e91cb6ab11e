"""Command-line front end: simulate, verify, encode, solve, bench.

Exit codes: 0 success/accept, 1 reject or no certificate found, 2 malformed
input files or flags. Output files are written atomically (temp + rename)
and identical invocations on identical inputs produce byte-identical output.
The DEBILANDIA_ATLAS environment variable points at an alternative atlas
file; --atlas (where offered) wins over the environment.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path

from .engine import StepRecord, Terminated, run
from .grid import recognize, state_hash
from .instances import (
    Instance,
    build_candidate,
    certificate_text,
    instance_to_json_obj,
    load_instance_file,
)
from .solver import SolverCapError, construct_certificate, growth_probe
from .tiles import TileAtlas, atlas_default
from .verifier import verify

ENV_ATLAS = "DEBILANDIA_ATLAS"


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _write_json(path: Path, obj) -> None:
    _atomic_write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _load_atlas(explicit: str | None) -> TileAtlas:
    path = explicit or os.environ.get(ENV_ATLAS)
    if path:
        return TileAtlas.load(path)
    return atlas_default()


def _parse_set_a(text: str) -> Instance:
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ValueError(f"--set-a must be comma-separated integers: {exc}") from exc
    return Instance(values)


def _outcome_name(outcome) -> str:
    if isinstance(outcome, Terminated):
        return f"terminated:{outcome.reason.value}"
    return type(outcome).__name__.lower().replace("rulecopied", "rule_copied")


def _trace_writer(handle):
    def emit(record: StepRecord) -> None:
        line = {
            "gen": record.gen,
            "outcome": _outcome_name(record.outcome),
            "state_hash": f"{record.state_hash:016x}",
            "changed_cells": [list(cell) for cell in record.changed_cells],
        }
        handle.write(json.dumps(line, sort_keys=True) + "\n")

    return emit


def _cmd_simulate(args) -> int:
    atlas = _load_atlas(args.atlas)
    obj = json.loads(Path(args.points).read_text())
    raw = obj["points"] if isinstance(obj, dict) else None
    if not isinstance(raw, list) or any(
        not isinstance(p, list) or len(p) != 2 or not all(isinstance(v, int) and v >= 0 for v in p)
        for p in raw
    ):
        raise ValueError('points file must look like {"points": [[x, y], ...]} with non-negative ints')
    state = recognize({(x, y) for x, y in raw}, atlas)
    buffer = io.StringIO()
    result = run(state, args.max_gens, on_step=_trace_writer(buffer))
    if args.trace:
        _atomic_write(Path(args.trace), buffer.getvalue())
    summary = {
        "status": result.status.value,
        "reason": result.reason.value if result.reason else None,
        "generations": result.generations_run,
        "period": result.period,
        "first_index": result.first_index,
        "tiles": len(result.final_state.tiles),
        "junk_cells": result.final_state.junk_cells,
        "final_hash": f"{state_hash(result.final_state):016x}",
    }
    print(json.dumps(summary, sort_keys=True))
    return 0


def _cmd_verify(args) -> int:
    atlas = _load_atlas(args.atlas)
    inst, items = load_instance_file(args.instance)
    buffer = io.StringIO()
    report = verify(inst, items, atlas, on_step=_trace_writer(buffer) if args.trace else None)
    if args.trace:
        _atomic_write(Path(args.trace), buffer.getvalue())
    if args.report:
        _write_json(Path(args.report), report.to_json_obj())
    verdict = report.to_json_obj()
    print(json.dumps({k: verdict[k] for k in ("verdict", "reason", "step")}, sort_keys=True))
    return 0 if report.accepted else 1


def _cmd_encode(args) -> int:
    inst = _parse_set_a(args.set_a)
    items = build_candidate(inst, args.e, args.marker)
    out = Path(args.out)
    _write_json(out, instance_to_json_obj(inst, items))
    _atomic_write(out.with_suffix(".txt"), certificate_text(items) + "\n")
    print(f"wrote {out} and {out.with_suffix('.txt')}")
    return 0


def _cmd_solve(args) -> int:
    atlas = _load_atlas(args.atlas)
    inst = _parse_set_a(args.set_a)
    outcome = construct_certificate(inst, args.max_gens, atlas, cap=args.cap)
    if not outcome.found:
        print(f"no certificate: {outcome.reason}", file=sys.stderr)
        return 1
    _write_json(Path(args.out), instance_to_json_obj(inst, outcome.certificate))
    print(f"wrote {args.out}")
    return 0


def _cmd_bench(args) -> int:
    atlas = _load_atlas(args.atlas)
    sizes = [int(part) for part in args.sizes.split(",") if part.strip()]
    rows = growth_probe(sizes, args.trials, atlas, max_gens=args.max_gens, seed=args.seed, cap=args.cap)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["m", "trial", "cells_placed", "factorial_sq_claim", "generations", "cells_scanned", "found"]
    )
    for row in rows:
        writer.writerow(
            [
                row.size_m,
                row.trial,
                row.cells_placed,
                row.factorial_sq_claim,
                row.generations,
                row.cells_scanned,
                int(row.found),
            ]
        )
    _atomic_write(Path(args.csv), buffer.getvalue())
    print(f"wrote {len(rows)} rows to {args.csv}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="debilandia", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a board from a points file, streaming a trace")
    p.add_argument("--points", required=True)
    p.add_argument("--atlas")
    p.add_argument("--max-gens", type=int, default=1000)
    p.add_argument("--trace")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="check a certificate instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--atlas")
    p.add_argument("--trace")
    p.add_argument("--report")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("encode", help="emit the canonical certificate skeleton for a set A")
    p.add_argument("--set-a", required=True)
    p.add_argument("--tuples", choices=["auto"], default="auto")
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--marker", type=int, choices=[25, 43], required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("solve", help="construct an accepting certificate when one exists")
    p.add_argument("--set-a", required=True)
    p.add_argument("--atlas")
    p.add_argument("--max-gens", type=int, default=1000)
    p.add_argument("--cap", type=int, default=4)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bench", help="measure construction cost over random instances")
    p.add_argument("--sizes", required=True)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-gens", type=int, default=32)
    p.add_argument("--cap", type=int, default=4)
    p.add_argument("--atlas")
    p.add_argument("--csv", required=True)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, json.JSONDecodeError, SolverCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
