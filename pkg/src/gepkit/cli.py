"""Command-line front end.

Every subcommand prints a short human-readable answer, or with ``--json`` a
run report: the command echo, a digest of the inputs, the seed, EXACT or
HEURISTIC flags and the structured result.  Reports contain no timings (use
``--timing`` to get one on stderr), so identical invocations produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import __version__
from .algebra import Exponential
from .decompose import DecompWitness, PreconditionError, decompose_sum, verify_witness
from .diffops import annihilator_for, apply_word, delta, mdelta
from .gridlab import GridBox, ReconstructionError, min_order_bounds, reconstruct_gep, refute_order2, sample, sum_rank
from .textio import ParseError, expoly_to_json, format_expoly, grid_from_csv, grid_to_csv, parse_expr, parse_scalar

COMMANDS = (
    "degree", "spectrum", "delta", "mdelta", "annihilate", "decompose", "verify",
    "rank", "bounds", "refute2", "reconstruct", "sample", "selftest",
)


class CommandFailed(Exception):
    """A check ran to completion and did not pass (exit code 1)."""


def _vector(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.replace(" ", "").split(","))


def _lambda(text: str) -> Exponential:
    return Exponential(tuple(parse_scalar(v) for v in text.split(",")))


def _expr(args):
    if args.expr is None:
        raise ValueError("--expr is required")
    return parse_expr(args.expr, d=args.dim)


def _box(args, d: int, default: str = "0..2") -> GridBox:
    return GridBox.parse(args.box or default, d)


def cmd_degree(args):
    f = _expr(args)
    return {"expr": format_expoly(f), "degree": f.degree()}, str(f.degree())


def cmd_spectrum(args):
    f = _expr(args)
    sp = [str(m) for m, _ in f.terms]
    return {"expr": format_expoly(f), "spectrum": sp}, "{" + "; ".join(sp) + "}"


def cmd_delta(args):
    f = _expr(args)
    g = delta(f, _vector(args.step[0] if args.step else "1"))
    return {"result": format_expoly(g), "f": expoly_to_json(g)}, format_expoly(g)


def cmd_mdelta(args):
    f = _expr(args)
    if not args.lam:
        raise ValueError("--lambda is required for mdelta")
    g = mdelta(f, _lambda(args.lam), _vector(args.step[0] if args.step else "1"))
    return {"result": format_expoly(g), "f": expoly_to_json(g)}, format_expoly(g)


def cmd_annihilate(args):
    f = _expr(args)
    steps = [_vector(s) for s in args.step] if args.step else []
    if len(steps) == 1:
        steps = steps * len(f.terms)
    if not steps:
        steps = [tuple(1 if j == 0 else 0 for j in range(f.d))] * len(f.terms)
    w = annihilator_for(f, steps)
    residual = apply_word(f, w)
    result = {"word": w.to_json(), "word_text": str(w), "residual": format_expoly(residual),
              "annihilated": residual.is_zero()}
    if not residual.is_zero():
        raise CommandFailed(json.dumps(result))
    return result, f"{str(w)}  ->  {format_expoly(residual)}"


def cmd_decompose(args):
    f = _expr(args)
    if args.n is None:
        raise ValueError("--n is required")
    w = decompose_sum(f, args.n)
    result = w.to_json()
    if args.verify:
        rep = verify_witness(f, w)
        result["verified"] = {"ok": rep.ok, "violations": rep.violations}
        if not rep.ok:
            raise CommandFailed(json.dumps(result))
    return result, json.dumps(result, indent=2)


def cmd_verify(args):
    f = _expr(args)
    if not args.witness:
        raise ValueError("--witness FILE is required")
    w = DecompWitness.from_json(json.loads(Path(args.witness).read_text()))
    rep = verify_witness(f, w)
    result = {"ok": rep.ok, "identity_ok": rep.identity_ok, "order": w.order,
              "residual": format_expoly(rep.residual.f), "violations": rep.violations}
    if not rep.ok:
        raise CommandFailed(json.dumps(result))
    return result, f"ok order={w.order}"


def cmd_rank(args):
    f = _expr(args)
    box = _box(args, f.d)
    cert = sum_rank(f, box)
    return {"box": str(box), **cert.to_json()}, f"rank {cert.rank}"


def cmd_bounds(args):
    f = _expr(args)
    if args.n is None:
        raise ValueError("--n is required")
    box = _box(args, f.d)
    b = min_order_bounds(f, args.n, box, k_max=args.kmax, seed=args.seed)
    return {"box": str(box), **b.to_json()}, f"{b.lower} <= order <= {b.upper}  [{' '.join(b.flags)}]"


def cmd_refute2(args):
    f = _expr(args)
    if args.n is None:
        raise ValueError("--n is required")
    box = _box(args, f.d)
    res = refute_order2(f, args.n, box)
    out = res.to_json()
    ranks = sorted({p["restricted_rank"] for p in res.pairs})
    verdict = "refuted" if out["refuted"] else "inconclusive"
    return out, f"{verdict} (restricted ranks {ranks})"


def cmd_reconstruct(args):
    if not args.csv:
        raise ValueError("--csv FILE is required")
    g = grid_from_csv(Path(args.csv).read_text())
    rec = reconstruct_gep(g)
    return rec.to_json(), format_expoly(rec.f)


def cmd_sample(args):
    f = _expr(args)
    box = _box(args, f.d)
    text = grid_to_csv(sample(f, box))
    return {"box": str(box), "csv": text}, text.rstrip("\n")


def cmd_selftest(args):
    from .selftest import format_table, run_selftest

    results = run_selftest(args.seed)
    table = format_table(results, args.seed)
    result = {"criteria": [r.to_json() for r in results], "passed": all(r.passed for r in results)}
    if not result["passed"]:
        raise CommandFailed(table)
    return result, table.rstrip("\n")


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gepkit", description="Exact exponential-polynomial decomposition toolkit.")
    p.add_argument("--version", action="version", version=f"gepkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--expr", help="expression, e.g. '(t1^2 + 3/2)*exp(2, -1/3)'")
        sp.add_argument("--dim", type=int, help="ambient dimension d (default: inferred)")
        sp.add_argument("--step", action="append", help="step vector 'h1,...,hd' (repeatable)")
        sp.add_argument("--lambda", dest="lam", help="exponential 'l1,...,ld' for mdelta")
        sp.add_argument("--box", help="window 'lo..hi[,lo..hi...]' (default 0..2 per axis)")
        sp.add_argument("--n", type=int, help="number of variables")
        sp.add_argument("--kmax", type=int, default=4)
        sp.add_argument("--csv", help="grid CSV file")
        sp.add_argument("--witness", help="witness JSON file")
        sp.add_argument("--verify", action="store_true")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="also write the JSON report to this file")
        sp.add_argument("--json", action="store_true", help="print the JSON report")
        sp.add_argument("--timing", action="store_true", help="print elapsed time to stderr")
    return p


def _digest(args) -> str:
    h = hashlib.sha256()
    for key in ("expr", "dim", "step", "lam", "box", "n", "kmax", "seed"):
        h.update(f"{key}={getattr(args, key)!r};".encode())
    for key in ("csv", "witness"):
        path = getattr(args, key)
        if path:
            try:
                h.update(Path(path).read_bytes())
            except OSError:
                h.update(f"{key}-unreadable={path!r};".encode())
    return h.hexdigest()


def run(command: str, argv: list[str]) -> tuple[int, str]:
    """Execute one subcommand; returns (exit code, stdout text)."""
    parser = build_parser()
    args = parser.parse_args([command, *argv])
    start = time.perf_counter()
    status = "ok"
    code = 0
    try:
        result, text = HANDLERS[args.command](args)
    except CommandFailed as exc:
        status, code = "failed", 1
        try:
            result = json.loads(str(exc))
        except ValueError:
            result = {"detail": str(exc)}
        text = str(exc)
    except (ParseError, PreconditionError, ReconstructionError, ValueError, OSError) as exc:
        status, code = "error", 2
        result = {"error": type(exc).__name__, "message": str(exc)}
        text = f"error: {exc}"
    flags = ["HEURISTIC"] if "HEURISTIC" in json.dumps(result) else ["EXACT"]
    report = {
        "command": args.command,
        "argv": [command, *argv],
        "input_digest": _digest(args),
        "seed": args.seed,
        "status": status,
        "flags": flags,
        "result": result,
    }
    report_text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(report_text)
    if args.timing:
        print(f"elapsed {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code, report_text if args.json else text.rstrip("\n") + "\n"


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if not argv or argv[0] in ("-h", "--help", "--version"):
        build_parser().parse_args(argv)
        return 0
    if argv[0] not in COMMANDS:
        print(f"error: unknown command {argv[0]!r}; expected one of {', '.join(COMMANDS)}", file=sys.stderr)
        return 2
    code, out = run(argv[0], argv[1:])
    stream = sys.stdout if code != 2 else sys.stderr
    stream.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
