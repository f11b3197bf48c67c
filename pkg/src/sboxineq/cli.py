"""Command-line interface: ``sboxineq <command> ...``.

Exit codes: 0 success, 2 validation or certification failure, 3 resource
limit.  ``SBOXINEQ_BUDGET`` (e.g. ``time=600,nodes=1e8,sums=5e7``) overrides
the default budgets; ``--budget`` overrides both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bench, corpus
from .exceptions import CertificationError, SboxIneqError, SboxInputError
from .export import FORMATS, read_model, render_model, write_model
from .hull import export_hrep, hrep_of
from .pipeline import METHODS, Budget, reduce_sbox
from .pool import TYPE1, TYPE2
from .sbox import SBox, compute_ddt, load_sbox, transitions_of
from .verify import certify_model, diff_models

BUDGET_ENV = "SBOXINEQ_BUDGET"


def resolve_sbox(ref: str) -> SBox:
    """A file path if one exists, otherwise a corpus name."""
    if os.path.exists(ref):
        return load_sbox(ref)
    try:
        return corpus.get(ref).sbox
    except SboxInputError:
        if Path(ref).suffix:
            raise SboxInputError(f"no such file {ref!r}") from None
        raise


def _budget(args) -> Budget:
    budget = Budget()
    env = os.environ.get(BUDGET_ENV)
    if env:
        budget = Budget.parse(env, budget)
    if getattr(args, "budget", None):
        budget = Budget.parse(args.budget, budget)
    if getattr(args, "time_limit", None) is not None:
        budget.time_limit = args.time_limit
    return budget


def _threads(value):
    return None if value in (None, 0) else value


def cmd_ddt(args):
    sbox = resolve_sbox(args.sbox)
    ddt = compute_ddt(sbox)
    tr = transitions_of(sbox)
    width = len(str(int(ddt.max())))
    lines = [" ".join(str(int(v)).rjust(width) for v in row) for row in ddt]
    lines.append(f"possible={tr.possible.size} impossible={tr.impossible.size}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_hull(args):
    sbox = resolve_sbox(args.sbox)
    tr = transitions_of(sbox)
    hrep = hrep_of(tr, facet_budget=_budget(args).facet_budget)
    if args.out:
        export_hrep(hrep, tr, args.out, args.format)
    print(f"facets={len(hrep)} equations={len(hrep.equations)}")
    return 0


def cmd_reduce(args):
    sbox = resolve_sbox(args.sbox)
    result = reduce_sbox(
        sbox,
        args.method,
        k=args.k,
        filter=args.filter,
        seed=args.seed,
        restarts=args.restarts,
        trials=args.trials,
        threads=_threads(args.threads),
        exclude_origin=not args.include_origin,
        budget=_budget(args),
    )
    if args.out:
        write_model(args.out, result.inequalities, sbox, args.format)
    else:
        sys.stdout.write(render_model(result.inequalities, sbox.n, args.format or "appendix-text"))
    summary = result.dumps()
    if args.summary:
        Path(args.summary).write_text(summary + "\n")
    print(summary, file=sys.stderr)
    return 0


def cmd_verify(args):
    sbox = resolve_sbox(args.sbox)
    report = certify_model(sbox, read_model(args.model, sbox.n))
    print(report.dumps() if args.json else report.to_text())
    return 0 if report.passed else 2


def cmd_diff(args):
    sbox = resolve_sbox(args.sbox)
    diff = diff_models(read_model(args.model_a, sbox.n), read_model(args.model_b, sbox.n), sbox)
    print(diff.dumps() if args.json else diff.to_text())
    return 0


def cmd_export(args):
    sbox = resolve_sbox(args.sbox)
    model = read_model(args.model, sbox.n)
    if args.out:
        write_model(args.out, model, sbox, args.format)
        return 0
    report = certify_model(sbox, model)
    if not report.passed:
        raise CertificationError("refusing to export an uncertified model:\n" + report.to_text())
    sys.stdout.write(render_model(model, sbox.n, args.format, sbox=sbox))
    return 0


def cmd_bench(args):
    scope = None
    if args.scope:
        scope = [s.strip() for s in args.scope.split(",") if s.strip()]
        if args.scope.strip() in ("-", "none"):
            scope = []
    rows = bench.run_bench(
        args.table,
        scope,
        restarts=args.restarts,
        seed=args.seed,
        threads=_threads(args.threads),
        jobs=args.jobs,
        budget=_budget(args),
    )
    sys.stdout.write(bench.format_text(rows))
    if args.csv:
        Path(args.csv).write_text(bench.format_csv(rows))
    return 0


def cmd_corpus(args):
    for entry in corpus.entries(family=args.family):
        pub = ", ".join(f"{k}={v}" for k, v in entry.published.items())
        print(f"{entry.name:14s} n={entry.n} impossible={entry.impossible_count:4d}  {pub}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sboxineq", description="Minimal inequality models of SBox DDTs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_sbox(p):
        p.add_argument("sbox", help="corpus name (see 'corpus list') or a file with one line of hex words")
        return p

    p = with_sbox(sub.add_parser("ddt", help="print the difference distribution table"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_ddt)

    p = with_sbox(sub.add_parser("hull", help="compute the H-representation"))
    p.add_argument("--out")
    p.add_argument("--format", choices=("text", "json"))
    p.add_argument("--budget")
    p.set_defaults(func=cmd_hull)

    p = with_sbox(sub.add_parser("reduce", help="compute a certified reduced model"))
    p.add_argument("--method", choices=METHODS, default="subset-addition")
    p.add_argument("-k", "--k", type=int, default=2)
    p.add_argument("--filter", choices=(TYPE1, TYPE2), default=TYPE1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=1000)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--threads", type=int, default=0, help="worker threads (0 = all cores)")
    p.add_argument("--include-origin", action="store_true")
    p.add_argument("--time-limit", type=float)
    p.add_argument("--budget")
    p.add_argument("--out")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--summary", help="write the JSON summary here")
    p.set_defaults(func=cmd_reduce)

    p = with_sbox(sub.add_parser("verify", help="certify a model file"))
    p.add_argument("model")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = with_sbox(sub.add_parser("diff", help="compare two model files"))
    p.add_argument("model_a")
    p.add_argument("model_b")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_diff)

    p = with_sbox(sub.add_parser("export", help="convert a certified model"))
    p.add_argument("model")
    p.add_argument("--format", choices=FORMATS, default="appendix-text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("bench", help="reproduce the published tables")
    p.add_argument("table", choices=bench.TABLES)
    p.add_argument("--scope", help="comma-separated corpus names")
    p.add_argument("--restarts", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="SBoxes processed concurrently")
    p.add_argument("--time-limit", type=float)
    p.add_argument("--budget")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("corpus", help="built-in SBoxes")
    p.add_argument("action", choices=("list",))
    p.add_argument("--family")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SboxIneqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
