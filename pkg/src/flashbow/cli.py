"""Command line front end: ``flashbow <command> ...``.

Exit codes: 0 success, 1 property violated, 2 usage error, 3 budget exceeded.
Data goes to stdout (or ``--output``), diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds, construct, detect, model, search, structure

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return v


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _load(path: str) -> model.ColoredTournament:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    if text.lstrip().startswith("{"):
        return model.loads_json(text)
    return model.parse(text)


def _write_colored(args, ct: model.ColoredTournament, comments=()) -> None:
    if args.format == "structured":
        doc = model.to_dict(ct)
        doc["comments"] = list(comments)
        _emit(args, json.dumps(doc, sort_keys=True) + "\n")
    else:
        _emit(args, model.serialize(ct, comments))


def _tournament_from_args(args) -> model.Tournament:
    if args.input:
        return _load(args.input).tournament
    if args.kind == "transitive":
        return model.new_transitive(args.n)
    if args.kind == "reversed":
        return construct.reversed_edge_tournament(args.n)
    return model.random_tournament(args.n, args.seed)


# -- commands -----------------------------------------------------------------

def cmd_construct(args) -> int:
    header = [f"construct {args.what} l={args.l} k={args.k}"]
    if args.what == "grid":
        ct = construct.grid_coloring(args.l, args.k)
    elif args.what == "antichain":
        t = _tournament_from_args(args)
        header.append(f"tournament={args.input or args.kind} n={t.n} seed={args.seed}")
        ct = construct.antichain_coloring(t, args.l, args.k)
    elif args.what == "block":
        t = _tournament_from_args(args)
        header.append(f"tournament={args.input or args.kind} n={t.n} seed={args.seed} block_size={args.block_size}")
        try:
            res = construct.block_coloring(t, args.l, args.k, args.block_size, seed=args.seed)
        except construct.BlockColoringFailed as exc:
            print(f"block colouring failed: {exc.reason} {exc.params}", file=sys.stderr)
            return EXIT_VIOLATION
        header.append(f"a={res.inner_l} b={res.outer_l} blocks={len(res.blocks)}")
        ct = res.coloring
    else:  # reversed
        n = args.n if args.n is not None else args.l ** (args.k - 1) - 1
        t = construct.reversed_edge_tournament(n)
        header.append("uncoloured tournament: every edge carries colour 1")
        ct = model.ColoredTournament.monochromatic(t)
    _write_colored(args, ct, header)
    return EXIT_OK


def cmd_check(args) -> int:
    ct = _load(args.file)
    flash = detect.longest_flash(ct)
    rainbow = detect.longest_rainbow(ct, args.k, args.budget or detect.DEFAULT_STATE_BUDGET)
    doc = {"n": ct.n, "palette": list(ct.palette()), "l": args.l, "k": args.k,
           "longest_flash": repr(flash.length) if flash.length is detect.UNBOUNDED else flash.length,
           "flash_walk": list(flash.certificate.walk) if flash.certificate else None,
           "flash_color": flash.certificate.color if flash.certificate else None,
           "longest_rainbow_capped": rainbow.length,
           "rainbow_walk": list(rainbow.certificate.walk),
           "rainbow_colors": list(rainbow.certificate.colors)}
    free = flash.length < args.l and rainbow.length < args.k
    doc["flash_rainbow_free"] = free
    _emit(args, json.dumps(doc, sort_keys=True) + "\n")
    return EXIT_VIOLATION if args.assert_free and not free else EXIT_OK


def cmd_profile(args) -> int:
    ct = _load(args.file)
    prof = detect.color_profiles(ct)
    report = structure.strongly_robust_vertices(ct, args.k, cap=args.cap)
    rows = []
    for row, v in zip(report.rows(), range(1, ct.n + 1)):
        row["in_colors"] = sorted(prof.incoming(v))
        row["out_colors"] = sorted(prof.outgoing(v))
        rows.append(row)
    _emit(args, json.dumps({"k": args.k, "cap": report.cap, "vertices": rows}, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_sample(args) -> int:
    ct = _load(args.file)
    try:
        if args.what == "deletion":
            res = structure.deletion_trials(ct, args.l, args.trials, args.seed)
            bound = structure.deletion_expectation_bound(ct, args.l)
            violated = int((res.sizes > 1).sum())
            doc = {"mode": "deletion", "seed": args.seed, "l": args.l, "trials": args.trials,
                   "max_survivors": int(res.sizes.max()), "mean_survivors": float(res.sizes.mean()),
                   "expectation_lower_bound": bound, "trials_with_more_than_one": violated}
        else:
            res = structure.window_trials(ct, args.l, args.m, args.trials, args.seed)
            violated = 0
            for t in range(args.trials):
                surv = sorted(res.survivor_set(t))
                if surv and detect.longest_flash(ct.induced(surv)).length >= args.m:
                    violated += 1
            doc = {"mode": "window", "seed": args.seed, "l": args.l, "m": args.m, "trials": args.trials,
                   "mean_survivors": float(res.sizes.mean()), "trials_with_m_flash": violated}
    except structure.PreconditionFlash as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VIOLATION
    _emit(args, json.dumps(doc, sort_keys=True) + "\n")
    return EXIT_VIOLATION if violated else EXIT_OK


def cmd_bounds(args) -> int:
    tables = bounds.build_tables(args.l, args.kmax, f_variant=args.f_variant)
    fmt = "structured" if args.format == "structured" else "csv"
    _emit(args, bounds.emit_table([tables[l] for l in args.l], fmt))
    return EXIT_OK


def cmd_search(args) -> int:
    budget = args.budget if args.budget is not None else search.default_budget()
    if args.what in ("f", "t"):
        fn = search.compute_f if args.what == "f" else search.compute_t
        out = fn(args.l, args.k, n_cap=args.n_cap, budget=budget, threads=args.threads)
        name = f"{args.what}({args.l},{args.k})"
        if out.exact:
            print(f"{name} = {out.value}")
        else:
            print(f"{name} >= {out.value} (not exact)")
        if args.output or args.verbose:
            text = json.dumps(out.to_dict(), sort_keys=True) + "\n"
            if args.output:
                Path(args.output).write_text(text)
            else:
                sys.stdout.write(text)
        if out.witness is not None and not args.output:
            sys.stdout.write(model.serialize(out.witness, [f"witness for {name}"]))
        return EXIT_BUDGET if out.budget_exceeded else EXIT_OK
    if args.what == "forcing":
        t = _tournament_from_args(args)
        res = search.forcing_check(t, args.l, args.k, budget, args.threads, checkpoint=args.checkpoint)
        _emit(args, json.dumps(res.to_dict(), sort_keys=True) + "\n")
        return EXIT_BUDGET if res.status == search.BUDGET_EXCEEDED else EXIT_OK
    # scan
    try:
        entries = search.adversarial_scan(args.l, args.k, n_cap=args.n_cap, budget=budget, threads=args.threads)
    except search.FlashbowError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_BUDGET
    _emit(args, json.dumps([e.to_dict() for e in entries], sort_keys=True) + "\n")
    return EXIT_OK


def cmd_decompose(args) -> int:
    ct = _load(args.file)
    try:
        dec = structure.decompose(ct, args.k, args.r, l=args.l, seed=args.seed)
    except structure.NoRobustPivot as exc:
        dec = exc.partial
        print("no robust pivot", file=sys.stderr)
    except (structure.PreconditionRainbow, structure.PreconditionFlash) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VIOLATION
    doc = {"seed": args.seed, "k": dec.k, "r": dec.r, "l": dec.l, "R": sorted(dec.R), "ordering": dec.ordering,
           "prefix": dec.prefix, "pivot": dec.pivot, "U": sorted(dec.U),
           "U_by_color": {str(a): sorted(s) for a, s in dec.U_by_color.items()},
           "C": {str(a): sorted(s) for a, s in dec.C.items()},
           "rainbow_to_pivot": {str(a): list(w) for a, w in dec.rainbow_to_pivot.items()},
           "classes": {str(a): [{"signature": list(sig), "members": sorted(m)} for sig, m in cls.items()]
                       for a, cls in dec.classes.items()},
           "checks": dec.checks}
    _emit(args, json.dumps(doc, sort_keys=True) + "\n")
    return EXIT_VIOLATION if dec.checks and not all(dec.checks.values()) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="flashbow", description="Flashes and rainbows in edge-coloured tournaments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt=True):
        sp.add_argument("--output", "-o", help="write data here instead of stdout")
        if fmt:
            sp.add_argument("--format", choices=["ect", "structured", "csv"], default="ect")

    def tournament_source(sp):
        sp.add_argument("--input", help="take the tournament from an ect file")
        sp.add_argument("--kind", choices=["transitive", "random", "reversed"], default="transitive")
        sp.add_argument("--n", type=_positive)
        sp.add_argument("--seed", type=_nonneg, default=0)

    c = sub.add_parser("construct", help="generate explicit colourings")
    c.add_argument("what", choices=["grid", "antichain", "reversed", "block"])
    c.add_argument("--l", type=_positive, required=True)
    c.add_argument("--k", type=_positive, required=True)
    c.add_argument("--block-size", type=_positive, default=2)
    tournament_source(c)
    common(c)
    c.set_defaults(func=cmd_construct)

    c = sub.add_parser("check", help="longest flash and rainbow with certificates")
    c.add_argument("file")
    c.add_argument("--l", type=_positive, required=True)
    c.add_argument("--k", type=_positive, required=True)
    c.add_argument("--assert-free", action="store_true", help="exit 1 unless flash < l and rainbow < k")
    c.add_argument("--budget", type=_positive)
    common(c, fmt=False)
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("profile", help="colour profiles, robustness radii, strongly robust vertices")
    c.add_argument("file")
    c.add_argument("--k", type=_positive, default=3)
    c.add_argument("--cap", type=_nonneg)
    common(c, fmt=False)
    c.set_defaults(func=cmd_profile)

    c = sub.add_parser("sample", help="random deletion samplers")
    c.add_argument("what", choices=["deletion", "window"])
    c.add_argument("file")
    c.add_argument("--l", type=_positive, required=True)
    c.add_argument("--m", type=_positive, default=2)
    c.add_argument("--trials", type=_positive, default=1000)
    c.add_argument("--seed", type=_nonneg, default=0)
    common(c, fmt=False)
    c.set_defaults(func=cmd_sample)

    c = sub.add_parser("bounds", help="bound table as CSV")
    c.add_argument("--l", type=_positive, nargs="+", required=True)
    c.add_argument("--kmax", type=_positive, required=True)
    c.add_argument("--f-variant", action="store_true", help="bound f (transitive) instead of t")
    common(c)
    c.set_defaults(func=cmd_bounds, format="csv")

    c = sub.add_parser("search", help="exact values and forcing checks")
    c.add_argument("what", choices=["f", "t", "forcing", "scan"])
    c.add_argument("--l", type=_positive, required=True)
    c.add_argument("--k", type=_positive, required=True)
    c.add_argument("--n-cap", type=_positive)
    c.add_argument("--budget", type=_positive)
    c.add_argument("--threads", type=_positive, default=1)
    c.add_argument("--checkpoint", help="resumable state file for forcing")
    c.add_argument("--verbose", action="store_true", help="also print the full outcome as JSON")
    tournament_source(c)
    common(c, fmt=False)
    c.set_defaults(func=cmd_search)

    c = sub.add_parser("decompose", help="robust-pivot decomposition report")
    c.add_argument("file")
    c.add_argument("--k", type=_positive, required=True)
    c.add_argument("--r", type=_positive, required=True)
    c.add_argument("--l", type=_positive)
    c.add_argument("--seed", type=_nonneg, default=0)
    common(c, fmt=False)
    c.set_defaults(func=cmd_decompose)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("construct", "search") and getattr(args, "n", None) is None \
            and getattr(args, "input", None) is None and (
            (args.command == "construct" and args.what in ("antichain", "block"))
            or (args.command == "search" and args.what == "forcing")):
        parser.error("--n or --input is required")
    try:
        return args.func(args)
    except (model.EctParseError, FileNotFoundError) as exc:
        print(f"flashbow: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, construct.TooLarge, construct.SizeCapExceeded) as exc:
        print(f"flashbow: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except detect.StateBudgetExceeded as exc:
        print(f"flashbow: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
