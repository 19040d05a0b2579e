"""Command line entry point: ``arithsym {gen,stats,quality,diag,score,difficulty}``.

Exit codes: 0 success, 1 data/module error, 2 usage error.  Every command
writes to ``--out`` (``-`` is standard output) and takes all randomness
from ``--seed`` (default ``$ARITHSYM_SEED``, else 0).
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path
from typing import Optional

from . import diagnostics, generator, scoring, stats, subgroup
from .errors import ArithError
from .taskspec import Operator, Rule, TaskSpec, parse_spec

SEED_ENV = "ARITHSYM_SEED"

TABLE3_RULES = {
    Operator.ADD: ["none", "plus1", "plus15", "plus115", "mod100", "mod50", "mod10"],
    Operator.MUL: ["none", "times2", "times4", "times8", "mod100", "mod50", "mod10"],
}


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"arithsym: {SEED_ENV} must be an integer, got {raw!r}")


def emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


# -- gen ---------------------------------------------------------------------


def cmd_gen(args) -> int:
    spec = parse_spec(args.spec, seed=args.seed)
    if args.all:
        d = generator.full_dataset(spec)
    else:
        d = generator.sample_dataset(spec, args.size, args.seed)
    parts = {"": d}
    if args.split:
        if len(args.split) != 3:
            raise UsageError("--split takes exactly three fractions")
        if args.out == "-":
            raise UsageError("--split needs a file --out")
        ratios = generator.SplitRatios(*args.split)
        train, val, test = generator.split_dataset(d, ratios, args.seed)
        parts = {"train": train, "val": val, "test": test}
    if args.out == "-":
        for part in parts.values():
            sys.stdout.writelines(generator.record_to_line(r) + "\n" for r in part.records)
        return 0
    out = Path(args.out)
    for name, part in parts.items():
        path = out if not name else out.with_name(f"{out.stem}.{name}{out.suffix}")
        generator.write_records(part, path)
    return 0


# -- stats -------------------------------------------------------------------


def _stats_rows(specs: list[TaskSpec], args) -> list[list[str]]:
    results = []
    for spec in specs:
        st = stats.label_space_stats(
            spec,
            budget=args.budget,
            sample_size=args.sample_size if args.sampled else None,
            seed=args.seed,
            workers=args.workers,
        ).rounded()
        results.append((spec, st))
    cols = max([5] + [len(st.per_position_entropy) for _, st in results])
    header = ["task", "format"] + [f"H(C{i})" for i in range(1, cols + 1)] + ["|L|", "H(L)"]
    if args.sampled:
        header += ["mode", "sample_size", "seed"]
    rows = [header]
    for spec, st in results:
        hs = [f"{h:.4f}" for h in st.per_position_entropy]
        hs += ["-"] * (cols - len(hs))
        task = f"{spec.operator.value}:n={spec.n}:rule={spec.rule.token}"
        row = [task, spec.format.value] + hs + [str(st.joint_cardinality), f"{st.joint_entropy:.4f}"]
        if args.sampled:
            row += [st.mode, str(st.sample_size), str(st.seed)]
        rows.append(row)
    return rows


def cmd_stats(args) -> int:
    if args.all_rules:
        base = parse_spec(args.spec) if args.spec else TaskSpec(Operator.ADD, args.n)
        specs = [
            base.with_(operator=op, rule=Rule.from_token(tok))
            for op in (Operator.ADD, Operator.MUL)
            for tok in TABLE3_RULES[op]
        ]
    elif args.spec:
        specs = [parse_spec(args.spec)]
    else:
        raise UsageError("stats needs a task spec or --all-rules")
    emit(_csv(_stats_rows(specs, args)), args.out)
    return 0


# -- quality -----------------------------------------------------------------


def cmd_quality(args) -> int:
    spec = parse_spec(args.spec)
    if args.subgroup:
        groups = [subgroup.parse_subgroup(s) for s in args.subgroup]
    elif args.enumerate:
        groups = subgroup.enumerate_subgroups(spec, args.max_inputs, args.ic_size)
    else:
        raise UsageError("quality needs --subgroup or --enumerate")
    rows = [["task", "subgroup", "|D|", "|L|", "H(L)", "Q", "mode"]]
    for g in groups:
        rep = subgroup.quality(
            spec,
            g,
            budget=args.budget,
            sample_size=args.sample_size if args.sampled else None,
            seed=args.seed,
        )
        mode = rep.mode if rep.mode == "exact" else f"sampled({rep.sample_size};{rep.seed})"
        rows.append(
            [spec.canonical(), str(g), rep.domain_cardinality, rep.label_cardinality,
             f"{stats.round4(rep.label_entropy):.4f}", repr(rep.quality), mode]
        )
    emit(_csv(rows), args.out)
    return 0


# -- diag --------------------------------------------------------------------


def cmd_diag(args) -> int:
    if args.pair:
        spec = parse_spec(args.spec) if args.spec else diagnostics.TWO_DIGIT
        pairs = [args.pair]
    elif args.dataset:
        d = generator.read_records(args.dataset)
        spec, pairs = d.spec, d.pairs()
    else:
        raise UsageError("diag needs --pair or --dataset")
    sets = [
        diagnostics.build(args.method, a, b, spec=spec, chain_cap=args.chain_cap, mirror=args.mirror)
        for a, b in pairs
    ]
    ds = diagnostics.diagnostic_dataset(sets, spec)
    if args.out == "-":
        sys.stdout.writelines(generator.record_to_line(r) + "\n" for r in ds.records)
    else:
        generator.write_records(ds, args.out)
    if args.audit:
        emit("\n".join(diagnostics.audit_rows(sets)) + "\n", args.audit)
    bad = [s for s in sets if s.reconstruction.evaluate() != s.source[0] * s.source[1]]
    if bad:
        print(f"arithsym: {len(bad)} reconstructions do not match a*b", file=sys.stderr)
        return 1
    return 0


# -- score -------------------------------------------------------------------


def _score_file(d: generator.Dataset, pred_path) -> scoring.ScoreReport:
    preds = scoring.read_predictions(pred_path)
    return scoring.score(scoring.join_predictions(d, preds), d.spec)


def cmd_score(args) -> int:
    d = generator.read_records(args.dataset)
    if not args.predictions and not args.run:
        raise UsageError("score needs --predictions or --run")
    if args.predictions:
        rep = _score_file(d, args.predictions)
        if args.out == "-":
            sys.stdout.write(scoring.report_text(rep, f"{d.spec} vs {args.predictions}") + "\n")
            sys.stdout.write(scoring.report_csv(rep))
        else:
            print(scoring.report_text(rep, f"{d.spec} vs {args.predictions}"))
            emit(scoring.report_csv(rep), args.out)
    if args.run:
        runs = {}
        for item in args.run:
            label, sep, path = item.partition("=")
            if not sep:
                raise UsageError(f"--run expects LABEL=PATH, got {item!r}")
            runs[label] = _score_file(d, path)
        emit(scoring.ucurve_csv(runs), args.ucurve or "-")
    return 0


# -- difficulty --------------------------------------------------------------


def cmd_difficulty(args) -> int:
    if args.values:
        est = subgroup.difficulty_estimate(args.values)
        label = "values"
    elif args.spec:
        spec = parse_spec(args.spec)
        if args.subgroup:
            groups = [subgroup.parse_subgroup(s) for s in args.subgroup]
        else:
            # marginal label entropy of each output digit
            groups = [subgroup.SubgroupSpec((), (), (i,)) for i in range(1, spec.width + 1)]
        est = subgroup.difficulty_for_subgroups(spec, groups)
        label = spec.canonical()
    else:
        raise UsageError("difficulty needs a task spec or --values")
    rows = [["task", "m", "h_hat", "zeta_proxy"], [label, est.m, repr(est.geometric_mean), repr(est.zeta_proxy)]]
    emit(_csv(rows), args.out)
    return 0


# -- parser ------------------------------------------------------------------


class UsageError(Exception):
    pass


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A,B got {text!r}")
    return a, b


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"RNG seed (default ${SEED_ENV} or 0)")
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    common.add_argument("--budget", type=int, default=stats.DEFAULT_BUDGET, help="max operand pairs for exact counting")
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1)

    p = argparse.ArgumentParser(prog="arithsym", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a dataset")
    g.add_argument("spec")
    how = g.add_mutually_exclusive_group(required=True)
    how.add_argument("--all", action="store_true", help="every operand pair")
    how.add_argument("--size", type=int, help="uniform sample size")
    g.add_argument("--split", type=_floats, help="train,val,test fractions, e.g. 0.8,0.1,0.1")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("stats", parents=[common], help="label-space statistics")
    s.add_argument("spec", nargs="?")
    s.add_argument("--all-rules", action="store_true", help="sweep the 14 rule-perturbation rows")
    s.add_argument("--n", type=int, default=2, help="operand width for --all-rules without a spec")
    s.add_argument("--sampled", action="store_true")
    s.add_argument("--sample-size", type=int, default=100_000)
    s.set_defaults(func=cmd_stats)

    q = sub.add_parser("quality", parents=[common], help="subgroup quality Q(s)")
    q.add_argument("spec")
    q.add_argument("--subgroup", action="append", help="e.g. A{1,2}B{1}C{3}; repeatable")
    q.add_argument("--enumerate", action="store_true")
    q.add_argument("--max-inputs", type=int, default=2)
    q.add_argument("--ic-size", type=int, default=1)
    q.add_argument("--sampled", action="store_true")
    q.add_argument("--sample-size", type=int, default=100_000)
    q.set_defaults(func=cmd_quality)

    d = sub.add_parser("diag", parents=[common], help="partial-product diagnostic sets")
    d.add_argument("--method", required=True, choices=[m.value for m in diagnostics.Method])
    d.add_argument("--pair", type=_pair)
    d.add_argument("--dataset")
    d.add_argument("--spec", help="source task for --pair (default mul:n=2)")
    d.add_argument("--mirror", action="store_true", help="repetitive: also add b to itself a times")
    d.add_argument("--chain-cap", type=int, default=diagnostics.DEFAULT_CHAIN_CAP)
    d.add_argument("--audit", help="write the reconstruction audit csv here")
    d.set_defaults(func=cmd_diag)

    sc = sub.add_parser("score", parents=[common], help="score a prediction file")
    sc.add_argument("--dataset", required=True)
    sc.add_argument("--predictions")
    sc.add_argument("--run", action="append", help="LABEL=PREDICTIONS for the U-curve matrix; repeatable")
    sc.add_argument("--ucurve", help="U-curve csv path (default stdout)")
    sc.set_defaults(func=cmd_score)

    df = sub.add_parser("difficulty", parents=[common], help="geometric-mean difficulty aggregate")
    df.add_argument("spec", nargs="?")
    df.add_argument("--values", type=_floats)
    df.add_argument("--subgroup", action="append")
    df.set_defaults(func=cmd_difficulty)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = default_seed()
    try:
        return args.func(args)
    except UsageError as e:
        parser.error(str(e))  # exits 2
    except (ArithError, OSError) as e:
        print(f"arithsym {args.command}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
