"""Command-line interface: ``fmgraph <subcommand> ...``.

Exit codes: 0 on success, 1 on a domain error (invalid measure, infeasible
fit, bad file), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from fmgraph import analysis, families, fitting, integrals, io, render, transforms
from fmgraph.exceptions import FuzzyMeasureError
from fmgraph.lattice import DEFAULT_TOL, FuzzyMeasure, subset_label, validate_set_function
from fmgraph.sampling import GeneratorConfig, random_batch

OUT_DIR_ENV = "FMGRAPH_OUT_DIR"
BUILTIN_TABLE1 = "@table1"

log = logging.getLogger("fmgraph")


class _Printer:
    def __init__(self, full_precision: bool, stream=None):
        self.full = full_precision
        self.stream = stream or sys.stdout

    def num(self, v) -> str:
        if isinstance(v, (bool, np.bool_)):
            return "yes" if v else "no"
        if v is None:
            return "-"
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        return io.format_number(v, self.full)

    def __call__(self, *parts) -> None:
        print(*parts, file=self.stream)


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _names(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _load(args, path) -> FuzzyMeasure:
    return io.load_measure(path, tol=args.tol, validate=not getattr(args, "no_validate", False)).measure


def _dataset(path: str) -> fitting.Dataset:
    return io.table1() if path == BUILTIN_TABLE1 else io.load_dataset(path)


def _write(path: Optional[str], text: str, out: _Printer) -> None:
    if path is None or path == "-":
        out.stream.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _require_seed(args) -> None:
    if args.seed is None:
        args.parser.error("--seed is required for randomized output")


# ------------------------------------------------------------------ commands


def cmd_validate(args, out: _Printer) -> int:
    mf = io.load_measure(args.measure, tol=args.tol, validate=False)
    report = validate_set_function(mf.measure, args.tol)
    out(report.describe(limit=args.limit))
    return 0 if report.ok else 1


def cmd_props(args, out: _Printer) -> int:
    mu = _load(args, args.measure)
    summary = analysis.measure_summary(mu, args.tol)
    rep = families.family_report(mu, args.tol)
    out(f"n\t{mu.n}")
    out(f"entropy\t{out.num(summary.entropy)}")
    out(f"orness\t{out.num(summary.orness)}")
    out("level_means\t" + ",".join(out.num(v) for v in summary.level_means))
    for key, value in summary.flags.items():
        out(f"{key}\t{out.num(value)}")
    out(f"tolerant_order\t{out.num(rep.tolerant_order)}")
    out(f"intolerant_order\t{out.num(rep.intolerant_order)}")
    if rep.interactive is None:
        out("interactive\t-")
    else:
        out(f"interactive\tk={rep.interactive[0]} K={out.num(rep.interactive[1])}")
    out(f"symmetry_p\t{rep.symmetry_p}")
    out("indifference_blocks\t" + " ".join(subset_label(b) for b in rep.basis))
    return 0


def cmd_index(args, out: _Printer) -> int:
    mu = _load(args, args.measure)
    kinds = transforms.INDEX_KINDS if args.kind == "all" else (args.kind,)
    cols = [transforms.index_vector(mu, k).values.values for k in kinds]
    out("\t".join(("subset", "mu") + tuple(kinds)))
    for a in range(len(mu)):
        row = [subset_label(a, args.labels), out.num(mu.values[a])] + [out.num(c[a]) for c in cols]
        out("\t".join(row))
    if "shapley_comprehensive" in kinds:
        out("shapley_values\t" + ",".join(out.num(v) for v in transforms.shapley_values(mu)))
    return 0


def cmd_integrate(args, out: _Printer) -> int:
    mu = _load(args, args.measure)
    kinds = tuple(integrals.INTEGRALS) if args.kind == "all" else (args.kind,)
    for k in kinds:
        out(f"{k}\t{out.num(integrals.INTEGRALS[k](mu, args.x))}")
    return 0


def _norm_from_args(args, dataset: fitting.Dataset) -> fitting.Normalization:
    if args.offset is None and args.scale is None:
        return fitting.default_normalization(dataset)
    default = fitting.default_normalization(dataset)
    return fitting.Normalization(
        default.offset if args.offset is None else args.offset,
        default.scale if args.scale is None else args.scale,
    )


def _report_fit(res: fitting.FitResult, out: _Printer, label_mode: str, header: str = "") -> None:
    if header:
        out(header)
    out(f"objective\t{out.num(res.objective)}")
    for a in range(1, len(res.measure) - 1):
        out(f"{subset_label(a, label_mode)}\t{out.num(res.measure.values[a])}")


def cmd_fit(args, out: _Printer) -> int:
    dataset = _dataset(args.dataset)
    norm = _norm_from_args(args, dataset)
    out(f"normalization\t{norm.describe()}")
    if not args.incremental:
        res = fitting.fit(dataset, norm, tol=args.tol)
        _report_fit(res, out, args.labels)
        if args.output:
            io.save_measure(args.output, res.measure, name="fit", label_mode=args.labels)
        return 0

    out_dir = args.out_dir or os.environ.get(OUT_DIR_ENV)
    trace = fitting.fit_incremental(dataset, norm, tol=args.tol)
    manifest = {"normalization": {"offset": norm.offset, "scale": norm.scale}, "style": args.style, "rounds": []}
    if out_dir:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
    cfg = render.StyleConfig(style=args.style, label_mode=args.labels)
    for t, res in enumerate(trace, start=1):
        _report_fit(res, out, args.labels, header=f"# round {t}")
        if out_dir:
            stem = f"round_{t:02d}"
            io.save_measure(Path(out_dir) / f"{stem}.json", res.measure, name=stem, label_mode=args.labels)
            svg = render.render_svg(render.layout(res.measure, cfg), title=f"round {t}")
            (Path(out_dir) / f"{stem}.svg").write_text(svg, encoding="utf-8")
            manifest["rounds"].append(
                {"round": t, "alternatives": list(dataset.labels[:t]), "objective": res.objective, "measure": f"{stem}.json", "svg": f"{stem}.svg"}
            )
    if out_dir:
        (Path(out_dir) / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
        out(f"wrote {len(trace)} rounds to {out_dir}")
    return 0


def cmd_random(args, out: _Printer) -> int:
    measures = random_batch(GeneratorConfig(args.n, args.seed, args.count))
    if args.out_dir:
        Path(args.out_dir).mkdir(parents=True, exist_ok=True)
        for k, mu in enumerate(measures):
            io.save_measure(Path(args.out_dir) / f"random_{k:04d}.json", mu, name=f"random {k}")
        out(f"wrote {len(measures)} measures to {args.out_dir}")
        return 0
    if args.count == 1:
        _write(args.output, io.dumps_measure(measures[0], name=f"random seed {args.seed}"), out)
    else:
        docs = [io.measure_to_dict(mu, name=f"random {k}") for k, mu in enumerate(measures)]
        _write(args.output, json.dumps(docs, indent=2) + "\n", out)
    return 0


def cmd_render(args, out: _Printer) -> int:
    mu = _load(args, args.measure)
    cfg = render.StyleConfig(style=args.style, overlay=args.overlay, label_mode=args.labels)
    text = render.render_dot(mu, cfg) if args.format == "dot" else render.render_svg(render.layout(mu, cfg))
    _write(args.output, text, out)
    return 0


def cmd_compare(args, out: _Printer) -> int:
    n = args.n if args.n is not None else len(args.x)
    res = analysis.integral_comparison(args.x, GeneratorConfig(n, args.seed, args.samples))
    if args.output:
        io.write_csv(args.output, ("sample",) + res.columns, ([k + 1, *row] for k, row in enumerate(res.values.tolist())), out.full)
    if args.svg:
        svg = render.plot_lines(res.values.T, names=res.columns, title="integrals over random measures", ylabel="integral value", y_range=(0.0, 1.0))
        Path(args.svg).write_text(svg, encoding="utf-8")
    for name, med in zip(res.columns, res.medians):
        out(f"median_{name}\t{out.num(med)}")
    out(f"frac_choquet_ge_sugeno\t{out.num(res.frac_choquet_ge_sugeno)}")
    out(f"frac_sugeno_ge_pan\t{out.num(res.frac_sugeno_ge_pan)}")
    return 0


def cmd_profile(args, out: _Printer) -> int:
    dataset = _dataset(args.dataset)
    norm = _norm_from_args(args, dataset)
    out(f"normalization\t{norm.describe()}")
    prof = analysis.alternatives_choquet_profile(dataset, GeneratorConfig(dataset.n, args.seed, args.samples), norm)
    if args.output:
        io.write_csv(args.output, ("sample",) + prof.labels, ([k + 1, *row] for k, row in enumerate(prof.values.tolist())), out.full)
    if args.svg:
        # one line per sampled measure across the alternatives, median in red
        svg = render.plot_lines(
            prof.values, names=[f"measure {k + 1}" for k in range(len(prof.values))], title="Choquet value per alternative",
            xlabel="alternative", ylabel="Choquet integral", y_range=(0.0, 1.0),
        )
        Path(args.svg).write_text(svg, encoding="utf-8")
    for lab, med in zip(prof.labels, prof.medians):
        out(f"median_{lab}\t{out.num(med)}")
    return 0


def _measures_from_args(args) -> tuple[list[FuzzyMeasure], list[str]]:
    if args.measures:
        files = [io.load_measure(p, tol=args.tol, validate=True) for p in args.measures]
        return [f.measure for f in files], [f.name or Path(p).stem for f, p in zip(files, args.measures)]
    if args.samples is None or args.n is None:
        args.parser.error("give measure files, or --samples, --n and --seed")
    _require_seed(args)
    ms = random_batch(GeneratorConfig(args.n, args.seed, args.samples))
    return ms, [f"mu{k + 1}" for k in range(len(ms))]


def cmd_cluster(args, out: _Printer) -> int:
    measures, names = _measures_from_args(args)
    if len(measures) == 1:
        fm = analysis.subset_features(measures[0], args.features or ("mu", "nonadditivity"), args.labels)
    else:
        fm = analysis.measure_features(measures, args.features or ("entropy", "orness"), names)
    dend = analysis.hierarchical_cluster(fm, standardize=not args.raw)
    out("step\tleft\tright\theight\tsize")
    for k, m in enumerate(dend.merges, start=1):
        out(f"{k}\t{m.left}\t{m.right}\t{out.num(m.height)}\t{m.size}")
    out("leaf_order\t" + " ".join(fm.row_ids[i] for i in dend.leaf_order))
    if args.output:
        io.write_csv(args.output, ("left", "right", "height", "size"), ([m.left, m.right, m.height, m.size] for m in dend.merges), out.full)
    if args.svg:
        Path(args.svg).write_text(render.plot_heatmap(fm, dend, title="feature heatmap"), encoding="utf-8")
    return 0


def cmd_summarize(args, out: _Printer) -> int:
    measures, names = _measures_from_args(args)
    rows = []
    out("measure\tentropy\torness")
    for name, mu in zip(names, measures):
        e, o = transforms.entropy(mu, args.tol), transforms.orness(mu)
        rows.append((name, e, o))
        out(f"{name}\t{out.num(e)}\t{out.num(o)}")
    if args.output:
        io.write_csv(args.output, ("measure", "entropy", "orness"), rows, out.full)
    if args.svg:
        n = measures[0].n
        svg = render.plot_scatter(
            [(e, o) for _, e, o in rows], [r[0] for r in rows], (0.0, math.log(n)), (0.0, 1.0), title="entropy and orness"
        )
        Path(args.svg).write_text(svg, encoding="utf-8")
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="validation tolerance (default %(default)g)")
    common.add_argument("--full-precision", action="store_true", help="print numbers with full precision instead of 6 significant digits")
    common.add_argument("--labels", choices=("canonical", "figure"), default="canonical", help="subset label style")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = argparse.ArgumentParser(prog="fmgraph", description="Discrete fuzzy measures: indices, integrals, fitting and lattice graphs.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        sp.set_defaults(func=func, parser=sp)
        return sp

    sp = add("validate", cmd_validate, "check boundary and monotonicity conditions of a measure file")
    sp.add_argument("measure", help="measure JSON file")
    sp.add_argument("--limit", type=int, default=10, help="maximum violated edges to list")

    sp = add("props", cmd_props, "print summary indices and family memberships")
    sp.add_argument("measure", help="measure JSON file")
    sp.add_argument("--no-validate", action="store_true", help="skip validation on load")

    sp = add("index", cmd_index, "print a per-subset index table")
    sp.add_argument("measure", help="measure JSON file")
    sp.add_argument("--kind", choices=transforms.INDEX_KINDS + ("all",), default="all", help="index to print")

    sp = add("integrate", cmd_integrate, "evaluate Choquet, Sugeno and pan integrals")
    sp.add_argument("measure", help="measure JSON file")
    sp.add_argument("--x", type=_floats, required=True, help="comma-separated input vector")
    sp.add_argument("--kind", choices=tuple(integrals.INTEGRALS) + ("all",), default="all", help="integral to evaluate")

    def norm_flags(sp):
        sp.add_argument("--offset", type=float, help="normalization offset (default: minimum partial score)")
        sp.add_argument("--scale", type=float, help="normalization scale (default: score range)")

    sp = add("fit", cmd_fit, "fit a measure to scored alternatives by least absolute deviation")
    sp.add_argument("dataset", help=f"dataset CSV, or {BUILTIN_TABLE1} for the bundled example")
    norm_flags(sp)
    sp.add_argument("--incremental", action="store_true", help="fit alternatives 1..t for every t")
    sp.add_argument("--out-dir", help=f"write per-round JSON, SVG and manifest here (default ${OUT_DIR_ENV})")
    sp.add_argument("--style", choices=render.STYLES, default="height_on", help="lattice style for per-round SVGs")
    sp.add_argument("-o", "--output", help="write the fitted measure to this JSON file")

    sp = add("random", cmd_random, "generate seeded random fuzzy measures")
    sp.add_argument("--n", type=int, required=True, help="number of criteria")
    sp.add_argument("--seed", type=int, required=True, help="RNG seed")
    sp.add_argument("--count", type=int, default=1, help="number of measures")
    sp.add_argument("-o", "--output", help="output JSON file (default stdout)")
    sp.add_argument("--out-dir", help="write one JSON file per measure here")

    sp = add("render", cmd_render, "draw the lattice graph of a measure")
    sp.add_argument("measure", help="measure JSON file")
    sp.add_argument("--style", choices=render.STYLES + ("height",), default="topological", help="vertex height rule")
    sp.add_argument("--overlay", choices=render.OVERLAYS, default="none", help="index drawn as vertex circles")
    sp.add_argument("--format", choices=("svg", "dot"), default="svg", help="output format")
    sp.add_argument("-o", "--output", help="output file (default stdout)")

    sp = add("compare-integrals", cmd_compare, "compare the three integrals of one input over random measures")
    sp.add_argument("--x", type=_floats, required=True, help="comma-separated input vector in [0, 1]")
    sp.add_argument("--n", type=int, help="number of criteria (default: length of --x)")
    sp.add_argument("--samples", type=int, default=200, help="number of random measures")
    sp.add_argument("--seed", type=int, required=True, help="RNG seed")
    sp.add_argument("-o", "--output", help="CSV of per-sample integral values")
    sp.add_argument("--svg", help="line plot of the three series with the median")

    sp = add("profile-alternatives", cmd_profile, "Choquet values of every alternative over random measures")
    sp.add_argument("dataset", help=f"dataset CSV, or {BUILTIN_TABLE1}")
    norm_flags(sp)
    sp.add_argument("--samples", type=int, default=1000, help="number of random measures")
    sp.add_argument("--seed", type=int, required=True, help="RNG seed")
    sp.add_argument("-o", "--output", help="CSV of per-sample values")
    sp.add_argument("--svg", help="line plot with the per-alternative median")

    def batch_flags(sp):
        sp.add_argument("measures", nargs="*", help="measure JSON files")
        sp.add_argument("--samples", type=int, help="generate this many random measures instead")
        sp.add_argument("--n", type=int, help="criteria count for generated measures")
        sp.add_argument("--seed", type=int, help="RNG seed for generated measures")
        sp.add_argument("-o", "--output", help="CSV output")
        sp.add_argument("--svg", help="SVG output")

    sp = add("cluster", cmd_cluster, "average-linkage clustering of subsets (one measure) or measures (several)")
    batch_flags(sp)
    sp.add_argument("--features", type=_names, help="comma-separated feature names")
    sp.add_argument("--raw", action="store_true", help="cluster without z-standardizing columns")

    sp = add("summarize", cmd_summarize, "entropy and orness of measures")
    batch_flags(sp)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s", stream=sys.stderr)
    out = _Printer(args.full_precision)
    try:
        return args.func(args, out)
    except (FuzzyMeasureError, ValueError, OSError) as exc:
        print(f"fmgraph: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
