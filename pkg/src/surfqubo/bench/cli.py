"""Command line: ``surfqubo-bench {scaling,threshold,demo,ground-stats,fit}``.

Every verb writes its per-trial (or per-fit) CSV to ``--out`` and derived
tables and an SVG figure next to it. Exit status: 0 on success, 2 for a bad
config or arguments, 3 for file I/O failures.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import plots
from .config import DEFAULTS, ConfigError, ConfigReadError, experiment_from_pairs, fit_from_pairs, read_pairs
from .fit import FitError, fit_power_law
from .runner import (
    EXPONENT_HEADER,
    GROUND_HEADER,
    SCALING_HEADER,
    THRESHOLD_HEADER,
    _lattice,
    bracket_from_rates,
    ground_summary,
    logical_rates,
    read_records,
    records_to_csv,
    run_records,
    scaling_exponents,
    scaling_summary,
    table_to_csv,
)

EXIT_CONFIG, EXIT_IO = 2, 3
VERBS = {"scaling": "scaling", "threshold": "threshold", "demo": "demo", "ground-stats": "ground_state_stats"}


class _IOFailure(Exception):
    pass


def _write(path: Path, text: str):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise _IOFailure(f"cannot write {path}: {exc}") from exc


def _sibling(out: Path, suffix: str) -> Path:
    return out.with_name(out.stem + suffix)


def _spec(verb: str, args):
    kind = VERBS[verb]
    pairs = read_pairs(args.config) if args.config else {}
    spec = experiment_from_pairs(kind, pairs) if pairs else DEFAULTS[kind]
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.workers is not None:
        changes["workers"] = args.workers
    try:
        spec = replace(spec, **changes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out = Path(args.out or spec.out or f"{verb}.csv")
    return spec, out


def _plot(fn, path, *a, **kw):
    try:
        fn(*a, path=path, **kw)
    except OSError as exc:
        raise _IOFailure(f"cannot write {path}: {exc}") from exc


def cmd_scaling(spec, out: Path):
    recs = run_records(spec)
    _write(out, records_to_csv(recs))
    summary = scaling_summary(recs)
    _write(_sibling(out, ".summary.csv"), table_to_csv(SCALING_HEADER, summary))
    exps = scaling_exponents(summary)
    _write(_sibling(out, ".exponents.csv"), table_to_csv(EXPONENT_HEADER, exps))
    success = _success_rows(recs)
    _plot(plots.plot_scaling, Path(spec.plot or _sibling(out, ".svg")), summary, success)
    for method, p, slope, _, n in exps:
        print(f"{method:5s} p={p:<7g} exponent={slope:.3f} over {n} sizes")


def _success_rows(recs):
    cells = {}
    for r in recs:
        ok, n = cells.get((r.method, r.p, r.N_d), (0, 0))
        cells[(r.method, r.p, r.N_d)] = (ok + r.syndrome_satisfied, n + 1)
    return [(m, p, n, ok / tot) for (m, p, n), (ok, tot) in sorted(cells.items())]


def cmd_threshold(spec, out: Path):
    recs = run_records(spec)
    _write(out, records_to_csv(recs))
    rates = logical_rates(recs)
    _write(_sibling(out, ".rates.csv"), table_to_csv(THRESHOLD_HEADER, rates))
    brackets = {m: bracket_from_rates(rates, m) for m in spec.methods}
    d_small, d_large = min(spec.distances), max(spec.distances)
    rows = [(m, d_small, d_large, *(b or (float("nan"), float("nan")))) for m, b in brackets.items()]
    _write(_sibling(out, ".bracket.csv"), table_to_csv(["method", "d_small", "d_large", "p_low", "p_high"], rows))
    _plot(plots.plot_threshold, Path(spec.plot or _sibling(out, ".svg")), rates, bracket=brackets)
    for m, b in brackets.items():
        print(f"{m}: crossing of d={d_small} and d={d_large} " + (f"in [{b[0]:g}, {b[1]:g}]" if b else "not found"))


def cmd_ground(spec, out: Path):
    recs = run_records(spec)
    _write(out, records_to_csv(recs))
    rows = ground_summary(recs)
    _write(_sibling(out, ".summary.csv"), table_to_csv(GROUND_HEADER, rows))
    _plot(plots.plot_ground, Path(spec.plot or _sibling(out, ".svg")), rows)
    for m, d, p, n, f, se, _, _ in rows:
        print(f"{m:5s} d={d:<3d} p={p:<6g} ground-state proxy {100 * f:5.1f}% +- {100 * se:.1f}")


def cmd_demo(spec, out: Path):
    full = run_records(spec, patterns=True)
    recs = [r for r, _, _ in full]
    _write(out, records_to_csv(recs))
    first, actual, estimate = full[0]
    lat = _lattice(first.d)
    rows = [(q, lat.coords[q][0], lat.coords[q][1], int(actual[q]), int(estimate[q])) for q in range(lat.n_data)]
    _write(_sibling(out, ".patterns.csv"), table_to_csv(["qubit", "row", "col", "actual", "estimate"], rows))
    _plot(plots.plot_demo, Path(spec.plot or _sibling(out, ".svg")), lat, actual, estimate)
    for r in recs:
        print(f"{r.method} d={r.d} p={r.p:g} trial={r.trial}: syndrome "
              f"{'satisfied' if r.syndrome_satisfied else 'BROKEN'}, "
              f"{'logical error' if r.logical_error else 'trivial residual'}")


def cmd_fit(args):
    if not args.config:
        raise ConfigError("fit needs --config with an input key")
    spec = fit_from_pairs(read_pairs(args.config))
    out = Path(args.out or spec.out or "fit.csv")
    try:
        recs = read_records(spec.input)
    except OSError as exc:
        raise _IOFailure(f"cannot read {spec.input}: {exc}") from exc
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"{spec.input}: malformed results file ({exc})") from exc
    recs = [r for r in recs if r.method == spec.method and (not spec.distances or r.d in spec.distances)]
    if not recs:
        raise ConfigError(f"no {spec.method} rows in {spec.input}")
    if spec.model == "loglog":
        exps = scaling_exponents(scaling_summary(recs))
        _write(out, table_to_csv(EXPONENT_HEADER, exps))
        for m, p, slope, _, n in exps:
            print(f"{m} p={p:g} exponent={slope:.3f} ({n} sizes)")
        return
    rates = logical_rates(recs)
    p_th = spec.p_th
    if p_th is None:
        b = bracket_from_rates(rates, spec.method)
        if b is None:
            raise FitError("no crossing in the input; set p_th explicitly")
        p_th = 0.5 * (b[0] + b[1])
    rows = []
    for d in sorted({r[1] for r in rates}):
        sel = [r for r in rates if r[1] == d]
        c1, c2 = fit_power_law([r[2] for r in sel], [r[5] for r in sel], d, p_th, spec.p_min, spec.p_max)
        rows.append((spec.method, d, (d + 1) // 2, p_th, c1, c2))
        print(f"{spec.method} d={d}: c1={c1:.4f} c2={c2:.4f} (p_th={p_th:g})")
    _write(out, table_to_csv(["method", "d", "d_e", "p_th", "c1", "c2"], rows))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="surfqubo-bench", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)
    for verb in (*VERBS, "fit"):
        sp = sub.add_parser(verb)
        sp.add_argument("--config", help="key = value config file")
        sp.add_argument("--seed", type=int, help="master seed (overrides the config)")
        sp.add_argument("--out", help="output CSV path")
        if verb != "fit":
            sp.add_argument("--workers", type=int, help="worker processes (overrides the config)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "fit":
            cmd_fit(args)
            return 0
        spec, out = _spec(args.verb, args)
        {"scaling": cmd_scaling, "threshold": cmd_threshold, "demo": cmd_demo, "ground-stats": cmd_ground}[
            args.verb
        ](spec, out)
    except (ConfigReadError, _IOFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, FitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
