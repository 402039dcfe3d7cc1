"""Trial execution and per-cell summaries for the experiment verbs."""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from functools import lru_cache

import numpy as np

from ..decode import DecoderConfig, decode
from ..lattice import build_lattice, extract_syndrome, sample_errors
from .config import ExperimentSpec
from .fit import FitError, binomial_se, fit_loglog_exponent, threshold_bracket


@dataclass(frozen=True)
class ResultRecord:
    d: int
    N_d: int
    p: float
    method: str
    trial: int
    seed: int
    syndrome_satisfied: bool
    logical_error: bool
    ground_state_proxy: bool
    iterations: int
    energy: int

    @property
    def failed(self) -> bool:
        # an open residual is exactly a broken syndrome
        return self.logical_error or not self.syndrome_satisfied


COLUMNS = [f.name for f in fields(ResultRecord)]


def trial_seed(master: int, d: int, p: float, trial: int) -> int:
    """Seed of one (d, p, trial) instance; shared by every method so they see the same errors."""
    key = (int(d), int(round(p * 1_000_000)), int(trial))
    state = np.random.SeedSequence(master, spawn_key=key).generate_state(2, dtype=np.uint32)
    return (int(state[0]) << 32 | int(state[1])) >> 1


@lru_cache(maxsize=64)
def _lattice(d: int):
    return build_lattice(d)


def run_trial(d: int, p: float, method: str, trial: int, seed: int, cfg: DecoderConfig) -> ResultRecord:
    return run_trial_patterns(d, p, method, trial, seed, cfg)[0]


def run_trial_patterns(d: int, p: float, method: str, trial: int, seed: int, cfg: DecoderConfig):
    """Record of one trial plus the sampled error and the decoded estimate."""
    lat = _lattice(d)
    rng = np.random.default_rng(seed)
    actual = sample_errors(lat, p, rng)
    s = extract_syndrome(lat, actual)
    cfg = DecoderConfig(cfg.J, cfg.h, cfg.alpha, cfg.anneal.with_(seed=int(rng.integers(2**63))))
    out = decode(lat, s, method, cfg, actual=actual)
    rec = ResultRecord(
        d, lat.n_data, p, method, trial, seed,
        out.syndrome_satisfied, bool(out.logical_error), bool(out.ground_state_proxy),
        out.iterations, out.energy,
    )
    return rec, actual, out.estimate


def _run_chunk(tasks, patterns=False):
    if patterns:
        return [run_trial_patterns(*t) for t in tasks]
    return [run_trial(*t) for t in tasks]


def run_records(spec: ExperimentSpec, workers: int | None = None, patterns: bool = False) -> list:
    """Every (d, p, trial, method) of ``spec``, ordered by (d, p, trial) and method order.

    With ``patterns`` each entry is ``(record, actual, estimate)`` instead.
    """
    tasks = []
    for d in spec.distances:
        for p in spec.error_rates:
            for trial in range(spec.trials):
                seed = trial_seed(spec.seed, d, p, trial)
                for method in spec.methods:
                    tasks.append((d, p, method, trial, seed, spec.decoder))
    workers = spec.workers if workers is None else workers
    if workers <= 1 or len(tasks) < 2:
        return _run_chunk(tasks, patterns)
    size = max(1, min(64, len(tasks) // (4 * workers)))
    chunks = [tasks[k:k + size] for k in range(0, len(tasks), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map keeps submission order, so the output never depends on scheduling
        done = pool.map(_run_chunk, chunks, [patterns] * len(chunks))
        return [r for chunk in done for r in chunk]


def _cell(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow([_cell(v) for v in astuple(r)])
    return buf.getvalue()


def read_records(path) -> list[ResultRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != COLUMNS:
            raise ValueError(f"{path}: expected columns {COLUMNS}")
        out = []
        for row in reader:
            out.append(ResultRecord(
                int(row["d"]), int(row["N_d"]), float(row["p"]), row["method"], int(row["trial"]),
                int(row["seed"]), row["syndrome_satisfied"] == "1", row["logical_error"] == "1",
                row["ground_state_proxy"] == "1", int(row["iterations"]), int(row["energy"]),
            ))
        return out


def table_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) if not isinstance(v, float) or v == v else "nan" for v in row])
    return buf.getvalue()


def _cells(records):
    cells = defaultdict(list)
    for r in records:
        cells[(r.method, r.d, r.p)].append(r)
    return cells


# --- scaling ---------------------------------------------------------------

SCALING_HEADER = ["method", "p", "d", "N_d", "trials", "mean_iterations", "se_iterations"]


def run_scaling(spec: ExperimentSpec, workers: int | None = None) -> list[ResultRecord]:
    return run_records(spec, workers)


def scaling_summary(records):
    rows = []
    for (method, d, p), rs in sorted(_cells(records).items(), key=lambda kv: (kv[0][0], kv[0][2], kv[0][1])):
        it = np.array([r.iterations for r in rs], dtype=np.float64)
        se = float(it.std(ddof=1) / np.sqrt(len(it))) if len(it) > 1 else float("nan")
        rows.append((method, p, d, rs[0].N_d, len(rs), float(it.mean()), se))
    return rows


EXPONENT_HEADER = ["method", "p", "exponent", "intercept", "points"]


def scaling_exponents(summary_rows):
    """One log-log fit of mean iterations against N_d per (method, p)."""
    groups = defaultdict(list)
    for method, p, d, n, _, mean, _ in summary_rows:
        groups[(method, p)].append((n, mean))
    out = []
    for (method, p), pts in sorted(groups.items()):
        try:
            slope, icpt = fit_loglog_exponent(pts)
        except FitError:
            slope = icpt = float("nan")
        out.append((method, p, slope, icpt, len(pts)))
    return out


# --- threshold -------------------------------------------------------------

THRESHOLD_HEADER = ["method", "d", "p", "trials", "failures", "P_L", "se"]


def run_threshold(spec: ExperimentSpec, workers: int | None = None) -> list[ResultRecord]:
    return run_records(spec, workers)


def logical_rates(records):
    """Rows of THRESHOLD_HEADER; a failure is a logical or an open residual."""
    rows = []
    for (method, d, p), rs in sorted(_cells(records).items()):
        k = sum(r.failed for r in rs)
        rows.append((method, d, p, len(rs), k, k / len(rs), binomial_se(k, len(rs))))
    return rows


def bracket_from_rates(rate_rows, method: str, d_small: int | None = None, d_large: int | None = None):
    table = {(d, p): P for m, d, p, _, _, P, _ in rate_rows if m == method}
    ds = sorted({d for d, _ in table})
    if len(ds) < 2:
        return None
    d_small = ds[0] if d_small is None else d_small
    d_large = ds[-1] if d_large is None else d_large
    ps = sorted({p for d, p in table if d == d_small} & {p for d, p in table if d == d_large})
    return threshold_bracket(ps, [table[(d_small, p)] for p in ps], [table[(d_large, p)] for p in ps])


# --- ground-state statistics -----------------------------------------------

GROUND_HEADER = [
    "method", "d", "p", "trials", "proxy_fraction", "se",
    "mean_iterations_ground", "mean_iterations_excited",
]


def run_ground_state_stats(spec: ExperimentSpec, workers: int | None = None) -> list[ResultRecord]:
    return run_records(spec, workers)


def ground_summary(records):
    rows = []
    for (method, d, p), rs in sorted(_cells(records).items()):
        k = sum(r.ground_state_proxy for r in rs)
        g = [r.iterations for r in rs if r.ground_state_proxy]
        e = [r.iterations for r in rs if not r.ground_state_proxy]
        rows.append((
            method, d, p, len(rs), k / len(rs), binomial_se(k, len(rs)),
            float(np.mean(g)) if g else float("nan"), float(np.mean(e)) if e else float("nan"),
        ))
    return rows
