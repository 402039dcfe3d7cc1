"""Annealing solvers for :class:`~surfqubo.qubo.QuboProblem`.

Two engines share the same bookkeeping: every replica keeps its bits, its
integer energy and the local fields ``f_i = sum_j W_ij y_j + V_i`` so that a
single-bit flip costs ``dE_i = (2 y_i - 1) f_i``.

``solve_da`` follows the digital-annealer contract: parallel trial over all
bits, dynamic offset, and replica exchange on a geometric temperature ladder.
``solve_sa`` is plain single-flip Metropolis with geometric cooling.

Random numbers come from xorshift64* streams, one per replica plus one for
exchanges, seeded through splitmix64 from ``AnnealConfig.seed``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numba as nb
import numpy as np

from .qubo import QuboProblem, local_delta

DA = "da_replica_exchange"
SA = "sa"

_MASK64 = (1 << 64) - 1
# exp(-37) < 2**-53: a uniform draw on (0, 1] can never accept such a move
_XMAX = 37.0


class AnnealError(ValueError):
    pass


@dataclass(frozen=True)
class AnnealConfig:
    mode: str = DA
    replicas: int = 128
    t_max: float = 5.0
    t_min: float = 0.1
    max_iterations: int = 1_000_000
    exchange_interval: int = 20
    offset_increment: int | None = None  # None: use the problem's h
    seed: int = 0
    # stop once the best energy has not improved for this many iterations
    stall_iterations: int | None = None
    debug: bool = False

    def __post_init__(self):
        if self.mode not in (DA, SA):
            raise AnnealError(f"unknown annealing mode {self.mode!r}")
        if self.replicas < 1:
            raise AnnealError("replicas must be >= 1")
        if not 0 < self.t_min <= self.t_max:
            raise AnnealError("temperatures must satisfy 0 < t_min <= t_max")
        if self.max_iterations < 1:
            raise AnnealError("max_iterations must be >= 1")
        if self.exchange_interval < 0:
            raise AnnealError("exchange_interval must be >= 0")
        if self.offset_increment is not None and self.offset_increment < 0:
            raise AnnealError("offset_increment must be >= 0")
        if self.stall_iterations is not None and self.stall_iterations < 1:
            raise AnnealError("stall_iterations must be >= 1")

    def with_(self, **changes) -> "AnnealConfig":
        return replace(self, **changes)


@dataclass
class SolveResult:
    best_bits: np.ndarray
    best_energy: int
    best_iteration: int
    iterations_run: int
    converged: bool | None = None
    temperatures: np.ndarray = field(default_factory=lambda: np.zeros(0))
    # per temperature slot, at exit
    final_energies: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    accepted: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    exchanges_accepted: int = 0


def temperature_ladder(t_min: float, t_max: float, replicas: int) -> np.ndarray:
    if replicas == 1:
        return np.array([t_min], dtype=np.float64)
    return np.geomspace(t_min, t_max, replicas)


def _splitmix64(x: int) -> tuple[int, int]:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x, z ^ (z >> 31)


def rng_streams(seed: int, n: int) -> np.ndarray:
    """``n`` independent nonzero xorshift64* states derived from ``seed``."""
    x = int(seed) & _MASK64
    out = np.empty(n, dtype=np.uint64)
    for k in range(n):
        x, z = _splitmix64(x)
        out[k] = z or 0x9E3779B97F4A7C15
    return out


@nb.njit(cache=True, inline="always")
def _next(state, k):
    x = state[k]
    x ^= x >> np.uint64(12)
    x ^= x << np.uint64(25)
    x ^= x >> np.uint64(27)
    state[k] = x
    return x * np.uint64(0x2545F4914F6CDD1D)


@nb.njit(cache=True, inline="always")
def _uniform(state, k):
    # on (0, 1]
    return ((_next(state, k) >> np.uint64(11)) + np.uint64(1)) * (1.0 / 9007199254740992.0)


@nb.njit(cache=True, inline="always")
def _randint(state, k, n):
    r = np.int64((_next(state, k) >> np.uint64(11)) * (1.0 / 9007199254740992.0) * n)
    return min(r, n - 1)


@nb.njit(cache=True)
def _full_energy(indptr, indices, data, V, c, y):
    n = y.shape[0]
    pair = 0
    lin = 0
    for i in range(n):
        if y[i]:
            lin += V[i]
            for p in range(indptr[i], indptr[i + 1]):
                if y[indices[p]]:
                    pair += data[p]
    return -(pair // 2) - lin + c


@nb.njit(cache=True, inline="always")
def _flip(indptr, indices, data, y, f, r, i):
    old = y[r, i]
    y[r, i] = 1 - old
    step = 1 - 2 * np.int64(old)
    for p in range(indptr[i], indptr[i + 1]):
        f[r, indices[p]] += data[p] * step


@nb.njit(cache=True, inline="always")
def _track(lst, pos, cnt, r, i, inside):
    # keep bit i of replica r in (inside=True) or out of the candidate list
    p = pos[r, i]
    if inside and p < 0:
        n = cnt[r]
        lst[r, n] = i
        pos[r, i] = n
        cnt[r] = n + 1
    elif not inside and p >= 0:
        n = cnt[r] - 1
        last = lst[r, n]
        lst[r, p] = last
        pos[r, last] = p
        pos[r, i] = -1
        cnt[r] = n


@nb.njit(cache=True)
def _exchange(slot, E, temps, rng, k_rng):
    """One sweep of adjacent swaps; ``slot`` maps temperature index to replica."""
    n = 0
    for k in range(temps.shape[0] - 1):
        r1 = slot[k]
        r2 = slot[k + 1]
        a = (1.0 / temps[k] - 1.0 / temps[k + 1]) * (E[r1] - E[r2])
        if a >= 0.0 or _uniform(rng, k_rng) < np.exp(a):
            slot[k] = r2
            slot[k + 1] = r1
            n += 1
    return n


@nb.njit(cache=True)
def _da_kernel(indptr, indices, data, V, c, temps, max_iter, exchange_interval,
               offset_inc, stall, rng, debug, cap):
    R = temps.shape[0]
    N = V.shape[0]
    y = np.zeros((R, N), dtype=np.int8)
    f = np.empty((R, N), dtype=np.int64)
    # candidate list: bits whose flip cost is below cap; the rest can only
    # become eligible once offset + XMAX * T exceeds cap
    lst = np.empty((R, N), dtype=np.int64)
    pos = np.full((R, N), -1, dtype=np.int64)
    cnt = np.zeros(R, dtype=np.int64)
    for r in range(R):
        for i in range(N):
            f[r, i] = V[i]
            if -V[i] < cap:
                _track(lst, pos, cnt, r, i, True)
    E = np.full(R, c, dtype=np.int64)
    off = np.zeros(R, dtype=np.int64)
    # lower bound on min_i dE_i, valid until the replica flips a bit
    low = np.zeros(R, dtype=np.int64)
    low_ok = np.zeros(R, dtype=np.bool_)
    slot = np.arange(R)  # slot -> replica
    accepted = np.zeros(R, dtype=np.int64)
    n_swaps = 0
    buf = np.empty(N, dtype=np.int64)
    cut = np.empty(R, dtype=np.float64)
    for k in range(R):
        cut[k] = _XMAX * temps[k]
    big = np.int64(1) << np.int64(62)

    best_E = c
    best_bits = np.zeros(N, dtype=np.int8)
    best_iter = 0
    t = 0
    while t < max_iter:
        t += 1
        for k in range(R):
            r = slot[k]
            T = temps[k]
            o = off[r]
            lim = cut[k]
            if low_ok[r] and low[r] - o >= lim:
                off[r] += offset_inc
                continue
            cnt_e = 0
            m = big
            if o + lim <= cap:
                for q in range(cnt[r]):
                    i = lst[r, q]
                    dE = (2 * np.int64(y[r, i]) - 1) * f[r, i]
                    if dE < m:
                        m = dE
                    x = dE - o
                    if x <= 0:
                        buf[cnt_e] = i
                        cnt_e += 1
                    elif x < lim:
                        if _uniform(rng, r) < np.exp(-x / T):
                            buf[cnt_e] = i
                            cnt_e += 1
                if cap < m:
                    m = cap
            else:
                for i in range(N):
                    dE = (2 * np.int64(y[r, i]) - 1) * f[r, i]
                    if dE < m:
                        m = dE
                    x = dE - o
                    if x <= 0:
                        buf[cnt_e] = i
                        cnt_e += 1
                    elif x < lim:
                        if _uniform(rng, r) < np.exp(-x / T):
                            buf[cnt_e] = i
                            cnt_e += 1
            if cnt_e > 0:
                i = buf[_randint(rng, r, cnt_e)]
                E[r] += (2 * np.int64(y[r, i]) - 1) * f[r, i]
                _flip(indptr, indices, data, y, f, r, i)
                _track(lst, pos, cnt, r, i, (2 * np.int64(y[r, i]) - 1) * f[r, i] < cap)
                for p in range(indptr[i], indptr[i + 1]):
                    j = indices[p]
                    _track(lst, pos, cnt, r, j, (2 * np.int64(y[r, j]) - 1) * f[r, j] < cap)
                off[r] = 0
                low_ok[r] = False
                accepted[k] += 1
            else:
                low[r] = m
                low_ok[r] = True
                off[r] += offset_inc
        for r in range(R):
            if E[r] < best_E:
                best_E = E[r]
                best_iter = t
                for i in range(N):
                    best_bits[i] = y[r, i]
        if exchange_interval > 0 and t % exchange_interval == 0:
            if debug:
                for r in range(R):
                    if _full_energy(indptr, indices, data, V, c, y[r]) != E[r]:
                        raise RuntimeError("incremental energy drifted from full evaluation")
                    for i in range(N):
                        inside = (2 * np.int64(y[r, i]) - 1) * f[r, i] < cap
                        if inside != (pos[r, i] >= 0):
                            raise RuntimeError("candidate list out of sync")
            n_swaps += _exchange(slot, E, temps, rng, R)
        if stall > 0 and t - best_iter >= stall:
            break
    final = np.empty(R, dtype=np.int64)
    for k in range(R):
        final[k] = E[slot[k]]
    return best_bits, best_E, best_iter, t, final, accepted, n_swaps


@nb.njit(cache=True)
def _sa_kernel(indptr, indices, data, V, c, t_max, t_min, max_iter, stall, rng):
    N = V.shape[0]
    y = np.zeros((1, N), dtype=np.int8)
    f = np.empty((1, N), dtype=np.int64)
    for i in range(N):
        f[0, i] = V[i]
    E = c
    best_E = c
    best_bits = np.zeros(N, dtype=np.int8)
    best_iter = 0
    accepted = 0
    ratio = t_min / t_max
    denom = max(max_iter - 1, 1)
    t = 0
    while t < max_iter:
        T = t_max * ratio ** (t / denom)
        t += 1
        i = _randint(rng, 0, N)
        x = (2 * np.int64(y[0, i]) - 1) * f[0, i]
        ok = x <= 0
        if not ok and x < _XMAX * T:
            ok = _uniform(rng, 0) < np.exp(-x / T)
        if ok:
            E += x
            _flip(indptr, indices, data, y, f, 0, i)
            accepted += 1
            if E < best_E:
                best_E = E
                best_iter = t
                for j in range(N):
                    best_bits[j] = y[0, j]
        if stall > 0 and t - best_iter >= stall:
            break
    return best_bits, best_E, best_iter, t, E, accepted


def _csr(q: QuboProblem):
    W = q.W
    return (
        np.ascontiguousarray(W.indptr, dtype=np.int64),
        np.ascontiguousarray(W.indices, dtype=np.int64),
        np.ascontiguousarray(W.data, dtype=np.int64),
        np.ascontiguousarray(q.V, dtype=np.int64),
    )


def _offset(q: QuboProblem, cfg: AnnealConfig) -> int:
    if cfg.offset_increment is not None:
        return int(cfg.offset_increment)
    return int(q.h) if q.h else 1


def _candidate_cap(cfg: AnnealConfig, offset_inc: int) -> int:
    return int(np.ceil(_XMAX * cfg.t_max)) + 64 * max(offset_inc, 1)


def solve_da(q: QuboProblem, cfg: AnnealConfig) -> SolveResult:
    """Parallel-trial replica-exchange annealing with dynamic offset.

    One iteration advances every replica by one parallel-trial step; the
    exchange sweep runs every ``cfg.exchange_interval`` iterations.
    """
    if cfg.mode != DA:
        raise AnnealError(f"solve_da needs mode {DA!r}, got {cfg.mode!r}")
    temps = temperature_ladder(cfg.t_min, cfg.t_max, cfg.replicas)
    rng = rng_streams(cfg.seed, cfg.replicas + 1)
    bits, e, it, ran, final, acc, swaps = _da_kernel(
        *_csr(q), np.int64(q.c), temps, np.int64(cfg.max_iterations), np.int64(cfg.exchange_interval),
        np.int64(_offset(q, cfg)), np.int64(cfg.stall_iterations or 0), rng, bool(cfg.debug),
        np.int64(_candidate_cap(cfg, _offset(q, cfg))),
    )
    return SolveResult(bits, int(e), int(it), int(ran), None, temps, final, acc, int(swaps))


def solve_sa(q: QuboProblem, cfg: AnnealConfig) -> SolveResult:
    """Single-flip Metropolis annealing, cooled geometrically from ``t_max`` to ``t_min``."""
    if cfg.mode != SA:
        raise AnnealError(f"solve_sa needs mode {SA!r}, got {cfg.mode!r}")
    rng = rng_streams(cfg.seed, 1)
    bits, e, it, ran, last, acc = _sa_kernel(
        *_csr(q), np.int64(q.c), float(cfg.t_max), float(cfg.t_min), np.int64(cfg.max_iterations),
        np.int64(cfg.stall_iterations or 0), rng,
    )
    return SolveResult(
        bits, int(e), int(it), int(ran), None,
        np.array([cfg.t_min]), np.array([last], dtype=np.int64), np.array([acc], dtype=np.int64), 0,
    )


def solve(q: QuboProblem, cfg: AnnealConfig) -> SolveResult:
    return solve_da(q, cfg) if cfg.mode == DA else solve_sa(q, cfg)


__all__ = [
    "DA", "SA", "AnnealConfig", "AnnealError", "SolveResult",
    "solve", "solve_da", "solve_sa", "local_delta", "temperature_ladder", "rng_streams",
]
