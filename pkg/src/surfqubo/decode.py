"""End-to-end decoding of one syndrome with the annealers or with matching."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .anneal import DA, SA, AnnealConfig, solve_da, solve_sa
from .lattice import CodeLattice, check_syndrome, extract_syndrome, logical_parity
from .mwpm import build_defect_graph, mwpm_decode
from .qubo import build_ising, quadratize

METHODS = ("da", "sa", "mwpm")
TRIVIAL, LOGICAL, OPEN = "trivial", "logical", "open"


class DecodeError(ValueError):
    pass


@dataclass(frozen=True)
class DecoderConfig:
    """Hamiltonian parameters plus the annealer settings."""

    J: int = 1024
    h: int = 1
    alpha: int | None = None  # None: 8 J
    anneal: AnnealConfig = field(default_factory=AnnealConfig)

    def __post_init__(self):
        for name in ("J", "h"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v <= 0:
                raise DecodeError(f"{name} must be a positive integer, got {v!r}")
        if self.alpha is not None and self.alpha <= 0:
            raise DecodeError("alpha must be positive")


@dataclass
class DecodeOutcome:
    estimate: np.ndarray
    syndrome_satisfied: bool
    logical_error: bool | None
    ground_state_proxy: bool | None
    energy: int
    iterations: int
    residual: str | None = None
    iterations_run: int = 0


def classify_residual(lat: CodeLattice, actual, estimate) -> str:
    r = (np.asarray(actual, dtype=np.uint8) ^ np.asarray(estimate, dtype=np.uint8))
    if np.any(extract_syndrome(lat, r) < 0):
        return OPEN
    return LOGICAL if logical_parity(lat, r) else TRIVIAL


def decode(lat: CodeLattice, s, method: str, cfg: DecoderConfig | None = None, actual=None) -> DecodeOutcome:
    """Estimate a Z-error pattern consistent with syndrome ``s``.

    For ``da``/``sa`` only the data bits of the best annealer state are read;
    a broken syndrome is reported through ``syndrome_satisfied``, never retried.
    ``cfg.anneal.stall_iterations`` is honoured by ``da`` only: ``sa`` always
    cools over the full ``max_iterations``.
    """
    cfg = cfg or DecoderConfig()
    s = check_syndrome(lat, s)
    ising = build_ising(lat, s, cfg.J, cfg.h)
    if method == "mwpm":
        estimate, iterations = mwpm_decode(build_defect_graph(lat, s))
        energy = ising.energy_bits(estimate)
        ran = iterations
    elif method in ("da", "sa"):
        q = quadratize(ising, cfg.alpha, syndrome=s)
        mode = DA if method == "da" else SA
        acfg = cfg.anneal.with_(mode=mode)
        if mode == SA:
            # SA's budget is its cooling schedule; the stall rule only cuts DA runs short
            acfg = acfg.with_(stall_iterations=None)
        res = solve_da(q, acfg) if method == "da" else solve_sa(q, acfg)
        estimate = res.best_bits[: lat.n_data].astype(np.uint8)
        energy, iterations, ran = res.best_energy, res.best_iteration, res.iterations_run
    else:
        raise DecodeError(f"unknown method {method!r}, expected one of {METHODS}")

    satisfied = bool(np.array_equal(extract_syndrome(lat, estimate), s))
    logical = proxy = residual = None
    if actual is not None:
        actual = np.asarray(actual, dtype=np.uint8)
        residual = classify_residual(lat, actual, estimate)
        logical = residual == LOGICAL
        proxy = satisfied and int(estimate.sum()) <= int(actual.sum())
    return DecodeOutcome(estimate, satisfied, logical, proxy, int(energy), int(iterations), residual, int(ran))


@lru_cache(maxsize=4)
def _min_weight_table(d: int) -> dict[bytes, int]:
    from .lattice import build_lattice

    lat = build_lattice(d)
    n = lat.n_data
    patterns = ((np.arange(1 << n)[:, None] >> np.arange(n)) & 1).astype(np.uint8)
    parity = (patterns.astype(np.int64) @ lat.check_matrix.T.astype(np.int64)) & 1
    weight = patterns.sum(axis=1)
    keys = np.packbits(parity.astype(np.uint8), axis=1)
    table: dict[bytes, int] = {}
    for key, w in zip(map(bytes, keys), weight):
        if key not in table or w < table[key]:
            table[key] = int(w)
    return table


def ground_state_oracle(lat: CodeLattice, s, max_qubits: int = 16) -> int:
    """Minimum error weight producing syndrome ``s``, by exhaustive enumeration."""
    s = check_syndrome(lat, s)
    if lat.n_data > max_qubits:
        raise DecodeError(f"exhaustive oracle limited to {max_qubits} data qubits, lattice has {lat.n_data}")
    key = bytes(np.packbits((s < 0).astype(np.uint8)))
    return _min_weight_table(lat.d)[key]
