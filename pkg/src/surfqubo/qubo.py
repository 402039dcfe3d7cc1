"""Ising decoding Hamiltonian and its exact quadratization to QUBO form.

Energies are integers throughout. The QUBO energy of a binary vector ``y`` is

    E(y) = -1/2 * sum_ij W_ij y_i y_j - sum_i V_i y_i + c

with ``W`` symmetric and zero on the diagonal.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .lattice import CodeLattice, check_syndrome


class QuboError(ValueError):
    pass


@dataclass(frozen=True)
class IsingProblem:
    """Spin Hamiltonian ``sum_t coeff_t * prod_{i in t} sigma_i``."""

    terms: tuple[tuple[int, tuple[int, ...]], ...]
    J: int
    h: int
    n_spins: int
    n_vertices: int

    def energy(self, sigma) -> int:
        sigma = np.asarray(sigma, dtype=np.int64)
        if sigma.shape != (self.n_spins,):
            raise QuboError(f"spin vector must have length {self.n_spins}")
        total = 0
        for coeff, idx in self.terms:
            total += coeff * int(np.prod(sigma[list(idx)]))
        return total

    def energy_bits(self, x) -> int:
        """Energy of the spin state ``sigma_i = 1 - 2 x_i``."""
        x = np.asarray(x, dtype=np.int64)
        return self.energy(1 - 2 * x)


def _check_positive_int(name: str, value) -> int:
    if isinstance(value, bool) or int(value) != value or value <= 0:
        raise QuboError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def build_ising(lat: CodeLattice, s, J: int, h: int, max_chain: int | None = None) -> IsingProblem:
    """Ising Hamiltonian ``-J sum_v b_v prod sigma - h sum_i sigma_i``.

    If ``max_chain`` is given, enforce ``J > max_chain * h / 2`` so that
    chains of that length are still energetically favoured.
    """
    s = check_syndrome(lat, s)
    J = _check_positive_int("J", J)
    h = _check_positive_int("h", h)
    if max_chain is not None and not 2 * J > max_chain * h:
        raise QuboError(f"J={J} too small to correct chains of length {max_chain} with h={h}")
    terms = [(-J * int(b), tuple(sup)) for b, sup in zip(s, lat.vertex_support)]
    terms += [(-h, (q,)) for q in range(lat.n_data)]
    return IsingProblem(tuple(terms), J, h, lat.n_data, lat.n_vertices)


def max_correctable_chain(J: int, h: int) -> int:
    """Largest chain length n with ``-4J + 2nh < 0``."""
    return (2 * J - 1) // h


@dataclass(frozen=True, eq=False)
class QuboProblem:
    n_total: int
    n_data: int
    W: sp.csr_matrix = field(repr=False)
    V: np.ndarray = field(repr=False)
    c: int
    alpha: int
    aux_map: tuple[tuple[int, int], ...]
    syndrome: np.ndarray | None = field(default=None, repr=False)
    J: int | None = None
    h: int | None = None

    @property
    def n_aux(self) -> int:
        return self.n_total - self.n_data

    def complete(self, x) -> np.ndarray:
        """Extend data bits with the consistent auxiliaries ``z_k = x_i x_j``."""
        x = np.asarray(x, dtype=np.int8)
        if x.shape != (self.n_data,):
            raise QuboError(f"data assignment must have length {self.n_data}")
        y = np.zeros(self.n_total, dtype=np.int8)
        y[: self.n_data] = x
        for k, (i, j) in enumerate(self.aux_map):
            y[self.n_data + k] = x[i] & x[j]
        return y

    def consistent(self, y) -> bool:
        y = np.asarray(y)
        return all(y[self.n_data + k] == (y[i] & y[j]) for k, (i, j) in enumerate(self.aux_map))

    def export(self, path) -> None:
        """Write ``(W, V, c)`` as sparse text.

        Header ``# N <n> c <c> n_data <nd> alpha <a>``, then one line
        ``i j W_ij`` per nonzero with ``i <= j`` (``i == j`` lines carry V_i).
        """
        W = sp.triu(self.W, k=1).tocoo()
        lines = [f"# N {self.n_total} c {self.c} n_data {self.n_data} alpha {self.alpha}"]
        entries = [(int(i), int(j), int(w)) for i, j, w in zip(W.row, W.col, W.data) if w != 0]
        entries += [(i, i, int(v)) for i, v in enumerate(self.V) if v != 0]
        entries.sort()
        lines += [f"{i} {j} {w}" for i, j, w in entries]
        Path(path).write_text("\n".join(lines) + "\n")


def load_qubo(path) -> QuboProblem:
    """Read a file written by :meth:`QuboProblem.export` (aux map is not stored)."""
    text = Path(path).read_text().splitlines()
    head = text[0].lstrip("#").split()
    meta = dict(zip(head[::2], head[1::2]))
    n = int(meta["N"])
    rows, cols, vals = [], [], []
    V = np.zeros(n, dtype=np.int64)
    for line in text[1:]:
        if not line.strip():
            continue
        i, j, w = (int(t) for t in line.split())
        if i == j:
            V[i] = w
        else:
            rows += [i, j]
            cols += [j, i]
            vals += [w, w]
    W = sp.csr_matrix((np.array(vals, dtype=np.int64), (rows, cols)), shape=(n, n))
    return QuboProblem(n, int(meta["n_data"]), W, V, int(meta["c"]), int(meta["alpha"]), ())


def _aux_pairs(support: tuple[int, ...]) -> list[tuple[int, int]]:
    if len(support) == 4:
        return [(support[0], support[1]), (support[2], support[3])]
    if len(support) == 3:
        a, b = sorted(support)[:2]
        return [(a, b)]
    return []


def quadratize(ising: IsingProblem, alpha: int | None = None, syndrome=None) -> QuboProblem:
    """Reduce the Ising Hamiltonian to a QUBO with auxiliary products.

    Each spin product is expanded with ``sigma = 1 - 2x``. Weight-4 terms get
    ``z_m = x_i x_j`` and ``z_n = x_k x_l`` over the two halves of the support;
    weight-3 terms get one auxiliary over the two lowest qubit indices. The
    penalty ``alpha (x_i x_j - 2 z (x_i + x_j) + 3 z)`` enforces the products.
    """
    if alpha is None:
        alpha = 8 * ising.J
    alpha = _check_positive_int("alpha", alpha)
    nd = ising.n_spins

    quad: dict[tuple[int, int], int] = defaultdict(int)
    lin = np.zeros(nd, dtype=object)
    const = 0
    aux: list[tuple[int, int]] = []

    def add_quad(a: int, b: int, w: int) -> None:
        if a == b:
            raise AssertionError("diagonal quadratic term")
        quad[(min(a, b), max(a, b))] += w

    for coeff, idx in ising.terms:
        pairs = _aux_pairs(idx)
        subst: dict[frozenset[int], tuple[int, ...]] = {}
        for a, b in pairs:
            z = nd + len(aux)
            aux.append((a, b))
            subst[frozenset((a, b))] = (z,)
        # coefficient of each monomial x_S in coeff * prod (1 - 2 x_i)
        for r in range(len(idx) + 1):
            for S in combinations(idx, r):
                w = coeff * (-2) ** r
                if r == 0:
                    const += w
                elif r == 1:
                    lin[S[0]] += w
                elif r == 2:
                    add_quad(S[0], S[1], w)
                else:
                    rest = set(S)
                    factors: list[int] = []
                    for a, b in pairs:
                        if a in rest and b in rest:
                            factors.append(subst[frozenset((a, b))][0])
                            rest -= {a, b}
                    factors += sorted(rest)
                    if len(factors) != 2:
                        raise AssertionError(f"monomial {S} not reducible with pairs {pairs}")
                    add_quad(factors[0], factors[1], w)

    n_total = nd + len(aux)
    lin_full = np.zeros(n_total, dtype=np.int64)
    lin_full[:nd] = lin.astype(np.int64)
    for k, (a, b) in enumerate(aux):
        z = nd + k
        add_quad(a, b, alpha)
        add_quad(z, a, -2 * alpha)
        add_quad(z, b, -2 * alpha)
        lin_full[z] += 3 * alpha

    rows, cols, vals = [], [], []
    for (a, b), w in quad.items():
        if w == 0:
            continue
        rows += [a, b]
        cols += [b, a]
        vals += [-w, -w]
    W = sp.csr_matrix(
        (np.array(vals, dtype=np.int64), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
        shape=(n_total, n_total),
    )
    W.sum_duplicates()
    W.sort_indices()
    s = None if syndrome is None else np.asarray(syndrome, dtype=np.int8)
    return QuboProblem(n_total, nd, W, -lin_full, int(const), alpha, tuple(aux), s, ising.J, ising.h)


def build_qubo(lat: CodeLattice, s, J: int = 1024, h: int = 1, alpha: int | None = None) -> QuboProblem:
    """Shortcut for ``quadratize(build_ising(lat, s, J, h), alpha)``."""
    return quadratize(build_ising(lat, s, J, h), alpha, syndrome=s)


def penalty_value(x_i: int, x_j: int, z: int, alpha: int) -> int:
    for b in (x_i, x_j, z):
        if b not in (0, 1):
            raise QuboError("penalty arguments must be bits")
    return alpha * (x_i * x_j - 2 * z * (x_i + x_j) + 3 * z)


def _bits(q: QuboProblem, bits) -> np.ndarray:
    y = np.asarray(bits)
    if y.shape != (q.n_total,):
        raise QuboError(f"assignment must have length {q.n_total}, got shape {y.shape}")
    return y.astype(np.int64)


def evaluate(q: QuboProblem, bits) -> int:
    y = _bits(q, bits)
    pair = int(y @ (q.W @ y))  # twice the upper-triangle sum, always even
    return -(pair // 2) - int(q.V @ y) + q.c


def local_delta(q: QuboProblem, bits, i: int) -> int:
    """Energy change from flipping bit ``i``."""
    y = _bits(q, bits)
    if not 0 <= i < q.n_total:
        raise IndexError(f"bit index {i} out of range for N={q.n_total}")
    row = q.W.getrow(i)
    field_i = int(row.data @ y[row.indices]) + int(q.V[i])
    return (2 * int(y[i]) - 1) * field_i
