"""Planar surface code geometry, Pauli-Z error sampling and X-syndrome extraction.

Coordinates use a doubled-free convention with ``i`` the row and ``j`` the
column:

* data qubits sit at integer points ``(i, j)`` with ``0 <= i, j < d`` and at
  half-integer points ``(i + 1/2, j + 1/2)`` with ``0 <= i, j < d - 1``;
* X-type stabilizers (vertices) sit at ``(i + 1/2, j)`` with ``0 <= i < d - 1``
  and ``0 <= j < d``, acting on the up/down integer qubits and the
  left/right half-integer qubits that exist;
* Z-type stabilizers (faces) sit at ``(i, j + 1/2)`` and act on the left/right
  integer qubits and the up/down half-integer qubits that exist.

Integer qubits in rows ``i = 0`` and ``i = d - 1`` touch a single vertex, so
Z-error chains can terminate on those two (rough) boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class LatticeError(ValueError):
    """Raised for invalid lattice parameters or mismatched vectors."""


@dataclass(frozen=True, eq=False)
class CodeLattice:
    d: int
    n_data: int
    n_vertices: int
    vertex_support: tuple[tuple[int, ...], ...]
    qubit_incidence: tuple[tuple[int, ...], ...]
    logical_support: frozenset[int]
    detector_support: frozenset[int]
    face_support: tuple[tuple[int, ...], ...]
    coords: tuple[tuple[float, float], ...]
    vertex_coords: tuple[tuple[float, float], ...]
    # dense (n_vertices, n_data) incidence matrix over GF(2)
    check_matrix: np.ndarray = field(repr=False)

    def __hash__(self) -> int:
        return hash(("CodeLattice", self.d))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CodeLattice) and other.d == self.d

    @property
    def n_faces(self) -> int:
        return len(self.face_support)

    def boundary_qubits(self) -> list[int]:
        """Qubits incident to exactly one vertex (chain-terminating)."""
        return [q for q, inc in enumerate(self.qubit_incidence) if len(inc) == 1]

    def pattern(self, qubits) -> np.ndarray:
        """Error pattern with ones on the given qubit indices."""
        e = np.zeros(self.n_data, dtype=np.uint8)
        e[list(qubits)] = 1
        return e


def _int_index(d: int, i: int, j: int) -> int:
    return i * d + j


def _half_index(d: int, i: int, j: int) -> int:
    return d * d + i * (d - 1) + j


def build_lattice(d: int) -> CodeLattice:
    """Build the distance-``d`` planar surface code.

    Weight-4 vertex supports are ordered ``(up, left, down, right)`` so that the
    first and second halves are the diagonal qubit pairs used by quadratization.
    Weight-3 supports on the left/right edge keep the same relative order.
    """
    if isinstance(d, bool) or int(d) != d or d < 2:
        raise LatticeError(f"code distance must be an integer >= 2, got {d!r}")
    d = int(d)
    n_int = d * d
    n_data = n_int + (d - 1) * (d - 1)

    coords: list[tuple[float, float]] = [(float(i), float(j)) for i in range(d) for j in range(d)]
    coords += [(i + 0.5, j + 0.5) for i in range(d - 1) for j in range(d - 1)]

    vertex_support: list[tuple[int, ...]] = []
    vertex_coords: list[tuple[float, float]] = []
    for i in range(d - 1):
        for j in range(d):
            support = [_int_index(d, i, j)]
            if j > 0:
                support.append(_half_index(d, i, j - 1))
            support.append(_int_index(d, i + 1, j))
            if j < d - 1:
                support.append(_half_index(d, i, j))
            vertex_support.append(tuple(support))
            vertex_coords.append((i + 0.5, float(j)))

    face_support: list[tuple[int, ...]] = []
    for i in range(d):
        for j in range(d - 1):
            support = [_int_index(d, i, j), _int_index(d, i, j + 1)]
            if i > 0:
                support.append(_half_index(d, i - 1, j))
            if i < d - 1:
                support.append(_half_index(d, i, j))
            face_support.append(tuple(sorted(support)))

    incidence: list[list[int]] = [[] for _ in range(n_data)]
    for v, support in enumerate(vertex_support):
        for q in support:
            incidence[q].append(v)

    H = np.zeros((len(vertex_support), n_data), dtype=np.uint8)
    for v, support in enumerate(vertex_support):
        H[v, list(support)] = 1
    H.setflags(write=False)

    # logical Z: column j = 0 of integer qubits, rough boundary to rough boundary
    logical = frozenset(_int_index(d, i, 0) for i in range(d))
    # logical X (conjugate): row i = 0 of integer qubits
    detector = frozenset(_int_index(d, 0, j) for j in range(d))

    return CodeLattice(
        d=d,
        n_data=n_data,
        n_vertices=len(vertex_support),
        vertex_support=tuple(vertex_support),
        qubit_incidence=tuple(tuple(x) for x in incidence),
        logical_support=logical,
        detector_support=detector,
        face_support=tuple(face_support),
        coords=tuple(coords),
        vertex_coords=tuple(vertex_coords),
        check_matrix=H,
    )


def _as_pattern(lat: CodeLattice, e) -> np.ndarray:
    e = np.asarray(e)
    if e.ndim != 1 or e.shape[0] != lat.n_data:
        raise LatticeError(f"error pattern must have length {lat.n_data}, got shape {e.shape}")
    return (e != 0).astype(np.uint8)


def sample_errors(lat: CodeLattice, p: float, rng: np.random.Generator) -> np.ndarray:
    """I.i.d. Pauli-Z errors with probability ``p`` per data qubit."""
    if not 0.0 <= p <= 1.0:
        raise LatticeError(f"error probability must lie in [0, 1], got {p!r}")
    return (rng.random(lat.n_data) < p).astype(np.uint8)


def extract_syndrome(lat: CodeLattice, e) -> np.ndarray:
    """X-stabilizer eigenvalues (+1/-1, int8) for a Z-error pattern."""
    e = _as_pattern(lat, e)
    parity = (lat.check_matrix.astype(np.int64) @ e) & 1
    return (1 - 2 * parity).astype(np.int8)


def syndrome_defects(s) -> np.ndarray:
    """Indices of vertices with eigenvalue -1."""
    return np.flatnonzero(np.asarray(s) < 0)


def check_syndrome(lat: CodeLattice, s) -> np.ndarray:
    s = np.asarray(s)
    if s.ndim != 1 or s.shape[0] != lat.n_vertices:
        raise LatticeError(f"syndrome must have length {lat.n_vertices}, got shape {s.shape}")
    if not np.all((s == 1) | (s == -1)):
        raise LatticeError("syndrome entries must be +1 or -1")
    return s.astype(np.int8)


def logical_parity(lat: CodeLattice, e) -> int:
    """Parity of the overlap with the conjugate logical-X path.

    For a pattern with a trivial syndrome, 1 means the pattern is a nontrivial
    logical operator and 0 means it is a product of face stabilizers.
    """
    e = _as_pattern(lat, e)
    return int(e[sorted(lat.detector_support)].sum() & 1)
