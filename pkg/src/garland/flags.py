"""Flag complexes of a vector space over a finite field.

For ``V = F_q^(n+2)`` and an ascending flag ``F_0 < ... < F_l`` of proper
nonzero subspaces, the complex ``X_F`` has as vertices the proper nonzero
subspaces ``G`` that are comparable with every ``F_j`` and different from
all of them; its simplices are the chains of such subspaces.  ``X_F`` is
pure of dimension ``N = n - 1 - l``.

Subspaces are keyed by their reduced row echelon form, a tuple of row
tuples, which gives a canonical total order ``(dim, key)`` on vertices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import prod
from typing import Sequence

import numpy as np

from .complex import SimplicialComplex, build_from_maximal, empty_complex, join, top_weights
from .errors import BudgetError, MalformedFlagError, NotASimplexError
from .field import FiniteField

__all__ = [
    "DEFAULT_BUDGET",
    "q_factorial",
    "gaussian_binomial",
    "rref",
    "span_key",
    "subspaces",
    "contains",
    "FlagComplexSpec",
    "FlagComplex",
    "build_flag_complex",
    "predicted_weight",
    "type_sum_check",
    "all_t_arrays",
]

DEFAULT_BUDGET = 10**8

Key = tuple[tuple[int, ...], ...]


def q_factorial(m: int, q: int) -> int:
    """``(m)_q = prod_{k=1}^m (q^k - 1)``, with ``(0)_q = 1``."""
    return prod(q**k - 1 for k in range(1, m + 1))


def gaussian_binomial(m: int, d: int, q: int) -> int:
    """Number of ``d``-dimensional subspaces of ``F_q^m``."""
    if not 0 <= d <= m:
        raise ValueError(f"need 0 <= d <= m, got d={d}, m={m}")
    return q_factorial(m, q) // (q_factorial(d, q) * q_factorial(m - d, q))


@lru_cache(maxsize=None)
def _field(q: int) -> FiniteField:
    return FiniteField(q)


def rref(rows: np.ndarray, F: FiniteField) -> np.ndarray:
    """Reduced row echelon form over ``F`` with zero rows dropped."""
    M = np.array(rows, dtype=np.int64, copy=True).reshape(-1, np.shape(rows)[-1] if np.ndim(rows) else 0)
    nrows, ncols = M.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(M[r:, c])
        if len(nz) == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            M[[r, p]] = M[[p, r]]
        M[r] = F.mul_vec(F.inv[M[r, c]], M[r])
        for i in range(nrows):
            if i != r and M[i, c]:
                M[i] = F.sub_vec(M[i], F.mul_vec(M[i, c], M[r]))
        r += 1
    return M[:r]


def _key(M: np.ndarray) -> Key:
    return tuple(tuple(int(x) for x in row) for row in M.tolist())


def span_key(vectors: Sequence[Sequence[int]], F: FiniteField) -> Key:
    """Canonical key of the span of ``vectors``."""
    return _key(rref(np.asarray(vectors, dtype=np.int64), F))


def _matmul(A: np.ndarray, B: np.ndarray, F: FiniteField) -> np.ndarray:
    """``A @ B`` over ``F``; ``A`` may carry leading batch axes."""
    out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
    for k in range(A.shape[-1]):
        out = F.add_vec(out, F.mul_vec(A[..., k, None], B[k]))
    return out


def _check_budget(q: int, m: int, budget: int | None) -> None:
    limit = DEFAULT_BUDGET if budget is None else budget
    if q**m > limit:
        raise BudgetError(f"q^m = {q}^{m} exceeds the enumeration budget {limit}")


def _rref_batch(m: int, d: int, q: int) -> np.ndarray:
    """All ``d x m`` RREF matrices over F_q, grouped by pivot pattern."""
    if d == 0:
        return np.zeros((1, 0, m), dtype=np.int64)
    blocks = []
    for pivots in itertools.combinations(range(m), d):
        free = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, m) if c not in pivots]
        count = q ** len(free)
        block = np.zeros((count, d, m), dtype=np.int64)
        for r, p in enumerate(pivots):
            block[:, r, p] = 1
        if free:
            values = np.array(list(itertools.product(range(q), repeat=len(free))), dtype=np.int64)
            for k, (r, c) in enumerate(free):
                block[:, r, c] = values[:, k]
        blocks.append(block)
    return np.concatenate(blocks)


def subspaces(m: int, d: int, q: int | FiniteField, budget: int | None = None) -> list[Key]:
    """Keys of all ``d``-dimensional subspaces of ``F_q^m``, sorted."""
    if not 0 <= d <= m:
        raise ValueError(f"need 0 <= d <= m, got d={d}, m={m}")
    qq = q.q if isinstance(q, FiniteField) else int(q)
    _check_budget(qq, m, budget)
    return sorted(_key(M) for M in _rref_batch(m, d, qq))


def contains(big: Key, small: Key, F: FiniteField) -> bool:
    """True iff the subspace ``small`` lies in ``big``."""
    if not small:
        return True
    if len(small) > len(big):
        return False
    return len(span_key(list(big) + list(small), F)) == len(big)


# -- flags --------------------------------------------------------------


@dataclass(frozen=True)
class FlagComplexSpec:
    """``(n, q, F)``: the flag complex of ``F`` in ``F_q^(n+2)``."""

    n: int
    q: int
    flag: tuple[Key, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise MalformedFlagError("n must be nonnegative")
        F = _field(self.q)
        m = self.n + 2
        dims = []
        for key in self.flag:
            if any(len(row) != m for row in key):
                raise MalformedFlagError(f"flag member {key} is not in F_q^{m}")
            if _key(rref(np.asarray(key, dtype=np.int64).reshape(-1, m), F)) != tuple(key):
                raise MalformedFlagError(f"flag member {key} is not in reduced row echelon form")
            dims.append(len(key))
        if any(d <= 0 or d >= m for d in dims):
            raise MalformedFlagError("flag members must be proper nonzero subspaces")
        for a, b in zip(self.flag, self.flag[1:]):
            if not (len(a) < len(b) and contains(b, a, F)):
                raise MalformedFlagError("flag members must be strictly increasing")

    @classmethod
    def from_vectors(cls, n: int, q: int, members: Sequence[Sequence[Sequence[int]]]) -> "FlagComplexSpec":
        """Flag from spanning vectors of each member, canonicalised to RREF."""
        F = _field(q)
        keys = []
        for vecs in members:
            arr = np.asarray(vecs, dtype=np.int64)
            if arr.ndim != 2 or arr.shape[1] != n + 2 or (arr < 0).any() or (arr >= q).any():
                raise MalformedFlagError(f"bad spanning vectors {vecs!r}")
            keys.append(span_key(arr, F))
        return cls(n, q, tuple(keys))

    @classmethod
    def from_t_array(cls, q: int, t: Sequence[int]) -> "FlagComplexSpec":
        """Coordinate flag ``F_j = span(e_0, ..., e_{t_0+...+t_j - 1})``."""
        t = [int(x) for x in t]
        if not t or any(x < 1 for x in t):
            raise MalformedFlagError(f"t-array entries must be positive, got {t}")
        m = sum(t)
        if m < 2:
            raise MalformedFlagError("the ambient space must have dimension at least 2")
        eye = np.eye(m, dtype=np.int64)
        keys = [_key(eye[:s]) for s in itertools.accumulate(t[:-1])]
        return cls(m - 2, q, tuple(keys))

    @property
    def field(self) -> FiniteField:
        return _field(self.q)

    @property
    def ambient_dim(self) -> int:
        return self.n + 2

    @property
    def length(self) -> int:
        """Flag length ``l`` (``-1`` for the empty flag)."""
        return len(self.flag) - 1

    @property
    def flag_dims(self) -> tuple[int, ...]:
        return tuple(len(k) for k in self.flag)

    @property
    def t_array(self) -> tuple[int, ...]:
        dims = (0,) + self.flag_dims + (self.ambient_dim,)
        return tuple(b - a for a, b in zip(dims, dims[1:]))

    @property
    def N(self) -> int:
        return self.n - 1 - self.length

    @property
    def types(self) -> tuple[int, ...]:
        """Vertex types: dimensions a refining subspace may have."""
        taken = set(self.flag_dims)
        return tuple(d for d in range(1, self.ambient_dim) if d not in taken)

    def label(self) -> str:
        t = ",".join(str(x) for x in self.t_array)
        return f"flag(n={self.n},q={self.q},t=({t}))"


def all_t_arrays(n: int, min_dim: int = 0) -> list[tuple[int, ...]]:
    """Compositions of ``n + 2`` whose flag complex has dimension ``>= min_dim``."""
    out = []
    m = n + 2
    for parts in range(1, m + 1):
        for cuts in itertools.combinations(range(1, m), parts - 1):
            bounds = (0,) + cuts + (m,)
            t = tuple(b - a for a, b in zip(bounds, bounds[1:]))
            if sum(x - 1 for x in t) - 1 >= min_dim:
                out.append(t)
    return out


@dataclass
class FlagComplex:
    """A flag complex together with its vertex subspaces and types."""

    complex: SimplicialComplex
    spec: FlagComplexSpec
    keys: tuple[Key, ...]
    vertex_types: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return self.spec.N

    @property
    def types(self) -> tuple[int, ...]:
        return self.spec.types

    def type_of(self, v: int) -> int:
        return int(self.vertex_types[v])

    def vertex_of(self, key: Key) -> int:
        return self.keys.index(key)

    def sidecar(self) -> dict:
        """JSON-ready vertex -> (type, subspace key) mapping."""
        return {
            "spec": {"n": self.spec.n, "q": self.spec.q, "t_array": list(self.spec.t_array),
                     "flag": [[list(r) for r in k] for k in self.spec.flag]},
            "vertices": [
                {"id": v, "type": int(self.vertex_types[v]), "subspace": [list(r) for r in key]}
                for v, key in enumerate(self.keys)
            ],
        }


def _intervals(spec: FlagComplexSpec) -> list[tuple[Key, Key]]:
    m = spec.ambient_dim
    zero: Key = ()
    whole = _key(np.eye(m, dtype=np.int64))
    members = [zero, *spec.flag, whole]
    return list(zip(members, members[1:]))


def _direct_vertices(spec: FlagComplexSpec, budget: int | None) -> list[Key]:
    F = spec.field
    m = spec.ambient_dim
    out = []
    for d in spec.types:
        for key in subspaces(m, d, spec.q, budget):
            if all(contains(key, f, F) if len(f) < d else contains(f, key, F) for f in spec.flag):
                out.append(key)
    return out


def _direct_maximal(spec: FlagComplexSpec, keys: list[Key]) -> list[tuple[int, ...]]:
    """Maximal chains: one vertex per type, consecutive types nested."""
    F = spec.field
    index = {k: i for i, k in enumerate(keys)}
    types = spec.types
    by_type = {d: [k for k in keys if len(k) == d] for d in types}
    # up[k] -> vertices of the next type containing k
    up: dict[Key, list[int]] = {}
    for lo, hi in zip(types, types[1:]):
        for big in by_type[hi]:
            basis = np.asarray(big, dtype=np.int64)
            for coords in _rref_batch(hi, lo, spec.q):
                small = _key(rref(_matmul(coords, basis, F), F))
                if small in index:
                    up.setdefault(small, []).append(index[big])
    chains = [(index[k],) for k in by_type[types[0]]]
    for _ in types[1:]:
        chains = [c + (b,) for c in chains for b in up.get(keys[c[-1]], [])]
    return chains


def _complement(small: Key, big: Key, F: FiniteField) -> np.ndarray:
    """Rows of ``big`` completing a basis of ``small`` to one of ``big``."""
    basis = [list(r) for r in small]
    extra = []
    for row in big:
        if len(span_key(basis + [list(row)], F)) > len(basis):
            basis.append(list(row))
            extra.append(list(row))
    return np.asarray(extra, dtype=np.int64).reshape(-1, len(big[0]))


def _join_parts(spec: FlagComplexSpec, budget: int | None):
    F = spec.field
    complexes, keys = [], []
    for lo, hi in _intervals(spec):
        t = len(hi) - len(lo)
        if t < 2:
            complexes.append(empty_complex())
            continue
        fc = build_flag_complex(FlagComplexSpec(t - 2, spec.q), "direct", budget)
        lift = _complement(lo, hi, F)
        lifted = []
        for key in fc.keys:
            image = _matmul(np.asarray(key, dtype=np.int64), lift, F)
            lifted.append(span_key(list(lo) + image.tolist(), F))
        complexes.append(fc.complex)
        keys.extend(lifted)
    return complexes, keys


def build_flag_complex(spec: FlagComplexSpec, mode: str = "direct", budget: int | None = None) -> FlagComplex:
    """Construct ``X_F`` with vertices ordered by ``(dim, key)``.

    ``mode="direct"`` filters all subspaces of ``V`` for comparability with
    ``F`` and enumerates chains; ``mode="join"`` assembles the join of the
    empty-flag complexes of the successive quotients ``F_j / F_(j-1)`` and
    lifts their subspaces back into ``V``.
    """
    _check_budget(spec.q, spec.ambient_dim, budget)
    if mode == "direct":
        keys = _direct_vertices(spec, budget)
        maximal = _direct_maximal(spec, keys) if keys else []
        if spec.N == 0:
            maximal = [(i,) for i in range(len(keys))]
        X = SimplicialComplex([]) if not keys else build_from_maximal(maximal)
        if X.num_vertices != len(keys):
            raise AssertionError("every refining subspace lies in a maximal chain")
        ordered = keys
    elif mode == "join":
        parts, lifted = _join_parts(spec, budget)
        X = empty_complex()
        for part in parts:
            X = join(X, part)
        order = sorted(range(len(lifted)), key=lambda v: (len(lifted[v]), lifted[v]))
        mapping = np.empty(len(order), dtype=np.int64)
        mapping[order] = np.arange(len(order))
        X = X.relabel(mapping) if len(order) else X
        X = SimplicialComplex([X.simplices(k) for k in range(X.dim + 1)])
        ordered = [lifted[v] for v in order]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if list(ordered) != sorted(ordered, key=lambda k: (len(k), k)):
        ordered_sorted = sorted(range(len(ordered)), key=lambda v: (len(ordered[v]), ordered[v]))
        mapping = np.empty(len(ordered), dtype=np.int64)
        mapping[ordered_sorted] = np.arange(len(ordered))
        X = SimplicialComplex([X.relabel(mapping).simplices(k) for k in range(X.dim + 1)])
        ordered = [ordered[v] for v in ordered_sorted]
    types = np.array([len(k) for k in ordered], dtype=np.int64)
    return FlagComplex(X, spec, tuple(ordered), types)


def predicted_weight(fc: FlagComplex, simplex: Sequence[int]) -> int:
    """Closed-form count of top simplices of ``X_F`` containing ``simplex``.

    With the refined flag ``0 = G_(-1) < G_0 < ... < G_(j+1) = V`` and
    ``r_k = dim G_k - dim G_(k-1)``, the count is
    ``prod_k (r_k)_q / (1)_q^(r_k)``.
    """
    X = fc.complex
    s = tuple(sorted(int(v) for v in simplex))
    X.index(s)
    q = fc.spec.q
    dims = sorted(set(fc.spec.flag_dims) | {int(fc.vertex_types[v]) for v in s})
    bounds = [0, *dims, fc.spec.ambient_dim]
    r = [b - a for a, b in zip(bounds, bounds[1:])]
    num = prod(q_factorial(x, q) for x in r)
    den = prod(q_factorial(1, q) ** x for x in r)
    return num // den


def type_sum_check(fc: FlagComplex, v: int, alpha: int) -> tuple[bool, int, int]:
    """Check ``sum_{x ~ v, Type(x) = alpha} w([v, x]) = w(v)``.

    Returns ``(holds, lhs, rhs)``.
    """
    if alpha == fc.type_of(v):
        raise ValueError("alpha must differ from the type of v")
    if alpha not in fc.types:
        raise ValueError(f"{alpha} is not a vertex type of this complex")
    X = fc.complex
    w = top_weights(X)
    lhs = 0
    for x in sorted(X.neighbors[v]):
        if fc.type_of(x) == alpha:
            lhs += int(w[1][X.index((v, x))])
    rhs = int(w[0][v])
    return lhs == rhs, lhs, rhs
