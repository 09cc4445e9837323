"""Weighted cochains, coboundary, codifferential and the curvature transformation.

A cochain of degree ``i`` is a vector indexed by the canonical (ascending)
``i``-simplices of a complex.  Object arrays of rationals (``gmpy2.mpq``, ``Fraction`` or ``int``)
give the exact backend, ``float64`` arrays the floating one; every operator below
accepts either.

With weights ``w``, the inner product is ``(f, g) = sum_s w(s) f(s) g(s)``,
``d`` is the signed coboundary, ``delta = W_i^{-1} D^T W_{i+1}`` its adjoint
and ``Delta = delta d`` the curvature transformation on ``C^i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np
import scipy.linalg
from gmpy2 import mpq
import scipy.sparse as sp

from .complex import SimplicialComplex, link, top_weights
from .errors import BudgetError, DegreeError, EmptySpectrumError, GarlandError
from .exact import (
    DEFAULT_EXACT_BUDGET,
    Poly,
    integer_rank,
    krylov_minimal_polynomial,
    poly_derivative,
    poly_gcd,
    poly_roots_float,
    poly_scale_variable,
    rational_nullspace,
)

__all__ = [
    "ZERO_THRESHOLD",
    "CLUSTER_TOLERANCE",
    "WeightedLaplacian",
    "Cochain",
    "Spectrum",
    "HodgeDecomposition",
    "LocalView",
    "laplacian",
    "coboundary",
    "codifferential",
    "inner_product",
    "curvature_spectrum",
    "spectrum_from_values",
    "minimal_polynomial",
    "hodge",
    "betti_numbers",
    "link_extrema",
    "localize",
    "random_cochain",
]

ZERO_THRESHOLD = 1e-9
CLUSTER_TOLERANCE = 1e-7


def _as_weight_array(values) -> np.ndarray:
    arr = np.empty(len(values), dtype=object)
    for k, v in enumerate(values):
        v = mpq(int(v)) if isinstance(v, (int, np.integer)) else mpq(Fraction(v))
        if v <= 0:
            raise ValueError("weights must be positive")
        arr[k] = int(v.numerator) if v.denominator == 1 else v
    return arr


def _is_exact(values: np.ndarray) -> bool:
    return np.asarray(values).dtype == object


class WeightedLaplacian:
    """Operators of one complex with one weight function.

    ``weights`` is a per-dimension sequence of positive rationals; by
    default it is the top-simplex count of :func:`garland.complex.top_weights`.
    """

    def __init__(self, X: SimplicialComplex, weights: Sequence[Sequence] | None = None):
        self.X = X
        self.n = X.dim
        if weights is None:
            raw = top_weights(X) if X.dim >= 0 else []
            self.default_weights = True
        else:
            raw = list(weights)
            if len(raw) != X.dim + 1 or any(len(w) != X.count(k) for k, w in enumerate(raw)):
                raise ValueError("one weight per simplex in every dimension is required")
            self.default_weights = False
        self._w = [_as_weight_array(w) for w in raw]
        self._wf = [np.array([float(x) for x in w], dtype=float) for w in self._w]
        self._winv = [np.array([1 / mpq(x) for x in w], dtype=object) for w in self._w]
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"WeightedLaplacian({self.X!r}, default_weights={self.default_weights})"

    # -- data --------------------------------------------------------------
    def dim(self, i: int) -> int:
        return self.X.count(i) if 0 <= i <= self.n else 0

    def weights(self, i: int) -> np.ndarray:
        self._check(i)
        return self._w[i]

    def float_weights(self, i: int) -> np.ndarray:
        self._check(i)
        return self._wf[i]

    def _check(self, i: int) -> None:
        if not 0 <= i <= self.n:
            raise DegreeError(f"degree {i} outside [0, {self.n}]")

    def _faces(self, i: int) -> np.ndarray:
        """Face index of the (i+1)-simplices (columns = omitted position)."""
        return self.X.face_index(i + 1)

    # -- matrices ----------------------------------------------------------
    def coboundary_matrix(self, i: int) -> sp.csr_matrix:
        """Integer matrix of ``d: C^i -> C^(i+1)``."""
        self._check(i)
        key = ("D", i)
        if key not in self._cache:
            if i >= self.n:
                mat = sp.csr_matrix((0, self.dim(i)), dtype=np.int64)
            else:
                fi = self._faces(i)
                rows = np.repeat(np.arange(len(fi)), i + 2)
                cols = fi.ravel()
                signs = np.tile((-1) ** np.arange(i + 2), len(fi))
                mat = sp.csr_matrix((signs, (rows, cols)), shape=(len(fi), self.dim(i)), dtype=np.int64)
            self._cache[key] = mat
        return self._cache[key]

    def symmetrized_coboundary(self, i: int) -> sp.csr_matrix:
        """``W_(i+1)^(1/2) D_i W_i^(-1/2)``: d in orthonormal coordinates."""
        D = self.coboundary_matrix(i).astype(float)
        if i >= self.n:
            return D
        left = sp.diags(np.sqrt(self._wf[i + 1]))
        right = sp.diags(1 / np.sqrt(self._wf[i]))
        return (left @ D @ right).tocsr()

    def symmetric_matrix(self, i: int) -> np.ndarray:
        """Dense ``W_i^(1/2) Delta W_i^(-1/2)``, symmetric positive semidefinite."""
        S = self.symmetrized_coboundary(i)
        M = (S.T @ S).toarray()
        return (M + M.T) / 2

    def laplacian_matrix(self, i: int) -> sp.csr_matrix:
        """Float matrix of ``Delta`` in the standard basis (not symmetric)."""
        D = self.coboundary_matrix(i).astype(float)
        if i >= self.n:
            return sp.csr_matrix((self.dim(i), self.dim(i)))
        return (sp.diags(1 / self._wf[i]) @ D.T @ sp.diags(self._wf[i + 1]) @ D).tocsr()

    def exact_laplacian_matrix(self, i: int) -> list[list[Fraction]]:
        """Dense rational matrix of ``Delta`` (small complexes only)."""
        size = self.dim(i)
        out = []
        for col in range(size):
            e = np.zeros(size, dtype=object)
            e[:] = 0
            e[col] = 1
            out.append(self.laplacian(e, i))
        return [[Fraction(out[c][r]) for c in range(size)] for r in range(size)]

    # -- operators on vectors ----------------------------------------------
    def d(self, f: np.ndarray, i: int) -> np.ndarray:
        self._check(i)
        f = np.asarray(f)
        if i >= self.n:
            return np.zeros(0, dtype=f.dtype)
        fi = self._faces(i)
        out = f[fi[:, 0]].copy()
        for j in range(1, i + 2):
            if j % 2:
                out = out - f[fi[:, j]]
            else:
                out = out + f[fi[:, j]]
        return out

    def d_transpose(self, g: np.ndarray, i: int) -> np.ndarray:
        """``D_i^T g`` for ``g`` in ``C^(i+1)``."""
        self._check(i)
        g = np.asarray(g)
        out = np.zeros(self.dim(i), dtype=g.dtype)
        if _is_exact(g):
            out[:] = 0
        if i >= self.n:
            return out
        fi = self._faces(i)
        for j in range(i + 2):
            np.add.at(out, fi[:, j], g if j % 2 == 0 else -g)
        return out

    def delta(self, g: np.ndarray, i: int) -> np.ndarray:
        """Codifferential ``C^i -> C^(i-1)``; zero map on ``C^0``."""
        self._check(i)
        g = np.asarray(g)
        if i == 0:
            return np.zeros(0, dtype=g.dtype)
        if _is_exact(g):
            return self.d_transpose(self._w[i] * g, i - 1) * self._winv[i - 1]
        return self.d_transpose(self._wf[i] * g, i - 1) / self._wf[i - 1]

    def laplacian(self, f: np.ndarray, i: int) -> np.ndarray:
        """``Delta f = delta d f`` for ``f`` in ``C^i``."""
        self._check(i)
        f = np.asarray(f)
        if i >= self.n:
            out = np.zeros(self.dim(i), dtype=f.dtype)
            if _is_exact(f):
                out[:] = 0
            return out
        return self.delta(self.d(f, i), i + 1)

    def down_laplacian(self, f: np.ndarray, i: int) -> np.ndarray:
        """``d delta f``; together with :meth:`laplacian` the full Hodge Laplacian."""
        self._check(i)
        f = np.asarray(f)
        if i == 0:
            out = np.zeros(self.dim(0), dtype=f.dtype)
            if _is_exact(f):
                out[:] = 0
            return out
        return self.d(self.delta(f, i), i - 1)

    def inner(self, f: np.ndarray, g: np.ndarray, i: int):
        self._check(i)
        f, g = np.asarray(f), np.asarray(g)
        if len(f) != self.dim(i) or len(g) != self.dim(i):
            raise DegreeError("cochain length does not match the degree")
        if _is_exact(f) and _is_exact(g):
            return sum((self._w[i] * f * g).tolist(), mpq(0))
        return float(np.dot(self._wf[i] * np.asarray(f, dtype=float), np.asarray(g, dtype=float)))

    def rho(self, f: np.ndarray, i: int, v: int) -> np.ndarray:
        """Restriction of ``f`` to the ``i``-simplices containing ``v``."""
        self._check(i)
        f = np.asarray(f)
        mask = (self.X.simplices(i) == v).any(axis=1)
        out = f.copy()
        out[~mask] = 0
        return out

    # -- localisation --------------------------------------------------------
    def local(self, v: int) -> "LocalView":
        key = ("local", v)
        if key not in self._cache:
            self._cache[key] = LocalView(self, v)
        return self._cache[key]


class LocalView:
    """The link of a vertex with the induced weights ``w_v(s) = w([v, s])``."""

    def __init__(self, parent: WeightedLaplacian, v: int):
        self.parent = parent
        self.vertex = int(v)
        X = parent.X
        self.link = link(X, [v])
        labels = np.asarray(self.link.labels, dtype=np.int64)
        self._index: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        induced = []
        for k in range(self.link.dim + 1):
            idx, sign = self._lift(k, labels)
            self._index[k] = (idx, sign)
            induced.append([parent.weights(k + 1)[r] for r in idx.tolist()])
        self.laplacian = WeightedLaplacian(self.link, induced if self.link.dim >= 0 else None)

    def _lift(self, k: int, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        rows = labels[self.link.simplices(k)]
        before = (rows < self.vertex).sum(axis=1)
        full = np.sort(np.hstack([rows, np.full((len(rows), 1), self.vertex)]), axis=1)
        idx = self.parent.X.find(k + 1, full)
        if (idx < 0).any():
            raise AssertionError("link simplex does not lift to the complex")
        return idx, np.where(before % 2 == 0, 1, -1)

    def tau(self, f: np.ndarray, i: int) -> np.ndarray:
        """``tau_v f (s) = f([v, s])`` on ``(i-1)``-simplices of the link."""
        if i < 1:
            raise DegreeError("tau_v needs degree at least 1")
        if i - 1 > self.link.dim:
            return np.zeros(0, dtype=np.asarray(f).dtype)
        idx, sign = self._index[i - 1]
        return np.asarray(f)[idx] * sign


# -- cochain value type ----------------------------------------------------


@dataclass(frozen=True)
class Cochain:
    """An ``i``-cochain bound to a :class:`WeightedLaplacian`."""

    space: WeightedLaplacian
    degree: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.space._check(self.degree)
        if len(self.values) != self.space.dim(self.degree):
            raise DegreeError("cochain length does not match the degree")

    @property
    def exact(self) -> bool:
        return _is_exact(self.values)

    def value(self, simplex: Sequence[int]):
        """Value on an oriented simplex given as a vertex sequence."""
        verts = list(simplex)
        perm_sign = 1
        for a in range(len(verts)):
            for b in range(a + 1, len(verts)):
                if verts[a] > verts[b]:
                    perm_sign = -perm_sign
        return perm_sign * self.values[self.space.X.index(verts)]

    def d(self) -> "Cochain":
        return Cochain(self.space, self.degree + 1, self.space.d(self.values, self.degree))

    def delta(self) -> "Cochain":
        return Cochain(self.space, self.degree - 1, self.space.delta(self.values, self.degree))

    def laplacian(self) -> "Cochain":
        return Cochain(self.space, self.degree, self.space.laplacian(self.values, self.degree))

    def __add__(self, other: "Cochain") -> "Cochain":
        return Cochain(self.space, self.degree, self.values + other.values)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return Cochain(self.space, self.degree, self.values - other.values)

    def __rmul__(self, scalar) -> "Cochain":
        return Cochain(self.space, self.degree, scalar * self.values)


def random_cochain(space: WeightedLaplacian, i: int, rng: np.random.Generator, exact: bool = True) -> np.ndarray:
    """Random cochain; exact ones have small random rational entries."""
    size = space.dim(i)
    if not exact:
        return rng.standard_normal(size)
    nums = rng.integers(-20, 21, size=size)
    dens = rng.integers(1, 8, size=size)
    out = np.empty(size, dtype=object)
    for k in range(size):
        out[k] = mpq(int(nums[k]), int(dens[k]))
    return out


def laplacian(X: SimplicialComplex, weights: Sequence[Sequence] | None = None) -> WeightedLaplacian:
    """Shared operator bundle; default-weight bundles are cached on ``X``."""
    if weights is not None:
        return WeightedLaplacian(X, weights)
    cached = X.__dict__.get("_default_laplacian")
    if cached is None:
        cached = WeightedLaplacian(X)
        X.__dict__["_default_laplacian"] = cached
    return cached


def coboundary(X: SimplicialComplex, i: int) -> sp.csr_matrix:
    if not 0 <= i < X.dim:
        raise DegreeError(f"coboundary needs 0 <= i < {X.dim}, got {i}")
    return laplacian(X).coboundary_matrix(i)


def codifferential(X: SimplicialComplex, i: int, weights=None) -> sp.csr_matrix:
    """Float matrix of ``delta: C^i -> C^(i-1)``."""
    if not 1 <= i <= X.dim:
        raise DegreeError(f"codifferential needs 1 <= i <= {X.dim}, got {i}")
    L = laplacian(X, weights)
    D = L.coboundary_matrix(i - 1).astype(float)
    return (sp.diags(1 / L.float_weights(i - 1)) @ D.T @ sp.diags(L.float_weights(i))).tocsr()


def inner_product(f: Cochain, g: Cochain):
    if f.space is not g.space or f.degree != g.degree:
        raise DegreeError("cochains live on different spaces")
    if f.exact != g.exact:
        raise TypeError("cannot mix exact and float cochains")
    return f.space.inner(f.values, g.values, f.degree)


# -- spectra ---------------------------------------------------------------


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of ``Delta`` on ``C^i`` with multiplicities.

    ``values``/``multiplicities`` hold clustered distinct eigenvalues;
    ``eigenvalues`` is the full sorted list.  ``m`` is the smallest
    eigenvalue above the zero threshold (``None`` if ``Delta = 0``).
    """

    degree: int
    eigenvalues: np.ndarray = field(repr=False)
    values: tuple[float, ...]
    multiplicities: tuple[int, ...]
    m: float | None
    M: float
    zero_multiplicity: int

    @property
    def distinct_count(self) -> int:
        return len(self.values)

    def multiplicity(self, value: float, tol: float = CLUSTER_TOLERANCE) -> int:
        for x, k in zip(self.values, self.multiplicities):
            if abs(x - value) <= tol * max(1.0, abs(value)):
                return k
        return 0

    @property
    def nonzero(self) -> tuple[float, ...]:
        return tuple(x for x in self.values if x != 0.0)

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "eigenvalues": [{"value": v, "multiplicity": k} for v, k in zip(self.values, self.multiplicities)],
            "m": self.m,
            "M": self.M,
            "zero_multiplicity": self.zero_multiplicity,
        }


def spectrum_from_values(eigs: np.ndarray, degree: int) -> Spectrum:
    """Apply the zero threshold and relative clustering to raw eigenvalues."""
    eigs = np.sort(np.asarray(eigs, dtype=float))
    M = float(eigs[-1]) if len(eigs) else 0.0
    if M < 0:
        M = 0.0
    zero = np.abs(eigs) <= ZERO_THRESHOLD * max(M, 1e-300)
    if (eigs < 0).any() and (eigs[eigs < 0] < -ZERO_THRESHOLD * max(M, 1.0)).any():
        raise GarlandError("negative eigenvalue: the operator is not positive")
    eigs = np.where(zero | (eigs < 0), 0.0, eigs)
    values: list[float] = []
    mults: list[int] = []
    members: list[list[float]] = []
    for x in eigs.tolist():
        if values and abs(x - members[-1][0]) <= CLUSTER_TOLERANCE * max(1.0, abs(x)):
            members[-1].append(x)
            mults[-1] += 1
        else:
            members.append([x])
            values.append(x)
            mults.append(1)
    values = [float(np.mean(g)) for g in members]
    nonzero = [v for v in values if v != 0.0]
    return Spectrum(
        degree=degree,
        eigenvalues=eigs,
        values=tuple(values),
        multiplicities=tuple(mults),
        m=nonzero[0] if nonzero else None,
        M=M if nonzero else 0.0,
        zero_multiplicity=int((eigs == 0.0).sum()),
    )


def curvature_spectrum(X: SimplicialComplex, i: int, weights=None) -> Spectrum:
    """Spectrum of ``Delta`` on ``C^i`` via the symmetrised matrix."""
    L = X if isinstance(X, WeightedLaplacian) else laplacian(X, weights)
    L._check(i)
    key = ("spectrum", i)
    if key not in L._cache:
        if L.dim(i) == 0:
            eigs = np.zeros(0)
        else:
            eigs = scipy.linalg.eigvalsh(L.symmetric_matrix(i))
        L._cache[key] = spectrum_from_values(eigs, i)
    return L._cache[key]


def _integer_action(L: WeightedLaplacian, i: int):
    """Integer matrix ``K * Delta`` as a callable plus the scale ``K``."""
    w_up = L.weights(i + 1)
    c = lcm(*(Fraction(x).denominator for x in w_up.tolist()))
    up = np.array([int(Fraction(x) * c) for x in w_up.tolist()], dtype=object)
    inv_low = [1 / Fraction(x) for x in L.weights(i).tolist()]
    ell = lcm(*(x.denominator for x in inv_low))
    low = np.array([int(x * ell) for x in inv_low], dtype=object)

    def apply(vec: np.ndarray) -> np.ndarray:
        return L.d_transpose(up * L.d(vec, i), i) * low

    return apply, c * ell


def minimal_polynomial(
    X: SimplicialComplex,
    i: int,
    weights=None,
    seed: int = 0,
    budget: int = DEFAULT_EXACT_BUDGET,
    certify: bool = True,
) -> Poly:
    """Exact minimal polynomial of ``Delta`` on ``C^i`` (monic, low-to-high).

    Computed by Krylov iteration on the integer matrix ``K * Delta`` from
    seeded random starts.  With ``certify`` the result is checked against
    the float spectrum: it must be squarefree (``Delta`` is diagonalisable)
    and its roots must match the clustered eigenvalues one to one.
    """
    L = X if isinstance(X, WeightedLaplacian) else laplacian(X, weights)
    L._check(i)
    size = L.dim(i)
    if size > budget:
        raise BudgetError(f"C^{i} has dimension {size}, above the exact budget {budget}")
    if i >= L.n:
        return (Fraction(0), Fraction(1)) if size else (Fraction(1),)
    apply, scale = _integer_action(L, i)
    rounds = 3
    for _ in range(3):
        rng = np.random.default_rng([seed, i, rounds])
        scaled = krylov_minimal_polynomial(apply, size, rng, stable_rounds=rounds, budget=budget)
        poly = poly_scale_variable(scaled, scale)
        if not certify or _certified(poly, curvature_spectrum(L, i)):
            return poly
        rounds *= 2
    raise GarlandError("minimal polynomial could not be certified against the spectrum")


def _certified(poly: Poly, spec: Spectrum) -> bool:
    if len(poly_gcd(poly, poly_derivative(poly))) > 1:
        return False
    roots = poly_roots_float(poly)
    if len(roots) != spec.distinct_count:
        return False
    if np.abs(roots.imag).max(initial=0.0) > 1e-6:
        return False
    roots = np.sort(roots.real)
    return bool(np.allclose(roots, np.asarray(spec.values), atol=1e-6, rtol=1e-6))


# -- Hodge decomposition ---------------------------------------------------


@dataclass(frozen=True)
class HodgeDecomposition:
    """Bases (columns, standard coordinates) of the three Hodge summands of ``C^i``."""

    degree: int
    harmonic_basis: np.ndarray = field(repr=False)
    exact_basis: np.ndarray = field(repr=False)
    coexact_basis: np.ndarray = field(repr=False)
    betti: int
    betti_rank: int
    reduced_betti: int
    exact_harmonic: list[list[Fraction]] | None = field(default=None, repr=False)

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.harmonic_basis.shape[1], self.exact_basis.shape[1], self.coexact_basis.shape[1])

    @property
    def agree(self) -> bool:
        return self.betti == self.betti_rank


def _rank_tol(M: np.ndarray) -> float:
    return max(M.shape, default=1) * np.finfo(float).eps * 1e3


def _orth(M: np.ndarray) -> np.ndarray:
    if M.size == 0:
        return np.zeros((M.shape[0], 0))
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    tol = _rank_tol(M) * max(1.0, s.max(initial=0.0))
    return u[:, s > tol]


def exact_rank(L: WeightedLaplacian, i: int) -> int:
    """Exact rank of ``d: C^i -> C^(i+1)`` (zero outside ``0 <= i < n``)."""
    if not 0 <= i < L.n:
        return 0
    key = ("rank", i)
    if key not in L._cache:
        fi = L._faces(i)
        rows = ({int(c): (-1) ** j for j, c in enumerate(r)} for r in fi.tolist())
        L._cache[key] = integer_rank(rows)
    return L._cache[key]


def hodge(X: SimplicialComplex, i: int, weights=None, exact: bool = False) -> HodgeDecomposition:
    """Orthogonal decomposition ``C^i = H^i + dC^(i-1) + delta C^(i+1)``.

    Bases are computed in orthonormal (square-root weighted) coordinates and
    mapped back.  ``betti`` is the harmonic dimension; ``betti_rank`` comes
    independently from exact integer ranks of the coboundary matrices.  With
    ``exact=True`` an exact rational harmonic basis is also returned.
    """
    L = X if isinstance(X, WeightedLaplacian) else laplacian(X, weights)
    L._check(i)
    size = L.dim(i)
    root = np.sqrt(L.float_weights(i))
    up = L.symmetrized_coboundary(i).toarray() if i < L.n else np.zeros((0, size))
    down = L.symmetrized_coboundary(i - 1).toarray() if i >= 1 else np.zeros((size, 0))
    exact_part = _orth(down)
    coexact_part = _orth(up.T)
    stacked = np.vstack([up, down.T])
    if stacked.shape[0] == 0:
        harmonic = np.eye(size)
    else:
        harmonic = scipy.linalg.null_space(stacked, rcond=_rank_tol(stacked))
    betti_rank = size - exact_rank(L, i) - exact_rank(L, i - 1)
    exact_h = None
    if exact:
        rows = []
        D_up = L.coboundary_matrix(i).toarray() if i < L.n else np.zeros((0, size), dtype=np.int64)
        rows.extend(D_up.tolist())
        if i >= 1:
            D_down = L.coboundary_matrix(i - 1).toarray()
            w = L.weights(i)
            for row in D_down.T.tolist():
                rows.append([Fraction(a) * Fraction(b) for a, b in zip(row, w.tolist())])
        exact_h = rational_nullspace(rows, size)
    betti = harmonic.shape[1]
    return HodgeDecomposition(
        degree=i,
        harmonic_basis=harmonic / root[:, None],
        exact_basis=exact_part / root[:, None],
        coexact_basis=coexact_part / root[:, None],
        betti=betti,
        betti_rank=betti_rank,
        reduced_betti=betti - 1 if i == 0 and size else betti,
        exact_harmonic=exact_h,
    )


def betti_numbers(X: SimplicialComplex, method: str = "rank") -> tuple[int, ...]:
    """Betti numbers in every degree, by exact rank or harmonic dimension."""
    L = laplacian(X)
    if method == "rank":
        return tuple(L.dim(i) - exact_rank(L, i) - exact_rank(L, i - 1) for i in range(X.dim + 1))
    if method == "harmonic":
        return tuple(hodge(L, i).betti for i in range(X.dim + 1))
    raise ValueError(f"unknown method {method!r}")


# -- links -------------------------------------------------------------------


def _simplex_link_laplacian(L: WeightedLaplacian, s: tuple[int, ...]) -> WeightedLaplacian:
    if len(s) == 1:
        return L.local(s[0]).laplacian
    X = L.X
    lk = link(X, s)
    labels = np.asarray(lk.labels, dtype=np.int64)
    induced = []
    for k in range(lk.dim + 1):
        rows = labels[lk.simplices(k)]
        full = np.sort(np.hstack([rows, np.tile(np.array(s), (len(rows), 1))]), axis=1)
        idx = X.find(k + len(s), full)
        induced.append(L.weights(k + len(s))[idx].tolist())
    return WeightedLaplacian(lk, induced)


def link_extrema(X: SimplicialComplex, i: int, j: int = 0, weights=None) -> tuple[float, float]:
    """``(min m^i(Lk s), max M^i(Lk s))`` over all ``j``-simplices ``s``.

    Links carry the induced weights ``w_s(t) = w(s * t)``.
    """
    L = X if isinstance(X, WeightedLaplacian) else laplacian(X, weights)
    n = L.n
    if not 0 <= j <= n - 1 or not 0 <= i <= n - j - 2:
        raise DegreeError(f"link extrema need 0 <= j <= n-1 and 0 <= i <= n-j-2 (n={n}, i={i}, j={j})")
    key = ("link_extrema", i, j)
    if key in L._cache:
        return L._cache[key]
    lo, hi = np.inf, -np.inf
    for s in L.X.simplices(j).tolist():
        spec = curvature_spectrum(_simplex_link_laplacian(L, tuple(s)), i)
        if spec.m is None:
            raise EmptySpectrumError(f"Delta vanishes on C^{i} of the link of {tuple(s)}")
        lo, hi = min(lo, spec.m), max(hi, spec.M)
    L._cache[key] = (float(lo), float(hi))
    return L._cache[key]


def localize(X: SimplicialComplex, f: np.ndarray, i: int, v: int, weights=None) -> tuple[np.ndarray, np.ndarray | None]:
    """``(rho_v f, tau_v f)``; the second entry is ``None`` when ``i = 0``."""
    L = X if isinstance(X, WeightedLaplacian) else laplacian(X, weights)
    rho = L.rho(f, i, v)
    tau = L.local(v).tau(f, i) if i >= 1 else None
    return rho, tau
