"""Automated checks of the identities, inequalities and bounds behind Garland's method.

Every check returns structured results instead of raising, so that callers
(tests, the CLI) decide what a failure means.  Exact identities are tested
on seeded random rational cochains with zero tolerance; inequalities that
involve eigenvalues are tested in floating point and report signed margins
(``margin >= -tol`` means the inequality holds).
"""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import lcm, sqrt
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg
from gmpy2 import mpq

from .cochains import (
    WeightedLaplacian,
    curvature_spectrum,
    exact_rank,
    laplacian,
    link_extrema,
    minimal_polynomial,
    random_cochain,
)
from .complex import SimplicialComplex, top_weights, weight_sum_defects
from .errors import BudgetError, DegreeError, MissingTypeMapError
from .exact import DEFAULT_EXACT_BUDGET, Poly, integer_rank, poly_roots_float
from .flags import FlagComplex, FlagComplexSpec, build_flag_complex

__all__ = [
    "DEFAULT_TOLERANCE",
    "CheckResult",
    "IdentityReport",
    "identity_suite",
    "InequalityCheck",
    "GarlandReport",
    "fundamental_inequality_report",
    "VanishingCertificate",
    "vanishing_certificate",
    "building_certificate",
    "ZukVerdict",
    "zuk_check",
    "AsymptoticsRow",
    "AsymptoticsTable",
    "asymptotics_table",
    "FlagBoundsReport",
    "flag_bounds_check",
    "complex_id",
    "eigenvalue_multiplicity_exact",
]

DEFAULT_TOLERANCE = 1e-9


def complex_id(X) -> str:
    if isinstance(X, FlagComplex):
        return X.spec.label()
    if isinstance(X, WeightedLaplacian):
        X = X.X
    return "complex(f=" + ",".join(str(c) for c in X.f_vector) + ")"


def _unpack(X, weights=None) -> tuple[WeightedLaplacian, np.ndarray | None, FlagComplex | None]:
    if isinstance(X, FlagComplex):
        return laplacian(X.complex, weights), X.vertex_types, X
    if isinstance(X, WeightedLaplacian):
        return X, None, None
    return laplacian(X, weights), None, None


def _zero(size: int) -> np.ndarray:
    out = np.empty(size, dtype=object)
    out[:] = 0
    return out


def _same(a: np.ndarray, b: np.ndarray) -> bool:
    return len(a) == len(b) and all(x == y for x, y in zip(a.tolist(), b.tolist()))


# -- identity suite ------------------------------------------------------------


@dataclass
class CheckResult:
    """Outcome of one identity over all trials."""

    name: str
    degree: int | None
    passed: bool
    trials: int
    witness: str | None = None


@dataclass
class IdentityReport:
    complex_id: str
    results: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def names(self) -> set[str]:
        return {r.name for r in self.results}

    def to_dict(self) -> dict:
        return {"complex_id": self.complex_id, "passed": self.passed, "results": [asdict(r) for r in self.results]}


class _Recorder:
    def __init__(self):
        self.table: dict[tuple[str, int | None], CheckResult] = {}

    def record(self, name: str, degree: int | None, ok: bool, witness: str = "") -> None:
        key = (name, degree)
        res = self.table.setdefault(key, CheckResult(name, degree, True, 0))
        res.trials += 1
        if not ok and res.passed:
            res.passed = False
            res.witness = witness or "identity failed"

    def results(self) -> list[CheckResult]:
        return list(self.table.values())


def _rho_sum_and_local(L: WeightedLaplacian, f: np.ndarray, g: np.ndarray, i: int, rec: _Recorder) -> None:
    """Vertex-local identities for one pair of random cochains."""
    n = L.n
    total = _zero(L.dim(i))
    local_energy_sum = mpq(0)
    for v in range(L.X.num_vertices):
        rf = L.rho(f, i, v)
        total = total + rf
        rec.record("rho_idempotent", i, _same(L.rho(rf, i, v), rf) and L.inner(rf, f, i) == L.inner(rf, rf, i),
                   f"vertex {v}")
        if i < 1:
            continue
        view = L.local(v)
        loc = view.laplacian
        tf, tg = view.tau(f, i), view.tau(g, i)
        rg = L.rho(g, i, v)
        rec.record("tau_isometry", i, loc.inner(tf, tg, i - 1) == L.inner(rf, rg, i), f"vertex {v}")
        if i <= n - 1:
            lhs = view.tau(L.d(rf, i), i + 1)
            rhs = -loc.d(tf, i - 1)
            rec.record("tau_coboundary", i, _same(lhs, rhs), f"vertex {v}")
            lap_rho = L.laplacian(rf, i)
            rec.record("tau_laplacian", i, _same(view.tau(lap_rho, i), loc.laplacian(tf, i - 1)), f"vertex {v}")
            energy = L.inner(lap_rho, rf, i)
            rec.record("local_energy", i, energy == loc.inner(loc.laplacian(tf, i - 1), tf, i - 1), f"vertex {v}")
            local_energy_sum += energy
        if i >= 2:
            lhs = view.tau(L.delta(f, i), i - 1)
            rhs = -loc.delta(tf, i - 1)
            rec.record("tau_codifferential", i, _same(lhs, rhs), f"vertex {v}")
    rec.record("rho_sum", i, _same(total, (i + 1) * f), "sum of restrictions")
    if 1 <= i <= n - 1 and L.default_weights:
        lhs = i * L.inner(L.laplacian(f, i), f, i)
        rhs = local_energy_sum - (n - i) * L.inner(f, f, i)
        rec.record("local_decomposition", i, lhs == rhs, f"{lhs} != {rhs}")


def _type_graded(L: WeightedLaplacian, types: np.ndarray, rng: np.random.Generator, trials: int, rec: _Recorder) -> None:
    X = L.X
    N = X.dim
    type_set = sorted(set(types.tolist()))
    rec.record("type_count", None, len(type_set) == N + 1, f"{len(type_set)} types, N = {N}")
    for k in range(1, N + 1):
        tt = types[X.simplices(k)]
        distinct = all(len(set(row)) == len(row) for row in tt.tolist())
        rec.record("distinct_types", k, distinct, f"repeated type among {k}-simplices")
    if N < 1:
        return
    w = top_weights(X)
    for v in range(X.num_vertices):
        acc = {a: 0 for a in type_set}
        for x in X.neighbors[v]:
            acc[int(types[x])] += int(w[1][X.index((v, x))])
        for a in type_set:
            if a != types[v]:
                rec.record("type_sum", None, acc[a] == w[0][v], f"vertex {v}, type {a}: {acc[a]} != {w[0][v]}")
    by_type = {a: np.flatnonzero(types == a) for a in type_set}
    for _ in range(trials):
        f = random_cochain(L, 0, rng)
        R = mpq(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
        df = L.d(f, 0)
        ff = L.inner(f, f, 0)
        lap_ff = L.inner(L.laplacian(f, 0), f, 0)
        one_minus_sum = _zero(len(df))
        falpha_sum = mpq(0)
        for a in type_set:
            fa = f.copy()
            fa[by_type[a]] = fa[by_type[a]] * R
            dfa = L.d(fa, 0)
            rho_a_dfa = _zero(len(dfa))
            vertex_energy = mpq(0)
            for v in by_type[a].tolist():
                rv = L.rho(dfa, 1, v)
                rho_a_dfa = rho_a_dfa + rv
                vertex_energy += L.inner(L.laplacian(rv, 1), rv, 1)
            rho_a_df = _zero(len(df))
            for v in by_type[a].tolist():
                rho_a_df = rho_a_df + L.rho(df, 1, v)
            one_minus = df - rho_a_df
            one_minus_sum = one_minus_sum + one_minus
            alpha_energy = L.inner(L.laplacian(rho_a_dfa, 1), rho_a_dfa, 1)
            rest = L.inner(one_minus, df, 1)
            rec.record("f_alpha_vertex_energy", a, vertex_energy == alpha_energy, f"R = {R}")
            rec.record("f_alpha_restriction", a,
                       L.inner(rho_a_dfa, dfa, 1) == L.inner(dfa, dfa, 1) - rest, f"R = {R}")
            rec.record("f_alpha_energy", a, alpha_energy == rest, f"R = {R}")
            g = _zero(len(f))
            g[by_type[a]] = f[by_type[a]]
            rec.record("single_type_energy", a,
                       L.inner(L.laplacian(g, 0), g, 0) == N * L.inner(g, g, 0), f"type {a}")
            falpha_sum += L.inner(L.laplacian(fa, 0), fa, 0)
        rec.record("f_alpha_coboundary_sum", None, _same(one_minus_sum, (N - 1) * df), f"R = {R}")
        rec.record("f_alpha_sum", None,
                   falpha_sum == (N + 2 * R - 1) * lap_ff + N * (R - 1) ** 2 * ff, f"R = {R}")
    _exact_eigen_checks(L, types, type_set, by_type, rng, trials, rec)


def _falpha(f: np.ndarray, idx: np.ndarray, R) -> np.ndarray:
    fa = f.copy()
    fa[idx] = fa[idx] * R
    return fa


def _closed_form(N: int, c, R):
    return (N - c) * (R - 1) ** 2 + c * (R**2 + N)


def _exact_eigen_checks(L, types, type_set, by_type, rng, trials, rec) -> None:
    """Closed forms on eigenfunctions known exactly: constants and the type-constant zero-sum space."""
    N = L.n
    size = L.dim(0)
    for t in range(trials):
        if t % 2 == 0:
            c = mpq(0)
            f = _zero(size)
            f[:] = mpq(int(rng.integers(1, 10)), int(rng.integers(1, 5)))
        else:
            c = mpq(N + 1)
            coeffs = [mpq(int(rng.integers(-9, 10)), int(rng.integers(1, 5))) for _ in type_set[:-1]]
            coeffs.append(-sum(coeffs, mpq(0)))
            f = _zero(size)
            for a, val in zip(type_set, coeffs):
                f[by_type[a]] = val
        rec.record("type_constant_eigen", None, _same(L.laplacian(f, 0), c * f), f"c = {c}")
        R = mpq(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
        total = sum((L.inner(L.laplacian(_falpha(f, by_type[a], R), 0), _falpha(f, by_type[a], R), 0)
                     for a in type_set), mpq(0))
        rec.record("f_alpha_closed_form", None, total == _closed_form(N, c, R) * L.inner(f, f, 0),
                   f"c = {c}, R = {R}")
        R0 = (N - c) / N
        for a in type_set:
            lap = L.laplacian(_falpha(f, by_type[a], R0), 0)
            rec.record("f_alpha_balanced", None, all(x == 0 for x in lap[by_type[a]].tolist()), f"type {a}")


def _float_eigen_checks(L: WeightedLaplacian, types: np.ndarray, rng: np.random.Generator, rec: _Recorder,
                        tol: float = 1e-7) -> None:
    """Closed forms on float eigenpairs of Delta on C^0."""
    N = L.n
    type_set = sorted(set(types.tolist()))
    by_type = {a: np.flatnonzero(types == a) for a in type_set}
    vals, vecs = scipy.linalg.eigh(L.symmetric_matrix(0))
    root = np.sqrt(L.float_weights(0))
    for c, u in zip(vals.tolist(), vecs.T):
        f = u / root
        ff = L.inner(f, f, 0)
        R = float(rng.uniform(-2, 2))
        total = sum(L.inner(L.laplacian(_falpha(f, by_type[a], R), 0), _falpha(f, by_type[a], R), 0)
                    for a in type_set)
        expect = _closed_form(N, c, R) * ff
        rec.record("f_alpha_closed_form_float", None, abs(total - expect) <= tol * max(1.0, abs(expect)),
                   f"c = {c}: {total} vs {expect}")
        R0 = (N - c) / N
        worst = 0.0
        for a in type_set:
            lap = L.laplacian(_falpha(f, by_type[a], R0), 0)
            worst = max(worst, float(np.abs(lap[by_type[a]]).max(initial=0.0)))
        rec.record("f_alpha_balanced_float", None, worst <= 1e-8 * max(1.0, float(np.abs(f).max())),
                   f"c = {c}: residual {worst}")


def identity_suite(X, weights=None, trials: int = 50, seed: int = 0, types: Sequence[int] | None = None,
                   float_eigen: bool = True, require_types: bool = False) -> IdentityReport:
    """Exact identity checks on ``trials`` seeded random rational cochains per degree.

    ``X`` may be a complex, a :class:`WeightedLaplacian` or a
    :class:`~garland.flags.FlagComplex`; the latter (or explicit ``types``)
    enables the type-graded identities.
    """
    L, flag_types, _ = _unpack(X, weights)
    if types is not None:
        flag_types = np.asarray(types, dtype=np.int64)
    if require_types and flag_types is None:
        raise MissingTypeMapError("type-graded identities need a vertex type map")
    rec = _Recorder()
    n = L.n
    rng = np.random.default_rng(seed)
    if L.default_weights:
        defects = weight_sum_defects(L.X)
        rec.record("weight_sum", None, not defects, str(defects[:1]))
        for v in range(L.X.num_vertices):
            view = L.local(v)
            if view.link.dim < 0:
                continue
            own = top_weights(view.link)
            induced = [view.laplacian.weights(k) for k in range(view.link.dim + 1)]
            rec.record("link_weights", None, all(_same(np.asarray(a, dtype=object), b) for a, b in zip(own, induced)),
                       f"vertex {v}")
    for i in range(n):
        D = L.coboundary_matrix(i)
        if i + 1 < n:
            prod = (L.coboundary_matrix(i + 1) @ D)
            rec.record("d_squared_matrix", i, prod.count_nonzero() == 0, "D_(i+1) D_i has a nonzero entry")
    for i in range(n + 1):
        for _ in range(trials):
            f = random_cochain(L, i, rng)
            g = random_cochain(L, i, rng)
            if i <= n - 2:
                rec.record("d_squared", i, all(x == 0 for x in L.d(L.d(f, i), i + 1).tolist()))
            if i <= n - 1:
                h = random_cochain(L, i + 1, rng)
                df = L.d(f, i)
                rec.record("adjoint", i, L.inner(df, h, i + 1) == L.inner(f, L.delta(h, i + 1), i))
                rec.record("energy", i, L.inner(L.laplacian(f, i), f, i) == L.inner(df, df, i + 1))
            _rho_sum_and_local(L, f, g, i, rec)
    if flag_types is not None and L.default_weights:
        _type_graded(L, flag_types, rng, trials, rec)
        if float_eigen and n >= 1:
            _float_eigen_checks(L, flag_types, rng, rec)
    cid = complex_id(X)
    return IdentityReport(cid, rec.results())


# -- fundamental inequalities --------------------------------------------------


@dataclass
class InequalityCheck:
    """One instance of an inequality; ``margin >= -tolerance`` means it holds.

    ``relation`` is ``">="`` or ``"<="`` between ``lhs`` and ``rhs``; the
    margin is ``lhs - rhs`` for ``>=`` and ``rhs - lhs`` for ``<=``.
    """

    name: str
    statement: str
    i: int
    j: int
    lhs: float
    rhs: float
    relation: str
    margin: float
    tolerance: float

    @property
    def holds(self) -> bool:
        return self.margin >= -self.tolerance


def _ineq(name, statement, i, j, lhs, rhs, relation, tol) -> InequalityCheck:
    lhs, rhs = float(lhs), float(rhs)
    margin = lhs - rhs if relation == ">=" else rhs - lhs
    return InequalityCheck(name, statement, i, j, lhs, rhs, relation, margin, tol)


@dataclass
class GarlandReport:
    complex_id: str
    n: int
    spectra: dict[int, tuple[float | None, float]]
    link_extrema: dict[tuple[int, int], tuple[float, float]]
    links_acyclic: dict[int, bool]
    checks: list[InequalityCheck]
    tolerance: float = DEFAULT_TOLERANCE

    @property
    def violations(self) -> list[InequalityCheck]:
        return [c for c in self.checks if not c.holds]

    @property
    def passed(self) -> bool:
        return not self.violations

    def min_margin(self) -> float | None:
        return min((c.margin for c in self.checks), default=None)

    def to_dict(self) -> dict:
        return {
            "complex_id": self.complex_id,
            "n": self.n,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "spectra": {str(i): {"m": m, "M": M} for i, (m, M) in self.spectra.items()},
            "link_extrema": {f"{i},{j}": {"min": a, "max": b} for (i, j), (a, b) in self.link_extrema.items()},
            "links_acyclic": {str(k): v for k, v in self.links_acyclic.items()},
            "checks": [dict(asdict(c), holds=c.holds) for c in self.checks],
        }


def _reduced_betti(L: WeightedLaplacian, i: int) -> int:
    b = L.dim(i) - exact_rank(L, i) - exact_rank(L, i - 1)
    return b - 1 if i == 0 and L.dim(0) else b


def links_acyclic(L: WeightedLaplacian, degree: int) -> bool:
    """True iff every vertex link has vanishing reduced cohomology in ``degree``."""
    for v in range(L.X.num_vertices):
        loc = L.local(v).laplacian
        if 0 <= degree <= loc.n and _reduced_betti(loc, degree) != 0:
            return False
    return True


def fundamental_inequality_report(X, weights=None, trials: int = 20, seed: int = 0,
                                  tol: float = DEFAULT_TOLERANCE) -> GarlandReport:
    """Evaluate every eigenvalue and bilinear-form bound for ``1 <= i <= n - 1``.

    Bilinear lower bounds are sampled on ``f = delta g`` with random rational
    ``g``; these lie in the image of ``delta``, where the lower bounds hold
    without assumptions on link cohomology.  The link cohomology verdicts are
    still reported.
    """
    L, _, _ = _unpack(X, weights)
    n = L.n
    rng = np.random.default_rng(seed)
    spectra: dict[int, tuple[float | None, float]] = {}
    extrema: dict[tuple[int, int], tuple[float, float]] = {}
    acyclic: dict[int, bool] = {}
    checks: list[InequalityCheck] = []

    def lam(i: int, j: int) -> tuple[float, float]:
        if (i, j) not in extrema:
            extrema[(i, j)] = link_extrema(L, i, j)
        return extrema[(i, j)]

    for i in range(0, n):
        spec = curvature_spectrum(L, i)
        spectra[i] = (spec.m, spec.M)
    for i in range(1, n):
        m_i, M_i = spectra[i]
        acyclic[i - 1] = links_acyclic(L, i - 1)
        for j in range(0, i):
            lo, hi = lam(i - j - 1, j)
            tag = "vertex links" if j == 0 else f"links of {j}-simplices"
            checks.append(_ineq("eigen_upper", f"(i-j) M^i <= (i+1) lambda_max^(i-j-1,j) - (j+1)(n-i) [{tag}]",
                                i, j, (i - j) * M_i, (i + 1) * hi - (j + 1) * (n - i), "<=", tol))
            checks.append(_ineq("eigen_lower", f"(i-j) m^i >= (i+1) lambda_min^(i-j-1,j) - (j+1)(n-i) [{tag}]",
                                i, j, (i - j) * m_i, (i + 1) * lo - (j + 1) * (n - i), ">=", tol))
            # bilinear forms, normalised by (f, f)
            worst_low = np.inf
            for _ in range(trials):
                g = random_cochain(L, i + 1, rng)
                f = L.delta(g, i + 1)
                ff = L.inner(f, f, i)
                if ff == 0:
                    continue
                ratio = float(L.inner(L.laplacian(f, i), f, i) / ff)
                worst_low = min(worst_low, (i - j) * ratio - ((i + 1) * lo - (j + 1) * (n - i)))
            if np.isfinite(worst_low):
                checks.append(InequalityCheck(
                    "bilinear_lower",
                    f"(i-j)(Delta f,f) >= ((i+1) lambda_min^(i-j-1,j) - (j+1)(n-i))(f,f) on f = delta g [{tag}]",
                    i, j, worst_low, 0.0, ">=", worst_low, tol))
            if j == 0:
                worst_up = np.inf
                for _ in range(trials):
                    f = random_cochain(L, i, rng)
                    ff = L.inner(f, f, i)
                    ratio = float(L.inner(L.laplacian(f, i), f, i) / ff)
                    worst_up = min(worst_up, ((i + 1) * hi - (n - i)) - i * ratio)
                checks.append(InequalityCheck(
                    "bilinear_upper", "i(Delta f,f) <= ((i+1) lambda_max^(i-1) - (n-i))(f,f)",
                    i, 0, 0.0, worst_up, "<=", worst_up, tol))
            else:
                lo0 = lam(i - 1, 0)[0]
                checks.append(_ineq(
                    "lambda_comparison",
                    "(i+1) lambda_min^(i-1,0) - (n-i) >= i/(i-j) ((i+1) lambda_min^(i-j-1,j) - (j+1)(n-i))",
                    i, j, (i + 1) * lo0 - (n - i), i / (i - j) * ((i + 1) * lo - (j + 1) * (n - i)), ">=", tol))
                lo_prev, hi_prev = lam(i - j, j - 1)
                checks.append(_ineq("link_recursion_min",
                                    "(i-j) lambda_min^(i-j,j-1) >= (i-j+1) lambda_min^(i-j-1,j) - (n-i)",
                                    i, j, (i - j) * lo_prev, (i - j + 1) * lo - (n - i), ">=", tol))
                checks.append(_ineq("link_recursion_max",
                                    "(i-j) lambda_max^(i-j,j-1) <= (i-j+1) lambda_max^(i-j-1,j) - (n-i)",
                                    i, j, (i - j) * hi_prev, (i - j + 1) * hi - (n - i), "<=", tol))
            # threshold chain: a strict pass at level j implies strict passes below it
            threshold = (j + 1) * (n - i) / (i + 1)
            if lo - threshold > tol:
                for k in range(j):
                    lo_k = lam(i - k - 1, k)[0]
                    checks.append(_ineq("threshold_chain",
                                        f"lambda_min^(i-j-1,j) > threshold implies lambda_min^(i-k-1,k) > (k+1)(n-i)/(i+1), k={k}",
                                        i, j, lo_k, (k + 1) * (n - i) / (i + 1), ">=", tol))
    return GarlandReport(complex_id(X), n, spectra, extrema, acyclic, checks, tol)


# -- vanishing certificates ------------------------------------------------------


@dataclass
class VanishingCertificate:
    degree: int
    criterion: str
    j: int
    threshold: float
    measured: float
    links_acyclic: bool
    holds: bool
    status: str
    betti: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _compare(measured: float, threshold: float, tol: float) -> tuple[bool, str]:
    gap = measured - threshold
    if gap > tol:
        return True, "threshold exceeded"
    if abs(gap) <= tol:
        return False, "refused: threshold met with equality"
    return False, "refused: spectral gap below threshold"


def vanishing_certificate(X, i: int, j: int = 0, weights=None, tol: float = DEFAULT_TOLERANCE) -> VanishingCertificate:
    """Try to certify that harmonic ``i``-cochains vanish.

    ``j = 0`` uses ``lambda_min^(i-1) > (n-i)/(i+1)``; ``j > 0`` uses
    ``lambda_min^(i-j-1,j) > (j+1)(n-i)/(i+1)``.  Both also need vanishing
    reduced cohomology of the vertex links in degree ``i - 1``.  When the
    certificate holds, the Betti number is recomputed by exact rank and must
    be zero.
    """
    L, _, _ = _unpack(X, weights)
    n = L.n
    if not 1 <= i <= n - 1:
        raise DegreeError(f"vanishing certificates need 1 <= i <= n-1 (n={n}, i={i})")
    if not 0 <= j < i:
        raise DegreeError("need 0 <= j < i")
    threshold = (j + 1) * (n - i) / (i + 1)
    measured = link_extrema(L, i - j - 1, j)[0]
    acyclic = links_acyclic(L, i - 1)
    ok, status = _compare(measured, threshold, tol)
    if not acyclic:
        ok, status = False, "refused: a vertex link has reduced cohomology in degree i-1"
    betti = _reduced_betti(L, i)
    if ok and betti != 0:
        status = "UNSOUND: certificate holds but the Betti number is nonzero"
    return VanishingCertificate(i, "link-gap" if j == 0 else f"link-gap-j{j}", j, threshold, measured,
                                acyclic, ok and betti == 0, status, betti)


def building_certificate(link_complex, i: int, weights=None, tol: float = DEFAULT_TOLERANCE) -> VanishingCertificate:
    """Certificate for quotients ``X / Gamma`` whose vertex links all equal ``link_complex``.

    Under star separation the links of the quotient are those of the cover,
    so the test only needs ``link_complex``: its reduced cohomology in degree
    ``i - 1`` must vanish and ``m^(i-1)`` must exceed ``(n - i)/(i + 1)``
    where ``n = dim(link) + 1``.  No Betti number is computed (the quotient
    itself is not available).
    """
    L, _, _ = _unpack(link_complex, weights)
    n = L.n + 1
    if not 1 <= i <= n - 1:
        raise DegreeError(f"need 1 <= i <= {n - 1}")
    threshold = (n - i) / (i + 1)
    spec = curvature_spectrum(L, i - 1)
    measured = spec.m if spec.m is not None else 0.0
    acyclic = _reduced_betti(L, i - 1) == 0
    ok, status = _compare(measured, threshold, tol)
    if not acyclic:
        ok, status = False, "refused: the link has reduced cohomology in degree i-1"
    return VanishingCertificate(i, "uniform-link", 0, threshold, measured, acyclic, ok, status, None)


# -- property (T) spectral criterion -------------------------------------------------


@dataclass
class ZukVerdict:
    """Hypothesis check only: connected vertex links and ``lambda^0_min > 1/2``."""

    passes: bool
    links_connected: bool
    lambda_min: float
    gap: float
    label: str = "spectral criterion hypotheses (connected links, lambda^0_min > 1/2); not a statement about any group"

    def to_dict(self) -> dict:
        return asdict(self)


def zuk_check(X, weights=None, tol: float = DEFAULT_TOLERANCE) -> ZukVerdict:
    L, _, _ = _unpack(X, weights)
    if L.n != 2:
        raise DegreeError(f"the criterion applies to 2-dimensional complexes, got dimension {L.n}")
    connected = all(L.local(v).link.is_connected() for v in range(L.X.num_vertices))
    lo = link_extrema(L, 0, 0)[0]
    gap = lo - 0.5
    return ZukVerdict(connected and gap > tol, connected, lo, gap)


# -- asymptotics -----------------------------------------------------------------


@dataclass
class AsymptoticsRow:
    q: int
    i: int
    eigenvalues: tuple[float, ...]
    multiplicities: tuple[int, ...]
    distinct_count: int
    exact: bool
    max_distance: float
    distances: tuple[float, ...]
    minpoly: tuple[str, ...] | None = None
    skipped: str | None = None


@dataclass
class AsymptoticsTable:
    n: int
    i: int
    targets: tuple[int, ...]
    rows: list[AsymptoticsRow]

    def distances(self) -> list[float]:
        return [r.max_distance for r in self.rows if r.skipped is None]

    @property
    def decreasing(self) -> bool:
        d = self.distances()
        return all(b < a for a, b in zip(d, d[1:]))

    @property
    def non_increasing(self) -> bool:
        d = self.distances()
        return all(b <= a + 1e-12 for a, b in zip(d, d[1:]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["q", "i", "eigenvalue", "multiplicity", "distance_to_target"])
        for row in self.rows:
            if row.skipped is not None:
                writer.writerow([row.q, row.i, "skipped", "", row.skipped])
                continue
            for val, mult, dist in zip(row.eigenvalues, row.multiplicities, row.distances):
                writer.writerow([row.q, row.i, f"{val:.12g}", mult, f"{dist:.12g}"])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"n": self.n, "i": self.i, "targets": list(self.targets),
                "decreasing": self.decreasing, "rows": [asdict(r) for r in self.rows]}


def _target_distance(x: float, targets: Sequence[int]) -> float:
    return min(abs(x - t) for t in targets)


def asymptotics_table(n: int, i: int, q_list: Iterable[int], budget: int | None = None,
                      exact_budget: int = DEFAULT_EXACT_BUDGET) -> AsymptoticsTable:
    """Tabulate the spectrum of ``Delta`` on ``C^i(X^n_empty)`` across ``q``.

    Distances are measured from each nonzero eigenvalue to the nearest
    integer in ``{n - i, ..., n + 1}``.  Distinct counts come from exact
    minimal polynomials when the cochain space fits ``exact_budget``.
    """
    targets = tuple(range(n - i, n + 2))
    rows = []
    for q in q_list:
        try:
            fc = build_flag_complex(FlagComplexSpec.from_t_array(q, (n + 2,)), budget=budget)
        except BudgetError as exc:
            rows.append(AsymptoticsRow(q, i, (), (), 0, False, float("nan"), (), None, str(exc)))
            continue
        L = laplacian(fc.complex)
        spec = curvature_spectrum(L, i)
        values, mults, exact, poly = spec.values, spec.multiplicities, False, None
        if L.dim(i) <= exact_budget:
            p = minimal_polynomial(L, i, budget=exact_budget)
            exact = True
            poly = tuple(f"{c.numerator}/{c.denominator}" for c in p)
            roots = np.sort(poly_roots_float(p).real)
            roots = np.where(np.abs(roots) < 1e-12, 0.0, roots)
            values = tuple(float(r) for r in roots)
            mults = tuple(spec.multiplicity(r, 1e-6) for r in values)
        dists = tuple(_target_distance(v, targets) if v != 0.0 else 0.0 for v in values)
        nonzero = [d for v, d in zip(values, dists) if v != 0.0]
        rows.append(AsymptoticsRow(q, i, tuple(values), tuple(mults), len(values), exact,
                                   max(nonzero, default=0.0), dists, poly))
    return AsymptoticsTable(n, i, targets, rows)


# -- bounds for flag complexes -----------------------------------------------------


def _integer_laplacian_rows(L: WeightedLaplacian, i: int, shift: Fraction) -> list[dict[int, int]]:
    """Rows of the integer matrix ``K (Delta - shift I)`` for a suitable ``K``."""
    w_up = [Fraction(x) for x in L.weights(i + 1).tolist()]
    inv_low = [1 / Fraction(x) for x in L.weights(i).tolist()]
    c_up = lcm(*(x.denominator for x in w_up))
    ell = lcm(*(x.denominator for x in inv_low)) * shift.denominator
    scale = c_up * ell
    up = [int(x * c_up) for x in w_up]
    low = [int(x * ell) for x in inv_low]
    D = L.coboundary_matrix(i).tocsc()
    Dr = L.coboundary_matrix(i).tocsr()
    diag_shift = int(shift * scale)
    rows = []
    for r in range(L.dim(i)):
        acc: dict[int, int] = {}
        for p in range(D.indptr[r], D.indptr[r + 1]):
            sigma, s1 = int(D.indices[p]), int(D.data[p])
            coef = low[r] * up[sigma] * s1
            for t in range(Dr.indptr[sigma], Dr.indptr[sigma + 1]):
                c = int(Dr.indices[t])
                acc[c] = acc.get(c, 0) + coef * int(Dr.data[t])
        acc[r] = acc.get(r, 0) - diag_shift
        rows.append({c: v for c, v in acc.items() if v})
    return rows


def eigenvalue_multiplicity_exact(X, i: int, value, weights=None) -> int:
    """``dim ker(Delta - value)`` on ``C^i`` by exact integer elimination."""
    L, _, _ = _unpack(X, weights)
    value = Fraction(value)
    if i >= L.n:
        return L.dim(i) if value == 0 else 0
    return L.dim(i) - integer_rank(_integer_laplacian_rows(L, i, value))


@dataclass
class FlagBoundsReport:
    complex_id: str
    N: int
    checks: list[tuple[str, bool, str]]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def to_dict(self) -> dict:
        return {"complex_id": self.complex_id, "N": self.N, "passed": self.passed,
                "checks": [{"name": a, "holds": b, "detail": c} for a, b, c in self.checks]}


def flag_bounds_check(fc: FlagComplex, exact: bool = True, tol: float = DEFAULT_TOLERANCE) -> FlagBoundsReport:
    """Spectral bounds for a flag complex of dimension ``N >= 1``.

    Checks ``M^i <= N + 1``, ``m^0 <= N``, that ``N + 1`` is the top
    eigenvalue on ``C^0`` with multiplicity ``N`` (exactly when ``exact``),
    that ``Delta`` preserves type-constant functions and acts on them as the
    Laplacian of the standard ``N``-simplex, and the two possible values of
    ``m^0`` when ``N = 1``.
    """
    N = fc.N
    if N < 1:
        raise DegreeError("flag bounds need N >= 1")
    L = laplacian(fc.complex)
    checks: list[tuple[str, bool, str]] = []
    for i in range(N):
        spec = curvature_spectrum(L, i)
        checks.append((f"M^{i} <= N+1", spec.M <= N + 1 + tol, f"M^{i} = {spec.M:.12g}"))
    spec0 = curvature_spectrum(L, 0)
    checks.append(("m^0 <= N", spec0.m is not None and spec0.m <= N + tol, f"m^0 = {spec0.m:.12g}"))
    top_ok = abs(spec0.M - (N + 1)) <= tol * (N + 1)
    mult_float = spec0.multiplicity(float(N + 1))
    checks.append(("M^0 = N+1", top_ok, f"M^0 = {spec0.M:.12g}"))
    checks.append(("mult(N+1) = N [float]", mult_float == N, f"multiplicity {mult_float}"))
    if exact:
        mult = eigenvalue_multiplicity_exact(L, 0, N + 1)
        checks.append(("mult(N+1) = N [exact]", mult == N, f"multiplicity {mult}"))
    # type-constant functions
    types = fc.vertex_types
    type_set = list(fc.types)
    ok = True
    for a in type_set:
        ind = _zero(L.dim(0))
        ind[types == a] = 1
        lap = L.laplacian(ind, 0)
        for b in type_set:
            vals = set(lap[types == b].tolist())
            expected = N if a == b else -1
            if vals != {expected}:
                ok = False
    checks.append(("type-constant restriction equals the simplex Laplacian", ok,
                   "Delta 1_a = N on type a and -1 on other types"))
    if N == 1:
        q = fc.spec.q
        incidence = 1 - sqrt(q) / (q + 1)
        m0 = spec0.m
        checks.append(("base case m^0 in {1, 1 - sqrt(q)/(q+1)}",
                       min(abs(m0 - 1), abs(m0 - incidence)) <= tol, f"m^0 = {m0:.12g}"))
    return FlagBoundsReport(fc.spec.label(), N, checks)
