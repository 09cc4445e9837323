"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""

from __future__ import annotations

import time
from fractions import Fraction
from math import sqrt

from garland.cochains import curvature_spectrum, hodge, laplacian, minimal_polynomial
from garland.complex import _torus_complex, build_from_maximal, check_dagger, join, standard_simplex, torus_translations
from garland.exact import poly_from_roots, poly_str
from garland.flags import FlagComplexSpec, all_t_arrays
from garland.verify import asymptotics_table, flag_bounds_check, fundamental_inequality_report, identity_suite

from conftest import empty_flag, flag_complex, record_criterion, small_t_arrays, torus

TOL = 1e-9
PRIME_POWERS_2_TO_9 = (2, 3, 4, 5, 7, 8, 9)


def _finish(number: int, failures: list[str], detail: str) -> None:
    ok = not failures
    record_criterion(number, ok, detail if ok else "; ".join(failures))
    assert ok, failures


def _q(q: int) -> Fraction:
    return Fraction(q)


def minpol_0_1(q: int):
    q = _q(q)
    return poly_from_roots((0, 1), (-2, 1), ((q * q + q + 1) / (q * q + 2 * q + 1), -2, 1))


def minpol_0_2(q: int):
    q = _q(q)
    d = q * q + q + 1
    return poly_from_roots(
        (0, 1), (-2, 1), (-3, 1), (-(2 * q * q + 3 * q + 2) / d, 1),
        ((4 * q * q + 4) / d, -(4 * q * q + 3 * q + 4) / d, 1),
    )


def minpol_1_2(q: int):
    q = _q(q)
    s = q * q + 2 * q + 1
    return poly_from_roots(
        (0, 1), (-1, 1), (-2, 1), (-3, 1),
        ((q * q + 1) / s, -2, 1),
        ((2 * q * q + 2 * q + 2) / s, -3, 1),
        ((4 * q * q + 6 * q + 4) / s, -4, 1),
    )


def criterion_complexes():
    """Complex list shared by the identity and inequality criteria."""
    out = [(f"simplex(n={n})", standard_simplex(n)) for n in range(1, 5)]
    for n, q in [(1, 2), (1, 3), (2, 2)]:
        fc = empty_flag(n, q)
        out.append((fc.spec.label(), fc))
    for q in (2, 3):
        for t in small_t_arrays():
            if len(t) > 1:
                fc = flag_complex(q, t)
                out.append((fc.spec.label(), fc))
    out.append(("apartment(n=1,m=4)", torus(1, 4)))
    return out


def test_criterion_01_minpol_x1():
    failures, times = [], []
    for q in (2, 3, 4, 5):
        start = time.perf_counter()
        got = minimal_polynomial(empty_flag(1, q).complex, 0)
        elapsed = time.perf_counter() - start
        times.append(elapsed)
        if got != minpol_0_1(q):
            failures.append(f"q={q}: got {poly_str(got)}")
        if elapsed >= 10:
            failures.append(f"q={q}: {elapsed:.1f}s >= 10s")
    _finish(1, failures, f"min.pol^0_1 exact for q=2..5, max {max(times):.2f}s")


def test_criterion_02_minpol_x2():
    failures, times = [], []
    for q in (2, 3):
        for i, expected, degree in [(0, minpol_0_2(q), 6), (1, minpol_1_2(q), 10)]:
            start = time.perf_counter()
            got = minimal_polynomial(empty_flag(2, q).complex, i)
            elapsed = time.perf_counter() - start
            times.append(elapsed)
            if got != expected:
                failures.append(f"q={q}, i={i}: got {poly_str(got)}")
            if len(got) - 1 != degree:
                failures.append(f"q={q}, i={i}: degree {len(got) - 1} != {degree}")
            if elapsed >= 300:
                failures.append(f"q={q}, i={i}: {elapsed:.1f}s >= 300s")
    _finish(2, failures, f"min.pol^0_2 (deg 6) and min.pol^1_2 (deg 10) exact for q=2,3, max {max(times):.2f}s")


def test_criterion_03_spectral_landmarks():
    failures = []
    x2 = laplacian(empty_flag(2, 2).complex)
    m1 = curvature_spectrum(x2, 1).m
    if abs(m1 - 1 / 3) > TOL:
        failures.append(f"m^1(X^2, q=2) = {m1!r}")
    m0 = curvature_spectrum(x2, 0).m
    if abs(m0 - (26 - sqrt(116)) / 14) > TOL or m0 < 1.08:
        failures.append(f"m^0(X^2, q=2) = {m0!r}")
    for q in PRIME_POWERS_2_TO_9:
        m = curvature_spectrum(empty_flag(1, q).complex, 0).m
        target = 1 - sqrt(q) / (q + 1)
        if abs(m - target) > TOL or not m > 0.5:
            failures.append(f"m^0(X^1, q={q}) = {m!r}, expected {target!r}")
    _finish(3, failures, f"m^1(X^2)=1/3, m^0(X^2)={m0:.6f}, m^0(X^1,q) for q in {PRIME_POWERS_2_TO_9}")


def test_criterion_04_example_regression():
    failures = []
    start = time.perf_counter()
    for n in range(1, 6):
        X = standard_simplex(n)
        for i in range(n):
            got = minimal_polynomial(X, i)
            if got != poly_from_roots((0, 1), (-(n + 1), 1)):
                failures.append(f"simplex n={n}, i={i}: {poly_str(got)}")
    for q in (2, 3, 4, 5):
        side = build_from_maximal([(v,) for v in range(q + 1)])
        got = minimal_polynomial(join(side, side), 0)
        if got != poly_from_roots((0, 1), (-1, 1), (-2, 1)):
            failures.append(f"K_{{{q + 1},{q + 1}}}: {poly_str(got)}")
    elapsed = time.perf_counter() - start
    _finish(4, failures, f"simplex spectra {{0, n+1}} for n<=5 and K_(q+1,q+1) spectra {{0,1,2}}, exact, {elapsed:.2f}s")


def test_criterion_05_identity_suites():
    failures = []
    names = set()
    complexes = criterion_complexes()
    for label, X in complexes:
        rep = identity_suite(X, trials=50, seed=0, float_eigen=False)
        names |= rep.names()
        for f in rep.failures():
            failures.append(f"{label}: {f.name} (degree {f.degree}) {f.witness}")
    required = {"d_squared", "adjoint", "weight_sum", "type_sum", "local_decomposition", "rho_sum",
                "tau_laplacian", "f_alpha_sum", "f_alpha_closed_form"}
    missing = required - names
    if missing:
        failures.append(f"identities never exercised: {sorted(missing)}")
    _finish(5, failures, f"{len(names)} identities, 50 exact trials each, on {len(complexes)} complexes")


def test_criterion_06_inequality_net():
    failures = []
    margins = []
    complexes = criterion_complexes()
    for label, X in complexes:
        rep = fundamental_inequality_report(X, trials=20, seed=0, tol=TOL)
        low = rep.min_margin()
        if low is not None:
            margins.append((label, low))
            print(f"  {label}: {len(rep.checks)} checks, min margin {low:.3e}")
        for c in rep.violations:
            failures.append(f"{label}: {c.name} i={c.i} j={c.j} margin {c.margin:.3e}")
    worst = min(margins, key=lambda x: x[1])
    _finish(6, failures, f"no violations on {len(complexes)} complexes, worst margin {worst[1]:.3e} ({worst[0]})")


def _all_small_flags():
    for q in (2, 3):
        for t in small_t_arrays():
            yield flag_complex(q, t)


def test_criterion_07_vanishing_below_top():
    failures = []
    count = 0
    for fc in _all_small_flags():
        L = laplacian(fc.complex)
        count += 1
        for i in range(fc.N + 1):
            h = hodge(L, i)
            by_rank = h.betti_rank - (1 if i == 0 else 0)
            if h.reduced_betti != by_rank:
                failures.append(f"{fc.spec.label()} i={i}: harmonic {h.reduced_betti} != rank {by_rank}")
            elif i <= fc.N - 1 and by_rank != 0:
                failures.append(f"{fc.spec.label()} i={i}: reduced betti {by_rank}")
    _finish(7, failures, f"reduced betti = 0 below the top degree on {count} flag complexes (n<=2, q=2,3), two methods agree")


def test_criterion_08_flag_bounds():
    failures = []
    exact_cases = {(1, 2), (1, 3), (2, 2)}
    count = 0
    for fc in _all_small_flags():
        if fc.N < 1:
            continue
        exact = not fc.spec.flag and (fc.spec.n, fc.spec.q) in exact_cases
        rep = flag_bounds_check(fc, exact=exact)
        count += 1
        failures.extend(f"{fc.spec.label()}: {name} ({detail})" for name, ok, detail in rep.checks if not ok)
    for n, q in exact_cases:
        rep = flag_bounds_check(empty_flag(n, q), exact=True)
        if not any(name == "mult(N+1) = N [exact]" and ok for name, ok, _ in rep.checks):
            failures.append(f"X^{n} q={q}: exact multiplicity of N+1 is not N")
    _finish(8, failures, f"M^i <= N+1 and m^0 <= N on {count} flag complexes; mult(N+1) = N exactly on X^1 (q=2,3), X^2 (q=2)")


def test_criterion_09_quotient_machinery():
    failures = []
    X = torus(1, 4)
    L = laplacian(X)
    harmonic = tuple(hodge(L, i).betti for i in range(3))
    rank = tuple(hodge(L, i).betti_rank for i in range(3))
    if harmonic != (1, 2, 1) or rank != (1, 2, 1):
        failures.append(f"apartment(1,4) betti harmonic {harmonic}, rank {rank}")
    # exhaustive search over all group elements and vertices on a wrap of three periods
    m3 = check_dagger(_torus_complex(1, 9), torus_translations(1, 9, 3))
    if m3:
        failures.append("check_dagger accepts (3Z)^2 on the 9x9 wrap: closed stars of v and v+g are disjoint "
                        "since every nonzero translation has graph distance >= 3")
    m4 = check_dagger(_torus_complex(1, 12), torus_translations(1, 12, 4))
    if not m4:
        failures.append(f"check_dagger rejects m=4, witness {m4.witness}")
    _finish(9, failures, "apartment(1,4) betti (1,2,1) by both methods; check_dagger rejects m=3, accepts m=4")


def test_criterion_10_asymptotics():
    failures = []
    start = time.perf_counter()
    table = asymptotics_table(1, 0, [2, 3, 4, 5])
    elapsed = time.perf_counter() - start
    for row in table.rows:
        if row.distinct_count != 4:
            failures.append(f"q={row.q}: {row.distinct_count} distinct eigenvalues")
    if not table.decreasing:
        failures.append(f"distances not decreasing: {table.distances()}")
    if elapsed >= 60:
        failures.append(f"{elapsed:.1f}s >= 60s")
    dist = ", ".join(f"{d:.4f}" for d in table.distances())
    _finish(10, failures, f"4 distinct eigenvalues for q=2..5, max distance to {{1,2}} decreasing ({dist}), {elapsed:.2f}s")


def test_criterion_list_covers_all_t_arrays():
    # guard for criteria 5-8: every composition of n+2 with n <= 2 is exercised
    expected = {t for n in (1, 2) for t in all_t_arrays(n)}
    assert set(small_t_arrays()) == expected
    assert all(FlagComplexSpec.from_t_array(2, t).N >= 0 for t in expected)
