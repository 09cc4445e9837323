"""Exact linear algebra over the rationals.

Polynomials are tuples of :class:`fractions.Fraction` coefficients, constant
term first.  Sparse integer matrices are lists of ``{column: value}`` rows.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import BudgetError

__all__ = [
    "Poly",
    "poly_trim",
    "poly_monic",
    "poly_mul",
    "poly_divmod",
    "poly_gcd",
    "poly_lcm",
    "poly_derivative",
    "poly_eval",
    "poly_from_roots",
    "poly_str",
    "poly_roots_float",
    "poly_scale_variable",
    "integer_rank",
    "rational_nullspace",
    "krylov_minimal_polynomial",
    "DEFAULT_EXACT_BUDGET",
]

Poly = tuple[Fraction, ...]

DEFAULT_EXACT_BUDGET = 3000


# -- polynomials --------------------------------------------------------


def poly_trim(p: Iterable) -> Poly:
    out = [Fraction(c) for c in p]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def poly_monic(p: Iterable) -> Poly:
    p = poly_trim(p)
    if not p:
        raise ZeroDivisionError("the zero polynomial has no monic form")
    lead = p[-1]
    return tuple(c / lead for c in p)


def poly_mul(a: Sequence, b: Sequence) -> Poly:
    a, b = poly_trim(a), poly_trim(b)
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim(out)


def poly_divmod(a: Sequence, b: Sequence) -> tuple[Poly, Poly]:
    a, b = list(poly_trim(a)), poly_trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if len(a) < len(b):
        return (), tuple(a)
    quot = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        quot[k] = c
        if c:
            for j, y in enumerate(b):
                a[k + j] -= c * y
    return poly_trim(quot), poly_trim(a[: len(b) - 1])


def poly_gcd(a: Sequence, b: Sequence) -> Poly:
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return poly_monic(a) if a else ()


def poly_lcm(a: Sequence, b: Sequence) -> Poly:
    a, b = poly_trim(a), poly_trim(b)
    if not a:
        return poly_monic(b)
    if not b:
        return poly_monic(a)
    q, r = poly_divmod(poly_mul(a, b), poly_gcd(a, b))
    assert not r
    return poly_monic(q)


def poly_derivative(p: Sequence) -> Poly:
    p = poly_trim(p)
    return poly_trim(k * c for k, c in enumerate(p) if k)


def poly_eval(p: Sequence, x):
    acc = 0
    for c in reversed(poly_trim(p)):
        acc = acc * x + c
    return acc


def poly_from_roots(*factors: Sequence) -> Poly:
    """Product of the given polynomials (each low-to-high)."""
    out: Poly = (Fraction(1),)
    for f in factors:
        out = poly_mul(out, f)
    return out


def poly_scale_variable(p: Sequence, s) -> Poly:
    """Monic form of ``p(s * x)``."""
    s = Fraction(s)
    return poly_monic(c * s**k for k, c in enumerate(poly_trim(p)))


def poly_roots_float(p: Sequence) -> np.ndarray:
    p = poly_trim(p)
    if len(p) <= 1:
        return np.zeros(0)
    return np.roots([float(c) for c in reversed(p)])


def _coef_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def poly_str(p: Sequence, var: str = "x") -> str:
    p = poly_trim(p)
    if not p:
        return "0"
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        coef = _coef_str(mag)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{coef}*{mono}"
        else:
            body = coef
        terms.append((sign, body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


# -- integer / rational matrices ----------------------------------------


def _content(row: dict[int, int]) -> int:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    return g


def integer_rank(rows: Iterable[dict[int, int]]) -> int:
    """Exact rank over Q of a sparse integer matrix.

    Rows are inserted one at a time into a fraction-free echelon basis keyed
    by pivot column; each reduced row is divided by its content to keep the
    entries small.
    """
    basis: dict[int, dict[int, int]] = {}
    for row in rows:
        r = {c: int(v) for c, v in row.items() if v}
        while r:
            piv = min(r)
            if piv not in basis:
                g = _content(r)
                if r[piv] < 0:
                    g = -g
                basis[piv] = {c: v // g for c, v in r.items()}
                break
            b = basis[piv]
            a_r, a_b = r[piv], b[piv]
            g = gcd(a_r, a_b)
            mr, mb = a_b // g, a_r // g
            new = {c: v * mr for c, v in r.items()}
            for c, v in b.items():
                x = new.get(c, 0) - mb * v
                if x:
                    new[c] = x
                else:
                    new.pop(c, None)
            g = _content(new) if new else 1
            r = {c: v // g for c, v in new.items()} if g > 1 else new
    return len(basis)


def rational_nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : A x = 0}`` over Q, one vector per free column."""
    A = [[Fraction(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fcol in free:
        vec = [Fraction(0)] * ncols
        vec[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -A[i][fcol]
        basis.append(vec)
    return basis


# -- Krylov minimal polynomial --------------------------------------------


def _normalise(vec: np.ndarray, combo: list[Fraction]) -> tuple[np.ndarray, list[Fraction]]:
    g = 0
    for x in vec:
        if x:
            g = gcd(g, int(x))
            if g == 1:
                return vec, combo
    if g > 1:
        return vec // g, [c / g for c in combo]
    return vec, combo


def _local_minpoly(apply: Callable[[np.ndarray], np.ndarray], start: np.ndarray, max_degree: int) -> Poly:
    """Monic generator of the annihilator of ``start`` (integer arithmetic)."""
    echelon: list[tuple[int, np.ndarray, list[Fraction]]] = []
    current = start
    for degree in range(max_degree + 1):
        vec = current.copy()
        combo = [Fraction(0)] * (degree + 1)
        combo[degree] = Fraction(1)
        for piv, evec, ecombo in echelon:
            if vec[piv]:
                a, b = int(evec[piv]), int(vec[piv])
                g = gcd(a, b)
                ma, mb = a // g, b // g
                vec = vec * ma - evec * mb
                combo = [c * ma for c in combo]
                for k, c in enumerate(ecombo):
                    combo[k] -= mb * c
                vec, combo = _normalise(vec, combo)
        nz = np.flatnonzero(vec != 0)
        if len(nz) == 0:
            return poly_monic(combo)
        echelon.append((int(nz[0]), vec, combo))
        current = apply(current)
    raise BudgetError("Krylov sequence did not become dependent within the degree bound")


def krylov_minimal_polynomial(
    apply: Callable[[np.ndarray], np.ndarray],
    dim: int,
    rng: np.random.Generator,
    stable_rounds: int = 3,
    budget: int = DEFAULT_EXACT_BUDGET,
) -> Poly:
    """Minimal polynomial of an integer matrix given by its action.

    ``apply`` maps integer object vectors to integer object vectors.  Local
    minimal polynomials of random integer start vectors are combined by lcm
    until the lcm has stayed unchanged for ``stable_rounds`` new starts.
    """
    if dim > budget:
        raise BudgetError(f"matrix dimension {dim} exceeds the exact budget {budget}")
    if dim == 0:
        return (Fraction(1),)
    result: Poly = (Fraction(1),)
    unchanged = 0
    while unchanged < stable_rounds:
        start = np.array([int(x) for x in rng.integers(-9, 10, size=dim)], dtype=object)
        if not start.any():
            continue
        local = _local_minpoly(apply, start, dim)
        merged = poly_lcm(result, local)
        if merged == result:
            unchanged += 1
        else:
            result, unchanged = merged, 0
    return result


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = lcm(out, Fraction(v).denominator)
    return out
