"""Arithmetic in finite fields F_q, q a prime power.

Elements are the integers ``0 .. q-1``.  For a prime ``q`` they are residues;
for ``q = p^e`` with ``e > 1`` the integer ``sum c_k p^k`` stands for the
polynomial ``sum c_k x^k`` modulo a fixed irreducible polynomial.  Addition
and multiplication go through precomputed tables, so vectors of elements
can be combined with numpy fancy indexing.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

__all__ = ["FiniteField", "factor_prime_power", "least_irreducible"]

MAX_ORDER = 2**16


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q = p**e``; raise if ``q`` is no prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in itertools.count(2) if q % d == 0)
    e, rest = 0, q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, e


def _poly_mod_roots(coeffs: tuple[int, ...], p: int) -> bool:
    # coeffs are low-to-high, monic, degree len-1
    return any(
        sum(c * pow(x, k, p) for k, c in enumerate(coeffs)) % p == 0 for x in range(p)
    )


def _polymulmod(a: list[int], b: list[int], mod: tuple[int, ...], p: int) -> list[int]:
    e = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for j in range(e + 1):
                prod[k - e + j] = (prod[k - e + j] - c * mod[j]) % p
    return (prod + [0] * e)[:e]


def _is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    """Rabin-style test: x^(p^e) = x mod f and gcd conditions via brute divisors."""
    e = len(coeffs) - 1
    if e == 1:
        return True
    if coeffs[0] == 0:
        return False
    if e <= 3:
        return not _poly_mod_roots(coeffs, p)
    # trial division by every monic polynomial of degree <= e // 2
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            div = list(low) + [1]
            rem = list(coeffs)
            for k in range(len(rem) - 1, d - 1, -1):
                c = rem[k]
                if c:
                    for j in range(d + 1):
                        rem[k - d + j] = (rem[k - d + j] - c * div[j]) % p
            if not any(rem[:d]):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible polynomial of degree ``e`` over F_p.

    Coefficients are returned low-to-high (constant term first, leading 1 last).
    Lexicographic order is taken on the coefficient list from the ``x^(e-1)``
    term down to the constant term.
    """
    for high_to_low in itertools.product(range(p), repeat=e):
        coeffs = tuple(reversed(high_to_low)) + (1,)
        if _is_irreducible(coeffs, p):
            return coeffs
    raise AssertionError("irreducible polynomials exist in every degree")


class FiniteField:
    """The field with ``q`` elements, backed by full operation tables."""

    def __init__(self, q: int):
        if q > MAX_ORDER:
            raise ValueError(f"field order {q} exceeds the supported maximum {MAX_ORDER}")
        self.p, self.e = factor_prime_power(q)
        self.q = q
        if self.e == 1:
            self.modulus = (0, 1)
            self._build_prime()
        else:
            self.modulus = least_irreducible(self.p, self.e)
            self._build_extension()
        self.neg = ((-np.arange(q)) % q).astype(np.int64) if self.e == 1 else self._neg_table()
        self.inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv[a] = self.inv_scalar(a)

    def __repr__(self) -> str:
        return f"FiniteField({self.q})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("FiniteField", self.q))

    # -- table construction ---------------------------------------------
    def _build_prime(self) -> None:
        q = self.q
        r = np.arange(q, dtype=np.int64)
        self.add = (r[:, None] + r[None, :]) % q if q <= 4096 else None
        self.mul = (r[:, None] * r[None, :]) % q if q <= 4096 else None
        self.generator = next(g for g in range(1, q) if self._order_prime(g) == q - 1) if q > 2 else 1
        self._exp = np.array([pow(self.generator, k, q) for k in range(q - 1)], dtype=np.int64)
        self._log = np.zeros(q, dtype=np.int64)
        self._log[self._exp] = np.arange(q - 1)

    def _order_prime(self, g: int) -> int:
        x, k = g, 1
        while x != 1:
            x = x * g % self.q
            k += 1
        return k

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def _undigits(self, digits: list[int]) -> int:
        return sum(c * self.p**k for k, c in enumerate(digits))

    def _build_extension(self) -> None:
        q, p, e = self.q, self.p, self.e
        digits = np.array([self._digits(a) for a in range(q)], dtype=np.int64)
        place = p ** np.arange(e, dtype=np.int64)
        self._add_digits = digits
        # primitive element search, smallest integer label first
        for g in range(2, q):
            seq = [1]
            gd = self._digits(g)
            cur = [1] + [0] * (e - 1)
            for _ in range(q - 2):
                cur = _polymulmod(cur, gd, self.modulus, p)
                val = self._undigits(cur)
                if val == 1:
                    break
                seq.append(val)
            if len(seq) == q - 1:
                self.generator = g
                break
        self._exp = np.array(seq, dtype=np.int64)
        self._log = np.zeros(q, dtype=np.int64)
        self._log[self._exp] = np.arange(q - 1)
        # Zech logarithm: alpha^z(k) = 1 + alpha^k, -1 marks 1 + alpha^k = 0
        one_plus = ((digits[self._exp] + digits[1]) % p) @ place
        self.zech = np.where(one_plus == 0, -1, self._log[one_plus])
        if q <= 4096:
            self.add = ((digits[:, None, :] + digits[None, :, :]) % p) @ place
            logs = self._log
            lsum = (logs[:, None] + logs[None, :]) % (q - 1)
            mul = self._exp[lsum]
            mul[0, :] = 0
            mul[:, 0] = 0
            self.mul = mul
        else:
            self.add = None
            self.mul = None

    def _neg_table(self) -> np.ndarray:
        digits = self._add_digits
        place = self.p ** np.arange(self.e, dtype=np.int64)
        return ((-digits) % self.p) @ place

    # -- scalar / vector operations ---------------------------------------
    def add_vec(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a + b) % self.q
        if self.add is not None:
            return self.add[a, b]
        return self._zech_add(a, b)

    def mul_vec(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a * b) % self.q
        if self.mul is not None:
            return self.mul[a, b]
        a, b = np.broadcast_arrays(a, b)
        out = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def _zech_add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(a, b)
        la, lb = self._log[a], self._log[b]
        z = self.zech[(lb - la) % (self.q - 1)]
        out = np.where(z < 0, 0, self._exp[(la + np.maximum(z, 0)) % (self.q - 1)])
        out = np.where(a == 0, b, out)
        return np.where(b == 0, a, out)

    def sub_vec(self, a, b) -> np.ndarray:
        return self.add_vec(a, self.neg[np.asarray(b, dtype=np.int64)])

    def inv_scalar(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return int(self._exp[(-self._log[a]) % (self.q - 1)])

    @property
    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)
