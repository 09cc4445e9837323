from __future__ import annotations

from functools import lru_cache

import pytest

from garland.complex import apartment_torus, standard_simplex
from garland.flags import FlagComplexSpec, all_t_arrays, build_flag_complex


@lru_cache(maxsize=None)
def flag_complex(q: int, t: tuple[int, ...]):
    return build_flag_complex(FlagComplexSpec.from_t_array(q, t))


@lru_cache(maxsize=None)
def empty_flag(n: int, q: int):
    return flag_complex(q, (n + 2,))


@lru_cache(maxsize=None)
def torus(n: int, m: int):
    return apartment_torus(n, m)[0]


def small_t_arrays(max_n: int = 2) -> list[tuple[int, ...]]:
    """t-arrays of every flag complex with ``1 <= n <= max_n``."""
    return [t for n in range(1, max_n + 1) for t in all_t_arrays(n)]


@pytest.fixture
def simplex3():
    return standard_simplex(3)


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    ACCEPTANCE[number] = (passed, detail)
    print(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
