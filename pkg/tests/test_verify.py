from __future__ import annotations

import csv
import io
from math import sqrt

import numpy as np
import pytest

from garland.cochains import laplacian
from garland.complex import build_from_maximal, join, standard_simplex
from garland.errors import DegreeError, MissingTypeMapError
from garland.verify import (
    asymptotics_table,
    building_certificate,
    eigenvalue_multiplicity_exact,
    flag_bounds_check,
    fundamental_inequality_report,
    identity_suite,
    vanishing_certificate,
    zuk_check,
)

from conftest import empty_flag, flag_complex, torus

BASE_IDENTITIES = {
    "weight_sum", "link_weights", "d_squared_matrix", "d_squared", "adjoint", "energy",
    "rho_idempotent", "rho_sum", "tau_isometry", "tau_coboundary", "tau_codifferential",
    "tau_laplacian", "local_energy", "local_decomposition",
}
TYPED_IDENTITIES = {
    "type_count", "distinct_types", "type_sum", "f_alpha_vertex_energy", "f_alpha_restriction",
    "f_alpha_energy", "single_type_energy", "f_alpha_coboundary_sum", "f_alpha_sum",
    "type_constant_eigen", "f_alpha_closed_form", "f_alpha_balanced",
}


def test_identity_suite_untyped():
    rep = identity_suite(standard_simplex(3), trials=5)
    assert rep.passed, rep.failures()
    assert rep.names() == BASE_IDENTITIES


def test_identity_suite_typed():
    rep = identity_suite(empty_flag(2, 2), trials=3)
    assert rep.passed, rep.failures()
    assert TYPED_IDENTITIES <= rep.names()
    assert rep.to_dict()["complex_id"] == "flag(n=2,q=2,t=(4))"


def test_identity_suite_detects_a_wrong_type_map():
    fc = empty_flag(1, 2)
    wrong = np.random.default_rng(1).integers(1, 3, size=fc.complex.num_vertices)
    rep = identity_suite(fc.complex, trials=3, types=wrong)
    failed = {r.name for r in rep.failures()}
    assert {"distinct_types", "type_sum"} <= failed
    # the untyped identities do not depend on the map
    assert not failed & BASE_IDENTITIES


def test_identity_suite_requires_types_when_asked():
    with pytest.raises(MissingTypeMapError):
        identity_suite(standard_simplex(2), trials=1, require_types=True)


def test_identity_suite_with_custom_weights_skips_weight_identities():
    X = build_from_maximal([(0, 1, 2), (1, 2, 3)])
    weights = [[1, 2, 3, 4], [1, 1, 2, 3, 5], [7, 11]]
    rep = identity_suite(laplacian(X, weights), trials=3)
    assert "weight_sum" not in rep.names()
    assert {"adjoint", "d_squared"} <= rep.names()
    assert rep.passed


@pytest.mark.parametrize("make", [lambda: standard_simplex(3), lambda: torus(1, 4), lambda: empty_flag(2, 2)])
def test_inequality_report_passes(make):
    rep = fundamental_inequality_report(make(), trials=5)
    assert rep.passed, rep.violations
    assert rep.checks
    d = rep.to_dict()
    assert d["passed"] and len(d["checks"]) == len(rep.checks)


def test_simplex_meets_the_eigen_bounds_with_equality():
    rep = fundamental_inequality_report(standard_simplex(3), trials=3)
    eigen = [c for c in rep.checks if c.name in ("eigen_upper", "eigen_lower")]
    assert eigen and all(abs(c.margin) < 1e-9 for c in eigen)


def test_vanishing_certificate_on_x2():
    cert = vanishing_certificate(empty_flag(2, 2), 1)
    assert cert.holds and cert.betti == 0
    assert cert.threshold == 0.5
    assert cert.measured == pytest.approx(1 - sqrt(2) / 3)
    with pytest.raises(DegreeError):
        vanishing_certificate(empty_flag(2, 2), 2)


def test_vanishing_certificate_refuses_on_the_three_torus():
    # the n=2 apartment torus is a 3-torus with b^1 = b^2 = 3; both certificates must refuse
    X = torus(2, 4)
    for i in (1, 2):
        cert = vanishing_certificate(X, i)
        assert not cert.holds and cert.status.startswith("refused")
        assert cert.betti == 3


def test_vanishing_certificate_refuses_when_links_have_cohomology():
    # the shared vertex of two triangles has a disconnected link
    bowtie = build_from_maximal([(0, 1, 2), (2, 3, 4)])
    cert = vanishing_certificate(bowtie, 1)
    assert not cert.links_acyclic and not cert.holds
    assert "reduced cohomology" in cert.status


@pytest.mark.parametrize("q,holds,status", [(2, False, "refused: threshold met with equality"), (3, True, "threshold exceeded")])
def test_building_certificate(q, holds, status):
    cert = building_certificate(empty_flag(2, q).complex, 2)
    assert cert.holds is holds
    assert cert.status == status


def test_zuk_check():
    assert zuk_check(empty_flag(2, 2)).passes
    # hexagonal links: lambda^0_min = 1/2 exactly, which is not enough
    verdict = zuk_check(torus(1, 4))
    assert not verdict.passes and abs(verdict.gap) < 1e-9
    with pytest.raises(DegreeError):
        zuk_check(standard_simplex(3))


def test_asymptotics_table_csv():
    table = asymptotics_table(1, 0, [2, 3])
    rows = list(csv.DictReader(io.StringIO(table.to_csv())))
    assert {r["q"] for r in rows} == {"2", "3"}
    assert table.decreasing and table.non_increasing
    assert all(r.exact and r.distinct_count == 4 for r in table.rows)


def test_asymptotics_table_budget_skip():
    table = asymptotics_table(2, 0, [2, 5], budget=300)
    assert table.rows[1].skipped is not None
    assert "skipped" in table.to_csv()


def test_exact_eigenvalue_multiplicity():
    K = join(build_from_maximal([(0,), (1,), (2,)]), build_from_maximal([(0,), (1,), (2,)]))
    assert eigenvalue_multiplicity_exact(K, 0, 2) == 1
    assert eigenvalue_multiplicity_exact(K, 0, 1) == 4
    assert eigenvalue_multiplicity_exact(K, 0, 3) == 0


@pytest.mark.parametrize("q,t", [(2, (3,)), (3, (3,)), (2, (4,)), (2, (1, 3)), (3, (2, 2))])
def test_flag_bounds(q, t):
    rep = flag_bounds_check(flag_complex(q, t))
    assert rep.passed, rep.to_dict()
