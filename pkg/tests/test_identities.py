from dataclasses import replace

import numpy as np
import pytest

from qfusion.circuit import CircuitBuilder
from qfusion.gates import GateInstance, gate
from qfusion.identities import (
    MODES,
    TOLERANCES,
    IdentityCase,
    Literal,
    OperatorSum,
    formula_matrix,
    get_case,
    mutate,
    mutation_sites,
    registry,
    verify,
    verify_all,
)

CASES = registry()
IDS = [c.id for c in CASES]


def test_registry_shape():
    assert len(CASES) >= 45
    assert len(set(IDS)) == len(IDS)
    assert get_case("eq3g").mode == "unitary_exact"
    assert get_case("eq9a").mode == "operator_sum_exact"
    assert all(c.mode in MODES for c in CASES)


@pytest.mark.parametrize(
    "prefix",
    ["eq2_", "eq3", "eq5", "eq6", "eq7", "eq8", "eq9", "eq10", "eq11", "eq13", "eq15", "eq16", "eq17",
     "eqA1", "eqA2", "eqA3", "eqA4", "eqA5", "eqA_commute_h_fg", "eqA_g_state"],
)
def test_registry_covers_group(prefix):
    assert any(i.startswith(prefix) for i in IDS)


@pytest.mark.parametrize("case", CASES, ids=IDS)
def test_case_passes(case):
    report = verify(case)
    assert report.status == "pass", report.detail
    assert report.max_deviation <= TOLERANCES[case.mode]


def test_commutator_zx_precision():
    assert verify(get_case("eq2_zx")).max_deviation <= 1e-12


def test_fusion_channel_case_at_channel_tolerance():
    r = verify(get_case("eq16a_fusion_channel"))
    assert r.passed and r.max_deviation <= 1e-9


def test_swapping_z_for_its_adjoint_fails():
    case = get_case("eq2_zx")
    lhs = case.lhs
    flipped = OperatorSum(tuple(
        (c, tuple(GateInstance(g.name, -g.power if g.name == "Z" else g.power, g.dims) for g in fs))
        for c, fs in lhs.terms))
    report = verify(replace(case, lhs=flipped))
    assert not report.passed and report.status == "fail"


def test_every_mutation_is_detected():
    checked = 0
    for case in CASES:
        for site in mutation_sites(case):
            report = verify(mutate(case, site))
            assert not report.passed, (case.id, site)
            checked += 1
    assert checked >= 10


def test_injected_corruption_gives_exactly_one_failure():
    case = get_case("eq3a")
    bad = mutate(case, mutation_sites(case)[0])
    reports = verify_all(cases=CASES + [bad])
    failed = [r.id for r in reports if not r.passed]
    assert failed == [bad.id]


def test_filters():
    assert verify_all(prefix="") == []
    eq3 = verify_all(prefix="eq3")
    assert [r.id for r in eq3] == sorted(r.id for r in eq3)
    assert {r.id[:3] for r in eq3} == {"eq3"}


def test_construction_error_is_reported():
    c = CircuitBuilder().qubit("a").gate("H", "a").build(["a"])
    case = IdentityCase("broken", c, Literal(np.eye(4)), "unitary_exact", "shape mismatch")
    report = verify(case)
    assert report.status == "error" and not report.passed


@pytest.mark.parametrize("name", ["X", "Z", "H", "S", "CNOT"])
def test_catalog_matches_independent_formulas(name):
    dims = (4, 4) if name == "CNOT" else (4,)
    np.testing.assert_allclose(gate(name, dims).matrix, formula_matrix(name), atol=1e-12)


def test_verification_is_deterministic():
    a = verify_all(prefix="eq1")
    b = verify_all(prefix="eq1")
    assert [(r.id, r.max_deviation) for r in a] == [(r.id, r.max_deviation) for r in b]
