import random

import pytest

from ktotal.errors import InputError, OutOfRange
from ktotal.groupexpr.element import apply_hom
from ktotal.verify import (
    REFUTATION_CASES,
    VerifyConfig,
    b_automorphisms,
    check_beta_automatic,
    de_solutions,
    random_beta_instance,
    refute_by_enumeration,
    refute_isomorphism_cases,
    run_all,
    verify_de_conjugation,
    verify_gamma_compat,
)

BOUND = 12


def test_unit_groups():
    assert b_automorphisms(8) == [1]
    assert b_automorphisms(9) == [1, 2, 4, 5, 7, 8]


@pytest.mark.parametrize("k", [3, 6, 9, 12])
def test_de_solutions_do_not_depend_on_search_order(k):
    units = b_automorphisms(k)
    shuffled = units[:]
    random.Random(k).shuffle(shuffled)
    assert de_solutions(k, shuffled, BOUND) == de_solutions(k, None, BOUND) == de_solutions(k, units[::-1], BOUND)


def test_de_obstruction_values():
    assert de_solutions(3, bound=BOUND) == [2]
    assert de_solutions(9, bound=BOUND) == []
    with pytest.raises(OutOfRange):
        verify_de_conjugation(13, BOUND)


def test_de_witnesses_reevaluate():
    r = verify_de_conjugation(9, BOUND)
    assert not r.params["solutions"]
    assert len(r.witnesses) == 6
    for w in r.witnesses:
        assert str(apply_hom(w.lhs_map, w.value)) == w.lhs
        assert str(apply_hom(w.rhs_map, w.value)) == w.rhs
        assert w.lhs != w.rhs


@pytest.mark.parametrize("J", [3, 4, 5, 6])
def test_refutation_is_stable_in_the_window(J):
    assert refute_isomorphism_cases(J, "F2", BOUND).passed
    assert refute_isomorphism_cases(J, "F1", BOUND).passed


@pytest.mark.parametrize("case", REFUTATION_CASES)
def test_refutation_agrees_with_enumeration(case):
    assert refute_by_enumeration(2, case.parity, case.sign, "F2", BOUND)


def test_gamma_report_passes_with_expected_failures():
    assert verify_gamma_compat(BOUND).passed


@pytest.mark.parametrize("seed", [0, 7, 41])
def test_random_instances_pass(seed):
    inst = random_beta_instance(seed, BOUND)
    assert check_beta_automatic(inst.b1, inst.e1, inst.b2, inst.e2, inst.gamma, inst.eta).passed


def test_random_instances_are_reproducible():
    a, b = random_beta_instance(5, BOUND), random_beta_instance(5, BOUND)
    assert a.gamma.comps == b.gamma.comps
    assert a.e1.totalk == b.e1.totalk


def test_run_all_small_config():
    reports = run_all(VerifyConfig(cases=("de", "refute"), max_coeff=BOUND, window=4))
    assert [r.name for r in reports] == ["de_obstruction", "refute_isomorphism", "refute_isomorphism"]
    assert all(r.passed for r in reports)
    d = reports[0].to_dict()
    assert set(d) == {"check", "params", "verdict", "subs", "witnesses"}


def test_run_all_rejects_unknown_case():
    with pytest.raises(InputError):
        run_all(VerifyConfig(cases=("nope",)))


def test_run_all_reports_errors_per_case():
    reports = run_all(VerifyConfig(cases=("de",), max_coeff=1))
    assert reports[0].error.startswith("OutOfRange") and reports[0].verdict == "fail"
