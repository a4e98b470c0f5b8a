from fractions import Fraction

import pytest
import sympy

from kgwnf.algebra import ExactComplex, Field, Functional, build, poisson_bracket
from kgwnf.normalform import (H0, H1, H_HARMONIC, K_FREE, AveragePreconditionError,
                              SmallDivisorError, L_h, L_h_inverse, L_k, apply_exponential,
                              deviation, flow_average, generator_series, lie_collect, normal_form,
                              reference, solve_generator, z2_shortcut_check)
from kgwnf.normalform.reference import available


@pytest.fixture(scope="module")
def nf3():
    return normal_form(3)


def test_unperturbed_hamiltonian_splits_into_h_and_k():
    assert H0 == H_HARMONIC + K_FREE
    assert poisson_bracket(H_HARMONIC, K_FREE).is_zero()
    assert H0 == reference("H0")
    assert H1 == reference("H1")


@pytest.mark.parametrize("name", ["Z1", "G1", "Z2", "G2", "F2", "dF2", "dH1"])
def test_order_two_matches_published_expressions(name):
    nf = normal_form(2)
    computed = {
        "Z1": nf.Z(1), "G1": nf.G(1), "Z2": nf.Z(2), "G2": nf.G(2), "F2": nf.F[1],
        "dF2": deviation(nf.F[1]), "dH1": deviation(nf.F[0]),
    }[name]
    assert computed == reference(name)


def test_reference_lookup():
    assert "G2" in available()
    with pytest.raises(KeyError):
        reference("Z9")


def test_generator_series_terminates_at_phi_degree_plus_one():
    dF2 = reference("dF2")
    series = generator_series(dF2)
    assert len(series) == dF2.degree(Field.PHI) + 1 == 3
    alternating = series[0] - series[1] + series[2]
    assert alternating == solve_generator(dF2) == reference("G2")


def test_identities_through_order_three(nf3):
    assert nf3.all_residuals_zero()
    assert all(nf3.commutes_with_h())
    assert all(nf3.generators_zero_average())
    assert nf3.F[0] == H1
    assert z2_shortcut_check() == nf3.Z(2)


@pytest.mark.slow
def test_identities_at_order_four():
    nf = normal_form(4)
    assert nf.all_residuals_zero()
    assert all(nf.commutes_with_h()) and all(nf.generators_zero_average())


def test_quadratic_massive_part_follows_relativistic_dispersion():
    # the psi-psiStar part of Z_n is the eps^n Taylor coefficient of sqrt(1 + eps k^2),
    # with k^2 -> -lap acting on one factor
    nf = normal_form(4)
    x = sympy.symbols("x")
    taylor = sympy.series(sympy.sqrt(1 + x), x, 0, 6).removeO()
    ops = {1: "grad psi . grad psiStar", 2: "lap psi lap psiStar",
           3: "grad lap psi . grad lap psiStar", 4: "lap lap psi lap lap psiStar"}
    for n, op in ops.items():
        c = Fraction(str(taylor.coeff(x, n)))
        quadratic = nf.Z(n).select(lambda f: sorted(f) == [Field.PSI, Field.PSI_STAR])
        assert quadratic == build(f"int {op}") * ExactComplex(c), n


def test_lie_collect_agrees_with_normal_form(nf3):
    ledger = lie_collect(H0, H1, nf3.generators[:2], 3)
    assert ledger.F[1:] == nf3.F
    assert ledger.applied == 2
    with pytest.raises(ValueError):
        lie_collect(H0, H1, [], 3)


def test_apply_exponential_with_zero_generator_is_identity():
    series = [H0, H1, Functional.zero()]
    assert apply_exponential(series, Functional.zero(), 1) == series


def test_first_exponential_step():
    G1 = reference("G1")
    new = apply_exponential([H0, H1, Functional.zero()], G1, 1)
    assert new[0] == H0
    assert new[1] == H1 + poisson_bracket(H0, G1)
    assert new[2] == poisson_bracket(H1, G1) + poisson_bracket(poisson_bracket(H0, G1), G1) / 2


def test_homological_equation_solved_by_generator():
    dH1 = deviation(H1)
    G1 = solve_generator(dH1)
    assert poisson_bracket(G1, H0) == dH1


# -- averaging and the inverse of L_h -----------------------------------------

def test_flow_average_keeps_charge_zero():
    F = build("int phi psi^2 + int phi |psi|^2 + int pphi psiStar^2")
    assert flow_average(F) == build("int phi |psi|^2")
    assert flow_average(flow_average(F)) == flow_average(F)
    assert deviation(F) + flow_average(F) == F


def test_L_h_scales_each_charge():
    F = build("int phi psi^2")
    assert L_h(F) == F * ExactComplex(0, -2)
    assert L_h(build("int |psi|^2")).is_zero()


@pytest.mark.parametrize("text", ["int phi psi^2", "int psiStar^4 + int (grad psi)^2", "int pphi psi^3"])
def test_L_h_inverse_is_a_right_inverse(text):
    F = build(text)
    assert L_h(L_h_inverse(F)) == F


def test_L_h_inverse_rejects_charge_zero_terms():
    with pytest.raises(AveragePreconditionError):
        L_h_inverse(build("int phi |psi|^2"))


def test_detuned_frequency_and_small_divisors():
    F = build("int phi psi^2")
    assert L_h_inverse(F, frequency=2) == L_h_inverse(F) / 2
    with pytest.raises(SmallDivisorError):
        L_h_inverse(F, frequency=Fraction(1, 100), threshold=Fraction(1, 10))


def test_L_k_lowers_phi_degree():
    F = build("int phi^2 psi^2")
    assert L_k(F).degree(Field.PHI) == 1
    assert L_k(build("int psi^2")).is_zero()


def test_order_must_be_positive():
    with pytest.raises(ValueError):
        normal_form(0)
