import random

import pytest

from sympy.polys.domains import QQ_I

from kgwnf.algebra import build, poisson_bracket
from kgwnf.normalform import flow_average, reference

from .oracles.modes import PHI, PPHI, PSI, PSI_STAR, ModeTruncation
from .oracles.random_functionals import MODE_SETS, random_functional


def test_single_mode_canonical_pairs():
    M = ModeTruncation([(1,)], max_factors=2)
    z, w = M.var(PSI, (1,)), M.var(PSI_STAR, (1,))
    q, p = M.var(PHI, (1,)), M.var(PPHI, (1,))
    assert M.bracket(z, w) == M.ring.one * QQ_I(0, -1)
    assert M.bracket(w, z) == M.ring.one * QQ_I(0, 1)
    assert M.bracket(q, p) == M.ring.one
    assert M.bracket(p, q) == -M.ring.one


def test_gradient_contraction_becomes_wave_number_product():
    M = ModeTruncation([(2,)], max_factors=2)
    poly = M.evaluate(build("int grad psi . grad psiStar"), external_only=True)
    assert poly == 4 * M.var(PSI, (2,)) * M.var(PSI_STAR, (2,))


@pytest.mark.parametrize("ext", MODE_SETS)
def test_bracket_of_normal_form_pieces(ext):
    M = ModeTruncation(ext, max_factors=4)
    A, B = reference("Z1"), reference("G1")
    symbolic = M.evaluate(poisson_bracket(A, B), external_only=True)
    assert symbolic == M.restrict(M.bracket(M.evaluate(A), M.evaluate(B)))


def test_oracle_detects_a_wrong_bracket():
    # negative control: a sign error in the bracket must not go unnoticed
    rng = random.Random(7)
    M = ModeTruncation(MODE_SETS[1], max_factors=4)
    caught = 0
    for _ in range(20):
        A, B = random_functional(rng), random_functional(rng)
        wrong = M.evaluate(poisson_bracket(B, A), external_only=True)
        right = M.restrict(M.bracket(M.evaluate(A), M.evaluate(B)))
        if right:
            assert wrong != right
            caught += 1
    assert caught > 5


def test_average_matches_balanced_monomials():
    rng = random.Random(11)
    M = ModeTruncation(MODE_SETS[2], max_factors=4)
    for _ in range(10):
        A = random_functional(rng)
        assert M.evaluate(flow_average(A), external_only=True) == M.h_average(M.evaluate(A, external_only=True))
