"""Fourier-symbol operations: symmetrization, derivations, conversions."""

import random
from fractions import Fraction

import pytest

from qwk.algebra import GaussRat, I, MultiPoly
from qwk.symbols import (INTEGRATED, DiffPoly, FourierSymbol, d_dp0,
                         d_x, density, eval_string_point, from_diff_poly,
                         make_term, mode_derivative_zero_mode, slot_names,
                         symbols_equal, symmetrize, to_diff_poly, u0_symbol,
                         variational_derivative)


def sym_of_terms(*terms):
    return density(list(terms))


def random_diff_poly(rng, max_terms=3, max_order=3, max_size=3, max_grade=1):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        size = rng.randint(0, max_size)
        orders = tuple(sorted(rng.randint(0, max_order) for _ in range(size)))
        c = GaussRat(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                     Fraction(rng.randint(-2, 2), 1))
        terms[(orders, rng.randint(0, max_grade))] = c
    return DiffPoly(terms)


def test_symmetrize_examples():
    # a1^2 on two slots -> (a1^2 + a2^2)/2
    t = make_term(0, 2, MultiPoly(slot_names(2), {(2, 0): 1}))
    s = symmetrize(sym_of_terms(t))
    assert s.terms[0].coeff == MultiPoly(
        slot_names(2), {(2, 0): Fraction(1, 2), (0, 2): Fraction(1, 2)})
    # already symmetric a1*a2 unchanged
    t = make_term(0, 2, MultiPoly(slot_names(2), {(1, 1): 1}))
    s = symmetrize(sym_of_terms(t))
    assert s.terms[0].coeff == MultiPoly(slot_names(2), {(1, 1): 1})
    # antisymmetric part dies
    t = make_term(0, 2, MultiPoly(slot_names(2), {(1, 0): 1, (0, 1): -1}))
    assert symmetrize(sym_of_terms(t)).is_zero()


def test_symmetrize_idempotent():
    rng = random.Random(0)
    for _ in range(30):
        m = rng.randint(1, 4)
        poly = MultiPoly(slot_names(m),
                         {tuple(rng.randint(0, 2) for _ in range(m)): rng.randint(-3, 3)
                          for _ in range(3)})
        s = sym_of_terms(make_term(rng.randint(0, 2), m, poly))
        once = symmetrize(s)
        assert symbols_equal(once, symmetrize(once))
        assert eval_string_point(once) == eval_string_point(s)


def test_d_x_examples():
    u0 = u0_symbol()
    du = d_x(u0)
    assert du.terms[0].coeff == MultiPoly(slot_names(1), {(1,): I})
    ddu = d_x(du)
    assert ddu.terms[0].coeff == MultiPoly(slot_names(1), {(2,): GaussRat(-1)})
    const = density([make_term(0, 0, 1)])
    assert d_x(const).is_zero()
    with pytest.raises(ValueError):
        d_x(FourierSymbol(INTEGRATED, u0.terms))


def test_d_dp0_examples():
    const = density([make_term(1, 0, Fraction(-1, 24))])
    assert d_dp0(const).is_zero()
    # m=2 term with coeff a1*a2/2: slot at zero kills the multilinear coeff
    t = make_term(0, 2, MultiPoly(slot_names(2), {(1, 1): Fraction(1, 2)}), blocks=(2,))
    assert d_dp0(sym_of_terms(t)).is_zero()
    # u0^2/2 -> u0
    t = make_term(0, 2, Fraction(1, 2), blocks=(2,))
    out = d_dp0(sym_of_terms(t))
    assert symbols_equal(out, u0_symbol())


def test_eval_string_point_examples():
    assert eval_string_point(u0_symbol()) == {}
    s = density([make_term(0, 1, MultiPoly(slot_names(1), {(1,): 1}))])
    assert eval_string_point(s) == {0: -I}
    s = density([make_term(1, 0, Fraction(-1, 24))])
    assert eval_string_point(s) == {1: GaussRat(Fraction(-1, 24))}


def test_string_point_lemma_dx_vs_dp0():
    # evaluation of d_x equals evaluation of d_dp0 on random symbols
    rng = random.Random(1)
    for _ in range(40):
        m = rng.randint(1, 3)
        poly = MultiPoly(slot_names(m),
                         {tuple(rng.randint(0, 2) for _ in range(m)):
                          GaussRat(rng.randint(-3, 3), rng.randint(-1, 1))
                          for _ in range(3)})
        s = symmetrize(sym_of_terms(make_term(rng.randint(0, 1), m, poly)))
        if s.is_zero():
            continue
        assert eval_string_point(d_x(s)) == eval_string_point(d_dp0(s))


def test_diff_poly_roundtrip():
    rng = random.Random(2)
    for _ in range(40):
        d = random_diff_poly(rng)
        assert to_diff_poly(from_diff_poly(d)) == d


def test_from_diff_poly_u1_squared():
    d = DiffPoly({((1, 1), 0): GaussRat(1)})
    s = from_diff_poly(d)
    assert len(s.terms) == 1
    t = s.terms[0]
    assert t.m == 2
    # (i a1)(i a2) = -a1 a2
    assert t.coeff == MultiPoly(slot_names(2), {(1, 1): GaussRat(-1)})


def test_variational_derivative_examples():
    # u0^2/2 -> the one-slot symbol with coefficient 1
    d = DiffPoly({((0, 0), 0): GaussRat(Fraction(1, 2))})
    assert symbols_equal(variational_derivative(d), u0_symbol())
    # u0 -> the constant 1
    d = DiffPoly({((0,), 0): GaussRat(1)})
    out = variational_derivative(d)
    assert symbols_equal(out, density([make_term(0, 0, 1)]))
    assert variational_derivative(DiffPoly()).is_zero()


def test_variational_derivative_matches_mode_route():
    rng = random.Random(3)
    for _ in range(40):
        d = random_diff_poly(rng)
        lhs = variational_derivative(d)
        rhs = mode_derivative_zero_mode(from_diff_poly(d))
        assert symbols_equal(lhs, rhs)


def test_debug_serialization_shape():
    s = density([make_term(1, 1, MultiPoly(slot_names(1), {(1,): I}))])
    blob = s.to_json()
    assert blob == [{"grade": 1, "slots": 1, "blocks": [1], "coeff": {"a1": "0+1*i"}}]


def brute_full_symmetrization(poly, m):
    import itertools
    from fractions import Fraction as F
    vs = slot_names(m)
    acc = {}
    perms = list(itertools.permutations(range(m)))
    for perm in perms:
        for e, c in poly.with_variables(vs).terms.items():
            key = [0] * m
            for i, x in enumerate(e):
                key[perm[i]] = x
            key = tuple(key)
            acc[key] = acc.get(key, c * 0) + c
    return MultiPoly(vs, {e: c * F(1, len(perms)) for e, c in acc.items()})


def test_block_coset_symmetrization_equals_brute_force():
    # multi-block terms: the coset average must equal the full m! average
    rng = random.Random(4)
    for _ in range(25):
        m = rng.randint(2, 5)
        # split m into blocks
        blocks = []
        left = m
        while left:
            b = rng.randint(1, left)
            blocks.append(b)
            left -= b
        vs = slot_names(m)
        # block-symmetric polynomial: product of per-block power sums
        poly = MultiPoly.const(1, vs)
        start = 0
        for b in blocks:
            block_vars = vs[start:start + b]
            e = rng.randint(1, 2)
            piece = MultiPoly.const(rng.randint(1, 3), vs)
            for v in block_vars:
                piece = piece + MultiPoly.var(v, vs) ** e
            poly = poly * piece
            start += b
        term = make_term(0, m, poly, blocks=tuple(blocks))
        coset = symmetrize(density([term])).terms[0].coeff
        brute = brute_full_symmetrization(poly, m)
        assert coset == brute, (blocks,)
