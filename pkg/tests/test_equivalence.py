from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from conftest import nonzero, polynomials
from hypothesis import given, settings
from hypothesis import strategies as st

from polysubmod.equivalence import (
    Verdict,
    modulus_equivalent,
    monomial_orbit_exponent,
    outer_factor,
    reflect,
    stable_free_part,
    torus_modulus_equal,
    unitarily_equivalent,
    unitarily_equivalent_principal,
)
from polysubmod.errors import InvalidBeurlingForm, UndecidedStability
from polysubmod.ideal import BeurlingForm, IdealGens
from polysubmod.parser import parse
from polysubmod.poly_core import GaussianRational, Polynomial, exponent, var
from polysubmod.stability import torus_sample_arrays
from polysubmod.weights import WeightSignature, certificate_check

z1, z2, z3 = var(1), var(2), var(3)
half = Fraction(1, 2)
HARDY = WeightSignature.uniform(-1)
BERGMAN = WeightSignature.uniform(0)
MIXED = WeightSignature.from_betas([-1, 0])
ONE = IdealGens.of([1])


def form(p, *gens):
    return BeurlingForm(p if isinstance(p, Polynomial) else Polynomial.const(p), IdealGens.of(gens or [1]))


def assert_certified(verdict, sig):
    assert verdict.yes
    report = certificate_check(verdict.certificate, sig)
    assert report.ok, report.witness


def test_reflection_examples():
    r = reflect(z1 - half)
    assert r.scaled() == 1 - half * z1
    r = reflect(z1 - z2)
    assert r.poly == z1 - z2 and r.unit == -1
    c = GaussianRational(2, -3)
    assert reflect(Polynomial.const(c)).scaled() == c.conjugate()
    assert reflect(z1).scaled() == 1


def test_torus_modulus_equal():
    assert torus_modulus_equal(z1 - half, 1 - half * z1)
    assert torus_modulus_equal(z1 * z2, Polynomial.one())
    assert not torus_modulus_equal(z1 - half, z1 - Fraction(1, 3))


def test_stable_free_part_examples():
    assert stable_free_part(z1 * (z1 - 2)) == (z1, z1 - 2)
    p_star, stable = stable_free_part(2 * (z1 - 3) * (z2 - 4))
    assert p_star == 1 and stable == 2 * (z1 - 3) * (z2 - 4)
    assert stable_free_part(z1 - z2) == (z1 - z2, 1)
    with pytest.raises(UndecidedStability):
        stable_free_part(parse("(z1 + 2)*(z2 + 2) - 1"))


def test_modulus_equivalence_examples():
    v = modulus_equivalent(z1 - half, z1)
    assert v.yes and v.multipliers.u == 1 and v.multipliers.v == 1 - half * z1
    p = parse("z1^2*z2 - 1/3*z2 + 1i")
    v = modulus_equivalent(p, p)
    assert v.yes and v.multipliers.u == 1 and v.multipliers.v == 1
    v = modulus_equivalent(z1 - z2, z1)
    assert v.no and "z1 - z2" in v.obstruction


def test_modulus_equivalence_approximate_outer_factor():
    v = modulus_equivalent(z1**2 - z1 - 1, Polynomial.one())
    assert v.yes and not v.multipliers.exact
    assert v.metadata["torus_identity"] == "approximate"
    pts = torus_sample_arrays([1], 200, seed=0)
    lhs = np.abs((z1**2 - z1 - 1).eval_array(pts) * v.multipliers.u.eval_array(pts))
    rhs = np.abs(v.multipliers.v.eval_array(pts))
    assert np.allclose(lhs, rhs, rtol=1e-12)


def test_outer_factor_is_zero_free_and_balanced():
    f = parse("z1^3 - 1/3*z1 + 1i")
    g = outer_factor(f)
    roots = np.roots([complex(c) for c in reversed(g.univariate_coeffs(1))])
    assert np.all(np.abs(roots) > 1)
    pts = torus_sample_arrays([1], 100, seed=2)
    assert np.allclose(np.abs(f.eval_array(pts)), np.abs(g.eval_array(pts)), rtol=1e-12)


def test_unitary_equivalence_examples():
    v = unitarily_equivalent(form(z1), form(1), HARDY)
    assert_certified(v, HARDY)
    v = unitarily_equivalent(form(z1), form(z1 - half), BERGMAN)
    assert v.no and v.failing_condition
    v = unitarily_equivalent(form(z1 * z2), form(z2), MIXED)
    assert v.metadata["phi"] == "z2" and v.metadata["r"] == "z1" and v.metadata["s"] == "1"
    assert_certified(v, MIXED)
    v = unitarily_equivalent(form(1, z1**2, z2), form(1, z1**2, z2), HARDY)
    assert_certified(v, HARDY)


def test_unitary_equivalence_differing_ideals():
    v = unitarily_equivalent(form(1, z1, z2), form(1, z1**2, z2), HARDY)
    assert v.no and v.failing_condition == "K = L"


def test_unitary_equivalence_generator_invariance():
    a = unitarily_equivalent(form(z1 - half, z1**2, z2), form(1, z1**2, z2), HARDY)
    b = unitarily_equivalent(form(z1 - half, z1**2 + z2, z2), form(1, z2 - z1**2, z1**2 + 2 * z2), HARDY)
    assert a.status == b.status == Verdict.YES
    assert_certified(b, HARDY)


def test_invalid_forms():
    with pytest.raises(InvalidBeurlingForm):
        unitarily_equivalent(form(1, z1, z1 * z2), form(1), HARDY)


def test_principal_examples():
    v = unitarily_equivalent_principal(z1 * (z1 - 2), Polynomial.one(), HARDY)
    assert v.metadata["p_star"] == "z1"
    assert_certified(v, HARDY)
    p = parse("z1*z2 - 1/2 + z3")
    assert_certified(unitarily_equivalent_principal(p, p, BERGMAN), BERGMAN)
    v = unitarily_equivalent_principal(z1 - z2, Polynomial.one(), HARDY)
    assert v.no


def test_principal_undecided():
    v = unitarily_equivalent_principal(parse("(z1 + 2)*(z2 + 2) - 1"), Polynomial.one(), HARDY)
    assert v.undecided


def test_orbit_exponent_examples():
    gamma = exponent({1: 2, 2: 3})
    assert monomial_orbit_exponent(gamma, MIXED) == exponent({2: 3})
    assert monomial_orbit_exponent(gamma, HARDY) == exponent({})
    assert monomial_orbit_exponent(gamma, BERGMAN) == gamma


@settings(max_examples=40)
@given(nonzero(polynomials(max_vars=3, max_degree=4)))
def test_reflection_torus_modulus(p):
    r = reflect(p).scaled()
    pts = torus_sample_arrays(sorted(p.support_vars() | {1}), 100, seed=0)
    a, b = np.abs(p.eval_array(pts)), np.abs(r.eval_array(pts))
    mask = a > 1e-6
    if mask.sum() >= 2:
        ratio = b[mask] / a[mask]
        assert np.max(np.abs(ratio / ratio[0] - 1)) < 1e-9
    assert torus_modulus_equal(p, r)


@given(nonzero(polynomials(max_vars=3, max_degree=4)))
def test_reflection_involution(p):
    if p.monomial_content():
        return
    once = reflect(p)
    twice = reflect(once.poly)
    assert twice.poly.scale(twice.unit * once.unit.conjugate()) == p


univariate = nonzero(polynomials(max_vars=1, max_degree=3, max_terms=3))


@settings(max_examples=30)
@given(univariate, st.sampled_from([z1 - half, z1 - 3, half * z1 + GaussianRational(0, 1), z1**2]))
def test_modulus_equivalence_reflexive_symmetric_scaling(p, q):
    assert modulus_equivalent(p, p).yes
    a, b = modulus_equivalent(p * q, q), modulus_equivalent(q, p * q)
    assert a.status == b.status
    c = modulus_equivalent(GaussianRational(3, -1) * p * q, Fraction(1, 7) * q)
    assert c.status == a.status


def test_modulus_equivalence_renaming():
    pairs = [(z1 - z2, z1), (z1 * z2 - half, Polynomial.one()), ((z1 - half) * (z2 - 3), z2 - Fraction(1, 3))]
    for r, s in pairs:
        base = modulus_equivalent(r, s)
        swap = {1: z3, 2: z1}
        renamed = modulus_equivalent(r.subs(swap), s.subs(swap))
        assert base.status == renamed.status


def test_stable_part_has_no_zeros_near_boundary():
    rng = np.random.default_rng(0)
    p = parse("(z1 - 1/2)*(3 + z1 + z2)*(z1*z2 - 2)")
    p_star, stable = stable_free_part(p)
    assert p_star == z1 - half
    pts = {v: 0.999 * np.sqrt(rng.uniform(size=10_000)) * np.exp(2j * np.pi * rng.uniform(size=10_000)) for v in (1, 2)}
    assert np.min(np.abs(stable.eval_array(pts))) > 0
    assert p_star * stable == p


def test_random_bergman_rigidity_sample():
    rng = random.Random(5)
    for _ in range(6):
        p = (z1 - Fraction(rng.randint(-3, 3), 4)) * (z2 + rng.randint(2, 4))
        q = z1 - Fraction(rng.randint(-3, 3), 4)
        expected = stable_free_part(p)[0] == stable_free_part(q)[0]
        assert unitarily_equivalent_principal(p, q, BERGMAN).yes == expected
