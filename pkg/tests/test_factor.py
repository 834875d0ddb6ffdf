from __future__ import annotations

import warnings

import pytest
from conftest import nonzero, polynomials
from hypothesis import given, settings

from polysubmod.errors import CapabilityWarning, NotCoprime, ProductMismatch, ZeroPolynomial
from polysubmod.factor import factor, squarefree
from polysubmod.ideal import gcd
from polysubmod.parser import parse
from polysubmod.poly_core import GR_I, Polynomial, var

z1, z2, z3 = var(1), var(2), var(3)


def pairs(fp):
    return [(f.poly, f.mult) for f in fp.factors]


def test_squarefree_examples():
    fp = squarefree(z1**2 * z2)
    assert fp.unit == 1 and pairs(fp) == [(z1, 2), (z2, 1)]
    fp = squarefree((z1 - z2) ** 2 * (z1 + z2))
    assert set(pairs(fp)) == {(z1 - z2, 2), (z1 + z2, 1)}
    fp = squarefree(Polynomial.const(7))
    assert fp.unit == 7 and fp.factors == ()


def test_factor_examples():
    fp = factor(z1**2 - z2**2)
    assert set((f.poly, f.mult, f.certified) for f in fp.factors) == {(z1 - z2, 1, True), (z1 + z2, 1, True)}
    fp = factor(z1**2 + 1)
    assert set(pairs(fp)) == {(z1 - GR_I, 1), (z1 + GR_I, 1)}
    assert all(f.certified for f in fp.factors)
    assert pairs(factor(z1)) == [(z1, 1)]


def test_factor_normalizes_units():
    fp = factor(parse("2*(z1 - 3)*(z2 - 4)"))
    assert fp.unit == 2
    assert set(pairs(fp)) == {(z1 - 3, 1), (z2 - 4, 1)}
    assert all(f.poly.leading_coeff() == 1 for f in fp.factors)


def test_zero_rejected():
    with pytest.raises(ZeroPolynomial):
        factor(Polynomial.zero())


def test_capability_warning_outside_cap():
    p = (z1 * z2 * z3 + var(4) + 1) * (z1 + 2)
    with pytest.warns(CapabilityWarning):
        fp = factor(p)
    assert fp.expand() == p
    assert not fp.all_certified


def test_trusted_input():
    fp = factor(2 * z1**2 - 2, mode="trusted_input", trusted=[(z1 - 1, 1), (2 * z1 + 2, 1)])
    assert fp.trusted and fp.unit == 2
    assert fp.expand() == 2 * (z1**2 - 1)
    with pytest.raises(ProductMismatch):
        factor(z1**2 - 1, mode="trusted_input", trusted=[(z1 - 1, 2)])
    with pytest.raises(NotCoprime):
        factor((z1 - 1) ** 2 * z1, mode="trusted_input", trusted=[(z1 - 1, 1), (z1**2 - z1, 1)])


def test_trusted_input_merges_associates():
    fp = factor(-(z1 - 1) ** 2, mode="trusted_input", trusted=[(z1 - 1, 1), (1 - z1, 1)])
    assert pairs(fp) == [(z1 - 1, 2)]
    assert fp.expand() == -(z1 - 1) ** 2


small = nonzero(polynomials(max_vars=2, max_degree=3, max_terms=4))


@settings(max_examples=40)
@given(small, small)
def test_factor_invariants(a, b):
    p = a * b
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CapabilityWarning)
        fp = factor(p)
    assert fp.expand() == p
    fs = [f.poly for f in fp.factors]
    for f in fs:
        for n in f.support_vars():
            assert gcd(f, f.diff(n)).is_constant()
        again = factor(f)
        assert pairs(again) == [(f, 1)]
    for i, f in enumerate(fs):
        for g in fs[i + 1:]:
            assert gcd(f, g).is_constant()


@given(nonzero(polynomials(max_vars=3, max_degree=3)))
def test_squarefree_reconstructs(p):
    fp = squarefree(p * p)
    assert fp.expand() == p * p
    assert all(f.mult % 2 == 0 for f in fp.factors)
