"""Squarefree decomposition and irreducible factorization over Q(i).

Squarefree splitting (monomial content, content/primitive recursion per
variable, Yun's algorithm) is done here.  Irreducible factorization of the
squarefree pieces is delegated to sympy's ``QQ_I`` factorizer inside the
certified size cap; larger pieces are returned uncertified with a
``CapabilityWarning``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CapabilityWarning, NotCoprime, ProductMismatch, ZeroPolynomial
from .ideal import gcd, gcd_many
from .poly_core import (
    GR_ONE,
    GaussianRational,
    Polynomial,
    div_exact,
    exp_key,
    exponent,
)

MAX_CERTIFIED_DEGREE = 6
MAX_CERTIFIED_VARS = 3


@dataclass(frozen=True)
class Factor:
    poly: Polynomial
    mult: int
    certified: bool


@dataclass(frozen=True)
class FactoredPoly:
    """``unit * prod(f.poly ** f.mult)`` with monic, pairwise non-associate factors."""

    unit: GaussianRational
    factors: tuple[Factor, ...]
    trusted: bool = False

    def expand(self) -> Polynomial:
        acc = Polynomial.const(self.unit)
        for f in self.factors:
            acc = acc * f.poly ** f.mult
        return acc

    @property
    def all_certified(self) -> bool:
        return all(f.certified for f in self.factors)

    def __iter__(self):
        return iter(self.factors)


def _sorted_factors(factors: Iterable[Factor]) -> tuple[Factor, ...]:
    """Ascending total degree; within a degree, descending graded-lex (z1 before z2)."""
    by_terms = sorted(
        factors,
        key=lambda f: ([exp_key(m) for m, _ in f.poly.sorted_terms()], f.mult),
        reverse=True,
    )
    return tuple(sorted(by_terms, key=lambda f: f.poly.total_degree()))


def _merge(factors: Iterable[Factor]) -> list[Factor]:
    """Combine equal (already monic) factors by adding multiplicities."""
    acc: dict[Polynomial, list] = {}
    for f in factors:
        if f.poly in acc:
            acc[f.poly][0] += f.mult
            acc[f.poly][1] = acc[f.poly][1] and f.certified
        else:
            acc[f.poly] = [f.mult, f.certified]
    return [Factor(p, m, c) for p, (m, c) in acc.items()]


# ---------------------------------------------------------------------------
# squarefree decomposition
# ---------------------------------------------------------------------------


def _yun(a: Polynomial, x: int) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm in ``z_x`` for ``a`` primitive in ``z_x``."""
    out = []
    b = a.diff(x)
    c = gcd(a, b)
    w = div_exact(a, c)
    y = div_exact(b, c)
    z = y - w.diff(x)
    i = 1
    while not w.is_constant():
        g = gcd(w, z)
        if not g.is_constant():
            out.append((g, i))
        w = div_exact(w, g)
        y = div_exact(z, g)
        z = y - w.diff(x)
        i += 1
    return out


def _squarefree_parts(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Squarefree split of a polynomial with no monomial content (constant factors dropped)."""
    if p.is_constant():
        return []
    x = min(p.support_vars())
    parts = p.as_univariate(x)
    cont = gcd_many(parts.values())
    out = []
    if not cont.is_constant():
        out.extend(_squarefree_parts(cont))
        p = div_exact(p, cont)
    out.extend(_yun(p, x))
    return out


def squarefree(p: Polynomial) -> FactoredPoly:
    """Pairwise coprime squarefree factors with multiplicities."""
    if p.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    factors: list[Factor] = []
    content = p.monomial_content()
    for v, e in content:
        factors.append(Factor(Polynomial.var(v), e, True))
    core = p.div_exponent(content) if content else p
    for g, m in _squarefree_parts(core):
        factors.append(Factor(g.monic()[1], m, False))
    factors = _merge(factors)
    return FactoredPoly(p.leading_coeff(), _sorted_factors(factors))


# ---------------------------------------------------------------------------
# irreducible factorization
# ---------------------------------------------------------------------------


def within_cap(p: Polynomial) -> bool:
    """Size range in which irreducible factorization is certified."""
    nvars = len(p.support_vars())
    if nvars <= 1:
        return True
    return nvars <= MAX_CERTIFIED_VARS and p.total_degree() <= MAX_CERTIFIED_DEGREE


def _to_sympy(p: Polynomial, variables: Sequence[int]):
    import sympy
    from sympy.polys.domains import QQ, QQ_I

    gens = sympy.symbols([f"z{v}" for v in variables])
    pos = {v: k for k, v in enumerate(variables)}
    data = {}
    for m, c in p.items():
        key = [0] * len(variables)
        for v, e in m:
            key[pos[v]] = e
        data[tuple(key)] = QQ_I(
            QQ(c.re.numerator, c.re.denominator), QQ(c.im.numerator, c.im.denominator)
        )
    return sympy.Poly.from_dict(data, gens, domain=QQ_I)


def _q(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _from_sympy(poly, variables: Sequence[int]) -> Polynomial:
    terms = {}
    for key, c in poly.as_dict(native=True).items():
        terms[exponent(zip(variables, key))] = GaussianRational(_q(c.x), _q(c.y))
    return Polynomial(terms)


def irreducible_factors(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Irreducible factors over Q(i) (monic, with multiplicity) via sympy."""
    variables = sorted(p.support_vars())
    if not variables:
        return []
    _, fl = _to_sympy(p, variables).factor_list()
    out = []
    for f, m in fl:
        g = _from_sympy(f, variables)
        if not g.is_constant():
            out.append((g.monic()[1], int(m)))
    return out


def factor(
    p: Polynomial | None,
    mode: str = "auto",
    trusted: Sequence[tuple[Polynomial, int]] | None = None,
) -> FactoredPoly:
    """Factor ``p``.

    ``mode="auto"`` factors within the certified cap and falls back to the
    squarefree split otherwise.  ``mode="trusted_input"`` accepts the
    user's factor list ``trusted``, checking that it multiplies back to ``p``
    (when ``p`` is given) and that distinct factors are coprime.
    """
    if mode == "trusted_input":
        return _trusted(p, trusted or [])
    if mode != "auto":
        raise ValueError(f"unknown factor mode {mode!r}")
    if p is None or p.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    sf = squarefree(p)
    factors: list[Factor] = []
    oversized = []
    for f in sf.factors:
        if f.certified:
            factors.append(f)
        elif within_cap(f.poly):
            for g, m in irreducible_factors(f.poly):
                factors.append(Factor(g, m * f.mult, True))
        else:
            factors.append(f)
            oversized.append(f.poly)
    if oversized:
        warnings.warn(
            f"{len(oversized)} squarefree component(s) exceed the certified factorization range "
            f"(total degree <= {MAX_CERTIFIED_DEGREE}, <= {MAX_CERTIFIED_VARS} variables); "
            "returned uncertified",
            CapabilityWarning,
            stacklevel=2,
        )
    return FactoredPoly(sf.unit, _sorted_factors(_merge(factors)))


def _trusted(p: Polynomial | None, trusted: Sequence[tuple[Polynomial, int]]) -> FactoredPoly:
    unit = GR_ONE
    factors: list[Factor] = []
    product = Polynomial.one()
    for f, m in trusted:
        if f.is_zero():
            raise ZeroPolynomial("trusted factor list contains the zero polynomial")
        if not isinstance(m, int) or m < 1:
            raise ValueError(f"trusted multiplicity must be a positive integer, got {m!r}")
        product = product * f ** m
        u, g = f.monic()
        unit = unit * u ** m
        if not g.is_constant():
            factors.append(Factor(g, m, False))
    if p is not None:
        if p.is_zero():
            raise ZeroPolynomial("cannot factor the zero polynomial")
        if product != p:
            raise ProductMismatch(f"trusted factors multiply to {product}, expected {p}")
    factors = _merge(factors)
    for i, a in enumerate(factors):
        for b in factors[i + 1:]:
            if not gcd(a.poly, b.poly).is_constant():
                raise NotCoprime(f"trusted factors {a.poly} and {b.poly} share a common divisor")
    return FactoredPoly(unit, _sorted_factors(factors), trusted=True)
