"""Multivariate gcd, Beurling forms, and ideal arithmetic via Groebner bases."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import _univariate as uni
from .errors import AllZero, InvalidBeurlingForm
from .poly_core import (
    Polynomial,
    div_exact,
    exp_div,
    exp_divides,
    exp_gcd,
    exp_key,
    exp_lcm,
    exp_mul,
)

# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdealGens:
    """Finite generating set of an ideal; zero generators are dropped."""

    generators: tuple[Polynomial, ...]
    variable_universe: frozenset[int]

    @staticmethod
    def of(gens: Iterable[Polynomial], universe: Iterable[int] = ()) -> "IdealGens":
        polys = (g if isinstance(g, Polynomial) else Polynomial.const(g) for g in gens)
        kept = tuple(g for g in polys if not g.is_zero())
        vs = set(universe)
        for g in kept:
            vs |= g.support_vars()
        return IdealGens(kept, frozenset(vs))

    def is_zero(self) -> bool:
        return not self.generators

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def scaled(self, f: Polynomial) -> "IdealGens":
        """The ideal ``f * self``."""
        return IdealGens.of((f * g for g in self.generators), self.variable_universe)


@dataclass(frozen=True)
class BeurlingForm:
    """Presentation ``gcd_part * cofactor`` of a nonzero polynomial ideal."""

    gcd_part: Polynomial
    cofactor: IdealGens

    def validate(self) -> None:
        if self.gcd_part.is_zero():
            raise InvalidBeurlingForm("gcd part must be nonzero")
        if self.cofactor.is_zero():
            raise InvalidBeurlingForm("cofactor ideal must be nonzero")
        if not gcd_many(self.cofactor.generators).is_constant():
            raise InvalidBeurlingForm("cofactor generators share a nonconstant common divisor")

    def generators(self) -> IdealGens:
        return self.cofactor.scaled(self.gcd_part)


# ---------------------------------------------------------------------------
# gcd
# ---------------------------------------------------------------------------


def _coeffs_in(p: Polynomial, x: int) -> list[Polynomial]:
    """Dense coefficient list of ``p`` in ``z_x`` (lowest first), coefficients free of ``z_x``."""
    parts = p.as_univariate(x)
    top = max(parts)
    zero = Polynomial.zero()
    return [parts.get(k, zero) for k in range(top + 1)]


def _from_coeffs(coeffs: Sequence[Polynomial], x: int) -> Polynomial:
    return Polynomial.from_univariate(x, {k: c for k, c in enumerate(coeffs) if not c.is_zero()})


def _content(coeffs: Sequence[Polynomial]) -> Polynomial:
    return gcd_many([c for c in coeffs if not c.is_zero()])


def _prem(a: list[Polynomial], b: list[Polynomial]) -> list[Polynomial]:
    """Pseudo-remainder ``lc(b)^(deg a - deg b + 1) * a mod b``."""
    r = list(a)
    lb = b[-1]
    n = len(b) - 1
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= n:
        lr = r[-1]
        shift = len(r) - 1 - n
        r = [c * lb for c in r]
        for k, c in enumerate(b):
            r[shift + k] = r[shift + k] - lr * c
        while r and r[-1].is_zero():
            r.pop()
        e -= 1
    if e > 0 and r:
        f = lb ** e
        r = [c * f for c in r]
    return r


def _primitive_part(coeffs: list[Polynomial]) -> list[Polynomial]:
    cont = _content(coeffs)
    if cont.is_constant():
        return coeffs
    return [div_exact(c, cont) for c in coeffs]


def _subresultant_gcd(a: list[Polynomial], b: list[Polynomial]) -> list[Polynomial]:
    """Gcd (up to content) of two primitive polynomials in the main variable."""
    if len(a) < len(b):
        a, b = b, a
    g = Polynomial.one()
    h = Polynomial.one()
    while True:
        delta = len(a) - len(b)
        r = _prem(a, b)
        if not r:
            return _primitive_part(b)
        if len(r) == 1:
            return [Polynomial.one()]
        a = b
        d = g * h ** delta
        b = [div_exact(c, d) for c in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = div_exact(g ** delta, h ** (delta - 1))


def _normalize(p: Polynomial) -> Polynomial:
    return p.monic()[1]


def gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd of two polynomials (zero only if both are zero)."""
    if a.is_zero():
        return _normalize(b) if not b.is_zero() else b
    if b.is_zero():
        return _normalize(a)
    if a.is_constant() or b.is_constant():
        return Polynomial.one()
    # pull out the common monomial content first
    ca, cb = a.monomial_content(), b.monomial_content()
    mono = exp_gcd(ca, cb)
    if ca:
        a = a.div_exponent(ca)
    if cb:
        b = b.div_exponent(cb)
    core = _gcd_no_monomial(a, b)
    if mono:
        core = core.mul_exponent(mono)
    return core


def _gcd_no_monomial(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_constant() or b.is_constant():
        return Polynomial.one()
    va, vb = a.support_vars(), b.support_vars()
    # a variable occurring in only one argument splits off through that argument's content
    only_a = va - vb
    if only_a:
        x = min(only_a)
        return gcd_many([*(c for c in a.as_univariate(x).values()), b])
    only_b = vb - va
    if only_b:
        x = min(only_b)
        return gcd_many([a, *(c for c in b.as_univariate(x).values())])
    if len(va) == 1:
        (x,) = va
        g = uni.gcd(a.univariate_coeffs(x), b.univariate_coeffs(x))
        return _from_coeffs([Polynomial.const(c) for c in g], x)
    # main variable: the one of lowest combined degree keeps the PRS short
    x = min(va, key=lambda v: (a.degree_in(v) + b.degree_in(v), v))
    ac, bc = _coeffs_in(a, x), _coeffs_in(b, x)
    cont = gcd(_content(ac), _content(bc))
    g = _subresultant_gcd(_primitive_part(ac), _primitive_part(bc))
    return _normalize(cont * _from_coeffs(g, x))


def gcd_many(ps: Iterable[Polynomial]) -> Polynomial:
    """Monic gcd of the nonzero entries of ``ps``."""
    nonzero = [p for p in ps if not p.is_zero()]
    if not nonzero:
        raise AllZero("gcd of an all-zero list")
    # small polynomials first: the running gcd then shrinks fast
    nonzero.sort(key=lambda p: (p.total_degree(), len(p)))
    g = _normalize(nonzero[0])
    for p in nonzero[1:]:
        if g.is_constant():
            break
        g = gcd(g, p)
    return g


def beurling_form(gens: IdealGens) -> BeurlingForm:
    """Split a nonzero ideal as ``p * L`` with ``p`` the gcd and ``L`` gcd-free."""
    g = gcd_many(gens.generators)
    cof = IdealGens.of((div_exact(f, g) for f in gens.generators), gens.variable_universe)
    form = BeurlingForm(g, cof)
    if not gcd_many(cof.generators).is_constant():
        raise ArithmeticError("internal error: cofactor gcd is not constant")
    return form


# ---------------------------------------------------------------------------
# Groebner bases (graded-lex, z1 > z2 > ...)
# ---------------------------------------------------------------------------


class _Basis:
    """Mutable reducer list used during Buchberger's algorithm."""

    def __init__(self):
        self.polys: list[dict] = []
        self.lms: list[tuple] = []

    def add(self, terms: dict) -> int:
        lm = max(terms, key=exp_key)
        inv = terms[lm].inverse()
        terms = {m: c * inv for m, c in terms.items()}
        self.polys.append(terms)
        self.lms.append(lm)
        return len(self.polys) - 1


def _reduce(terms: dict, polys: list[dict], lms: list[tuple], active: Iterable[int]) -> dict:
    """Full normal form of ``terms`` modulo the monic reducers with the given indices."""
    active = list(active)
    rem = dict(terms)
    out: dict = {}
    while rem:
        m = max(rem, key=exp_key)
        c = rem[m]
        for i in active:
            lm = lms[i]
            if exp_divides(lm, m):
                t = exp_div(m, lm)
                for mg, cg in polys[i].items():
                    key = exp_mul(t, mg)
                    val = rem.get(key)
                    val = -(c * cg) if val is None else val - c * cg
                    if val:
                        rem[key] = val
                    else:
                        rem.pop(key, None)
                break
        else:
            out[m] = c
            del rem[m]
    return out


def _spoly(f: dict, lf: tuple, g: dict, lg: tuple) -> dict:
    lcm = exp_lcm(lf, lg)
    tf, tg = exp_div(lcm, lf), exp_div(lcm, lg)
    out: dict = {}
    for m, c in f.items():
        out[exp_mul(tf, m)] = c
    for m, c in g.items():
        key = exp_mul(tg, m)
        val = out.get(key)
        val = -c if val is None else val - c
        if val:
            out[key] = val
        else:
            out.pop(key, None)
    return out


def _buchberger(gens: Sequence[Polynomial]) -> tuple[list[dict], list[tuple]]:
    basis = _Basis()
    pairs: set[tuple[int, int]] = set()
    active: list[int] = []
    # start from an inter-reduced copy to keep the pair set small
    for g in sorted(gens, key=lambda p: exp_key(p.leading_exponent())):
        r = _reduce(dict(g.items()), basis.polys, basis.lms, active)
        if r:
            _insert(basis, r, active, pairs)
    while pairs:
        i, j = min(pairs, key=lambda ij: (exp_key(exp_lcm(basis.lms[ij[0]], basis.lms[ij[1]])), ij))
        pairs.discard((i, j))
        li, lj = basis.lms[i], basis.lms[j]
        lcm = exp_lcm(li, lj)
        # product criterion: coprime leading monomials
        if not exp_gcd(li, lj):
            continue
        # chain criterion
        if any(
            k != i
            and k != j
            and exp_divides(basis.lms[k], lcm)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in active
        ):
            continue
        s = _spoly(basis.polys[i], li, basis.polys[j], lj)
        r = _reduce(s, basis.polys, basis.lms, active)
        if r:
            _insert(basis, r, active, pairs)
    return [basis.polys[k] for k in active], [basis.lms[k] for k in active]


def _insert(basis: _Basis, r: dict, active: list[int], pairs: set) -> None:
    idx = basis.add(r)
    for k in list(active):
        pairs.add((min(k, idx), max(k, idx)))
    active.append(idx)


def groebner(gens: IdealGens) -> IdealGens:
    """Reduced graded-lex Groebner basis: monic, sorted by leading monomial (largest first)."""
    if gens.is_zero():
        return gens
    if any(g.is_constant() for g in gens.generators):
        return IdealGens((Polynomial.one(),), gens.variable_universe)
    polys, lms = _buchberger(gens.generators)
    # minimalize: drop elements whose leading monomial is divisible by another one
    keep = []
    for k, lm in enumerate(lms):
        dominated = False
        for j, other in enumerate(lms):
            if j == k or not exp_divides(other, lm):
                continue
            if other != lm or j < k:
                dominated = True
                break
        if not dominated:
            keep.append(k)
    # fully inter-reduce
    reduced = []
    for k in keep:
        others = [j for j in keep if j != k]
        tail = dict(polys[k])
        lead = tail.pop(lms[k])
        r = _reduce(tail, polys, lms, others)
        r[lms[k]] = lead
        reduced.append(r)
    out = [Polynomial._new(r) for r in reduced]
    out.sort(key=lambda p: exp_key(p.leading_exponent()), reverse=True)
    return IdealGens(tuple(out), gens.variable_universe)


def normal_form(f: Polynomial, basis: IdealGens) -> Polynomial:
    """Remainder of ``f`` on division by a Groebner basis."""
    polys = [dict(g.monic()[1].items()) for g in basis.generators]
    lms = [g.leading_exponent() for g in basis.generators]
    return Polynomial._new(_reduce(dict(f.items()), polys, lms, range(len(polys))))


def ideal_equal(a: IdealGens, b: IdealGens) -> bool:
    """Equality of ideals, decided by comparing reduced Groebner bases."""
    universe = a.variable_universe | b.variable_universe
    ga = groebner(IdealGens(a.generators, universe))
    gb = groebner(IdealGens(b.generators, universe))
    return ga.generators == gb.generators


def ideal_member(f: Polynomial, a: IdealGens) -> bool:
    if f.is_zero():
        return True
    if a.is_zero():
        return False
    return normal_form(f, groebner(a)).is_zero()


def ideal_contains(a: IdealGens, b: IdealGens) -> bool:
    """True when every generator of ``b`` lies in the ideal ``a``."""
    if b.is_zero():
        return True
    if a.is_zero():
        return False
    ga = groebner(a)
    return all(normal_form(f, ga).is_zero() for f in b.generators)


__all__ = [
    "BeurlingForm",
    "IdealGens",
    "beurling_form",
    "gcd",
    "gcd_many",
    "groebner",
    "ideal_contains",
    "ideal_equal",
    "ideal_member",
    "normal_form",
]
