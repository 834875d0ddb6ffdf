"""Decision procedures for unitary equivalence of polynomially generated submodules.

Submodules are given by Beurling forms ``p * K`` of their polynomial parts.
Two of them are unitarily equivalent exactly when the cofactor ideals agree
and, after cancelling ``phi = gcd(p, q)``, the quotients ``r = p/phi`` and
``s = q/phi`` live in Hardy variables and are modulus equivalent: there are
polynomials ``u, v`` without zeros in the open polydisk such that
``|r u| = |s v|`` on the torus.  Yes verdicts carry the certificate
``(r u, s v, phi K)``.
"""

from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import UndecidedStability, ZeroPolynomial
from .factor import FactoredPoly, factor
from .ideal import BeurlingForm, IdealGens, gcd, ideal_equal
from .poly_core import (
    Exponent,
    GaussianRational,
    Polynomial,
    div_exact,
    exp_div,
    exponent,
)
from .stability import DEFAULT_EPS, StabilityVerdict, has_zero_in_open_polydisk
from .weights import WeightSignature


class Verdict(str, Enum):
    YES = "Yes"
    NO = "No"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class Certificate:
    """Hardy-variable polynomials ``p_tilde, q_tilde`` and the ideal ``G``."""

    p_tilde: Polynomial
    q_tilde: Polynomial
    G: IdealGens


@dataclass(frozen=True)
class Multipliers:
    """Stable ``u, v`` with ``|r u| = |s v|`` on the torus."""

    u: Polynomial
    v: Polynomial
    exact: bool = True


@dataclass
class EquivalenceVerdict:
    status: Verdict
    certificate: Certificate | None = None
    multipliers: Multipliers | None = None
    obstruction: str | None = None
    failing_condition: str | None = None
    assumptions: list[str] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def yes(self) -> bool:
        return self.status is Verdict.YES

    @property
    def no(self) -> bool:
        return self.status is Verdict.NO

    @property
    def undecided(self) -> bool:
        return self.status is Verdict.UNDECIDED

    def to_json(self) -> dict:
        out: dict = {"status": self.status.value}
        if self.certificate is not None:
            c = self.certificate
            out["certificate"] = {
                "p_tilde": str(c.p_tilde),
                "q_tilde": str(c.q_tilde),
                "G": [str(g) for g in c.G.generators],
            }
        else:
            out["certificate"] = None
        if self.multipliers is not None:
            out["multipliers"] = {"u": str(self.multipliers.u), "v": str(self.multipliers.v)}
        out["obstruction"] = self.obstruction
        if self.failing_condition is not None:
            out["failing_condition"] = self.failing_condition
        out["assumptions"] = list(self.assumptions)
        if self.metadata:
            out["metadata"] = dict(self.metadata)
        return out


# ---------------------------------------------------------------------------
# reflection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Reflection:
    """``unit * poly`` equals ``z^d * conj(p)(1/z)`` with its monomial content removed."""

    poly: Polynomial
    unit: GaussianRational

    def scaled(self) -> Polynomial:
        return self.poly.scale(self.unit)


def _raw_reflection(p: Polynomial) -> Polynomial:
    d = p.multidegree()
    dexp = exponent(d)
    return Polynomial._new({exp_div(dexp, m): c.conjugate() for m, c in p.items()})


def reflect(p: Polynomial) -> Reflection:
    """Per-variable reversal with conjugated coefficients; ``|reflect(p)| ~ |p|`` on the torus."""
    if p.is_zero():
        raise ZeroPolynomial("reflection of the zero polynomial")
    raw = _raw_reflection(p)
    content = raw.monomial_content()
    if content:
        raw = raw.div_exponent(content)
    unit, poly = raw.monic()
    return Reflection(poly, unit)


def _sharp_product(a: Polynomial) -> tuple[Polynomial, Exponent]:
    """``a * raw_reflection(a)`` and the shift ``z^d`` that makes it ``a * a^#``."""
    return a * _raw_reflection(a), exponent(a.multidegree())


def torus_modulus_equal(a: Polynomial, b: Polynomial) -> bool:
    """Exact test of ``|a| = |b|`` on the torus via ``a a^# = b b^#`` as Laurent polynomials."""
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    pa, da = _sharp_product(a)
    pb, db = _sharp_product(b)
    return pa.mul_exponent(db) == pb.mul_exponent(da)


# ---------------------------------------------------------------------------
# stability helpers
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=4096)
def _stability(w: Polynomial, eps: float, seed: int) -> StabilityVerdict:
    return has_zero_in_open_polydisk(w, eps=eps, seed=seed)


def _factor(p: Polynomial, trusted: FactoredPoly | None) -> FactoredPoly:
    if trusted is not None:
        if trusted.expand() != p:
            from .errors import ProductMismatch

            raise ProductMismatch("trusted factorization does not multiply back to the input")
        return trusted
    return factor(p)


def _factor_notes(fp: FactoredPoly) -> list[str]:
    notes = []
    if fp.trusted:
        notes.append("irreducibility of the supplied factors is user-asserted")
    elif not fp.all_certified:
        notes.append(
            "some factors exceed the certified factorization range and were treated as irreducible"
        )
    return notes


def stable_free_part(
    p: Polynomial,
    factored: FactoredPoly | None = None,
    eps: float = DEFAULT_EPS,
    seed: int = 0,
) -> tuple[Polynomial, Polynomial]:
    """Split ``p = stable_part * p_star`` with ``p_star`` the product of factors vanishing in the open polydisk."""
    if p.is_zero():
        raise ZeroPolynomial("stable-free part of the zero polynomial")
    fp = _factor(p, factored)
    p_star = Polynomial.one()
    stable = Polynomial.const(fp.unit)
    for f in fp.factors:
        v = _stability(f.poly, eps, seed)
        if v.has_zero:
            p_star = p_star * f.poly ** f.mult
        elif v.zero_free:
            stable = stable * f.poly ** f.mult
        else:
            raise UndecidedStability(f.poly, v.method)
    return p_star, stable


# ---------------------------------------------------------------------------
# modulus equivalence
# ---------------------------------------------------------------------------


@dataclass
class _Side:
    """Bookkeeping for one argument of the modulus-equivalence matcher."""

    unit: GaussianRational
    stable: Polynomial  # zero-free factors (times nothing else)
    discarded: Polynomial  # product of scaled reflections of discarded factors
    survivors: list[tuple[Polynomial, int, Reflection]]


def _classify(
    fp: FactoredPoly, eps: float, seed: int
) -> tuple[_Side | None, str | None]:
    side = _Side(fp.unit, Polynomial.one(), Polynomial.one(), [])
    for f in fp.factors:
        v = _stability(f.poly, eps, seed)
        if v.undecided:
            return None, f"stability of factor {f.poly} is undecided ({v.method})"
        if v.zero_free:
            side.stable = side.stable * f.poly ** f.mult
            continue
        refl = reflect(f.poly)
        if refl.poly.is_constant():
            side.discarded = side.discarded * Polynomial.const(refl.unit) ** f.mult
            continue
        rv = _stability(refl.poly, eps, seed)
        if rv.undecided:
            return None, f"stability of the reflection {refl.poly} of factor {f.poly} is undecided"
        if rv.zero_free:
            side.discarded = side.discarded * refl.scaled() ** f.mult
        else:
            side.survivors.append((f.poly, f.mult, refl))
    return side, None


def _class_key(f: Polynomial, refl: Reflection) -> frozenset:
    return frozenset((f, refl.poly))


def _match(
    rs: list[tuple[Polynomial, int, Reflection]], ss: list[tuple[Polynomial, int, Reflection]]
):
    """Pair survivors class by class.

    Returns ``(y, unmatched_r, unmatched_s)`` where the constant ``y``
    multiplies the ``s`` side so that matched factors balance.
    """
    y = Polynomial.one()
    classes: dict[frozenset, dict[str, Counter]] = {}
    refls: dict[Polynomial, Reflection] = {}
    for tag, items in (("r", rs), ("s", ss)):
        for f, m, refl in items:
            entry = classes.setdefault(_class_key(f, refl), {"r": Counter(), "s": Counter()})
            entry[tag][f] += m
            refls[f] = refl
    unmatched_r: list[tuple[Polynomial, int]] = []
    unmatched_s: list[tuple[Polynomial, int]] = []
    for entry in classes.values():
        cr, cs = entry["r"], entry["s"]
        # identical factors cancel directly
        for f in list(cr):
            common = min(cr[f], cs.get(f, 0))
            if common:
                cr[f] -= common
                cs[f] -= common
        # a factor against its reflection: |f| = |unit_f| * |reflection|
        for f in list(cr):
            for g in list(cs):
                k = min(cr[f], cs[g])
                if not k:
                    continue
                cr[f] -= k
                cs[g] -= k
                y = y * Polynomial.const(refls[f].unit) ** k
        unmatched_r.extend((f, m) for f, m in cr.items() if m > 0)
        unmatched_s.extend((g, m) for g, m in cs.items() if m > 0)
    return y, unmatched_r, unmatched_s


def outer_factor(f: Polynomial, digits: int = 60) -> Polynomial:
    """Zero-free polynomial with ``|outer_factor(f)| = |f|`` on the circle, to about ``10**-40``.

    ``f`` must be univariate.  Roots inside the disk are replaced by their
    reflections; the result has Gaussian-rational coefficients rounded from a
    high-precision evaluation, so the identity is approximate when the roots
    are irrational.
    """
    import mpmath

    (x,) = f.support_vars()
    coeffs = f.univariate_coeffs(x)
    with mpmath.workdps(digits):
        mc = [
            mpmath.mpc(mpmath.mpf(c.re.numerator) / c.re.denominator, mpmath.mpf(c.im.numerator) / c.im.denominator)
            for c in coeffs
        ]
        roots = mpmath.polyroots(list(reversed(mc)), maxsteps=400, extraprec=4 * digits)
        out = [mc[-1]]
        for a in roots:
            if abs(a) < 1:
                lin = [mpmath.mpc(1), -mpmath.conj(a)]  # 1 - conj(a) z
            else:
                lin = [-a, mpmath.mpc(1)]  # z - a
            nxt = [mpmath.mpc(0)] * (len(out) + 1)
            for i, c in enumerate(out):
                nxt[i] += c * lin[0]
                nxt[i + 1] += c * lin[1]
            out = nxt
        scale = 2 ** 140
        terms = {}
        for k, c in enumerate(out):
            re = Fraction(int(mpmath.nint(c.real * scale)), scale)
            im = Fraction(int(mpmath.nint(c.imag * scale)), scale)
            if re or im:
                terms[exponent({x: k}) if k else ()] = GaussianRational(re, im)
    return Polynomial(terms)


def modulus_equivalent(
    r: Polynomial,
    s: Polynomial,
    eps: float = DEFAULT_EPS,
    seed: int = 0,
    factored_r: FactoredPoly | None = None,
    factored_s: FactoredPoly | None = None,
) -> EquivalenceVerdict:
    """Decide ``r ~ s`` (modulus equivalence) and build the multipliers ``u, v``."""
    if r.is_zero() or s.is_zero():
        raise ZeroPolynomial("modulus equivalence of the zero polynomial")
    fr, fs = _factor(r, factored_r), _factor(s, factored_s)
    assumptions = _factor_notes(fr) + [n for n in _factor_notes(fs) if n not in _factor_notes(fr)]
    side_r, why_r = _classify(fr, eps, seed)
    side_s, why_s = _classify(fs, eps, seed)
    if side_r is None or side_s is None:
        return EquivalenceVerdict(
            Verdict.UNDECIDED,
            obstruction=why_r or why_s,
            assumptions=assumptions,
        )
    y, un_r, un_s = _match(side_r.survivors, side_s.survivors)
    exact = True
    approx_r = Polynomial.one()
    approx_s = Polynomial.one()
    leftovers = []
    for f, m in un_r:
        if len(f.support_vars()) == 1:
            approx_s = approx_s * outer_factor(f) ** m
        else:
            leftovers.append(("r", f, m))
    for g, m in un_s:
        if len(g.support_vars()) == 1:
            approx_r = approx_r * outer_factor(g) ** m
        else:
            leftovers.append(("s", g, m))
    if leftovers:
        desc = ", ".join(f"({f})" + (f"^{m}" if m > 1 else "") + f" in {tag}" for tag, f, m in leftovers)
        return EquivalenceVerdict(
            Verdict.NO,
            obstruction=(
                f"unmatched factors with zeros in the open polydisk whose reflections also vanish there: {desc}; "
                "such a factor divides neither a zero-free multiplier nor its reflection, so the torus "
                "moduli cannot be balanced"
            ),
            failing_condition="modulus equivalence of r and s",
            assumptions=assumptions,
            metadata={"reasoning": "unique factorization of (r u)(r u)^# = c (s v)(s v)^#"},
        )
    if un_r or un_s:
        exact = False
        assumptions.append(
            "one-variable factors with roots on both sides of the circle are balanced by outer factors "
            "with rounded coefficients (no Gaussian-rational multiplier exists); the torus identity holds to about 1e-40"
        )
    # |r u| = |s v|: each side absorbs the other's stable part, the reflections of
    # the other's discarded factors, and the other's unit
    u = Polynomial.const(side_s.unit) * side_s.stable * side_s.discarded * approx_r
    v = Polynomial.const(side_r.unit) * side_r.stable * side_r.discarded * y * approx_s
    metadata = {}
    if exact:
        if not torus_modulus_equal(r * u, s * v):
            return EquivalenceVerdict(
                Verdict.UNDECIDED,
                obstruction="internal check failed: assembled multipliers do not balance the torus moduli",
                assumptions=assumptions,
            )
        metadata["torus_identity"] = "exact"
    else:
        metadata["torus_identity"] = "approximate"
    return EquivalenceVerdict(
        Verdict.YES,
        multipliers=Multipliers(u, v, exact),
        assumptions=assumptions,
        metadata=metadata,
    )


# ---------------------------------------------------------------------------
# unitary equivalence
# ---------------------------------------------------------------------------


def _normalize_form(form: BeurlingForm, eps: float, seed: int, factored=None) -> tuple[Polynomial, list[str]]:
    p_star, _ = stable_free_part(form.gcd_part, factored, eps, seed)
    notes = []
    if p_star != form.gcd_part.monic()[1]:
        notes.append(f"gcd part {form.gcd_part} replaced by its stable-free part {p_star}")
    return p_star, notes


def unitarily_equivalent(
    M: BeurlingForm,
    N: BeurlingForm,
    sig: WeightSignature,
    eps: float = DEFAULT_EPS,
    seed: int = 0,
    factored_p: FactoredPoly | None = None,
    factored_q: FactoredPoly | None = None,
) -> EquivalenceVerdict:
    """Decide unitary equivalence of the submodules generated by ``p K`` and ``q L``."""
    M.validate()
    N.validate()
    K, L = M.cofactor, N.cofactor
    if not ideal_equal(K, L):
        return EquivalenceVerdict(
            Verdict.NO,
            obstruction="the cofactor ideals differ (reduced Groebner bases disagree)",
            failing_condition="K = L",
        )
    try:
        p, notes_p = _normalize_form(M, eps, seed, factored_p)
        q, notes_q = _normalize_form(N, eps, seed, factored_q)
    except UndecidedStability as exc:
        return EquivalenceVerdict(Verdict.UNDECIDED, obstruction=str(exc))
    phi = gcd(p, q)
    r = div_exact(p, phi)
    s = div_exact(q, phi)
    assumptions = notes_p + notes_q
    meta = {"phi": str(phi), "r": str(r), "s": str(s)}
    bad = sorted(sig.bergman(r.support_vars() | s.support_vars()))
    if bad:
        return EquivalenceVerdict(
            Verdict.NO,
            obstruction=(
                f"after cancelling phi = {phi}, the quotients r = {r} and s = {s} involve the "
                f"Bergman variables {['z%d' % b for b in bad]}"
            ),
            failing_condition="supp(r) and supp(s) lie in the Hardy set",
            assumptions=assumptions,
            metadata=meta,
        )
    modeq = modulus_equivalent(r, s, eps, seed)
    assumptions += modeq.assumptions
    meta.update(modeq.metadata)
    if not modeq.yes:
        return EquivalenceVerdict(
            modeq.status,
            obstruction=modeq.obstruction,
            failing_condition=modeq.failing_condition,
            assumptions=assumptions,
            metadata=meta,
        )
    mult = modeq.multipliers
    cert = Certificate(r * mult.u, s * mult.v, K.scaled(phi))
    meta["u"] = str(mult.u)
    meta["v"] = str(mult.v)
    return EquivalenceVerdict(
        Verdict.YES,
        certificate=cert,
        multipliers=mult,
        assumptions=assumptions,
        metadata=meta,
    )


def unitarily_equivalent_principal(
    p: Polynomial,
    q: Polynomial,
    sig: WeightSignature,
    eps: float = DEFAULT_EPS,
    seed: int = 0,
    factored_p: FactoredPoly | None = None,
    factored_q: FactoredPoly | None = None,
) -> EquivalenceVerdict:
    """Decide unitary equivalence of the cyclic submodules ``[p]`` and ``[q]``."""
    if p.is_zero() or q.is_zero():
        raise ZeroPolynomial("principal submodule of the zero polynomial")
    try:
        p_star, _ = stable_free_part(p, factored_p, eps, seed)
        q_star, _ = stable_free_part(q, factored_q, eps, seed)
    except UndecidedStability as exc:
        return EquivalenceVerdict(Verdict.UNDECIDED, obstruction=str(exc))
    one = IdealGens.of([Polynomial.one()])
    verdict = unitarily_equivalent(BeurlingForm(p_star, one), BeurlingForm(q_star, one), sig, eps, seed)
    verdict.metadata.setdefault("p_star", str(p_star))
    verdict.metadata.setdefault("q_star", str(q_star))
    for fp in (factored_p, factored_q):
        if fp is not None:
            for note in _factor_notes(fp):
                if note not in verdict.assumptions:
                    verdict.assumptions.append(note)
    return verdict


def monomial_orbit_exponent(gamma: Exponent, sig: WeightSignature) -> Exponent:
    """Keep the Bergman coordinates of ``gamma`` and zero the Hardy ones."""
    return tuple((n, e) for n, e in gamma if not sig.is_hardy(n))


__all__ = [
    "Certificate",
    "EquivalenceVerdict",
    "Multipliers",
    "Reflection",
    "Verdict",
    "modulus_equivalent",
    "monomial_orbit_exponent",
    "outer_factor",
    "reflect",
    "stable_free_part",
    "torus_modulus_equal",
    "unitarily_equivalent",
    "unitarily_equivalent_principal",
]
