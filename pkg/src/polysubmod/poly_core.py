"""Exact sparse multivariate polynomials over the Gaussian rationals.

Variables form one unbounded family ``z1, z2, ...`` indexed by positive
integers.  A monomial (an *exponent*) is stored canonically as a sorted tuple
of ``(variable, power)`` pairs with no zero powers, so ``z1**2 * z3`` is
``((1, 2), (3, 1))``.  The fixed monomial order is graded lexicographic with
``z1 > z2 > z3 > ...``.

All values are immutable once built and safe to share between threads.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Union

import numpy as np

from .errors import DivByZero, NotDivisible, ZeroPolynomial

Exponent = tuple  # tuple[tuple[int, int], ...]

ONE_EXP: Exponent = ()


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------


class GaussianRational:
    """Complex number ``re + im*i`` with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            if im:
                raise TypeError("cannot combine a GaussianRational real part with im")
            self.re, self.im = re.re, re.im
            return
        if isinstance(re, complex):
            if im:
                raise TypeError("complex input carries its own imaginary part")
            self.re, self.im = Fraction(re.real), Fraction(re.imag)
            return
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _new(re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(GaussianRational)
        obj.re = re
        obj.im = im
        return obj

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._new(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._new(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._new(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if not self.im and not o.im:
            return GaussianRational._new(self.re * o.re, _FZERO)
        return GaussianRational._new(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return GaussianRational._new(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = GR_ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "GaussianRational":
        d = self.abs2()
        if not d:
            raise DivByZero("division by zero Gaussian rational")
        return GaussianRational._new(self.re / d, -self.im / d)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._new(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    # predicates / conversions --------------------------------------------
    def is_real(self) -> bool:
        return not self.im

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __eq__(self, other) -> bool:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self) -> str:
        from .parser import format_coefficient

        return format_coefficient(self)


_FZERO = Fraction(0)
GR_ZERO = GaussianRational._new(Fraction(0), Fraction(0))
GR_ONE = GaussianRational._new(Fraction(1), Fraction(0))
GR_I = GaussianRational._new(Fraction(0), Fraction(1))

Coefficient = Union[GaussianRational, int, Fraction, complex]


def _coerce(x) -> GaussianRational | None:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Rational)):
        return GaussianRational._new(Fraction(x), _FZERO)
    if isinstance(x, (float, complex)):
        return GaussianRational(complex(x))
    return None


def gr(x) -> GaussianRational:
    """Coerce an int, Fraction, float or complex to a GaussianRational (exactly)."""
    o = _coerce(x)
    if o is None:
        raise TypeError(f"cannot convert {type(x).__name__} to GaussianRational")
    return o


# ---------------------------------------------------------------------------
# Exponents (monomials)
# ---------------------------------------------------------------------------


def exponent(data: Mapping[int, int] | Iterable[tuple[int, int]] = ()) -> Exponent:
    """Build a canonical exponent from ``{variable: power}`` or ``(variable, power)`` pairs."""
    items = data.items() if isinstance(data, Mapping) else data
    acc: dict[int, int] = {}
    for v, e in items:
        if not isinstance(v, int) or v < 1:
            raise ValueError(f"variable index must be a positive integer, got {v!r}")
        if not isinstance(e, int) or e < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {e!r}")
        if e:
            acc[v] = acc.get(v, 0) + e
    return tuple(sorted(acc.items()))


def exponent_from_sequence(seq: Iterable[int]) -> Exponent:
    """``(a1, a2, ...)`` -> canonical exponent, position k meaning variable k."""
    return exponent((k, int(a)) for k, a in enumerate(seq, start=1))


def exp_mul(a: Exponent, b: Exponent) -> Exponent:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def exp_divides(b: Exponent, a: Exponent) -> bool:
    """True when the monomial ``b`` divides ``a``."""
    if not b:
        return True
    da = dict(a)
    return all(da.get(v, 0) >= e for v, e in b)


def exp_div(a: Exponent, b: Exponent) -> Exponent:
    d = dict(a)
    for v, e in b:
        r = d.get(v, 0) - e
        if r < 0:
            raise NotDivisible("monomial does not divide")
        if r:
            d[v] = r
        else:
            del d[v]
    return tuple(sorted(d.items()))


def exp_lcm(a: Exponent, b: Exponent) -> Exponent:
    d = dict(a)
    for v, e in b:
        if e > d.get(v, 0):
            d[v] = e
    return tuple(sorted(d.items()))


def exp_gcd(a: Exponent, b: Exponent) -> Exponent:
    db = dict(b)
    return tuple((v, min(e, db[v])) for v, e in a if v in db)


def exp_degree(a: Exponent) -> int:
    return sum(e for _, e in a)


@functools.lru_cache(maxsize=1 << 16)
def exp_key(a: Exponent) -> tuple:
    """Sort key realizing graded-lex order with z1 > z2 > ...; larger key = larger monomial."""
    if not a:
        return (0, ())
    dense = [0] * a[-1][0]
    for v, e in a:
        dense[v - 1] = e
    return (sum(dense), tuple(dense))


# ---------------------------------------------------------------------------
# Points
# ---------------------------------------------------------------------------

TORUS_TOL = 1e-12


@dataclass(frozen=True)
class Point:
    """Finitely supported complex point; unlisted coordinates are 0."""

    coords: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coords", {int(k): complex(v) for k, v in dict(self.coords).items()})

    def __getitem__(self, n: int) -> complex:
        return self.coords.get(n, 0j)

    @property
    def in_open_polydisk(self) -> bool:
        return all(abs(v) < 1 for v in self.coords.values())

    @property
    def on_torus(self) -> bool:
        return all(abs(abs(v) - 1.0) <= TORUS_TOL for v in self.coords.values())


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class Polynomial:
    """Immutable sparse polynomial: a finite map exponent -> nonzero GaussianRational."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | Iterable | None = None):
        acc: dict[Exponent, GaussianRational] = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for m, c in items:
                key = exponent(m)
                val = acc.get(key, GR_ZERO) + gr(c)
                if val:
                    acc[key] = val
                else:
                    acc.pop(key, None)
        self._terms = acc
        self._hash = None

    @staticmethod
    def _new(terms: dict) -> "Polynomial":
        obj = object.__new__(Polynomial)
        obj._terms = terms
        obj._hash = None
        return obj

    # constructors -------------------------------------------------------
    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial._new({})

    @staticmethod
    def one() -> "Polynomial":
        return Polynomial._new({ONE_EXP: GR_ONE})

    @staticmethod
    def const(c: Coefficient) -> "Polynomial":
        c = gr(c)
        return Polynomial._new({ONE_EXP: c} if c else {})

    @staticmethod
    def var(n: int) -> "Polynomial":
        return Polynomial._new({exponent({n: 1}): GR_ONE})

    @staticmethod
    def monomial(exp: Exponent | Mapping[int, int], c: Coefficient = 1) -> "Polynomial":
        c = gr(c)
        return Polynomial._new({exponent(exp): c} if c else {})

    # read access ----------------------------------------------------------
    @property
    def terms(self) -> Mapping[Exponent, GaussianRational]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def sorted_terms(self) -> list[tuple[Exponent, GaussianRational]]:
        """Terms in descending graded-lex order."""
        return sorted(self._terms.items(), key=lambda t: exp_key(t[0]), reverse=True)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Exponent, GaussianRational]]:
        return iter(self.sorted_terms())

    def coeff(self, m: Exponent | Mapping[int, int]) -> GaussianRational:
        key = m if isinstance(m, tuple) else exponent(m)
        return self._terms.get(key, GR_ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE_EXP in self._terms)

    def constant_term(self) -> GaussianRational:
        return self._terms.get(ONE_EXP, GR_ZERO)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def leading_term(self) -> tuple[Exponent, GaussianRational]:
        if not self._terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        m = max(self._terms, key=exp_key)
        return m, self._terms[m]

    def leading_exponent(self) -> Exponent:
        return self.leading_term()[0]

    def leading_coeff(self) -> GaussianRational:
        return self.leading_term()[1]

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(exp_degree(m) for m in self._terms)

    def degree_in(self, n: int) -> int:
        if not self._terms:
            return -1
        return max((e for m in self._terms for v, e in m if v == n), default=0)

    def multidegree(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for m in self._terms:
            for v, e in m:
                if e > out.get(v, 0):
                    out[v] = e
        return out

    def support_vars(self) -> frozenset[int]:
        return frozenset(v for m in self._terms for v, _ in m)

    def monomial_content(self) -> Exponent:
        """Largest monomial dividing every term (``()`` for the zero polynomial)."""
        it = iter(self._terms)
        try:
            g = next(it)
        except StopIteration:
            return ONE_EXP
        for m in it:
            g = exp_gcd(g, m)
            if not g:
                break
        return g

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        if not o._terms:
            return self
        acc = dict(self._terms)
        for m, c in o._terms.items():
            val = acc.get(m, GR_ZERO) + c
            if val:
                acc[m] = val
            else:
                acc.pop(m, None)
        return Polynomial._new(acc)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._new({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        if not self._terms or not o._terms:
            return Polynomial.zero()
        if o.is_constant():
            return self.scale(o._terms[ONE_EXP])
        if self.is_constant():
            return o.scale(self._terms[ONE_EXP])
        acc: dict[Exponent, GaussianRational] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in o._terms.items():
                m = exp_mul(m1, m2)
                val = acc.get(m, GR_ZERO) + c1 * c2
                if val:
                    acc[m] = val
                else:
                    acc.pop(m, None)
        return Polynomial._new(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        c = _coerce(other)
        if c is None:
            return NotImplemented
        return self.scale(c.inverse())

    def scale(self, c: Coefficient) -> "Polynomial":
        c = gr(c)
        if not c:
            return Polynomial.zero()
        if c == GR_ONE:
            return self
        return Polynomial._new({m: v * c for m, v in self._terms.items()})

    def mul_exponent(self, e: Exponent) -> "Polynomial":
        return Polynomial._new({exp_mul(m, e): c for m, c in self._terms.items()})

    def div_exponent(self, e: Exponent) -> "Polynomial":
        return Polynomial._new({exp_div(m, e): c for m, c in self._terms.items()})

    def div_exact(self, q: "Polynomial") -> "Polynomial":
        return div_exact(self, q)

    def monic(self) -> tuple[GaussianRational, "Polynomial"]:
        """Return ``(unit, f)`` with ``self == unit * f`` and ``f`` graded-lex monic."""
        lc = self.leading_coeff()
        return lc, self.scale(lc.inverse())

    def normalized(self) -> "Polynomial":
        return self.monic()[1]

    def conj(self) -> "Polynomial":
        """Conjugate every coefficient."""
        return Polynomial._new({m: c.conjugate() for m, c in self._terms.items()})

    def diff(self, n: int) -> "Polynomial":
        acc: dict[Exponent, GaussianRational] = {}
        for m, c in self._terms.items():
            d = dict(m)
            e = d.get(n, 0)
            if not e:
                continue
            if e == 1:
                del d[n]
            else:
                d[n] = e - 1
            acc[tuple(sorted(d.items()))] = c * e
        return Polynomial._new(acc)

    def subs(self, values: Mapping[int, Coefficient | "Polynomial"]) -> "Polynomial":
        """Substitute constants or polynomials for some variables."""
        if not values:
            return self
        vals = {v: (x if isinstance(x, Polynomial) else Polynomial.const(x)) for v, x in values.items()}
        powers: dict[tuple[int, int], Polynomial] = {}
        acc = Polynomial.zero()
        for m, c in self._terms.items():
            kept = []
            term = Polynomial._new({ONE_EXP: c})
            for v, e in m:
                if v in vals:
                    key = (v, e)
                    if key not in powers:
                        powers[key] = vals[v] ** e
                    term = term * powers[key]
                else:
                    kept.append((v, e))
            if kept:
                term = term.mul_exponent(tuple(kept))
            acc = acc + term
        return acc

    def restrict_zero(self, keep: Iterable[int]) -> "Polynomial":
        """Set every variable outside ``keep`` to zero."""
        keep = set(keep)
        return Polynomial._new(
            {m: c for m, c in self._terms.items() if all(v in keep for v, _ in m)}
        )

    def as_univariate(self, n: int) -> dict[int, "Polynomial"]:
        """Coefficients of ``self`` viewed as a polynomial in ``z_n``."""
        out: dict[int, dict] = {}
        for m, c in self._terms.items():
            e = 0
            rest = []
            for v, k in m:
                if v == n:
                    e = k
                else:
                    rest.append((v, k))
            out.setdefault(e, {})[tuple(rest)] = c
        return {e: Polynomial._new(d) for e, d in out.items()}

    @staticmethod
    def from_univariate(n: int, coeffs: Mapping[int, "Polynomial"]) -> "Polynomial":
        acc = Polynomial.zero()
        xe = {}
        for e, c in coeffs.items():
            if e:
                xe = ((n, e),)
                acc = acc + c.mul_exponent(xe)
            else:
                acc = acc + c
        return acc

    def univariate_coeffs(self, n: int | None = None) -> list[GaussianRational]:
        """Dense coefficient list (lowest degree first) of a polynomial in at most one variable."""
        sv = self.support_vars()
        if len(sv) > 1 or (n is not None and sv and sv != {n}):
            raise ValueError("polynomial is not univariate in the requested variable")
        if not self._terms:
            return []
        deg = self.total_degree()
        out = [GR_ZERO] * (deg + 1)
        for m, c in self._terms.items():
            out[exp_degree(m)] = c
        return out

    # evaluation -----------------------------------------------------------
    def eval(self, x: Point | Mapping[int, complex]) -> complex:
        coords = x.coords if isinstance(x, Point) else x
        total = 0j
        for m, c in self._terms.items():
            t = complex(c)
            for v, e in m:
                t *= complex(coords.get(v, 0j)) ** e
            total += t
        return total

    __call__ = eval

    def eval_array(self, values: Mapping[int, np.ndarray]) -> np.ndarray:
        """Vectorized evaluation; ``values[n]`` holds samples of ``z_n`` (missing -> 0)."""
        shape = None
        for arr in values.values():
            shape = np.shape(arr)
            break
        out = np.zeros(shape if shape is not None else (), dtype=complex)
        cache: dict[tuple[int, int], np.ndarray] = {}
        for m, c in self._terms.items():
            t = np.full(out.shape, complex(c), dtype=complex)
            for v, e in m:
                key = (v, e)
                if key not in cache:
                    base = values.get(v)
                    cache[key] = np.zeros(out.shape, dtype=complex) if base is None else np.asarray(base, dtype=complex) ** e
                t = t * cache[key]
            out = out + t
        return out

    # comparison / display -----------------------------------------------------
    def __eq__(self, other) -> bool:
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self!s})"

    def __str__(self) -> str:
        from .parser import format_poly

        return format_poly(self)


def _as_poly(x) -> Polynomial | None:
    if isinstance(x, Polynomial):
        return x
    c = _coerce(x)
    if c is None:
        return None
    return Polynomial.const(c)


def var(n: int) -> Polynomial:
    return Polynomial.var(n)


def div_exact(p: Polynomial, q: Polynomial) -> Polynomial:
    """Return ``h`` with ``q * h == p``; raise NotDivisible if there is none."""
    if not q._terms:
        raise DivByZero("division by the zero polynomial")
    if not p._terms:
        return Polynomial.zero()
    if q.is_constant():
        return p.scale(q._terms[ONE_EXP].inverse())
    lm_q, lc_q = q.leading_term()
    inv_lc = lc_q.inverse()
    lm_q_key = exp_key(lm_q)
    rem = dict(p._terms)
    quot: dict[Exponent, GaussianRational] = {}
    q_items = list(q._terms.items())
    while rem:
        m = max(rem, key=exp_key)
        if exp_key(m) < lm_q_key or not exp_divides(lm_q, m):
            raise NotDivisible("polynomial is not divisible")
        t = exp_div(m, lm_q)
        f = rem[m] * inv_lc
        quot[t] = f
        for mq, cq in q_items:
            key = exp_mul(t, mq)
            val = rem.get(key, GR_ZERO) - f * cq
            if val:
                rem[key] = val
            else:
                rem.pop(key, None)
    return Polynomial._new(quot)


def support_vars(p: Polynomial) -> frozenset[int]:
    return p.support_vars()
