"""Certified zero-location for polynomials on the open unit polydisk.

One variable is decided exactly: roots in the open disk are counted by the
Schur-Cohn recursion on exact Gaussian-rational coefficients, with a
Cayley-transform/Sturm count for the singular steps and for roots on the
circle.

Several variables combine three certificates:

* ``ZeroInOpen`` comes from restricting ``w`` to a complex line that stays
  inside the polydisk and counting the roots of the exact univariate
  restriction.
* ``ZeroFree`` comes either from coefficient dominance
  ``|w(0)| >= sum of the other |coefficients|`` (this also covers zero sets
  that only touch the torus, such as ``z1*z2 - 1``), or from a closed-polydisk
  test.  ``w`` has no zero on the closed polydisk iff for every ``k`` the slice
  ``w(1, ..., 1, z, 0, ..., 0)`` has no root with ``|z| <= 1`` and
  ``w(z_1, ..., z_k, 0, ..., 0)`` has no zero on the torus ``T^k``.  The
  first condition is exact; the second is a branch-and-bound over angle boxes.
* ``Undecided`` carries a lower bound on ``|w|`` over the shrunken polydisk.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _univariate as uni
from .errors import ZeroPolynomial
from .poly_core import GR_ZERO, GaussianRational, Point, Polynomial, gr

DEFAULT_EPS = 1e-6
DEFAULT_BUDGET = 10**6


class Status(str, Enum):
    ZERO_IN_OPEN = "ZeroInOpen"
    ZERO_FREE = "ZeroFree"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class StabilityVerdict:
    status: Status
    witness: Point | None = None
    isolation_radius: float | None = None
    min_modulus_bound: float | None = None
    method: str = ""
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def zero_free(self) -> bool:
        return self.status is Status.ZERO_FREE

    @property
    def has_zero(self) -> bool:
        return self.status is Status.ZERO_IN_OPEN

    @property
    def undecided(self) -> bool:
        return self.status is Status.UNDECIDED


# ---------------------------------------------------------------------------
# exact univariate root location
# ---------------------------------------------------------------------------


def _reciprocal(a: list) -> list:
    """Coefficients of ``z^n * conj(a)(1/z)``."""
    return [c.conjugate() for c in reversed(a)]


def _schur_cohn(a: list) -> int:
    """Roots in the open disk of a polynomial without roots on the unit circle."""
    a = uni.trim(a)
    zeros = 0
    while len(a) > 1 and not a[0]:
        a = a[1:]
        zeros += 1
    n = len(a) - 1
    if n <= 0:
        return zeros
    a0, an = a[0], a[-1]
    delta = a0.abs2() - an.abs2()
    if not delta:
        return zeros + _cayley_inside(a)
    t = uni.sub(uni.scale(a, a0.conjugate()), uni.scale(_reciprocal(a), an))
    t = uni.monic(t)
    inner = _schur_cohn(t)
    return zeros + (inner if delta > 0 else n - inner)


def _cayley_image(a: list) -> list:
    """Coefficients in ``t`` of ``a((1+it)/(1-it)) * (1-it)^n``."""
    n = len(a) - 1
    one = GaussianRational(1)
    plus = [one, GaussianRational(0, 1)]  # 1 + i t
    minus = [one, GaussianRational(0, -1)]  # 1 - i t
    plus_pow = [[one]]
    minus_pow = [[one]]
    for _ in range(n):
        plus_pow.append(uni.mul(plus_pow[-1], plus))
        minus_pow.append(uni.mul(minus_pow[-1], minus))
    out: list = []
    for k, c in enumerate(a):
        if c:
            out = uni.add(out, uni.scale(uni.mul(plus_pow[k], minus_pow[n - k]), c))
    return out


def _cayley_inside(a: list) -> int:
    """Roots in the open disk via the upper half-plane count of the Cayley image.

    Requires no roots on the unit circle.
    """
    n = len(a) - 1
    q = _cayley_image(a)
    u = [c.re for c in q]
    v = [c.im for c in q]
    u, v = uni.trim(u), uni.trim(v)
    if len(v) <= len(u):
        arg_turns = -uni.cauchy_index(v, u)
    else:
        arg_turns = uni.cauchy_index(u, v)
    total = n + arg_turns
    if total % 2:
        raise ArithmeticError("internal error: odd half-plane root count")
    return total // 2


def _circle_roots(g: list) -> int:
    """Distinct roots of ``g`` on the unit circle."""
    g = uni.trim(g)
    if len(g) <= 1:
        return 0
    q = _cayley_image(g)
    re = uni.trim([c.re for c in q])
    im = uni.trim([c.im for c in q])
    common = uni.gcd(re, im) if (re or im) else []
    count = uni.count_real_roots(common) if len(common) > 1 else 0
    if not uni.evaluate(g, GaussianRational(-1)):
        count += 1
    return count


def _squarefree_location(s: list) -> tuple[int, int]:
    """(inside, on circle) for a squarefree polynomial with ``s(0) != 0``."""
    g = uni.gcd(s, _reciprocal(s))
    inside = on_circle = 0
    if len(g) > 1:
        on_circle = _circle_roots(g)
        paired = len(g) - 1 - on_circle
        inside += paired // 2
        s = uni.exact_div(s, g)
    inside += _schur_cohn(s)
    return inside, on_circle


def disk_root_counts(coeffs: Sequence) -> tuple[int, int]:
    """Exact ``(roots with |z| < 1, roots with |z| = 1)`` counted with multiplicity.

    ``coeffs`` lists the coefficients lowest degree first.
    """
    a = uni.trim([gr(c) for c in coeffs])
    if not a:
        raise ZeroPolynomial("root count of the zero polynomial")
    zeros = 0
    while len(a) > 1 and not a[0]:
        a = a[1:]
        zeros += 1
    inside, on_circle = zeros, 0
    for s, mult in uni.yun(a):
        i, c = _squarefree_location(s)
        inside += mult * i
        on_circle += mult * c
    return inside, on_circle


def count_roots_open_disk(p: Polynomial | Sequence) -> int:
    """Number of roots (with multiplicity) strictly inside the unit disk."""
    coeffs = p.univariate_coeffs() if isinstance(p, Polynomial) else p
    return disk_root_counts(coeffs)[0]


def _numeric_roots(coeffs: Sequence[GaussianRational]) -> np.ndarray:
    c = np.array([complex(x) for x in reversed(uni.trim(list(coeffs)))], dtype=complex)
    if len(c) <= 1:
        return np.zeros(0, dtype=complex)
    return np.roots(c)


def _refine_root(coeffs: Sequence[GaussianRational], r: complex) -> tuple[complex, float]:
    """Newton-polish ``r`` and return it with a radius that encloses an exact root."""
    c = [complex(x) for x in coeffs]
    dc = [k * c[k] for k in range(1, len(c))]

    def ev(poly, x):
        acc = 0j
        for v in reversed(poly):
            acc = acc * x + v
        return acc

    for _ in range(30):
        f, d = ev(c, r), ev(dc, r)
        if d == 0:
            break
        step = f / d
        r = r - step
        if abs(step) <= 1e-16 * max(1.0, abs(r)):
            break
    f, d = ev(c, r), ev(dc, r)
    n = len(c) - 1
    radius = float("inf") if d == 0 else n * abs(f) / abs(d)
    return r, radius


def _inside_root(coeffs: Sequence[GaussianRational]) -> tuple[complex, float]:
    """A numeric root inside the open disk (one is known to exist) with its radius."""
    coeffs = uni.squarefree_part([gr(c) for c in coeffs])
    roots = _numeric_roots(coeffs)
    best = None
    for r in sorted(roots, key=abs):
        rr, rad = _refine_root(coeffs, complex(r))
        if abs(rr) < 1:
            best = (rr, rad)
            break
    if best is None:
        r = complex(min(roots, key=abs))
        best = (r * (1 - 1e-15) / max(abs(r), 1.0), float(abs(r)))
    return best


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------


def torus_sample_arrays(variables: Iterable[int], count: int, seed: int) -> dict[int, np.ndarray]:
    """``count`` uniform torus samples per variable, as arrays keyed by variable."""
    if count <= 0:
        raise ValueError("count must be positive")
    vs = sorted(set(variables))
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0.0, 2 * np.pi, size=(count, len(vs)))
    pts = np.exp(1j * angles)
    return {v: pts[:, k] for k, v in enumerate(vs)}


def torus_sample(variables: Iterable[int], count: int, seed: int) -> list[Point]:
    """Deterministic pseudorandom points with every listed coordinate of modulus one."""
    arrays = torus_sample_arrays(variables, count, seed)
    return [Point({v: complex(a[k]) for v, a in arrays.items()}) for k in range(count)]


# ---------------------------------------------------------------------------
# multivariate helpers
# ---------------------------------------------------------------------------


def _dominance(w: Polynomial) -> bool:
    """``|w(0)| >= sum of |c_alpha|`` over the other terms (exact up to ties)."""
    c0 = w.constant_term()
    if not c0:
        return False
    rest = [c for m, c in w.items() if m]
    if not rest:
        return True
    squares = [c0.abs2()] + [c.abs2() for c in rest]
    roots = [_rational_sqrt(s) for s in squares]
    if all(r is not None for r in roots):
        return roots[0] >= sum(roots[1:])
    import mpmath

    with mpmath.workdps(60):
        lhs = mpmath.sqrt(mpmath.mpf(squares[0].numerator) / squares[0].denominator)
        rhs = mpmath.fsum(mpmath.sqrt(mpmath.mpf(s.numerator) / s.denominator) for s in squares[1:])
        gap = lhs - rhs
        if abs(gap) <= mpmath.mpf(10) ** -40 * (1 + lhs):
            return False  # a numerical tie is not treated as a certificate
        return bool(gap > 0)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    from math import isqrt

    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _restrict_line(w: Polynomial, base: dict, direction: dict, t_var: int) -> list:
    """Univariate coefficients of ``t -> w(base + t * direction)``."""
    t = Polynomial.var(t_var)
    subs = {}
    for v in w.support_vars():
        b = gr(base.get(v, 0))
        d = gr(direction.get(v, 0))
        subs[v] = Polynomial.const(b) + t.scale(d) if d else Polynomial.const(b)
    u = w.subs(subs)
    if u.is_zero():
        return []
    return u.univariate_coeffs(t_var)


def _line_certificate(
    w: Polynomial, base: dict, direction: dict, t_var: int
) -> StabilityVerdict | None:
    """Certify a zero on the line ``base + t * direction`` for ``|t| < 1``.

    The caller guarantees the whole line segment ``|t| < 1`` lies in the open polydisk.
    """
    coeffs = _restrict_line(w, base, direction, t_var)
    variables = sorted(w.support_vars())
    if not coeffs:
        pt = Point({v: complex(gr(base.get(v, 0))) for v in variables})
        return StabilityVerdict(Status.ZERO_IN_OPEN, pt, 0.0, method="line restriction vanishes identically")
    if len(coeffs) == 1:
        return None
    inside, _ = disk_root_counts(coeffs)
    if not inside:
        return None
    r, radius = _inside_root(coeffs)
    pt = Point(
        {v: complex(gr(base.get(v, 0))) + r * complex(gr(direction.get(v, 0))) for v in variables}
    )
    if not pt.in_open_polydisk:
        return None
    return StabilityVerdict(Status.ZERO_IN_OPEN, pt, float(radius), method="exact line restriction")


def _dilate(w: Polynomial, rho: Fraction) -> Polynomial:
    from .poly_core import exp_degree

    return Polynomial._new({m: c * (rho ** exp_degree(m)) for m, c in w.items()})


def _slice_univariate(w: Polynomial, variables: Sequence[int], k: int) -> list:
    """Coefficients of ``z -> w(1, ..., 1, z, 0, ..., 0)`` with ``z`` in slot ``k``."""
    acc: dict[int, GaussianRational] = {}
    keep = set(variables[: k + 1])
    x = variables[k]
    for m, c in w.items():
        if any(v not in keep for v, _ in m):
            continue
        e = dict(m).get(x, 0)
        acc[e] = acc.get(e, GR_ZERO) + c
    if not acc:
        return []
    out = [GR_ZERO] * (max(acc) + 1)
    for e, c in acc.items():
        out[e] = c
    return uni.trim(out)


@dataclass
class _TorusBound:
    nonvanishing: bool
    lower_bound: float
    near_zero: np.ndarray | None = None
    exhausted: bool = False


def _torus_branch_and_bound(w: Polynomial, variables: Sequence[int], budget: int) -> _TorusBound:
    """Certify ``w != 0`` on the torus of ``variables`` (other variables set to zero)."""
    k = len(variables)
    pos = {v: j for j, v in enumerate(variables)}
    exps, coefs = [], []
    for m, c in w.items():
        if any(v not in pos for v, _ in m):
            continue
        row = [0] * k
        for v, e in m:
            row[pos[v]] = e
        exps.append(row)
        coefs.append(complex(c))
    if not coefs:
        return _TorusBound(False, 0.0, np.zeros(k))
    E = np.array(exps, dtype=float)
    C = np.array(coefs, dtype=complex)
    absC = np.abs(C)
    scale = float(absC.sum())
    lip = float((absC * E.sum(axis=1)).sum())  # sum |c| * |alpha|_1
    if k == 0:
        val = abs(C.sum())
        return _TorusBound(val > 0, val)
    # floating error allowance for evaluating the sum at the box center
    pad = 64 * np.finfo(float).eps * scale * (1 + E.sum(axis=1).max(initial=0))
    near_tol = 1e-12 * scale
    per_axis = 4
    h = np.pi / per_axis
    grid = (np.arange(per_axis) * 2 + 1) * h
    centers = np.array(list(itertools.product(grid, repeat=k)), dtype=float)
    lower = np.inf
    processed = 0
    offsets = np.array(list(itertools.product((-0.5, 0.5), repeat=k)), dtype=float)
    while len(centers):
        processed += len(centers)
        vals = np.exp(1j * (centers @ E.T)) @ C
        mod = np.abs(vals)
        idx = int(np.argmin(mod))
        if mod[idx] <= near_tol:
            return _TorusBound(False, 0.0, centers[idx].copy())
        lb = mod - h * lip - pad
        ok = lb > 0
        if ok.any():
            lower = min(lower, float(lb[ok].min()))
        rest = centers[~ok]
        if not len(rest):
            break
        if processed + len(rest) * len(offsets) > budget:
            return _TorusBound(False, 0.0, rest[int(np.argmin(mod[~ok]))].copy(), exhausted=True)
        h = h / 2
        centers = (rest[:, None, :] + offsets[None, :, :] * (2 * h)).reshape(-1, k)
    return _TorusBound(True, float(lower))


@dataclass
class _ClosedTest:
    zero_free: bool
    lower_bound: float = 0.0
    failing_slice: int | None = None
    slice_roots: tuple[int, int] | None = None
    torus_point: np.ndarray | None = None
    exhausted: bool = False


def _closed_polydisk_test(w: Polynomial, variables: Sequence[int], budget: int) -> _ClosedTest:
    """Decide (soundly, one-sided) that ``w`` has no zero on the closed polydisk."""
    lower = np.inf
    for k in range(len(variables)):
        coeffs = _slice_univariate(w, variables, k)
        if not coeffs:
            return _ClosedTest(False, failing_slice=k, slice_roots=(-1, -1))
        if len(coeffs) > 1:
            inside, on_circle = disk_root_counts(coeffs)
            if inside or on_circle:
                return _ClosedTest(False, failing_slice=k, slice_roots=(inside, on_circle))
        if k == 0:
            # one variable: the exact slice count already covers the circle
            continue
        sub = variables[: k + 1]
        bound = _torus_branch_and_bound(w.restrict_zero(sub), sub, budget)
        if not bound.nonvanishing:
            return _ClosedTest(False, failing_slice=k, torus_point=bound.near_zero, exhausted=bound.exhausted)
        if k == len(variables) - 1:
            lower = min(lower, bound.lower_bound)
    return _ClosedTest(True, float(lower) if np.isfinite(lower) else 0.0)


# ---------------------------------------------------------------------------
# the oracle
# ---------------------------------------------------------------------------


def _to_point_fraction(z: complex, limit: int = 1000) -> GaussianRational:
    """Rational approximation of ``z`` with modulus strictly below one."""
    re = Fraction(z.real).limit_denominator(limit)
    im = Fraction(z.imag).limit_denominator(limit)
    c = GaussianRational(re, im)
    while c.abs2() >= 1:
        c = c * Fraction(limit - 1, limit)
    return c


def _search_lines(
    w: Polynomial, variables: Sequence[int], seed: int, extra_points: Sequence[dict] = ()
) -> StabilityVerdict | None:
    t_var = max(variables) + 1
    n = len(variables)
    # lines through the origin in the directions {1, -1, i, -i}^n (first entry fixed to 1)
    units = [GaussianRational(1), GaussianRational(-1), GaussianRational(0, 1), GaussianRational(0, -1)]
    choices = list(itertools.product(units, repeat=n - 1))
    if len(choices) > 64:
        rng = np.random.default_rng(seed)
        picks = rng.choice(len(choices), size=64, replace=False)
        choices = [choices[int(p)] for p in sorted(picks)]
    for rest in choices:
        direction = dict(zip(variables, (GaussianRational(1),) + tuple(rest)))
        v = _line_certificate(w, {}, direction, t_var)
        if v is not None:
            return v
    # axis-parallel lines through the origin and through supplied points
    bases = [{}] + list(extra_points)
    for base in bases:
        for x in variables:
            b = {v: c for v, c in base.items() if v != x}
            v = _line_certificate(w, b, {x: GaussianRational(1)}, t_var)
            if v is not None:
                return v
    return None


def _random_line_search(
    w: Polynomial, variables: Sequence[int], seed: int, samples: int = 4000, keep: int = 24
) -> StabilityVerdict | None:
    rng = np.random.default_rng(seed)
    n = len(variables)
    radii = 0.97 * np.sqrt(rng.uniform(size=(samples, n)))
    angles = rng.uniform(0, 2 * np.pi, size=(samples, n))
    pts = radii * np.exp(1j * angles)
    vals = np.abs(w.eval_array({v: pts[:, j] for j, v in enumerate(variables)}))
    order = np.argsort(vals, kind="stable")[:keep]
    bases = [{v: _to_point_fraction(complex(pts[i, j])) for j, v in enumerate(variables)} for i in order]
    t_var = max(variables) + 1
    for base in bases:
        for x in variables:
            b = {v: c for v, c in base.items() if v != x}
            v = _line_certificate(w, b, {x: GaussianRational(1)}, t_var)
            if v is not None:
                return v
    return None


def has_zero_in_open_polydisk(
    w: Polynomial,
    eps: float = DEFAULT_EPS,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    split_factors: bool = True,
) -> StabilityVerdict:
    """Decide whether ``w`` vanishes somewhere in the open polydisk of its variables."""
    if w.is_zero():
        raise ZeroPolynomial("stability of the zero polynomial")
    if eps <= 0:
        raise ValueError("eps must be positive")
    variables = sorted(w.support_vars())
    n = len(variables)
    if n == 0:
        return StabilityVerdict(Status.ZERO_FREE, method="nonzero constant")
    if n == 1:
        coeffs = w.univariate_coeffs()
        inside, _ = disk_root_counts(coeffs)
        if inside:
            r, radius = _inside_root(coeffs)
            return StabilityVerdict(
                Status.ZERO_IN_OPEN, Point({variables[0]: r}), float(radius), method="exact root count"
            )
        return StabilityVerdict(Status.ZERO_FREE, method="exact root count")
    if split_factors:
        split = _split_by_factors(w, eps, seed, budget)
        if split is not None:
            return split
    if _dominance(w):
        return StabilityVerdict(Status.ZERO_FREE, method="constant-term dominance")
    rho = 1 - Fraction(str(eps))
    w_rho = _dilate(w, rho)
    # cheap exact searches first
    found = _search_lines(w, variables, seed)
    if found is not None:
        return found
    closed = _closed_polydisk_test(w, variables, budget)
    if closed.zero_free:
        return StabilityVerdict(Status.ZERO_FREE, method="closed-polydisk slice and torus test")
    found = _random_line_search(w, variables, seed)
    if found is not None:
        return found
    shrunk = _closed_polydisk_test(w_rho, variables, budget)
    if shrunk.zero_free:
        return StabilityVerdict(
            Status.UNDECIDED,
            min_modulus_bound=shrunk.lower_bound,
            method="zero-free on the shrunken polydisk only",
            notes=("possible zeros in the boundary shell",),
        )
    t_var = max(variables) + 1
    if shrunk.torus_point is None and shrunk.failing_slice is not None:
        # w_rho(1, .., 1, z, 0, ..) has a root with |z| <= 1, so w has one on the
        # line (rho, .., rho, t, 0, ..) with |t| <= rho
        k = shrunk.failing_slice
        base = {v: GaussianRational(rho) for v in variables[:k]}
        found = _line_certificate(w, base, {variables[k]: GaussianRational(1)}, t_var)
        if found is not None:
            return found
    if shrunk.torus_point is not None:
        zs = {
            var: _to_point_fraction(complex(float(rho) * np.exp(1j * th)))
            for var, th in zip(variables, shrunk.torus_point)
        }
        found = _search_lines(w, variables, seed, extra_points=[zs])
        if found is not None:
            return found
    return StabilityVerdict(
        Status.UNDECIDED,
        min_modulus_bound=0.0,
        method="no certificate either way",
        notes=("branch-and-bound budget exhausted",) if shrunk.exhausted else (),
    )


def _split_by_factors(w: Polynomial, eps, seed, budget) -> StabilityVerdict | None:
    from .factor import factor, within_cap

    if not within_cap(w):
        return None
    fp = factor(w)
    if len(fp.factors) == 1 and fp.factors[0].mult == 1:
        return None
    verdicts = []
    for f in fp.factors:
        v = has_zero_in_open_polydisk(f.poly, eps, seed, budget, split_factors=False)
        if v.has_zero:
            wit = dict(v.witness.coords)
            # remaining variables at zero keep the point inside the polydisk
            return StabilityVerdict(
                Status.ZERO_IN_OPEN,
                Point(wit),
                v.isolation_radius,
                method=f"factor {f.poly}: {v.method}",
            )
        verdicts.append(v)
    if all(v.zero_free for v in verdicts):
        return StabilityVerdict(Status.ZERO_FREE, method="every irreducible factor zero-free")
    return StabilityVerdict(Status.UNDECIDED, min_modulus_bound=0.0, method="undecided factor")


def is_zero_free(w: Polynomial, **kwargs) -> bool:
    return has_zero_in_open_polydisk(w, **kwargs).zero_free
