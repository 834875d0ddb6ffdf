"""Exact norms in weighted Bergman spaces on the infinite polydisk.

A weight signature assigns ``beta_n >= -1`` to each variable; ``beta_n = -1``
makes ``z_n`` a Hardy variable, anything larger a Bergman variable.  The
monomial weights are

    omega_alpha = prod_n alpha_n! / ((beta_n + 2) (beta_n + 3) ... (beta_n + alpha_n + 1))

which is exact for rational ``beta``.  Monomials are orthogonal, so norms and
inner products of polynomials are finite exact sums.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .errors import AlphaNotInB, InvalidBeta, PointOutOfDomain
from .ideal import IdealGens
from .poly_core import (
    GR_ZERO,
    Exponent,
    GaussianRational,
    Point,
    Polynomial,
    exponent,
    gr,
)


def _fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(str(x).strip())


@dataclass(frozen=True)
class WeightSignature:
    """The sequence ``beta_n``: a default value plus finitely many overrides."""

    default_beta: Fraction = Fraction(-1)
    overrides: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        d = _fraction(self.default_beta)
        items = self.overrides.items() if isinstance(self.overrides, Mapping) else self.overrides
        ov = tuple(sorted((int(n), _fraction(b)) for n, b in items))
        for n, b in ov:
            if n < 1:
                raise InvalidBeta(f"override for invalid variable index {n}")
            if b < -1:
                raise InvalidBeta(f"beta_{n} = {b} is below -1")
        if d < -1:
            raise InvalidBeta(f"default beta {d} is below -1")
        object.__setattr__(self, "default_beta", d)
        object.__setattr__(self, "overrides", ov)

    @staticmethod
    def uniform(beta) -> "WeightSignature":
        return WeightSignature(_fraction(beta))

    @staticmethod
    def from_betas(betas: Iterable, default=-1) -> "WeightSignature":
        """``betas[k]`` is beta for variable ``k + 1``."""
        return WeightSignature(_fraction(default), tuple((k, b) for k, b in enumerate(betas, start=1)))

    @staticmethod
    def from_json(data: Mapping) -> "WeightSignature":
        default = data.get("default_beta", "-1")
        overrides = {int(k): v for k, v in dict(data.get("overrides", {})).items()}
        return WeightSignature(_fraction(default), overrides)

    def to_json(self) -> dict:
        return {
            "default_beta": str(self.default_beta),
            "overrides": {str(n): str(b) for n, b in self.overrides},
        }

    def beta(self, n: int) -> Fraction:
        for k, b in self.overrides:
            if k == n:
                return b
        return self.default_beta

    def is_hardy(self, n: int) -> bool:
        return self.beta(n) == -1

    def hardy(self, variables: Iterable[int]) -> frozenset[int]:
        return frozenset(v for v in variables if self.is_hardy(v))

    def bergman(self, variables: Iterable[int]) -> frozenset[int]:
        return frozenset(v for v in variables if not self.is_hardy(v))


@dataclass(frozen=True)
class WeightValue:
    exact: Fraction | None
    approx: float


@lru_cache(maxsize=1 << 14)
def _one_weight(a: int, beta: Fraction) -> Fraction:
    num = math.factorial(a)
    den = Fraction(1)
    for j in range(a):
        den *= beta + 2 + j
    return num / den


def exact_weight(alpha: Exponent, sig: WeightSignature) -> Fraction:
    w = Fraction(1)
    for n, a in alpha:
        b = sig.beta(n)
        if b != -1:
            w *= _one_weight(a, b)
    return w


def gamma_weight(alpha: Exponent, sig: WeightSignature) -> float:
    """The same weight through floating log-Gamma values (independent cross-check)."""
    total = 0.0
    for n, a in alpha:
        b = float(sig.beta(n))
        total += math.lgamma(a + 1) + math.lgamma(b + 2) - math.lgamma(a + b + 2)
    return math.exp(total)


def weight(alpha: Exponent | Mapping[int, int], sig: WeightSignature) -> WeightValue:
    alpha = alpha if isinstance(alpha, tuple) else exponent(alpha)
    exact = exact_weight(alpha, sig)
    return WeightValue(exact, float(exact))


def inner_product(p: Polynomial, q: Polynomial, sig: WeightSignature) -> GaussianRational:
    """``<p, q> = sum_alpha p_alpha * conj(q_alpha) * omega_alpha``."""
    acc = GR_ZERO
    small, large = (p, q) if len(p) <= len(q) else (q, p)
    for m, c in small.items():
        d = large.coeff(m)
        if d:
            pc, qc = (c, d) if small is p else (d, c)
            acc = acc + pc * qc.conjugate() * exact_weight(m, sig)
    return acc


def norm_sq(p: Polynomial, sig: WeightSignature) -> Fraction:
    acc = Fraction(0)
    for m, c in p.items():
        acc += c.abs2() * exact_weight(m, sig)
    return acc


def c_alpha(F: Polynomial, alpha: Exponent | Mapping[int, int], sig: WeightSignature) -> Polynomial:
    """Hardy-variable coefficient of the Bergman monomial ``z^alpha`` in ``F``."""
    alpha = alpha if isinstance(alpha, tuple) else exponent(alpha)
    touched = [n for n, _ in alpha if sig.is_hardy(n)]
    if touched:
        raise AlphaNotInB(f"alpha touches Hardy variables {touched}")
    terms = {}
    for m, c in F.items():
        hardy = tuple((v, e) for v, e in m if sig.is_hardy(v))
        berg = tuple((v, e) for v, e in m if not sig.is_hardy(v))
        if berg == alpha:
            terms[hardy] = c
    return Polynomial._new(terms)


def bergman_parts(F: Polynomial, sig: WeightSignature) -> set[Exponent]:
    """Every ``alpha`` with a nonzero ``c_alpha(F, alpha)``."""
    return {tuple((v, e) for v, e in m if not sig.is_hardy(v)) for m in F.terms}


def e_s(F: Polynomial, S: Iterable[int]) -> Polynomial:
    """Set every variable outside ``S`` to zero."""
    return F.restrict_zero(S)


def kernel_eval(lam: Point | Mapping[int, complex], zeta: Point | Mapping[int, complex], sig: WeightSignature) -> complex:
    """Reproducing kernel ``prod_n (1 - conj(lam_n) zeta_n) ** -(beta_n + 2)``."""
    lam = lam if isinstance(lam, Point) else Point(lam)
    zeta = zeta if isinstance(zeta, Point) else Point(zeta)
    for name, pt in (("lambda", lam), ("zeta", zeta)):
        if not pt.in_open_polydisk:
            raise PointOutOfDomain(f"{name} is not in the open polydisk")
    out = 1 + 0j
    for n in sorted(set(lam.coords) | set(zeta.coords)):
        l, z = lam[n], zeta[n]
        if l == 0 or z == 0:
            continue
        base = 1 - l.conjugate() * z
        out *= cmath.exp(-float(sig.beta(n) + 2) * cmath.log(base))
    return out


def kernel_truncation(lam: Mapping[int, object], degree: int, sig: WeightSignature) -> Polynomial:
    """Taylor polynomial of ``K_lam`` through total degree ``degree`` (exact for rational ``lam``)."""
    coords = {int(n): gr(v) for n, v in dict(lam.coords if isinstance(lam, Point) else lam).items()}
    coords = {n: v for n, v in coords.items() if v}
    if any(v.abs2() >= 1 for v in coords.values()):
        raise PointOutOfDomain("lambda is not in the open polydisk")
    # one-variable series: (beta+2)_k / k! * conj(l)^k
    series = {}
    for n, l in coords.items():
        b = sig.beta(n)
        row = [GaussianRational(1)]
        cl = l.conjugate()
        for k in range(1, degree + 1):
            row.append(row[-1] * cl * ((b + 2 + k - 1) / k))
        series[n] = row
    terms = {(): GaussianRational(1)}
    for n, row in series.items():
        nxt = {}
        for m, c in terms.items():
            d = sum(e for _, e in m)
            for k in range(0, degree - d + 1):
                key = tuple(sorted(m + ((n, k),))) if k else m
                nxt[key] = c * row[k]
        terms = nxt
    return Polynomial(terms)


def _radial_samples(rng: np.random.Generator, beta: Fraction, size: int) -> np.ndarray:
    angle = rng.uniform(0.0, 2 * np.pi, size=size)
    if beta == -1:
        return np.exp(1j * angle)
    u = rng.uniform(size=size)
    s = 1.0 - (1.0 - u) ** (1.0 / float(beta + 1))
    return np.sqrt(s) * np.exp(1j * angle)


def mc_norm_estimate(
    p: Polynomial, sig: WeightSignature, samples: int, seed: int, batch: int = 50_000
) -> tuple[float, float]:
    """Monte-Carlo estimate of ``||p||^2`` with its standard error.

    Hardy variables are drawn uniformly from the circle, Bergman variables from
    the disk with density ``(beta+1)(1-|z|^2)^beta`` (inverse-CDF on ``|z|^2``).
    """
    if samples <= 0:
        raise ValueError("samples must be positive")
    variables = sorted(p.support_vars())
    if not variables:
        return float(p.constant_term().abs2()), 0.0
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        size = min(batch, samples - done)
        values = {v: _radial_samples(rng, sig.beta(v), size) for v in variables}
        f = np.abs(p.eval_array(values)) ** 2
        total += float(f.sum())
        total_sq += float((f * f).sum())
        done += size
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    stderr = math.sqrt(var / samples) if samples > 1 else float("inf")
    return mean, stderr


# ---------------------------------------------------------------------------
# certificate checking
# ---------------------------------------------------------------------------


@dataclass
class CertificateReport:
    ok: bool
    witness: str | None = None
    hardy_precondition: bool = True
    checks: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def random_ideal_element(
    gens: IdealGens, variables: Iterable[int], rng: random.Random, max_degree: int = 4
) -> Polynomial:
    """Random combination ``sum h_j * G_j`` with small multipliers of degree <= ``max_degree``."""
    vs = sorted(set(variables)) or [1]
    acc = Polynomial.zero()
    for g in gens.generators:
        terms = {}
        for _ in range(rng.randint(1, 4)):
            deg = rng.randint(0, max_degree)
            counts: dict[int, int] = {}
            for _ in range(deg):
                v = rng.choice(vs)
                counts[v] = counts.get(v, 0) + 1
            c = Fraction(rng.randint(-2, 2), rng.randint(1, 3))
            terms[exponent(counts)] = terms.get(exponent(counts), 0) + c
        h = Polynomial(terms)
        if h.is_zero():
            h = Polynomial.one()
        acc = acc + h * g
    if acc.is_zero() and gens.generators:
        acc = gens.generators[0]
    return acc


def _unpack(cert):
    if isinstance(cert, tuple):
        return cert
    return cert.p_tilde, cert.q_tilde, cert.G


def certificate_check(
    cert,
    sig: WeightSignature,
    trials: int = 20,
    seed: int = 0,
    torus_points: int = 1000,
    rel_tol: float = 1e-9,
) -> CertificateReport:
    """Verify that ``g -> (q_tilde / p_tilde) g`` is isometric on the ideal ``G``.

    Checks exact norm equality and per-``C_alpha`` norm equality on random ideal
    elements, support invariance on the Bergman variables, and ``|p_tilde| =
    |q_tilde|`` on sampled torus points.  The first failure is returned as the
    witness.
    """
    from .stability import torus_sample_arrays

    p_t, q_t, G = _unpack(cert)
    if not isinstance(G, IdealGens):
        G = IdealGens.of(G)
    hardy_ok = all(sig.is_hardy(v) for v in p_t.support_vars() | q_t.support_vars())
    checks = {"norm": 0, "c_alpha": 0, "support": 0, "torus": False}
    report = CertificateReport(True, None, hardy_ok, checks)
    rng = random.Random(seed)
    variables = set(G.variable_universe) | p_t.support_vars() | q_t.support_vars()
    if G.is_zero():
        report.ok = False
        report.witness = "ideal G is zero"
        return report
    for trial in range(trials):
        g = random_ideal_element(G, variables, rng)
        a, b = p_t * g, q_t * g
        na, nb = norm_sq(a, sig), norm_sq(b, sig)
        if na != nb:
            report.ok = False
            report.witness = f"trial {trial}: g = {g}: ||p~ g||^2 = {na} but ||q~ g||^2 = {nb}"
            return report
        checks["norm"] += 1
        for alpha in sorted(bergman_parts(a, sig) | bergman_parts(b, sig)):
            ca, cb = norm_sq(c_alpha(a, alpha, sig), sig), norm_sq(c_alpha(b, alpha, sig), sig)
            if ca != cb:
                report.ok = False
                report.witness = (
                    f"trial {trial}: g = {g}: ||C_alpha(p~ g)||^2 = {ca} but ||C_alpha(q~ g)||^2 = {cb} "
                    f"at alpha = {dict(alpha)}"
                )
                return report
        checks["c_alpha"] += 1
        sa = sig.bergman(a.support_vars())
        sb = sig.bergman(b.support_vars())
        if sa != sb:
            report.ok = False
            report.witness = f"trial {trial}: g = {g}: Bergman supports differ ({sorted(sa)} vs {sorted(sb)})"
            return report
        checks["support"] += 1
    tv = sorted(p_t.support_vars() | q_t.support_vars())
    if tv:
        pts = torus_sample_arrays(tv, torus_points, seed)
        pa = np.abs(p_t.eval_array(pts))
        qa = np.abs(q_t.eval_array(pts))
        scale = max(sum(abs(complex(c)) for _, c in p_t.items()), sum(abs(complex(c)) for _, c in q_t.items()))
        bad = np.abs(pa - qa) > rel_tol * np.maximum(pa, qa) + 1e-12 * scale
        if bad.any():
            k = int(np.argmax(bad))
            zeta = {v: complex(pts[v][k]) for v in tv}
            report.ok = False
            report.witness = f"torus point {zeta}: |p~| = {pa[k]!r} but |q~| = {qa[k]!r}"
            return report
    elif abs(complex(p_t.constant_term())) != abs(complex(q_t.constant_term())):
        report.ok = False
        report.witness = "constant multipliers differ in modulus"
        return report
    checks["torus"] = True
    return report
