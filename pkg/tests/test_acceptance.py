"""Acceptance criteria 1-10, each at its stated size, tolerance and time limit."""

from __future__ import annotations

import contextlib
import io
import json
import math
import random
import time
from fractions import Fraction

import numpy as np
from cases import BIVARIATE_CASES, roots_inside_numeric
from conftest import random_poly, record_criterion

from polysubmod.cli import main as cli_main
from polysubmod.equivalence import (
    reflect,
    torus_modulus_equal,
    unitarily_equivalent,
    unitarily_equivalent_principal,
)
from polysubmod.ideal import BeurlingForm, IdealGens, ideal_equal
from polysubmod.parser import format_poly, parse
from polysubmod.poly_core import GaussianRational, Polynomial, exponent, var
from polysubmod.stability import count_roots_open_disk, has_zero_in_open_polydisk, torus_sample_arrays
from polysubmod.weights import (
    WeightSignature,
    certificate_check,
    exact_weight,
    gamma_weight,
    mc_norm_estimate,
    norm_sq,
)

z1, z2, z3, z4 = var(1), var(2), var(3), var(4)
half = Fraction(1, 2)


def _gr(re, im=0) -> GaussianRational:
    return GaussianRational(Fraction(re), Fraction(im))


def _cli(*argv) -> tuple[int, dict]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(list(argv))
    return code, json.loads(buf.getvalue())


# ---------------------------------------------------------------------------
# 1. weight exactness
# ---------------------------------------------------------------------------


def test_criterion_01_weight_exactness():
    start = time.perf_counter()
    rng = random.Random(101)
    worst = 0.0
    hardy_ok = True
    for _ in range(1000):
        nvars = rng.randint(1, 4)
        alpha = exponent({n: rng.randint(0, 15) for n in range(1, nvars + 1)})
        betas = [Fraction(rng.randint(-12, 60), 12) for _ in range(nvars)]
        sig = WeightSignature.from_betas(betas)
        exact = exact_weight(alpha, sig)
        approx = gamma_weight(alpha, sig)
        worst = max(worst, abs(float(exact) - approx) / float(exact))
        hardy_ok &= exact_weight(alpha, WeightSignature.uniform(-1)) == 1
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and hardy_ok and elapsed < 5
    record_criterion(1, ok, f"worst relative gap {worst:.2e}; Hardy weights all 1: {hardy_ok}; {elapsed:.2f}s")
    assert ok


# ---------------------------------------------------------------------------
# 2. norm consistency
# ---------------------------------------------------------------------------


def test_criterion_02_norm_consistency():
    start = time.perf_counter()
    rng = random.Random(202)
    beta_pool = [Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3)]
    within = 0
    for trial in range(50):
        p = random_poly(rng, nvars=3, max_degree=4, max_terms=6)
        sig = WeightSignature.from_betas([rng.choice(beta_pool) for _ in range(3)])
        est, se = mc_norm_estimate(p, sig, 100_000, seed=trial)
        exact = float(norm_sq(p, sig))
        within += abs(est - exact) <= 3 * se if se > 0 else est == exact
    elapsed = time.perf_counter() - start
    ok = within >= 48 and elapsed < 60
    record_criterion(2, ok, f"{within}/50 Monte-Carlo estimates within 3 standard errors; {elapsed:.1f}s")
    assert ok


# ---------------------------------------------------------------------------
# 3. stability oracle
# ---------------------------------------------------------------------------


def _random_univariate(rng: random.Random) -> list[GaussianRational]:
    if rng.random() < 0.6:
        deg = rng.randint(1, 8)
        coeffs = [_gr(Fraction(rng.randint(-9, 9), rng.randint(1, 6)), Fraction(rng.randint(-9, 9), rng.randint(1, 6))) for _ in range(deg + 1)]
        if not coeffs[-1]:
            coeffs[-1] = _gr(1)
        return coeffs
    # products of linear factors with roots inside, on, and outside the circle
    root_pool = [_gr(1), _gr(-1), _gr(0, 1), _gr(Fraction(3, 5), Fraction(4, 5)), _gr(half), _gr(0, Fraction(-1, 3)), _gr(2), _gr(Fraction(5, 4), Fraction(1, 4)), _gr(0)]
    p = Polynomial.const(_gr(rng.randint(1, 5), rng.randint(-2, 2)))
    for _ in range(rng.randint(1, 8)):
        p = p * (z1 - rng.choice(root_pool))
    return p.univariate_coeffs(1)


def test_criterion_03_stability_oracle():
    start = time.perf_counter()
    rng = random.Random(303)
    agree = 0
    for _ in range(500):
        coeffs = _random_univariate(rng)
        agree += count_roots_open_disk(coeffs) == roots_inside_numeric(coeffs)
    correct = sum(has_zero_in_open_polydisk(parse(t)).status.value == expected for t, expected in BIVARIATE_CASES)
    elapsed = time.perf_counter() - start
    ok = agree == 500 and correct == len(BIVARIATE_CASES) == 20 and elapsed < 60
    record_criterion(3, ok, f"univariate agreement {agree}/500; bivariate cases {correct}/20; {elapsed:.1f}s")
    assert ok


# ---------------------------------------------------------------------------
# 4. Beurling totality in one Hardy variable
# ---------------------------------------------------------------------------


def test_criterion_04_hardy_one_variable_totality():
    start = time.perf_counter()
    rng = random.Random(404)
    sig = WeightSignature.uniform(-1)
    yes = certified = 0
    approximate = approximate_failures = 0
    worst_gap = 0.0
    for _ in range(100):
        p = q = Polynomial.zero()
        while p.is_zero():
            p = random_poly(rng, nvars=1, max_degree=4, max_terms=4)
        while q.is_zero():
            q = random_poly(rng, nvars=1, max_degree=4, max_terms=4)
        v = unitarily_equivalent_principal(p, q, sig)
        if not v.yes:
            continue
        yes += 1
        ok = certificate_check(v.certificate, sig).ok
        certified += ok
        if v.metadata.get("torus_identity") == "approximate":
            approximate += 1
            approximate_failures += not ok
            # g = 1 lies in G = <1>; relative gap of the two norms
            a, b = norm_sq(v.certificate.p_tilde, sig), norm_sq(v.certificate.q_tilde, sig)
            worst_gap = max(worst_gap, float(abs(a - b) / a))
    elapsed = time.perf_counter() - start
    ok = yes == 100 and certified == 100 and elapsed < 60
    record_criterion(
        4,
        ok,
        f"Yes for {yes}/100 pairs; exact certificate check passes {certified}/100; "
        f"all {100 - certified} failures are among the {approximate} pairs needing rounded outer factors "
        f"({approximate_failures} of them fail), worst relative norm gap {worst_gap:.1e}; {elapsed:.1f}s",
    )
    # every failure must be an approximate-multiplier case; anything else is a real defect
    assert certified + approximate_failures == yes
    assert ok


# ---------------------------------------------------------------------------
# 5. Bergman rigidity
# ---------------------------------------------------------------------------

# known by construction: every factor below has a zero in the open bidisk
ZERO_POOL = [z1 - half, z2 + Fraction(1, 3), z1 * z2 - Fraction(1, 4), z1 + z2 - half, z1 - _gr(0, Fraction(2, 3))]
# known by construction: none of these vanishes in the open bidisk
STABLE_POOL = [z1 - 2, z2 + 3, 3 + z1 + z2, z1 * z2 - 2, 4 - _gr(0, 1) * z2**2]
# trivial-gcd cofactor ideals, each with a second generating set of the same ideal
IDEAL_POOL = [
    ([Polynomial.one()], [z1 + 1, z1]),
    ([z1, z2], [z1 + z2, z1 - z2]),
    ([z1**2, z2], [z1**2 + z2, z2]),
    ([z1, z2**2], [z1 + z2**2, z2**2]),
    ([z1**2, z1 * z2, z2**2], [z1**2 + z1 * z2, z1 * z2, z2**2 - z1 * z2]),
]


def test_criterion_05_bergman_rigidity():
    start = time.perf_counter()
    rng = random.Random(505)
    sig = WeightSignature.uniform(0)
    agree = 0
    for trial in range(100):
        zp = rng.sample(range(len(ZERO_POOL)), rng.randint(0, 2))
        zq = list(zp) if trial % 2 == 0 else rng.sample(range(len(ZERO_POOL)), rng.randint(0, 2))
        kp = rng.randrange(len(IDEAL_POOL))
        kq = kp if rng.random() < 0.6 else rng.randrange(len(IDEAL_POOL))

        def build(indices, k, alternate):
            p = Polynomial.const(_gr(rng.randint(1, 4), rng.randint(-2, 2)))
            for i in indices:
                p = p * ZERO_POOL[i]
            for i in rng.sample(range(len(STABLE_POOL)), rng.randint(0, 2)):
                p = p * STABLE_POOL[i]
            gens = IDEAL_POOL[k][1 if alternate else 0]
            return BeurlingForm(p, IdealGens.of(gens))

        M, N = build(zp, kp, False), build(zq, kq, rng.random() < 0.5)
        expected = sorted(zp) == sorted(zq) and kp == kq
        v = unitarily_equivalent(M, N, sig)
        agree += v.yes == expected and not v.undecided
    special = unitarily_equivalent(
        BeurlingForm(z1, IdealGens.of([1])), BeurlingForm(z1 - half, IdealGens.of([1])), sig
    ).no
    elapsed = time.perf_counter() - start
    ok = agree == 100 and special and elapsed < 60
    record_criterion(5, ok, f"verdict matches construction {agree}/100; (z1, z1 - 1/2) -> No: {special}; {elapsed:.1f}s")
    assert ok


# ---------------------------------------------------------------------------
# 6. mixed-signature soundness
# ---------------------------------------------------------------------------


def _hardy_factor(rng: random.Random) -> Polynomial:
    """Hardy-variable factor vanishing in the bidisk whose reflection does not."""
    a = _gr(Fraction(rng.randint(-4, 4), 5), Fraction(rng.randint(-3, 3), 5))
    b = _gr(Fraction(rng.randint(-4, 4), 6), Fraction(rng.randint(-3, 3), 6))
    choices = [z1 - a, z2 - b, z1 * z2 - a, (z1 - a) * (z2 - b), (z1 - a) * (z1 - b)]
    return rng.choice(choices)


def test_criterion_06_mixed_signature_soundness():
    start = time.perf_counter()
    rng = random.Random(606)
    sig = WeightSignature(Fraction(0), {1: -1, 2: -1, 4: Fraction(1, 2)})
    phi_pool = [z3 - Fraction(1, 3) + Fraction(1, 3) * z1, z3 * z4 - Fraction(1, 5), z4 + z2 * z3 - half, Polynomial.one(), z3 - _gr(0, half)]
    ideal_pool = [[Polynomial.one()], [z3, z4], [z3**2, z1 + z4], [z3 + z4, z3 * z4 - 1]]
    yes = passed = 0
    failures = []
    for _ in range(20):
        f = _hardy_factor(rng)
        f_refl = reflect(f).scaled()
        phi = rng.choice(phi_pool)
        K = IdealGens.of(rng.choice(ideal_pool))
        stable = rng.choice([Polynomial.one(), z2 - 3, 2 + z1])
        M = BeurlingForm(phi * f, K)
        N = BeurlingForm(phi * f_refl * stable, K)
        v = unitarily_equivalent(M, N, sig)
        if not v.yes:
            failures.append(f"{M.gcd_part} vs {N.gcd_part}: {v.status.value}")
            continue
        yes += 1
        report = certificate_check(v.certificate, sig, trials=20, seed=rng.randint(0, 10**6), torus_points=1000, rel_tol=1e-9)
        full = report.ok and report.checks["norm"] == 20 and report.checks["c_alpha"] == 20 and report.checks["torus"]
        passed += full
        if not full:
            failures.append(f"certificate for {M.gcd_part}: {report.witness}")
    elapsed = time.perf_counter() - start
    ok = yes == 20 and passed == 20 and elapsed < 120
    detail = f"Yes {yes}/20; certificates passing norm, C_alpha and torus checks {passed}/20; {elapsed:.1f}s"
    record_criterion(6, ok, detail + ("; " + failures[0] if failures else ""))
    assert ok


# ---------------------------------------------------------------------------
# 7. finite-codimension rigidity
# ---------------------------------------------------------------------------


def test_criterion_07_trivial_gcd_rigidity():
    start = time.perf_counter()
    rng = random.Random(707)
    agree = 0
    for trial in range(20):
        sig = WeightSignature.from_betas([rng.choice([-1, 0, 1]) for _ in range(2)])
        a = rng.randrange(len(IDEAL_POOL))
        b = a if trial % 2 == 0 else rng.randrange(len(IDEAL_POOL))
        K = IdealGens.of(IDEAL_POOL[a][0])
        L = IdealGens.of(IDEAL_POOL[b][rng.randint(0, 1)])
        v = unitarily_equivalent(BeurlingForm(Polynomial.one(), K), BeurlingForm(Polynomial.one(), L), sig)
        same = ideal_equal(K, L)
        agree += v.yes == same == (a == b) and not v.undecided
    elapsed = time.perf_counter() - start
    ok = agree == 20 and elapsed < 30
    record_criterion(7, ok, f"Yes exactly when ideal_equal holds: {agree}/20; {elapsed:.1f}s")
    assert ok


# ---------------------------------------------------------------------------
# 8. monomial orbit exponent
# ---------------------------------------------------------------------------


def test_criterion_08_monomial_orbit():
    start = time.perf_counter()
    rng = random.Random(808)
    good = 0
    for _ in range(20):
        width = rng.randint(1, 4)
        gamma = [rng.randint(0, 4) for _ in range(width)]
        overrides = {str(n): str(rng.choice([-1, 0, Fraction(1, 2), 2])) for n in range(1, width + 1)}
        sig = json.dumps({"default_beta": "-1", "overrides": overrides})
        code, out = _cli("orbit-exponent", "gamma=" + ",".join(map(str, gamma)), "--sig", sig)
        tilde = out["gamma_tilde"]
        zeroed = all(
            tilde[k] == (0 if overrides[str(k + 1)] == "-1" else gamma[k]) for k in range(width)
        )
        mono = format_poly(Polynomial.monomial(exponent(enumerate(gamma, start=1))))
        code2, verdict = _cli("equiv-principal", mono, out["monomial"], "--sig", sig, "--verify")
        good += code == 0 and zeroed and code2 == 0 and verdict["status"] == "Yes" and verdict["verification"]["ok"]
    elapsed = time.perf_counter() - start
    ok = good == 20 and elapsed < 30
    record_criterion(8, ok, f"Hardy coordinates zeroed and [z^gamma] ~ [z^gamma~] verified: {good}/20; {elapsed:.1f}s")
    assert ok


# ---------------------------------------------------------------------------
# 9. reflection identities
# ---------------------------------------------------------------------------


def test_criterion_09_reflection_identities():
    start = time.perf_counter()
    rng = random.Random(909)
    ratio_ok = involution_ok = involution_total = 0
    worst = 0.0
    for k in range(1000):
        p = Polynomial.zero()
        while p.is_zero():
            p = random_poly(rng, nvars=3, max_degree=5, max_terms=6)
        refl = reflect(p)
        pts = torus_sample_arrays([1, 2, 3], 100, seed=k)
        a = np.abs(p.eval_array(pts))
        b = np.abs(refl.scaled().eval_array(pts))
        mask = a > 1e-6
        ratio = b[mask] / a[mask]
        spread = float(np.max(np.abs(ratio / ratio[0] - 1))) if mask.any() else 0.0
        worst = max(worst, spread)
        ratio_ok += spread <= 1e-9 and torus_modulus_equal(p, refl.scaled())
        if not p.monomial_content():
            involution_total += 1
            twice = reflect(refl.poly)
            involution_ok += twice.poly.scale(twice.unit * refl.unit.conjugate()) == p
    elapsed = time.perf_counter() - start
    ok = ratio_ok == 1000 and involution_ok == involution_total and elapsed < 30
    record_criterion(
        9,
        ok,
        f"constant torus ratio {ratio_ok}/1000 (worst spread {worst:.1e}); "
        f"exact involution {involution_ok}/{involution_total}; {elapsed:.1f}s",
    )
    assert ok


# ---------------------------------------------------------------------------
# 10. parser round trip
# ---------------------------------------------------------------------------


def test_criterion_10_parser_round_trip():
    rng = random.Random(1010)
    polys = [random_poly(rng, nvars=4, max_degree=6, max_terms=8, den=12) for _ in range(1000)]
    start = time.perf_counter()
    same = sum(parse(format_poly(p)) == p for p in polys)
    elapsed = time.perf_counter() - start
    ok = same == 1000 and elapsed < 5
    record_criterion(10, ok, f"exact round trips {same}/1000; {elapsed:.2f}s")
    assert ok


def test_weights_are_finite():
    # guards the Gamma cross-check against overflow for the largest exponents used above
    sig = WeightSignature.uniform(5)
    assert math.isfinite(gamma_weight(exponent({1: 15, 2: 15, 3: 15, 4: 15}), sig))
