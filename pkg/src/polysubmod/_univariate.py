"""Dense univariate polynomial helpers over an exact field.

Coefficient lists are lowest degree first and work for both ``Fraction`` and
``GaussianRational`` entries.  The empty list is the zero polynomial.
"""

from __future__ import annotations

from fractions import Fraction


def trim(a: list) -> list:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def degree(a: list) -> int:
    return len(a) - 1


def add(a: list, b: list) -> list:
    n = max(len(a), len(b))
    zero = Fraction(0)
    return trim([(a[k] if k < len(a) else zero) + (b[k] if k < len(b) else zero) for k in range(n)])


def neg(a: list) -> list:
    return [-c for c in a]


def sub(a: list, b: list) -> list:
    return add(a, neg(b))


def scale(a: list, c) -> list:
    if not c:
        return []
    return [x * c for x in a]


def mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [a[0] * 0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return trim(out)


def divmod_(a: list, b: list) -> tuple[list, list]:
    b = trim(b)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    r = trim(a)
    if len(r) < len(b):
        return [], r
    inv = 1 / b[-1]
    q = [b[0] * 0] * (len(r) - len(b) + 1)
    while r and len(r) >= len(b):
        shift = len(r) - len(b)
        f = r[-1] * inv
        q[shift] = f
        for k, c in enumerate(b):
            r[shift + k] = r[shift + k] - f * c
        r.pop()
        r = trim(r)
    return trim(q), r


def rem(a: list, b: list) -> list:
    return divmod_(a, b)[1]


def monic(a: list) -> list:
    a = trim(a)
    if not a:
        return a
    inv = 1 / a[-1]
    return [c * inv for c in a]


def gcd(a: list, b: list) -> list:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, rem(a, b)
    return monic(a)


def derivative(a: list) -> list:
    return trim([a[k] * k for k in range(1, len(a))])


def evaluate(a: list, x):
    acc = a[0] * 0 if a else 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def exact_div(a: list, b: list) -> list:
    q, r = divmod_(a, b)
    if r:
        raise ArithmeticError("inexact univariate division")
    return q


def squarefree_part(a: list) -> list:
    """Monic product of the distinct irreducible factors of ``a``."""
    a = monic(a)
    if len(a) <= 1:
        return a
    g = gcd(a, derivative(a))
    return monic(exact_div(a, g))


def yun(a: list) -> list[tuple[list, int]]:
    """Squarefree decomposition ``a = lc * prod(s_i ** i)``; returns ``[(s_i, i), ...]``."""
    a = monic(a)
    if len(a) <= 1:
        return []
    b = derivative(a)
    c = gcd(a, b)
    w = exact_div(a, c)
    y = exact_div(b, c)
    z = sub(y, derivative(w))
    out = []
    i = 1
    while len(w) > 1:
        g = gcd(w, z)
        if len(g) > 1:
            out.append((g, i))
        w = exact_div(w, g)
        y = exact_div(z, g)
        z = sub(y, derivative(w))
        i += 1
    return out


def sign_changes(values: list) -> int:
    signs = [v > 0 for v in values if v]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def sturm_chain(f0: list, f1: list) -> list[list]:
    """Generalized Sturm sequence ``f0, f1, -rem(f0, f1), ...`` over the rationals."""
    chain = [trim(f0), trim(f1)]
    while chain[-1]:
        r = rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append(neg(r))
    return [f for f in chain if f]


def _sign_at_infinity(f: list, positive: bool) -> int:
    lc = f[-1]
    s = 1 if lc > 0 else -1
    if not positive and (len(f) - 1) % 2:
        s = -s
    return s


def cauchy_index(num: list, den: list) -> int:
    """Cauchy index of ``num/den`` over the whole real line."""
    chain = sturm_chain(den, num)
    if len(chain) < 2:
        return 0
    left = sign_changes([_sign_at_infinity(f, False) for f in chain])
    right = sign_changes([_sign_at_infinity(f, True) for f in chain])
    return left - right


def count_real_roots(f: list) -> int:
    """Number of distinct real roots of a real polynomial."""
    f = trim(f)
    if len(f) <= 1:
        return 0
    return cauchy_index(derivative(f), f)
