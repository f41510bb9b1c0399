"""Binomial divisibility toolkit: Kummer valuations and the T^(m^r) - 1 vanishing order."""
from __future__ import annotations

import math
from typing import Literal

from ..errors import PreconditionError
from ..groups import factorize
from ..report import Report


def binom_valuation(a: int, b: int, p: int) -> int:
    """``nu_p(C(a, b))`` as the number of carries adding ``b`` and ``a - b`` in base ``p``."""
    if not 0 <= b <= a:
        raise PreconditionError("need 0 <= b <= a")
    x, y = b, a - b
    carry = carries = 0
    while x or y or carry:
        s = x % p + y % p + carry
        carry = 1 if s >= p else 0
        carries += carry
        x //= p
        y //= p
    return carries


def valuation(n: int, p: int) -> int:
    """``nu_p(n)`` for ``n != 0`` by repeated division."""
    if n == 0:
        raise PreconditionError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def d_mr(m: int, r: int, convention: Literal["min", "max"] = "min") -> int:
    """``max``/``min`` over ``m = prod p_i^a_i`` of ``p_i^(a_i (r-1) + 1)``."""
    if m < 2 or r < 1:
        raise PreconditionError("need m >= 2 and r >= 1")
    vals = [p ** (a * (r - 1) + 1) for p, a in factorize(m).items()]
    if convention == "min":
        return min(vals)
    if convention == "max":
        return max(vals)
    raise PreconditionError(f"unknown convention {convention!r}")


def verify_alg_lemma(m: int, r: int) -> Report:
    """Check ``C(m^r, j) = 0 mod m`` for ``1 <= j < d_mr`` under both conventions.

    The ``min`` bound is the one the divisibility argument supports; when the
    ``max`` bound is larger the first failing ``j`` (if any) is reported.
    """
    n = m**r
    if n > 10**6:
        raise PreconditionError("m^r must be <= 10^6")
    d_min, d_max = d_mr(m, r, "min"), d_mr(m, r, "max")
    rep = Report(f"alg_lemma(m={m},r={r})")

    def first_failure(limit: int):
        c = 1
        for j in range(1, limit):
            c = c * (n - j + 1) // j
            if c % m:
                return j, c
        return None

    fail_min = first_failure(d_min)
    rep.add("min_convention_divisibility", fail_min is None,
            None if fail_min is None else {"j": fail_min[0], "binom": fail_min[1]})
    # independent route: Kummer valuations at every prime of m
    fac = factorize(m)
    kummer_ok = all(binom_valuation(n, j, p) >= a for j in range(1, d_min) for p, a in fac.items())
    rep.add("kummer_agrees_min_convention", kummer_ok == (fail_min is None))
    if d_max != d_min:
        fail_max = first_failure(d_max)
        rep.data["max_convention_counterexample"] = (
            None if fail_max is None else {"j": fail_max[0], "binom": fail_max[1]})
    else:
        rep.data["max_convention_counterexample"] = None
    # sharpness: is C(n, d_min) itself not divisible by m?
    rep.data.update(m=m, r=r, d_min=d_min, d_max=d_max,
                    sharp=math.comb(n, d_min) % m != 0 if d_min <= n else None)
    return rep
