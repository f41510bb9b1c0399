"""Degree bounds for residue lifts and tensor products of polynomials."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvariantViolation, PreconditionError
from ..groups import GroupSpec, factorize
from ..report import Report
from ..tables import FunctionTable
from .calculus import degree


def residue_degree_bound(k: int, p: int, r: int, s: int) -> int:
    """``k s (p^r - 1)``."""
    if min(k, r, s) < 1:
        raise PreconditionError("need k, r, s >= 1")
    return k * s * (p**r - 1)


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial on ``Z^n``: ``{exponents: coefficient}``.

    ``basis="power"`` reads exponents as powers ``t^a``; ``basis="binomial"``
    reads them as ``C(t, a)``.  Both are integer-valued on ``Z^n``.
    """

    terms: dict = field(default_factory=dict)
    basis: str = "power"

    @property
    def degree(self) -> int:
        return max((sum(a) for a, c in self.terms.items() if c), default=0)

    def __call__(self, t) -> int:
        total = 0
        for a, c in self.terms.items():
            if self.basis == "power":
                total += c * math.prod(ti**ai for ti, ai in zip(t, a))
            else:
                total += c * math.prod(math.comb(ti, ai) for ti, ai in zip(t, a))
        return total


def _prime_power(n: int) -> tuple[int, int]:
    fac = factorize(n)
    if len(fac) != 1:
        raise PreconditionError(f"{n} is not a prime power")
    (p, r), = fac.items()
    return p, r


def verify_residue_degree(P: IntPolynomial, spec: GroupSpec, s: int) -> Report:
    """Measure the degree of ``x -> P(|x|) / p^s`` and compare with ``k s (p^r - 1)``."""
    if spec.exponent < 2:
        raise PreconditionError("group must be a nontrivial p-group")
    p, r = _prime_power(spec.exponent)
    q = p**s
    nums = np.array([P(tuple(int(v) for v in row)) % q for row in spec.coords], dtype=np.int64)
    f = FunctionTable.from_ints(spec, nums, q)
    res = degree(f)
    k = max(P.degree, 1)
    bound = residue_degree_bound(k, p, r, s)
    measured = res.effective()
    rep = Report("residue_degree")
    rep.data.update(group=str(spec), p=p, r=r, s=s, k=P.degree, measured=measured, bound=bound)
    ok = measured is not None and measured <= bound
    rep.add("measured_within_bound", ok, {"measured": measured, "bound": bound})
    if not ok:
        raise InvariantViolation(f"residue lift exceeds degree bound on {spec}", rep.to_json())
    return rep


def product_degree_check(f: FunctionTable, g: FunctionTable,
                         q1: int | None = None, q2: int | None = None) -> Report:
    """Degree of the tensor pairing ``(a, b) -> ab`` into ``Z/q1 (x) Z/q2 = Z/gcd(q1, q2)``."""
    if f.spec != g.spec:
        raise PreconditionError("tables on different groups")
    q1 = q1 or f.den
    q2 = q2 or g.den
    a = f.nums_over(q1)
    b = g.nums_over(q2)
    t = math.gcd(q1, q2)
    prod = FunctionTable.from_ints(f.spec, (a % t) * (b % t), t)
    df, dg, dp = degree(f), degree(g), degree(prod)
    m, n, mn = df.effective(), dg.effective(), dp.effective()
    rep = Report("product_degree")
    rep.data.update(deg_f=m, deg_g=n, deg_product=mn, target_modulus=t)
    if None in (m, n):
        rep.add("factors_polynomial", False, {"deg_f": m, "deg_g": n})
        return rep
    rep.add("product_degree_at_most_sum", mn is not None and mn <= max(m, 0) + max(n, 0),
            {"deg_product": mn, "bound": max(m, 0) + max(n, 0)})
    return rep
