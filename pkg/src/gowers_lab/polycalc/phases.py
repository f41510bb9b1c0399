"""Polynomial phases in the binomial-monomial basis ``prod_i C(|x_i|, a_i)``."""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from ..errors import PreconditionError
from ..groups import GroupElement, GroupSpec
from ..rational import UnitRational
from ..tables import FunctionTable, int_array


def monomials(spec: GroupSpec, max_degree: int, include_constant: bool = True) -> list[tuple[int, ...]]:
    """Exponent tuples with ``0 <= a_i < d_i`` and ``sum a_i <= max_degree``, graded-lex order."""
    ranges = [range(min(d, max_degree + 1)) for d in spec.moduli]
    out = [a for a in itertools.product(*ranges) if sum(a) <= max_degree]
    if not include_constant:
        out = [a for a in out if any(a)]
    out.sort(key=lambda a: (sum(a), a))
    return out


def monomial_values(spec: GroupSpec, a: tuple[int, ...], mod: int) -> np.ndarray:
    """``prod_i C(|x_i|, a_i) mod m`` for every element of ``spec``."""
    vals = np.ones(spec.order, dtype=object if mod >= 1 << 40 else np.int64)
    for i, (ai, d) in enumerate(zip(a, spec.moduli)):
        if ai == 0:
            continue
        col = np.array([math.comb(t, ai) % mod for t in range(d)], dtype=vals.dtype)
        vals = (vals * col[spec.coords[:, i]]) % mod
    return vals % mod


@dataclass(frozen=True)
class PolynomialPhase:
    """``P(x) = sum_a c_a prod_i C(|x_i|, a_i)`` with ``c_a`` in Q/Z."""

    spec: GroupSpec
    terms: dict = field(default_factory=dict)
    degree_bound: int | None = None

    def __post_init__(self):
        clean = {}
        for a, c in self.terms.items():
            a = tuple(int(v) for v in a)
            if len(a) != self.spec.rank:
                raise PreconditionError(f"exponent {a} has wrong length for rank {self.spec.rank}")
            if any(not 0 <= ai < d for ai, d in zip(a, self.spec.moduli)):
                raise PreconditionError(f"exponent {a} must satisfy 0 <= a_i < d_i")
            c = c if isinstance(c, UnitRational) else UnitRational.parse(str(c))
            c = clean.get(a, UnitRational(0)) + c
            if c:
                clean[a] = c
            else:
                clean.pop(a, None)
        object.__setattr__(self, "terms", clean)
        top = max((sum(a) for a in clean), default=0)
        bound = top if self.degree_bound is None else int(self.degree_bound)
        if top > bound:
            raise PreconditionError(f"monomial of degree {top} exceeds declared bound {bound}")
        object.__setattr__(self, "degree_bound", bound)

    @property
    def den(self) -> int:
        return reduce(math.lcm, (c.den for c in self.terms.values()), 1)

    def __call__(self, x: GroupElement) -> UnitRational:
        return eval_phase(self, x)

    def table(self) -> FunctionTable:
        den = self.den
        acc = int_array(np.zeros(self.spec.order, dtype=np.int64), den)
        for a, c in self.terms.items():
            acc = (acc + (c.num * (den // c.den)) * monomial_values(self.spec, a, den)) % den
        return FunctionTable.from_ints(self.spec, acc, den)

    def __add__(self, other: "PolynomialPhase") -> "PolynomialPhase":
        if other.spec != self.spec:
            raise PreconditionError("phases on different groups")
        terms = dict(self.terms)
        for a, c in other.terms.items():
            terms[a] = terms.get(a, UnitRational(0)) + c
        return PolynomialPhase(self.spec, terms, max(self.degree_bound, other.degree_bound))

    def __str__(self):
        return format_phase(self)

    @classmethod
    def parse(cls, spec: GroupSpec, text: str, degree_bound: int | None = None) -> "PolynomialPhase":
        return parse_phase(spec, text, degree_bound)


def eval_phase(P: PolynomialPhase, x: GroupElement) -> UnitRational:
    if x.spec != P.spec:
        raise PreconditionError("point does not belong to the phase's group")
    lift = x.coords
    total = UnitRational(0)
    for a, c in P.terms.items():
        total = total + c * math.prod(math.comb(t, ai) for t, ai in zip(lift, a))
    return total


_FACTOR = re.compile(r"x(\d+)(?:\^\(?(\d+)\)?)?")


def parse_phase(spec: GroupSpec, text: str, degree_bound: int | None = None) -> PolynomialPhase:
    """Parse ``"c/q * x1^(a1) x2^(a2) + ..."``.

    ``x_i^(a)`` denotes the binomial ``C(|x_i|, a)``, not a power; a bare
    ``x_i`` means ``a = 1``.  A term without a coefficient has coefficient 1
    (which is 0 mod 1 and therefore dropped); a term without factors is a
    constant.
    """
    terms: dict = {}
    text = text.strip()
    if not text or text == "0":
        return PolynomialPhase(spec, {}, degree_bound)
    for raw in text.split("+"):
        raw = raw.strip()
        if not raw:
            raise PreconditionError(f"empty term in phase {text!r}")
        exps = [0] * spec.rank
        coeff = UnitRational(1)
        for tok in re.split(r"[\s*]+", raw):
            if not tok:
                continue
            m = _FACTOR.fullmatch(tok)
            if m:
                i = int(m.group(1)) - 1
                if not 0 <= i < spec.rank:
                    raise PreconditionError(f"variable x{i + 1} out of range in {raw!r}")
                exps[i] += int(m.group(2)) if m.group(2) is not None else 1
            elif re.fullmatch(r"-?\d+(/\d+)?", tok):
                coeff = UnitRational.parse(tok) if "-" not in tok else -UnitRational.parse(tok[1:])
            else:
                raise PreconditionError(f"cannot parse token {tok!r} in phase {text!r}")
        a = tuple(exps)
        terms[a] = terms.get(a, UnitRational(0)) + coeff
    return PolynomialPhase(spec, terms, degree_bound)


def format_phase(P: PolynomialPhase) -> str:
    parts = []
    for a in sorted(P.terms, key=lambda a: (sum(a), a)):
        c = P.terms[a]
        factors = [f"x{i + 1}^({ai})" for i, ai in enumerate(a) if ai]
        parts.append(" ".join([f"{c.num}/{c.den} *"] + factors) if factors else f"{c.num}/{c.den}")
    return " + ".join(parts) if parts else "0"
