"""Discrete derivatives and degree measurement for R/Z-valued tables."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import BudgetError, PreconditionError
from ..groups import GroupElement, GroupSpec
from ..report import Report
from ..tables import FunctionTable


def derivative(f: FunctionTable, h: GroupElement) -> FunctionTable:
    """``(d_h f)(x) = f(x + h) - f(x)``."""
    if h.spec != f.spec:
        raise PreconditionError("shift does not belong to the table's group")
    return f.permute(f.spec.shift_perm(h)) - f


def action_derivative(f: FunctionTable, perm: np.ndarray) -> FunctionTable:
    """Derivative along a map of the index set: ``f o T - f``."""
    return f.permute(perm) - f


@dataclass(frozen=True)
class DegreeResult:
    """Outcome of a degree measurement.

    ``degree`` is ``None`` when the table is not a polynomial of degree
    ``<= cutoff``.  The zero function reports degree 0 with ``is_zero`` set.
    """

    degree: int | None
    is_zero: bool
    cutoff: int

    @property
    def polynomial(self) -> bool:
        return self.degree is not None

    def at_most(self, k: int) -> bool:
        return self.is_zero or (self.degree is not None and self.degree <= k)

    def effective(self) -> int | None:
        """Degree with the zero function counted as -1."""
        return -1 if self.is_zero else self.degree

    def to_json(self) -> dict:
        return {"degree": self.degree, "is_zero": self.is_zero, "cutoff": self.cutoff}


def default_cutoff(spec: GroupSpec, den: int) -> int:
    """``sum (d_i - 1) * ceil(log2 den) + n``."""
    bits = math.ceil(math.log2(den)) if den > 1 else 0
    return sum(d - 1 for d in spec.moduli) * bits + spec.rank


def generator_perms(spec: GroupSpec) -> list[np.ndarray]:
    return [spec.shift_perm(e) for e in spec.generators()]


def all_shift_perms(spec: GroupSpec) -> list[np.ndarray]:
    return [spec.shift_perm(h) for h in spec.elements() if not h.is_zero()]


def _row_key(row: np.ndarray):
    return row.tobytes() if row.dtype != object else tuple(int(v) for v in row)


def degree(f: FunctionTable, *, shifts: Sequence[np.ndarray] | None = None,
           cutoff: int | None = None, max_tables: int = 2_000_000) -> DegreeResult:
    """Smallest ``k`` such that every ``(k+1)``-fold derivative vanishes.

    Derivatives are taken along ``shifts`` (generator translations of the
    group by default, or the generator maps of any abelian action).  Because
    the derivative operators commute, only non-decreasing index sequences are
    explored; identical intermediate tables are merged.
    """
    if not f.exact:
        raise PreconditionError("degree requires an exact table")
    if shifts is None:
        shifts = generator_perms(f.spec)
    if cutoff is None:
        cutoff = default_cutoff(f.spec, f.den)
    den = f.den
    if f.is_zero():
        return DegreeResult(0, True, cutoff)
    perms = [np.asarray(p) for p in shifts]
    # level: list of (row, smallest admissible next generator)
    level = [(f.nums, 0)]
    for j in range(1, cutoff + 2):
        nxt: dict = {}
        for row, start in level:
            for i in range(start, len(perms)):
                d = (row[perms[i]] - row) % den
                if not d.any():
                    continue
                key = _row_key(d)
                prev = nxt.get(key)
                if prev is None or prev[1] > i:
                    nxt[key] = (d, i)
        if not nxt:
            return DegreeResult(j - 1, False, cutoff)
        if len(nxt) > max_tables:
            raise BudgetError(f"degree sweep holds {len(nxt)} distinct derivatives", len(nxt))
        level = list(nxt.values())
    return DegreeResult(None, False, cutoff)


def degree_all_shifts(f: FunctionTable, *, shifts: Sequence[np.ndarray] | None = None,
                      cutoff: int | None = None, max_tables: int = 200_000) -> DegreeResult:
    """Degree using derivatives along every group element (oracle for :func:`degree`)."""
    if not f.exact:
        raise PreconditionError("degree requires an exact table")
    if shifts is None:
        shifts = all_shift_perms(f.spec)
    if cutoff is None:
        cutoff = default_cutoff(f.spec, f.den)
    den = f.den
    if f.is_zero():
        return DegreeResult(0, True, cutoff)
    level = {_row_key(f.nums): f.nums}
    for j in range(1, cutoff + 2):
        nxt: dict = {}
        for row in level.values():
            for p in shifts:
                d = (row[p] - row) % den
                if d.any():
                    nxt.setdefault(_row_key(d), d)
        if not nxt:
            return DegreeResult(j - 1, False, cutoff)
        if len(nxt) > max_tables:
            raise BudgetError(f"all-shift sweep holds {len(nxt)} distinct derivatives", len(nxt))
        level = nxt
    return DegreeResult(None, False, cutoff)


def random_exact_table(spec: GroupSpec, den: int, rng: np.random.Generator) -> FunctionTable:
    return FunctionTable.from_ints(spec, rng.integers(0, den, size=spec.order), den)


def degree_generator_sufficiency_check(spec: GroupSpec, trials: int = 100, seed: int = 0,
                                       dens: Sequence[int] = (2, 3, 4, 8)) -> Report:
    """Compare generator-only and all-shift degrees on random exact tables."""
    if spec.order > 4096:
        raise PreconditionError("sufficiency check needs |G| <= 4096")
    rng = np.random.default_rng(seed)
    rep = Report("degree_generator_sufficiency")
    mismatches = []
    for t in range(trials):
        den = int(dens[t % len(dens)])
        f = random_exact_table(spec, den, rng)
        a, b = degree(f), degree_all_shifts(f)
        if (a.degree, a.is_zero) != (b.degree, b.is_zero):
            mismatches.append({"trial": t, "generators": a.to_json(), "all_shifts": b.to_json()})
    rep.add("generator_degree_equals_all_shift_degree", not mismatches, mismatches[:5])
    rep.data.update(group=str(spec), trials=trials, seed=seed)
    return rep
