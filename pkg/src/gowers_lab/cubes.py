"""Cube structures ``D^k1(U_1) x ... x D^kr(U_r)`` on finite abelian groups."""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Sequence

import numpy as np

from .errors import BudgetError, PreconditionError
from .groups import GroupSpec
from .polycalc.calculus import degree
from .report import Report
from .tables import FunctionTable

Convention = Literal["k+1", "k"]


@dataclass(frozen=True)
class FilteredAbelianSpec:
    components: tuple[tuple[GroupSpec, int], ...]

    def __post_init__(self):
        comps = tuple((g, int(k)) for g, k in self.components)
        if any(k < 1 for _, k in comps):
            raise PreconditionError("component degrees must be >= 1")
        object.__setattr__(self, "components", comps)

    @classmethod
    def parse(cls, text: str) -> "FilteredAbelianSpec":
        """``"D1:2,2;D2:4"`` -> D^1(Z/2 x Z/2) x D^2(Z/4)."""
        comps = []
        for part in text.split(";"):
            part = part.strip()
            if not part:
                continue
            m = re.fullmatch(r"D(\d+):(.*)", part)
            if not m:
                raise PreconditionError(f"malformed cube spec component {part!r}")
            comps.append((GroupSpec.parse(m.group(2)), int(m.group(1))))
        if not comps:
            raise PreconditionError(f"empty cube spec {text!r}")
        return cls(tuple(comps))

    def __str__(self):
        return ";".join(f"D{k}:{g}" for g, k in self.components)

    @property
    def step(self) -> int:
        return max(k for _, k in self.components)

    @property
    def group(self) -> GroupSpec:
        return GroupSpec(tuple(d for g, _ in self.components for d in g.moduli))

    def slices(self) -> list[tuple[slice, GroupSpec, int]]:
        out, start = [], 0
        for g, k in self.components:
            out.append((slice(start, start + g.rank), g, k))
            start += g.rank
        return out

    def predicted_count(self, n: int) -> int:
        """``prod_j |U_j|^(sum_{i <= k_j} C(n, i))``."""
        return math.prod(g.order ** sum(math.comb(n, i) for i in range(k + 1)) for g, k in self.components)


def vertices(n: int) -> np.ndarray:
    """``{0,1}^n`` in lexicographic order, shape (2^n, n)."""
    return np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int64).reshape(2**n, n)


@lru_cache(maxsize=64)
def face_matrix(n: int, d: int) -> np.ndarray:
    """Signed incidence of every ``d``-dimensional face of ``{0,1}^n``.

    Row ``f`` holds ``(-1)^|w|`` on the vertices of face ``f`` and 0 elsewhere.
    """
    if d > n:
        return np.zeros((0, 2**n), dtype=np.int64)
    V = vertices(n)
    sign = (-1) ** V.sum(axis=1)
    rows = []
    for free in itertools.combinations(range(n), d):
        fixed = [i for i in range(n) if i not in free]
        for vals in itertools.product((0, 1), repeat=len(fixed)):
            mask = np.all(V[:, fixed] == np.array(vals, dtype=np.int64), axis=1) if fixed else np.ones(2**n, bool)
            rows.append(np.where(mask, sign, 0))
    return np.array(rows, dtype=np.int64).reshape(-1, 2**n)


def _face_dim(k: int, convention: Convention) -> int:
    if convention == "k+1":
        return k + 1
    if convention == "k":
        return k
    raise PreconditionError(f"unknown face convention {convention!r}")


def members(spec: FilteredAbelianSpec, tuples: np.ndarray, convention: Convention = "k+1") -> np.ndarray:
    """Vectorised membership for ``tuples`` of shape (B, 2^n, rank)."""
    tuples = np.asarray(tuples, dtype=np.int64)
    B, V, _ = tuples.shape
    n = V.bit_length() - 1
    ok = np.ones(B, dtype=bool)
    for sl, g, k in spec.slices():
        F = face_matrix(n, _face_dim(k, convention))
        if F.shape[0] == 0 or g.rank == 0:
            continue
        sums = np.einsum("fv,bvr->bfr", F, tuples[:, :, sl]) % np.array(g.moduli, dtype=np.int64)
        ok &= ~np.any(sums.reshape(B, -1), axis=1)
    return ok


@dataclass(frozen=True)
class CubeTuple:
    """An ``n``-dimensional configuration: vertex ``w`` (lexicographic) -> coordinates."""

    n: int
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.shape[0] != 2**self.n:
            raise PreconditionError(f"{self.n}-cube needs {2**self.n} vertices, got {arr.shape[0]}")
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_list(cls, values: Sequence) -> "CubeTuple":
        arr = np.asarray(values, dtype=np.int64)
        n = arr.shape[0].bit_length() - 1
        return cls(n, arr)


def cube_membership(spec: FilteredAbelianSpec, c: CubeTuple, convention: Convention = "k+1") -> bool:
    """Alternating sums vanish on every face of dimension ``k_j + 1`` (per component)."""
    if c.entries.shape[1] != spec.group.rank:
        raise PreconditionError("cube entries do not match the spec's rank")
    return bool(members(spec, c.entries[None], convention)[0])


def _all_tuples(G: GroupSpec, n: int, start: int, stop: int) -> np.ndarray:
    """Tuples ``start..stop`` of ``G^(2^n)`` in lexicographic order, shape (B, 2^n, rank)."""
    N, V = G.order, 2**n
    t = np.arange(start, stop, dtype=np.int64)
    radices = np.array([N ** (V - 1 - i) for i in range(V)], dtype=np.int64)
    idx = (t[:, None] // radices[None, :]) % N
    return G.coords[idx]


def count_cubes(spec: FilteredAbelianSpec, n: int, budget: int = 1 << 24,
                convention: Convention = "k+1") -> tuple[int, int]:
    """Exhaustive count of ``n``-cubes and the closed-form prediction."""
    G = spec.group
    total = G.order ** (2**n)
    if total > budget:
        raise BudgetError(f"{total} candidate tuples exceed budget {budget}", total)
    count = 0
    block = 1 << 16
    for start in range(0, total, block):
        count += int(members(spec, _all_tuples(G, n, start, min(total, start + block)), convention).sum())
    return count, spec.predicted_count(n)


def corner_complete(spec: FilteredAbelianSpec, corner: np.ndarray,
                    convention: Convention = "k+1") -> list[tuple[int, ...]]:
    """All values at the top vertex completing ``corner`` (entries on {0,1}^n minus 1^n)."""
    corner = np.asarray(corner, dtype=np.int64)
    if corner.ndim == 1:
        corner = corner.reshape(-1, 1)
    n = (corner.shape[0] + 1).bit_length() - 1
    if corner.shape[0] != 2**n - 1:
        raise PreconditionError(f"corner must have 2^n - 1 entries, got {corner.shape[0]}")
    V = vertices(n)
    # lower facets {w_i = 0} must already be cubes
    for i in range(n):
        mask = V[:-1, i] == 0
        facet = CubeTuple(n - 1, corner[mask])
        if not cube_membership(spec, facet, convention):
            raise PreconditionError(f"corner facet w_{i + 1} = 0 is not a cube",)
    G = spec.group
    cand = np.concatenate([np.broadcast_to(corner, (G.order,) + corner.shape), G.coords[:, None, :]], axis=1)
    ok = members(spec, cand, convention)
    return [tuple(int(v) for v in G.coords[i]) for i in np.flatnonzero(ok)]


def hk_members(spec: FilteredAbelianSpec, tuples: np.ndarray) -> np.ndarray:
    """Host-Kra membership by upper-set elimination, vectorised over (B, 2^n, rank).

    Generators are ``[g]_{w0}`` (``g`` on the upper set of ``w0``) with
    ``g`` in the ``|w0|``-th filtration group, which for ``D^k(U)`` is ``U``
    when ``|w0| <= k`` and trivial otherwise.  Vertices are processed by
    increasing weight; the residual at ``w0`` fixes the generator to remove.
    """
    tuples = np.asarray(tuples, dtype=np.int64)
    B, V, _ = tuples.shape
    n = V.bit_length() - 1
    verts = vertices(n)
    weight = verts.sum(axis=1)
    order = sorted(range(V), key=lambda j: (weight[j], tuple(verts[j])))
    upper = np.all(verts[None, :, :] >= verts[:, None, :], axis=2).astype(np.int64)  # upper[w0, w]
    ok = np.ones(B, dtype=bool)
    for sl, g, k in spec.slices():
        mods = np.array(g.moduli, dtype=np.int64)
        r = tuples[:, :, sl] % mods
        for j in order:
            if weight[j] > k:
                ok &= ~np.any(r[:, j, :], axis=1)
            else:
                r = (r - upper[j][None, :, None] * r[:, j, None, :]) % mods
    return ok


def hk_membership(spec: FilteredAbelianSpec, c: CubeTuple) -> bool:
    """Membership of ``c`` in the Host-Kra group of the filtration."""
    if c.entries.shape[1] != spec.group.rank:
        raise PreconditionError("cube entries do not match the spec's rank")
    return bool(hk_members(spec, c.entries[None])[0])


def completion_counts(spec: FilteredAbelianSpec, n: int, budget: int = 1 << 22,
                      convention: Convention = "k+1") -> tuple[int, int, int]:
    """Sweep every ``n``-corner: (valid corners, valid corners with exactly one completion,
    invalid corners that nevertheless complete)."""
    G = spec.group
    N, V = G.order, 2**n
    total = N**V
    if total > budget:
        raise BudgetError(f"{total} tuples exceed budget {budget}", total)
    verts = vertices(n)
    lower = [np.flatnonzero(verts[:, i] == 0) for i in range(n)]
    valid = unique = stray = 0
    block = N * max(1, (1 << 16) // N)
    for start in range(0, total, block):
        t = _all_tuples(G, n, start, min(total, start + block))
        mem = members(spec, t, convention).reshape(-1, N)
        corners = t[::N]
        facet_ok = np.ones(corners.shape[0], dtype=bool)
        for idx in lower:
            facet_ok &= members(spec, corners[:, idx], convention)
        counts = mem.sum(axis=1)
        valid += int(facet_ok.sum())
        unique += int((facet_ok & (counts == 1)).sum())
        stray += int((~facet_ok & (counts > 0)).sum())
    return valid, unique, stray


def restrict_to_face(c: CubeTuple, free: Sequence[int], fixed: dict[int, int]) -> CubeTuple:
    """Restriction of ``c`` to the face with coordinates ``free`` varying."""
    V = vertices(c.n)
    sub = vertices(len(free))
    rows = []
    for w in sub:
        full = np.zeros(c.n, dtype=np.int64)
        for i, v in fixed.items():
            full[i] = v
        full[list(free)] = w
        rows.append(int(np.flatnonzero(np.all(V == full, axis=1))[0]))
    return CubeTuple(len(free), c.entries[rows])


def pullback(c: CubeTuple, m: int, sigma: Sequence[int | str]) -> CubeTuple:
    """Compose ``c`` with ``{0,1}^m -> {0,1}^n``, ``w -> (w[sigma_1], ..., w[sigma_n])``.

    Entries of ``sigma`` are source coordinates, or ``"0"``/``"1"`` for constants.
    """
    if len(sigma) != c.n:
        raise PreconditionError("sigma must have one entry per target coordinate")
    V = vertices(c.n)
    rows = []
    for w in vertices(m):
        img = np.array([int(s) if isinstance(s, str) else int(w[s]) for s in sigma], dtype=np.int64)
        rows.append(int(np.flatnonzero(np.all(V == img, axis=1))[0]) if c.n else 0)
    return CubeTuple(m, c.entries[rows])


def delta_k_vanishing(f: FunctionTable, k: int, budget: int = 1 << 26) -> bool:
    """Whether ``sum_w (-1)^|w| f(c_w)`` vanishes on every ``k``-cube of ``D^1(G)``.

    The ``k``-cubes of ``D^1(G)`` are the parallelepipeds ``x + w.h``; they are
    swept exhaustively, one value of ``h_1`` at a time.
    """
    if not f.exact:
        raise PreconditionError("delta_k_vanishing needs an exact table")
    spec = f.spec
    N = spec.order
    if k < 1:
        raise PreconditionError("k must be >= 1")
    ops = N ** (k + 1) * 2**k
    if ops > budget:
        raise BudgetError(f"cube sweep needs ~{ops} operations (budget {budget})", ops)
    add = spec.index_of_coords(spec.coords[:, None, :] + spec.coords[None, :, :])
    vals, den = f.nums, f.den
    omegas = list(itertools.product((0, 1), repeat=k))
    grids = np.ix_(*([np.arange(N)] * k))
    x = np.broadcast_to(grids[0], (N,) * k)
    hs = [np.broadcast_to(g, (N,) * k) for g in grids[1:]]
    for h1 in range(N):
        acc = np.zeros((N,) * k, dtype=vals.dtype)
        for w in omegas:
            pos = add[x, h1] if w[0] else x
            for wi, h in zip(w[1:], hs):
                if wi:
                    pos = add[pos, h]
            acc = acc + (-1) ** sum(w) * vals[pos]
        if np.any(acc % den):
            return False
    return True


def morphism_constancy(q: int, l: int, p: int, m: int) -> Report:
    """All maps ``Z/q^l -> Z/p^m`` that are polynomial (degree <= q^l) are constant."""
    from sympy import isprime

    if not (isprime(q) and isprime(p)):
        raise PreconditionError("q and p must be primes")
    if p == q:
        raise PreconditionError("the primes must be distinct")
    if q**l * p**m > 10**4:
        raise PreconditionError("q^l p^m must be <= 10^4")
    N, M = q**l, p**m
    dom = GroupSpec((N,))
    polys, nonconst = 0, []
    for vals in itertools.product(range(M), repeat=N):
        f = FunctionTable.from_ints(dom, vals, M)
        res = degree(f, cutoff=N)
        if res.polynomial:
            polys += 1
            if not f.is_constant():
                nonconst.append({"values": list(vals), "degree": res.degree})
    rep = Report(f"constancy(q^l={N}, p^m={M})")
    rep.add("only_constants_polynomial", not nonconst, nonconst[:5])
    rep.add("constants_found", polys == M, {"polynomial_maps": polys, "constants": M})
    rep.data.update(functions=M**N, polynomial=polys)
    return rep
