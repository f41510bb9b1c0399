"""Finite skew-product systems, cocycle algebra and a gallery of worked systems.

A :class:`SkewSystem` is a rotation ``z -> z + phi(gamma)`` on a finite
abelian group ``Z``, optionally extended by a cyclic fiber ``Z/q`` through a
table ``rho[gamma, z]``.  Fiber values double as elements of ``(1/q)Z/Z``.
Actions of ``Z^d`` are represented by a periodic window ``(Z/P)^d``.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BudgetError, InvariantViolation, PreconditionError
from .groups import GroupSpec
from .polycalc.calculus import DegreeResult, default_cutoff, degree
from .rational import UnitRational
from .report import Report
from .tables import FunctionTable

RhoFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class SkewSystem:
    """``T^g (z, u) = (z + shift[g], u + rho[g, z])``.

    ``acting`` enumerates the acting group (or its window when ``lattice``),
    ``shift`` has shape ``(|acting|, rank Z)`` and ``rho`` has shape
    ``(|acting|, |Z|)`` with entries mod ``fiber``.  With ``fiber=None`` the
    system is the rotation on ``Z`` alone.
    """

    name: str
    base: GroupSpec
    acting: GroupSpec
    shift: np.ndarray
    fiber: int | None = None
    rho: np.ndarray | None = None
    lattice: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        shift = np.asarray(self.shift, dtype=np.int64).reshape(self.acting.order, self.base.rank)
        object.__setattr__(self, "shift", shift % np.array(self.base.moduli, dtype=np.int64))
        if (self.fiber is None) != (self.rho is None):
            raise PreconditionError("fiber and rho must be given together")
        if self.rho is not None:
            rho = np.asarray(self.rho, dtype=np.int64).reshape(self.acting.order, self.base.order)
            object.__setattr__(self, "rho", rho % self.fiber)

    # ---- state space ----------------------------------------------------
    @property
    def q(self) -> int:
        return self.fiber or 1

    @property
    def states(self) -> GroupSpec:
        """Index set of states: coordinates ``(z_1, .., z_n, u)``."""
        return GroupSpec(self.base.moduli + ((self.fiber,) if self.fiber else ()))

    @property
    def size(self) -> int:
        return self.base.order * self.q

    def generator_indices(self) -> list[int]:
        return [e.index for e in self.acting.generators()]

    def base_perm(self, g: int) -> np.ndarray:
        return self.base.index_of_coords(self.base.coords + self.shift[g])

    def perm(self, g: int) -> np.ndarray:
        bp = self.base_perm(g)
        if not self.fiber:
            return bp
        z = np.repeat(np.arange(self.base.order), self.q)
        u = np.tile(np.arange(self.q), self.base.order)
        return bp[z] * self.q + (u + self.rho[g][z]) % self.q

    def generator_perms(self) -> list[np.ndarray]:
        return [self.perm(g) for g in self.generator_indices()]

    def base_generator_perms(self) -> list[np.ndarray]:
        return [self.base_perm(g) for g in self.generator_indices()]

    def act_index(self, g: int, h: int) -> int:
        """Index of ``g + h`` in the acting group (or window)."""
        a = self.acting
        return int(a.index_of_coords(a.coords[g] + a.coords[h]))

    def cutoff(self, den: int) -> int:
        return default_cutoff(self.acting, den) + 1

    def degree(self, f: FunctionTable, on_base: bool = False) -> DegreeResult:
        """Degree of ``f`` with respect to the system's action."""
        perms = self.base_generator_perms() if on_base else self.generator_perms()
        return degree(f, shifts=perms, cutoff=self.cutoff(f.den))

    def base_table(self, nums, den: int) -> FunctionTable:
        return FunctionTable.from_ints(self.base, nums, den)

    def state_table(self, nums, den: int) -> FunctionTable:
        return FunctionTable.from_ints(self.states, nums, den)

    def to_json(self) -> dict:
        return {"name": self.name, "base": str(self.base), "acting": str(self.acting),
                "lattice": self.lattice, "fiber": self.fiber, "states": self.size, **self.meta}


def rotation_system(base: GroupSpec, acting: GroupSpec, phi: Callable[[np.ndarray], np.ndarray],
                    *, lattice: bool = False, name: str = "rotation") -> SkewSystem:
    """Rotation by ``phi(gamma)`` (``gamma`` as integer coordinates)."""
    shift = np.array([phi(g) for g in acting.coords], dtype=np.int64).reshape(acting.order, base.rank)
    return SkewSystem(name, base, acting, shift, lattice=lattice)


def rho_table(sys: SkewSystem, fn: RhoFn, q: int, offset: np.ndarray | None = None) -> np.ndarray:
    """``fn(gamma, z)`` on the window, shape ``(|acting|, |Z|)`` mod ``q``."""
    gam = sys.acting.coords if offset is None else sys.acting.coords + offset
    out = fn(gam[:, None, :], sys.base.coords[None, :, :])
    return np.broadcast_to(np.asarray(out, dtype=np.int64), (sys.acting.order, sys.base.order)) % q


def check_periodic(sys: SkewSystem, fn: RhoFn, q: int) -> None:
    """``fn`` and the base shift must be periodic with the declared window."""
    base = rho_table(sys, fn, q)
    for j, P in enumerate(sys.acting.moduli):
        off = np.zeros(sys.acting.rank, dtype=np.int64)
        off[j] = P
        if not np.array_equal(rho_table(sys, fn, q, off), base):
            raise PreconditionError(f"cocycle formula is not {P}-periodic in coordinate {j + 1}")


def skew_extend(sys: SkewSystem, fn: RhoFn, q: int, name: str | None = None) -> SkewSystem:
    """Skew extension of the rotation ``sys`` by ``rho = fn`` with fiber ``Z/q``."""
    if sys.lattice:
        check_periodic(sys, fn, q)
    return SkewSystem(name or sys.name, sys.base, sys.acting, sys.shift, q, rho_table(sys, fn, q),
                      sys.lattice, dict(sys.meta))


# ---- cocycle algebra ----------------------------------------------------

def coboundary(sys: SkewSystem, F: np.ndarray, q: int) -> np.ndarray:
    """``(dF)_g(z) = F(z + shift g) - F(z)`` for every ``g``, shape ``(|acting|, |Z|)``."""
    F = np.asarray(F, dtype=np.int64)
    return np.stack([(F[sys.base_perm(g)] - F) % q for g in range(sys.acting.order)])


def cocycle_defects(sys: SkewSystem, rho: np.ndarray, q: int) -> np.ndarray:
    """``rho[g+h] - rho[g] - rho[h] o T^g`` for all pairs, shape ``(|A|, |A|, |Z|)``."""
    A = sys.acting
    plus = A.index_of_coords(A.coords[:, None, :] + A.coords[None, :, :])
    bperm = np.stack([sys.base_perm(g) for g in range(A.order)])
    moved = rho[:, bperm].transpose(1, 0, 2)  # moved[g, h] = rho[h] o T^g
    return (rho[plus] - rho[:, None, :] - moved) % q


def verify_cocycle(sys: SkewSystem, rho: np.ndarray | None = None, q: int | None = None) -> Report:
    """Pointwise cocycle law over the whole window, with a witness on failure."""
    rho = sys.rho if rho is None else np.asarray(rho, dtype=np.int64)
    q = sys.fiber if q is None else q
    if rho is None:
        raise PreconditionError("system carries no cocycle")
    defects = cocycle_defects(sys, rho, q)
    rep = Report(f"cocycle:{sys.name}")
    bad = np.argwhere(defects)
    witness = None
    if bad.size:
        g, h, z = (int(v) for v in bad[0])
        witness = {"gamma": sys.acting.coords[g].tolist(), "gamma_prime": sys.acting.coords[h].tolist(),
                   "z": sys.base.coords[z].tolist(), "defect": str(UnitRational(int(defects[g, h, z]), q))}
    rep.add("cocycle_law", not bad.size, witness)
    return rep


@dataclass(frozen=True)
class CoboundaryResult:
    F: np.ndarray | None
    q: int
    obstruction: dict | None
    orbits: int

    @property
    def found(self) -> bool:
        return self.F is not None

    def to_json(self) -> dict:
        return {"found": self.found, "orbits": self.orbits, "obstruction": self.obstruction,
                "F": None if self.F is None else [str(UnitRational(int(v), self.q)) for v in self.F]}


def coboundary_solve(sys: SkewSystem, rho: np.ndarray, q: int) -> CoboundaryResult:
    """Solve ``dF = rho`` on the base by propagation along orbits.

    ``rho`` may hold every window element or only the generators (rows in
    :meth:`SkewSystem.generator_indices` order).  Each orbit is seeded with
    ``F = 0``; a mismatch on a closing edge is reported as the cycle sum.
    """
    rho = np.asarray(rho, dtype=np.int64) % q
    gens = sys.generator_indices()
    full = rho.shape[0] == sys.acting.order
    grows = rho[gens] if full else rho
    if grows.shape != (len(gens), sys.base.order):
        raise PreconditionError("rho must have one row per window element or per generator")
    perms = sys.base_generator_perms()
    F = np.full(sys.base.order, -1, dtype=np.int64)
    orbits = 0
    for seed in range(sys.base.order):
        if F[seed] >= 0:
            continue
        orbits += 1
        F[seed] = 0
        queue = deque([seed])
        while queue:
            z = queue.popleft()
            for j, p in enumerate(perms):
                w = int(p[z])
                val = (F[z] + grows[j, z]) % q
                if F[w] < 0:
                    F[w] = val
                    queue.append(w)
                elif F[w] != val:
                    ob = {"generator": j, "z": sys.base.coords[z].tolist(),
                          "cycle_sum": str(UnitRational(int(val - F[w]), q))}
                    return CoboundaryResult(None, q, ob, orbits)
    if full and np.any((coboundary(sys, F, q) - rho) % q):
        g, z = (int(v) for v in np.argwhere((coboundary(sys, F, q) - rho) % q)[0])
        ob = {"gamma": sys.acting.coords[g].tolist(), "z": sys.base.coords[z].tolist(),
              "reason": "generator solution does not extend to the window"}
        return CoboundaryResult(None, q, ob, orbits)
    return CoboundaryResult(F, q, None, orbits)


@dataclass(frozen=True)
class QuasiDefect:
    gamma: tuple[int, ...]
    gamma_prime: tuple[int, ...]
    defect: FunctionTable
    degree: DegreeResult

    def to_json(self) -> dict:
        return {"gamma": list(self.gamma), "gamma_prime": list(self.gamma_prime),
                "defect": [str(v) for v in self.defect.values], "degree": self.degree.to_json()}


def quasi_defect(sys: SkewSystem, g: int, h: int, rho: np.ndarray | None = None,
                 q: int | None = None) -> QuasiDefect:
    """``rho[g+h] - rho[g] - rho[h] o T^g`` as a table on the base, with its degree."""
    rho = sys.rho if rho is None else np.asarray(rho, dtype=np.int64)
    q = sys.fiber if q is None else q
    d = (rho[sys.act_index(g, h)] - rho[g] - rho[h][sys.base_perm(g)]) % q
    table = sys.base_table(d, q)
    return QuasiDefect(tuple(int(v) for v in sys.acting.coords[g]), tuple(int(v) for v in sys.acting.coords[h]),
                       table, sys.degree(table, on_base=True))


def _order(perm: np.ndarray) -> int:
    ident = np.arange(perm.shape[0])
    p, k = perm, 1
    while not np.array_equal(p, ident):
        p = p[perm]
        k += 1
    return k


# ---- gallery -----------------------------------------------------------

def _z4z_skew(n: int) -> SkewSystem:
    """``(Z/4)^n`` acting on ``(Z/2)^n x Z/2`` by ``T_i(z, u) = (z + e_i, u + z_i)``."""
    base = GroupSpec((2,) * n)
    rot = rotation_system(base, GroupSpec((4,) * n), lambda g: g % 2, name="z4z-skew")

    def sigma(g, z):
        return (g * z + g * (g - 1) // 2).sum(axis=-1)

    return skew_extend(rot, sigma, 2)


def _quasi_remark() -> SkewSystem:
    """``Z^2`` (window 4) rotating ``(Z/4)^2`` with ``rho = -g_1 x_2 / 4``."""
    base = GroupSpec((4, 4))
    rot = rotation_system(base, GroupSpec((4, 4)), lambda g: g, lattice=True, name="quasi-remark")
    return skew_extend(rot, lambda g, x: -g[..., 0] * x[..., 1], 4)


def _remark_F(x: np.ndarray) -> np.ndarray:
    """``F(x) = x_1^2 x_2 / 4`` as numerators mod 4."""
    return (x[..., 0] ** 2 * x[..., 1]) % 4


def _appendix_d(n: int, q: int = 8) -> SkewSystem:
    """``F_2^n`` rotating ``(Z/2)^n`` with ``rho_g(z) = sum |z_i + g_i| - |z_i|`` mod ``q``."""
    base = GroupSpec((2,) * n)
    rot = rotation_system(base, GroupSpec((2,) * n), lambda g: g, name=f"appendixD(mod {q})")

    def rho(g, z):
        return (((z + g) % 2) - z).sum(axis=-1)

    return skew_extend(rot, rho, q)


GALLERY = ("z4z-skew", "quasi-remark", "appendixD")


def gallery_build(name: str, n: int = 2) -> SkewSystem:
    if name not in GALLERY:
        raise PreconditionError(f"unknown gallery system {name!r}; choose from {', '.join(GALLERY)}")
    if name == "quasi-remark":
        return _quasi_remark()
    if not 1 <= n <= 12:
        raise PreconditionError("gallery size n must lie in 1..12")
    return _z4z_skew(n) if name == "z4z-skew" else _appendix_d(n)


def gallery_suite(name: str, n: int = 2) -> Report:
    """Exhaustive identity checks attached to a gallery system."""
    if name not in GALLERY:
        raise PreconditionError(f"unknown gallery system {name!r}")
    if name != "quasi-remark" and n > 3:
        raise PreconditionError("exhaustive gallery suites are limited to n <= 3")
    sys = gallery_build(name, n)
    rep = {"z4z-skew": _suite_z4z, "quasi-remark": _suite_quasi, "appendixD": _suite_appendix_d}[name](sys, n)
    rep.data["system"] = sys.to_json()
    return rep


def _roundtrip_checks(rep: Report, sys: SkewSystem, seed: int = 0) -> None:
    """Coboundaries are cocycles, solve back, and leave quasi-defects unchanged."""
    rng = np.random.default_rng(seed)
    q = sys.q
    F = rng.integers(0, q, sys.base.order)
    dF = coboundary(sys, F, q)
    rep.add("coboundary_is_cocycle", verify_cocycle(sys, dF, q).passed)
    sol = coboundary_solve(sys, dF, q)
    ok = sol.found and not np.any((coboundary(sys, sol.F, q) - dF) % q)
    rep.add("coboundary_roundtrip", ok, {"orbits": sol.orbits})
    shifted = (sys.rho + dF) % q
    same = True
    for g, h in itertools.product(range(sys.acting.order), repeat=2):
        a = quasi_defect(sys, g, h)
        b = quasi_defect(sys, g, h, shifted, q)
        if a.defect != b.defect or a.degree != b.degree:
            same = False
            break
    rep.add("defects_invariant_under_coboundary", same)


def _suite_z4z(sys: SkewSystem, n: int) -> Report:
    rep = Report(f"gallery:z4z-skew(n={n})")
    perms = sys.generator_perms()
    rep.add("T_i^4_identity", all(_order(p) in (1, 2, 4) and np.array_equal(p[p][p][p], np.arange(sys.size))
                                  for p in perms), {"orders": [_order(p) for p in perms]})
    rep.add("T_i_commute", all(np.array_equal(a[b], b[a]) for a, b in itertools.combinations(perms, 2)))
    # T_i(z, u) = (z + e_i, u + z_i) directly
    st = sys.states.coords
    direct = True
    for i, p in enumerate(perms):
        img = st.copy()
        img[:, i] = (img[:, i] + 1) % 2
        img[:, -1] = (st[:, -1] + st[:, i]) % 2
        direct &= bool(np.array_equal(p, sys.states.index_of_coords(img)))
    rep.add("generator_formula", direct)
    rep.extend(verify_cocycle(sys), "sigma")
    lin = [sys.degree(sys.base_table(sys.rho[g], 2), on_base=True) for g in range(sys.acting.order)]
    rep.add("sigma_degree_le_1", all(d.at_most(1) for d in lin),
            {"max_degree": max(d.effective() for d in lin)})
    nonconst = coboundary_solve(sys, sys.rho, 2)
    rep.data["sigma_coboundary"] = nonconst.found
    _roundtrip_checks(rep, sys)
    return rep


def quasi_remark_second_derivative(g, s, t) -> int:
    """Numerator (over 2) of ``(s1 t1 g2 + s1 t2 g1 + s2 t1 g1) / 2``."""
    return (s[0] * t[0] * g[1] + s[0] * t[1] * g[0] + s[1] * t[0] * g[0]) % 2


def quasi_remark_contradiction(s, t) -> tuple[UnitRational, UnitRational]:
    """Both sides of the symmetry identity forced on a would-be quasi-coboundary."""
    left = UnitRational(s[0] * s[0] * t[1] + s[0] * s[1] * t[0] + s[1] * s[0] * t[0], 2)
    right = UnitRational(s[0] * t[0] * t[1] + s[0] * t[1] * t[0] + s[1] * t[0] * t[0], 2)
    return left, right


def _suite_quasi(sys: SkewSystem, n: int) -> Report:
    rep = Report("gallery:quasi-remark")
    A, Z = sys.acting, sys.base
    rep.add("window_periodic", True, {"period": 4})
    # rho is not a cocycle; its defects are the constants g'_1 g_2 / 4
    ok, deg0 = True, True
    for g, h in itertools.product(range(A.order), repeat=2):
        d = quasi_defect(sys, g, h)
        want = (A.coords[h][0] * A.coords[g][1]) % 4
        ok &= bool(np.all(d.defect.nums_over(4) == want))
        deg0 &= d.degree.at_most(0)
    rep.add("defect_formula", ok)
    rep.add("defect_degree_0", deg0)
    rep.data["rho_is_cocycle"] = verify_cocycle(sys).passed
    Fn = _remark_F(Z.coords)
    rho2 = (sys.rho + coboundary(sys, Fn, 4)) % 4
    same = all(quasi_defect(sys, g, h, rho2, 4).degree == quasi_defect(sys, g, h).degree
               for g, h in itertools.product(range(A.order), repeat=2))
    rep.add("rho_prime_same_defect_degrees", same)

    def d_along(table: np.ndarray, s) -> np.ndarray:
        return (table[Z.shift_perm(Z.element(s))] - table) % 4

    rep.add("d_(2,0)_rho_prime_zero", all(not d_along(rho2[g], (2, 0)).any() for g in range(A.order)))
    rep.add("d_(0,2)_rho_prime_zero", all(not d_along(rho2[g], (0, 2)).any() for g in range(A.order)))
    formula = True
    for g in range(A.order):
        for s, t in itertools.product(A.coords, repeat=2):
            dd = d_along(d_along(rho2[g], s), t)
            want = 2 * quasi_remark_second_derivative(A.coords[g], s, t)
            formula &= bool(np.all(dd == want))
    rep.add("second_derivative_formula", formula, {"points": Z.order})
    left, right = quasi_remark_contradiction((1, 0), (0, 1))
    rep.add("contradiction_witness", left != right, {"s": [1, 0], "t": [0, 1], "left": left, "right": right})
    rep.extend(_descended_checks(rho2))
    _roundtrip_checks(rep, SkewSystem(sys.name, Z, A, sys.shift, 4, rho2, True))
    return rep


def _descended_checks(rho2: np.ndarray) -> Report:
    """``rho'`` is ``(2Z)^2``-periodic in ``x``, so it descends to ``(Z/2)^2``."""
    rep = Report("descent")
    x = GroupSpec((4, 4)).coords
    w_idx = GroupSpec((2, 2)).index_of_coords(x % 2)
    ok = True
    for row in rho2:
        desc = np.zeros(4, dtype=np.int64)
        desc[w_idx] = row
        ok &= bool(np.array_equal(desc[w_idx], row))
    rep.add("rho_prime_descends", ok)
    return rep


def _suite_appendix_d(sys: SkewSystem, n: int) -> Report:
    rep = Report(f"gallery:appendixD(n={n})")
    rep.extend(verify_cocycle(sys), "rho")
    perms = sys.generator_perms()
    rep.add("action_commutes", all(np.array_equal(a[b], b[a]) for a, b in itertools.combinations(perms, 2)))
    rep.add("action_order_2", all(np.array_equal(p[p], np.arange(sys.size)) for p in perms))
    # rho mod 4 = sum |g_i| (1 + 2 |z_i|)
    A, Z = sys.acting, sys.base
    alt = (A.coords[:, None, :] * (1 + 2 * Z.coords[None, :, :])).sum(axis=-1) % 4
    rep.add("rho_mod_4_formula", bool(np.array_equal(sys.rho % 4, alt)))
    X = _appendix_d(n, 4)
    sig = sigma_table(X)
    rep.add("F_mod_4_is_t", bool(np.all(appendix_d_F(X.states.coords) % 4 == X.states.coords[:, -1])))
    rep.add("sigma_integral", sig is not None)
    if sig is not None:
        rep.add("sigma_cocycle", _state_cocycle_ok(X, sig, 2))
    _roundtrip_checks(rep, sys)
    return rep


def appendix_d_F(states: np.ndarray) -> np.ndarray:
    """``F(z, i mod 4) = i mod 8`` for ``i = 0..3``."""
    return states[:, -1] % 4


def sigma_table(X: SkewSystem) -> np.ndarray | None:
    """``sigma_g(z, t) = (rho_g(z) - d_g F(z, t)) / 4`` on the mod-4 system, or None if not integral."""
    F = appendix_d_F(X.states.coords)
    z = X.states.coords[:, :-1]
    rows = []
    for g in range(X.acting.order):
        rho8 = ((((z + X.acting.coords[g]) % 2) - z).sum(axis=-1)) % 8
        dF = (F[X.perm(g)] - F) % 8
        num = (rho8 - dF) % 8
        if np.any(num % 4):
            return None
        rows.append(num // 4)
    return np.array(rows, dtype=np.int64)


def _state_cocycle_ok(X: SkewSystem, sig: np.ndarray, q: int) -> bool:
    """Cocycle law for a table ``sig[g, state]`` over the full system ``X``."""
    A = X.acting
    P = [X.perm(g) for g in range(A.order)]
    for g, h in itertools.product(range(A.order), repeat=2):
        if np.any((sig[X.act_index(g, h)] - sig[g] - sig[h][P[g]]) % q):
            return False
    return True


def appendixD_checks(n: int) -> Report:
    """Degree measurements on ``Y_n = (Z/2)^n x Z/8`` and on ``F_2^n``.

    The reported degrees are compared with three: ``phi = t/8`` differs from
    ``sum |z_i| / 8`` by an invariant function, so both have the same degree.
    """
    if not 1 <= n <= 4:
        raise PreconditionError("appendixD_checks needs 1 <= n <= 4")
    Y = _appendix_d(n, 8)
    st = Y.states.coords
    A = Y.acting
    rep = Report(f"appendixD(n={n})")
    phi = Y.state_table(st[:, -1], 8)
    dphi = Y.degree(phi)
    iota = Y.state_table(st[:, -1] % 4, 4)
    diota = Y.degree(iota)
    F2 = GroupSpec((2,) * n)
    f = FunctionTable.from_ints(F2, F2.coords.sum(axis=1), 8)
    df = degree(f)
    P = [Y.perm(g) for g in range(A.order)]

    def deriv(nums, p):
        return (nums[p] - nums) % 8

    tri, tri_f = True, True
    fourth = True
    for a, b, c in itertools.product(range(A.order), repeat=3):
        want = 4 * int((A.coords[a] * A.coords[b] * A.coords[c]).sum() % 2)
        d3 = deriv(deriv(deriv(phi.nums_over(8), P[a]), P[b]), P[c])
        tri &= bool(np.all(d3 == want))
        sp = [F2.shift_perm(F2.element_at(i)) for i in (a, b, c)]
        g3 = deriv(deriv(deriv(f.nums_over(8), sp[0]), sp[1]), sp[2])
        tri_f &= bool(np.all(g3 == want))
    for gens in itertools.combinations_with_replacement(Y.generator_indices(), 4):
        d4 = phi.nums_over(8)
        for g in gens:
            d4 = deriv(d4, P[g])
        fourth &= not d4.any()
    rep.add("phi_third_derivative_trilinear", tri)
    rep.add("phi_fourth_derivative_zero", fourth)
    rep.add("phi_degree_3", dphi.degree == 3, dphi.to_json())
    rep.add("iota_degree_2", diota.degree == 2, diota.to_json())
    rep.add("f_degree_3", df.degree == 3, df.to_json())
    rep.add("f_third_derivative_trilinear", tri_f)
    e1 = A.generators()[0].index
    rep.add("trilinear_e1_e1_e1", UnitRational(int(deriv(deriv(deriv(phi.nums_over(8), P[e1]), P[e1]),
                                                              P[e1])[0]), 8) == UnitRational(1, 2))
    inv = (st[:, -1] - st[:, :-1].sum(axis=1)) % 8
    rep.add("t_minus_sum_invariant", all(np.array_equal(inv[p], inv) for p in P))
    rep.data.update(degree_phi=dphi.degree, degree_iota=diota.degree, degree_f=df.degree)
    return rep


# ---- root search --------------------------------------------------------

@dataclass(frozen=True)
class RootSearchResult:
    candidates: int
    examined: int
    witnesses: list

    @property
    def found(self) -> bool:
        return bool(self.witnesses)

    def to_json(self) -> dict:
        return {"candidates": self.candidates, "examined": self.examined, "found": self.found,
                "witnesses": self.witnesses}


def exact_root_search(sys: SkewSystem, target: FunctionTable, n: int, maxdeg: int,
                      max_den: int | None = None, budget: int = 1 << 16) -> RootSearchResult:
    """All ``Q`` on the states with ``n Q = target`` and bounded denominator, kept when degree <= maxdeg.

    Every root is ``target/n + c`` with ``c`` valued in ``(1/n)Z/Z``; the sweep
    runs over all such ``c``.
    """
    if not target.exact:
        raise PreconditionError("target must be exact")
    if target.spec != sys.states:
        raise PreconditionError("target must live on the system's state space")
    if n < 1:
        raise PreconditionError("divisor must be positive")
    N = sys.size
    total = n**N
    if total > budget:
        raise BudgetError(f"{total} root candidates exceed budget {budget}", total)
    D = n * target.den
    base = target.nums_over(target.den).astype(np.int64)
    witnesses, examined = [], 0
    for corr in itertools.product(range(n), repeat=N):
        nums = (base + target.den * np.array(corr, dtype=np.int64)) % D
        Q = sys.state_table(nums, D)
        if max_den is not None and Q.den > max_den:
            continue
        examined += 1
        d = sys.degree(Q)
        if d.at_most(maxdeg):
            witnesses.append({"values": [str(v) for v in Q.values], "degree": d.effective()})
    return RootSearchResult(total, examined, witnesses)
