"""Symmetric multilinear forms on finite abelian groups, the nabla^k map, and
the finite universal system carrying a prescribed k-th discrete spectrum."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterator, Sequence

import numpy as np

from .errors import InvariantViolation, PreconditionError
from .groups import GroupElement, GroupSpec
from .polycalc.calculus import degree, generator_perms
from .rational import UnitRational
from .report import Report
from .tables import FunctionTable


def sorted_tuples(rank: int, order: int) -> list[tuple[int, ...]]:
    """Non-decreasing index tuples of length ``order`` over ``range(rank)``."""
    return list(itertools.combinations_with_replacement(range(rank), order))


def slot_modulus(spec: GroupSpec, idx: Sequence[int]) -> int:
    """Largest ``g`` with values on ``idx`` confined to (1/g)Z/Z: gcd of the slot moduli."""
    return reduce(math.gcd, (spec.moduli[i] for i in idx), 0) or 1


@dataclass(frozen=True)
class SymForm:
    """Symmetric multilinear ``b: Gamma^m -> R/Z`` stored on sorted generator tuples."""

    spec: GroupSpec
    order: int
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for idx, v in self.values.items():
            key = tuple(sorted(int(i) for i in idx))
            if len(key) != self.order or any(not 0 <= i < self.spec.rank for i in key):
                raise PreconditionError(f"bad index tuple {idx} for order {self.order}")
            v = v if isinstance(v, UnitRational) else UnitRational.parse(str(v))
            if v:
                clean[key] = v
        object.__setattr__(self, "values", clean)

    def value(self, idx: Sequence[int]) -> UnitRational:
        return self.values.get(tuple(sorted(idx)), UnitRational(0))

    def torsion_consistent(self) -> bool:
        """``d_i * b(..., e_i, ...) = 0`` for every slot."""
        return all(not (v * self.spec.moduli[i]) for idx, v in self.values.items() for i in idx)

    @property
    def den(self) -> int:
        return reduce(math.lcm, (v.den for v in self.values.values()), 1)

    def __call__(self, *args: GroupElement) -> UnitRational:
        return eval_form(self, *args)

    def __add__(self, other: "SymForm") -> "SymForm":
        if (other.spec, other.order) != (self.spec, self.order):
            raise PreconditionError("forms of different shape")
        vals = dict(self.values)
        for k, v in other.values.items():
            vals[k] = vals.get(k, UnitRational(0)) + v
        return SymForm(self.spec, self.order, vals)

    def __mul__(self, n: int) -> "SymForm":
        return SymForm(self.spec, self.order, {k: v * n for k, v in self.values.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SymForm):
            return NotImplemented
        return (self.spec, self.order, self.values) == (other.spec, other.order, other.values)

    def __hash__(self):
        return hash((self.spec, self.order, frozenset(self.values.items())))

    def to_json(self) -> dict:
        return {"order": self.order,
                "entries": [{"indices": list(k), "num": v.num, "den": v.den}
                            for k, v in sorted(self.values.items())]}

    @classmethod
    def from_json(cls, spec: GroupSpec, obj: dict) -> "SymForm":
        vals = {tuple(e["indices"]): UnitRational(int(e["num"]), int(e["den"])) for e in obj.get("entries", [])}
        form = cls(spec, int(obj["order"]), vals)
        if not form.torsion_consistent():
            raise PreconditionError("form violates torsion consistency")
        return form


def eval_form(b: SymForm, *args: GroupElement) -> UnitRational:
    """Multilinear expansion ``sum_{i_1..i_m} prod_j |g_j|_{i_j} b(e_i1, ..., e_im)``."""
    if len(args) != b.order:
        raise PreconditionError(f"form of order {b.order} got {len(args)} arguments")
    for g in args:
        if g.spec != b.spec:
            raise PreconditionError("argument from a different group")
    total = UnitRational(0)
    for idx in itertools.product(range(b.spec.rank), repeat=b.order):
        coeff = math.prod(g.coords[i] for g, i in zip(args, idx))
        if coeff:
            total = total + b.value(idx) * coeff
    return total


def enumerate_forms(spec: GroupSpec, order: int, max_den: int | None = None) -> Iterator[SymForm]:
    """Every torsion-consistent form (optionally only values with denominator <= max_den)."""
    tuples = sorted_tuples(spec.rank, order)
    mods = [slot_modulus(spec, t) for t in tuples]
    choices = []
    for g in mods:
        opts = [UnitRational(j, g) for j in range(g)]
        if max_den is not None:
            opts = [v for v in opts if v.den <= max_den]
        choices.append(opts)
    for combo in itertools.product(*choices):
        yield SymForm(spec, order, dict(zip(tuples, combo)))


def sml_size(spec: GroupSpec, order: int) -> int:
    return math.prod(slot_modulus(spec, t) for t in sorted_tuples(spec.rank, order))


def brute_force_sml_count(spec: GroupSpec, order: int) -> int:
    """Count symmetric multilinear tables without using the torsion rule.

    Every assignment of ``(1/m)Z/Z`` values to ordered generator tuples is
    extended multilinearly from residue lifts; the candidate is kept only if
    the resulting table on ``Gamma^order`` is well defined as a multilinear
    map (additive in each slot) and symmetric.
    """
    m = spec.exponent
    n = spec.rank
    N = spec.order
    ordered = list(itertools.product(range(n), repeat=order))
    lifts = spec.coords  # (N, n)
    # monomial weights: for each ordered index tuple, prod_j lift(g_j)[i_j] over all argument tuples
    args = list(itertools.product(range(N), repeat=order))
    W = np.array([[math.prod(int(lifts[a][i]) for a, i in zip(arg, idx)) for idx in ordered]
                  for arg in args], dtype=np.int64) % m
    add = spec.index_of_coords(lifts[:, None, :] + lifts[None, :, :])
    arg_index = {arg: t for t, arg in enumerate(args)}
    count = 0
    for vals in itertools.product(range(m), repeat=len(ordered)):
        table = (W @ np.array(vals, dtype=np.int64)) % m
        ok = True
        for arg, t in arg_index.items():
            perm_sorted = tuple(sorted(arg))
            if table[arg_index[perm_sorted]] != table[t]:
                ok = False
                break
        if ok:
            # additivity in the first slot (symmetry gives the rest)
            for t, arg in enumerate(args):
                rest = arg[1:]
                for y in range(N):
                    s = int(add[arg[0], y])
                    lhs = table[arg_index[(s,) + rest]]
                    rhs = (table[t] + table[arg_index[(y,) + rest]]) % m
                    if lhs != rhs:
                        ok = False
                        break
                if not ok:
                    break
        count += ok
    return count


class NablaFailure(PreconditionError):
    def __init__(self, message: str, tuple_: tuple[int, ...], witness: tuple[int, ...]):
        super().__init__(message)
        self.tuple = tuple_
        self.witness = witness


def nabla_k(P: FunctionTable, k: int, shifts: Sequence[np.ndarray] | None = None) -> SymForm:
    """``(d_{e_i1} ... d_{e_ik} P)`` on sorted generator tuples, each required to be constant."""
    if not P.exact:
        raise PreconditionError("nabla_k needs an exact table")
    spec = P.spec
    perms = generator_perms(spec) if shifts is None else list(shifts)
    gen_axes = [i for i, d in enumerate(spec.moduli) if d > 1]
    if shifts is None:
        axis_of = dict(zip(gen_axes, range(len(gen_axes))))
    else:
        axis_of = {i: i for i in range(spec.rank)}
    values = {}
    for idx in sorted_tuples(spec.rank, k):
        if any(i not in axis_of for i in idx):
            continue  # trivial factor: derivative along 0 vanishes
        g = P
        for i in idx:
            g = g.permute(perms[axis_of[i]]) - g
        if not g.is_constant():
            bad = int(np.argmax(g.nums != g.nums[0]))
            raise NablaFailure(f"{k}-fold derivative along {idx} is not constant", idx,
                               tuple(int(v) for v in spec.coords[bad]))
        values[idx] = g[0]
    return SymForm(spec, k, values)


# ---------------------------------------------------------------------------
# universal system


class UniversalSystem:
    """Finite truncation of ``SML_0 x ... x SML_{k-1} x {b}`` with shift

    ``T^g (b_i) = ( sum_j C(k-i, j) b_{i+j}(g^{x j}, .) )_i``.

    ``SML_0 = R/Z`` is cut down to (1/N)Z/Z with ``N`` the lcm of the exponent
    of Gamma and the denominators of ``b``.  States are stored as integer
    vectors in units of ``1/N``.
    """

    def __init__(self, b: SymForm, max_states: int = 10**6):
        if b.order < 1:
            raise PreconditionError("need k >= 1")
        if not b.torsion_consistent():
            raise PreconditionError("form violates torsion consistency")
        self.b = b
        self.spec = b.spec
        self.k = b.order
        self.N = math.lcm(self.spec.exponent, b.den)
        # coordinates: (component i, sorted tuple) for i = 0..k-1
        self.layout: list[tuple[int, tuple[int, ...]]] = []
        self.radix: list[int] = []
        for i in range(self.k):
            for t in sorted_tuples(self.spec.rank, i):
                self.layout.append((i, t))
                self.radix.append(self.N if i == 0 else slot_modulus(self.spec, t))
        self.size = math.prod(self.radix)
        if self.size > max_states:
            raise PreconditionError(f"universal system has {self.size} states (> {max_states})")
        self._pos = {key: j for j, key in enumerate(self.layout)}

    def __len__(self):
        return self.size

    @cached_property
    def states(self) -> np.ndarray:
        """All states as integer vectors in units of 1/N, shape (size, dim)."""
        digits = np.indices(self.radix, dtype=np.int64).reshape(len(self.radix), -1).T \
            if self.radix else np.zeros((1, 0), dtype=np.int64)
        unit = np.array([self.N // r for r in self.radix], dtype=np.int64)
        return digits * unit

    def state_index(self, vecs: np.ndarray) -> np.ndarray:
        unit = np.array([self.N // r for r in self.radix], dtype=np.int64)
        vecs = np.asarray(vecs, dtype=np.int64) % self.N
        if np.any(vecs % unit):
            raise InvariantViolation("shifted state left the truncated state space")
        digits = vecs // unit
        strides = np.ones(len(self.radix), dtype=np.int64)
        for j in range(len(self.radix) - 2, -1, -1):
            strides[j] = strides[j + 1] * self.radix[j + 1]
        return digits @ strides

    def _component_value(self, comp: int, full_idx: tuple[int, ...]) -> tuple[str, object]:
        """Where ``b_comp(e_full_idx)`` lives: a state coordinate or a constant of ``b``."""
        if comp == self.k:
            return "const", self.b.value(full_idx)
        return "coord", self._pos[(comp, tuple(sorted(full_idx)))]

    def shift_matrix(self, g: GroupElement) -> tuple[np.ndarray, np.ndarray]:
        """``T^g`` as ``state -> A @ state + c (mod N)``."""
        dim = len(self.layout)
        A = np.zeros((dim, dim), dtype=object)
        c = np.zeros(dim, dtype=object)
        lift = g.coords
        for row, (i, t) in enumerate(self.layout):
            for j in range(0, self.k - i + 1):
                binom = math.comb(self.k - i, j)
                # b_{i+j}(g, ..., g, e_t) = sum over s in rank^j of prod lift[s] * b_{i+j}(e_s, e_t)
                for s in itertools.product(range(self.spec.rank), repeat=j):
                    w = binom * math.prod(lift[x] for x in s)
                    if not w:
                        continue
                    kind, where = self._component_value(i + j, s + t)
                    if kind == "coord":
                        A[row, where] += w
                    else:
                        c[row] += w * where.num * (self.N // where.den)
        return A % self.N, c % self.N

    def shift_perm(self, g: GroupElement) -> np.ndarray:
        A, c = self.shift_matrix(g)
        S = self.states
        new = (S @ A.astype(np.int64).T + c.astype(np.int64)) % self.N
        return self.state_index(new)

    @cached_property
    def perms(self) -> np.ndarray:
        """``perms[g_index]`` is the state permutation of ``T^g``."""
        return np.stack([self.shift_perm(g) for g in self.spec.elements()])

    def generator_perms(self) -> list[np.ndarray]:
        return [self.perms[e.index] for e in self.spec.generators()]

    def coordinate_table(self) -> FunctionTable:
        """``P((b_i)) = b_0`` as an exact table over the state space."""
        spec = GroupSpec((self.size,))
        return FunctionTable.from_ints(spec, self.states[:, 0] if self.layout else np.zeros(self.size), self.N)

    def apply(self, g: GroupElement, state: Sequence[UnitRational]) -> list[UnitRational]:
        """Shift a single state given as UnitRationals in layout order (slow reference path)."""
        A, c = self.shift_matrix(g)
        v = [int(s.num * (self.N // s.den)) for s in state]
        return [UnitRational(int(sum(A[r, j] * v[j] for j in range(len(v))) + c[r]), self.N)
                for r in range(len(v))]


def build_universal_system(b: SymForm, max_states: int = 10**6) -> UniversalSystem:
    return UniversalSystem(b, max_states)


def verify_action(sys: UniversalSystem) -> Report:
    """``T^g T^h = T^{g+h}`` on every state, plus ``(T^g)^ord(g) = id``."""
    rep = Report("universal_action")
    perms = sys.perms
    spec = sys.spec
    ident = np.arange(sys.size)
    bad = None
    for g in spec.elements():
        for h in spec.elements():
            lhs = perms[g.index][perms[h.index]]
            if not np.array_equal(lhs, perms[(g + h).index]):
                bad = {"g": g.coords, "h": h.coords, "state": int(np.argmax(lhs != perms[(g + h).index]))}
                break
        if bad:
            break
    rep.add("composition_law", bad is None, bad)
    rep.add("identity", bool(np.array_equal(perms[spec.zero().index], ident)))
    orders_ok = True
    for g in spec.elements():
        p = ident
        for _ in range(g.order()):
            p = perms[g.index][p]
        orders_ok &= bool(np.array_equal(p, ident))
    rep.add("finite_order", orders_ok)
    if bad is not None:
        raise InvariantViolation("universal shift is not an action", bad)
    return rep


def verify_spectrum(sys: UniversalSystem) -> Report:
    """``d_{g1} ... d_{gk} b_0 = k! b(g1, ..., gk)`` for all generator tuples."""
    rep = Report("universal_spectrum")
    P = sys.coordinate_table()
    gens = sys.spec.generators()
    gperms = [sys.perms[e.index] for e in gens]
    fact = math.factorial(sys.k)
    bad = None
    for idx in itertools.product(range(len(gens)), repeat=sys.k):
        g = P
        for i in idx:
            g = g.permute(gperms[i]) - g
        expected = sys.b(*[gens[i] for i in idx]) * fact
        if not (g.is_constant() and g[0] == expected):
            bad = {"tuple": [gens[i].coords for i in idx], "expected": str(expected)}
            break
    rep.add("kfold_derivative_equals_k_factorial_b", bad is None, bad)
    res = degree(P, shifts=gperms, cutoff=sys.k + 1)
    rep.add("b0_polynomial_degree_at_most_k", res.at_most(sys.k), res.to_json())
    if bad is not None:
        raise InvariantViolation("spectrum identity failed", bad)
    return rep


def verify_k3_expansion(sys: UniversalSystem) -> Report:
    """Check the explicit k = 3 component formulas against the general shift.

    ``b0' = b0 + 3 b1(g) + 3 b2(g,g) + b3(g,g,g)``,
    ``b1'(x) = b1(x) + 2 b2(g,x) + b3(g,g,x)``, ``b2'(x,y) = b2(x,y) + b3(g,x,y)``.
    """
    if sys.k != 3:
        raise PreconditionError("k = 3 expansion check needs an order-3 form")
    rep = Report("universal_k3_expansion")
    spec, b, N = sys.spec, sys.b, sys.N
    gens = spec.generators()
    S = sys.states

    def form(V: np.ndarray, i: int, *args: GroupElement) -> np.ndarray:
        out = np.zeros(V.shape[0], dtype=np.int64)
        for t in itertools.product(range(spec.rank), repeat=i):
            c = math.prod(a.coords[x] for a, x in zip(args, t))
            if not c:
                continue
            if i == 3:
                v = b.value(t)
                out = out + c * v.num * (N // v.den)
            else:
                out = out + c * V[:, sys._pos[(i, tuple(sorted(t)))]]
        return out % N

    for g in spec.elements():
        W = S[sys.perms[g.index]]
        checks = [(form(W, 0), (form(S, 0) + 3 * form(S, 1, g) + 3 * form(S, 2, g, g) + form(S, 3, g, g, g)) % N)]
        for e1 in gens:
            checks.append((form(W, 1, e1),
                           (form(S, 1, e1) + 2 * form(S, 2, g, e1) + form(S, 3, g, g, e1)) % N))
            for e2 in gens:
                checks.append((form(W, 2, e1, e2), (form(S, 2, e1, e2) + form(S, 3, g, e1, e2)) % N))
        for got, want in checks:
            if not np.array_equal(got, want):
                bad = int(np.argmax(got != want))
                rep.add("displayed_k3_formulas", False, {"g": g.coords, "state": bad})
                return rep
    rep.add("displayed_k3_formulas", True)
    return rep


def divide_form(b: SymForm, n: int) -> SymForm | None:
    """Some ``b'`` with ``n b' = b`` (slot-wise division keeping torsion), or None."""
    vals = {}
    for idx in sorted_tuples(b.spec.rank, b.order):
        g = slot_modulus(b.spec, idx)
        target = b.value(idx)
        found = None
        for j in range(g):
            cand = UnitRational(j, g)
            if cand * n == target:
                found = cand
                break
        if found is None:
            return None
        vals[idx] = found
    return SymForm(b.spec, b.order, vals)
