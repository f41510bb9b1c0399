"""Gowers uniformity norms, inner products and polynomial-phase correlation search."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal, Sequence

import numpy as np

from ._parallel import ordered_map
from .errors import BudgetError, InvariantViolation, PreconditionError
from .fourier import fourier_transform
from .groups import Character, GroupSpec
from .polycalc.phases import PolynomialPhase, monomial_values, monomials
from .rational import UnitRational
from .report import Report
from .tables import FunctionTable

Method = Literal["naive", "recursive", "fourier-u2"]

DEFAULT_BUDGET = 10**9
_CHUNK = 1 << 21


def _complex(f: FunctionTable) -> np.ndarray:
    """Complex values; exact tables are read as phases ``e(f)``."""
    return f.phase().array if f.exact else f.array


@lru_cache(maxsize=32)
def _add_table(spec: GroupSpec) -> np.ndarray:
    c = spec.coords
    return spec.index_of_coords(c[:, None, :] + c[None, :, :])


def _fsum_complex(parts: Sequence[complex]) -> complex:
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


@dataclass(frozen=True)
class NormRequest:
    f: FunctionTable
    k: int
    method: Method = "naive"
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.k < 1:
            raise PreconditionError("k must be >= 1")
        if self.method not in ("naive", "recursive", "fourier-u2"):
            raise PreconditionError(f"unknown method {self.method!r}")
        if self.method == "fourier-u2" and self.k != 2:
            raise PreconditionError("fourier-u2 is only valid for k = 2")


def _cube_average(arrays: Sequence[np.ndarray], spec: GroupSpec, n: int, budget: int) -> complex:
    """``E_{x,h_1..h_n} prod_w arrays[w](x + w.h)`` with ``w`` in lexicographic order."""
    N = spec.order
    ops = N ** (n + 1) * 2**n
    if ops > budget:
        raise BudgetError(f"naive cube average needs ~{ops} operations (budget {budget})", ops)
    if n == 0:
        return complex(np.mean(arrays[0]))
    add = _add_table(spec)
    omegas = list(itertools.product((0, 1), repeat=n))

    def chunk(h1: int) -> complex:
        # positions indexed by (x, h_2, ..., h_n)
        grids = np.ix_(*([np.arange(N)] * n))
        x = np.broadcast_to(grids[0], (N,) * n)
        hs = [np.broadcast_to(g, (N,) * n) for g in grids[1:]]
        acc = None
        for w, arr in zip(omegas, arrays):
            pos = add[x, h1] if w[0] else x
            for wi, h in zip(w[1:], hs):
                if wi:
                    pos = add[pos, h]
            vals = arr[pos]
            acc = vals if acc is None else acc * vals
        return complex(np.sum(acc))

    parts = ordered_map(chunk, range(N))
    return _fsum_complex(parts) / N ** (n + 1)


def _naive_power(f: np.ndarray, spec: GroupSpec, k: int, budget: int) -> complex:
    conj = np.conj(f)
    arrays = [conj if sum(w) % 2 else f for w in itertools.product((0, 1), repeat=k)]
    return _cube_average(arrays, spec, k, budget)


def _recursive_power(f: np.ndarray, spec: GroupSpec, k: int, budget: int) -> complex:
    """``||f||^(2^k) = E_h ||Delta_h f||^(2^(k-1))`` down to ``|E f|^2``."""
    N = spec.order
    ops = N ** (k + 1)
    if ops > budget:
        raise BudgetError(f"recursive norm needs ~{ops} operations (budget {budget})", ops)
    add = _add_table(spec)

    def reduce_rows(F: np.ndarray, depth: int) -> complex:
        for _ in range(depth):
            # every multiplicative derivative of every row: (rows * N, N)
            F = (F[:, add] * np.conj(F)[:, None, :]).reshape(-1, N)
        means = F.mean(axis=1)
        return complex(math.fsum(np.abs(means) ** 2), 0.0)

    if k == 1:
        return complex(abs(np.mean(f)) ** 2)
    # split the first shift across workers
    first = (f[add] * np.conj(f)[None, :])  # row h = Delta_h f

    def chunk(h: int) -> complex:
        return reduce_rows(first[h:h + 1], k - 2)

    parts = ordered_map(chunk, range(N))
    return _fsum_complex(parts) / N ** (k - 1)


def u2_fourier_power(f: FunctionTable) -> float:
    fh = fourier_transform(FunctionTable.from_complex(f.spec, _complex(f))).array
    return math.fsum(np.abs(fh) ** 4)


def u2_fourier(f: FunctionTable) -> float:
    """``(sum_xi |fhat(xi)|^4)^(1/4)``."""
    return max(u2_fourier_power(f), 0.0) ** 0.25


def gowers_norm_power(req: NormRequest) -> complex:
    """The average of ``2^k``-fold multiplicative derivatives (``||f||^(2^k)``)."""
    f = _complex(req.f)
    if req.method == "naive":
        return _naive_power(f, req.f.spec, req.k, req.budget)
    if req.method == "recursive":
        return _recursive_power(f, req.f.spec, req.k, req.budget)
    return complex(u2_fourier_power(req.f))


def gowers_norm(req: NormRequest | FunctionTable, k: int | None = None,
                method: Method = "naive", budget: int = DEFAULT_BUDGET) -> float:
    if isinstance(req, FunctionTable):
        req = NormRequest(req, k if k is not None else 2, method, budget)
    p = gowers_norm_power(req).real
    return max(p, 0.0) ** (1.0 / 2**req.k)


def gowers_inner_product(fs: Sequence[FunctionTable], budget: int = DEFAULT_BUDGET) -> complex:
    """``E_{x,h} prod_w C^|w| f_w(x + w.h)`` over ``w`` in {0,1}^n, lexicographic order."""
    m = len(fs)
    n = m.bit_length() - 1
    if m < 1 or 1 << n != m:
        raise PreconditionError(f"need 2^n functions, got {m}")
    spec = fs[0].spec
    if any(f.spec != spec for f in fs):
        raise PreconditionError("all functions must live on the same group")
    arrays = []
    for w, f in zip(itertools.product((0, 1), repeat=n), fs):
        a = _complex(f)
        arrays.append(np.conj(a) if sum(w) % 2 else a)
    return _cube_average(arrays, spec, n, budget)


# ---------------------------------------------------------------------------
# correlation with polynomial phases

@dataclass
class CorrelationResult:
    phase: PolynomialPhase
    correlation: float
    mode: str
    candidates: int
    coefficients: tuple[int, ...] = ()
    q: int = 1

    def to_json(self) -> dict:
        return {"phase": str(self.phase), "correlation": self.correlation, "mode": self.mode,
                "candidates": self.candidates, "coefficients": list(self.coefficients), "q": self.q}


def phase_correlation(f: FunctionTable, P: PolynomialPhase) -> float:
    """``|E_x f(x) e(-P(x))|`` using pointwise exact evaluation of ``P``."""
    vals = np.array([float(P(x).as_fraction()) for x in P.spec.elements()])
    terms = _complex(f) * np.exp(-2j * np.pi * vals)
    return abs(_fsum_complex(list(terms))) / f.spec.order


class _Evaluator:
    def __init__(self, f: FunctionTable, C: int, q: int):
        self.spec = f.spec
        self.f = _complex(f)
        self.q = q
        self.monos = monomials(f.spec, C, include_constant=False)
        self.M = np.stack([monomial_values(f.spec, a, q) for a in self.monos]) \
            if self.monos else np.zeros((0, f.spec.order), dtype=np.int64)
        self.W = np.exp(-2j * np.pi * np.arange(q) / q)

    def corr_of_phases(self, phases: np.ndarray) -> np.ndarray:
        return np.abs(self.W[phases % self.q] @ self.f) / self.spec.order

    def phase(self, coef: Sequence[int]) -> PolynomialPhase:
        terms = {a: UnitRational(int(c), self.q) for a, c in zip(self.monos, coef) if c % self.q}
        deg = max((sum(a) for a in self.monos), default=0)
        return PolynomialPhase(self.spec, terms, deg)

    def finish(self, coef, corr: float, mode: str, count: int) -> CorrelationResult:
        P = self.phase(coef)
        check = phase_correlation(FunctionTable.from_complex(self.spec, self.f), P)
        if abs(check - corr) > 1e-12:
            raise InvariantViolation("recomputed correlation disagrees with the search",
                                     {"search": corr, "recomputed": check})
        return CorrelationResult(P, check, mode, count, tuple(int(c) for c in coef), self.q)


_TIE = 1e-12


def correlate_exhaustive(f: FunctionTable, C: int, q: int, budget: int = 10**7) -> CorrelationResult:
    """Maximise ``|E f e(-P)|`` over every phase with monomial degree <= C and
    coefficients in (1/q)Z/Z; ties go to the lexicographically first coefficients.

    The constant monomial is omitted: it does not change the modulus.
    """
    ev = _Evaluator(f, C, q)
    M = len(ev.monos)
    space = q**M
    if space > budget:
        raise BudgetError(f"exhaustive search space has {space} candidates (budget {budget})", space)
    N = f.spec.order
    block = max(1, _CHUNK // max(N, 1))
    best_val, best_t = -1.0, 0
    radices = np.array([q ** (M - 1 - i) for i in range(M)], dtype=np.int64)
    for start in range(0, space, block):
        t = np.arange(start, min(space, start + block), dtype=np.int64)
        coef = (t[:, None] // radices[None, :]) % q if M else np.zeros((len(t), 0), dtype=np.int64)
        vals = ev.corr_of_phases(coef @ ev.M)
        top = vals.max()
        first = int(np.argmax(vals >= top - _TIE))
        if vals[first] > best_val + _TIE:
            best_val, best_t = float(vals[first]), int(t[first])
    coef = [(best_t // int(r)) % q for r in radices]
    return ev.finish(coef, best_val, "exhaustive", space)


def _fourier_seed(f: FunctionTable, ev: _Evaluator, q: int) -> list[int] | None:
    if any(q % d for d in f.spec.moduli):
        return None
    fh = fourier_transform(FunctionTable.from_complex(f.spec, ev.f)).array
    xi = f.spec.coords[int(np.argmax(np.abs(fh)))]
    coef = [0] * len(ev.monos)
    for j, a in enumerate(ev.monos):
        if sum(a) == 1:
            i = a.index(1)
            coef[j] = int(xi[i]) * (q // f.spec.moduli[i])
    return coef


def correlate_search(f: FunctionTable, C: int, q: int, budget: int = 10_000,
                     seed: int = 0) -> CorrelationResult:
    """Coordinate descent over monomial coefficients with seeded random restarts.

    Starts from the best character when that character is representable
    (``C >= 1`` and ``q`` a multiple of every modulus).  The trajectory does
    not depend on ``budget``, so larger budgets only extend it.
    """
    ev = _Evaluator(f, C, q)
    M = len(ev.monos)
    rng = np.random.default_rng(seed)
    start = _fourier_seed(f, ev, q) if C >= 1 else None
    coef = np.array(start if start is not None else [0] * M, dtype=np.int64)
    cur = coef @ ev.M if M else np.zeros(f.spec.order, dtype=np.int64)
    cur_val = float(ev.corr_of_phases(cur[None, :])[0])
    count = 1
    best_val, best_coef = cur_val, coef.copy()
    values = np.arange(q, dtype=np.int64)
    while M and count + q <= budget:
        improved = False
        for j in range(M):
            if count + q > budget:
                break
            base = cur - coef[j] * ev.M[j]
            vals = ev.corr_of_phases(base[None, :] + values[:, None] * ev.M[j][None, :])
            count += q
            v = int(np.argmax(vals))
            if vals[v] > cur_val + _TIE:
                coef[j] = v
                cur = (base + v * ev.M[j]) % q
                cur_val = float(vals[v])
                improved = True
                if cur_val > best_val + _TIE:
                    best_val, best_coef = cur_val, coef.copy()
        if not improved:
            coef = rng.integers(0, q, size=M)
            cur = (coef @ ev.M) % q
            cur_val = float(ev.corr_of_phases(cur[None, :])[0])
            count += 1
            if cur_val > best_val + _TIE:
                best_val, best_coef = cur_val, coef.copy()
    return ev.finish(best_coef, best_val, "search", count)


@dataclass(frozen=True)
class U2Certificate:
    character: Character
    correlation: float
    u2_squared: float

    @property
    def holds(self) -> bool:
        return self.correlation >= self.u2_squared - 1e-9


def u2_inverse_certificate(f: FunctionTable) -> U2Certificate:
    """Character with ``|fhat(xi)| >= ||f||_{U^2}^2`` for a 1-bounded ``f``."""
    arr = _complex(f)
    if arr.size and float(np.max(np.abs(arr))) > 1 + 1e-12:
        raise PreconditionError("u2_inverse_certificate needs a 1-bounded function")
    fh = np.abs(fourier_transform(FunctionTable.from_complex(f.spec, arr)).array)
    i = int(np.argmax(fh))
    xi = Character(f.spec, tuple(int(v) for v in f.spec.coords[i]))
    return U2Certificate(xi, float(fh[i]), math.sqrt(max(u2_fourier_power(f), 0.0)))


def tensor_multiplicativity_check(f_p: FunctionTable, f_q: FunctionTable, k: int,
                                  budget: int = DEFAULT_BUDGET) -> Report:
    """``||f_p (x) f_q||_{U^k} = ||f_p||_{U^k} ||f_q||_{U^k}`` on the product group."""
    spec = f_p.spec.product(f_q.spec)
    prod = FunctionTable.from_complex(spec, np.outer(_complex(f_p), _complex(f_q)).reshape(-1))
    lhs = gowers_norm(NormRequest(prod, k, "naive", budget))
    rhs = gowers_norm(NormRequest(f_p, k, "naive", budget)) * gowers_norm(NormRequest(f_q, k, "naive", budget))
    rep = Report("tensor_multiplicativity")
    rep.add("product_law", abs(lhs - rhs) <= 1e-8, {"product_norm": lhs, "norm_product": rhs})
    rep.data.update(group=str(spec), k=k)
    return rep


def default_search_degree(k: int, m: int) -> int:
    """``k C(k,2) max_{p|m} p^nu (p^nu - 1)`` with ``nu = nu_p(m)``."""
    from .groups import factorize

    top = max((p**a * (p**a - 1) for p, a in factorize(m).items()), default=0)
    return k * math.comb(k, 2) * top
