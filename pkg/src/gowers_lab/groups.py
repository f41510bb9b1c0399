"""Finite abelian groups presented as products of cyclic groups."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterator, Sequence

import numpy as np
from sympy import factorint
from sympy.ntheory.modular import crt

from .errors import PreconditionError
from .rational import UnitRational


@dataclass(frozen=True)
class GroupSpec:
    """``Z/d_1 x ... x Z/d_n``; the empty product is the trivial group.

    Elements are enumerated in C order (first coordinate most significant),
    which is the order used by every dense table in the package.
    """

    moduli: tuple[int, ...]

    def __post_init__(self):
        mods = tuple(int(d) for d in self.moduli)
        if any(d < 1 for d in mods):
            raise PreconditionError(f"moduli must be >= 1, got {mods}")
        object.__setattr__(self, "moduli", mods)

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """Parse ``"2,2,4"`` or power shorthand ``"2^5"`` (mixable: ``"2^3,4"``)."""
        text = text.strip()
        if text == "":
            return cls(())
        moduli: list[int] = []
        for part in text.split(","):
            part = part.strip()
            m = re.fullmatch(r"(\d+)(?:\^(\d+))?", part)
            if not m:
                raise PreconditionError(f"malformed group spec {text!r}: bad token {part!r}")
            d = int(m.group(1))
            reps = int(m.group(2)) if m.group(2) is not None else 1
            if d < 1:
                raise PreconditionError(f"malformed group spec {text!r}: modulus must be >= 1")
            moduli.extend([d] * reps)
        return cls(tuple(moduli))

    def __str__(self):
        return ",".join(map(str, self.moduli)) if self.moduli else "1"

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def exponent(self) -> int:
        return reduce(math.lcm, self.moduli, 1)

    def __len__(self):
        return self.order

    # ---- enumeration -------------------------------------------------
    @cached_property
    def coords(self) -> np.ndarray:
        """Integer array of shape (order, rank): row ``i`` is element ``i``."""
        if not self.moduli:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices(self.moduli, dtype=np.int64).reshape(self.rank, -1)
        return np.ascontiguousarray(grids.T)

    @cached_property
    def strides(self) -> np.ndarray:
        s = np.ones(self.rank, dtype=np.int64)
        for i in range(self.rank - 2, -1, -1):
            s[i] = s[i + 1] * self.moduli[i + 1]
        return s

    @cached_property
    def _mod_arr(self) -> np.ndarray:
        return np.array(self.moduli, dtype=np.int64)

    def index_of_coords(self, coords) -> np.ndarray | int:
        arr = np.asarray(coords, dtype=np.int64) % self._mod_arr
        out = arr @ self.strides if self.rank else np.zeros(arr.shape[:-1], dtype=np.int64)
        return int(out) if np.ndim(out) == 0 else out

    def elements(self) -> Iterator["GroupElement"]:
        for row in self.coords:
            yield GroupElement(self, tuple(int(v) for v in row))

    def element(self, coords: Sequence[int]) -> "GroupElement":
        return GroupElement(self, tuple(coords))

    def element_at(self, index: int) -> "GroupElement":
        return GroupElement(self, tuple(int(v) for v in self.coords[index]))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def generators(self) -> list["GroupElement"]:
        """Standard generators ``e_1..e_n`` (skipping trivial factors)."""
        gens = []
        for i, d in enumerate(self.moduli):
            if d > 1:
                c = [0] * self.rank
                c[i] = 1
                gens.append(GroupElement(self, tuple(c)))
        return gens

    def shift_perm(self, h) -> np.ndarray:
        """``p[x] = index(x + h)`` for every element index ``x``."""
        hc = h.coords if isinstance(h, GroupElement) else tuple(h)
        return self.index_of_coords(self.coords + np.asarray(hc, dtype=np.int64))

    @cached_property
    def negation_perm(self) -> np.ndarray:
        return self.index_of_coords(-self.coords)

    def product(self, other: "GroupSpec") -> "GroupSpec":
        return GroupSpec(self.moduli + other.moduli)


@dataclass(frozen=True)
class GroupElement:
    spec: GroupSpec
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.spec.rank:
            raise PreconditionError(
                f"element has {len(self.coords)} coordinates, group has rank {self.spec.rank}")
        red = tuple(int(c) % d for c, d in zip(self.coords, self.spec.moduli))
        object.__setattr__(self, "coords", red)

    def _check(self, other: "GroupElement"):
        if not isinstance(other, GroupElement) or other.spec != self.spec:
            raise PreconditionError("group elements belong to different groups")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(self.spec, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(self.spec, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.spec, tuple(-a for a in self.coords))

    def __mul__(self, n: int) -> "GroupElement":
        return GroupElement(self.spec, tuple(n * a for a in self.coords))

    __rmul__ = __mul__

    def __iter__(self):
        return iter(self.coords)

    @property
    def index(self) -> int:
        return self.spec.index_of_coords(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int:
        return reduce(math.lcm, (d // math.gcd(d, c) for c, d in zip(self.coords, self.spec.moduli)), 1)


def element_add(a: GroupElement, b: GroupElement) -> GroupElement:
    return a + b


def residue_lift(x: GroupElement) -> tuple[int, ...]:
    """Representative of ``x`` in ``{0..d_1-1} x ... x {0..d_n-1}``."""
    return tuple(x.coords)


@dataclass(frozen=True)
class Character:
    """Character ``x -> sum_i xi_i x_i / d_i``, indexed by the group itself."""

    spec: GroupSpec
    coords: tuple[int, ...]

    def __post_init__(self):
        el = GroupElement(self.spec, tuple(self.coords))
        object.__setattr__(self, "coords", el.coords)

    def __call__(self, x: GroupElement) -> UnitRational:
        return character_pairing(self, x)

    def values(self) -> np.ndarray:
        """Pairings with every element as integers mod the exponent."""
        m = self.spec.exponent
        weights = np.array([c * (m // d) for c, d in zip(self.coords, self.spec.moduli)], dtype=np.int64)
        return (self.spec.coords @ weights) % m if self.spec.rank else np.zeros(1, dtype=np.int64)


def character_pairing(xi: Character, x: GroupElement) -> UnitRational:
    if xi.spec != x.spec:
        raise PreconditionError("character and element belong to different groups")
    total = UnitRational(0)
    for a, b, d in zip(xi.coords, x.coords, xi.spec.moduli):
        total = total + UnitRational(a * b, d)
    return total


def factorize(n: int) -> dict[int, int]:
    return {int(p): int(a) for p, a in factorint(n).items()}


@dataclass(frozen=True)
class SylowComponent:
    prime: int
    spec: GroupSpec
    # (modulus index in the parent, prime power) for each coordinate of ``spec``
    sources: tuple[tuple[int, int], ...]


class SylowDecomposition:
    """CRT splitting ``G = (+)_p G_p`` with coordinate maps in both directions."""

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        parts: dict[int, list[tuple[int, int]]] = {}
        for i, d in enumerate(spec.moduli):
            for p, a in sorted(factorize(d).items()):
                parts.setdefault(p, []).append((i, p**a))
        self.components: dict[int, SylowComponent] = {
            p: SylowComponent(p, GroupSpec(tuple(q for _, q in src)), tuple(src))
            for p, src in sorted(parts.items())
        }

    def __getitem__(self, p: int) -> SylowComponent:
        return self.components[p]

    def __iter__(self):
        return iter(self.components)

    def specs(self) -> dict[int, GroupSpec]:
        return {p: c.spec for p, c in self.components.items()}

    def forward(self, x: GroupElement) -> dict[int, GroupElement]:
        """Project ``x`` onto each Sylow component."""
        if x.spec != self.spec:
            raise PreconditionError("element does not belong to the decomposed group")
        return {
            p: GroupElement(c.spec, tuple(x.coords[i] % q for i, q in c.sources))
            for p, c in self.components.items()
        }

    def backward(self, parts: dict[int, GroupElement]) -> GroupElement:
        """Reassemble an element from its Sylow components by CRT."""
        residues: list[list[int]] = [[] for _ in self.spec.moduli]
        mods: list[list[int]] = [[] for _ in self.spec.moduli]
        for p, c in self.components.items():
            y = parts.get(p, c.spec.zero())
            for (i, q), v in zip(c.sources, y.coords):
                residues[i].append(v)
                mods[i].append(q)
        coords = []
        for r, m in zip(residues, mods):
            coords.append(int(crt(m, r)[0]) if m else 0)
        return GroupElement(self.spec, tuple(coords))

    def forward_index(self) -> dict[int, np.ndarray]:
        """Vectorised projection: for each prime, component index of every element."""
        out = {}
        for p, c in self.components.items():
            cols = np.stack([self.spec.coords[:, i] % q for i, q in c.sources], axis=1) \
                if c.sources else np.zeros((self.spec.order, 0), dtype=np.int64)
            out[p] = c.spec.index_of_coords(cols)
        return out


def sylow_decompose(g: GroupSpec) -> SylowDecomposition:
    return SylowDecomposition(g)
