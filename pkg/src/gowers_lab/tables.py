"""Dense function tables on a finite abelian group (or any enumerated state set)."""
from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import reduce
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError
from .groups import GroupElement, GroupSpec
from .rational import UnitRational

_INT64_SAFE = 1 << 40


def int_array(values, den: int) -> np.ndarray:
    """Integers reduced mod ``den``, int64 when safe and Python ints otherwise."""
    dtype = np.int64 if den < _INT64_SAFE else object
    arr = np.asarray(values, dtype=dtype)
    return arr % den


class FunctionTable:
    """Values of a function on every element of ``spec`` in enumeration order.

    Exact tables hold R/Z values as integer numerators over one common
    denominator; complex tables hold a complex numpy array.  The two kinds never
    mix implicitly: use :meth:`phase` to pass from exact to complex.
    """

    __slots__ = ("spec", "exact", "_nums", "_den", "_cplx")

    def __init__(self, spec: GroupSpec, *, nums=None, den: int | None = None, cplx=None):
        self.spec = spec
        if cplx is not None:
            arr = np.asarray(cplx, dtype=np.complex128).reshape(-1)
            if arr.shape[0] != spec.order:
                raise PreconditionError(f"table has {arr.shape[0]} entries, group has {spec.order}")
            self.exact = False
            self._cplx = arr
            self._nums = None
            self._den = None
            return
        if nums is None or den is None:
            raise PreconditionError("exact table needs numerators and a denominator")
        den = int(den)
        if den < 1:
            raise PreconditionError("denominator must be positive")
        arr = int_array(nums, den).reshape(-1)
        if arr.shape[0] != spec.order:
            raise PreconditionError(f"table has {arr.shape[0]} entries, group has {spec.order}")
        # canonical (smallest) common denominator
        g = reduce(math.gcd, (int(v) for v in np.unique(arr)), den)
        if g > 1:
            arr = arr // g
            den //= g
            arr = int_array(arr, den)
        self.exact = True
        self._nums = arr
        self._den = den
        self._cplx = None

    # ---- constructors -------------------------------------------------
    @classmethod
    def from_exact(cls, spec: GroupSpec, values: Iterable) -> "FunctionTable":
        vals = [v if isinstance(v, UnitRational) else UnitRational(Fraction(v)) for v in values]
        den = reduce(math.lcm, (v.den for v in vals), 1)
        return cls(spec, nums=[v.num * (den // v.den) for v in vals], den=den)

    @classmethod
    def from_ints(cls, spec: GroupSpec, nums, den: int) -> "FunctionTable":
        return cls(spec, nums=nums, den=den)

    @classmethod
    def from_complex(cls, spec: GroupSpec, values) -> "FunctionTable":
        return cls(spec, cplx=values)

    @classmethod
    def from_function(cls, spec: GroupSpec, fn) -> "FunctionTable":
        """Tabulate ``fn(GroupElement)``; exact when every value is rational."""
        vals = [fn(x) for x in spec.elements()]
        if all(isinstance(v, (UnitRational, Fraction, int)) and not isinstance(v, bool) for v in vals):
            return cls.from_exact(spec, vals)
        return cls.from_complex(spec, vals)

    @classmethod
    def zeros(cls, spec: GroupSpec) -> "FunctionTable":
        return cls(spec, nums=np.zeros(spec.order, dtype=np.int64), den=1)

    @classmethod
    def constant(cls, spec: GroupSpec, c: UnitRational) -> "FunctionTable":
        return cls(spec, nums=np.full(spec.order, c.num, dtype=np.int64), den=c.den)

    # ---- access -------------------------------------------------------
    @property
    def den(self) -> int:
        self._require_exact()
        return self._den

    @property
    def nums(self) -> np.ndarray:
        self._require_exact()
        return self._nums

    @property
    def array(self) -> np.ndarray:
        if self.exact:
            raise PreconditionError("exact table has no complex array; call .phase() explicitly")
        return self._cplx

    def _require_exact(self):
        if not self.exact:
            raise PreconditionError("operation requires an exact (R/Z-valued) table")

    def __len__(self):
        return self.spec.order

    def __getitem__(self, x) -> UnitRational | complex:
        i = x.index if isinstance(x, GroupElement) else int(x)
        if self.exact:
            return UnitRational(int(self._nums[i]), self._den)
        return complex(self._cplx[i])

    @property
    def values(self) -> list:
        return [self[i] for i in range(len(self))]

    def nums_over(self, den: int) -> np.ndarray:
        """Numerators over a multiple ``den`` of the table's denominator."""
        self._require_exact()
        if den % self._den:
            raise PreconditionError(f"{den} is not a multiple of the table denominator {self._den}")
        return int_array(self._nums * (den // self._den), den)

    # ---- conversions ----------------------------------------------------
    def phase(self) -> "FunctionTable":
        """Explicit conversion ``x -> e(f(x))`` to a complex table."""
        self._require_exact()
        if self._nums.dtype == object:
            theta = np.array([float(Fraction(int(v), self._den)) for v in self._nums])
        else:
            theta = self._nums / self._den
        return FunctionTable.from_complex(self.spec, np.exp(2j * np.pi * theta))

    # ---- arithmetic -----------------------------------------------------
    def _same(self, other: "FunctionTable"):
        if not isinstance(other, FunctionTable) or other.spec != self.spec:
            raise PreconditionError("tables live on different groups")
        if other.exact != self.exact:
            raise PreconditionError("cannot mix exact and complex tables")

    def __add__(self, other: "FunctionTable") -> "FunctionTable":
        self._same(other)
        if not self.exact:
            return FunctionTable.from_complex(self.spec, self._cplx + other._cplx)
        den = math.lcm(self._den, other._den)
        return FunctionTable(self.spec, nums=self.nums_over(den) + other.nums_over(den), den=den)

    def __neg__(self) -> "FunctionTable":
        if not self.exact:
            return FunctionTable.from_complex(self.spec, -self._cplx)
        return FunctionTable(self.spec, nums=-self._nums, den=self._den)

    def __sub__(self, other: "FunctionTable") -> "FunctionTable":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            if self.exact:
                return FunctionTable(self.spec, nums=self._nums * other, den=self._den)
            return FunctionTable.from_complex(self.spec, self._cplx * other)
        if isinstance(other, FunctionTable) and not self.exact and not other.exact:
            self._same(other)
            return FunctionTable.from_complex(self.spec, self._cplx * other._cplx)
        return NotImplemented

    __rmul__ = __mul__

    def permute(self, perm: np.ndarray) -> "FunctionTable":
        """``x -> f(perm[x])`` (composition with a map of the index set)."""
        if self.exact:
            return FunctionTable(self.spec, nums=self._nums[perm], den=self._den)
        return FunctionTable.from_complex(self.spec, self._cplx[perm])

    def is_zero(self) -> bool:
        if self.exact:
            return not np.any(self._nums)
        return not np.any(self._cplx)

    def is_constant(self) -> bool:
        if self.exact:
            return bool(np.all(self._nums == self._nums[0]))
        return bool(np.all(self._cplx == self._cplx[0]))

    def __eq__(self, other):
        if not isinstance(other, FunctionTable):
            return NotImplemented
        if other.spec != self.spec or other.exact != self.exact:
            return False
        if self.exact:
            return self._den == other._den and bool(np.array_equal(self._nums, other._nums))
        return bool(np.array_equal(self._cplx, other._cplx))

    __hash__ = None

    def key(self) -> tuple:
        """Hashable identity of an exact table (used for de-duplication)."""
        self._require_exact()
        return (self._den, self._nums.tobytes() if self._nums.dtype != object else tuple(self._nums))

    def sup_norm(self) -> float:
        if self.exact:
            return 1.0
        return float(np.max(np.abs(self._cplx))) if len(self) else 0.0

    def __repr__(self):
        kind = f"exact/{self._den}" if self.exact else "complex"
        return f"FunctionTable({self.spec}, {kind}, {self.values if len(self) <= 8 else '...'})"

    # ---- serialisation ------------------------------------------------
    def to_json(self) -> dict:
        if self.exact:
            return {"spec": str(self.spec), "kind": "exact",
                    "values": [{"num": v.num, "den": v.den} for v in self.values]}
        return {"spec": str(self.spec), "kind": "complex",
                "values": [[float(z.real), float(z.imag)] for z in self._cplx]}

    @classmethod
    def from_json(cls, obj: dict) -> "FunctionTable":
        spec = GroupSpec.parse(str(obj["spec"]))
        vals: Sequence = obj["values"]
        kind = obj.get("kind")
        if kind == "exact" or (kind is None and vals and all(isinstance(v, dict) for v in vals)):
            return cls.from_exact(spec, [UnitRational(int(v["num"]), int(v["den"])) for v in vals])
        out = []
        for v in vals:
            if isinstance(v, (list, tuple)):
                out.append(complex(float(v[0]), float(v[1])))
            elif isinstance(v, dict):
                out.append(complex(float(v.get("re", 0.0)), float(v.get("im", 0.0))))
            else:
                out.append(complex(v))
        return cls.from_complex(spec, out)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2, sort_keys=True))

    @classmethod
    def load(cls, path) -> "FunctionTable":
        return cls.from_json(json.loads(Path(path).read_text()))
