"""Fourier transform on a finite abelian group, dual indexed by the group itself."""
from __future__ import annotations

import numpy as np

from .groups import Character, GroupSpec
from .tables import FunctionTable


def _shape(spec: GroupSpec) -> tuple[int, ...]:
    return spec.moduli if spec.moduli else (1,)


def fourier_transform(f: FunctionTable) -> FunctionTable:
    """``fhat(xi) = E_x f(x) e(-<xi, x>)`` as a complex table over the dual."""
    arr = f.array.reshape(_shape(f.spec))
    out = np.fft.fftn(arr) / f.spec.order
    return FunctionTable.from_complex(f.spec, out.reshape(-1))


def inverse_fourier_transform(fhat: FunctionTable) -> FunctionTable:
    """``f(x) = sum_xi fhat(xi) e(<xi, x>)``."""
    arr = fhat.array.reshape(_shape(fhat.spec))
    out = np.fft.ifftn(arr) * fhat.spec.order
    return FunctionTable.from_complex(fhat.spec, out.reshape(-1))


def character_table(xi: Character) -> FunctionTable:
    """``x -> e(<xi, x>)``."""
    m = xi.spec.exponent
    return FunctionTable.from_complex(xi.spec, np.exp(2j * np.pi * xi.values() / m))


def fourier_direct(f: FunctionTable) -> FunctionTable:
    """Character-sum evaluation of the transform, O(|G|^2); used as an oracle."""
    spec = f.spec
    m = spec.exponent
    w = np.array([m // d for d in spec.moduli], dtype=np.int64)
    pair = (spec.coords * w) @ spec.coords.T % m if spec.rank else np.zeros((1, 1), dtype=np.int64)
    kernel = np.exp(-2j * np.pi * pair / m)
    return FunctionTable.from_complex(spec, kernel @ f.array / spec.order)
