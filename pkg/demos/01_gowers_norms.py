"""
Gowers norms on small groups
============================

"""
import numpy as np

from gowers_lab import FunctionTable, GroupSpec
from gowers_lab.gowers import NormRequest, correlate_exhaustive, gowers_norm, u2_inverse_certificate
from gowers_lab.polycalc import parse_phase

# the indicator of {0} in Z/2
G = GroupSpec((2,))
f = FunctionTable.from_complex(G, [1, 0])
for method in ("naive", "recursive", "fourier-u2"):
    print(method, gowers_norm(NormRequest(f, 2, method)))
print("exact", (1 / 8) ** 0.25)

# norms grow with k
rng = np.random.default_rng(1)
G = GroupSpec((4, 6))
g = FunctionTable.from_complex(G, np.exp(2j * np.pi * rng.random(G.order)) * rng.random(G.order))
print([round(gowers_norm(g, k, "recursive"), 6) for k in (1, 2, 3, 4)])

# x^2/8 on Z/8: small U^2 norm, U^3 norm 1
P = parse_phase(GroupSpec((8,)), "1/4 * x1^2 + 1/8 * x1")
q = P.table()
print("U2", gowers_norm(q, 2), "U3", gowers_norm(q, 3))

# the largest Fourier coefficient certifies U^2 mass
cert = u2_inverse_certificate(g)
print("character", cert.character.coords, "corr", cert.correlation, ">=", cert.u2_squared)

# exhaustive search over quadratic phases recovers P
res = correlate_exhaustive(q, 2, 8)
print(res.correlation, res.phase)
