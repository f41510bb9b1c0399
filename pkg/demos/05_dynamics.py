"""
Skew products, cocycles and roots
=================================

"""
import numpy as np

from gowers_lab.dynamics import (appendixD_checks, coboundary, coboundary_solve, exact_root_search,
                                 gallery_build, gallery_suite, quasi_defect, _appendix_d)

X = gallery_build("z4z-skew", 2)
print(X.to_json())
print(gallery_suite("z4z-skew", 2).passed)

# coboundaries solve back
F = np.arange(X.base.order) % 2
sol = coboundary_solve(X, coboundary(X, F, 2), 2)
print(sol.found, sol.F)

# on the quasi example the defects are constants
Q = gallery_build("quasi-remark")
d = quasi_defect(Q, Q.acting.element((1, 1)).index, Q.acting.element((2, 3)).index)
print(d.defect[0], d.degree.degree)

# degrees on the nilpotent extension
rep = appendixD_checks(2)
print({k: rep.data[k] for k in ("degree_phi", "degree_iota", "degree_f")})

# halving t/4 inside polynomials of degree <= 3
Y = _appendix_d(1, 4)
target = Y.state_table(Y.states.coords[:, -1], 4)
res = exact_root_search(Y, target, 2, 3)
print(res.candidates, len(res.witnesses))
