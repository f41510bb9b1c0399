"""
Degrees of R/Z-valued functions
===============================

"""
from gowers_lab import FunctionTable, GroupSpec
from gowers_lab.polycalc import (IntPolynomial, d_mr, degree, parse_phase, residue_degree_bound,
                                 verify_alg_lemma, verify_residue_degree)

# x/4 on Z/4 is a character: degree 1
Z4 = GroupSpec((4,))
print(degree(FunctionTable.from_ints(Z4, [0, 1, 2, 3], 4)).degree)

# x/8 on Z/2 (lift 0 or 1) is non-classical, degree 3
Z2 = GroupSpec((2,))
print(degree(FunctionTable.from_ints(Z2, [0, 1], 8)).degree)

# phases are written in the binomial basis C(|x_i|, a_i)
P = parse_phase(GroupSpec((2, 4)), "1/2 * x1 x2 + 1/4 * x2^2 + 3/8")
print(P, "->", degree(P.table()).degree)

# divisibility of binomial coefficients
for m in (4, 6, 12):
    print(m, d_mr(m, 1), verify_alg_lemma(m, 1).passed)
print(verify_alg_lemma(6, 1).data["max_convention_counterexample"])

# an integer polynomial composed with residue maps stays low degree
t = IntPolynomial({(1,): 1})
print(residue_degree_bound(1, 2, 1, 2), verify_residue_degree(t, Z2, 2).data)
