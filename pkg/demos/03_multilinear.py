"""
Symmetric forms and the universal system
========================================

"""
from gowers_lab import GroupSpec
from gowers_lab.multilinear import (SymForm, build_universal_system, nabla_k, sml_size, verify_action,
                                    verify_k3_expansion, verify_spectrum)
from gowers_lab.polycalc import parse_phase
from gowers_lab.rational import UnitRational

G = GroupSpec((2, 4))
print("SML_2 size", sml_size(G, 2))

# second derivatives of a quadratic phase
P = parse_phase(G, "1/2 * x1 x2 + 1/2 * x2^2").table()
b = nabla_k(P, 2)
print(b.values)

# a system whose coordinate has exactly this spectrum (up to 2!)
sys = build_universal_system(b)
print(sys.size, "states", verify_action(sys).passed, verify_spectrum(sys).passed)

# cubic forms on Z/3
c = SymForm(GroupSpec((3,)), 3, {(0, 0, 0): UnitRational(1, 3)})
sys3 = build_universal_system(c)
print(sys3.size, verify_k3_expansion(sys3).passed)
