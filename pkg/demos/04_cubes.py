"""
Cubes of filtered abelian groups
================================

"""
from gowers_lab.cubes import (CubeTuple, FilteredAbelianSpec, completion_counts, corner_complete, count_cubes,
                              cube_membership, hk_membership, morphism_constancy)

D1 = FilteredAbelianSpec.parse("D1:4")
print(cube_membership(D1, CubeTuple.from_list([0, 1, 2, 3])), cube_membership(D1, CubeTuple.from_list([0, 1, 1, 1])))
print(hk_membership(D1, CubeTuple.from_list([0, 1, 2, 3])))

for text, n in [("D1:2", 2), ("D2:2", 3), ("D1:2;D2:2", 3)]:
    print(text, n, count_cubes(FilteredAbelianSpec.parse(text), n))

# every valid corner has exactly one completion above the step
D2 = FilteredAbelianSpec.parse("D2:3")
print(completion_counts(D2, 3))
print(corner_complete(D1, [1, 3, 3]))

# maps Z/4 -> Z/3 that are polynomial are constant
print(morphism_constancy(2, 2, 3, 1).to_json()["passed"])
