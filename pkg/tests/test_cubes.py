import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gowers_lab import BudgetError, FunctionTable, GroupSpec, PreconditionError
from gowers_lab.cubes import (CubeTuple, FilteredAbelianSpec, completion_counts, corner_complete, count_cubes,
                              cube_membership, delta_k_vanishing, face_matrix, hk_membership, hk_members, members,
                              morphism_constancy, pullback, restrict_to_face, vertices)
from gowers_lab.polycalc import degree

from oracles import brute_degree

SPECS = ["D1:2", "D1:4", "D2:4", "D1:3", "D2:2", "D1:2;D2:2", "D1:2,2", "D3:2", "D2:3;D1:2"]


def random_cube(spec, n, rng):
    """Sum of upper-set generators ``[g]_{w0}`` allowed by the filtration."""
    V = vertices(n)
    ent = np.zeros((2**n, spec.group.rank), dtype=np.int64)
    for sl, g, k in spec.slices():
        for w0 in V:
            if w0.sum() > k:
                continue
            up = np.all(V >= w0, axis=1)
            val = np.array([rng.integers(0, d) for d in g.moduli], dtype=np.int64)
            ent[up, sl] = (ent[up, sl] + val) % np.array(g.moduli)
    return CubeTuple(n, ent)


@st.composite
def cubes(draw, max_n=4):
    spec = FilteredAbelianSpec.parse(draw(st.sampled_from(SPECS)))
    n = draw(st.integers(1, max_n))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    return spec, random_cube(spec, n, rng)


def test_parse_and_print():
    s = FilteredAbelianSpec.parse("D1:2,2; D2:4")
    assert str(s) == "D1:2,2;D2:4"
    assert s.step == 2 and s.group.moduli == (2, 2, 4)
    for bad in ("", "E1:2", "D0:2", "D1:x"):
        with pytest.raises(PreconditionError):
            FilteredAbelianSpec.parse(bad)


def test_membership_examples():
    s = FilteredAbelianSpec.parse("D1:4")
    assert cube_membership(s, CubeTuple.from_list([0, 1, 2, 3]))
    assert not cube_membership(s, CubeTuple.from_list([0, 1, 1, 1]))
    # a 2-cube of D^2 is unconstrained
    assert cube_membership(FilteredAbelianSpec.parse("D2:4"), CubeTuple.from_list([0, 1, 1, 1]))
    assert not cube_membership(FilteredAbelianSpec.parse("D2:4"),
                               CubeTuple.from_list([0, 0, 0, 0, 0, 0, 0, 1]))
    with pytest.raises(PreconditionError):
        CubeTuple(2, np.zeros(3))


def test_membership_convention_flag():
    s = FilteredAbelianSpec.parse("D1:4")
    c = CubeTuple.from_list([0, 1])
    assert cube_membership(s, c, "k+1")
    assert not cube_membership(s, c, "k")
    with pytest.raises(PreconditionError):
        cube_membership(s, c, "k+2")


def test_face_matrix_shape():
    F = face_matrix(3, 2)
    assert F.shape == (6, 8)
    assert set(np.abs(F).sum(axis=1)) == {4}
    assert face_matrix(2, 3).shape[0] == 0


@pytest.mark.parametrize("text,n", [("D1:2", 2), ("D1:2", 3), ("D1:3", 2), ("D2:2", 3), ("D1:4", 2),
                                    ("D2:4", 2), ("D1:2;D2:2", 2), ("D1:2,2", 2), ("D3:2", 3),
                                    ("D1:2", 4), ("D2:2", 4)])
def test_count_matches_closed_form(text, n):
    count, pred = count_cubes(FilteredAbelianSpec.parse(text), n)
    assert count == pred


def test_count_examples_and_budget():
    assert count_cubes(FilteredAbelianSpec.parse("D1:2"), 2) == (8, 8)
    assert FilteredAbelianSpec.parse("D2:3").predicted_count(3) == 3 ** 7
    with pytest.raises(BudgetError):
        count_cubes(FilteredAbelianSpec.parse("D1:4"), 4, budget=1000)


@given(cubes())
def test_generated_cubes_are_members(sc):
    spec, c = sc
    assert cube_membership(spec, c)
    assert hk_membership(spec, c)


@settings(max_examples=40)
@given(st.sampled_from(SPECS), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_face_and_hk_descriptions_agree(text, n, seed):
    spec = FilteredAbelianSpec.parse(text)
    rng = np.random.default_rng(seed)
    G = spec.group
    t = np.stack([G.coords[rng.integers(0, G.order, 2**n)] for _ in range(200)])
    assert np.array_equal(members(spec, t), hk_members(spec, t))


@given(cubes(), st.data())
def test_restriction_to_faces_stays_in_cubes(sc, data):
    spec, c = sc
    free = sorted(data.draw(st.sets(st.integers(0, c.n - 1))))
    fixed = {i: data.draw(st.integers(0, 1)) for i in range(c.n) if i not in free}
    sub = restrict_to_face(c, free, fixed)
    assert sub.n == len(free)
    assert cube_membership(spec, sub)


@given(cubes(max_n=3), st.integers(0, 3), st.data())
def test_pullback_stays_in_cubes(sc, m, data):
    spec, c = sc
    sigma = [data.draw(st.one_of(st.integers(0, m - 1), st.sampled_from(["0", "1"]))) if m else
             data.draw(st.sampled_from(["0", "1"])) for _ in range(c.n)]
    assert cube_membership(spec, pullback(c, m, sigma))


def test_pullback_examples():
    c = CubeTuple.from_list([0, 1, 2, 3])
    assert pullback(c, 1, [0, 0]).entries.ravel().tolist() == [0, 3]
    assert pullback(c, 2, [1, 0]).entries.ravel().tolist() == [0, 2, 1, 3]
    assert pullback(c, 1, ["1", 0]).entries.ravel().tolist() == [2, 3]
    with pytest.raises(PreconditionError):
        pullback(c, 1, [0])


# ---- completion ---------------------------------------------------------------

@pytest.mark.parametrize("text,n", [("D1:2", 2), ("D1:3", 2), ("D1:4", 2), ("D2:2", 3), ("D1:2", 3),
                                    ("D1:2;D2:2", 3), ("D2:3", 3)])
def test_every_valid_corner_completes_uniquely(text, n):
    spec = FilteredAbelianSpec.parse(text)
    if n <= spec.step:
        pytest.skip("no constraint at this dimension")
    valid, unique, _ = completion_counts(spec, n)
    assert valid == unique > 0


def test_corner_complete_examples():
    s = FilteredAbelianSpec.parse("D1:4")
    assert corner_complete(s, [0, 1, 2]) == [(3,)]
    assert corner_complete(s, [1, 3, 3]) == [(1,)]
    with pytest.raises(PreconditionError, match="w_1 = 0"):
        corner_complete(s, [0, 1, 2, 0, 0, 0, 0])
    with pytest.raises(PreconditionError):
        corner_complete(s, [0, 1])
    # below the step everything completes
    assert len(corner_complete(FilteredAbelianSpec.parse("D2:4"), [0, 1, 3])) == 4


@given(cubes(max_n=3))
def test_completion_recovers_top_vertex(sc):
    spec, c = sc
    top = tuple(int(v) for v in c.entries[-1])
    sols = corner_complete(spec, c.entries[:-1])
    assert top in sols
    if c.n > spec.step:
        assert sols == [top]


# ---- Delta^k sweep --------------------------------------------------------------

@settings(max_examples=40)
@given(st.sampled_from([(2,), (4,), (2, 2), (3,), (8,), (2, 4)]), st.integers(1, 4), st.data())
def test_delta_k_vanishing_iff_degree_below_k(moduli, k, data):
    g = GroupSpec(moduli)
    den = data.draw(st.sampled_from([2, 4, 8]))
    nums = data.draw(st.lists(st.integers(0, den - 1), min_size=g.order, max_size=g.order))
    f = FunctionTable.from_ints(g, nums, den)
    d = brute_degree([Fraction(v, den) for v in nums], moduli, cutoff=k + 1)
    assert delta_k_vanishing(f, k) == (d is not None and d <= k - 1)


def test_delta_k_examples():
    g = GroupSpec((4,))
    f = FunctionTable.from_ints(g, [0, 0, 1, 3], 4)  # C(x, 2) / 4
    assert not delta_k_vanishing(f, 2)
    assert delta_k_vanishing(f, 3) == degree(f).at_most(2)
    lin = FunctionTable.from_ints(g, [0, 1, 2, 3], 4)
    assert not delta_k_vanishing(lin, 1) and delta_k_vanishing(lin, 2)
    with pytest.raises(BudgetError):
        delta_k_vanishing(FunctionTable.from_ints(GroupSpec((64,)), np.zeros(64), 2), 4, budget=10**4)
    with pytest.raises(PreconditionError):
        delta_k_vanishing(FunctionTable.from_complex(g, np.ones(4)), 1)


# ---- morphisms between coprime cyclic groups ---------------------------------

@pytest.mark.parametrize("q,l,p,m", [(2, 1, 3, 1), (3, 1, 2, 1), (2, 2, 3, 1), (5, 1, 2, 1), (2, 1, 5, 1)])
def test_morphisms_between_coprime_cyclics_are_constant(q, l, p, m):
    rep = morphism_constancy(q, l, p, m)
    assert rep.passed, rep.to_json()


def test_morphism_constancy_preconditions():
    with pytest.raises(PreconditionError):
        morphism_constancy(2, 1, 2, 2)
    with pytest.raises(PreconditionError):
        morphism_constancy(4, 1, 3, 1)
    with pytest.raises(PreconditionError):
        morphism_constancy(2, 7, 3, 5)
