import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gowers_lab import (Character, FunctionTable, GroupSpec, PreconditionError, UnitRational,
                        fourier_transform, inverse_fourier_transform, residue_lift, sylow_decompose)
from gowers_lab.fourier import fourier_direct

from oracles import direct_fourier

moduli_st = st.lists(st.integers(1, 6), min_size=0, max_size=3).map(tuple)
small_moduli = st.lists(st.integers(1, 5), min_size=1, max_size=3).map(tuple)


# ---- UnitRational --------------------------------------------------------

@given(st.integers(-50, 50), st.integers(1, 30))
def test_unit_rational_is_reduced_into_unit_interval(a, b):
    u = UnitRational(a, b)
    assert 0 <= u.num < u.den
    assert math.gcd(u.num, u.den) == 1
    assert u.as_fraction() == Fraction(a, b) % 1


@given(st.integers(-20, 20), st.integers(1, 12), st.integers(-20, 20), st.integers(1, 12), st.integers(-5, 5))
def test_unit_rational_arithmetic_matches_fractions(a, b, c, d, n):
    x, y = UnitRational(a, b), UnitRational(c, d)
    assert (x + y).as_fraction() == (Fraction(a, b) + Fraction(c, d)) % 1
    assert (x - y).as_fraction() == (Fraction(a, b) - Fraction(c, d)) % 1
    assert (-x).as_fraction() == (-Fraction(a, b)) % 1
    assert (x * n).as_fraction() == (Fraction(a, b) * n) % 1


def test_unit_rational_parse_and_str():
    assert UnitRational.parse("3/4") == UnitRational(3, 4)
    assert str(UnitRational(5, 4)) == "1/4"
    assert str(UnitRational(2, 2)) == "0"
    assert UnitRational(1, 2) == Fraction(3, 2)
    assert not UnitRational(7, 7)


# ---- GroupSpec / elements --------------------------------------------------

@pytest.mark.parametrize("text,moduli", [("2,2,4", (2, 2, 4)), ("2^3", (2, 2, 2)), ("2^2,4", (2, 2, 4)), ("", ())])
def test_groupspec_parse(text, moduli):
    assert GroupSpec.parse(text).moduli == moduli


@pytest.mark.parametrize("bad", ["2,x", "0", "2,,3", "-1", "2^"])
def test_groupspec_parse_rejects_malformed(bad):
    with pytest.raises(PreconditionError):
        GroupSpec.parse(bad)


def test_trivial_group():
    g = GroupSpec(())
    assert g.order == 1 and g.exponent == 1 and g.rank == 0


@given(moduli_st)
def test_exponent_kills_every_element(moduli):
    g = GroupSpec(moduli)
    assert g.exponent == math.lcm(*moduli) if moduli else g.exponent == 1
    for x in g.elements():
        assert (x * g.exponent).is_zero()


@given(small_moduli, st.data())
def test_element_arithmetic_is_coordinatewise_mod(moduli, data):
    g = GroupSpec(moduli)
    a = g.element_at(data.draw(st.integers(0, g.order - 1)))
    b = g.element_at(data.draw(st.integers(0, g.order - 1)))
    s = a + b
    assert s.coords == tuple((x + y) % d for x, y, d in zip(a.coords, b.coords, moduli))
    assert (s - b) == a
    assert (a + (-a)).is_zero()
    assert residue_lift(a) == a.coords
    assert all(0 <= c < d for c, d in zip(residue_lift(a), moduli))


def test_index_roundtrip_and_orders():
    g = GroupSpec((2, 6))
    for i, x in enumerate(g.elements()):
        assert x.index == i
        assert g.element_at(i) == x
    assert g.element((1, 2)).order() == 6
    assert g.element((0, 3)).order() == 2


# ---- characters and Fourier ------------------------------------------------

def test_character_values_and_pairing():
    g = GroupSpec((2, 4))
    chi = Character(g, (1, 1))
    x = g.element((1, 3))
    assert chi(x) == UnitRational(1, 2) + UnitRational(3, 4)
    vals = chi.values()
    assert UnitRational(int(vals[x.index]), g.exponent) == chi(x)


@given(small_moduli, st.integers(0, 10_000))
def test_fft_matches_direct_character_sum(moduli, seed):
    g = GroupSpec(moduli)
    rng = np.random.default_rng(seed)
    vals = rng.normal(size=g.order) + 1j * rng.normal(size=g.order)
    f = FunctionTable.from_complex(g, vals)
    fast = fourier_transform(f).array
    assert np.allclose(fast, direct_fourier(vals, moduli), atol=1e-12)
    assert np.allclose(fourier_direct(f).array, fast, atol=1e-12)
    assert np.allclose(inverse_fourier_transform(fourier_transform(f)).array, vals, atol=1e-12)


def test_character_has_single_fourier_coefficient():
    g = GroupSpec((3, 4))
    chi = Character(g, (2, 1))
    fh = fourier_transform(FunctionTable.from_ints(g, chi.values(), g.exponent).phase()).array
    assert abs(fh[g.element((2, 1)).index] - 1) < 1e-12
    assert np.sum(np.abs(fh) > 1e-9) == 1


# ---- Sylow / CRT --------------------------------------------------------

@given(st.lists(st.integers(1, 40), min_size=1, max_size=3))
def test_sylow_roundtrip(moduli):
    g = GroupSpec(tuple(moduli))
    dec = sylow_decompose(g)
    assert math.prod(c.spec.order for c in dec.components.values()) == g.order
    for p, comp in dec.components.items():
        assert all(d % p == 0 and (d & (d - 1) == 0 if p == 2 else True) for d in comp.spec.moduli)
    for x in list(g.elements())[:200]:
        assert dec.backward(dec.forward(x)) == x


def test_sylow_components_of_z12():
    dec = sylow_decompose(GroupSpec((12,)))
    assert {p: s.moduli for p, s in dec.specs().items()} == {2: (4,), 3: (3,)}
    x = GroupSpec((12,)).element((7,))
    parts = dec.forward(x)
    assert parts[2].coords == (3,) and parts[3].coords == (1,)


# ---- tables ------------------------------------------------------------------

def test_exact_table_canonical_denominator_and_json(tmp_path):
    g = GroupSpec((2, 2))
    f = FunctionTable.from_ints(g, [0, 2, 4, 6], 8)
    assert f.den == 4
    assert f.values == [UnitRational(0), UnitRational(1, 4), UnitRational(1, 2), UnitRational(3, 4)]
    path = tmp_path / "f.json"
    f.save(path)
    assert FunctionTable.load(path) == f
    c = FunctionTable.from_complex(g, [1, 1j, -1, 0])
    assert FunctionTable.from_json(c.to_json()) == c


def test_table_size_mismatch_rejected():
    with pytest.raises(PreconditionError):
        FunctionTable.from_ints(GroupSpec((3,)), [0, 1], 2)


def test_exact_tables_do_not_silently_become_complex():
    f = FunctionTable.from_ints(GroupSpec((2,)), [0, 1], 2)
    with pytest.raises(PreconditionError):
        _ = f.array
    assert np.allclose(f.phase().array, [1, -1])
