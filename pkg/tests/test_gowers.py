import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gowers_lab import BudgetError, Character, FunctionTable, GroupSpec, InvariantViolation, PreconditionError
from gowers_lab.gowers import (NormRequest, correlate_exhaustive, correlate_search, default_search_degree,
                               gowers_inner_product, gowers_norm, gowers_norm_power, phase_correlation,
                               tensor_multiplicativity_check, u2_fourier, u2_inverse_certificate)
from gowers_lab.polycalc import PolynomialPhase, degree, monomials, parse_phase
from gowers_lab.rational import UnitRational

from oracles import naive_gowers_power

Z2 = GroupSpec((2,))
SMALL = [(2,), (3,), (4,), (2, 2), (5,), (6,), (2, 3), (8,)]


@st.composite
def bounded_tables(draw, groups=SMALL):
    g = GroupSpec(draw(st.sampled_from(groups)))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    vals = np.sqrt(rng.random(g.order)) * np.exp(2j * np.pi * rng.random(g.order))
    return FunctionTable.from_complex(g, vals)


def test_z2_indicator_exact_value():
    f = FunctionTable.from_complex(Z2, [1, 0])
    exact = (1 / 8) ** 0.25
    for method in ("naive", "recursive", "fourier-u2"):
        assert abs(gowers_norm(NormRequest(f, 2, method)) - exact) <= 1e-10
    assert abs(u2_fourier(f) - exact) <= 1e-10


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_constant_one_has_norm_one(k):
    f = FunctionTable.from_complex(GroupSpec((2, 3)), np.ones(6))
    assert abs(gowers_norm(f, k) - 1) < 1e-12


@given(bounded_tables(), st.integers(1, 3))
def test_naive_matches_direct_oracle(f, k):
    want = naive_gowers_power(list(f.array), f.spec.moduli, k)
    got = gowers_norm_power(NormRequest(f, k, "naive"))
    assert abs(got - want) <= 1e-10


@given(bounded_tables(), st.integers(1, 3))
def test_methods_agree(f, k):
    a = gowers_norm(NormRequest(f, k, "naive"))
    b = gowers_norm(NormRequest(f, k, "recursive"))
    assert abs(a - b) <= 1e-9
    if k == 2:
        assert abs(a - u2_fourier(f)) <= 1e-9


@given(bounded_tables())
def test_monotone_in_k(f):
    norms = [gowers_norm(f, k) for k in (1, 2, 3)]
    assert norms[0] <= norms[1] + 1e-9 and norms[1] <= norms[2] + 1e-9


@given(bounded_tables(), st.data())
def test_shift_invariance(f, data):
    a = f.spec.element_at(data.draw(st.integers(0, f.spec.order - 1)))
    shifted = f.permute(f.spec.shift_perm(a))
    for k in (2, 3):
        assert abs(gowers_norm(shifted, k) - gowers_norm(f, k)) <= 1e-10


@given(bounded_tables(), st.data())
def test_character_modulation_invariance(f, data):
    xi = f.spec.coords[data.draw(st.integers(0, f.spec.order - 1))]
    chi = Character(f.spec, tuple(int(v) for v in xi))
    mod = FunctionTable.from_ints(f.spec, chi.values(), f.spec.exponent).phase()
    g = FunctionTable.from_complex(f.spec, (f * mod).array * np.exp(0.7j))
    for k in (2, 3):
        assert abs(gowers_norm(g, k) - gowers_norm(f, k)) <= 1e-9


def test_polynomial_phase_has_norm_one_above_its_degree():
    g = GroupSpec((2, 4))
    rng = np.random.default_rng(5)
    for _ in range(15):
        monos = monomials(g, 2)
        P = PolynomialPhase(g, {a: UnitRational(int(c), 4) for a, c in zip(monos, rng.integers(0, 4, len(monos)))})
        t = P.table()
        d = degree(t).effective()
        assert abs(gowers_norm(t, max(d, 0) + 1, "recursive") - 1) <= 1e-10


def test_fourier_method_requires_k2():
    with pytest.raises(PreconditionError):
        NormRequest(FunctionTable.from_complex(Z2, [1, 1]), 3, "fourier-u2")
    with pytest.raises(PreconditionError):
        NormRequest(FunctionTable.from_complex(Z2, [1, 1]), 0)


def test_budget_error_carries_estimate():
    f = FunctionTable.from_complex(GroupSpec((2,) * 4), np.ones(16))
    with pytest.raises(BudgetError) as err:
        gowers_norm(NormRequest(f, 4, "naive", budget=1000))
    assert err.value.estimated_ops > 1000


# ---- inner products ----------------------------------------------------

def test_inner_product_examples():
    one = FunctionTable.from_complex(Z2, [1, 1])
    zero = FunctionTable.from_complex(Z2, [0, 0])
    f = FunctionTable.from_complex(Z2, [1, 0])
    assert abs(gowers_inner_product([one] * 4) - 1) < 1e-12
    assert abs(gowers_inner_product([one, one, zero, one])) < 1e-12
    assert abs(gowers_inner_product([f] * 4) - 1 / 8) < 1e-12
    with pytest.raises(PreconditionError):
        gowers_inner_product([one] * 3)


@given(bounded_tables(), st.integers(1, 3))
def test_inner_product_specialises_to_norm(f, n):
    val = gowers_inner_product([f] * 2**n)
    assert abs(val - gowers_norm_power(NormRequest(f, n))) <= 1e-10


# ---- correlation ----------------------------------------------------------

def test_exhaustive_recovers_planted_phase():
    g = GroupSpec((2, 4))
    P0 = parse_phase(g, "1/4 * x2 + 1/2 * x1 x2 + 3/4")
    f = P0.table()
    res = correlate_exhaustive(f, 2, 4)
    assert abs(res.correlation - 1) <= 1e-12
    diff = (f - res.phase.table())
    assert diff.is_constant()


def test_exhaustive_examples():
    f = FunctionTable.from_complex(Z2, [1, -1])
    res = correlate_exhaustive(f, 1, 2)
    assert abs(res.correlation - 1) < 1e-12
    assert res.phase.terms == {(1,): UnitRational(1, 2)}
    zero = FunctionTable.from_complex(GroupSpec((4,)), np.zeros(4))
    assert correlate_exhaustive(zero, 2, 4).correlation == 0


def test_exhaustive_budget_guard():
    f = FunctionTable.from_complex(GroupSpec((2,) * 4), np.ones(16))
    with pytest.raises(BudgetError):
        correlate_exhaustive(f, 3, 4, budget=100)


@settings(max_examples=30)
@given(bounded_tables(groups=[(2,), (4,), (2, 2), (3,), (6,)]), st.integers(0, 50))
def test_search_bounded_by_exhaustive_and_above_fourier(f, seed):
    q = f.spec.exponent
    ex = correlate_exhaustive(f, 2, q)
    se = correlate_search(f, 2, q, budget=500, seed=seed)
    assert se.correlation <= ex.correlation + 1e-12
    fh = np.abs(np.fft.fftn(f.array.reshape(f.spec.moduli)) / f.spec.order).max()
    assert se.correlation >= fh - 1e-12
    # the reported correlation is recomputed independently
    assert abs(phase_correlation(f, se.phase) - se.correlation) <= 1e-12


def test_search_is_deterministic_and_monotone_in_budget():
    rng = np.random.default_rng(9)
    g = GroupSpec((2, 4))
    f = FunctionTable.from_complex(g, np.exp(2j * np.pi * rng.random(8)))
    a = correlate_search(f, 2, 4, budget=300, seed=4)
    b = correlate_search(f, 2, 4, budget=300, seed=4)
    assert a.correlation == b.correlation and a.coefficients == b.coefficients
    vals = [correlate_search(f, 2, 4, budget=B, seed=4).correlation for B in (5, 20, 60, 200, 600)]
    assert all(x <= y for x, y in zip(vals, vals[1:]))


def test_search_reaches_planted_phase():
    g = GroupSpec((4, 4))
    f = parse_phase(g, "1/4 * x1 + 3/4 * x2").table()
    assert abs(correlate_search(f, 1, 4, budget=200).correlation - 1) < 1e-12


def test_finish_detects_inconsistent_claim(monkeypatch):
    import gowers_lab.gowers as gw
    f = FunctionTable.from_complex(Z2, [1, 0])
    ev = gw._Evaluator(f, 1, 2)
    with pytest.raises(InvariantViolation):
        ev.finish([0], 0.9, "exhaustive", 1)


# ---- inverse certificate, tensor law ---------------------------------------

@given(bounded_tables())
def test_u2_certificate(f):
    cert = u2_inverse_certificate(f)
    assert cert.holds
    assert cert.correlation >= gowers_norm(f, 2) ** 2 - 1e-9


def test_u2_certificate_examples():
    chi = FunctionTable.from_ints(GroupSpec((4,)), Character(GroupSpec((4,)), (3,)).values(), 4)
    cert = u2_inverse_certificate(chi)
    assert cert.character.coords == (3,) and abs(cert.correlation - 1) < 1e-12
    cert = u2_inverse_certificate(FunctionTable.from_complex(Z2, [1, 0]))
    assert abs(cert.correlation - 0.5) < 1e-12 and abs(cert.u2_squared - math.sqrt(1 / 8)) < 1e-12
    cert = u2_inverse_certificate(FunctionTable.from_complex(Z2, [0, 0]))
    assert cert.holds
    with pytest.raises(PreconditionError):
        u2_inverse_certificate(FunctionTable.from_complex(Z2, [2, 0]))


@given(bounded_tables(groups=[(2,), (4,)]), bounded_tables(groups=[(3,)]), st.integers(1, 2))
def test_tensor_multiplicativity(fp, fq, k):
    assert tensor_multiplicativity_check(fp, fq, k).passed


def test_default_search_degree_formula():
    # k C(k,2) max p^nu (p^nu - 1)
    assert default_search_degree(2, 2) == 2 * 1 * 2
    assert default_search_degree(3, 12) == 3 * 3 * 12
