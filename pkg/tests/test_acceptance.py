"""One test per acceptance criterion; each prints a single PASS/FAIL line."""
import os
import subprocess
import sys

import numpy as np
import pytest

from gowers_lab import GroupSpec
from gowers_lab.dynamics import appendixD_checks, quasi_remark_contradiction
from gowers_lab.gowers import NormRequest, gowers_norm
from gowers_lab.suites import (COUNT_CASES, CONSTANCY_CASES, DELTA_GROUPS, random_corpus, residue_catalog,
                               run_suite)


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail=""):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        return ok
    return emit


def failed(rep):
    return [c.name for c in rep.checks if not c.passed]


def test_criterion_1_gowers_oracle_agreement(verdict):
    rep = run_suite("gowers")
    by = {c.name: c for c in rep.checks}
    ok = rep.passed and rep.data["functions"] == 200 and by["z2_indicator_exact"].passed
    detail = (f"naive/recursive dev {by['naive_vs_recursive_1e-9'].detail['max_deviation']:.2e}, "
              f"fourier dev {by['u2_vs_fourier_1e-9'].detail['max_deviation']:.2e}")
    assert verdict(1, ok, detail), failed(rep)


def test_criterion_2_phase_extremality_and_monotonicity(verdict):
    rep = run_suite("extremality")
    worst = 0.0
    for f in random_corpus(200):
        norms = [gowers_norm(NormRequest(f, k, "recursive")) for k in (1, 2, 3, 4)]
        worst = max(worst, max(a - b for a, b in zip(norms, norms[1:])))
    ok = rep.passed and worst <= 1e-9
    detail = f"{rep.data['distinct_phases']} phases, max monotonicity violation {worst:.2e}"
    assert verdict(2, ok, detail), (failed(rep), worst)


def test_criterion_3_inverse_certificate(verdict):
    rep = run_suite("inverse")
    assert verdict(3, rep.passed, f"worst gaps {[c.detail['worst_gap'] for c in rep.checks]}"), failed(rep)


def test_criterion_4_binomial_divisibility(verdict):
    rep = run_suite("alg-lemma")
    ce = next(c for c in rep.checks if c.name == "max_convention_counterexample_detected")
    ok = rep.passed and ce.detail == {"j": 2, "binom": 15}
    assert verdict(4, ok, f"max-convention counterexample {ce.detail}"), failed(rep)


def test_criterion_5_residue_degree_catalog(verdict):
    rep = run_suite("residue")
    groups = {str(g) for _, g, _ in residue_catalog()}
    ok = rep.passed and rep.data["instances"] >= 20 and groups == {"2", "4", "2,2", "2,4"}
    assert verdict(5, ok, f"{rep.data['instances']} instances"), failed(rep)


def test_criterion_6_universal_system(verdict):
    rep = run_suite("universal")
    ok = rep.passed and any(c.name.endswith("expansion") for c in rep.checks)
    assert verdict(6, ok, f"forms checked {rep.data['forms']}"), failed(rep)


def test_criterion_7_cube_suite(verdict):
    rep = run_suite("cubes")
    max_delta = max(GroupSpec.parse(g).order for g in DELTA_GROUPS)
    ok = rep.passed and len(COUNT_CASES) >= 12 and max_delta <= 64
    assert verdict(7, ok, f"{len(COUNT_CASES)} count cases"), failed(rep)


def test_criterion_8_gallery_identities(verdict):
    rep = run_suite("gallery")
    left, right = quasi_remark_contradiction((1, 0), (0, 1))
    degs = {n: appendixD_checks(n).data for n in (1, 2, 3)}
    f_ok = all(d["degree_f"] == 3 for d in degs.values())
    ok = rep.passed and left != right and f_ok
    detail = f"witness {left} != {right}, degree(sum|x_i|/8) = 3"
    assert verdict(8, ok, detail), failed(rep)


def test_criterion_8_stated_degree_values(verdict):
    # asserted targets: degree(t/8) = 4 and degree((t mod 4)/4) = 3 on the appendixD system
    got = {n: appendixD_checks(n).data for n in (1, 2, 3)}
    phi = {n: d["degree_phi"] for n, d in got.items()}
    iota = {n: d["degree_iota"] for n, d in got.items()}
    ok = all(v == 4 for v in phi.values()) and all(v == 3 for v in iota.values())
    detail = f"measured degree(phi) {phi}, degree(Z/4 coordinate) {iota}; stated 4 and 3"
    assert verdict("8 (stated degree values)", ok, detail), detail


def test_criterion_9_sylow_and_tensor(verdict):
    rep = run_suite("sylow")
    tens = next(c for c in rep.checks if c.name == "tensor_multiplicativity_1e-8")
    assert verdict(9, rep.passed, f"tensor dev {tens.detail['max_deviation']:.2e}"), failed(rep)


def test_criterion_10_constancy(verdict):
    rep = run_suite("constancy")
    pairs = {(q**l, p**m) for q, l, p, m in CONSTANCY_CASES}
    ok = rep.passed and pairs == {(3, 2), (2, 3), (3, 4), (9, 2), (4, 3)}
    assert verdict(10, ok, f"pairs {sorted(pairs)}"), failed(rep)


def test_criterion_11_determinism(verdict):
    outs = []
    for threads in ("1", "8"):
        env = dict(os.environ, GOWERS_LAB_THREADS=threads)
        p = subprocess.run([sys.executable, "-m", "gowers_lab", "verify", "all"], env=env,
                           capture_output=True, timeout=900)
        assert p.returncode == 0, p.stderr.decode()
        outs.append(p.stdout)
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    assert verdict(11, ok, f"{len(outs[0])} bytes, identical={outs[0] == outs[1]}")
