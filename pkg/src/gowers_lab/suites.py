"""Named verification suites aggregated by ``verify all``.

Every suite is deterministic: random inputs come from fixed seeds and all
floating reductions run in a fixed order.  ``scale="quick"`` shrinks the
sweeps for smoke runs; ``"desk"`` is the full size.
"""
from __future__ import annotations

import itertools
import math
from typing import Callable

import numpy as np

from . import cubes, dynamics
from .errors import PreconditionError
from .gowers import (NormRequest, correlate_exhaustive, gowers_inner_product, gowers_norm,
                     tensor_multiplicativity_check, u2_fourier, u2_inverse_certificate)
from .groups import GroupSpec, sylow_decompose
from .multilinear import (build_universal_system, enumerate_forms, verify_action, verify_k3_expansion,
                          verify_spectrum)
from .polycalc import (IntPolynomial, PolynomialPhase, binom_valuation, degree, monomials,
                       verify_alg_lemma, verify_residue_degree)
from .rational import UnitRational
from .report import Report
from .tables import FunctionTable

CORPUS_GROUPS = (
    "2", "3", "4", "2,2", "5", "6", "7", "8", "2,4", "2,2,2", "9", "3,3", "10", "12", "2,6",
    "16", "2,8", "4,4", "2,2,4", "2^4", "18", "3,6", "20", "24", "2,12", "2,2,6", "27", "32",
    "4,8", "36", "6,6", "40", "48", "4,12", "2,24",
)


def random_table(spec: GroupSpec, kind: int, rng: np.random.Generator) -> FunctionTable:
    """A 1-bounded table: unit phases, unit-disk values, signs, or 0/1 indicators."""
    N = spec.order
    if kind == 0:
        vals = np.exp(2j * np.pi * rng.random(N))
    elif kind == 1:
        vals = np.sqrt(rng.random(N)) * np.exp(2j * np.pi * rng.random(N))
    elif kind == 2:
        vals = rng.choice([-1.0, 1.0], N).astype(complex)
    else:
        vals = rng.integers(0, 2, N).astype(complex)
    return FunctionTable.from_complex(spec, vals)


def random_corpus(count: int = 200, seed: int = 0) -> list[FunctionTable]:
    out = []
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        spec = GroupSpec.parse(CORPUS_GROUPS[i % len(CORPUS_GROUPS)])
        out.append(random_table(spec, i % 4, rng))
    return out


def _corpus_size(scale: str) -> int:
    return 200 if scale == "desk" else 24


def suite_gowers(scale: str = "desk") -> Report:
    """Naive and recursive norms agree, U^2 matches the Fourier identity, norms are monotone."""
    rep = Report("gowers")
    dev_nr = dev_f = mono = 0.0
    for f in random_corpus(_corpus_size(scale)):
        norms = []
        for k in (1, 2, 3):
            a = gowers_norm(NormRequest(f, k, "naive"))
            b = gowers_norm(NormRequest(f, k, "recursive"))
            dev_nr = max(dev_nr, abs(a - b))
            norms.append(a)
        dev_f = max(dev_f, abs(norms[1] - u2_fourier(f)))
        mono = max(mono, norms[0] - norms[1], norms[1] - norms[2])
    rep.add("naive_vs_recursive_1e-9", dev_nr <= 1e-9, {"max_deviation": dev_nr})
    rep.add("u2_vs_fourier_1e-9", dev_f <= 1e-9, {"max_deviation": dev_f})
    rep.add("monotone_in_k", mono <= 1e-9, {"max_violation": mono})
    f = FunctionTable.from_complex(GroupSpec((2,)), [1, 0])
    exact = (1 / 8) ** 0.25
    vals = {m: gowers_norm(NormRequest(f, 2, m)) for m in ("naive", "recursive", "fourier-u2")}
    rep.add("z2_indicator_exact", all(abs(v - exact) <= 1e-10 for v in vals.values()), vals)
    inner = gowers_inner_product([f] * 4)
    rep.add("inner_product_matches_norm", abs(inner - 1 / 8) <= 1e-10, {"value": inner.real})
    rep.data["functions"] = _corpus_size(scale)
    return rep


def all_phases(spec: GroupSpec, max_degree: int, den: int) -> list[PolynomialPhase]:
    """Every phase ``sum_a c_a C(|x|, a)`` with ``deg a <= max_degree`` and ``c_a`` in (1/den)Z/Z."""
    monos = monomials(spec, max_degree, include_constant=True)
    return [PolynomialPhase(spec, {a: UnitRational(c, den) for a, c in zip(monos, coefs)}, max_degree)
            for coefs in itertools.product(range(den), repeat=len(monos))]


def suite_extremality(scale: str = "desk") -> Report:
    """``||e(P)||_{U^{deg P + 1}} = 1`` for every low-degree phase on Z/2 x Z/4.

    Coefficients run over (1/q)Z/Z for q = 3, 4.  A coefficient with
    denominator 3 on this 2-group only yields a polynomial when its monomial
    contributes a constant, so such tables are counted and skipped.
    """
    rep = Report("extremality")
    spec = GroupSpec((2, 4))
    worst, count, degs, skipped = 0.0, 0, {}, 0
    seen = set()
    for den in ((3, 4) if scale == "desk" else (4,)):
        for P in all_phases(spec, 2, den):
            t = P.table()
            if t.key() in seen:
                continue
            seen.add(t.key())
            d = degree(t).effective()
            if d is None:
                skipped += 1
                continue
            # recursive evaluation; its agreement with the naive average is the gowers suite
            worst = max(worst, abs(gowers_norm(NormRequest(t, max(d, 0) + 1, "recursive")) - 1.0))
            degs[d] = degs.get(d, 0) + 1
            count += 1
    rep.add("phase_norm_is_one_1e-10", worst <= 1e-10, {"max_deviation": worst})
    rep.data.update(distinct_phases=count, non_polynomial=skipped,
                    measured_degrees={str(k): v for k, v in sorted(degs.items())})
    return rep


def suite_inverse(scale: str = "desk") -> Report:
    """Largest Fourier coefficient and exhaustive degree-1 search both reach ``||f||_{U^2}^2``."""
    rep = Report("inverse")
    cert_gap = search_gap = -math.inf
    for f in random_corpus(_corpus_size(scale)):
        cert = u2_inverse_certificate(f)
        cert_gap = max(cert_gap, cert.u2_squared - cert.correlation)
        res = correlate_exhaustive(f, 1, f.spec.exponent)
        search_gap = max(search_gap, cert.u2_squared - res.correlation)
    rep.add("fourier_max_at_least_u2_squared", cert_gap <= 1e-9, {"worst_gap": cert_gap})
    rep.add("exhaustive_degree1_at_least_u2_squared", search_gap <= 1e-9, {"worst_gap": search_gap})
    return rep


ALG_LEMMA_M = (2, 3, 4, 5, 6, 8, 9, 12)


def suite_alg_lemma(scale: str = "desk") -> Report:
    rep = Report("alg_lemma")
    for m, r in itertools.product(ALG_LEMMA_M, (1, 2)):
        sub = verify_alg_lemma(m, r)
        rep.extend(sub, f"m={m},r={r}")
        if sub.data["max_convention_counterexample"] is not None:
            rep.data[f"max_counterexample(m={m},r={r})"] = sub.data["max_convention_counterexample"]
    ce = verify_alg_lemma(6, 1).data["max_convention_counterexample"]
    rep.add("max_convention_counterexample_detected", ce == {"j": 2, "binom": 15}, ce)
    kummer = all(binom_valuation(a, b, p) == _direct_valuation(math.comb(a, b), p)
                 for p in (2, 3, 5, 7, 11, 13) for a in range(65) for b in range(a + 1))
    rep.add("kummer_matches_factorization", kummer)
    return rep


def _direct_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def residue_catalog() -> list[tuple[IntPolynomial, GroupSpec, int]]:
    """Fixed catalog of (P, group, s) instances."""
    polys1 = [
        IntPolynomial({(1,): 1}), IntPolynomial({(2,): 1}), IntPolynomial({(1,): 3, (0,): 1}),
        IntPolynomial({(3,): 1}), IntPolynomial({(2,): 1, (1,): 1}), IntPolynomial({(0,): 5}),
    ]
    polys2 = [
        IntPolynomial({(1, 0): 1, (0, 1): 1}), IntPolynomial({(1, 1): 1}),
        IntPolynomial({(2, 0): 1, (0, 1): 3}), IntPolynomial({(2, 1): 1}),
        IntPolynomial({(1, 1): 2, (1, 0): 1}),
    ]
    out = []
    for s in (1, 2):
        for g in ("2", "4"):
            out += [(P, GroupSpec.parse(g), s) for P in polys1]
        for g in ("2,2", "2,4"):
            out += [(P, GroupSpec.parse(g), s) for P in polys2]
    return out


def suite_residue(scale: str = "desk") -> Report:
    rep = Report("residue_degree")
    rows = []
    for P, spec, s in residue_catalog():
        sub = verify_residue_degree(P, spec, s)
        rows.append(sub.passed)
    rep.add("all_within_bound", all(rows), {"instances": len(rows)})
    exact = verify_residue_degree(IntPolynomial({(1,): 1}), GroupSpec((2,)), 2)
    rep.add("t_on_z2_s2_degree_exactly_2", exact.data["measured"] == 2, exact.data)
    rep.data["instances"] = len(rows)
    return rep


UNIVERSAL_GROUPS = ("2,2", "3", "2,2,2")


def suite_universal(scale: str = "desk") -> Report:
    rep = Report("universal")
    counts = {}
    for g in UNIVERSAL_GROUPS:
        spec = GroupSpec.parse(g)
        for k in (1, 2, 3):
            forms = list(enumerate_forms(spec, k, max_den=6))
            if scale != "desk":
                forms = forms[:: max(1, len(forms) // 8)]
            ok_a = ok_s = ok_e = True
            for b in forms:
                sys = build_universal_system(b)
                ok_a &= verify_action(sys).passed
                ok_s &= verify_spectrum(sys).passed
                if k == 3:
                    ok_e &= verify_k3_expansion(sys).passed
            rep.add(f"{g}/k={k}/action", ok_a)
            rep.add(f"{g}/k={k}/spectrum", ok_s)
            if k == 3:
                rep.add(f"{g}/k=3/expansion", ok_e)
            counts[f"{g}/k={k}"] = len(forms)
    rep.data["forms"] = counts
    return rep


COUNT_CASES = (
    ("D1:2", 0), ("D1:2", 1), ("D1:2", 2), ("D1:2", 3), ("D2:2", 2), ("D2:2", 3), ("D1:3", 2),
    ("D1:3", 3), ("D1:2,2", 2), ("D1:2,2", 3), ("D1:4", 2), ("D2:3", 3), ("D1:2;D2:2", 2),
    ("D1:2;D2:2", 3), ("D3:2", 4), ("D2:4", 2), ("D1:5", 2),
)
COMPLETION_CASES = ("D1:2", "D1:3", "D1:4", "D1:2,2", "D2:2", "D2:3", "D1:2;D2:2", "D3:2")
HK_CASES = (("D1:2;D2:2", 1), ("D1:2;D2:2", 2), ("D1:2;D2:2", 3), ("D1:3", 2), ("D2:2,2", 2),
            ("D1:4", 2), ("D2:3", 3), ("D3:2", 4))
DELTA_GROUPS = ("2", "4", "2,2", "8", "2,4", "3", "2,2,2", "4,4", "2^4", "8,8", "2^6")


def suite_cubes(scale: str = "desk") -> Report:
    rep = Report("cubes")
    rows = []
    for s, n in COUNT_CASES:
        got, want = cubes.count_cubes(cubes.FilteredAbelianSpec.parse(s), n)
        rows.append({"spec": s, "n": n, "count": got, "predicted": want})
    rep.add("count_matches_closed_form", all(r["count"] == r["predicted"] for r in rows), rows)
    named = {(r["spec"], r["n"]): r["count"] for r in rows}
    rep.add("count_D1_Z2_n2_is_8", named[("D1:2", 2)] == 8)
    rep.add("count_D2_Z2_n3_is_128", named[("D2:2", 3)] == 128)
    comp = []
    for s in COMPLETION_CASES:
        spec = cubes.FilteredAbelianSpec.parse(s)
        valid, unique, stray = cubes.completion_counts(spec, spec.step + 1)
        comp.append({"spec": s, "corners": valid, "unique": unique, "stray": stray})
    rep.add("unique_corner_completion", all(c["corners"] == c["unique"] and not c["stray"] for c in comp), comp)
    hk = []
    for s, n in HK_CASES:
        spec = cubes.FilteredAbelianSpec.parse(s)
        G = spec.group
        t = cubes._all_tuples(G, n, 0, G.order ** (2**n))
        hk.append(bool(np.array_equal(cubes.hk_members(spec, t), cubes.members(spec, t))))
    rep.add("hk_equals_cube_membership", all(hk), {"cases": len(hk)})
    rep.extend(delta_degree_report(scale))
    return rep


def delta_degree_report(scale: str = "desk") -> Report:
    """``delta_k_vanishing(f, k)`` agrees with ``degree(f) <= k - 1``."""
    rep = Report("delta")
    mismatches, checked = [], 0
    for gi, g in enumerate(DELTA_GROUPS):
        spec = GroupSpec.parse(g)
        kmax = 3 if spec.order <= 16 else 2
        rng = np.random.default_rng([7, gi])
        tables = []
        for den in (2, 4, 8):
            tables.append(FunctionTable.from_ints(spec, rng.integers(0, den, spec.order), den))
            for d in (1, 2, 3):
                monos = monomials(spec, d, include_constant=True)
                terms = {a: UnitRational(int(c), den) for a, c in zip(monos, rng.integers(0, den, len(monos)))}
                tables.append(PolynomialPhase(spec, terms, d).table())
        if scale != "desk":
            tables = tables[:4]
        for f in tables:
            deg = degree(f).effective()
            for k in range(1, kmax + 1):
                checked += 1
                v = cubes.delta_k_vanishing(f, k)
                if v != (deg is not None and deg <= k - 1):
                    mismatches.append({"group": g, "k": k, "degree": deg})
    rep.add("delta_k_iff_degree_below_k", not mismatches, {"checked": checked, "mismatches": mismatches[:5]})
    return rep


def suite_gallery(scale: str = "desk") -> Report:
    rep = Report("gallery")
    sizes = (1, 2, 3) if scale == "desk" else (1, 2)
    for n in sizes:
        rep.extend(dynamics.gallery_suite("z4z-skew", n), f"z4z-skew(n={n})")
        rep.extend(dynamics.gallery_suite("appendixD", n), f"appendixD(n={n})")
    rep.extend(dynamics.gallery_suite("quasi-remark"), "quasi-remark")
    for n in (sizes + (4,) if scale == "desk" else sizes):
        sub = dynamics.appendixD_checks(n)
        rep.extend(sub, f"degrees(n={n})")
        rep.data[f"degrees(n={n})"] = {k: sub.data[k] for k in ("degree_phi", "degree_iota", "degree_f")}
    return rep


SYLOW_GROUPS = ("6", "12", "2,3,5", "4,6", "30,12", "8,9,5,7", "12,18,10", "100,100")


def suite_sylow(scale: str = "desk") -> Report:
    rep = Report("sylow_tensor")
    ok = True
    groups = SYLOW_GROUPS if scale == "desk" else SYLOW_GROUPS[:4]
    for g in groups:
        spec = GroupSpec.parse(g)
        dec = sylow_decompose(spec)
        idx = dec.forward_index()
        ok &= all(dec.backward(dec.forward(x)) == x for x in spec.elements())
        # the component index maps jointly form a bijection
        joint = np.stack([idx[p] for p in dec], axis=1) if idx else np.zeros((1, 0))
        ok &= len({tuple(r) for r in joint.tolist()}) == spec.order
        ok &= math.prod(c.spec.order for c in dec.components.values()) == spec.order
    rep.add("crt_roundtrip", ok, {"groups": list(groups)})
    worst = 0.0
    for gp, gq in (("2", "3"), ("4", "3")):
        for seed in range(6):
            rng = np.random.default_rng([11, seed])
            fp = random_table(GroupSpec.parse(gp), seed % 4, rng)
            fq = random_table(GroupSpec.parse(gq), (seed + 1) % 4, rng)
            for k in (1, 2):
                sub = tensor_multiplicativity_check(fp, fq, k)
                d = sub.checks[0].detail
                worst = max(worst, abs(d["product_norm"] - d["norm_product"]))
    rep.add("tensor_multiplicativity_1e-8", worst <= 1e-8, {"max_deviation": worst})
    return rep


CONSTANCY_CASES = ((3, 1, 2, 1), (2, 1, 3, 1), (3, 1, 2, 2), (3, 2, 2, 1), (2, 2, 3, 1))


def suite_constancy(scale: str = "desk") -> Report:
    rep = Report("constancy")
    for q, l, p, m in CONSTANCY_CASES:
        rep.extend(cubes.morphism_constancy(q, l, p, m), f"{q**l}->{p**m}")
    return rep


SUITES: dict[str, Callable[[str], Report]] = {
    "gowers": suite_gowers,
    "extremality": suite_extremality,
    "inverse": suite_inverse,
    "alg-lemma": suite_alg_lemma,
    "residue": suite_residue,
    "universal": suite_universal,
    "cubes": suite_cubes,
    "gallery": suite_gallery,
    "sylow": suite_sylow,
    "constancy": suite_constancy,
}


def run_suite(name: str, scale: str = "desk") -> Report:
    if name not in SUITES:
        raise PreconditionError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if scale not in ("desk", "quick"):
        raise PreconditionError(f"unknown scale {scale!r}")
    return SUITES[name](scale)
