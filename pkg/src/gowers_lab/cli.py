"""Command-line front end: ``gowers-lab <command> <action> [options]``.

Every run resolves an :class:`ExperimentConfig`, executes it and writes one
JSON document (``sweep`` writes CSV).  Exit codes: 0 success, 2 bad input,
3 budget exceeded, 4 internal invariant failure.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__, cubes, dynamics, suites
from .errors import BudgetError, GowersLabError, InvariantViolation, PreconditionError
from .gowers import (NormRequest, correlate_exhaustive, correlate_search, default_search_degree,
                     gowers_inner_product, gowers_norm)
from .groups import Character, GroupSpec, sylow_decompose
from .multilinear import (SymForm, build_universal_system, verify_action, verify_k3_expansion,
                          verify_spectrum)
from .polycalc import (IntPolynomial, d_mr, degree, degree_all_shifts, parse_phase,
                       residue_degree_bound, verify_alg_lemma, verify_residue_degree)
from .report import _jsonable
from .tables import FunctionTable

TOOL = "gowers-lab"


@dataclass
class ExperimentConfig:
    """Fully resolved parameters of one run.  Unknown keys are rejected."""

    command: str | None = None
    action: str | None = None
    group: str | None = None
    fn: list[str] | None = None
    k: int | None = None
    method: str = "naive"
    degree: int | None = None
    den: int | None = None
    mode: str = "exhaustive"
    budget: int | None = None
    seed: int = 0
    all_shifts: bool = False
    p: int | None = None
    q: int | None = None
    r: int | None = None
    s: int | None = None
    l: int | None = None
    m: int | None = None
    convention: str = "min"
    int_poly: str | None = None
    element: str | None = None
    form: str | None = None
    system: str | None = None
    spec: str | None = None
    n: int | None = None
    cube: str | None = None
    corner: str | None = None
    face_convention: str = "k+1"
    name: str | None = None
    verify: str = "all"
    divisor: int = 2
    maxdeg: int = 3
    max_den: int | None = None
    target: str | None = None
    scale: str = "desk"
    timing: bool = False
    task: str = "norm"
    param: str | None = None
    range: str | None = None
    out: str | None = None
    format: str = "json"

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise PreconditionError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    def merged(self, overrides: dict) -> "ExperimentConfig":
        data = dataclasses.asdict(self)
        for key, val in overrides.items():
            if key not in data:
                raise PreconditionError(f"unknown config key {key!r}")
            if val is not None:
                data[key] = val
        return ExperimentConfig(**data)

    def echo(self) -> dict:
        return dataclasses.asdict(self)


# ---- function generators --------------------------------------------------

def _gallery_function(name: str, n: int) -> FunctionTable:
    if name == "appendixD":
        spec = GroupSpec((2,) * n)
        return FunctionTable.from_ints(spec, spec.coords.sum(axis=1), 8)
    if name == "quasi-remark":
        spec = GroupSpec((4, 4))
        c = spec.coords
        return FunctionTable.from_ints(spec, c[:, 0] ** 2 * c[:, 1], 4)
    if name == "z4z-skew":
        spec = GroupSpec((4,) * n)
        c = spec.coords
        return FunctionTable.from_ints(spec, (c * (c - 1) // 2).sum(axis=1), 2)
    raise PreconditionError(f"unknown gallery function {name!r}")


def make_function(gen: str, group: str | None) -> FunctionTable:
    """Build a table from ``const:``, ``char:``, ``poly:``, ``gallery:``, ``random:`` or ``file:``."""
    kind, _, arg = gen.partition(":")
    if kind == "file":
        f = FunctionTable.load(arg)
        if group is not None and f.spec != GroupSpec.parse(group):
            raise PreconditionError(f"file table lives on {f.spec}, not {group}")
        return f
    if kind == "gallery":
        name, _, size = arg.partition(":")
        f = _gallery_function(name, int(size) if size else 2)
        if group is not None and f.spec != GroupSpec.parse(group):
            raise PreconditionError(f"gallery function {name} lives on {f.spec}, not {group}")
        return f
    if group is None:
        raise PreconditionError(f"generator {kind!r} needs --group")
    spec = GroupSpec.parse(group)
    try:
        if kind == "const":
            return FunctionTable.from_complex(spec, np.full(spec.order, complex(arg.replace(" ", ""))))
        if kind == "char":
            xi = tuple(int(v) for v in arg.split(",")) if arg else (0,) * spec.rank
            chi = Character(spec, xi)
            return FunctionTable.from_ints(spec, chi.values(), spec.exponent)
        if kind == "poly":
            return parse_phase(spec, arg).table()
        if kind == "random":
            return suites.random_table(spec, 0, np.random.default_rng(int(arg or 0)))
    except ValueError as exc:
        raise PreconditionError(f"bad function generator {gen!r}: {exc}") from exc
    raise PreconditionError(f"unknown function generator {gen!r}")


def _load_json_arg(text: str) -> Any:
    """Inline JSON, or ``@path`` / an existing file path."""
    path = text[1:] if text.startswith("@") else text
    try:
        if Path(path).is_file():
            return json.loads(Path(path).read_text())
        return json.loads(text)
    except (json.JSONDecodeError, OSError) as exc:
        raise PreconditionError(f"cannot read JSON argument {text!r}: {exc}") from exc


def _require(cfg: ExperimentConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) in (None, [])]
    if missing:
        raise PreconditionError(f"{cfg.command} {cfg.action or ''}: missing --{', --'.join(missing)}".replace("_", "-"))


# ---- commands -------------------------------------------------------------

def _single_fn(cfg: ExperimentConfig) -> FunctionTable:
    _require(cfg, "fn")
    if len(cfg.fn) != 1:
        raise PreconditionError("exactly one --fn expected")
    return make_function(cfg.fn[0], cfg.group)


def cmd_gowers(cfg: ExperimentConfig) -> dict:
    budget = cfg.budget if cfg.budget is not None else 10**9
    if cfg.action == "norm":
        f = _single_fn(cfg)
        k = cfg.k = cfg.k if cfg.k is not None else 2
        cfg.budget = budget
        norm = gowers_norm(NormRequest(f, k, cfg.method, budget))
        return {"norm": norm, "method": cfg.method, "group": str(f.spec), "k": k}
    if cfg.action == "inner":
        _require(cfg, "fn")
        fs = [make_function(g, cfg.group) for g in cfg.fn]
        val = gowers_inner_product(fs, budget)
        return {"inner": [val.real, val.imag], "group": str(fs[0].spec), "n": len(fs).bit_length() - 1}
    if cfg.action == "correlate":
        f = _single_fn(cfg)
        if cfg.degree is None:
            cfg.degree = default_search_degree(cfg.k or 2, f.spec.exponent)
        deg = cfg.degree
        q = cfg.den = cfg.den if cfg.den is not None else f.spec.exponent
        if cfg.mode == "exhaustive":
            cfg.budget = cfg.budget if cfg.budget is not None else 10**7
            res = correlate_exhaustive(f, deg, q, cfg.budget)
        elif cfg.mode == "search":
            cfg.budget = cfg.budget if cfg.budget is not None else 10_000
            res = correlate_search(f, deg, q, cfg.budget, cfg.seed)
        else:
            raise PreconditionError(f"unknown mode {cfg.mode!r}")
        out = res.to_json()
        out.update(group=str(f.spec), degree=deg, method=cfg.mode)
        return out
    raise PreconditionError(f"unknown gowers action {cfg.action!r}")


def _parse_int_poly(text: str) -> IntPolynomial:
    """``[[exponents, coeff], ...]`` (power basis) as JSON."""
    data = _load_json_arg(text)
    try:
        return IntPolynomial({tuple(int(v) for v in a): int(c) for a, c in data})
    except (TypeError, ValueError) as exc:
        raise PreconditionError(f"bad integer polynomial {text!r}") from exc


def cmd_poly(cfg: ExperimentConfig) -> dict:
    if cfg.action == "degree":
        f = _single_fn(cfg)
        res = (degree_all_shifts if cfg.all_shifts else degree)(f)
        return {"group": str(f.spec), **res.to_json(), "shifts": "all" if cfg.all_shifts else "generators"}
    if cfg.action == "residue-bound":
        _require(cfg, "k", "p", "r", "s")
        out: dict = {"bound": residue_degree_bound(cfg.k, cfg.p, cfg.r, cfg.s)}
        if cfg.int_poly is not None:
            _require(cfg, "group")
            rep = verify_residue_degree(_parse_int_poly(cfg.int_poly), GroupSpec.parse(cfg.group), cfg.s)
            out["verification"] = rep.to_json()
        return out
    if cfg.action == "alg-lemma":
        _require(cfg, "m", "r")
        rep = verify_alg_lemma(cfg.m, cfg.r)
        return {"d_mr": d_mr(cfg.m, cfg.r, cfg.convention), "convention": cfg.convention,
                "report": rep.to_json()}
    raise PreconditionError(f"unknown poly action {cfg.action!r}")


def cmd_sylow(cfg: ExperimentConfig) -> dict:
    _require(cfg, "group")
    spec = GroupSpec.parse(cfg.group)
    dec = sylow_decompose(spec)
    out: dict = {"group": str(spec), "components": {str(p): str(s) for p, s in dec.specs().items()}}
    if cfg.element is not None:
        x = spec.element(tuple(int(v) for v in cfg.element.split(",")))
        parts = dec.forward(x)
        back = dec.backward(parts)
        out["element"] = {"coords": list(x.coords), "parts": {str(p): list(e.coords) for p, e in parts.items()},
                          "roundtrip": back == x}
    return out


def _form_from(cfg: ExperimentConfig) -> SymForm:
    if cfg.system is not None:
        saved = _load_json_arg(cfg.system)
        res = saved.get("result", saved)
        return SymForm.from_json(GroupSpec.parse(res["group"]), res["form"])
    _require(cfg, "group", "form")
    spec = GroupSpec.parse(cfg.group)
    form = SymForm.from_json(spec, _load_json_arg(cfg.form))
    if cfg.k is not None and cfg.k != form.order:
        raise PreconditionError(f"--k {cfg.k} does not match the form's order {form.order}")
    return form


def cmd_universal(cfg: ExperimentConfig) -> dict:
    b = _form_from(cfg)
    sysm = build_universal_system(b)
    out = {"group": str(b.spec), "k": b.order, "form": b.to_json(), "states": sysm.size, "N": sysm.N,
           "layout": [[i, list(t)] for i, t in sysm.layout]}
    if cfg.action == "build":
        return out
    if cfg.action == "verify":
        reports = [verify_action(sysm), verify_spectrum(sysm)]
        if b.order == 3:
            reports.append(verify_k3_expansion(sysm))
        out["reports"] = [r.to_json() for r in reports]
        out["passed"] = all(r.passed for r in reports)
        return out
    raise PreconditionError(f"unknown universal action {cfg.action!r}")


def cmd_cubes(cfg: ExperimentConfig) -> dict:
    if cfg.action == "constancy":
        _require(cfg, "q", "l", "p", "m")
        return cubes.morphism_constancy(cfg.q, cfg.l, cfg.p, cfg.m).to_json()
    _require(cfg, "spec")
    spec = cubes.FilteredAbelianSpec.parse(cfg.spec)
    conv = cfg.face_convention
    if cfg.action == "count":
        _require(cfg, "n")
        budget = cfg.budget = cfg.budget if cfg.budget is not None else 1 << 24
        count, predicted = cubes.count_cubes(spec, cfg.n, budget, conv)
        return {"spec": str(spec), "n": cfg.n, "count": count, "predicted": predicted,
                "matches": count == predicted}
    if cfg.action == "member":
        _require(cfg, "cube")
        c = cubes.CubeTuple.from_list(_load_json_arg(cfg.cube))
        return {"spec": str(spec), "member": cubes.cube_membership(spec, c, conv),
                "hk_member": cubes.hk_membership(spec, c)}
    if cfg.action == "complete":
        _require(cfg, "corner")
        comps = cubes.corner_complete(spec, np.asarray(_load_json_arg(cfg.corner)), conv)
        return {"spec": str(spec), "completions": [list(c) for c in comps], "count": len(comps)}
    raise PreconditionError(f"unknown cubes action {cfg.action!r}")


def cmd_dynamics(cfg: ExperimentConfig) -> dict:
    if cfg.action == "gallery":
        _require(cfg, "name")
        n = cfg.n = cfg.n if cfg.n is not None else 2
        sysm = dynamics.gallery_build(cfg.name, n)
        out: dict = {"system": sysm.to_json()}
        if cfg.verify == "all":
            rep = dynamics.gallery_suite(cfg.name, n)
            out["report"] = rep.to_json()
            if cfg.name == "appendixD" and n <= 4:
                out["degrees"] = dynamics.appendixD_checks(n).to_json()
        elif cfg.verify != "none":
            raise PreconditionError("--verify must be 'all' or 'none'")
        return out
    if cfg.action == "root-search":
        name = cfg.name = cfg.name or "appendixD"
        n = cfg.n = cfg.n if cfg.n is not None else 1
        if cfg.target is not None:
            sysm = dynamics.gallery_build(name, n)
            target = FunctionTable.load(cfg.target.removeprefix("file:"))
        elif name == "appendixD":
            sysm = dynamics._appendix_d(n, 4)
            target = sysm.state_table(sysm.states.coords[:, -1], 4)
        else:
            raise PreconditionError("root-search needs --target for this system")
        budget = cfg.budget = cfg.budget if cfg.budget is not None else 1 << 16
        res = dynamics.exact_root_search(sysm, target, cfg.divisor, cfg.maxdeg, cfg.max_den, budget)
        return {"system": sysm.to_json(), "divisor": cfg.divisor, "maxdeg": cfg.maxdeg, **res.to_json()}
    raise PreconditionError(f"unknown dynamics action {cfg.action!r}")


def cmd_verify(cfg: ExperimentConfig) -> dict:
    action = cfg.action or "all"
    if action == "all":
        names = list(suites.SUITES)
    elif action.startswith("suite:"):
        names = [action.split(":", 1)[1]]
    else:
        raise PreconditionError("verify expects 'all' or 'suite:<name>'")
    reports = {}
    for name in names:
        t0 = time.perf_counter()
        reports[name] = suites.run_suite(name, cfg.scale).to_json()
        if cfg.timing:
            print(f"{name}: {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return {"suites": reports, "passed": all(r["passed"] for r in reports.values())}


def parse_range(text: str) -> list[int]:
    """``"a..b"`` (inclusive, empty when b < a) or a comma list."""
    text = text.strip()
    if not text:
        return []
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return list(range(int(a), int(b) + 1))
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise PreconditionError(f"bad range {text!r}") from exc


SWEEP_PARAMS = ("n", "k", "budget", "seed", "degree", "den")


def cmd_sweep(cfg: ExperimentConfig) -> tuple[list[str], list[list]]:
    _require(cfg, "param", "range")
    if cfg.param not in SWEEP_PARAMS:
        raise PreconditionError(f"sweep parameter must be one of {', '.join(SWEEP_PARAMS)}")
    metric = {"norm": "norm", "correlate": "correlation"}.get(cfg.task)
    if metric is None:
        raise PreconditionError("sweep task must be 'norm' or 'correlate'")
    rows = []
    for v in parse_range(cfg.range):
        sub = dataclasses.replace(cfg, command="gowers", action=cfg.task)
        if cfg.param == "n":
            sub.fn = [_with_size(g, v) for g in (cfg.fn or [])]
            sub.group = None
        else:
            setattr(sub, cfg.param, v)
        rows.append([v, cmd_gowers(sub)[metric]])
    return [cfg.param, metric], rows


def _with_size(gen: str, n: int) -> str:
    kind, _, rest = gen.partition(":")
    if kind != "gallery":
        raise PreconditionError("sweeping n needs a gallery: function")
    return f"gallery:{rest.split(':')[0]}:{n}"


COMMANDS = {
    "gowers": cmd_gowers, "poly": cmd_poly, "sylow": cmd_sylow, "universal": cmd_universal,
    "cubes": cmd_cubes, "dynamics": cmd_dynamics, "verify": cmd_verify,
}


# ---- argument parsing -----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog=TOOL, description="Exact higher-order Fourier analysis on finite abelian groups.")
    ap.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON file of config keys (command-line flags win)")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"))

    def fnargs(p: argparse.ArgumentParser) -> None:
        p.add_argument("--group", help='group spec, e.g. "2,4" or "2^5"')
        p.add_argument("--fn", action="append", help="function generator (repeat for inner)")

    g = sub.add_parser("gowers", help="norms, inner products, correlation search")
    g.add_argument("action", choices=("norm", "inner", "correlate"))
    fnargs(g)
    g.add_argument("--k", type=int)
    g.add_argument("--method", choices=("naive", "recursive", "fourier-u2"))
    g.add_argument("--deg", dest="degree", type=int)
    g.add_argument("--den", type=int)
    g.add_argument("--mode", choices=("exhaustive", "search"))
    g.add_argument("--budget", type=int)
    g.add_argument("--seed", type=int)
    common(g)

    p = sub.add_parser("poly", help="degree, residue bound, binomial lemma")
    p.add_argument("action", choices=("degree", "residue-bound", "alg-lemma"))
    fnargs(p)
    p.add_argument("--all-shifts", action="store_true", default=None)
    for name in ("k", "p", "r", "s", "m"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--convention", choices=("min", "max"))
    p.add_argument("--int-poly", help="JSON [[exponents, coeff], ...] for residue verification")
    common(p)

    s = sub.add_parser("sylow", help="Sylow / CRT decomposition")
    s.add_argument("--group")
    s.add_argument("--element", help="comma-separated coordinates to round-trip")
    common(s)

    u = sub.add_parser("universal", help="universal system of a symmetric form")
    u.add_argument("action", choices=("build", "verify"))
    u.add_argument("--group")
    u.add_argument("--k", type=int)
    u.add_argument("--form", help="form JSON (inline or path)")
    u.add_argument("--system", help="output of a previous 'universal build'")
    common(u)

    c = sub.add_parser("cubes", help="cube spaces D^k(U)")
    c.add_argument("action", choices=("count", "member", "complete", "constancy"))
    c.add_argument("--spec", help='e.g. "D1:2,2;D2:4"')
    c.add_argument("--n", type=int)
    c.add_argument("--cube", help="JSON list of vertex values")
    c.add_argument("--corner", help="JSON list of 2^n - 1 vertex values")
    c.add_argument("--face-convention", choices=("k+1", "k"))
    c.add_argument("--budget", type=int)
    for name in ("q", "l", "p", "m"):
        c.add_argument(f"--{name}", type=int)
    common(c)

    d = sub.add_parser("dynamics", help="skew-product gallery and root search")
    d.add_argument("action", choices=("gallery", "root-search"))
    d.add_argument("--name", choices=dynamics.GALLERY)
    d.add_argument("--n", type=int)
    d.add_argument("--verify", choices=("all", "none"))
    d.add_argument("--divisor", type=int)
    d.add_argument("--maxdeg", type=int)
    d.add_argument("--max-den", type=int)
    d.add_argument("--target", help="file:<table.json> on the system's states")
    d.add_argument("--budget", type=int)
    common(d)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("action", nargs="?", default="all", help="'all' or 'suite:<name>'")
    v.add_argument("--suite", dest="scale", choices=("desk", "quick"), help="sweep size")
    v.add_argument("--timing", action="store_true", default=None, help="report per-suite timing on stderr")
    common(v)

    w = sub.add_parser("sweep", help="CSV of a gowers result over a parameter range")
    w.add_argument("--task", choices=("norm", "correlate"))
    w.add_argument("--param", choices=SWEEP_PARAMS)
    w.add_argument("--range", help='"1..4" or "1,2,5"')
    fnargs(w)
    w.add_argument("--k", type=int)
    w.add_argument("--method", choices=("naive", "recursive", "fourier-u2"))
    w.add_argument("--deg", dest="degree", type=int)
    w.add_argument("--den", type=int)
    w.add_argument("--mode", choices=("exhaustive", "search"))
    w.add_argument("--budget", type=int)
    w.add_argument("--seed", type=int)
    common(w)
    return ap


def resolve_config(ns: argparse.Namespace) -> ExperimentConfig:
    args = {k: v for k, v in vars(ns).items() if k != "config"}
    base = ExperimentConfig()
    if ns.config:
        base = ExperimentConfig.from_mapping(_load_json_arg(ns.config))
    return base.merged(args)


def _flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    if isinstance(obj, dict):
        return [kv for k in sorted(obj) for kv in _flatten(obj[k], f"{prefix}{k}.")]
    if isinstance(obj, list):
        return [kv for i, v in enumerate(obj) for kv in _flatten(v, f"{prefix}{i}.")]
    return [(prefix[:-1], obj)]


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def run(cfg: ExperimentConfig) -> str:
    """Execute ``cfg`` and return the rendered output document."""
    t0 = time.perf_counter()
    if cfg.command == "sweep":
        header, rows = cmd_sweep(cfg)
        return _csv_text(header, rows)
    result = COMMANDS[cfg.command](cfg)
    doc: dict = {"tool": TOOL, "version": __version__, "config": cfg.echo(), "result": _jsonable(result)}
    # verify output stays byte-stable; its timing goes to stderr on request
    if cfg.command != "verify":
        doc["timing"] = {"wall_seconds": round(time.perf_counter() - t0, 6)}
    if cfg.format == "csv":
        return _csv_text(["key", "value"], _flatten(doc))
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(ns)
        text = run(cfg)
        if cfg.out:
            Path(cfg.out).write_text(text)
        else:
            sys.stdout.write(text)
        if cfg.command in ("verify",) and not json.loads(text)["result"]["passed"]:
            return 1
        return 0
    except GowersLabError as exc:
        print(f"{TOOL}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, KeyError, ValueError) as exc:
        print(f"{TOOL}: error: {exc}", file=sys.stderr)
        return PreconditionError.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
