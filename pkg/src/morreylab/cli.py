"""Config-driven command line front end.

Subcommands: norm, weight, condition, hardy, solve, kernels, operators,
verify, report.  Exit codes: 0 all checks pass, 1 any FAIL, 2 config/usage
error.  Output files land in --out, the MORREYLAB_OUT environment variable,
or the config's "out" entry, in that order.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import harness
from .corpus import build_corpus, polynomial_bump
from .geometry import Grid, SampledField, ball_sweep
from .hardy import HardySetting, hardy_best_constant, hardy_verify_inequality
from .operators import (
    CZKernel,
    maximal_field,
    operator_radius_grid,
    singular_field,
    singular_identity_check,
)
from .solver import residual_check, solve_dirichlet
from .spaces import (
    InverseWeightMeasurePhi,
    PowerLawPhi,
    WeightMeasurePhi,
    condition_213,
    morrey_norm,
)
from .weights import ConstantWeight, PowerWeight, ap_constant, ap_membership, ap_sweep

_EXIT_PASS, _EXIT_FAIL, _EXIT_CONFIG = 0, 1, 2


def _out_dir(args, config) -> str:
    out = args.out or os.environ.get("MORREYLAB_OUT") or config.get("out", "out")
    os.makedirs(out, exist_ok=True)
    return out


def _load(args) -> dict:
    try:
        cfg = harness.load_config(args.config)
    except FileNotFoundError:
        print(f"config not found: {args.config}", file=sys.stderr)
        raise SystemExit(_EXIT_CONFIG)
    except json.JSONDecodeError as exc:
        print(f"bad config: {exc}", file=sys.stderr)
        raise SystemExit(_EXIT_CONFIG)
    if args.seed is not None:
        cfg["seed"] = args.seed
    return cfg


def _domain(cfg_section) -> tuple:
    dom = harness._domain_from(cfg_section.get("domain", {"kind": "interval"}))
    return dom, cfg_section.get("m", 1)


def _weight_from(spec: dict):
    kind = spec.get("kind", "constant")
    if kind == "constant":
        return ConstantWeight(spec.get("c", 1.0))
    if kind == "power":
        return PowerWeight(tuple(spec["center"]), spec["gamma"])
    raise SystemExit(_EXIT_CONFIG)


def _phi_from(spec: dict, p: float, n: int, w):
    kind = spec.get("kind", "inverse-weight-measure")
    if kind == "power-law":
        return PowerLawPhi(lam=spec.get("lam", 0.5 * n), p=p, n=n)
    if kind == "weight-measure":
        return WeightMeasurePhi(k=spec.get("k", 0.5), p=p, w=w)
    if kind == "inverse-weight-measure":
        return InverseWeightMeasurePhi(p=p, w=w)
    raise SystemExit(_EXIT_CONFIG)


def _field_csv(path: str, grid: Grid, columns: dict):
    with open(path, "w", newline="") as fh:
        wcsv = csv.writer(fh)
        head = [f"x{i + 1}" for i in range(grid.dim)] + list(columns)
        wcsv.writerow(head)
        arrays = list(columns.values())
        for i in range(grid.n_cells):
            row = [format(v, ".17g") for v in grid.nodes[i]]
            row += [format(a[i], ".17g") for a in arrays]
            wcsv.writerow(row)


# ---------------------------------------------------------------------------
# subcommands


def cmd_norm(args) -> int:
    cfg = _load(args)
    sec = cfg.get("norm", {})
    dom, _ = _domain(sec)
    n = args.grid or sec.get("grid", 64)
    g = Grid(dom, n)
    corpus = dict(build_corpus(g, seed=cfg.get("seed", 7), n_random=3))
    fname = sec.get("f", "const")
    f = corpus.get(fname)
    if f is None:
        print(f"unknown corpus field {fname!r}; have {sorted(corpus)}",
              file=sys.stderr)
        return _EXIT_CONFIG
    p = sec.get("p", 2.0)
    w = _weight_from(sec.get("weight", {}))
    phi = _phi_from(sec.get("phi", {}), p, dom.dim, w)
    sweep = ball_sweep(g, sec.get("centers", 5), sec.get("radii", 8))
    res = morrey_norm(f, w, phi, p, sweep)
    print(format(res.value, ".12g"))
    out = _out_dir(args, cfg)
    with open(os.path.join(out, "norm.csv"), "w", newline="") as fh:
        wcsv = csv.writer(fh)
        wcsv.writerow(("f", "w", "phi", "p", "value", "center", "radius", "n"))
        wcsv.writerow((fname, w.label, getattr(phi, "label", "phi"), p,
                       format(res.value, ".17g"),
                       res.attaining_ball.center, res.attaining_ball.radius, n))
    return _EXIT_PASS


def cmd_weight(args) -> int:
    cfg = _load(args)
    sec = cfg.get("weight", {})
    dom, _ = _domain(sec)
    n = args.grid or sec.get("grid", 128)
    g = Grid(dom, n)
    w = _weight_from(sec.get("spec", {"kind": "power", "center": [0.0], "gamma": 0.5}))
    p = sec.get("p", 2.0)
    est = ap_constant(w, p, g, ap_sweep(g, w))
    try:
        member = ap_membership(w, p)
        verdict = "in-class" if member.in_class else "out-of-class"
    except ValueError:
        verdict = "unclassified"
    out = _out_dir(args, cfg)
    gamma = getattr(w, "gamma", 0.0)
    with open(os.path.join(out, "ap.csv"), "w", newline="") as fh:
        wcsv = csv.writer(fh)
        wcsv.writerow(("p", "gamma", "estimate", "attaining_center",
                       "attaining_radius", "n"))
        wcsv.writerow((p, gamma, format(est.value, ".17g"),
                       est.attaining_ball.center, est.attaining_ball.radius, n))
    print(f"A_p estimate {est.value:.6g} ({verdict})")
    return _EXIT_PASS


def cmd_condition(args) -> int:
    cfg = _load(args)
    sec = cfg.get("condition", {})
    dom, _ = _domain(sec)
    p = sec.get("p", 2.0)
    w = _weight_from(sec.get("weight", {}))
    phi1 = _phi_from(sec.get("phi1", {"kind": "power-law"}), p, dom.dim, w)
    phi2 = _phi_from(sec.get("phi2", sec.get("phi1", {"kind": "power-law"})),
                     p, dom.dim, w)
    x = sec.get("x", list(harness._interior_center(dom)))
    r_grid = np.geomspace(sec.get("r_min", 0.02), sec.get("r_max", 0.9), 8) * dom.diameter
    rep = condition_213(phi1, phi2, w, p, x, r_grid,
                        upper_limit=sec.get("upper_mult", 10.0) * dom.diameter)
    print(f"fitted C = {rep.constant:.6g}  flags: {', '.join(rep.flags) or 'none'}")
    out = _out_dir(args, cfg)
    with open(os.path.join(out, "condition.csv"), "w", newline="") as fh:
        wcsv = csv.writer(fh)
        wcsv.writerow(("r", "lhs_over_phi2"))
        for r, v in rep.per_r:
            wcsv.writerow((format(r, ".17g"), format(v, ".17g")))
    return _EXIT_PASS


def cmd_hardy(args) -> int:
    cfg = _load(args)
    sec = cfg.get("hardy", {})
    d = sec.get("d", 1.0)
    setting = HardySetting(d=d, v1=lambda t: np.ones_like(t),
                           v2=lambda t: np.ones_like(t),
                           w=lambda t: np.ones_like(t))
    bound = hardy_best_constant(setting)
    family = [(f"step{a:.4f}", (lambda a: lambda t: (t > a).astype(float))(a))
              for a in np.geomspace(1e-6, 0.9, sec.get("family", 50)) * d]
    rep = hardy_verify_inequality(setting, family)
    print(f"B = {bound.value:.8g}; family max ratio {rep.max_ratio:.8g}; "
          f"all hold: {rep.all_hold}")
    out = _out_dir(args, cfg)
    with open(os.path.join(out, "hardy.csv"), "w", newline="") as fh:
        wcsv = csv.writer(fh)
        wcsv.writerow(("g", "lhs", "rhs", "ratio", "holds"))
        for row in rep.rows:
            wcsv.writerow((row.label, format(row.lhs, ".17g"),
                           format(row.rhs, ".17g"), format(row.ratio, ".17g"),
                           row.holds))
    return _EXIT_PASS if rep.all_hold else _EXIT_FAIL


def cmd_solve(args) -> int:
    cfg = _load(args)
    sec = cfg.get("solve", {})
    dom, m = _domain(sec)
    n = args.grid or sec.get("grid", 128)
    g = Grid(dom, n)
    corpus = dict(build_corpus(g, seed=cfg.get("seed", 7), n_random=3))
    f = corpus.get(sec.get("f", "const"))
    if f is None:
        print("unknown corpus field", file=sys.stderr)
        return _EXIT_CONFIG
    sol = solve_dirichlet(dom, m, f)
    resid = residual_check(dom, m, sol, f)
    out = _out_dir(args, cfg)
    cols = {"f": f.values}
    for a, fld in sorted(sol.jet.items()):
        cols["u" + "".join(map(str, a))] = fld.values
    _field_csv(os.path.join(out, "solution.csv"), g, cols)
    print(f"solved ({dom.dim}D, m={m}, N={n}); interior residual {resid:.3e}")
    return _EXIT_PASS


def cmd_kernels(args) -> int:
    from .greens import green_function, sample_pairs

    cfg = _load(args)
    res = harness.run_suite("kernels", cfg)
    out = _out_dir(args, cfg)
    harness.write_reports([res], out)
    # kernel table for external plotting: G and its first derivatives on a
    # small pair sample of each implemented case
    with open(os.path.join(out, "kernel_table.csv"), "w", newline="") as fh:
        wcsv = csv.writer(fh)
        wcsv.writerow(("case", "x", "y", "G", "dG_first_axis"))
        for kind, m in cfg.get("kernels", {}).get(
                "cases", [["interval", 1], ["disk", 1]]):
            dom, _ = _domain({"domain": {"kind": kind}, "m": m})
            gf = green_function(dom, m)
            x, y = sample_pairs(dom, 64, cfg.get("seed", 7),
                                min_sep=dom.diameter / 128)
            g = gf(x, y)
            dg = gf.derivative((1,) if dom.dim == 1 else (1, 0), x, y)
            for i in range(len(x)):
                wcsv.writerow((f"{kind}-m{m}", tuple(x[i]), tuple(y[i]),
                               format(g[i], ".17g"), format(dg[i], ".17g")))
    print(f"kernels: {res.verdict}")
    return _EXIT_PASS if res.passed else _EXIT_FAIL


def cmd_operators(args) -> int:
    cfg = _load(args)
    sec = dict(cfg.get("operators", {}))
    sec.setdefault("domain", {"kind": "disk", "radius": 2.0})
    dom, m = _domain(sec)
    n = args.grid or sec.get("grid", 128)
    g = Grid(dom, n)
    bump, _, _ = polynomial_bump(harness._interior_center(dom),
                                 sec.get("bump_rho", 0.5 * dom.diameter / 2), dom.dim)
    f = SampledField(g, bump(g.nodes))
    radii = operator_radius_grid(g, sec.get("radius_points", 24))
    cols = {"f": f.values, "Mf": maximal_field(f, radii).values}
    status = _EXIT_PASS
    if dom.dim == 2:
        alpha = tuple(sec.get("alpha", (2, 0)))
        kern = CZKernel(2, m, alpha)
        cols["Kstar"] = singular_field(f, kern, radii).values
        rep = singular_identity_check(f, alpha if sum(alpha) == 2 else (2, 0), (1, 0))
        print(f"identity: fitted a={rep.fitted_a:.4f} (expected {rep.expected_a}), "
              f"max discrepancy {rep.max_discrepancy:.3e}")
        if rep.max_discrepancy > 0.02:
            status = _EXIT_FAIL
    out = _out_dir(args, cfg)
    _field_csv(os.path.join(out, "operators.csv"), g, cols)
    return status


def cmd_verify(args) -> int:
    cfg = _load(args)
    names = args.suite or sorted(harness.SUITES)
    try:
        results = harness.run_suites(names, cfg, jobs=args.jobs)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return _EXIT_CONFIG
    summary = harness.write_reports(results, _out_dir(args, cfg))
    width = max(len(s) for s in summary)
    for name in names:
        print(f"{name:<{width}}  {summary[name]['verdict']}")
    return _EXIT_PASS if all(r.passed for r in results) else _EXIT_FAIL


def cmd_report(args) -> int:
    cfg = _load(args)
    out = _out_dir(args, cfg)
    merged = {}
    for fname in sorted(os.listdir(out)):
        if not fname.endswith(".csv") or fname.endswith("_plot.csv"):
            continue
        suite = fname[:-4]
        with open(os.path.join(out, fname)) as fh:
            rows = list(csv.reader(fh))
        merged[suite] = {"rows": len(rows) - 1, "columns": rows[0] if rows else []}
    spath = os.path.join(out, "summary.json")
    if os.path.exists(spath):
        with open(spath) as fh:
            merged["verdicts"] = {k: v["verdict"] for k, v in json.load(fh).items()}
    with open(os.path.join(out, "report.json"), "w") as fh:
        json.dump(merged, fh, indent=2, sort_keys=True)
    print(json.dumps(merged, indent=2, sort_keys=True))
    bad = [k for k, v in merged.get("verdicts", {}).items()
           if v not in ("PASS",)]
    return _EXIT_FAIL if bad else _EXIT_PASS


# ---------------------------------------------------------------------------


def main(argv=None) -> int:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None,
                        help="JSON config (defaults to the shipped default)")
    common.add_argument("--grid", type=int, default=None, help="grid override")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    common.add_argument("--out", default=None, help="output directory")
    common.add_argument("--seed", type=int, default=None)
    parser = argparse.ArgumentParser(prog="morreylab")
    sub = parser.add_subparsers(dest="command", required=True)
    handlers = {
        "norm": cmd_norm,
        "weight": cmd_weight,
        "condition": cmd_condition,
        "hardy": cmd_hardy,
        "solve": cmd_solve,
        "kernels": cmd_kernels,
        "operators": cmd_operators,
        "verify": cmd_verify,
        "report": cmd_report,
    }
    for name in handlers:
        sp = sub.add_parser(name, parents=[common])
        if name == "verify":
            sp.add_argument("--suite", action="append", default=None,
                            help="suite name (repeatable); default: all")
    args = parser.parse_args(argv)
    try:
        return handlers[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else _EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
