"""Command line entry point: ``frontindex run <config> [--out DIR] [--plots] [--oracle]``."""

import argparse
import os
import sys
import time

import numpy as np

from . import _kernels, domains, indexcheck, report as rep
from .config import load_config, parse_config
from .errors import FrontIndexError, ParseError
from .morin import FrontHomomorphism, classify_point, sphere_identity, tolerances_for, torus_cover, torus_fold_map, torus_height_map
from .strata import stratify
from .surfaces import BlaschkeFront, BumpyBody, RotationalGamma, RoundSphere, SwallowtailPatch, Torus


def build_surface(cfg):
    fam = cfg.family
    if fam == "sphere":
        return RoundSphere(cfg.radius, cfg.pole_axis, cfg.pole_cap)
    if fam == "torus":
        return Torus(cfg.R, cfg.r)
    if fam == "bumpy":
        return BumpyBody(cfg.seed, cfg.amplitude, cfg.degree, cfg.pole_axis, cfg.pole_cap)
    if fam == "rotational_gamma":
        return RotationalGamma(cfg.epsilon, cfg.pole_cap)
    if fam == "swallowtail":
        return SwallowtailPatch(cfg.half_width)
    raise ValueError(fam)


def build_map(cfg):
    return {
        "torus_fold": lambda: torus_fold_map(cfg.a),
        "torus_cover": lambda: torus_cover(cfg.k),
        "sin_v": torus_height_map,
        "sphere_identity": lambda: sphere_identity(cfg.pole_axis),
    }[cfg.map]()


def _chart(domain):
    return {
        "kind": domain.kind,
        "u_range": list(domain.u_range),
        "v_range": list(domain.v_range),
        "periodic": list(domain.periodic),
    }


def _error_entry(exc, **where):
    return dict(code=getattr(exc, "code", type(exc).__name__), message=str(exc), **where)


def xi_profile(body, n=801):
    """Meridian of the Blaschke normal map of a rotational body, cusps marked."""
    from scipy.optimize import brentq

    xi = BlaschkeFront(body)
    hom = FrontHomomorphism(xi)
    v = np.linspace(-np.pi / 2 + 1e-3, np.pi / 2 - 1e-3, n)
    arcs, cusps = [], []
    for u0 in (0.0, np.pi):
        u = np.full_like(v, u0)
        f, _ = xi.evaluate(u, v, 0)
        arcs.append(np.stack([f.value[0], f.value[1]], axis=1))
        lam = hom.jets(u, v, 0).lam.value
        for k in np.nonzero(np.diff(np.sign(lam)))[0]:
            vs = brentq(lambda s: float(hom.jets(u0, s, 0).lam.value), v[k], v[k + 1], xtol=1e-14)
            p, _ = xi.evaluate(u0, vs, 0)
            cusps.append([float(p.value[0]), float(p.value[1])])
    return {"epsilon": body.epsilon, "arcs": arcs, "cusps": cusps}


def run_scenario(cfg, oracle=None):
    """Execute a parsed scenario; returns ``(report_dict, exit_code)``."""
    t0 = time.perf_counter()
    oracle = cfg.oracle if oracle is None else oracle
    grid = cfg.grid
    ov = cfg.tolerance_overrides
    out = {
        "schema": rep.SCHEMA,
        "config": cfg.echo(),
        "backend": _kernels.BACKEND,
        "formulas": [],
        "warnings": [],
        "errors": [],
    }
    sc = cfg.scenario
    if sc in ("front_formula", "parallel_sweep", "blaschke", "classify_patch"):
        surface = build_surface(cfg)
        out["chart"] = _chart(surface.domain)
    try:
        if sc == "front_formula":
            fr = indexcheck.verify_front_formula(
                surface, grid, oracle=oracle, seed=cfg.oracle_seed, degree_grid=cfg.degree_grid, overrides=ov
            )
            out["formulas"].append(rep.formula_summary(fr))
        elif sc == "morin_map":
            mp = build_map(cfg)
            out["chart"] = _chart(mp.domain)
            fr = indexcheck.verify_morin_map_formula(mp, grid, oracle=oracle, seed=cfg.oracle_seed, overrides=ov)
            out["formulas"].append(rep.formula_summary(fr))
        elif sc == "parallel_sweep":
            for t in cfg.t_values:
                try:
                    fr = indexcheck.verify_parallel_formula(
                        surface, t, grid, oracle=oracle, seed=cfg.oracle_seed, identity_grid=cfg.identity_grid, overrides=ov
                    )
                    out["formulas"].append(rep.formula_summary(fr))
                except FrontIndexError as exc:
                    out["errors"].append(_error_entry(exc, t=float(t)))
        elif sc == "blaschke":
            fr = indexcheck.verify_blaschke_formula(surface, grid, oracle=oracle, seed=cfg.oracle_seed, overrides=ov)
            out["formulas"].append(rep.formula_summary(fr))
            if cfg.family == "rotational_gamma":
                out["profile"] = xi_profile(surface)
        elif sc == "poincare_hopf":
            out["vector_fields"] = _run_poincare_hopf(cfg)
        elif sc == "classify_patch":
            hom = FrontHomomorphism(surface)
            tol = tolerances_for(hom, grid, overrides=ov)
            out["classifications"] = []
            for p in cfg.points:
                res = classify_point(hom, p, tol)
                out["classifications"].append(
                    {
                        "point": list(p),
                        "verdict": res.verdict,
                        "sign": res.sign,
                        "cascade": list(res.cascade.values),
                        "rank_value": res.rank_value,
                        "column": res.cascade.column,
                    }
                )
                if res.verdict == "Degenerate":
                    out["warnings"].append(f"Degenerate verdict at {tuple(p)}")
            st = stratify(hom, grid, overrides=ov)
            out["patch"] = {"strata": rep.strata_summary(st)}
    except FrontIndexError as exc:
        out["errors"].append(_error_entry(exc))
    for fr in out["formulas"]:
        out["warnings"].extend(fr.get("strata", {}).get("warnings", []))
    out["exit_code"] = exit_code(out)
    out["timing"] = {"seconds": time.perf_counter() - t0}
    return out, out["exit_code"]


def _run_poincare_hopf(cfg):
    rng = np.random.default_rng(cfg.seed)
    results = []
    if cfg.field == "sphere_height":
        cases = [("sphere_height", indexcheck.sphere_height_gradient("x"), domains.sphere("x"))]
    elif cfg.field == "torus_constant":
        cases = [("torus_constant", lambda U, V: (U * 0.0 + 1.0, U * 0.0), domains.TORUS)]
    else:
        cases = [(f"torus_random_{k}", indexcheck.random_torus_field(rng), domains.TORUS) for k in range(cfg.trials)]
    for name, fld, dom in cases:
        r = indexcheck.poincare_hopf(fld, dom)
        results.append(
            {
                "field": name,
                "zeros": r.zeros,
                "indices": r.indices,
                "winding": r.winding,
                "sum": r.sum,
                "euler_char": dom.euler_char,
                "residual": r.sum - dom.euler_char,
                "oracle_agrees": r.oracle_agrees,
            }
        )
    return results


def exit_code(report):
    bad = bool(report["errors"])
    bad |= any(fr["residual"] != 0 for fr in report["formulas"])
    bad |= any(vf["residual"] != 0 or not vf["oracle_agrees"] for vf in report.get("vector_fields", []))
    bad |= any("Degenerate" in w or "NotMorin" in w for w in report["warnings"])
    return 1 if bad else 0


def _summary_lines(report):
    lines = []
    for fr in report["formulas"]:
        extra = f" t={fr['details']['t']:g}" if "t" in fr["details"] else ""
        lines.append(
            f"{fr['theorem']}{extra}: lhs={fr['lhs']} rhs={fr['rhs']} residual={fr['residual']} "
            f"(chi+={fr['chi_m_plus']} chi-={fr['chi_m_minus']} A3+={fr['a3_plus']} A3-={fr['a3_minus']})"
        )
    for c in report.get("classifications", []):
        lines.append(f"classify {tuple(c['point'])}: {c['verdict']} cascade={c['cascade']}")
    for vf in report.get("vector_fields", []):
        lines.append(f"{vf['field']}: zeros={len(vf['zeros'])} sum={vf['sum']} chi={vf['euler_char']}")
    for e in report["errors"]:
        lines.append(f"error {e['code']}: {e['message']}")
    return lines


def main(argv=None):
    ap = argparse.ArgumentParser(prog="frontindex", description="Signed singularity counts of fronts and maps.")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario config")
    run.add_argument("config")
    run.add_argument("--out", default=None, help="output directory (default: config key 'out' or ./frontindex_out)")
    run.add_argument("--plots", action="store_true", help="write SVG figures")
    run.add_argument("--oracle", action="store_true", help="enable the preimage-count degree oracle")
    run.add_argument("--style", default="default", choices=("default", "mono"))
    args = ap.parse_args(argv)

    try:
        cfg = load_config(args.config)
    except ParseError as exc:
        print(f"{args.config}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read {args.config}: {exc}", file=sys.stderr)
        return 2
    out_dir = args.out or cfg.out or "frontindex_out"
    report, code = run_scenario(cfg, oracle=True if args.oracle else None)
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "report.json")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(rep.dumps(report))
    for line in _summary_lines(report):
        print(line)
    if args.plots:
        from .plots import emit_plots

        for p in emit_plots(rep.to_plain(report), out_dir, args.style):
            print(f"wrote {p}")
    print(f"wrote {path} (exit {code})")
    return code


__all__ = ["main", "run_scenario", "parse_config", "exit_code"]

if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
