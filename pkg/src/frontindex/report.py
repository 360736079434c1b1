"""JSON serialisation of run results (schema 1)."""

import json

import numpy as np

SCHEMA = 1
TIMING_KEYS = ("timing",)


def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    return x


def to_plain(obj):
    """Recursively convert numpy scalars/arrays and tuples to JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    return _num(obj)


def strata_summary(st, max_label_grid=64):
    """Curves, A3 points and region components of a :class:`StrataReport`."""
    cx = st.complex
    n = cx.resolution
    step = max(1, n // max_label_grid)
    labels = cx.labels[::step, ::step]
    sign_of = np.array([c.sign for c in cx.components]) if cx.components else np.zeros(0, int)
    signs = sign_of[labels] if sign_of.size else np.zeros_like(labels)
    return {
        "n_curves": len(st.curves),
        "curves": [
            {
                "component": c.component,
                "closed": bool(c.closed),
                "n_points": len(c),
                "winding": list(c.winding),
                "null_line_orientable": not c.gauge_flip,
                "regions": list(c.regions),
                "points": c.points,
                "lam_dot_sign": np.sign(c.lam_dot).astype(int),
            }
            for c in st.curves
        ],
        "a3_points": [
            {
                "point": list(a.point),
                "sign": a.sign,
                "lam_ddot": a.lam_ddot,
                "rank_value": a.rank_value,
                "curve": a.component,
            }
            for a in st.a3_points
        ],
        "a3_plus": st.a3_plus,
        "a3_minus": st.a3_minus,
        "a3_per_curve": st.a3_per_curve(),
        "regions": {
            "resolution": n,
            "chi_plus": cx.chi_plus,
            "chi_minus": cx.chi_minus,
            "count_plus": cx.count(1),
            "count_minus": cx.count(-1),
            "components": [
                {
                    "sign": c.sign,
                    "vertices": c.vertices,
                    "edges": c.edges,
                    "faces": c.faces,
                    "euler_char": c.euler_char,
                    "boundary_loops": c.boundary_loops,
                    "genus": c.genus,
                }
                for c in cx.components
            ],
            "sign_grid_step": step,
            "sign_grid": signs,
        },
        "tolerances": st.tolerances.as_dict(),
        "warnings": list(st.warnings),
    }


def degree_summary(d):
    if d is None:
        return None
    return {
        "raw": d.raw,
        "raw_midpoint": d.raw_midpoint,
        "degree": d.degree,
        "residual": d.residual,
        "preimage_count": d.preimage_count,
        "preimage_values": d.preimage_values,
    }


def formula_summary(fr):
    out = {
        "theorem": fr.theorem,
        "lhs": fr.lhs,
        "rhs": fr.rhs,
        "residual": fr.residual,
        "chi_m_plus": fr.chi_plus,
        "chi_m_minus": fr.chi_minus,
        "a3_plus": fr.a3_plus,
        "a3_minus": fr.a3_minus,
        "degree": degree_summary(fr.degree),
        "details": fr.details,
    }
    if fr.strata is not None:
        out["strata"] = strata_summary(fr.strata)
    return out


def dumps(report):
    """Deterministic JSON text: sorted keys, shortest round-trip floats."""
    return json.dumps(to_plain(report), sort_keys=True, indent=1, allow_nan=True) + "\n"


def without_timing(report):
    return {k: v for k, v in report.items() if k not in TIMING_KEYS}
