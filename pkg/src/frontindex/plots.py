"""SVG figures: strata on the chart rectangle and rotational profile curves."""

import os

import matplotlib

matplotlib.use("svg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

TWO_PI = 2.0 * np.pi
STYLES = {
    "default": {"pos": "#c0392b", "neg": "#2e6fba", "curve": "#222222", "lw": 1.4},
    "mono": {"pos": "#000000", "neg": "#777777", "curve": "#000000", "lw": 1.0},
}

plt.rcParams["svg.hashsalt"] = "frontindex"
plt.rcParams["svg.fonttype"] = "none"


def _split_periodic(pts, periodic):
    """Break a polyline where it jumps across a periodic seam."""
    if len(pts) < 2:
        return [pts]
    d = np.abs(np.diff(pts, axis=0))
    jump = np.zeros(len(pts) - 1, dtype=bool)
    for k in (0, 1):
        if periodic[k]:
            jump |= d[:, k] > np.pi
    cuts = np.nonzero(jump)[0] + 1
    return np.split(pts, cuts)


def strata_figure(summary, chart, title, path, style="default"):
    """Singular curves coloured by the sign of lam_dot, A3 points marked +/-."""
    st = STYLES.get(style, STYLES["default"])
    (u0, u1), (v0, v1) = chart["u_range"], chart["v_range"]
    periodic = chart["periodic"]
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    drawn = {"pos": False, "neg": False}
    for c in summary["curves"]:
        pts = np.asarray(c["points"], dtype=float)
        sg = np.asarray(c["lam_dot_sign"])
        if c["closed"] and len(pts):
            pts = np.vstack([pts, pts[:1]])
            sg = np.append(sg, sg[:1])
        # break into runs of constant lam_dot sign, then at periodic seams
        cuts = np.nonzero(np.diff(sg >= 0))[0] + 1
        for run, rs in zip(np.split(pts, cuts), np.split(sg, cuts)):
            key = "pos" if rs[0] >= 0 else "neg"
            for piece in _split_periodic(run, periodic):
                if len(piece) < 2:
                    continue
                label = None
                if not drawn[key]:
                    label = "singular set, lam' > 0" if key == "pos" else "singular set, lam' < 0"
                ax.plot(piece[:, 0], piece[:, 1], color=st[key], lw=st["lw"], label=label)
                drawn[key] = True
    for sign, marker, label in ((1, "P", "A3 +"), (-1, "X", "A3 -")):
        pts = [a["point"] for a in summary["a3_points"] if a["sign"] == sign]
        if pts:
            pts = np.asarray(pts)
            ax.scatter(pts[:, 0], pts[:, 1], marker=marker, s=70, color="k", zorder=5, label=f"{label} ({len(pts)})")
    ax.set_xlim(u0, u1)
    ax.set_ylim(v0, v1)
    ax.set_xlabel("u")
    ax.set_ylabel("v")
    ax.set_title(title)
    if any(drawn.values()) or summary["a3_points"]:
        ax.legend(loc="upper right", fontsize=8)
    else:
        ax.text(0.5, 0.5, "empty singular set", transform=ax.transAxes, ha="center", color="0.4")
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)
    return path


def profile_figures(epsilon, xi_profile, out_dir, style="default"):
    """The rotated profile curve and the meridian of its Blaschke normal map."""
    st = STYLES.get(style, STYLES["default"])
    t = np.linspace(0.0, TWO_PI, 721)
    r = 1.0 - 2.0 * epsilon * np.sin(t)
    x, y = r * np.sin(t), r * np.cos(t)
    paths = []
    fig, ax = plt.subplots(figsize=(4.8, 4.8))
    ax.plot(x, y, color=st["curve"], lw=st["lw"], label=f"profile, eps = {epsilon:g}")
    ax.axhline(0.0, color="0.7", lw=0.6, label="rotation axis")
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title("profile curve")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    p = os.path.join(out_dir, "gamma_profile.svg")
    fig.savefig(p, metadata={"Date": None})
    plt.close(fig)
    paths.append(p)

    fig, ax = plt.subplots(figsize=(4.8, 4.8))
    for k, arc in enumerate(xi_profile["arcs"]):
        arc = np.asarray(arc)
        ax.plot(arc[:, 0], arc[:, 1], color=st["curve"], lw=st["lw"], label="affine normal profile" if k == 0 else None)
    cusps = np.asarray(xi_profile["cusps"]).reshape(-1, 2)
    if len(cusps):
        ax.scatter(cusps[:, 0], cusps[:, 1], s=25, color=st["pos"], zorder=5, label=f"cusps of the profile ({len(cusps)})")
    ax.axhline(0.0, color="0.7", lw=0.6, label="rotation axis")
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title("profile of the Blaschke normal map")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    p = os.path.join(out_dir, "xi_profile.svg")
    fig.savefig(p, metadata={"Date": None})
    plt.close(fig)
    paths.append(p)
    return paths


def _strata_entries(report):
    for fr in report.get("formulas", []):
        if "strata" in fr:
            title = fr["theorem"]
            if "t" in fr.get("details", {}):
                title += f", t = {fr['details']['t']:g}"
            yield title, fr["strata"]
    if "patch" in report:
        yield "swallowtail patch", report["patch"]["strata"]


def emit_plots(report, out_dir, style="default"):
    """Write every figure the report supports; returns the file paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    entries = list(_strata_entries(report))
    for k, (title, summary) in enumerate(entries):
        name = f"strata_{k}.svg" if len(entries) > 1 else "strata.svg"
        paths.append(strata_figure(summary, report["chart"], title, os.path.join(out_dir, name), style))
    prof = report.get("profile")
    if prof is not None:
        paths.extend(profile_figures(prof["epsilon"], prof, out_dir, style))
    return paths
