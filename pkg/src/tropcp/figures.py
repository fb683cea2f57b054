"""Figure rendering for the report paths (headless matplotlib)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .numlab import ConvergenceReport  # noqa: E402
from .pathtrace import PiecewisePath  # noqa: E402


def render_path_figure(path: PiecewisePath, outfile: str) -> None:
    """Plot each coordinate of the traced piecewise-linear path against mu."""
    n = len(path.values[0])
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for j in range(n):
        mus, ys = [], []
        for i in range(path.num_segments):
            lo, hi = path.breakpoints[i], path.breakpoints[i + 1]
            v, s = path.values[i][j], path.slopes[i][j]
            if v.is_bottom:
                continue
            mus.extend([float(lo), float(hi)])
            ys.extend([float(v), float(v.finite + s * (hi - lo))])
        ax.plot(mus, ys, label=f"x{j+1}")
    for bp in path.breakpoints[1:-1]:
        ax.axvline(float(bp), color="0.85", lw=0.6, zorder=0)
    ax.set_xlabel(r"$\mu$")
    ax.set_ylabel("coordinate value")
    ax.set_title(f"tropical central path ({path.num_segments} pieces)")
    ax.legend(fontsize=8, ncol=2)
    fig.tight_layout()
    fig.savefig(outfile, dpi=150)
    plt.close(fig)


def render_convergence_figure(report: ConvergenceReport, outfile: str) -> None:
    """Plot max-abs log-limit error per barrier against t (log-log)."""
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    barriers = sorted({r.barrier for r in report.rows})
    ts = report.t_values()
    for barrier in barriers:
        errs = [max(report.errors(barrier, t)) for t in ts]
        ax.plot(ts, errs, "o-", label=barrier)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("max abs log-t error")
    ax.set_title("convergence to the tropical target")
    ax.legend()
    fig.tight_layout()
    fig.savefig(outfile, dpi=150)
    plt.close(fig)
