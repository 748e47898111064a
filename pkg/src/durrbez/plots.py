"""Figure rendering for the CLI report paths.

Figures are convenience renderings of the same data that lands in the CSV
tables; emitting one never changes the CSV.  The output format follows the
file extension (.svg by default from the CLI).
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["svg.hashsalt"] = "durrbez"


def save_convergence_plot(path, ns, errors, fit=None, title=""):
    """Log-log error ladder with the fitted rate line, saved to path."""
    fig, ax = plt.subplots(figsize=(5.2, 3.8))
    ax.loglog(ns, errors, "ko-", markersize=4, label="sup error")
    if fit is not None:
        slope, intercept = fit
        line = np.exp(intercept) * np.asarray(ns, dtype=float) ** slope
        ax.loglog(ns, line, "k--", linewidth=1, label="slope %.3f" % slope)
    ax.set_xlabel("n")
    ax.set_ylabel("sup error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    if title:
        ax.set_title(title)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    return path


def save_eval_plot(path, xs, fvals, dvals, title=""):
    """Function against its operator image, saved to path."""
    fig, ax = plt.subplots(figsize=(5.2, 3.8))
    ax.plot(xs, fvals, "k-", linewidth=1, label="f")
    ax.plot(xs, dvals, "k--", linewidth=1, label="operator")
    ax.set_xlabel("x")
    ax.grid(True, alpha=0.3)
    ax.legend()
    if title:
        ax.set_title(title)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    return path


def save_kappa_plot(path, ys, kappas, bound_left, bound_right, title=""):
    """Cumulative kernel mass with the tail bounds where they apply."""
    fig, ax = plt.subplots(figsize=(5.2, 3.8))
    ax.plot(ys, kappas, "k-", linewidth=1, label="kappa")
    ys = np.asarray(ys)
    bl = np.asarray(bound_left, dtype=float)
    br = np.asarray(bound_right, dtype=float)
    if np.any(np.isfinite(bl)):
        ax.plot(ys, bl, "k--", linewidth=1, label="left tail bound")
    if np.any(np.isfinite(br)):
        ax.plot(ys, br, "k:", linewidth=1, label="right tail bound")
    ax.set_xlabel("y")
    ax.set_ylim(-0.1, 1.6)
    ax.grid(True, alpha=0.3)
    ax.legend()
    if title:
        ax.set_title(title)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    return path
