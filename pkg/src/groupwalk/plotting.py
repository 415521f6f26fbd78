"""Figure rendering for the CLI report paths.

Every plot lands in a file next to the delimited output; nothing here is
needed for the numerical library itself.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGSIZE = (7.0, 4.3)


def _new_axes(title, xlabel, ylabel):
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_walk_figure(path, ks, distance, separation=None, entropy_gap=None,
                     title="distance to random"):
    fig, ax = _new_axes(title, "k", "distance")
    ax.plot(ks, distance, label="variation", lw=1.8)
    if separation is not None:
        ax.plot(ks, separation, label="separation", lw=1.2, ls="--")
    if entropy_gap is not None:
        ax2 = ax.twinx()
        ax2.plot(ks, entropy_gap, label="entropy gap", lw=1.0, color="tab:green",
                 alpha=0.7)
        ax2.set_ylabel("entropy gap")
    ax.set_ylim(bottom=0)
    ax.legend(loc="upper right")
    _finish(fig, path)


def save_bounds_figure(path, ks, exact, upper=None, lower=None,
                       title="bound sandwich"):
    fig, ax = _new_axes(title, "k", "variation distance")
    ax.plot(ks, exact, label="exact", lw=1.8, color="black")
    if upper is not None:
        ax.plot(ks, upper, label="upper bound", lw=1.2, color="tab:red")
    if lower is not None:
        ax.plot(ks, lower, label="lower bound", lw=1.2, color="tab:blue")
    ax.set_ylim(0, 1.05)
    ax.legend(loc="upper right")
    _finish(fig, path)


def save_family_figure(path, curves, title="family distance curves"):
    fig, ax = _new_axes(title, "k", "variation distance")
    for c in curves:
        ax.plot(c.ks, c.values, label=f"n={c.n}", lw=1.4)
    ax.set_ylim(0, 1.05)
    ax.legend(loc="upper right", ncols=2, fontsize=8)
    _finish(fig, path)


def save_estimator_figure(path, ks, p_exceed, stderr, exact=None,
                          title="stopping-time exceedance"):
    fig, ax = _new_axes(title, "k", "P(T > k)")
    p = np.asarray(p_exceed)
    se = np.asarray(stderr)
    ax.plot(ks, p, label="estimate", lw=1.6)
    ax.fill_between(ks, p - 3 * se, p + 3 * se, alpha=0.25,
                    label="+-3 std err")
    if exact is not None:
        ax.plot(ks, exact, label="exact distance", lw=1.2, color="black")
    ax.set_ylim(bottom=0)
    ax.legend(loc="upper right")
    _finish(fig, path)


def save_spectrum_figure(path, eigenvalues, title="operator spectrum"):
    fig, ax = _new_axes(title, "Re", "Im")
    vals = np.asarray(eigenvalues, dtype=complex)
    theta = np.linspace(0, 2 * np.pi, 400)
    ax.plot(np.cos(theta), np.sin(theta), color="gray", lw=0.7, alpha=0.6)
    ax.scatter(vals.real, vals.imag, s=14)
    ax.set_aspect("equal")
    _finish(fig, path)
