"""Quick-look matplotlib renderings of the CLI result records.

Each function takes the computed objects and a destination path, writes a
PNG/PDF next to the delimited output, and returns the path.  These are
working plots for inspection; publication styling is left to downstream
tooling reading the JSON/CSV data.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_sweep_1d(axis_name, axis_values, observables, path):
    """zeta_S, zeta_My, and m_z against the swept coupling."""
    fig, axes = plt.subplots(1, 3, figsize=(10, 3.2), sharex=True)
    zs = [o.zeta_S for o in observables]
    zy = [o.zeta_My for o in observables]
    mz = [o.m_z for o in observables]
    for ax, ys, label in zip(axes, [zs, zy, mz], [r"$\zeta_S$", r"$\zeta_{M,y}$", r"$M_z$"]):
        ax.plot(axis_values, ys, "-", lw=1.2)
        ax.set_xlabel(axis_name)
        ax.set_ylabel(label)
    return _save(fig, path)


def plot_sweep_2d(lambdas, js, zeta_s, zeta_my, path):
    """Phase-diagram heat maps with the mean-field boundary lines."""
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.6), sharey=True)
    extent = [lambdas[0], lambdas[-1], js[0], js[-1]]
    for ax, z, title in zip(axes, [zeta_s, zeta_my], [r"$\zeta_S$", r"$\zeta_{M,y}$"]):
        im = ax.imshow(z.T, origin="lower", aspect="auto", extent=extent, cmap="viridis")
        lam_line = np.linspace(math.sqrt(0.5 * js[0]) if js[0] > 0 else lambdas[0], lambdas[-1], 100)
        ax.plot(lam_line, 2 * lam_line**2, "r-", lw=1)
        ax.axvline(0.5, color="g", lw=1)
        ax.axhline(0.5, color="b", lw=1)
        ax.set_xlim(extent[0], extent[1])
        ax.set_ylim(extent[2], extent[3])
        ax.set_xlabel(r"$\lambda$")
        ax.set_title(title)
        fig.colorbar(im, ax=ax)
    axes[0].set_ylabel(r"$J$")
    return _save(fig, path)


def plot_chi(scan, path):
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(5, 5), sharex=True)
    ax1.plot(scan.lambdas, scan.zeta_S, ".-", ms=3, lw=0.8)
    ax1.set_ylabel(r"$\zeta_S$")
    ax2.semilogy(scan.lambdas, np.maximum(scan.chi, 1e-12), ".-", ms=3, lw=0.8)
    ax2.axvline(scan.lambda_at_max, color="r", lw=0.8, ls="--")
    ax2.set_xlabel(r"$\lambda$")
    ax2.set_ylabel(r"$\chi$")
    return _save(fig, path)


def plot_scaling(fit, quantity, path):
    fig, ax = plt.subplots(figsize=(4.2, 3.4))
    ax.plot(fit.xs, fit.ys, "o", ms=5, label="measured")
    xs = np.linspace(fit.xs[0], fit.xs[-1], 200)
    ax.plot(xs, fit.predict(xs), "-", lw=1, label=f"{fit.model} fit, $r^2$={fit.r_squared:.4f}")
    ax.set_xlabel(r"$N$")
    ax.set_ylabel(quantity)
    ax.legend()
    return _save(fig, path)


def plot_timeseries(series, path):
    fig, axes = plt.subplots(1, 3, figsize=(10, 3.2))
    axes[0].plot(series.times, series.envelope, lw=1.2)
    axes[0].set_xlabel(r"$t\,\omega_0$")
    axes[0].set_ylabel(r"$P_e(t)$")
    axes[1].plot(series.times, series.gain, lw=1.2)
    axes[1].set_xlabel(r"$t\,\omega_0$")
    axes[1].set_ylabel(r"$g(t)$")
    axes[2].plot(series.times, series.sqnr, lw=1.2)
    axes[2].set_xlabel(r"$t\,\omega_0$")
    axes[2].set_ylabel("SQNR")
    return _save(fig, path)


def plot_husimi(grid, path):
    fig, ax = plt.subplots(figsize=(4.6, 3.8))
    a0, a1 = grid.axes
    if grid.kind == "boson":
        mesh = ax.pcolormesh(a0, a1, grid.values.T, shading="auto", cmap="magma")
        ax.set_xlabel(r"Re $\alpha$")
        ax.set_ylabel(r"Im $\alpha$")
        ax.set_aspect("equal")
    else:
        mesh = ax.pcolormesh(a1, a0, grid.values, shading="auto", cmap="magma")
        ax.set_xlabel(r"$\phi$")
        ax.set_ylabel(r"$\theta$")
    fig.colorbar(mesh, ax=ax, label=r"$Q$")
    return _save(fig, path)


def plot_meanfield_point(solution, params, path):
    """Phase diagram with boundaries and the queried point marked."""
    fig, ax = plt.subplots(figsize=(4.2, 3.6))
    eps = params.epsilon
    lam_hi = max(1.0, 1.5 * params.lam)
    j_hi = max(1.2, 1.5 * params.j_coupling)
    lam_line = np.linspace(math.sqrt(eps) / 2.0, lam_hi, 200)
    ax.plot(lam_line, 2 * lam_line**2, "r-", lw=1.2, label=r"$J = 2\lambda^2$")
    ax.vlines(math.sqrt(eps) / 2.0, 0, eps / 2.0, colors="g", lw=1.2, label=r"$\lambda_{c,II}$")
    ax.hlines(eps / 2.0, 0, math.sqrt(eps) / 2.0, colors="b", lw=1.2, label=r"$J_{c,II}$")
    ax.plot([params.lam], [params.j_coupling], "k*", ms=12, label=solution.phase)
    ax.set_xlim(0, lam_hi)
    ax.set_ylim(0, j_hi)
    ax.set_xlabel(r"$\lambda$")
    ax.set_ylabel(r"$J$")
    ax.legend(fontsize=7)
    return _save(fig, path)


def plot_slope_vs_j(rows, path):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.2))
    for row in rows:
        ax1.plot(row.n_list, row.g_max, "o-", ms=4, lw=0.9, label=f"J={row.j_coupling:g}")
    ax1.set_xlabel(r"$N$")
    ax1.set_ylabel(r"$g_{\max}$")
    ax1.legend(fontsize=7)
    ax2.plot([r.j_coupling for r in rows], [r.slope for r in rows], "d-", lw=1)
    ax2.axvline(0.5, color="k", lw=0.8, ls=":")
    ax2.set_xlabel(r"$J$")
    ax2.set_ylabel(r"slope of $g_{\max}$ vs $N$")
    return _save(fig, path)
