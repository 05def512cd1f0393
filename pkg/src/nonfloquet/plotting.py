"""Figure rendering for the CLI report path.

Every figure-producing command writes a PNG next to its delimited
output.  Figures are rendered with the Agg backend and saved without
software metadata so identical runs produce identical bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "save_figure",
    "spectrum_figure",
    "sweep_figure",
    "phase_study_figure",
    "winding_figure",
    "freqspace_figure",
    "stark_figure",
    "quench_figure",
    "deform_check_figure",
]


def save_figure(fig, path):
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)


def spectrum_figure(spectrum, localization):
    eps = spectrum.quasienergies
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6), constrained_layout=True)
    ax1.scatter(eps.real, eps.imag, s=12, c="tab:blue")
    ax1.set_xlabel(r"Re $\varepsilon$")
    ax1.set_ylabel(r"Im $\varepsilon$")
    ax1.set_title("quasienergies")
    ax2.plot(np.arange(len(localization)), localization, ".", ms=5, c="tab:red")
    ax2.set_xlabel("state index")
    ax2.set_ylabel(r"$I_j$")
    ax2.set_title("localization factor")
    return fig


def sweep_figure(rows):
    fig, ax = plt.subplots(figsize=(6, 4), constrained_layout=True)
    for row in rows:
        re = row.spectrum.quasienergies.real
        mask = row.edge_modes
        ax.plot(np.full((~mask).sum(), row.mu0), re[~mask], ".", ms=2, c="tab:blue")
        if mask.any():
            ax.plot(np.full(mask.sum(), row.mu0), re[mask], ".", ms=5, c="tab:red")
    ax.set_xlabel(r"$\mu_0$")
    ax.set_ylabel(r"Re $\varepsilon$")
    ax.set_title("open-boundary quasienergy sweep (edge modes in red)")
    return fig


def phase_study_figure(rows):
    fig, ax = plt.subplots(figsize=(6, 4), constrained_layout=True)
    for row in rows:
        ax.plot(np.arange(len(row.localization)), row.localization, ".-",
                ms=3, lw=0.7, label=rf"$\phi={row.phi:.3g}$")
    ax.set_xlabel("state index")
    ax.set_ylabel(r"$I_j$")
    ax.legend()
    ax.set_title("starting-point dependence of localization")
    return fig


def winding_figure(q1, q2):
    fig, axes = plt.subplots(1, 2, figsize=(8, 4), constrained_layout=True)
    for ax, q, name in zip(axes, (q1, q2), ("q_1", "q_2")):
        loop = np.r_[q, q[:1]]
        ax.plot(loop.real, loop.imag, "-", lw=1, c="tab:blue")
        ax.plot(q.real[0], q.imag[0], "o", c="tab:red")
        ax.axhline(0, lw=0.5, c="gray")
        ax.axvline(0, lw=0.5, c="gray")
        ax.set_xlabel(rf"Re ${name}$")
        ax.set_ylabel(rf"Im ${name}$")
        ax.set_aspect("equal", adjustable="datalim")
    fig.suptitle("chiral couplings around the Brillouin zone")
    return fig


def freqspace_figure(ks, eigenvalues, interior):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6), constrained_layout=True)
    for k, eps, keep in zip(ks, eigenvalues, interior):
        eps = np.asarray(eps)[np.asarray(keep)]
        ax1.plot(np.full(eps.size, k), eps.real, ".", ms=2, c="tab:blue")
        ax2.plot(np.full(eps.size, k), eps.imag, ".", ms=2, c="tab:orange")
    ax1.set_xlabel("k")
    ax1.set_ylabel(r"Re $\varepsilon$")
    ax1.set_title("frequency-space bands (interior)")
    ax2.set_xlabel("k")
    ax2.set_ylabel(r"Im $\varepsilon$")
    return fig


def stark_figure(study):
    fig, ax = plt.subplots(figsize=(6, 4.5), constrained_layout=True)
    im = ax.imshow(study.populations, aspect="auto", origin="lower",
                   extent=(1, study.spec.N, 0, study.populations.shape[0]),
                   cmap="viridis")
    ax.set_xlabel("site")
    ax.set_ylabel("state (sorted by Re E)")
    fig.colorbar(im, ax=ax, label="population")
    ax.set_title(rf"$t_L={study.spec.tL}$, $t_R={study.spec.tR}$, $\alpha={study.spec.alpha:.3g}$")
    return fig


def quench_figure(ks, eps):
    eps = np.asarray(eps)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6), constrained_layout=True)
    for band in range(eps.shape[1]):
        ax1.plot(ks, eps[:, band].real, ".", ms=3)
        ax2.plot(ks, eps[:, band].imag, ".", ms=3)
    ax1.set_xlabel(r"$k$")
    ax1.set_ylabel(r"Re $\varepsilon$")
    ax2.set_xlabel(r"$k$")
    ax2.set_ylabel(r"Im $\varepsilon$")
    fig.suptitle("stepwise-quench Floquet bands")
    return fig


def deform_check_figure(times, residuals):
    fig, ax = plt.subplots(figsize=(6, 3.6), constrained_layout=True)
    ax.semilogy(times, np.maximum(residuals, 1e-18), ".-", ms=4, lw=0.8)
    ax.set_xlabel("t")
    ax.set_ylabel("pseudo-Hermiticity residual")
    return fig
