"""Figure rendering for CLI runs: one PNG per scenario next to the data files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_spectra(path: Path, curves, title: str) -> Path:
    """Absorption curves on a shared detuning axis (units of gamma)."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, delta_over_gamma, chi in curves:
        ax.plot(delta_over_gamma, chi.imag, lw=1.2, label=label)
    ax.set_xlabel(r"$(\omega_p - \omega_{\rm ref})/\Gamma$")
    ax.set_ylabel("probe absorption  Im$\\,\\chi$")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_dimer_spectra(path: Path, curves, title: str) -> Path:
    """Two panels: absorption and dispersion of the dimer response."""
    fig, (ax_im, ax_re) = plt.subplots(2, 1, figsize=(6.0, 6.0), sharex=True)
    for label, delta_over_gamma, chi in curves:
        ax_im.plot(delta_over_gamma, chi.imag, lw=1.2, label=label)
        ax_re.plot(delta_over_gamma, chi.real, lw=1.2, label=label)
    ax_im.set_ylabel("Im$\\,\\chi$")
    ax_re.set_ylabel("Re$\\,\\chi$")
    ax_re.set_xlabel(r"$(\omega_p - \omega_+)/\Gamma$")
    ax_im.set_title(title)
    ax_im.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_amin(path: Path, curves, title: str) -> Path:
    """Normalized resonant-absorption minimum versus cavity amplitude."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, a_c, amin_norm in curves:
        ax.semilogy(a_c, amin_norm, lw=1.2, marker="o", ms=2.5, label=label)
    ax.set_xlabel(r"$A_c$")
    ax.set_ylabel(r"$\mathcal{A}_{\min}$ / free-space value")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
