"""Example usage of the model families, the metric pipeline and the scaling fits.

You need the development version of this module to run this script.
"""

import cosmoplots
import matplotlib.pyplot as plt
import numpy as np

from ness_geometry import models, scaling

__FIG_STD__ = cosmoplots.set_rcparams_dynamo(plt.rcParams)


def chain_ridge_example(n: int = 40, gamma: float = 0.5) -> None:
    """Sweep the field of the boundary-driven chain and plot the metric.

    The largest metric eigenvalue peaks near the critical field ``h_c = 1 - gamma^2``,
    slightly below it for finite chains.

    Parameters
    ----------
    n : int
        Number of sites.
    gamma : float
        Anisotropy.
    """
    # Rates of the reservoirs are the defaults of the config.
    evaluator = scaling.xy_boundary_evaluator(models.XYBoundaryConfig(2, 0.0, gamma))
    h_values = np.linspace(0.05, 1.5, 59)
    points = scaling.sweep_grid(evaluator, h_values, [gamma], n, workers=4)
    h_ridge, height = scaling.ridge_location(points)
    print(f"Ridge at h = {h_ridge:.3f} (h_c = {models.critical_field(gamma):.3f})")

    fig = plt.figure()
    ax = fig.add_axes(__FIG_STD__)
    ax.semilogy(h_values, [p.g_max / n for p in points], label=r"$|g|/n$")
    ax.axvline(models.critical_field(gamma), color="grey", ls="--")
    ax.plot(h_ridge, height / n, "o")
    ax.set_xlabel(r"$h$")
    ax.legend()
    plt.savefig("chain_ridge.png")
    plt.show()


def chain_scaling_example(h: float = 1.5, gamma: float = 0.6) -> None:
    """Fit the gap and metric exponents of the chain at one point.

    Parameters
    ----------
    h : float
        Transverse field.
    gamma : float
        Anisotropy.
    """
    evaluator = scaling.xy_boundary_evaluator(models.XYBoundaryConfig(2, 0.0, 0.0))
    ns = (20, 32, 48, 64, 88, 120)
    points = scaling.scaling_series(evaluator, ns, h, gamma, workers=4)
    fits = scaling.series_fits(points)
    for key, fit in fits.items():
        print(f"{key:>6}: n^{fit.exponent:+.2f} ({fit.quality_label.value})")
    g_fits = {key: fit for key, fit in fits.items() if key != "delta"}
    report = scaling.classify_phase(
        fits.get("delta"), g_fits, models.phase_diagnostics(h, gamma), h, gamma
    )
    print(f"Phase: {report.label}, consistent: {report.consistent}")


def ring_example(gamma: float = 0.5) -> None:
    """Compare the closed-form ring metric with the numeric pipeline.

    Parameters
    ----------
    gamma : float
        Anisotropy.
    """
    ns = np.array([64, 128, 256, 512])
    fig = plt.figure()
    ax = fig.add_axes(__FIG_STD__)
    for h in (0.5, 1.0):
        g_hh = [
            models.ring_metric_analytic(models.RingConfig(int(n), h, gamma)).component(
                "h", "h"
            )
            for n in ns
        ]
        fit = scaling.fit_powerlaw(ns, g_hh)
        ax.loglog(ns, g_hh, "o-", label=rf"$h = {h}$, $n^{{{fit.exponent:.2f}}}$")
    cfg = models.RingConfig(12, 0.5, gamma)
    numeric = scaling.evaluate_point(models.ring_model(cfg))
    analytic = scaling.evaluate_ring_analytic(cfg)
    print(f"g_hh at n = 12: numeric {numeric.g_hh:.6e}, analytic {analytic.g_hh:.6e}")
    ax.set_xlabel(r"$n$")
    ax.set_ylabel(r"$g_{hh}$")
    ax.legend()
    plt.savefig("ring_scaling.png")
    plt.show()


if __name__ == "__main__":
    chain_ridge_example()
    chain_scaling_example()
    ring_example()
