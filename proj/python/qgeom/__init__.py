"""Mixed-state quantum geometric tensor toolkit."""

import json

from ._qgeom import (
    QgeomError,
    alpha_dynamical_phase,
    alpha_qgt,
    fs_qgt,
    generator_commutator,
    metric_cptp_dilation,
    metric_unitary,
    petz_metric,
    random_density,
    run_cli,
    sigma_mean,
    sld_qfi,
    sqrt_derivative,
)
from ._qgeom import run_suite as _run_suite
from ._qgeom import simulate_variance as _simulate_variance


def run_suite(name, seed=0, samples=None, profile="default"):
    """Run a verification suite and return its reports as dicts."""
    return json.loads(_run_suite(name, seed, samples, profile))


def simulate_variance(h, psi, shots, seed):
    """Shot-noise estimate of the variance of h in psi."""
    return json.loads(_simulate_variance(h, psi, shots, seed))


__all__ = [
    "QgeomError",
    "alpha_dynamical_phase",
    "alpha_qgt",
    "fs_qgt",
    "generator_commutator",
    "metric_cptp_dilation",
    "metric_unitary",
    "petz_metric",
    "random_density",
    "run_cli",
    "run_suite",
    "sigma_mean",
    "simulate_variance",
    "sld_qfi",
    "sqrt_derivative",
]
