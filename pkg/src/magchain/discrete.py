"""Exact discrete magnetostatics of dipole chains.

Fields are dimensionless in units of B/24 and energies in units of
pi*a^3*B^2/(18*mu0); positions are in units of the chain length 2*a*n.
All O(N^2) reductions go through numpy's pairwise summation, so results
are reproducible to better than 1e-13 independent of chunking.
"""

import math

import numpy as np

from .errors import InvalidParameterError, NonConvergenceError, SingularEvaluationError
from .geometry import ChainConfig

SINGULAR_DISTANCE = 1e-9


def dipole_field_at(source_pos, source_moment, point, n):
    """Dimensionless field of one dipole: n^-3 [3(d.m)d - |d|^2 m]/|d|^5."""
    delta = np.asarray(point, dtype=float) - np.asarray(source_pos, dtype=float)
    m = np.asarray(source_moment, dtype=float)
    r2 = float(np.dot(delta, delta))
    if r2 < SINGULAR_DISTANCE**2:
        raise SingularEvaluationError("field evaluated at the source position")
    r5 = r2**2.5
    return (3.0 * np.dot(delta, m) * delta - r2 * m) / (r5 * n**3)


def _pair_fields(config, point, exclude=None):
    """Sum of dipole fields of all magnets (minus `exclude`) at `point`."""
    pos = config.positions
    mom = config.moments
    if exclude is not None:
        keep = np.arange(len(pos)) != exclude
        pos, mom = pos[keep], mom[keep]
    delta = np.asarray(point, dtype=float) - pos
    r2 = np.einsum("ij,ij->i", delta, delta)
    if np.any(r2 < SINGULAR_DISTANCE**2):
        raise SingularEvaluationError("field evaluated at a magnet centre")
    proj = np.einsum("ij,ij->i", delta, mom)
    fields = (3.0 * proj[:, None] * delta - r2[:, None] * mom) / r2[:, None] ** 2.5
    return fields.sum(axis=0) / config.n**3


def total_field_at(config, point):
    """Total dimensionless field of the whole chain at an off-centre point."""
    return _pair_fields(config, point)


def regularized_field_at(config, i):
    """Field at magnet i's centre with the singular self term removed."""
    if not 0 <= i < config.count:
        raise InvalidParameterError(f"magnet index {i} out of range")
    return _pair_fields(config, config.positions[i], exclude=i)


def _all_regularized_fields(positions, moments, n):
    """Regularized field at every centre, as an (N, 3) array."""
    delta = positions[:, None, :] - positions[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", delta, delta)
    np.fill_diagonal(r2, 1.0)
    if np.any(r2 < SINGULAR_DISTANCE**2):
        raise SingularEvaluationError("coincident magnet centres")
    proj = np.einsum("ijk,jk->ij", delta, moments)
    contrib = (3.0 * proj[..., None] * delta - r2[..., None] * moments[None, :, :])
    contrib /= r2[..., None] ** 2.5
    idx = np.arange(len(positions))
    contrib[idx, idx] = 0.0
    return contrib.sum(axis=1) / n**3


def per_magnet_energy(config, i):
    """Energy of magnet i in the field of all others: -m_i . B_reg_i."""
    return -float(np.dot(config.moments[i], regularized_field_at(config, i)))


def total_energy(config):
    """Total interaction energy, -(1/2) sum_i m_i . B_reg_i."""
    fields = _all_regularized_fields(config.positions, config.moments, config.n)
    return -0.5 * float(np.einsum("ij,ij->", config.moments, fields))


def orientation_gradient(config):
    """Gradient of total_energy w.r.t. each moment, tangent to the sphere.

    The Euclidean gradient is -B_reg_i; the returned rows have the
    component along m_i projected out.
    """
    fields = _all_regularized_fields(config.positions, config.moments, config.n)
    grad = -fields
    radial = np.einsum("ij,ij->i", grad, config.moments)
    return grad - radial[:, None] * config.moments


def _energy_and_gradient(positions, moments, n):
    fields = _all_regularized_fields(positions, moments, n)
    energy = -0.5 * float(np.einsum("ij,ij->", moments, fields))
    grad = -fields
    radial = np.einsum("ij,ij->i", grad, moments)
    return energy, grad - radial[:, None] * moments


def optimize_orientations(config, fixed_positions=True, tol=1e-8,
                          max_iter=100_000):
    """Minimize total_energy over the moments, positions held fixed.

    Projected gradient descent on the product of unit spheres with Armijo
    backtracking (c = 1e-4, shrink 0.5).  Terminates when the projected
    gradient infinity-norm drops below tol; raises NonConvergenceError
    (carrying the best iterate) at the iteration cap.
    """
    if not fixed_positions:
        raise InvalidParameterError("only fixed-position optimization is supported")
    if not tol > 0.0:
        raise InvalidParameterError("tol must be positive")
    pos = config.positions
    n = config.n
    m = config.moments.copy()
    energy, grad = _energy_and_gradient(pos, m, n)
    step = 0.1
    for _ in range(max_iter):
        gnorm = np.max(np.linalg.norm(grad, axis=1))
        if gnorm < tol:
            return ChainConfig(n, config.topology, pos, m)
        gsq = float(np.einsum("ij,ij->", grad, grad))
        # round-off slack: near convergence the Armijo decrease drops below
        # the energy's noise floor, which must not stall the line search
        slack = 1e-13 * (1.0 + abs(energy))
        while True:
            trial = m - step * grad
            trial /= np.linalg.norm(trial, axis=1)[:, None]
            e_trial, g_trial = _energy_and_gradient(pos, trial, n)
            if e_trial <= energy - 1e-4 * step * gsq + slack:
                break
            step *= 0.5
            if step < 1e-16:
                raise NonConvergenceError(
                    "line search failed",
                    best=ChainConfig(n, config.topology, pos, m))
        m, energy, grad = trial, e_trial, g_trial
        # keep the step inside the stable region of the ~4.8-stiff
        # alignment mode; larger steps cycle around the minimum
        step = min(step * 2.0, 0.25)
    raise NonConvergenceError(
        "orientation optimizer hit the iteration cap",
        best=ChainConfig(n, config.topology, pos, m))


def energy_scale(spec):
    """Joules per unit of dimensionless energy: pi a^3 B^2 / (18 mu0)."""
    return math.pi * spec.a**3 * spec.B**2 / (18.0 * spec.mu0)


def redimensionalize(value, spec, kind="energy"):
    """Convert a dimensionless energy to joules; frequencies pass through."""
    if kind == "energy":
        return value * energy_scale(spec)
    if kind == "frequency":
        return value
    raise InvalidParameterError(f"unknown quantity kind {kind!r}")
