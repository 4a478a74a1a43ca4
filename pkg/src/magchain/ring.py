"""Perturbed-ring energy functionals, kernel calculus, and vibration modes.

The deformation is a circumferential displacement eps*w(theta); energies
here are the scaled functionals whose quadratic parts set the effective
bending stiffness (zeta(3)/4 + 1/24) and, through the ring Lagrangian,
the mode spectrum omega_k.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.integrate import quad

from . import _ring_kernels
from .continuum import ZETA3
from .discrete import total_energy
from .errors import (InvalidParameterError, NumericalFailureError,
                     SingularEvaluationError)
from .geometry import RingPerturbation, build_circular_ring, build_perturbed_ring

KERNEL_NAMES = ("00", "01", "11", "02", "12", "22")
_SINGULARITY_GUARD = 1e-6


@dataclass(frozen=True)
class KernelId:
    name: str  # "00", "01", "11", "02", "12", "22"
    order: int = 0

    def __post_init__(self):
        if self.name not in KERNEL_NAMES:
            raise InvalidParameterError(f"unknown kernel {self.name!r}")
        if not 0 <= self.order <= 4:
            raise InvalidParameterError("kernel derivative order must be 0..4")


def kernel_eval(kernel, t, order=0):
    """Evaluate a smooth kernel K_ij (or its derivative) at t in (0, 2 pi).

    `kernel` is a KernelId or a kernel name string (with `order` then giving
    the derivative).  The sgn(t) factor of the full odd extension is the
    caller's responsibility.
    """
    if isinstance(kernel, KernelId):
        name, order = kernel.name, kernel.order
    else:
        name = kernel
        KernelId(name, order)
    if not (_SINGULARITY_GUARD <= t <= 2.0 * math.pi - _SINGULARITY_GUARD):
        raise SingularEvaluationError(
            f"kernel evaluation too close to the singularities at 0/2 pi (t={t})")
    return float(_ring_kernels.DERIVATIVES[name][order](t))


def kernel_identity_residual(t):
    """Pointwise residual of the zero-kernel identity
    K00 + K01' - K11'' + K02'' - K12''' + K22''''."""
    if not 0.3 <= t <= 2.0 * math.pi - 0.3:
        raise InvalidParameterError("identity window is [0.3, 2 pi - 0.3]")
    d = _ring_kernels.DERIVATIVES
    return float(d["00"][0](t) + d["01"][1](t) - d["11"][2](t)
                 + d["02"][2](t) - d["12"][3](t) + d["22"][4](t))


def _mode_amplitudes(pert):
    """(k, a_k^2 + b_k^2) pairs for the modes present in the perturbation."""
    a, b = pert.cos_coeffs, pert.sin_coeffs
    return [(k, a[k] ** 2 + b[k] ** 2) for k in range(len(a))
            if a[k] ** 2 + b[k] ** 2 > 0.0]


def _bending_integral(pert):
    """int_0^{2 pi} (w'^2 - 2 w''^2 + w'''^2) dtheta, in closed form."""
    return math.pi * sum(amp * k**2 * (k**2 - 1) ** 2
                         for k, amp in _mode_amplitudes(pert))


def e_loc(pert):
    """Local (nearest-neighbour) deformation functional
    4 pi^2 + 2 eps^2 pi * int(w'^2 - 2 w''^2 + w'''^2)."""
    return 4.0 * math.pi**2 + 2.0 * pert.epsilon**2 * math.pi * _bending_integral(pert)


def _taylor_cos(k, phase, qmax):
    """Taylor coefficients of cos(k t + phase) about t = 0."""
    return [k**q * math.cos(phase + q * math.pi / 2.0) / math.factorial(q)
            for q in range(qmax + 1)]


def _odd_part_coeffs(laurent, taylor):
    """Coefficients b_m of K(t)*phi(t) = sgn(t) sum_m b_m t^m.

    `laurent` maps powers p to coefficients of the smooth kernel; `taylor`
    lists phi's Taylor coefficients.  Complete for m <= max(laurent).
    """
    pmax = max(laurent)
    b = {}
    for m in range(-5, pmax + 1):
        total = 0.0
        for p, ap in laurent.items():
            q = m - p
            if 0 <= q < len(taylor):
                total += ap * taylor[q]
        b[m] = total
    return b


def _fp_even_singular(b, upper):
    """Finite part of 2*(b[-5] t^-5 + b[-3] t^-3 + b[-1]/t) over (0, upper)."""
    return (2.0 * b.get(-5, 0.0) * (-(upper**-4) / 4.0)
            + 2.0 * b.get(-3, 0.0) * (-(upper**-2) / 2.0)
            + 2.0 * b.get(-1, 0.0) * math.log(upper))


def _mode_kernel_integral(name, k, phase, t0=0.5):
    """Finite part of sgn(t) Kbar_name(t) cos(k t + phase) over (-pi, pi).

    The even part of the integrand is 2 sum_{m odd} b_m t^m; odd powers
    below t^0 carry the finite parts, the series handles |t| < t0, and
    adaptive quadrature covers the rest with the singular terms subtracted.
    """
    laurent = _ring_kernels.LAURENT[name]
    pmax = max(laurent)
    b = _odd_part_coeffs(laurent, _taylor_cos(k, phase, pmax + 5))
    value = _fp_even_singular(b, math.pi)
    # analytic integral of the regular series over (0, t0)
    for m in range(1, pmax + 1, 2):
        value += 2.0 * b[m] * t0 ** (m + 1) / (m + 1)
    kd = _ring_kernels.DERIVATIVES[name][0]

    def regular(t):
        even = kd(t) * math.cos(k * t + phase) - kd(-t) * math.cos(k * t - phase)
        sing = 2.0 * (b.get(-5, 0.0) * t**-5 + b.get(-3, 0.0) * t**-3
                      + b.get(-1, 0.0) / t)
        return even - sing

    tail, err = quad(regular, t0, math.pi, epsabs=1e-11, epsrel=1e-12, limit=200)
    if err > 1e-8:
        raise NumericalFailureError("kernel quadrature did not converge",
                                    achieved=err)
    return value + tail


_KERNEL_PAIRS = ((0, 0, "00"), (0, 1, "01"), (1, 1, "11"),
                 (0, 2, "02"), (1, 2, "12"), (2, 2, "22"))


def _direct_mode_coefficient(k):
    """Quadratic coefficient (per unit a_k^2+b_k^2) of the direct
    nonlocal functional at mode k."""
    single = math.pi * (7.0 / 240.0 - 37.0 * k**2 / 480.0 + k**4 / 12.0)
    double = math.pi * sum(
        k ** (i + j) * _mode_kernel_integral(name, k, (i - j) * math.pi / 2.0)
        for i, j, name in _KERNEL_PAIRS)
    return single + double


def e_nonloc(pert, method="simplified"):
    """Nonlocal deformation functional.

    simplified: pi^2/3 + (eps^2 pi / 6) int(w'^2 - 2 w''^2 + w'''^2).
    direct: the single-integral terms plus the six finite-part double
    integrals with kernels K_ij, reduced per Fourier mode.
    """
    const = math.pi**2 / 3.0
    if method == "simplified":
        return const + pert.epsilon**2 * math.pi / 6.0 * _bending_integral(pert)
    if method == "direct":
        quadratic = sum(amp * _direct_mode_coefficient(k)
                        for k, amp in _mode_amplitudes(pert))
        return const + pert.epsilon**2 * math.pi * quadratic
    raise InvalidParameterError(f"unknown method {method!r}")


def e_tot_functional(pert):
    """(zeta(3)/4) E_loc + (1/2) E_nonloc; the quadratic part reduces to
    (zeta(3)/4 + 1/24) times the E_loc quadratic part."""
    return ZETA3 / 4.0 * e_loc(pert) + 0.5 * e_nonloc(pert, "simplified")


def _inner_kernel_fp(name, phi, taylor, t0=0.5):
    """Finite part of sgn(t) Kbar_name(t) phi(t) over (-pi, pi).

    phi is a callable of t with the given Taylor coefficients at 0.
    Used by the order-swap check of the double integrals.
    """
    laurent = _ring_kernels.LAURENT[name]
    pmax = max(laurent)
    b = _odd_part_coeffs(laurent, taylor)
    value = _fp_even_singular(b, math.pi)
    for m in range(1, pmax + 1, 2):
        value += 2.0 * b[m] * t0 ** (m + 1) / (m + 1)
    kd = _ring_kernels.DERIVATIVES[name][0]

    def regular(t):
        even = kd(t) * phi(t) - kd(-t) * phi(-t)
        sing = 2.0 * (b.get(-5, 0.0) * t**-5 + b.get(-3, 0.0) * t**-3
                      + b.get(-1, 0.0) / t)
        return even - sing

    tail, _ = quad(regular, t0, math.pi, epsabs=1e-10, epsrel=1e-12, limit=200)
    return value + tail


def kernel_double_integral(name, f, g, order="xy", outer_nodes=64, taylor_terms=14):
    """Double finite-part integral of K_name(x - y) f(x) g(y) over the torus.

    f and g are callables f(theta, order) with derivatives of any order
    (e.g. RingPerturbation.w).  order "xy" integrates over x first (inner
    finite part in x), "yx" over y first; the two must agree.
    """
    nodes = 2.0 * np.pi * np.arange(outer_nodes) / outer_nodes
    total = 0.0
    for c in nodes:
        if order == "xy":
            taylor = [f(c, q) / math.factorial(q) for q in range(taylor_terms)]
            inner = _inner_kernel_fp(name, lambda t: f(c + t, 0), taylor)
            total += g(c, 0) * inner
        elif order == "yx":
            taylor = [(-1.0) ** q * g(c, q) / math.factorial(q)
                      for q in range(taylor_terms)]
            inner = _inner_kernel_fp(name, lambda t: g(c - t, 0), taylor)
            total += f(c, 0) * inner
        else:
            raise InvalidParameterError(f"unknown integration order {order!r}")
    return 2.0 * math.pi * total / outer_nodes


@dataclass(frozen=True)
class ModeSpectrum:
    """Vibration frequencies omega_k (rad/s) for k = 1..k_max."""

    k_values: np.ndarray
    frequencies: np.ndarray


def mode_frequencies(spec, n, k_max):
    """Closed-form spectrum of the ring's in-plane vibration modes:
    omega_k^2 = (pi^4 B^2/(3 mu0 a^2 rho n^4)) (zeta(3)/4 + 1/24)
                * k^2 (k^2-1)^2 / (k^2+1).
    """
    if n < 3:
        raise InvalidParameterError("ring needs n >= 3")
    if k_max < 2:
        raise InvalidParameterError("k_max must be at least 2")
    k = np.arange(1, k_max + 1, dtype=float)
    prefactor = (math.pi**4 * spec.B**2 / (3.0 * spec.mu0 * spec.a**2 * spec.rho * n**4)
                 * (ZETA3 / 4.0 + 1.0 / 24.0))
    omega = np.sqrt(prefactor * k**2 * (k**2 - 1) ** 2 / (k**2 + 1))
    # cross-check against the independently printed lowest-mode closed form
    omega2_direct = (math.pi**2 * spec.B / (spec.a * n**2)
                     * math.sqrt((6.0 * ZETA3 + 1.0) / (10.0 * spec.mu0 * spec.rho)))
    if abs(omega[1] - omega2_direct) > 1e-10 * omega2_direct:
        raise NumericalFailureError("spectrum inconsistent with the omega_2 closed form",
                                    achieved=abs(omega[1] - omega2_direct))
    return ModeSpectrum(k_values=np.arange(1, k_max + 1), frequencies=omega)


def discrete_mode_frequency(n, k, spec, eps=1e-3):
    """Mode frequency from the discrete model via a Hessian fit.

    Builds perturbed rings at signed amplitudes +-eps, +-2 eps of the pure
    cosine mode k, extracts the quadratic stiffness of total_energy with a
    4-point fit that cancels cubic contamination, and combines it with the
    modal mass (proportional to k^2 + 1) from the ring Lagrangian.
    """
    if n < 16:
        raise InvalidParameterError("discrete mode fit needs n >= 16")
    if not 1 <= k <= n // 4:
        raise InvalidParameterError("mode number must satisfy 1 <= k <= n/4")
    e0 = total_energy(build_circular_ring(n))

    def energy(beta):
        pert = RingPerturbation.single_mode(k, abs(beta),
                                            amplitude=math.copysign(1.0, beta))
        return total_energy(build_perturbed_ring(n, pert))

    s1 = energy(eps) + energy(-eps) - 2.0 * e0
    s2 = energy(2 * eps) + energy(-2 * eps) - 2.0 * e0
    c2 = (16.0 * s1 - s2) / (24.0 * eps**2)
    c4 = (s2 - 4.0 * s1) / (24.0 * eps**4)
    contamination = abs(c4) * eps**2
    if contamination > 0.25 * max(abs(c2), 1e-3):
        raise NumericalFailureError(
            f"quadratic fit contaminated (c2={c2:.3e}, quartic leakage "
            f"{contamination:.3e})", achieved=contamination)
    omega_sq = (math.pi**2 * spec.B**2
                / (6.0 * spec.mu0 * spec.a**2 * spec.rho * n**3 * (k**2 + 1))
                * max(c2, 0.0))
    return math.sqrt(omega_sq)
