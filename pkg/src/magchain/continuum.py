"""Continuum limit of the dipole chain: lattice sums, singular amplitudes,
finite-part quadrature, the interior field expansion, and energy functionals.

The fast variable is X = s*n; the slow variable s parametrizes the centre
line.  Hypersingular integrals are Hadamard finite parts: the local
expansion of the integrand (orders |h|^-3, sgn(h)|h|^-2, |h|^-1 with
h = s - eta) is removed, its finite part added in closed form, and the
regular remainder integrated by adaptive quadrature.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.integrate import quad

from .errors import (BoundaryLayerError, DivergentFunctionalError,
                     InvalidParameterError, SingularEvaluationError)

ZETA3 = 1.2020569031595943
EULER_GAMMA = 0.5772156649015329

_LATTICE_WINDOW = 10_000
BOUNDARY_GAPS = 5  # open-curve interior window: s in [5/n, 1 - 5/n]


# ----------------------------------------------------------------------
# Lattice sums

@dataclass(frozen=True)
class LatticeSumValue:
    k: int
    X: float
    value: float


def _psi_asymptotic(z):
    """Digamma for large argument, through the z^-4 term."""
    return math.log(z) - 1.0 / (2.0 * z) - 1.0 / (12.0 * z**2) + 1.0 / (120.0 * z**4)


def _tail(p, a):
    """Euler-Maclaurin tail of sum_{j>=0} (a+j)^-p through two corrections."""
    if p == 3:
        return 0.5 * a**-2 + 0.5 * a**-3 + 0.25 * a**-4 - a**-6 / 12.0
    if p == 2:
        return a**-1 + 0.5 * a**-2 + a**-3 / 6.0 - a**-5 / 30.0
    raise InvalidParameterError(f"no tail for exponent {p}")


def lattice_sum(k, X):
    """Periodic lattice sum Lambda_k(X) (k=1 carries the -2 log K renormalization).

    Computed from a window of half-width K = 10^4 around X plus analytic
    tail corrections; absolute error is far below 1e-10.  Integer X is
    singular -- use regularized_limit for the subtracted limit value.
    """
    if k not in (1, 2, 3):
        raise InvalidParameterError("lattice sums defined for k in {1, 2, 3}")
    X = float(X)
    f = X - math.floor(X)
    if min(f, 1.0 - f) < 1e-12:
        raise SingularEvaluationError(
            "lattice sum diverges at integer X; use regularized_limit")
    j = np.arange(_LATTICE_WINDOW + 1, dtype=float)
    below = f + j          # distances to lattice points at or below X
    above = (1.0 - f) + j  # distances to lattice points above X
    if k == 3:
        value = (np.sum(below**-3) + np.sum(above**-3)
                 + _tail(3, f + _LATTICE_WINDOW + 1)
                 + _tail(3, 1.0 - f + _LATTICE_WINDOW + 1))
    elif k == 2:
        value = (np.sum(below**-2) - np.sum(above**-2)
                 + _tail(2, f + _LATTICE_WINDOW + 1)
                 - _tail(2, 1.0 - f + _LATTICE_WINDOW + 1))
    else:
        value = (np.sum(1.0 / below) + np.sum(1.0 / above)
                 - _psi_asymptotic(f + _LATTICE_WINDOW + 1)
                 - _psi_asymptotic(1.0 - f + _LATTICE_WINDOW + 1))
    return LatticeSumValue(k=k, X=X, value=float(value))


def regularized_limit(k):
    """Limit of Lambda_k at integer X with the local singular term removed."""
    limits = {3: 2.0 * ZETA3, 2: 0.0, 1: 2.0 * EULER_GAMMA}
    if k not in limits:
        raise InvalidParameterError("lattice sums defined for k in {1, 2, 3}")
    return limits[k]


# ----------------------------------------------------------------------
# Amplitude vectors

@dataclass(frozen=True)
class PhiAmplitudes:
    phi1: np.ndarray
    phi2: np.ndarray
    phi3: np.ndarray


def phi_amplitudes(curve, s, n):
    """Slowly varying amplitudes of the singular lattice-sum terms.

    phi3 includes its O(n^-2) correction; phi1 requires curve derivatives
    to order 3 and moment derivatives to order 2.
    """
    try:
        r1 = curve.derivative(s, 1)
        r2 = curve.derivative(s, 2)
        r3 = curve.derivative(s, 3)
        m0 = curve.moment(s, 0)
        m1 = curve.moment(s, 1)
        m2 = curve.moment(s, 2)
    except NotImplementedError as exc:
        raise InvalidParameterError("curve derivatives to order 3 required") from exc
    r1m = float(np.dot(r1, m0))
    r2m = float(np.dot(r2, m0))
    r3m = float(np.dot(r3, m0))
    r1m1 = float(np.dot(r1, m1))
    r1m2 = float(np.dot(r1, m2))
    r2m1 = float(np.dot(r2, m1))
    k2 = float(np.dot(r2, r2))  # ||r''||^2

    phi3 = (3.0 * r1m * r1 - m0
            + (1.0 / n**2) * (-(5.0 * k2 * r1m / 8.0) * r1 + (k2 / 8.0) * m0))
    phi2 = (-1.5 * r2m * r1 - 3.0 * r1m1 * r1 - 1.5 * r1m * r2 + m1)
    phi1 = (0.5 * r3m * r1 + 1.5 * r1m2 * r1 + 0.5 * r1m * r3
            + 1.5 * r2m1 * r1 + 0.75 * r2m * r2 + 1.5 * r1m1 * r2
            + (5.0 / 8.0) * k2 * r1m * r1
            - 0.5 * m2 - (1.0 / 8.0) * k2 * m0)
    return PhiAmplitudes(phi1=phi1, phi2=phi2, phi3=phi3)


# ----------------------------------------------------------------------
# Truncated power-series arithmetic (local expansions about h = s - eta = 0)

_SERIES_LEN = 10


def _series_mul(a, b):
    return np.convolve(a, b)[: len(a)]


def _series_pow(a, alpha):
    """Series of a(h)^alpha for a[0] > 0 via the binomial expansion."""
    length = len(a)
    x = a / a[0]
    x = x.copy()
    x[0] = 0.0
    out = np.zeros(length)
    out[0] = 1.0
    xk = np.zeros(length)
    xk[0] = 1.0
    coef = 1.0
    for k in range(1, length):
        coef *= (alpha - (k - 1)) / k
        xk = _series_mul(xk, x)
        out += coef * xk
    return a[0] ** alpha * out


def _curve_local_series(curve, s, length=_SERIES_LEN):
    """Series in h = s - eta of Delta = r(s) - r(eta) and of r'(eta).

    Returns (D, v): arrays of shape (length, 3) with D[k], v[k] the h^k
    coefficients.  Needs curve derivatives up to order `length`; all
    built-in families are analytic or spectral, so any order is available.
    """
    derivs = [curve.derivative(s, k) for k in range(1, length + 1)]
    D = np.zeros((length, 3))
    v = np.zeros((length, 3))
    fact = 1.0
    for k in range(1, length):
        fact *= k
        D[k] = (-1.0) ** (k + 1) * derivs[k - 1] / fact
    fact = 1.0
    for k in range(length):
        if k:
            fact *= k
        v[k] = (-1.0) ** k * derivs[k] / fact
    return D, v


def _inverse_gap_series(D):
    """Series of (||Delta||^2 / h^2)^(-3/2) and ^(-5/2)."""
    length = len(D)
    P = np.zeros(length + 2)
    for c in range(3):
        P += np.convolve(D[:, c], D[:, c])[: length + 2]
    Q = P[2: length + 2]
    return _series_pow(Q, -1.5), _series_pow(Q, -2.5)


def _field_kernel_series(curve, s, length=_SERIES_LEN):
    """Local expansion W_c(h) of the dipole kernel, component-wise.

    The integrand 3(Delta.m(eta))Delta/||Delta||^5 - m(eta)/||Delta||^3
    equals W(h)/|h|^3 with W analytic; W[0..2] are the subtraction
    coefficients (|h|^-3, sgn/h^2, |h|^-1) and the tail gives the regular
    remainder near the singularity.
    """
    D, v = _curve_local_series(curve, s, length)
    qm32, qm52 = _inverse_gap_series(D)
    vnorm2 = np.zeros(length)
    for c in range(3):
        vnorm2 += np.convolve(v[:, c], v[:, c])[:length]
    inv_norm = _series_pow(vnorm2, -0.5)
    m_eta = np.column_stack([_series_mul(v[:, c], inv_norm) for c in range(3)])
    A = np.zeros(length)
    for c in range(3):
        A += np.convolve(D[:, c], m_eta[:, c])[:length]
    A1 = np.append(A[1:], 0.0)  # (Delta . m)/h
    W = np.zeros((length, 3))
    for c in range(3):
        D1c = np.append(D[1:, c], 0.0)
        W[:, c] = (3.0 * _series_mul(_series_mul(A1, D1c), qm52)
                   - _series_mul(m_eta[:, c], qm32))
    return W


def _density_kernel_series(curve, s, length=_SERIES_LEN):
    """Local expansion of the tangent-weighted energy kernel.

    The integrand 3(Delta.r'(eta))(Delta.r'(s))/||Delta||^5
    - (r'(eta).r'(s))/||Delta||^3 equals W(h)/|h|^3.
    """
    D, v = _curve_local_series(curve, s, length)
    qm32, qm52 = _inverse_gap_series(D)
    vs = curve.derivative(s, 1)
    A = np.zeros(length)
    Bc = np.zeros(length)
    dot_vvs = np.zeros(length)
    for c in range(3):
        A += np.convolve(D[:, c], v[:, c])[:length]
        Bc += D[:, c] * vs[c]
        dot_vvs += v[:, c] * vs[c]
    A1 = np.append(A[1:], 0.0)
    B1 = np.append(Bc[1:], 0.0)
    return (3.0 * _series_mul(_series_mul(A1, B1), qm52)
            - _series_mul(dot_vvs, qm32))


# ----------------------------------------------------------------------
# Finite-part quadrature

def finite_part_integral(f, s, a, b, c3=0.0, c2=0.0, c1=0.0,
                         epsabs=1e-10, limit=200):
    """Hadamard finite part of f over [a, b], singular at interior eta = s.

    The caller supplies the local expansion coefficients: the integrand
    behaves as c3/|h|^3 + c2*sgn(h)/|h|^2 + c1/|h| with h = s - eta.  The
    subtracted terms' finite parts are added from the closed forms
    FP |h|^-3 = -(L^-2 + R^-2)/2, FP sgn/h^2 = 1/L - 1/R,
    FP 1/|h| = log L + log R, with L = s - a, R = b - s.
    """
    if not a < s < b:
        raise InvalidParameterError("singular point must lie inside the domain")
    L = s - a
    R = b - s
    fp = (-0.5 * c3 * (L**-2 + R**-2) + c2 * (1.0 / L - 1.0 / R)
          + c1 * (math.log(L) + math.log(R)))

    def remainder(eta):
        h = s - eta
        ah = abs(h)
        out = f(eta)
        if c3:
            out -= c3 * ah**-3
        if c2:
            out -= c2 * math.copysign(1.0, h) * ah**-2
        if c1:
            out -= c1 * ah**-1
        return out

    left, _ = quad(remainder, a, s, epsabs=epsabs, epsrel=1e-12, limit=limit)
    right, _ = quad(remainder, s, b, epsabs=epsabs, epsrel=1e-12, limit=limit)
    return fp + left + right


def _finite_part_with_series(f, W, s, lo, hi, epsabs=1e-10):
    """Finite part of f over [lo, hi] using the full local series W.

    Inside a window |h| < delta the integrand is W(h)/|h|^3, so the
    subtraction, its finite part, and the remainder integral are all
    analytic in the series coefficients; outside the window f is regular
    and handled by adaptive quadrature.  This avoids catastrophic
    cancellation near the singularity entirely.
    """
    delta = min(0.03, 0.45 * (s - lo), 0.45 * (hi - s))
    if delta <= 0.0:
        raise InvalidParameterError("singular point must lie inside the domain")
    c3, c1 = W[0], W[2]
    # FP of the singular orders over the symmetric window (sgn term is odd)
    value = -c3 / delta**2 + 2.0 * c1 * math.log(delta)
    # regular remainder sgn(h) * sum_j W[j+3] h^j integrates in closed form
    for j in range(1, len(W) - 3, 2):
        value += 2.0 * W[j + 3] * delta ** (j + 1) / (j + 1)
    left, _ = quad(f, lo, s - delta, epsabs=epsabs, epsrel=1e-12, limit=200)
    right, _ = quad(f, s + delta, hi, epsabs=epsabs, epsrel=1e-12, limit=200)
    return value + left + right


_RING_REDUCTION_SERIES = (  # (power, coefficient) of (1+cos^2)/sin^3 - 2/t^3
    (1, 7 / 60), (3, 31 / 756), (5, 127 / 14400), (7, 73 / 47520),
    (9, 1414477 / 5943974400), (11, 8191 / 239500800),
    (13, 16931177 / 3629463552000),
)


def ring_reduction_integral():
    """Finite part of (1 + cos^2 t)/sin^3 t over [0, pi] (equals -1/3).

    Endpoint singularities 2/t^3 and 2/(pi-t)^3; by the symmetry about
    pi/2 the integral is twice the left half, whose remainder is evaluated
    through a hard-coded series near t = 0.
    """

    def remainder(t):
        if t < 0.5:
            return math.fsum(c * t**p for p, c in _RING_REDUCTION_SERIES)
        return (1.0 + math.cos(t) ** 2) / math.sin(t) ** 3 - 2.0 * t**-3
    body, _ = quad(remainder, 0.0, math.pi / 2.0, epsabs=1e-12, limit=200)
    # FP of 2/t^3 over (0, pi/2) from the endpoint closed form -(b-a)^(1-p)/(p-1)
    return 2.0 * body + 2.0 * (-2.0 / (math.pi / 2.0) ** 2 / 2.0)


# ----------------------------------------------------------------------
# Fields and energies

def _interior_check(curve, s, n):
    if not curve.closed:
        lo = BOUNDARY_GAPS / n
        if not lo <= s <= 1.0 - lo:
            raise BoundaryLayerError(
                f"s={s} lies in the end boundary layer (window [{lo}, {1 - lo}])")


def _fp_domain(curve, s):
    if curve.closed:
        return s - 0.5, s + 0.5
    return 0.0, 1.0


def _field_finite_part(curve, s, n):
    """Vector finite part of the dipole kernel along the curve."""
    W = _field_kernel_series(curve, s)
    lo, hi = _fp_domain(curve, s)
    rs = curve.position(s)
    out = np.zeros(3)
    for c in range(3):

        def component(eta, c=c):
            delta = rs - curve.position(eta)
            m = curve.moment(eta, 0)
            r2 = float(np.dot(delta, delta))
            return (3.0 * float(np.dot(delta, m)) * delta[c] - r2 * m[c]) / r2**2.5

        out[c] = _finite_part_with_series(component, W[:, c], s, lo, hi)
    return out


def _density_finite_part(curve, s):
    """Scalar finite part of the tangent-weighted energy kernel."""
    W = _density_kernel_series(curve, s)
    lo, hi = _fp_domain(curve, s)
    rs = curve.position(s)
    vs = curve.derivative(s, 1)

    def kernel(eta):
        delta = rs - curve.position(eta)
        ve = curve.derivative(eta, 1)
        r2 = float(np.dot(delta, delta))
        return (3.0 * float(np.dot(delta, ve)) * float(np.dot(delta, vs))
                - r2 * float(np.dot(ve, vs))) / r2**2.5

    return _finite_part_with_series(kernel, W, s, lo, hi)


def continuum_field(curve, s, n, mode="regularized"):
    """Interior field of the continuum chain at parameter s.

    full mode: Phi3*L3(sn) + n^-1 Phi2*L2(sn) + 2 n^-2 log(n) Phi1
    + n^-2 Phi1*L1(sn) + n^-2 * (finite part of the dipole kernel).
    regularized mode replaces the lattice-sum terms by their subtracted
    limits: 2 zeta(3) Phi3 + 2 n^-2 (log n + gamma) Phi1.
    """
    _interior_check(curve, s, n)
    phi = phi_amplitudes(curve, s, n)
    fp = _field_finite_part(curve, s, n)
    logn = math.log(n)
    if mode == "regularized":
        return (2.0 * ZETA3 * phi.phi3
                + (2.0 * logn + 2.0 * EULER_GAMMA) * phi.phi1 / n**2
                + fp / n**2)
    if mode == "full":
        X = s * n
        return (lattice_sum(3, X).value * phi.phi3
                + lattice_sum(2, X).value * phi.phi2 / n
                + (2.0 * logn + lattice_sum(1, X).value) * phi.phi1 / n**2
                + fp / n**2)
    raise InvalidParameterError(f"unknown field mode {mode!r}")


def energy_density(curve, s, n):
    """Interior energy per magnet for tangentially oriented moments:
    E(s) = -4 zeta(3) + n^-2 (zeta(3)/2) ||r''||^2 - n^-2 * (kernel finite part).
    """
    _interior_check(curve, s, n)
    r2 = curve.derivative(s, 2)
    k2 = float(np.dot(r2, r2))
    return (-4.0 * ZETA3 + 0.5 * ZETA3 * k2 / n**2
            - _density_finite_part(curve, s) / n**2)


@dataclass(frozen=True)
class EnergyBreakdown:
    ground: float
    local: float
    nonlocal_: float

    @property
    def total(self):
        return self.ground + self.local + self.nonlocal_


def continuum_total_energy(curve, n, nodes=32):
    """Total continuum energy of a closed chain, split into the ground
    term, the bending (local) term, and the nonlocal double integral.
    Open curves are rejected: their nonlocal integral diverges at the ends.
    """
    if not curve.closed:
        raise DivergentFunctionalError(
            "the nonlocal energy integral diverges for open chains")
    grid = np.arange(nodes) / nodes
    k2 = np.array([float(np.dot(curve.derivative(s, 2), curve.derivative(s, 2)))
                   for s in grid])
    local = (ZETA3 / 4.0) * float(np.mean(k2)) / n
    fp = np.array([_density_finite_part(curve, s) for s in grid])
    nonlocal_ = -0.5 * float(np.mean(fp)) / n
    return EnergyBreakdown(ground=-2.0 * ZETA3 * n, local=local, nonlocal_=nonlocal_)


def ring_energy_closed_form(n):
    """Asymptotic total energy of the circular ring:
    -2 zeta(3) n + (zeta(3) + 1/6) pi^2 / n."""
    if n < 3:
        raise InvalidParameterError("ring needs n >= 3")
    return -2.0 * ZETA3 * n + (ZETA3 + 1.0 / 6.0) * math.pi**2 / n
