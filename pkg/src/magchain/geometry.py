"""Discrete chain configurations and smooth centre-line curves.

Lengths are dimensionless: the unit of length is the total chain length
2*a*n, so neighbouring sphere centres sit exactly 1/n apart and the sphere
diameter is 1/n.  An open chain with count parameter n holds n+1 magnets;
a ring holds n.
"""

from dataclasses import dataclass, field
import csv
import math

import numpy as np

from .errors import ConstraintFailureError, InvalidParameterError

GAP_TOL = 1e-10
MOMENT_TOL = 1e-12
PROJECTION_TOL = 1e-12


@dataclass(frozen=True)
class MagnetSpec:
    """Dimensional parameters of a single spherical magnet."""

    a: float            # sphere radius [m]
    B: float            # characteristic field strength [T]
    rho: float          # material density [kg m^-3]
    mu0: float = 4e-7 * math.pi  # permeability of free space [T m A^-1]

    def __post_init__(self):
        for name in ("a", "B", "rho", "mu0"):
            if not getattr(self, name) > 0.0:
                raise InvalidParameterError(f"MagnetSpec.{name} must be positive")


def _as_points(arr, name):
    out = np.asarray(arr, dtype=float)
    if out.ndim != 2 or out.shape[1] != 3:
        raise InvalidParameterError(f"{name} must have shape (N, 3)")
    if not np.all(np.isfinite(out)):
        raise InvalidParameterError(f"{name} must be finite")
    return out


def chain_gaps(positions, topology):
    """Distances between consecutive centres (cyclic for rings)."""
    if topology == "ring":
        diffs = np.roll(positions, -1, axis=0) - positions
    else:
        diffs = positions[1:] - positions[:-1]
    return np.linalg.norm(diffs, axis=1)


@dataclass(frozen=True)
class ChainConfig:
    """A discrete configuration of touching spherical dipole magnets."""

    n: int
    topology: str  # "open" or "ring"
    positions: np.ndarray  # (N, 3), unit = chain length
    moments: np.ndarray    # (N, 3), unit vectors

    def __post_init__(self):
        if self.topology not in ("open", "ring"):
            raise InvalidParameterError(f"unknown topology {self.topology!r}")
        n = int(self.n)
        object.__setattr__(self, "n", n)
        pos = _as_points(self.positions, "positions")
        mom = _as_points(self.moments, "moments")
        expected = n + 1 if self.topology == "open" else n
        if len(pos) != expected or len(mom) != expected:
            raise InvalidParameterError(
                f"{self.topology} chain with n={n} needs {expected} magnets, "
                f"got {len(pos)} positions / {len(mom)} moments")
        norms = np.linalg.norm(mom, axis=1)
        if np.max(np.abs(norms - 1.0)) > MOMENT_TOL:
            raise InvalidParameterError("moments must be unit vectors")
        gaps = chain_gaps(pos, self.topology)
        if np.max(np.abs(gaps - 1.0 / n)) > GAP_TOL:
            raise InvalidParameterError(
                "neighbour gaps must equal 1/n "
                f"(max deviation {np.max(np.abs(gaps - 1.0 / n)):.3e})")
        pos.setflags(write=False)
        mom.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "moments", mom)

    @property
    def count(self):
        return len(self.positions)


@dataclass(frozen=True)
class RingPerturbation:
    """Circumferential displacement w(theta) of a ring, as a Fourier series.

    epsilon is the dimensionless amplitude; cos_coeffs[k] and sin_coeffs[k]
    multiply cos(k*theta) and sin(k*theta).
    """

    epsilon: float
    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray

    def __post_init__(self):
        if self.epsilon < 0.0:
            raise InvalidParameterError("epsilon must be non-negative")
        a = np.atleast_1d(np.asarray(self.cos_coeffs, dtype=float))
        b = np.atleast_1d(np.asarray(self.sin_coeffs, dtype=float))
        kmax = max(len(a), len(b))
        a = np.pad(a, (0, kmax - len(a)))
        b = np.pad(b, (0, kmax - len(b)))
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "cos_coeffs", a)
        object.__setattr__(self, "sin_coeffs", b)

    @classmethod
    def single_mode(cls, k, epsilon, amplitude=1.0, phase="cos"):
        """Pure Fourier mode: w = amplitude * cos(k theta) (or sin)."""
        if k < 0:
            raise InvalidParameterError("mode number must be non-negative")
        a = np.zeros(k + 1)
        b = np.zeros(k + 1)
        if phase == "cos":
            a[k] = amplitude
        else:
            b[k] = amplitude
        return cls(epsilon, a, b)

    def w(self, theta, order=0):
        """w(theta) or its classical derivative of the given order."""
        theta = np.asarray(theta, dtype=float)
        k = np.arange(len(self.cos_coeffs))
        shift = order * np.pi / 2.0
        kd = k**order if order else np.ones_like(k)
        arg = np.multiply.outer(theta, k) + shift
        val = np.cos(arg) @ (self.cos_coeffs * kd) + np.sin(arg) @ (self.sin_coeffs * kd)
        return val if val.ndim else float(val)

    def radial_displacement(self, theta, order=0):
        """u(theta) induced by inextensibility: u = w' + eps*(-w'^2 + w''^2/2)."""
        e = self.epsilon
        if order == 0:
            return self.w(theta, 1) + e * (-self.w(theta, 1) ** 2 + 0.5 * self.w(theta, 2) ** 2)
        if order == 1:
            return (self.w(theta, 2)
                    + e * (-2.0 * self.w(theta, 1) * self.w(theta, 2)
                           + self.w(theta, 2) * self.w(theta, 3)))
        raise InvalidParameterError("radial displacement derivatives beyond 1 not needed")


def ring_radius(n):
    """Dimensionless radius of a closed ring of n touching spheres."""
    return 1.0 / (2.0 * n * math.sin(math.pi / n))


class ContinuumCurve:
    """A smooth parametric centre-line r(s), s in [0, 1].

    Subclasses provide position and derivatives; moments of the tangential
    dipole distribution (the normalized tangent and its first two
    derivatives) are computed generically.
    """

    family = "abstract"
    closed = False
    max_derivative_order = 4

    def position(self, s):
        raise NotImplementedError

    def derivative(self, s, order):
        raise NotImplementedError

    def moment(self, s, order=0):
        """Unit tangent m(s) = r'/||r'|| and its first two s-derivatives."""
        r1 = self.derivative(s, 1)
        g2 = float(np.dot(r1, r1))
        g = math.sqrt(g2)
        if order == 0:
            return r1 / g
        r2 = self.derivative(s, 2)
        d12 = float(np.dot(r1, r2))
        if order == 1:
            return r2 / g - r1 * (d12 / g**3)
        if order == 2:
            r3 = self.derivative(s, 3)
            d22 = float(np.dot(r2, r2))
            d13 = float(np.dot(r1, r3))
            return (r3 / g
                    - (2.0 * r2 * d12 + r1 * (d22 + d13)) / g**3
                    + 3.0 * r1 * d12**2 / g**5)
        raise InvalidParameterError("moment derivatives available up to order 2")


class StraightCurve(ContinuumCurve):
    """The open straight chain r(s) = s * x_hat."""

    family = "straight"
    closed = False
    max_derivative_order = None  # all orders analytic

    def position(self, s):
        return np.array([float(s), 0.0, 0.0])

    def derivative(self, s, order):
        if order == 1:
            return np.array([1.0, 0.0, 0.0])
        return np.zeros(3)


class CircleCurve(ContinuumCurve):
    """The closed circular ring of n touching spheres."""

    family = "circle"
    closed = True
    max_derivative_order = None

    def __init__(self, n):
        if n < 3:
            raise InvalidParameterError("circle family needs n >= 3")
        self.n = int(n)
        self.radius = ring_radius(n)

    def position(self, s):
        phi = 2.0 * math.pi * float(s)
        return self.radius * np.array([math.cos(phi), math.sin(phi), 0.0])

    def derivative(self, s, order):
        phi = 2.0 * math.pi * float(s) + order * math.pi / 2.0
        scale = self.radius * (2.0 * math.pi) ** order
        return scale * np.array([math.cos(phi), math.sin(phi), 0.0])


class SampledCurve(ContinuumCurve):
    """Closed curve through equispaced samples, trigonometric interpolation.

    Derivatives of any order come from spectral differentiation, so
    periodicity is exact by construction.
    """

    family = "sampled"
    closed = True
    max_derivative_order = None

    def __init__(self, samples):
        samples = _as_points(samples, "samples")
        if len(samples) < 8:
            raise InvalidParameterError("sampled curves need at least 8 samples")
        m = len(samples)
        coeffs = np.fft.fft(samples, axis=0) / m
        freqs = np.fft.fftfreq(m, d=1.0 / m)
        if m % 2 == 0:
            # Drop the Nyquist mode: its derivative is not well defined by
            # the samples alone, and it is at round-off level for smooth data.
            coeffs[m // 2] = 0.0
        self._coeffs = coeffs
        self._freqs = freqs

    def position(self, s):
        return self._evaluate(s, 0)

    def derivative(self, s, order):
        return self._evaluate(s, order)

    def _evaluate(self, s, order):
        phase = np.exp(2j * np.pi * self._freqs * float(s))
        weight = (2j * np.pi * self._freqs) ** order if order else 1.0
        return np.real((self._coeffs * (weight * phase)[:, None]).sum(axis=0))


class PerturbedCircleCurve(SampledCurve):
    """Ring deformed by a circumferential displacement, inextensibly.

    With theta = 2*pi*s the centre-line is
        r = R (1 - eps*u(theta)) (cos(theta + eps*w), sin(theta + eps*w), 0),
    where u = w' + eps*(-w'^2 + w''^2/2) keeps arc length fixed to the
    retained order.  Derivatives are spectral on a dense sample of the
    exact formula, which is accurate to round-off for smooth w.
    """

    family = "perturbed-circle"

    def __init__(self, n, pert, samples=256):
        if n < 3:
            raise InvalidParameterError("perturbed-circle family needs n >= 3")
        self.n = int(n)
        self.pert = pert
        self.radius = ring_radius(n)
        m = max(int(samples), 16 * (len(pert.cos_coeffs) + 1))
        s = np.arange(m) / m
        super().__init__(perturbed_ring_positions(n, pert, s))


def perturbed_ring_positions(n, pert, s):
    """Exact evaluation of the perturbed-ring ansatz at parameters s."""
    R = ring_radius(n)
    theta = 2.0 * np.pi * np.asarray(s, dtype=float)
    e = pert.epsilon
    u = pert.radial_displacement(theta)
    phi = theta + e * pert.w(theta)
    radial = R * (1.0 - e * u)
    return np.column_stack([radial * np.cos(phi), radial * np.sin(phi), np.zeros_like(phi)])


def make_curve(family, **params):
    """Construct a ContinuumCurve of the given family.

    Families: "straight"; "circle" (n); "perturbed-circle" (n, pert);
    "sampled" (samples).
    """
    if family == "straight":
        return StraightCurve()
    if family == "circle":
        return CircleCurve(params["n"])
    if family == "perturbed-circle":
        return PerturbedCircleCurve(params["n"], params["pert"],
                                    params.get("samples", 256))
    if family == "sampled":
        return SampledCurve(params["samples"])
    raise InvalidParameterError(f"unknown curve family {family!r}")


def build_straight_chain(n):
    """n+1 magnets equispaced on the x-axis, moments along +x."""
    if n < 1:
        raise InvalidParameterError("straight chain needs n >= 1")
    i = np.arange(n + 1)
    positions = np.column_stack([i / n, np.zeros(n + 1), np.zeros(n + 1)])
    moments = np.tile([1.0, 0.0, 0.0], (n + 1, 1))
    return ChainConfig(n, "open", positions, moments)


def build_circular_ring(n):
    """n magnets on the circle of touching spheres, tangential moments."""
    if n < 3:
        raise InvalidParameterError("ring needs n >= 3")
    s = np.arange(n) / n
    phi = 2.0 * np.pi * s
    R = ring_radius(n)
    positions = np.column_stack([R * np.cos(phi), R * np.sin(phi), np.zeros(n)])
    moments = np.column_stack([-np.sin(phi), np.cos(phi), np.zeros(n)])
    return ChainConfig(n, "ring", positions, moments)


def _project_ring_gaps(positions, n, tol=PROJECTION_TOL, max_iter=50):
    """Minimal-norm Newton projection onto the cyclic gap constraints.

    Solves ||p_{i+1} - p_i|| = 1/n for all i via the KKT system
    J J^T lam = -residual, step = J^T lam, where J is the constraint
    Jacobian; J J^T is cyclic tridiagonal in the chord unit vectors.
    """
    p = positions.copy()
    target = 1.0 / n
    for _ in range(max_iter):
        chords = np.roll(p, -1, axis=0) - p
        lengths = np.linalg.norm(chords, axis=1)
        residual = lengths - target
        if np.max(np.abs(residual)) < tol:
            return p
        units = chords / lengths[:, None]
        overlap = np.einsum("ij,ij->i", units, np.roll(units, -1, axis=0))
        jjt = 2.0 * np.eye(n)
        idx = np.arange(n)
        jjt[idx, (idx + 1) % n] = -overlap
        jjt[(idx + 1) % n, idx] = -overlap
        lam = np.linalg.solve(jjt, -residual)
        # step = J^T lam: row i contributes -u_i at i and +u_i at i+1
        step = np.zeros_like(p)
        contrib = lam[:, None] * units
        step -= contrib
        step += np.roll(contrib, 1, axis=0)
        p += step
    chords = np.roll(p, -1, axis=0) - p
    residual = np.max(np.abs(np.linalg.norm(chords, axis=1) - target))
    raise ConstraintFailureError(
        f"gap projection stalled at residual {residual:.3e}", residual=residual)


def build_perturbed_ring(n, pert):
    """Discrete ring following the perturbed-circle ansatz.

    Positions are projected onto the exact gap constraints; moments are
    the normalized averages of the two adjacent chords.
    """
    if n < 3:
        raise InvalidParameterError("ring needs n >= 3")
    s = np.arange(n) / n
    positions = perturbed_ring_positions(n, pert, s)
    positions = _project_ring_gaps(positions, n)
    chords = np.roll(positions, -1, axis=0) - positions
    units = chords / np.linalg.norm(chords, axis=1)[:, None]
    tangents = units + np.roll(units, 1, axis=0)
    moments = tangents / np.linalg.norm(tangents, axis=1)[:, None]
    return ChainConfig(n, "ring", positions, moments)


@dataclass(frozen=True)
class ValidationReport:
    """Geometric diagnostics for a chain configuration."""

    max_gap_deviation: float
    min_nonneighbour_distance: float
    overlap: bool
    global_radius: float
    curvature_flag: bool


def _circumradii(p, triples):
    i, j, k = triples
    a = np.linalg.norm(p[j] - p[k], axis=1)
    b = np.linalg.norm(p[i] - p[k], axis=1)
    c = np.linalg.norm(p[i] - p[j], axis=1)
    cross = np.cross(p[j] - p[i], p[k] - p[i])
    area = 0.5 * np.linalg.norm(cross, axis=1)
    radii = np.full(len(a), np.inf)
    ok = area > 1e-14
    radii[ok] = a[ok] * b[ok] * c[ok] / (4.0 * area[ok])
    return radii


def validate_chain(config, triple_samples=100_000, rng_seed=0):
    """Report gap residuals, overlaps, and the global radius of curvature.

    The global radius is the minimum circumradius over point triples (all
    triples for small chains, a seeded random sample for large ones); the
    curvature flag is raised when it drops below three sphere diameters.
    """
    p = config.positions
    m = len(p)
    n = config.n
    gaps = chain_gaps(p, config.topology)
    max_gap_dev = float(np.max(np.abs(gaps - 1.0 / n)))

    dists = np.linalg.norm(p[:, None, :] - p[None, :, :], axis=2)
    neighbour = np.zeros((m, m), dtype=bool)
    idx = np.arange(m - 1)
    neighbour[idx, idx + 1] = neighbour[idx + 1, idx] = True
    if config.topology == "ring":
        neighbour[0, m - 1] = neighbour[m - 1, 0] = True
    np.fill_diagonal(neighbour, True)
    nonneighbour = dists[~neighbour]
    min_dist = float(nonneighbour.min()) if nonneighbour.size else np.inf
    overlap = bool(min_dist < (1.0 - 1e-9) / n)

    if m < 3:
        global_radius = np.inf
    elif m <= 64:
        iu = np.array([(i, j, k) for i in range(m)
                       for j in range(i + 1, m) for k in range(j + 1, m)]).T
        global_radius = float(np.min(_circumradii(p, iu)))
    else:
        rng = np.random.default_rng(rng_seed)
        trip = rng.integers(0, m, size=(triple_samples, 3))
        trip = trip[(trip[:, 0] != trip[:, 1]) & (trip[:, 1] != trip[:, 2])
                    & (trip[:, 0] != trip[:, 2])]
        global_radius = float(np.min(_circumradii(p, trip.T)))

    return ValidationReport(
        max_gap_deviation=max_gap_dev,
        min_nonneighbour_distance=min_dist,
        overlap=overlap,
        global_radius=global_radius,
        curvature_flag=bool(global_radius < 3.0 / n),
    )


def write_chain_csv(config, path):
    """Serialize a configuration as CSV rows i,x,y,z,mx,my,mz."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["i", "x", "y", "z", "mx", "my", "mz"])
        for i, (pos, mom) in enumerate(zip(config.positions, config.moments)):
            writer.writerow([i] + [f"{v:.17g}" for v in (*pos, *mom)])


def read_chain_csv(path, topology):
    """Load a configuration written by write_chain_csv."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["i", "x", "y", "z", "mx", "my", "mz"]:
            raise InvalidParameterError(f"unexpected CSV header {header}")
        for row in reader:
            rows.append([float(v) for v in row[1:]])
    data = np.asarray(rows)
    n = len(data) - 1 if topology == "open" else len(data)
    return ChainConfig(n, topology, data[:, :3], data[:, 3:])
