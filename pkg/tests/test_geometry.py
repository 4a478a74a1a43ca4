"""Geometry: chain builders, curves, perturbations, validation, CSV I/O."""

import math

import numpy as np
import pytest

from magchain.errors import ConstraintFailureError, InvalidParameterError
from magchain.geometry import (ChainConfig, MagnetSpec, RingPerturbation,
                               build_circular_ring, build_perturbed_ring,
                               build_straight_chain, chain_gaps, make_curve,
                               read_chain_csv, ring_radius, validate_chain,
                               write_chain_csv)


class TestMagnetSpec:
    def test_defaults(self):
        spec = MagnetSpec(a=1e-3, B=1.0, rho=7500.0)
        assert spec.mu0 == pytest.approx(4e-7 * math.pi)

    @pytest.mark.parametrize("field", ["a", "B", "rho"])
    def test_rejects_nonpositive(self, field):
        kwargs = {"a": 1e-3, "B": 1.0, "rho": 7500.0}
        kwargs[field] = 0.0
        with pytest.raises(InvalidParameterError):
            MagnetSpec(**kwargs)


class TestChainBuilders:
    def test_straight_chain_gaps_exact(self):
        chain = build_straight_chain(16)
        gaps = chain_gaps(chain.positions, "open")
        assert np.allclose(gaps, 1.0 / 16, rtol=0, atol=1e-15)

    def test_straight_chain_moments_along_axis(self):
        chain = build_straight_chain(8)
        span = chain.positions[-1] - chain.positions[0]
        axis = span / np.linalg.norm(span)
        assert np.allclose(np.abs(chain.moments @ axis), 1.0, atol=1e-14)

    def test_ring_radius_formula(self):
        n = 24
        assert ring_radius(n) == pytest.approx(
            (1.0 / n) / (2.0 * math.sin(math.pi / n)), rel=1e-15)

    def test_ring_gaps_exact(self):
        ring = build_circular_ring(24)
        gaps = chain_gaps(ring.positions, "ring")
        assert gaps.shape == (24,)  # closed: wrap-around gap included
        assert np.allclose(gaps, 1.0 / 24, rtol=1e-13)

    def test_ring_moments_tangential(self):
        ring = build_circular_ring(12)
        radial = ring.positions / np.linalg.norm(ring.positions, axis=1)[:, None]
        assert np.max(np.abs(np.einsum("ij,ij->i", ring.moments, radial))) < 1e-12

    def test_chain_config_rejects_bad_moments(self):
        chain = build_straight_chain(4)
        bad = chain.moments * 1.5
        with pytest.raises(InvalidParameterError):
            ChainConfig(4, "open", chain.positions, bad)

    def test_chain_config_rejects_bad_gaps(self):
        chain = build_straight_chain(4)
        pos = chain.positions.copy()
        pos[1] += np.array([0.01, 0.0, 0.0])
        with pytest.raises(InvalidParameterError):
            ChainConfig(4, "open", pos, chain.moments)

    def test_chain_config_rejects_bad_topology(self):
        chain = build_straight_chain(4)
        with pytest.raises(InvalidParameterError):
            ChainConfig(4, "spiral", chain.positions, chain.moments)

    def test_arrays_are_frozen(self):
        chain = build_straight_chain(4)
        with pytest.raises(ValueError):
            chain.positions[0, 0] = 5.0

    def test_counts(self):
        assert build_straight_chain(10).count == 11
        assert build_circular_ring(10).count == 10


class TestRingPerturbation:
    def test_single_mode_derivative_ladder(self):
        pert = RingPerturbation.single_mode(k=3, epsilon=1e-3)
        theta = np.linspace(0.0, 2.0 * math.pi, 17)
        assert np.allclose(pert.w(theta, order=2), -9.0 * pert.w(theta, order=0),
                           atol=1e-13)

    def test_sin_phase(self):
        pert = RingPerturbation.single_mode(k=2, epsilon=1e-3, amplitude=0.5,
                                            phase="sin")
        theta = np.linspace(0.0, 2.0 * math.pi, 9)
        assert np.allclose(pert.w(theta), 0.5 * np.sin(2.0 * theta), atol=1e-14)

    def test_radial_displacement_leading_order(self):
        pert = RingPerturbation.single_mode(k=2, epsilon=1e-6)
        theta = np.linspace(0.0, 2.0 * math.pi, 33)
        u = pert.radial_displacement(theta)
        assert np.allclose(u, pert.w(theta, 1), atol=1e-5)

    def test_negative_epsilon_rejected(self):
        with pytest.raises(InvalidParameterError):
            RingPerturbation.single_mode(k=2, epsilon=-1.0)

    def test_zero_epsilon_matches_circle(self):
        n = 20
        pert = RingPerturbation.single_mode(k=2, epsilon=0.0)
        curve = make_curve("perturbed-circle", n=n, pert=pert)
        circle = make_curve("circle", n=n)
        for s in (0.0, 0.13, 0.5, 0.77):
            assert np.allclose(curve.position(s), circle.position(s), atol=1e-12)
            assert np.allclose(curve.derivative(s, 1), circle.derivative(s, 1),
                               atol=1e-10)


class TestContinuumCurves:
    def test_straight_curve_moment(self):
        curve = make_curve("straight")
        assert np.allclose(curve.moment(0.3), [1.0, 0.0, 0.0], atol=1e-15)
        assert np.allclose(curve.moment(0.3, order=1), 0.0, atol=1e-15)

    def test_circle_constant_speed(self):
        n = 32
        curve = make_curve("circle", n=n)
        speeds = [np.linalg.norm(curve.derivative(s, 1))
                  for s in np.linspace(0.0, 1.0, 11)]
        assert np.allclose(speeds, 2.0 * math.pi * ring_radius(n), rtol=1e-14)
        # near-unit speed: deviation is O(n^-2)
        assert abs(speeds[0] - 1.0) < 2.0 / n**2

    def test_circle_moment_second_derivative(self):
        # the unit tangent of a circle satisfies m'' = -(2 pi)^2 m
        curve = make_curve("circle", n=16)
        m0 = curve.moment(0.4, order=0)
        m2 = curve.moment(0.4, order=2)
        assert np.allclose(m2, -(2.0 * math.pi) ** 2 * m0, rtol=1e-10)

    def test_sampled_curve_reproduces_ansatz(self):
        # trig interpolation of band-limited samples is exact below Nyquist
        n = 20
        pert = RingPerturbation.single_mode(k=3, epsilon=1e-2, amplitude=0.7)
        curve = make_curve("perturbed-circle", n=n, pert=pert)
        R = ring_radius(n)
        for s in (0.05, 0.31, 0.62):
            theta = 2.0 * math.pi * s
            w = float(pert.w(theta))
            u = float(pert.radial_displacement(theta))
            expected = R * (1.0 - pert.epsilon * u) * np.array([
                math.cos(theta + pert.epsilon * w),
                math.sin(theta + pert.epsilon * w), 0.0])
            assert np.allclose(curve.position(s), expected, atol=1e-12)

    def test_sampled_curve_derivative_vs_finite_difference(self):
        pert = RingPerturbation.single_mode(k=2, epsilon=1e-2)
        curve = make_curve("perturbed-circle", n=24, pert=pert)
        s, h = 0.21, 1e-6
        fd = (curve.position(s + h) - curve.position(s - h)) / (2.0 * h)
        assert np.allclose(curve.derivative(s, 1), fd, rtol=1e-7, atol=1e-9)

    def test_unknown_family_raises(self):
        with pytest.raises(InvalidParameterError):
            make_curve("helix")


class TestPerturbedRingBuilder:
    def test_gaps_restored_after_projection(self):
        pert = RingPerturbation.single_mode(k=2, epsilon=5e-3)
        ring = build_perturbed_ring(40, pert)
        assert np.allclose(chain_gaps(ring.positions, "ring"), 1.0 / 40,
                           rtol=1e-10)

    def test_moments_follow_chords(self):
        pert = RingPerturbation.single_mode(k=3, epsilon=2e-3)
        ring = build_perturbed_ring(30, pert)
        chords = np.roll(ring.positions, -1, axis=0) - ring.positions
        units = chords / np.linalg.norm(chords, axis=1)[:, None]
        cosang = np.einsum("ij,ij->i", ring.moments, units)
        assert np.min(cosang) > 0.99

    def test_extreme_perturbation_fails_or_projects(self):
        pert = RingPerturbation.single_mode(k=2, epsilon=0.8)
        try:
            ring = build_perturbed_ring(12, pert)
        except (ConstraintFailureError, InvalidParameterError):
            return
        assert np.allclose(chain_gaps(ring.positions, "ring"), 1.0 / 12,
                           rtol=1e-9)


class TestValidation:
    def test_straight_chain_clean(self):
        report = validate_chain(build_straight_chain(12))
        assert not report.overlap
        assert not report.curvature_flag
        assert math.isinf(report.global_radius)
        assert report.max_gap_deviation < 1e-14

    def test_ring_radius_reported(self):
        n = 30
        report = validate_chain(build_circular_ring(n))
        assert not report.overlap
        assert report.global_radius == pytest.approx(ring_radius(n), rel=1e-9)
        assert not report.curvature_flag  # 1/(2 pi) > 3/30

    def test_tight_ring_curvature_flag(self):
        # a 12-ring has radius ~1/(2 pi) < 3 diameters = 3/12
        report = validate_chain(build_circular_ring(12))
        assert report.curvature_flag

    def test_overlap_detected(self):
        n = 8
        chain = build_straight_chain(n)
        pos = chain.positions.copy()
        # fold the far end back onto the start
        pos[-1] = pos[0] + np.array([1e-4, 0.0, 0.0])
        cfg = ChainConfig.__new__(ChainConfig)
        object.__setattr__(cfg, "n", n)
        object.__setattr__(cfg, "topology", "open")
        object.__setattr__(cfg, "positions", pos)
        object.__setattr__(cfg, "moments", chain.moments)
        report = validate_chain(cfg)
        assert report.overlap

    def test_large_chain_sampled_triples(self):
        report = validate_chain(build_circular_ring(80))
        assert report.global_radius == pytest.approx(ring_radius(80), rel=1e-6)


class TestChainCsv:
    def test_round_trip(self, tmp_path):
        ring = build_circular_ring(10)
        path = tmp_path / "ring.csv"
        write_chain_csv(ring, path)
        back = read_chain_csv(path, topology="ring")
        assert back.n == 10
        assert np.array_equal(back.positions, ring.positions)
        assert np.array_equal(back.moments, ring.moments)

    def test_open_round_trip(self, tmp_path):
        chain = build_straight_chain(6)
        path = tmp_path / "chain.csv"
        write_chain_csv(chain, path)
        back = read_chain_csv(path, topology="open")
        assert back.n == 6
        assert np.array_equal(back.positions, chain.positions)

    def test_header_schema(self, tmp_path):
        path = tmp_path / "chain.csv"
        write_chain_csv(build_straight_chain(4), path)
        header = path.read_text().splitlines()[0]
        assert header == "i,x,y,z,mx,my,mz"

    def test_rejects_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n")
        with pytest.raises(InvalidParameterError):
            read_chain_csv(path, topology="open")
