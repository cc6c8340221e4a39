"""Exciton-model construction, eigensolver, pathways, and disorder."""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from excisim.errors import MissingDisorderSpec, ShapeError, ValidationError
from excisim.model import (
    EigenSystem,
    ParameterRangeWarning,
    Pathway,
    build_model,
    eigendecompose,
    gamma_factor,
    pathways,
    sample_disorder,
)
from fixtures import FMO8_COUPLINGS, FMO8_ENERGIES, fmo8_model


def dimer(delta=100.0, v=50.0):
    return build_model([0.0, delta], [(0, 1, v)])


class TestBuildModel:
    def test_triples_and_matrix_agree(self):
        m1 = dimer()
        mat = np.array([[0.0, 50.0], [50.0, 0.0]])
        m2 = build_model([0.0, 100.0], mat)
        np.testing.assert_array_equal(m1.couplings, m2.couplings)
        np.testing.assert_array_equal(m1.hamiltonian, m2.hamiltonian)

    def test_hamiltonian_layout(self):
        m = dimer(100.0, 50.0)
        np.testing.assert_array_equal(
            m.hamiltonian, [[0.0, 50.0], [50.0, 100.0]]
        )

    def test_rejects_asymmetric_matrix(self):
        with pytest.raises(ValidationError):
            build_model([0.0, 100.0], np.array([[0.0, 50.0], [49.0, 0.0]]))

    def test_rejects_nonzero_diagonal(self):
        with pytest.raises(ValidationError):
            build_model([0.0, 100.0], np.array([[1.0, 50.0], [50.0, 0.0]]))

    def test_rejects_bad_index(self):
        with pytest.raises(ShapeError):
            build_model([0.0, 100.0], [(0, 2, 50.0)])
        with pytest.raises(ShapeError):
            build_model([0.0, 100.0], [(1, 1, 50.0)])

    def test_rejects_wrong_shape(self):
        with pytest.raises(ShapeError):
            build_model([0.0, 100.0], np.zeros((3, 3)))
        with pytest.raises(ShapeError):
            build_model([], [])

    def test_range_warnings(self):
        with pytest.warns(ParameterRangeWarning):
            build_model([0.0, 5.0], [(0, 1, 50.0)])  # gap below 10 cm^-1
        with pytest.warns(ParameterRangeWarning):
            build_model([0.0, 100.0], [(0, 1, 500.0)])  # coupling above 122
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            build_model([0.0, 100.0], [(0, 1, 50.0)])  # in range: silent

    def test_arrays_are_readonly(self):
        m = dimer()
        with pytest.raises(ValueError):
            m.site_energies[0] = 1.0

    def test_negative_sigma_rejected(self):
        with pytest.raises(ValidationError):
            build_model([0.0, 100.0], [(0, 1, 50.0)], disorder_sigma=-1.0)


class TestEigendecompose:
    def test_dimer_closed_form(self):
        delta, v = 100.0, 50.0
        eig = eigendecompose(dimer(delta, v))
        root = math.hypot(delta / 2.0, v)
        np.testing.assert_allclose(
            eig.energies, [delta / 2.0 - root, delta / 2.0 + root], atol=1e-12
        )
        # mixing angle: tan(2 theta) = 2V / delta
        theta = 0.5 * math.atan2(2.0 * v, delta)
        lower = eig.vectors[:, 0]
        np.testing.assert_allclose(np.abs(lower), [math.cos(theta), math.sin(theta)],
                                   atol=1e-12)

    def test_diagonal_hamiltonian(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ParameterRangeWarning)
            m = build_model([300.0, 100.0, 200.0], np.zeros((3, 3)))
        eig = eigendecompose(m)
        np.testing.assert_allclose(eig.energies, [100.0, 200.0, 300.0], atol=1e-12)
        np.testing.assert_allclose(np.abs(eig.vectors),
                                   np.eye(3)[:, [1, 2, 0]], atol=1e-12)

    def test_matches_dense_solver_random(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(2, 9))
            h = rng.normal(0.0, 100.0, (n, n))
            h = 0.5 * (h + h.T)
            energies = np.diag(h).copy()
            np.fill_diagonal(h, 0.0)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", ParameterRangeWarning)
                m = build_model(energies, 0.5 * (h + h.T))
            eig = eigendecompose(m)
            ref = np.linalg.eigvalsh(m.hamiltonian)
            np.testing.assert_allclose(eig.energies, ref, atol=1e-9)

    def test_reconstruction_fmo8(self):
        m = fmo8_model()
        eig = eigendecompose(m)
        rebuilt = eig.vectors @ np.diag(eig.energies) @ eig.vectors.T
        np.testing.assert_allclose(rebuilt, m.hamiltonian, atol=1e-9)
        ref = np.linalg.eigvalsh(m.hamiltonian)
        np.testing.assert_allclose(eig.energies, ref, atol=1e-9)

    def test_orthonormality(self):
        eig = eigendecompose(fmo8_model())
        gram = eig.vectors.T @ eig.vectors
        np.testing.assert_allclose(gram, np.eye(8), atol=1e-12)

    def test_global_shift_invariance(self):
        m = fmo8_model()
        shifted = m.shifted(np.full(8, 12000.0))
        e1 = eigendecompose(m)
        e2 = eigendecompose(shifted)
        np.testing.assert_allclose(e2.energies - e1.energies, 12000.0, atol=1e-10)
        np.testing.assert_allclose(e2.vectors, e1.vectors, atol=1e-10)

    def test_sign_convention(self):
        eig = eigendecompose(fmo8_model())
        for col in eig.vectors.T:
            assert col[np.argmax(np.abs(col))] > 0.0

    def test_degenerate_labels_stable(self):
        # two uncoupled resonant pairs: labels must follow site order
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ParameterRangeWarning)
            m = build_model([0.0, 0.0, 50.0, 50.0], np.zeros((4, 4)))
        eig = eigendecompose(m)
        assert [int(np.argmax(np.abs(c))) for c in eig.vectors.T] == [0, 1, 2, 3]

    def test_basis_round_trip(self):
        eig = eigendecompose(fmo8_model())
        rng = np.random.default_rng(3)
        a = rng.normal(size=(8, 8))
        np.testing.assert_allclose(
            eig.to_site_basis(eig.to_eigenbasis(a)), a, atol=1e-11
        )

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(2, 8))
    def test_eigh_oracle_property(self, seed, n):
        rng = np.random.default_rng(seed)
        h = rng.normal(0.0, 50.0, (n, n))
        h = 0.5 * (h + h.T)
        energies = np.diag(h).copy()
        np.fill_diagonal(h, 0.0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ParameterRangeWarning)
            m = build_model(energies, h)
        eig = eigendecompose(m)
        np.testing.assert_allclose(
            eig.energies, np.linalg.eigvalsh(m.hamiltonian), atol=1e-9
        )
        rebuilt = eig.vectors @ np.diag(eig.energies) @ eig.vectors.T
        np.testing.assert_allclose(rebuilt, m.hamiltonian, atol=1e-9)


class TestGammaFactor:
    def test_dimer_value(self):
        # gamma_01 = 2 cos^2 sin^2 for a dimer with mixing angle theta
        delta, v = 100.0, 50.0
        eig = eigendecompose(dimer(delta, v))
        theta = 0.5 * math.atan2(2.0 * v, delta)
        expected = 2.0 * (math.cos(theta) * math.sin(theta)) ** 2
        assert gamma_factor(eig, 0, 1) == pytest.approx(expected, abs=1e-12)

    def test_symmetry_and_row_sum(self):
        eig = eigendecompose(fmo8_model())
        g = np.array([[gamma_factor(eig, m, n) for n in range(8)] for m in range(8)])
        np.testing.assert_allclose(g, g.T, atol=1e-14)
        np.testing.assert_allclose(g.sum(axis=1), 1.0, atol=1e-12)
        assert np.all(g > 0.0) and np.all(g <= 1.0)

    def test_index_bounds(self):
        eig = eigendecompose(dimer())
        with pytest.raises(IndexError):
            gamma_factor(eig, 0, 2)
        with pytest.raises(IndexError):
            gamma_factor(eig, -1, 0)


def flat_sd(omega):
    return 10.0


class TestPathways:
    def test_matches_brute_force(self):
        eig = eigendecompose(fmo8_model())
        sd = lambda w: 35.0 * (w / 150.0) ** 2 * math.exp(-w / 150.0)
        got = pathways(eig, sd, 0.3)
        expected = []
        for m in range(8):
            for n in range(8):
                gap = eig.energies[m] - eig.energies[n]
                if gap > 0.0:
                    w = gamma_factor(eig, m, n) * sd(gap)
                    if w >= 0.3:
                        expected.append((m, n, gap, w))
        expected.sort(key=lambda t: (-t[3], t[0], t[1]))
        assert [(p.from_state, p.to_state) for p in got] == [
            (m, n) for m, n, *_ in expected
        ]
        np.testing.assert_allclose([p.weight_cm1 for p in got],
                                   [t[3] for t in expected], rtol=1e-14)

    def test_all_downward_and_sorted(self):
        eig = eigendecompose(fmo8_model())
        got = pathways(eig, flat_sd, 0.0)
        assert all(p.gap_cm1 > 0.0 for p in got)
        weights = [p.weight_cm1 for p in got]
        assert weights == sorted(weights, reverse=True)
        # threshold zero with a flat positive density: all n(n-1)/2 pairs
        assert len(got) == 8 * 7 // 2

    def test_threshold_monotone(self):
        eig = eigendecompose(fmo8_model())
        loose = {(p.from_state, p.to_state) for p in pathways(eig, flat_sd, 1.0)}
        tight = {(p.from_state, p.to_state) for p in pathways(eig, flat_sd, 5.0)}
        assert tight <= loose

    def test_per_site_densities(self):
        eig = eigendecompose(dimer())
        per_site = [lambda w: 4.0, lambda w: 8.0]
        (p,) = pathways(eig, per_site, 0.0)
        v0, v1 = eig.vectors[:, 1] ** 2 * eig.vectors[:, 0] ** 2
        assert p.weight_cm1 == pytest.approx(4.0 * v0 + 8.0 * v1, rel=1e-14)

    def test_negative_threshold_rejected(self):
        eig = eigendecompose(dimer())
        with pytest.raises(ValueError):
            pathways(eig, flat_sd, -1.0)


class TestDisorder:
    def model(self, sigma=60.0):
        return build_model([0.0, 100.0], [(0, 1, 50.0)], disorder_sigma=sigma)

    def test_requires_sigma(self):
        with pytest.raises(MissingDisorderSpec):
            sample_disorder(dimer(), seed=0)

    def test_seed_reproducible(self):
        m = self.model()
        a = sample_disorder(m, seed=42)
        b = sample_disorder(m, seed=42)
        np.testing.assert_array_equal(a.site_energies, b.site_energies)
        c = sample_disorder(m, seed=43)
        assert not np.array_equal(a.site_energies, c.site_energies)

    def test_couplings_untouched(self):
        m = self.model()
        a = sample_disorder(m, seed=1)
        np.testing.assert_array_equal(a.couplings, m.couplings)

    def test_zero_sigma_identity(self):
        m = self.model(sigma=0.0)
        a = sample_disorder(m, seed=5)
        np.testing.assert_array_equal(a.site_energies, m.site_energies)

    def test_moments(self):
        m = self.model(sigma=60.0)
        draws = np.array(
            [sample_disorder(m, seed=s).site_energies for s in range(4000)]
        )
        shifts = draws - m.site_energies
        assert np.abs(shifts.mean(axis=0)).max() < 3.0 * 60.0 / math.sqrt(4000)
        np.testing.assert_allclose(shifts.std(axis=0), 60.0, rtol=0.08)
