"""Site-basis electronic Hamiltonians: construction, spectra, pathways.

The electronic model is an N-site single-excitation Hamiltonian
H = sum_j e_j |j><j| + sum_{i<j} V_ij (|i><j| + |j><i|), all entries in
cm^-1.  Only energy differences matter for the dynamics; absolute site
energies are a gauge choice.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, MissingDisorderSpec, ShapeError, ValidationError

# Plausible single-complex parameter ranges (cm^-1); violations warn only.
SITE_SHIFT_RANGE = (10.0, 500.0)
COUPLING_RANGE = (10.0, 122.0)


class ParameterRangeWarning(UserWarning):
    """Model parameter outside the plausible light-harvesting range."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ExcitonModel:
    """Validated site energies and couplings, optionally with disorder."""

    site_energies: np.ndarray
    couplings: np.ndarray
    disorder_sigma: np.ndarray | None = None

    @property
    def n_sites(self) -> int:
        return self.site_energies.shape[0]

    @property
    def hamiltonian(self) -> np.ndarray:
        return np.diag(self.site_energies) + self.couplings

    def shifted(self, delta: np.ndarray) -> "ExcitonModel":
        return ExcitonModel(
            _readonly(self.site_energies + delta), self.couplings, self.disorder_sigma
        )


def build_model(
    site_energies: Sequence[float],
    couplings: np.ndarray | Sequence[tuple[int, int, float]],
    disorder_sigma: float | Sequence[float] | None = None,
) -> ExcitonModel:
    """Build and validate an :class:`ExcitonModel`.

    ``couplings`` is either a full symmetric matrix or an iterable of
    ``(i, j, value)`` upper-triangle entries (0-based).  Entries outside
    the plausible ranges trigger :class:`ParameterRangeWarning`; genuine
    structural problems raise.
    """
    energies = np.asarray(site_energies, dtype=float)
    if energies.ndim != 1 or energies.size < 1:
        raise ShapeError("site_energies must be a non-empty 1-d sequence")
    n = energies.size

    raw = np.asarray(couplings, dtype=float) if len(couplings) else np.zeros((0, 3))
    if raw.ndim == 2 and raw.shape == (n, n) and np.allclose(raw, raw.T, atol=1e-12):
        if np.any(np.abs(np.diag(raw)) > 1e-12):
            raise ValidationError("coupling matrix has nonzero diagonal")
        v = 0.5 * (raw + raw.T)
        np.fill_diagonal(v, 0.0)
    elif raw.ndim == 2 and raw.shape[1] == 3:
        v = np.zeros((n, n))
        for i, j, value in couplings:
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise ShapeError(f"coupling index pair ({i}, {j}) invalid for n={n}")
            v[i, j] = v[j, i] = float(value)
    elif raw.ndim == 2 and raw.shape == (n, n):
        raise ValidationError("coupling matrix is not symmetric")
    else:
        raise ShapeError(
            f"couplings must be an ({n}, {n}) symmetric matrix or (i, j, value) rows"
        )

    sigma = None
    if disorder_sigma is not None:
        sigma = np.broadcast_to(np.asarray(disorder_sigma, dtype=float), (n,)).copy()
        if np.any(sigma < 0.0):
            raise ValidationError("disorder sigma must be nonnegative")

    _warn_out_of_range(energies, v)
    return ExcitonModel(
        _readonly(energies), _readonly(v), _readonly(sigma) if sigma is not None else None
    )


def _warn_out_of_range(energies: np.ndarray, v: np.ndarray) -> None:
    n = energies.size
    lo, hi = SITE_SHIFT_RANGE
    clo, chi = COUPLING_RANGE
    bad_shift, bad_coupling = [], []
    for i in range(n):
        for j in range(i + 1, n):
            gap = abs(energies[i] - energies[j])
            if not lo <= gap <= hi:
                bad_shift.append((i, j, gap))
            if v[i, j] != 0.0 and not clo <= abs(v[i, j]) <= chi:
                bad_coupling.append((i, j, v[i, j]))
    if bad_shift:
        warnings.warn(
            f"{len(bad_shift)} site-energy difference(s) outside "
            f"[{lo}, {hi}] cm^-1, e.g. sites {bad_shift[0][:2]}: {bad_shift[0][2]:.1f}",
            ParameterRangeWarning,
            stacklevel=3,
        )
    if bad_coupling:
        warnings.warn(
            f"{len(bad_coupling)} coupling(s) outside [{clo}, {chi}] cm^-1, "
            f"e.g. sites {bad_coupling[0][:2]}: {bad_coupling[0][2]:.1f}",
            ParameterRangeWarning,
            stacklevel=3,
        )


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenpairs of H_el; ``vectors[j, M]`` is <j|M>."""

    energies: np.ndarray
    vectors: np.ndarray

    @property
    def n_states(self) -> int:
        return self.energies.shape[0]

    def gap(self, m: int, n: int) -> float:
        return self.energies[m] - self.energies[n]

    def to_eigenbasis(self, site_matrix: np.ndarray) -> np.ndarray:
        return self.vectors.T.conj() @ site_matrix @ self.vectors

    def to_site_basis(self, eigen_matrix: np.ndarray) -> np.ndarray:
        return self.vectors @ eigen_matrix @ self.vectors.T.conj()


def _jacobi_sweeps(a: np.ndarray, tol: float, max_sweeps: int = 60):
    """Cyclic Jacobi rotations on a symmetric matrix, in place."""
    n = a.shape[0]
    vecs = np.eye(n)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2) * 2.0)
        if off <= tol:
            return vecs
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tol / (n * n):
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                a[:, [p, q]] = a[:, [p, q]] @ rot
                a[[p, q], :] = rot.T @ a[[p, q], :]
                a[p, q] = a[q, p] = 0.0
                vecs[:, [p, q]] = vecs[:, [p, q]] @ rot
    raise ConvergenceError(f"Jacobi did not reach off-norm {tol} in {max_sweeps} sweeps")


def eigendecompose(model: ExcitonModel) -> EigenSystem:
    """Full spectrum of H_el via cyclic Jacobi rotations.

    The trace mean is split off first (a pure gauge shift), which keeps
    the rotation tolerance meaningful for absolute site energies around
    10^4 cm^-1.  Ties between degenerate eigenvalues are broken by the
    site index of the dominant component, and the dominant component of
    every vector is made positive, so state labels are reproducible.
    """
    h = model.hamiltonian
    if h.shape[0] > 64:
        raise ShapeError("eigendecompose supports up to 64 sites")
    shift = np.trace(h) / h.shape[0]
    a = h - shift * np.eye(h.shape[0])
    tol = 1e-13 * max(1.0, float(np.linalg.norm(a)))
    vecs = _jacobi_sweeps(a.copy(), tol)
    d = np.einsum("ji,jk,ki->i", vecs, a, vecs)  # Rayleigh quotients of the shifted H
    order = _stable_order(d, vecs)
    energies = d[order] + shift
    vectors = vecs[:, order]
    # sign convention: dominant site amplitude positive
    dominant = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[dominant, np.arange(vectors.shape[1])])
    signs[signs == 0.0] = 1.0
    return EigenSystem(_readonly(energies), _readonly(vectors * signs))


def _stable_order(d: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    order = np.argsort(d, kind="stable")
    scale = max(1.0, float(np.max(np.abs(d))))
    tie_tol = 1e-9 * scale
    # reorder near-degenerate groups by dominant-site index
    i = 0
    order = list(order)
    while i < len(order):
        j = i + 1
        while j < len(order) and d[order[j]] - d[order[i]] <= tie_tol:
            j += 1
        if j - i > 1:
            order[i:j] = sorted(order[i:j], key=lambda k: int(np.argmax(np.abs(vecs[:, k]))))
        i = j
    return np.array(order)


def gamma_factor(eig: EigenSystem, m: int, n: int) -> float:
    """Basis-transformation overlap sum_j |<M|j>|^2 |<j|N>|^2."""
    k = eig.n_states
    if not (0 <= m < k and 0 <= n < k):
        raise IndexError(f"state indices ({m}, {n}) out of range for {k} states")
    return float(np.sum(eig.vectors[:, m] ** 2 * eig.vectors[:, n] ** 2))


SpectralDensityLike = Callable[[float], float]


@dataclass(frozen=True)
class Pathway:
    """One downward relaxation channel between eigenstates."""

    from_state: int
    to_state: int
    gap_cm1: float
    weight_cm1: float


def _per_site_weight(
    eig: EigenSystem,
    sd_per_site: SpectralDensityLike | Sequence[SpectralDensityLike],
    m: int,
    n: int,
    omega: float,
) -> float:
    overlaps = eig.vectors[:, m] ** 2 * eig.vectors[:, n] ** 2
    if callable(sd_per_site):
        return float(np.sum(overlaps)) * float(sd_per_site(omega))
    values = np.array([float(sd(omega)) for sd in sd_per_site])
    if values.size != eig.n_states:
        raise ShapeError("need one spectral density per site")
    return float(overlaps @ values)


def pathways(
    eig: EigenSystem,
    sd_per_site: SpectralDensityLike | Sequence[SpectralDensityLike],
    threshold_cm1: float,
) -> list[Pathway]:
    """All downward transitions with weight gamma_MN * J(omega_MN) >= threshold.

    Returned sorted by descending weight.  ``sd_per_site`` is a single
    callable shared by all sites or one callable per site.
    """
    if threshold_cm1 < 0.0:
        raise ValueError("threshold must be nonnegative")
    found = []
    for m in range(eig.n_states):
        for n in range(eig.n_states):
            gap = eig.gap(m, n)
            if gap <= 0.0:
                continue
            weight = _per_site_weight(eig, sd_per_site, m, n, gap)
            if weight >= threshold_cm1:
                found.append(Pathway(m, n, gap, weight))
    found.sort(key=lambda p: (-p.weight_cm1, p.from_state, p.to_state))
    return found


def sample_disorder(model: ExcitonModel, seed: int) -> ExcitonModel:
    """Draw one static-disorder realization of the site energies."""
    if model.disorder_sigma is None:
        raise MissingDisorderSpec("model carries no disorder sigma")
    rng = np.random.default_rng(seed)
    return model.shifted(rng.normal(0.0, model.disorder_sigma))
