"""Star-to-chain mapping of bath oscillators.

A set of modes coupled in parallel to one site (a "star") is unitarily
equivalent to a nearest-neighbor chain whose head is the only mode the
site touches.  The map is a Lanczos tridiagonalization of diag(omega_k)
started from the normalized coupling vector; the system-facing spectral
weight is preserved exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = ["BathStar", "BathChain", "to_chain", "chain_spectral_check"]


@dataclass(frozen=True)
class BathStar:
    """Parallel bath modes: frequencies and per-mode system couplings (cm^-1)."""

    frequencies: np.ndarray
    couplings: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.frequencies, dtype=float)
        eta = np.asarray(self.couplings, dtype=float)
        if w.ndim != 1 or w.shape != eta.shape or w.size < 1:
            raise ValidationError("star needs matching 1-d frequency/coupling vectors")
        if np.any(w <= 0.0):
            raise ValidationError("star frequencies must be positive")
        if not np.any(eta != 0.0):
            raise ValidationError("star must couple through at least one mode")
        object.__setattr__(self, "frequencies", _frozen(w))
        object.__setattr__(self, "couplings", _frozen(eta))

    @property
    def n_modes(self) -> int:
        return self.frequencies.size


@dataclass(frozen=True)
class BathChain:
    """Nearest-neighbor equivalent: mode frequencies, couplings, head weight."""

    site_frequencies: np.ndarray
    nn_couplings: np.ndarray
    head_coupling: float

    def __post_init__(self):
        a = np.asarray(self.site_frequencies, dtype=float)
        b = np.asarray(self.nn_couplings, dtype=float)
        if a.ndim != 1 or b.shape != (max(a.size - 1, 0),):
            raise ValidationError("chain needs K site frequencies and K-1 couplings")
        if self.head_coupling < 0.0:
            raise ValidationError("head coupling must be nonnegative")
        object.__setattr__(self, "site_frequencies", _frozen(a))
        object.__setattr__(self, "nn_couplings", _frozen(b))

    @property
    def length(self) -> int:
        return self.site_frequencies.size

    def tridiagonal(self) -> np.ndarray:
        t = np.diag(self.site_frequencies)
        k = self.length
        for i in range(k - 1):
            t[i, i + 1] = t[i + 1, i] = self.nn_couplings[i]
        return t


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


def to_chain(star: BathStar) -> BathChain:
    """Lanczos tridiagonalization of diag(omega) from the coupling direction.

    Full reorthogonalization keeps the Krylov basis orthonormal for every
    practical mode count.  If the recursion terminates early (degenerate
    frequencies with linearly dependent couplings) the shorter chain is
    already exact and is returned as-is.
    """
    omega = star.frequencies
    head = float(np.linalg.norm(star.couplings))
    v = star.couplings / head
    basis = [v]
    diag, off = [], []
    scale = float(np.max(omega))
    for _ in range(star.n_modes):
        w = omega * basis[-1]
        a = float(basis[-1] @ w)
        diag.append(a)
        w = w - a * basis[-1]
        if len(basis) > 1:
            w = w - off[-1] * basis[-2]
        for prev in basis:  # full reorthogonalization, twice for safety
            w -= (prev @ w) * prev
        for prev in basis:
            w -= (prev @ w) * prev
        b = float(np.linalg.norm(w))
        if b <= 1e-12 * scale:
            break
        off.append(b)
        basis.append(w / b)
    # a trailing coupling can survive roundoff on the last pass; drop it
    off = off[: len(diag) - 1]
    return BathChain(np.array(diag), np.array(off), head)


def _lorentzian_weight_star(star: BathStar, z: np.ndarray) -> np.ndarray:
    resolvent = np.sum(
        star.couplings**2 / (z[:, None] - star.frequencies[None, :]), axis=1
    )
    return -resolvent.imag / np.pi


def _lorentzian_weight_chain(chain: BathChain, z: np.ndarray) -> np.ndarray:
    # continued fraction for the head element of (z - T)^-1, bottom-up
    g = np.zeros_like(z)
    a = chain.site_frequencies
    b = chain.nn_couplings
    for i in range(chain.length - 1, -1, -1):
        coupling2 = b[i] ** 2 * g if i < chain.length - 1 else 0.0
        g = 1.0 / (z - a[i] - coupling2)
    return -(chain.head_coupling**2) * g.imag / np.pi


def chain_spectral_check(
    star: BathStar,
    chain: BathChain,
    grid,
    broadening_cm1: float = 1.0,
) -> float:
    """Max deviation between star and chain spectral weights on a grid.

    Both sides are broadened with the same Lorentzian width, so an exact
    chain gives deviations at roundoff level.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        return 0.0
    z = grid + 1j * broadening_cm1
    return float(
        np.max(np.abs(_lorentzian_weight_star(star, z) - _lorentzian_weight_chain(chain, z)))
    )
