"""Truncated joint Hilbert space (atom x Fock) and the dense operator algebra on it.

Basis ordering: the flattened index of |level, n> is level_ordinal*(n_max+1) + n
with level ordinals g=0, e=1, f=2.  All operators are dense complex matrices and
all energies are expressed in units of the cavity frequency (hbar = 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm as _scipy_expm

ATOM_LEVELS = ("g", "e", "f")

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class SpaceDescriptor:
    """Truncated atom (x) Fock product space.

    n_max is the largest retained photon number; atom_levels is 2 (g, e) or
    3 (g, e, f).
    """

    n_max: int
    atom_levels: int

    @property
    def n_photon(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return self.atom_levels * (self.n_max + 1)

    @property
    def levels(self) -> tuple[str, ...]:
        return ATOM_LEVELS[: self.atom_levels]

    def level_ordinal(self, level: str) -> int:
        if level not in self.levels:
            raise ValueError(
                f"level {level!r} not available in a {self.atom_levels}-level space"
            )
        return ATOM_LEVELS.index(level)

    def index(self, level: str, photons: int) -> int:
        """Flattened basis index of |level, photons>."""
        if not 0 <= photons <= self.n_max:
            raise ValueError(f"photon number {photons} outside [0, {self.n_max}]")
        return self.level_ordinal(level) * self.n_photon + photons

    def level_photon(self, index: int) -> tuple[str, int]:
        """Inverse of index(): basis label (level, photons)."""
        if not 0 <= index < self.dim:
            raise ValueError(f"index {index} outside [0, {self.dim})")
        return ATOM_LEVELS[index // self.n_photon], index % self.n_photon

    def basis_state(self, level: str, photons: int) -> np.ndarray:
        """Unit vector for the basis ket |level, photons>."""
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(level, photons)] = 1.0
        return v


def make_space(n_max: int, atom_levels: int = 3) -> SpaceDescriptor:
    """Construct the truncated joint space descriptor.

    n_max must be >= 1; atom_levels must be 2 or 3.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if atom_levels not in (2, 3):
        raise ValueError(f"atom_levels must be 2 or 3, got {atom_levels}")
    return SpaceDescriptor(n_max=n_max, atom_levels=atom_levels)


def annihilation(space: SpaceDescriptor) -> np.ndarray:
    """Photon annihilation operator: <level, n-1| a |level, n> = sqrt(n)."""
    a_fock = np.zeros((space.n_photon, space.n_photon), dtype=complex)
    for n in range(1, space.n_photon):
        a_fock[n - 1, n] = np.sqrt(n)
    return np.kron(np.eye(space.atom_levels), a_fock)


def number_operator(space: SpaceDescriptor) -> np.ndarray:
    """Photon number operator a^dag a (diagonal)."""
    a = annihilation(space)
    return a.conj().T @ a


def atomic_op(space: SpaceDescriptor, bra_level: str, ket_level: str) -> np.ndarray:
    """Atomic transition operator |bra_level><ket_level| (x) identity on the Fock factor."""
    proj = np.zeros((space.atom_levels, space.atom_levels), dtype=complex)
    proj[space.level_ordinal(bra_level), space.level_ordinal(ket_level)] = 1.0
    return np.kron(proj, np.eye(space.n_photon))


def matrix_exponential(m: np.ndarray, scale: complex = 1.0) -> np.ndarray:
    """exp(scale * m) via scaling-and-squaring; unitary to ~1e-13 for anti-Hermitian arguments."""
    m = np.asarray(m, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    return _scipy_expm(scale * m)


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest elementwise deviation |m - m^dag|."""
    return float(np.max(np.abs(m - m.conj().T)))


def require_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> None:
    defect = hermiticity_defect(m)
    if defect > tol * max(1.0, float(np.max(np.abs(m)))):
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")


def eigh(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Dense Hermitian eigendecomposition, the exact-diagonalization oracle.

    Returns (eigenvalues ascending, eigenvectors as columns of a unitary).
    Rejects non-Hermitian input.
    """
    m = np.asarray(m, dtype=complex)
    require_hermitian(m)
    w, v = np.linalg.eigh(m)
    return w, v
