"""Two-level quantum Rabi model: Hamiltonian, exact spectrum, parity, dressed amplitudes.

The Rabi Hamiltonian kept here includes the counter-rotating interaction terms,

    H = (omega0/2)(|e><e| - |g><g|) + omega_c a^dag a
        + coupling * (a + a^dag)(|g><e| + |e><g|),

so the interacting ground state carries virtual photons.  Exact diagonalization
of this matrix is the oracle every approximation in the package is judged
against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import hilbert
from .hilbert import SpaceDescriptor

PARITY_VIOLATION_TOL = 1e-9
GROUND_GAP_TOL = 1e-10
DEGENERACY_CLUSTER_TOL = 1e-8


@dataclass(frozen=True)
class ModelParams:
    """Physical frequencies and couplings, all in units of the cavity frequency.

    omega0      bare g <-> e splitting
    coupling    atom-cavity coupling strength (lambda in the usual notation)
    omega_f     energy of the auxiliary level f
    drive_amp   classical drive strength on the e <-> f transition (Omega)
    drive_freq  classical drive frequency (omega_p)
    omega_c     cavity frequency, fixed to 1 (all inputs are ratios to it)
    """

    omega0: float
    coupling: float
    omega_f: float = 0.0
    drive_amp: float = 0.0
    drive_freq: float = 0.0
    omega_c: float = field(default=1.0)

    def __post_init__(self):
        if self.omega0 <= 0:
            raise ValueError(f"omega0 must be > 0, got {self.omega0}")
        if self.coupling < 0:
            raise ValueError(f"coupling must be >= 0, got {self.coupling}")
        if self.drive_amp < 0:
            raise ValueError(f"drive_amp must be >= 0, got {self.drive_amp}")
        if self.omega_c != 1.0:
            raise ValueError("omega_c is the unit of energy and must be 1.0")


@dataclass(frozen=True)
class SpectrumResult:
    """Exact eigendecomposition of the Rabi Hamiltonian with parity labels.

    eigenvalues are ascending; eigenvectors[:, k] is the k-th eigenvector with
    its phase fixed so the first significant component is real positive (hence
    <g,0|psi_0> > 0 for the ground state); parities[k] is +1 on the subspace
    spanned by {|g,even>, |e,odd>} and -1 on the complement.
    """

    space: SpaceDescriptor
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    parities: np.ndarray

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])


def build_h_rabi(params: ModelParams, space: SpaceDescriptor) -> np.ndarray:
    """Rabi Hamiltonian with counter-rotating terms on a two-level space."""
    if space.atom_levels != 2:
        raise ValueError(
            "the Rabi Hamiltonian lives on the two-level (g, e) space; "
            "the f level does not couple to the cavity"
        )
    a = hilbert.annihilation(space)
    sx = hilbert.atomic_op(space, "g", "e") + hilbert.atomic_op(space, "e", "g")
    sz = hilbert.atomic_op(space, "e", "e") - hilbert.atomic_op(space, "g", "g")
    h = (
        0.5 * params.omega0 * sz
        + params.omega_c * (a.conj().T @ a)
        + params.coupling * (a + a.conj().T) @ sx
    )
    return h


def parity_matrix(space: SpaceDescriptor) -> np.ndarray:
    """Photon-number parity combined with the atomic inversion.

    Built as (|g><g| - |e><e|) * (-1)^(a^dag a) so that the subspace containing
    the vacuum |g,0> has eigenvalue +1.  Commutes with the Rabi Hamiltonian.
    """
    if space.atom_levels != 2:
        raise ValueError("parity is defined on the two-level space")
    sz_flip = hilbert.atomic_op(space, "g", "g") - hilbert.atomic_op(space, "e", "e")
    signs = np.diag([(-1.0) ** n for n in range(space.n_photon)])
    return sz_flip @ np.kron(np.eye(2), signs)


def _even_mask(space: SpaceDescriptor) -> np.ndarray:
    """Boolean mask of the +1-parity basis states {|g,even>, |e,odd>}."""
    mask = np.zeros(space.dim, dtype=bool)
    for n in range(space.n_photon):
        mask[space.index("g", n)] = n % 2 == 0
        mask[space.index("e", n)] = n % 2 == 1
    return mask


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its first significant component is real positive."""
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        sig = np.flatnonzero(np.abs(col) > 1e-8 * np.max(np.abs(col)))
        pivot = col[sig[0]]
        out[:, k] = col * (np.conj(pivot) / abs(pivot))
    return out


def _purify_degenerate_clusters(
    eigenvalues: np.ndarray, vectors: np.ndarray, pi: np.ndarray
) -> np.ndarray:
    """Rotate numerically degenerate eigenvector clusters into parity eigenstates.

    Within a cluster of eigenvalues closer than DEGENERACY_CLUSTER_TOL the
    eigensolver returns an arbitrary mixture; parity and the Hamiltonian are
    simultaneously diagonalizable there, so this rotation is exact.
    """
    out = vectors.copy()
    start = 0
    for k in range(1, len(eigenvalues) + 1):
        boundary = k == len(eigenvalues) or (
            eigenvalues[k] - eigenvalues[k - 1] > DEGENERACY_CLUSTER_TOL
        )
        if boundary:
            if k - start > 1:
                block = out[:, start:k]
                pi_block = block.conj().T @ pi @ block
                _, w = np.linalg.eigh(pi_block)
                out[:, start:k] = block @ w
            start = k
    return out


def solve_spectrum(params: ModelParams, space: SpaceDescriptor) -> SpectrumResult:
    """Exact diagonalization of the Rabi Hamiltonian with parity bookkeeping."""
    h = build_h_rabi(params, space)
    w, v = hilbert.eigh(h)
    pi = parity_matrix(space)
    v = _purify_degenerate_clusters(w, v, pi)
    v = _fix_phases(v)
    spectrum = SpectrumResult(
        space=space, eigenvalues=w, eigenvectors=v, parities=np.zeros(len(w))
    )
    parities = parity_labels(spectrum)
    return SpectrumResult(space=space, eigenvalues=w, eigenvectors=v, parities=parities)


def parity_labels(spectrum: SpectrumResult) -> np.ndarray:
    """Parity label (+1 or -1) of every eigenvector from its dominant support.

    Raises if any eigenvector has weight above PARITY_VIOLATION_TOL on the
    opposite-parity basis subset; that signals a truncation or numerics bug.
    """
    mask = _even_mask(spectrum.space)
    labels = np.empty(spectrum.eigenvectors.shape[1])
    for k in range(spectrum.eigenvectors.shape[1]):
        col = spectrum.eigenvectors[:, k]
        even_w = float(np.sum(np.abs(col[mask]) ** 2))
        label = 1.0 if even_w >= 0.5 else -1.0
        opposite = col[~mask] if label > 0 else col[mask]
        violation = float(np.max(np.abs(opposite)))
        if violation >= PARITY_VIOLATION_TOL:
            raise ValueError(
                f"eigenvector {k} mixes parities (opposite-parity amplitude "
                f"{violation:.3e}); truncation or numerics bug"
            )
        labels[k] = label
    return labels


def ground_state(spectrum: SpectrumResult) -> tuple[np.ndarray, float]:
    """Dressed ground state |psi_0> (phase: <g,0|psi_0> real positive) and its energy."""
    gap = float(spectrum.eigenvalues[1] - spectrum.eigenvalues[0])
    if gap < GROUND_GAP_TOL:
        raise ValueError(f"ground level is degenerate within tolerance (gap {gap:.3e})")
    return spectrum.eigenvectors[:, 0].copy(), spectrum.ground_energy


def dressed_amplitude(spectrum: SpectrumResult, n: int, m: int = 0) -> complex:
    """Amplitude <psi_m|e,n> of the n-photon excited-atom ket in eigenstate m."""
    if not 0 <= n <= spectrum.space.n_max:
        raise ValueError(f"photon index {n} outside truncation [0, {spectrum.space.n_max}]")
    idx = spectrum.space.index("e", n)
    return complex(np.conj(spectrum.eigenvectors[idx, m]))


def dressed_amplitude_matrix(spectrum: SpectrumResult) -> np.ndarray:
    """Matrix c[n, m] = <psi_m|e,n> for all photon numbers and eigenstates."""
    nph = spectrum.space.n_photon
    rows = [spectrum.space.index("e", n) for n in range(nph)]
    return np.conj(spectrum.eigenvectors[rows, :])
