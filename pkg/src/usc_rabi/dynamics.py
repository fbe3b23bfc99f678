"""Full time-dependent Schroedinger propagation on the 3-level (x) Fock space.

The driven Hamiltonian is the Rabi model embedded in the (g, e) sector, the
bare f level at omega_f, and a classical drive drive_amp*cos(drive_freq*t)
on the e <-> f transition.  The drive is kept with its full cosine (no
rotating-wave approximation) so the fast counter-rotating ripple at strong
driving is reproduced.

The default integrator is a fourth-order commutator-free Magnus stepper:
with H_1,2 evaluated at the Gauss-Legendre nodes of the step,

    U(t+dt, t) = exp(-i dt (x1 H_1 + x2 H_2)) exp(-i dt (x2 H_1 + x1 H_2)),
    x1 = (3 - 2*sqrt(3))/12,  x2 = (3 + 2*sqrt(3))/12,

which is exactly unitary per step and keeps every sampled probability stable
to ~1e-9 under step halving at the default grid.  The second-order midpoint
exponential U = exp(-i H(t+dt/2) dt) and classical RK4 are retained as
cross-checks.  Exponentials are applied to the state by an adaptive Taylor
expansion that is exact to machine precision at the step sizes used here.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np
from scipy.signal import find_peaks

from . import hilbert
from .hilbert import SpaceDescriptor
from .polaron import PolaronParams
from .rabi_core import ModelParams, SpectrumResult

_TAYLOR_MAX_TERMS = 40
_TAYLOR_THETA = 0.5

# Gauss-Legendre nodes and the commutator-free 4th-order Magnus weights
_GAUSS_C1 = 0.5 - np.sqrt(3.0) / 6.0
_GAUSS_C2 = 0.5 + np.sqrt(3.0) / 6.0
_CF4_X1 = (3.0 - 2.0 * np.sqrt(3.0)) / 12.0
_CF4_X2 = (3.0 + 2.0 * np.sqrt(3.0)) / 12.0

METHODS = ("magnus4", "midpoint-exponential", "rk4")

DEFAULT_NORM_TOL = 1e-9
DEFAULT_STEPS_PER_DRIVE_CYCLE = 200
MIN_STEPS_PER_DRIVE_CYCLE = 50
DEFAULT_MIN_SAMPLES = 2000


class NormDriftError(RuntimeError):
    """State norm drifted beyond the configured tolerance during propagation."""


@dataclass(frozen=True)
class PropagationConfig:
    """Time grid and integrator controls (times in 1/omega_c).

    dt must resolve the drive oscillation: dt <= 2*pi/(50*drive_freq).
    """

    t_end: float
    dt: float
    sample_every: int = 1
    norm_tol: float = DEFAULT_NORM_TOL
    method: str = "magnus4"

    def __post_init__(self):
        if self.t_end <= 0 or self.dt <= 0:
            raise ValueError("t_end and dt must be positive")
        if self.sample_every < 1:
            raise ValueError("sample_every must be >= 1")
        if self.method not in METHODS:
            raise ValueError(f"unknown integration method {self.method!r}")


def default_config(params: ModelParams, t_end: float, **overrides) -> PropagationConfig:
    """Propagation defaults: dt = 2*pi/(200*drive_freq), >= 2000 samples."""
    if params.drive_freq <= 0:
        raise ValueError("default propagation grid needs drive_freq > 0")
    dt = overrides.pop("dt", None) or 2.0 * np.pi / (
        DEFAULT_STEPS_PER_DRIVE_CYCLE * params.drive_freq
    )
    n_steps = max(1, int(round(t_end / dt)))
    sample_every = overrides.pop("sample_every", None) or max(
        1, n_steps // DEFAULT_MIN_SAMPLES
    )
    return PropagationConfig(
        t_end=t_end, dt=dt, sample_every=sample_every, **overrides
    )


@dataclass(frozen=True)
class TimeSeries:
    """Sampled observables of a propagation run.

    p_ground is the overlap probability with the initial (dressed ground)
    state; parity_leak tracks the largest amplitude on the parity-forbidden
    {|g,odd>, |e,even>} basis states, which only integrator error can populate.
    """

    times: np.ndarray
    p_f1: np.ndarray
    p_f3: np.ndarray
    p_ground: np.ndarray
    norm: np.ndarray
    parity_leak: np.ndarray
    states: np.ndarray | None = None


def static_hamiltonian(params: ModelParams, space: SpaceDescriptor) -> np.ndarray:
    """Drive-free part: embedded Rabi Hamiltonian plus the f level at omega_f."""
    if space.atom_levels != 3:
        raise ValueError("the driven model lives on the 3-level space")
    a = hilbert.annihilation(space)
    sx = hilbert.atomic_op(space, "g", "e") + hilbert.atomic_op(space, "e", "g")
    sz = hilbert.atomic_op(space, "e", "e") - hilbert.atomic_op(space, "g", "g")
    return (
        0.5 * params.omega0 * sz
        + params.omega_c * (a.conj().T @ a)
        + params.coupling * (a + a.conj().T) @ sx
        + params.omega_f * hilbert.atomic_op(space, "f", "f")
    )


def drive_operator(space: SpaceDescriptor) -> np.ndarray:
    """Drive coupling |f><e| + |e><f| (unit strength)."""
    return hilbert.atomic_op(space, "f", "e") + hilbert.atomic_op(space, "e", "f")


def build_h_full(params: ModelParams, space: SpaceDescriptor, t: float) -> np.ndarray:
    """Full Hamiltonian at time t, drive amplitude drive_amp*cos(drive_freq*t)."""
    return static_hamiltonian(params, space) + (
        params.drive_amp * np.cos(params.drive_freq * t)
    ) * drive_operator(space)


def embed_ground_state(psi_two_level: np.ndarray) -> np.ndarray:
    """Map a state on the (g, e) space into the 3-level space with zero f amplitudes."""
    psi_two_level = np.asarray(psi_two_level, dtype=complex)
    if psi_two_level.ndim != 1 or len(psi_two_level) % 2 != 0:
        raise ValueError("expected a flat state vector on the two-level space")
    nph = len(psi_two_level) // 2
    out = np.zeros(3 * nph, dtype=complex)
    out[: 2 * nph] = psi_two_level
    return out


def resonance_frequency(params: ModelParams, source, n: int = 1, mode: str = "exact") -> float:
    """Drive frequency of the n-photon transfer channel.

    exact mode uses the numerical ground energy from a SpectrumResult:
    omega_f + n*omega_c - ground_energy.  approx mode (n = 1 only) replaces the
    ground energy by the transformed-frame estimate from PolaronParams.
    """
    if n % 2 == 0 or n < 1:
        raise ValueError(f"n must be a positive odd integer, got {n}")
    if mode == "exact":
        if not isinstance(source, SpectrumResult):
            raise TypeError("exact mode needs a SpectrumResult")
        return params.omega_f + n * params.omega_c - source.ground_energy
    if mode == "approx":
        if n != 1:
            raise ValueError("the approximate ground-energy bracket applies to n=1 only")
        if not isinstance(source, PolaronParams):
            raise TypeError("approx mode needs PolaronParams")
        return params.omega_f + params.omega_c - source.e_approx
    raise ValueError(f"unknown mode {mode!r}")


def _parity_forbidden_indices(space: SpaceDescriptor) -> np.ndarray:
    idx = [space.index("g", n) for n in range(1, space.n_photon, 2)]
    idx += [space.index("e", n) for n in range(0, space.n_photon, 2)]
    return np.array(sorted(idx))


def _apply_exponential(h_matvec, dt: float, psi: np.ndarray, n_sub: int) -> np.ndarray:
    """psi <- exp(-i * H * dt) psi by adaptive Taylor summation.

    H is fixed across the substeps, so substepping is exact; terms are added
    until they fall below 1e-16 of the accumulated result.
    """
    h = dt / n_sub
    for _ in range(n_sub):
        acc = psi.copy()
        term = psi
        for j in range(1, _TAYLOR_MAX_TERMS + 1):
            term = (-1j * h / j) * h_matvec(term)
            acc += term
            if np.linalg.norm(term) <= 1e-16 * np.linalg.norm(acc):
                break
        psi = acc
    return psi


def propagate(
    params: ModelParams,
    space: SpaceDescriptor,
    config: PropagationConfig,
    initial: np.ndarray,
    keep_states: bool = False,
) -> TimeSeries:
    """Propagate the driven Schroedinger equation and sample observables.

    The initial state must be normalized on the 3-level space (usually the
    embedded exact dressed ground state).  Samples are taken every
    config.sample_every steps plus the final step; aborts with NormDriftError
    if the state norm leaves 1 +- norm_tol.
    """
    if space.atom_levels != 3:
        raise ValueError("propagation runs on the 3-level space")
    initial = np.asarray(initial, dtype=complex)
    if initial.shape != (space.dim,):
        raise ValueError(f"initial state has dim {initial.shape}, expected ({space.dim},)")
    if abs(np.linalg.norm(initial) - 1.0) > 1e-9:
        raise ValueError("initial state is not normalized")
    if params.drive_freq > 0 and params.drive_amp > 0:
        dt_max = 2.0 * np.pi / (MIN_STEPS_PER_DRIVE_CYCLE * params.drive_freq)
        if config.dt > dt_max:
            raise ValueError(
                f"dt={config.dt:.4g} too coarse to resolve the drive "
                f"(need dt <= {dt_max:.4g})"
            )

    h_static = static_hamiltonian(params, space)
    nph = space.n_photon
    e_block = slice(nph, 2 * nph)
    f_block = slice(2 * nph, 3 * nph)
    idx_f1 = space.index("f", 1)
    idx_f3 = space.index("f", 3) if space.n_max >= 3 else None
    forbidden = _parity_forbidden_indices(space)

    n_steps = max(1, int(round(config.t_end / config.dt)))
    dt = config.dt
    # spectral-norm bound for the Taylor substep count
    h_norm = float(np.linalg.norm(h_static, 2)) + abs(params.drive_amp)
    n_sub = max(1, ceil(h_norm * dt / _TAYLOR_THETA))
    n_sub_half = max(1, ceil(h_norm * (dt / 2.0) / _TAYLOR_THETA))

    def matvec_at(c: float):
        def mv(x: np.ndarray) -> np.ndarray:
            y = h_static @ x
            if c != 0.0:
                y[e_block] += c * x[f_block]
                y[f_block] += c * x[e_block]
            return y

        return mv

    psi = initial.copy()
    psi0 = initial
    times, pf1, pf3, pg, norms, leaks = [], [], [], [], [], []
    states = [] if keep_states else None

    def sample(t: float):
        nrm = float(np.linalg.norm(psi))
        if abs(nrm - 1.0) > config.norm_tol:
            raise NormDriftError(
                f"norm drifted to {nrm:.12f} at t={t:.4f} "
                f"(tolerance {config.norm_tol:g}, method {config.method})"
            )
        times.append(t)
        pf1.append(abs(psi[idx_f1]) ** 2)
        pf3.append(abs(psi[idx_f3]) ** 2 if idx_f3 is not None else 0.0)
        pg.append(abs(np.vdot(psi0, psi)) ** 2)
        norms.append(nrm)
        leaks.append(float(np.max(np.abs(psi[forbidden]))))
        if states is not None:
            states.append(psi.copy())

    sample(0.0)
    t = 0.0
    for k in range(n_steps):
        if config.method == "magnus4":
            c1 = params.drive_amp * np.cos(params.drive_freq * (t + _GAUSS_C1 * dt))
            c2 = params.drive_amp * np.cos(params.drive_freq * (t + _GAUSS_C2 * dt))
            # each factor is exp(-i (dt/2) (H_static + gamma*V)) with gamma below
            psi = _apply_exponential(
                matvec_at(2.0 * (_CF4_X2 * c1 + _CF4_X1 * c2)), dt / 2.0, psi, n_sub_half
            )
            psi = _apply_exponential(
                matvec_at(2.0 * (_CF4_X1 * c1 + _CF4_X2 * c2)), dt / 2.0, psi, n_sub_half
            )
        elif config.method == "midpoint-exponential":
            c = params.drive_amp * np.cos(params.drive_freq * (t + 0.5 * dt))
            psi = _apply_exponential(matvec_at(c), dt, psi, n_sub)
        else:
            psi = _rk4_step(params, matvec_at, t, dt, psi)
        t = (k + 1) * dt
        if (k + 1) % config.sample_every == 0 or k == n_steps - 1:
            sample(t)

    return TimeSeries(
        times=np.array(times),
        p_f1=np.array(pf1),
        p_f3=np.array(pf3),
        p_ground=np.array(pg),
        norm=np.array(norms),
        parity_leak=np.array(leaks),
        states=np.array(states) if states is not None else None,
    )


def _rk4_step(params: ModelParams, matvec_at, t: float, dt: float, psi: np.ndarray) -> np.ndarray:
    def rhs(tt: float, y: np.ndarray) -> np.ndarray:
        c = params.drive_amp * np.cos(params.drive_freq * tt)
        return -1j * matvec_at(c)(y)

    k1 = rhs(t, psi)
    k2 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k1)
    k3 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k2)
    k4 = rhs(t + dt, psi + dt * k3)
    return psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass(frozen=True)
class RabiFeatures:
    """Summary of a transfer-probability trace.

    flagged is True when no oscillation was detected (max below 1 percent);
    t_half and freq_fit are NaN in that case.
    """

    max_p: float
    t_half: float
    freq_fit: float
    flagged: bool


def rabi_extract(series: TimeSeries, smooth_window: int | None = None) -> RabiFeatures:
    """Extract peak transfer, time of first maximum, and the slow Rabi frequency.

    The trace is smoothed over roughly one drive period to suppress the fast
    counter-rotating ripple before peak finding; the dominant frequency comes
    from the median peak-to-peak spacing (or from the first-maximum time when
    the window holds a single peak).
    """
    p = np.asarray(series.p_f1, dtype=float)
    t = np.asarray(series.times, dtype=float)
    max_p = float(p.max())
    if max_p < 0.01:
        return RabiFeatures(max_p=max_p, t_half=np.nan, freq_fit=np.nan, flagged=True)

    if smooth_window is None:
        smooth_window = max(1, len(p) // 100)
    if smooth_window > 1:
        kernel = np.ones(smooth_window) / smooth_window
        smooth = np.convolve(p, kernel, mode="same")
    else:
        smooth = p

    # prominence floor rejects ripple remnants that survive the smoothing
    peaks, _ = find_peaks(
        smooth, height=0.5 * smooth.max(), prominence=0.25 * smooth.max()
    )
    if len(peaks) == 0:
        peaks = np.array([int(np.argmax(smooth))])

    first = int(peaks[0])
    lo = max(0, first - smooth_window)
    hi = min(len(p), first + smooth_window + 1)
    t_half = float(t[lo + int(np.argmax(p[lo:hi]))])

    if len(peaks) >= 2:
        spacing = float(np.median(np.diff(t[peaks])))
        freq = 2.0 * np.pi / spacing
    else:
        freq = np.pi / t_half
    return RabiFeatures(max_p=max_p, t_half=t_half, freq_fit=freq, flagged=False)
