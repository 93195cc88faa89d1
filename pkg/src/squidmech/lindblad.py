"""Open-system dynamics for the driven optomechanical models.

Builds Lindblad generators from a Hamiltonian plus weighted collapse
channels, integrates the master equation (static or time-periodic
Hamiltonians), solves for steady states, and evaluates the quantum
statistics used to diagnose the strong-coupling regime: equal-time
second-order correlation, Fano factor and Wigner functions.

Superoperators use the column-stacking convention throughout:
vec(rho) stacks the columns of rho, so vec(A rho B) = (B^T kron A) vec(rho).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp
from scipy.sparse.linalg import lgmres, spsolve

from . import device as dev
from .fock import (HilbertDims, QuantumOperator, QuantumState, expectation,
                   mode_destroy, mode_number)
from .hamiltonian import PeriodicHamiltonian

# Largest superoperator dimension d^2 handed to the direct sparse factorization;
# beyond this a restarted Krylov solver takes over.
DIRECT_SOLVE_MAX = 4 * 10 ** 4

# Cavity thermal channels are dropped below this occupation.
CAVITY_THERMAL_CUTOFF = 1e-6

STEADY_RESIDUAL_TOL = 1e-10

# Default flag threshold for the top-level Fock population of any subsystem.
TOP_POPULATION_THRESHOLD = 1e-4


class AboveThresholdError(RuntimeError):
    """Parametric drive at or beyond the linear instability threshold."""


class StiffIntegrationError(RuntimeError):
    """The explicit integrator underflowed its step size."""


class DegenerateSteadyStateError(RuntimeError):
    """The Liouvillian null space is not one-dimensional (or the solve failed)."""


class TruncationLadderError(RuntimeError):
    """The dimension ladder was exhausted before the observable converged."""

    def __init__(self, message: str, trend: list):
        super().__init__(message)
        self.trend = trend


class AbsentPhotonsError(ValueError):
    """Normalized correlation requested for a subsystem with no excitation."""


@dataclass(frozen=True)
class CollapseChannel:
    """A collapse operator with its rate (rad/s, or the model's scaled units)."""

    operator: QuantumOperator
    rate: float

    def __post_init__(self) -> None:
        if self.rate < 0.0:
            raise ValueError(f"channel rate must be >= 0, got {self.rate!r}")


@dataclass(frozen=True)
class LindbladModel:
    """Hamiltonian plus collapse channels on a common truncated space.

    `parametric_amplitude` and `cavity_decay`, when provided by the model
    builder, let `steady_state` apply the below-threshold guard for the
    parametric drive without re-deriving coefficients from matrices.
    """

    hamiltonian: QuantumOperator | PeriodicHamiltonian | None
    channels: tuple[CollapseChannel, ...]
    dims: HilbertDims
    parametric_amplitude: float | None = None
    cavity_decay: float | None = None

    def __post_init__(self) -> None:
        dims = HilbertDims.of(self.dims)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "channels", tuple(self.channels))
        h = self.hamiltonian
        if h is not None and tuple(h.dims) != tuple(dims):
            raise ValueError("hamiltonian dims do not match model dims")
        for ch in self.channels:
            if tuple(ch.operator.dims) != tuple(dims):
                raise ValueError("channel dims do not match model dims")

    @property
    def is_periodic(self) -> bool:
        return isinstance(self.hamiltonian, PeriodicHamiltonian)


def standard_channels(device: dev.DeviceParameters, dims) -> list[CollapseChannel]:
    """Decay channels of the physical device on a (cavity, mechanics) space.

    Cavity: lowering at kappa = w_c / Q_c (the cavity mode is effectively at
    zero temperature below a thermal occupation of 1e-6, so its thermal
    channels are dropped there).  Mechanics: lowering at gamma_m (n_th + 1)
    and raising at gamma_m n_th with n_th the thermal occupation at the
    mechanical frequency.
    """
    dims = HilbertDims.of(dims)
    if len(dims) != 2:
        raise ValueError("standard_channels expects a (cavity, mechanics) space")
    derived = dev.figures_of_merit(device)
    temperature = device.bias.temperature
    n_cavity = (dev.thermal_occupation(derived.renormalized_cavity_frequency, temperature)
                if temperature > 0.0 else 0.0)
    n_mech = (dev.thermal_occupation(device.mechanical.frequency, temperature)
              if temperature > 0.0 else 0.0)
    a = mode_destroy(dims, 0)
    b = mode_destroy(dims, 1)
    channels = []
    if n_cavity < CAVITY_THERMAL_CUTOFF:
        channels.append(CollapseChannel(a, derived.kappa))
    else:
        channels.append(CollapseChannel(a, derived.kappa * (n_cavity + 1.0)))
        channels.append(CollapseChannel(a.dag(), derived.kappa * n_cavity))
    channels.append(CollapseChannel(b, derived.gamma_m * (n_mech + 1.0)))
    if derived.gamma_m * n_mech > 0.0:
        channels.append(CollapseChannel(b.dag(), derived.gamma_m * n_mech))
    return channels


def _commutator_superop(h: sp.spmatrix) -> sp.csr_matrix:
    """-i [H, .] as a superoperator under column stacking."""
    d = h.shape[0]
    eye = sp.identity(d, dtype=complex, format="csr")
    return (-1j * (sp.kron(eye, h, format="csr")
                   - sp.kron(h.T, eye, format="csr"))).tocsr()


def _dissipator_superop(c: sp.spmatrix, rate: float) -> sp.csr_matrix:
    """rate * (C . C^dag - {C^dag C, .}/2) as a superoperator."""
    d = c.shape[0]
    eye = sp.identity(d, dtype=complex, format="csr")
    cdc = (c.conj().T @ c).tocsr()
    out = (sp.kron(c.conj(), c, format="csr")
           - 0.5 * sp.kron(eye, cdc, format="csr")
           - 0.5 * sp.kron(cdc.T, eye, format="csr"))
    return (rate * out).tocsr()


def _liouvillian_pieces(model: LindbladModel):
    """Static superoperator plus one superoperator per cosine part."""
    d = model.dims.total
    static = sp.csr_matrix((d * d, d * d), dtype=complex)
    periodic: list[tuple[sp.csr_matrix, float, float]] = []
    h = model.hamiltonian
    if isinstance(h, PeriodicHamiltonian):
        static = static + _commutator_superop(h.static_part.to_sparse())
        for op, freq, phase in h.cosine_parts:
            periodic.append((_commutator_superop(op.to_sparse()), freq, phase))
    elif h is not None:
        static = static + _commutator_superop(h.to_sparse())
    for ch in model.channels:
        if ch.rate > 0.0:
            static = static + _dissipator_superop(ch.operator.to_sparse(), ch.rate)
    return static.tocsr(), periodic


def liouvillian(model: LindbladModel) -> sp.csr_matrix:
    """Generator L with vec(drho/dt) = L vec(rho), column-stacking convention.

    Only static Hamiltonians have a single time-independent generator; for a
    `PeriodicHamiltonian` use `evolve`, which applies the cosine parts per
    step.
    """
    if model.is_periodic:
        raise TypeError("time-periodic Hamiltonian has no static Liouvillian; "
                        "use evolve() instead")
    static, _ = _liouvillian_pieces(model)
    return static


@dataclass(frozen=True)
class TruncationReport:
    """Where the truncated space was actually used, and how hard."""

    dims: HilbertDims
    top_level_population: tuple[float, ...]
    threshold: float
    flagged: bool


@dataclass(frozen=True)
class SimulationResult:
    """Time series (or single steady point) of observables plus the end state."""

    times: np.ndarray
    observables: dict[str, np.ndarray]
    final_state: QuantumState
    truncation_report: TruncationReport


def _top_populations(rho: np.ndarray, dims: HilbertDims) -> tuple[float, ...]:
    pops = np.real(np.diag(rho)).reshape(tuple(dims))
    return tuple(float(np.take(pops, dims[s] - 1, axis=s).sum())
                 for s in range(len(dims)))


def _stiffness_ratio(model: LindbladModel) -> float:
    h = model.hamiltonian
    if isinstance(h, PeriodicHamiltonian):
        scale = h.static_part.max_abs() + sum(op.max_abs() for op, _, _ in h.cosine_parts)
    elif h is not None:
        scale = h.max_abs()
    else:
        scale = 0.0
    rates = [ch.rate for ch in model.channels if ch.rate > 0.0]
    return scale / min(rates) if rates else scale


def _default_observables(dims: HilbertDims) -> dict[str, QuantumOperator]:
    if len(dims) == 2:
        return {"cavity_number": mode_number(dims, 0),
                "mech_number": mode_number(dims, 1)}
    return {f"number_{s}": mode_number(dims, s) for s in range(len(dims))}


def evolve(model: LindbladModel,
           initial: QuantumState,
           times: Sequence[float],
           observables: Mapping[str, QuantumOperator] | None = None,
           rtol: float = 1e-8,
           atol: float = 1e-10,
           top_population_threshold: float = TOP_POPULATION_THRESHOLD) -> SimulationResult:
    """Integrate the master equation and sample observables at `times`.

    Uses an adaptive 8th-order explicit pair; for time-periodic Hamiltonians
    the step is additionally capped at one twentieth of the fastest drive
    period.  Step-size underflow (a stiff model) raises
    `StiffIntegrationError` with the offending coefficient ratio.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) < 2 or times[0] != 0.0 or np.any(np.diff(times) <= 0.0):
        raise ValueError("times must be strictly increasing and start at 0")
    if tuple(initial.dims) != tuple(model.dims):
        raise ValueError("initial state dims do not match model dims")
    static, periodic = _liouvillian_pieces(model)
    d = model.dims.total

    if periodic:
        part_data = [(mat, freq, phase) for mat, freq, phase in periodic]

        def rhs(t: float, y_real: np.ndarray) -> np.ndarray:
            y = y_real.view(complex)
            dy = static @ y
            for mat, freq, phase in part_data:
                dy += math.cos(freq * t + phase) * (mat @ y)
            return dy.view(float)

        fastest = max(abs(freq) for _, freq, _ in periodic)
        max_step = (2.0 * math.pi / fastest) / 20.0 if fastest > 0.0 else np.inf
    else:
        def rhs(t: float, y_real: np.ndarray) -> np.ndarray:
            return (static @ y_real.view(complex)).view(float)

        max_step = np.inf

    y0 = np.ascontiguousarray(initial.density_matrix.reshape(-1, order="F"),
                              dtype=complex)
    sol = solve_ivp(rhs, (times[0], times[-1]), y0.view(float), method="DOP853",
                    t_eval=times, rtol=rtol, atol=atol, max_step=max_step)
    if not sol.success:
        ratio = _stiffness_ratio(model)
        raise StiffIntegrationError(
            f"integrator failed ({sol.message}); stiffness ratio "
            f"max|H| / kappa_min = {ratio:.3g}")

    obs = dict(observables) if observables is not None else _default_observables(model.dims)
    series: dict[str, np.ndarray] = {name: np.empty(len(times), dtype=complex)
                                     for name in obs}
    tops = np.zeros((len(times), len(model.dims)))
    rho = None
    for k in range(len(times)):
        y = np.ascontiguousarray(sol.y[:, k]).view(complex)
        rho = y.reshape((d, d), order="F")
        for name, op in obs.items():
            if op.is_sparse:
                series[name][k] = complex((op.matrix @ rho).diagonal().sum())
            else:
                series[name][k] = complex(np.trace(op.matrix @ rho))
        tops[k] = _top_populations(rho, model.dims)

    worst = tuple(float(v) for v in tops.max(axis=0))
    report = TruncationReport(dims=model.dims, top_level_population=worst,
                              threshold=top_population_threshold,
                              flagged=any(v >= top_population_threshold for v in worst))
    final = QuantumState(rho.copy(), model.dims)
    return SimulationResult(times=times, observables=series, final_state=final,
                            truncation_report=report)


def evolve_closed(hamiltonian: QuantumOperator | PeriodicHamiltonian,
                  initial_ket: np.ndarray,
                  times: Sequence[float],
                  rtol: float = 1e-10,
                  atol: float = 1e-12) -> np.ndarray:
    """Schrodinger evolution of a pure state; returns kets at `times`.

    Closed-system companion of `evolve` for fidelity checks and frame
    comparisons, where propagating the full density matrix would be wasteful.
    """
    times = np.asarray(times, dtype=float)
    if isinstance(hamiltonian, PeriodicHamiltonian):
        h0 = hamiltonian.static_part.to_sparse()
        parts = [(op.to_sparse(), freq, phase)
                 for op, freq, phase in hamiltonian.cosine_parts]
        fastest = hamiltonian.fastest_frequency
        max_step = (2.0 * math.pi / fastest) / 20.0 if fastest > 0.0 else np.inf

        def rhs(t: float, y_real: np.ndarray) -> np.ndarray:
            y = y_real.view(complex)
            dy = h0 @ y
            for mat, freq, phase in parts:
                dy += math.cos(freq * t + phase) * (mat @ y)
            return (-1j * dy).view(float)
    else:
        h0 = hamiltonian.to_sparse()
        max_step = np.inf

        def rhs(t: float, y_real: np.ndarray) -> np.ndarray:
            return (-1j * (h0 @ y_real.view(complex))).view(float)

    y0 = np.ascontiguousarray(initial_ket, dtype=complex)
    sol = solve_ivp(rhs, (times[0], times[-1]), y0.view(float), method="DOP853",
                    t_eval=times, rtol=rtol, atol=atol, max_step=max_step)
    if not sol.success:
        raise StiffIntegrationError(f"closed-system integration failed: {sol.message}")
    out = np.empty((len(times), len(y0)), dtype=complex)
    for k in range(len(times)):
        out[k] = np.ascontiguousarray(sol.y[:, k]).view(complex)
    return out


def steady_state(model: LindbladModel,
                 top_population_threshold: float = TOP_POPULATION_THRESHOLD) -> QuantumState:
    """Null vector of the Liouvillian with unit trace.

    One row of L vec(rho) = 0 is replaced by the trace functional; the
    system is then solved directly (sparse LU) up to d^2 = 4e4 and by
    restarted Krylov iteration beyond.  A parametric drive at or above the
    linear threshold alpha = kappa/2 is refused, since no steady state
    exists there for the linearized model.
    """
    if model.is_periodic:
        raise TypeError("steady_state requires a static Hamiltonian")
    if not any(ch.rate > 0.0 for ch in model.channels):
        raise ValueError("steady_state requires at least one decay channel")
    if model.parametric_amplitude is not None and model.cavity_decay is not None:
        threshold = model.cavity_decay / 2.0
        if abs(model.parametric_amplitude) >= threshold:
            raise AboveThresholdError(
                f"parametric amplitude {model.parametric_amplitude:.4g} is at or above "
                f"the instability threshold kappa/2 = {threshold:.4g}; "
                "no steady state below threshold")
        if abs(model.parametric_amplitude) > 0.8 * threshold:
            warnings.warn(
                f"parametric amplitude {model.parametric_amplitude:.4g} is within 20% "
                f"of the instability threshold {threshold:.4g}; truncation demands grow "
                "quickly here", RuntimeWarning, stacklevel=2)

    lmat = liouvillian(model)
    lv = lmat.tocoo()
    d = model.dims.total
    keep = lv.row != 0
    rows = np.concatenate([lv.row[keep], np.zeros(d, dtype=lv.row.dtype)])
    cols = np.concatenate([lv.col[keep], np.arange(d) * (d + 1)])
    data = np.concatenate([lv.data[keep], np.ones(d, dtype=complex)])
    a_mat = sp.csc_matrix((data, (rows, cols)), shape=lv.shape)
    b = np.zeros(d * d, dtype=complex)
    b[0] = 1.0

    try:
        if d * d <= DIRECT_SOLVE_MAX:
            v = spsolve(a_mat, b)
        else:
            x0 = np.eye(d, dtype=complex).reshape(-1, order="F") / d
            v, info = lgmres(a_mat, b, x0=x0, rtol=1e-12, atol=1e-14, maxiter=2000)
            if info != 0:
                raise DegenerateSteadyStateError(
                    f"iterative steady-state solve did not converge (info={info})")
    except DegenerateSteadyStateError:
        raise
    except Exception as exc:  # singular factorization and friends
        raise DegenerateSteadyStateError(f"steady-state solve failed: {exc}") from exc
    if not np.all(np.isfinite(v)):
        raise DegenerateSteadyStateError(
            "steady-state solve produced non-finite entries; the null space "
            "is likely degenerate")

    residual = float(np.linalg.norm(lmat @ v))
    if residual > STEADY_RESIDUAL_TOL:
        raise DegenerateSteadyStateError(
            f"steady-state residual {residual:.3e} exceeds {STEADY_RESIDUAL_TOL:.1e}; "
            "Liouvillian null space may not be one-dimensional")

    rho = v.reshape((d, d), order="F")
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    state = QuantumState(rho, model.dims)
    state.validate()
    tops = _top_populations(rho, model.dims)
    if any(t >= top_population_threshold for t in tops):
        warnings.warn(
            f"steady state pushes top Fock levels to populations {tops}; "
            "increase truncation dims", RuntimeWarning, stacklevel=2)
    return state


# ---------------------------------------------------------------------------
# statistics
# ---------------------------------------------------------------------------

def _number_moments(state: QuantumState, subsystem: int):
    reduced = state.reduced(subsystem) if len(state.dims) > 1 else state
    pops = reduced.populations()
    n = np.arange(len(pops))
    return pops, n


def g2_zero(state: QuantumState, subsystem: int = 0) -> float:
    """Equal-time second-order correlation <a+ a+ a a> / <a+ a>^2.

    Diagonal in the Fock basis, so only populations of the reduced state
    enter.  Raises `AbsentPhotonsError` below an occupation of 1e-12, where
    the normalization is meaningless.
    """
    pops, n = _number_moments(state, subsystem)
    mean = float(np.dot(pops, n))
    if mean < 1e-12:
        raise AbsentPhotonsError(
            f"subsystem {subsystem} occupation {mean:.3e} is too small for g2")
    pair = float(np.dot(pops, n * (n - 1)))
    return pair / mean ** 2


def fano(state: QuantumState, subsystem: int = 0) -> float:
    """Number-statistics Fano factor (<n^2> - <n>^2) / <n>."""
    pops, n = _number_moments(state, subsystem)
    mean = float(np.dot(pops, n))
    if mean < 1e-12:
        raise AbsentPhotonsError(
            f"subsystem {subsystem} occupation {mean:.3e} is too small for a Fano factor")
    second = float(np.dot(pops, n * n))
    return (second - mean ** 2) / mean


# -- Wigner function ---------------------------------------------------------

WIGNER_MAX_DIM = 60
WIGNER_SERIES_TOL = 1e-8


@dataclass(frozen=True)
class WignerResult:
    """W(x, p) on the requested rectangular grid (values[i, j] = W(x[i], p[j]))."""

    values: np.ndarray
    x: np.ndarray
    p: np.ndarray
    coverage_warning: str | None = None

    def integral(self) -> float:
        dx = self.x[1] - self.x[0] if len(self.x) > 1 else 1.0
        dp = self.p[1] - self.p[0] if len(self.p) > 1 else 1.0
        return float(self.values.sum() * dx * dp)


def displacement_matrix(dim: int, alpha: complex) -> np.ndarray:
    """Matrix of exp(alpha a^dag - alpha* a) on a truncated Fock space.

    Assembled from the normal-ordered factorization
    D = exp(-|alpha|^2/2) exp(alpha a^dag) exp(-alpha* a), whose triangular
    factors have closed-form entries; log-space evaluation keeps the
    factorials stable at large dim.
    """
    if alpha == 0:
        return np.eye(dim, dtype=complex)
    n = np.arange(dim)
    lgam = np.array([math.lgamma(k + 1) for k in range(dim + 1)])
    log_abs = math.log(abs(alpha))
    # lower-triangular exp(alpha a^dag): (i, j) for i >= j
    i_idx, j_idx = np.tril_indices(dim)
    k = i_idx - j_idx
    log_mag = k * log_abs + 0.5 * (lgam[i_idx] - lgam[j_idx]) - lgam[k]
    lower = np.zeros((dim, dim), dtype=complex)
    lower[i_idx, j_idx] = np.exp(log_mag) * np.exp(1j * k * np.angle(alpha))
    # upper-triangular exp(-alpha* a): (i, j) for j >= i
    beta = -np.conj(alpha)
    iu, ju = np.triu_indices(dim)
    ku = ju - iu
    log_mag_u = ku * math.log(abs(beta)) + 0.5 * (lgam[ju] - lgam[iu]) - lgam[ku]
    upper = np.zeros((dim, dim), dtype=complex)
    upper[iu, ju] = np.exp(log_mag_u) * np.exp(1j * ku * np.angle(beta))
    return math.exp(-0.5 * abs(alpha) ** 2) * (lower @ upper)


def wigner(state: QuantumState, subsystem: int, x: Sequence[float],
           p: Sequence[float]) -> WignerResult:
    """Wigner function of one subsystem via the displaced-parity series.

    Conventions: x = (a + a^dag)/sqrt(2), so the grid point (x, p) maps to
    the phase-space amplitude alpha = (x + i p)/sqrt(2), the full integral
    of W over dx dp is 1 and the vacuum peaks at 1/pi.  The state is
    zero-padded before displacing so the per-point series truncation error
    stays below 1e-8; if the grid fails to contain the state a coverage
    warning is attached to the result (not raised).
    """
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    reduced = state.reduced(subsystem) if len(state.dims) > 1 else state
    dim = reduced.dims.total
    if dim > WIGNER_MAX_DIM:
        raise ValueError(f"reduced dimension {dim} exceeds the series practicality "
                         f"bound {WIGNER_MAX_DIM}")
    alpha_max = float(np.max(np.hypot.outer(x, p))) / math.sqrt(2.0)
    # displaced support reaches ~ (sqrt(dim) + |alpha|)^2; pad with margin
    reach = (math.sqrt(dim) + alpha_max) ** 2
    pad_dim = int(math.ceil(reach + 8.0 * math.sqrt(reach + 1.0) + 12))
    values = np.empty((len(x), len(p)))
    worst_deficit = 0.0
    for attempt in range(3):
        rho = np.zeros((pad_dim, pad_dim), dtype=complex)
        rho[:dim, :dim] = reduced.density_matrix
        parity = (-1.0) ** np.arange(pad_dim)
        worst_deficit = 0.0
        for i, xi in enumerate(x):
            for j, pj in enumerate(p):
                alpha = (xi + 1j * pj) / math.sqrt(2.0)
                d_mat = displacement_matrix(pad_dim, alpha)
                diag = np.einsum("ij,ij->j", d_mat.conj(), rho @ d_mat).real
                values[i, j] = float(np.dot(parity, diag)) / math.pi
                worst_deficit = max(worst_deficit, abs(1.0 - diag.sum()))
        if worst_deficit < WIGNER_SERIES_TOL:
            break
        pad_dim = int(pad_dim * 1.5)
    else:
        raise RuntimeError(
            f"displaced-parity series failed to reach {WIGNER_SERIES_TOL:.1e} "
            f"(deficit {worst_deficit:.3e})")

    result = WignerResult(values=values, x=x, p=p)
    integral = result.integral()
    if abs(integral - 1.0) > 1e-3:
        result = WignerResult(values=values, x=x, p=p,
                              coverage_warning=(
                                  f"grid integral {integral:.6f} deviates from 1; "
                                  "the grid may not contain the state"))
    return result


# -- truncation policy --------------------------------------------------------

def _cavity_pair_amplitude(state: QuantumState) -> float:
    dims = state.dims
    a = mode_destroy(dims, 0)
    return abs(expectation(a @ a, state))


OBSERVABLE_REGISTRY: dict[str, Callable[[QuantumState], float]] = {
    "cavity_number": lambda s: float(np.real(expectation(mode_number(s.dims, 0), s))),
    "mech_number": lambda s: float(np.real(expectation(mode_number(s.dims, len(s.dims) - 1), s))),
    "cavity_pair_amplitude": _cavity_pair_amplitude,
    "cavity_g2": lambda s: g2_zero(s, 0),
}


def truncation_converge(model_builder: Callable[[HilbertDims], LindbladModel],
                        observable: str | Callable[[QuantumState], float],
                        ladder: Sequence,
                        tolerance: float,
                        top_population_threshold: float = TOP_POPULATION_THRESHOLD
                        ) -> tuple[HilbertDims, SimulationResult]:
    """Walk a monotone dimension ladder until a steady observable settles.

    Returns the smallest rung whose observable agrees with the next rung to
    the requested relative tolerance, together with that rung's steady
    result (top-level populations attached).  Exhausting the ladder raises
    `TruncationLadderError` carrying the (dims, value) trend.
    """
    rungs = [HilbertDims.of(d) for d in ladder]
    if len(rungs) < 2:
        raise ValueError("ladder needs at least two rungs")
    for lo, hi in zip(rungs, rungs[1:]):
        if len(lo) != len(hi) or any(b < a for a, b in zip(lo, hi)) or hi.total <= lo.total:
            raise ValueError("ladder must grow monotonically")
    obs_fn = OBSERVABLE_REGISTRY[observable] if isinstance(observable, str) else observable

    trend: list[tuple[tuple[int, ...], float]] = []
    prev_value = None
    prev_state: QuantumState | None = None
    prev_dims: HilbertDims | None = None
    for dims in rungs:
        model = model_builder(dims)
        with warnings.catch_warnings():
            # probing undersized rungs is the point of the ladder
            warnings.simplefilter("ignore", RuntimeWarning)
            state = steady_state(model, top_population_threshold=top_population_threshold)
        value = obs_fn(state)
        trend.append((tuple(dims), value))
        if prev_value is not None:
            scale = max(abs(value), abs(prev_value), 1e-300)
            if abs(value - prev_value) / scale < tolerance:
                name = observable if isinstance(observable, str) else "observable"
                tops = _top_populations(prev_state.density_matrix, prev_dims)
                report = TruncationReport(
                    dims=prev_dims, top_level_population=tops,
                    threshold=top_population_threshold,
                    flagged=any(t >= top_population_threshold for t in tops))
                result = SimulationResult(
                    times=np.array([]), observables={name: np.array([prev_value])},
                    final_state=prev_state, truncation_report=report)
                return prev_dims, result
        prev_value, prev_state, prev_dims = value, state, dims
    raise TruncationLadderError(
        f"observable did not settle to {tolerance:.1e} on the ladder; trend: {trend}",
        trend)
