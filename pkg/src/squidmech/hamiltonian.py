"""Hamiltonians for the flux-driven optomechanical cavity.

Three builders:

* the lab frame, where the flux modulation and the microwave pump appear as
  explicitly time-periodic terms on top of the static cavity + mechanics +
  radiation-pressure Hamiltonian;
* the frame rotating at half the modulation frequency after dropping
  off-resonant terms, which is static when the pump sits at that frequency;
* a two-cavity-mode extension carrying either a non-degenerate pair
  coupling or a beam-splitter coupling.

hbar is absorbed throughout: matrix elements are angular frequencies
divided by a caller-chosen `frequency_scale`, which keeps coefficients
O(1)-O(10) for the integrators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import device as dev
from .fock import (HilbertDims, QuantumOperator, identity, mode_destroy, tensor)

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class RwaModelSpec:
    """Coefficients of the rotating-frame model, all in rad/s.

    delta : drive-cavity detuning w_d/2 - w_c
    small_delta : drive-pump detuning w_d/2 - w_p (zero gives a static model)
    g0 : single-photon optomechanical coupling
    alpha : parametric drive amplitude
    omega_m : mechanical frequency
    pump_amplitude : classical pump amplitude
    dims : (cavity, mechanics) truncation
    frequency_scale : every coefficient is divided by this; defaults to
        omega_m so the stiffest scale is O(1)
    """

    delta: float
    small_delta: float
    g0: float
    alpha: float
    omega_m: float
    pump_amplitude: float
    dims: HilbertDims
    frequency_scale: float | None = None

    def __post_init__(self) -> None:
        dims = HilbertDims.of(self.dims)
        if len(dims) != 2:
            raise ValueError(f"RWA model needs exactly 2 subsystems, got {tuple(dims)}")
        object.__setattr__(self, "dims", dims)
        if self.frequency_scale is None:
            object.__setattr__(self, "frequency_scale", self.omega_m)
        if not self.frequency_scale > 0.0:
            raise ValueError("frequency_scale must be positive")


@dataclass(frozen=True)
class PeriodicHamiltonian:
    """H(t) = static + sum_i op_i cos(w_i t + phi_i), every part hermitian."""

    static_part: QuantumOperator
    cosine_parts: tuple[tuple[QuantumOperator, float, float], ...]

    def __post_init__(self) -> None:
        parts = tuple(self.cosine_parts)
        object.__setattr__(self, "cosine_parts", parts)
        if not self.static_part.is_hermitian(HERMITICITY_TOL):
            raise ValueError("static part is not hermitian")
        for op, _, _ in parts:
            if tuple(op.dims) != tuple(self.static_part.dims):
                raise ValueError("cosine part dims do not match the static part")
            if not op.is_hermitian(HERMITICITY_TOL):
                raise ValueError("cosine part is not hermitian")

    @property
    def dims(self) -> HilbertDims:
        return self.static_part.dims

    @property
    def fastest_frequency(self) -> float:
        if not self.cosine_parts:
            return 0.0
        return max(abs(w) for _, w, _ in self.cosine_parts)

    def value_at(self, t: float) -> np.ndarray:
        """Dense H(t); intended for small-dimension diagnostics and tests."""
        h = self.static_part.to_array()
        for op, w, phi in self.cosine_parts:
            h = h + math.cos(w * t + phi) * op.to_array()
        return h


def _two_mode_ops(dims: HilbertDims):
    a = mode_destroy(dims, 0)
    b = mode_destroy(dims, 1)
    return a, a.dag(), b, b.dag()


def build_lab_frame_from_rates(cavity_frequency: float,
                               mechanical_frequency: float,
                               optomech_coupling: float,
                               parametric_amplitude: float,
                               modulation_frequency: float,
                               pump_amplitude: float,
                               pump_frequency: float,
                               dims,
                               frequency_scale: float = 1.0) -> PeriodicHamiltonian:
    """Lab-frame Hamiltonian from explicit rates (all rad/s).

    Static part:  w_c a^dag a + w_m b^dag b - (g0/2) (a + a^dag)^2 (b + b^dag).
    The (a + a^dag)^2 form is kept whole, vacuum term included.

    Time-periodic parts: the flux drive contributes
    -alpha (a + a^dag)^2 cos(w_d t), and a nonzero pump contributes its two
    quadratures E (a + a^dag) cos(w_p t) and E i(a - a^dag) sin(w_p t).
    """
    dims = HilbertDims.of(dims)
    if len(dims) != 2:
        raise ValueError(f"lab-frame model needs exactly 2 subsystems, got {tuple(dims)}")
    if not frequency_scale > 0.0:
        raise ValueError("frequency_scale must be positive")
    s = frequency_scale
    a, ad, b, bd = _two_mode_ops(dims)
    n_a = ad @ a
    n_b = bd @ b
    x_a = a + ad
    x_b = b + bd
    static = (cavity_frequency / s) * n_a + (mechanical_frequency / s) * n_b \
        - (optomech_coupling / (2.0 * s)) * (x_a @ x_a @ x_b)
    parts: list[tuple[QuantumOperator, float, float]] = []
    if parametric_amplitude != 0.0:
        parts.append((-(parametric_amplitude / s) * (x_a @ x_a),
                      modulation_frequency / s, 0.0))
    if pump_amplitude != 0.0:
        e = pump_amplitude / s
        parts.append((e * x_a, pump_frequency / s, 0.0))
        parts.append((e * (1j * (a - ad)), pump_frequency / s, -math.pi / 2.0))
    return PeriodicHamiltonian(static, tuple(parts))


def build_lab_frame(device: dev.DeviceParameters, dims,
                    frequency_scale: float | None = None) -> PeriodicHamiltonian:
    """Lab-frame Hamiltonian of a physical device on the given truncation.

    Couplings are derived from the device at its dc operating point.  The
    default frequency scale is the mechanical frequency.
    """
    derived = dev.figures_of_merit(device)
    if frequency_scale is None:
        frequency_scale = device.mechanical.frequency
    return build_lab_frame_from_rates(
        cavity_frequency=derived.renormalized_cavity_frequency,
        mechanical_frequency=device.mechanical.frequency,
        optomech_coupling=derived.g0,
        parametric_amplitude=derived.alpha,
        modulation_frequency=device.bias.modulation_frequency,
        pump_amplitude=device.bias.pump_amplitude,
        pump_frequency=device.bias.pump_frequency,
        dims=dims,
        frequency_scale=frequency_scale,
    )


def build_rwa(spec: RwaModelSpec):
    """Rotating-frame Hamiltonian at half the modulation frequency.

    H = -Delta a^dag a + w_m b^dag b - (alpha/2)(a^2 + a^dag^2)
        - g0 a^dag a (b + b^dag) + E (a + a^dag)            [small_delta = 0]

    The vacuum piece of the squared quadrature does not survive the frame
    transformation, so unlike the lab frame the optomechanical term is the
    pure radiation-pressure form.  With a detuned pump (small_delta != 0)
    the pump term rotates and a `PeriodicHamiltonian` is returned instead,
    carrying the two pump quadratures at that detuning.
    """
    s = spec.frequency_scale
    a, ad, b, bd = _two_mode_ops(spec.dims)
    n_a = ad @ a
    n_b = bd @ b
    x_b = b + bd
    static = (-(spec.delta / s) * n_a + (spec.omega_m / s) * n_b
              - (spec.alpha / (2.0 * s)) * (a @ a + ad @ ad)
              - (spec.g0 / s) * (n_a @ x_b))
    e = spec.pump_amplitude / s
    if spec.small_delta == 0.0:
        if e != 0.0:
            static = static + e * (a + ad)
        return static
    parts = (
        (e * (a + ad), spec.small_delta / s, 0.0),
        (e * (1j * (ad - a)), spec.small_delta / s, -math.pi / 2.0),
    )
    return PeriodicHamiltonian(static, parts)


TWO_MODE_KINDS = ("nondegenerate", "beam_splitter")


def build_two_mode(device: dev.DeviceParameters, dims, kind: str,
                   strength: float,
                   frequency_scale: float | None = None) -> QuantumOperator:
    """Two cavity modes sharing the mechanical resonator, in the resonant frame.

    dims must name three subsystems (mode a, mode c, mechanics).  Both
    cavity modes are radiation-pressure coupled to the mechanics at the
    device's g0.  Modulating at the sum of the mode frequencies yields the
    pair coupling strength (a c + a^dag c^dag); modulating at the
    difference yields the beam splitter strength (a c^dag + a^dag c).
    """
    dims = HilbertDims.of(dims)
    if len(dims) != 3:
        raise ValueError(f"two-mode model needs exactly 3 subsystems, got {tuple(dims)}")
    if kind not in TWO_MODE_KINDS:
        raise ValueError(f"kind must be one of {TWO_MODE_KINDS}, got {kind!r}")
    derived = dev.figures_of_merit(device)
    omega_m = device.mechanical.frequency
    if frequency_scale is None:
        frequency_scale = omega_m
    s = frequency_scale
    a = mode_destroy(dims, 0)
    c = mode_destroy(dims, 1)
    b = mode_destroy(dims, 2)
    ad, cd, bd = a.dag(), c.dag(), b.dag()
    x_b = b + bd
    h = (omega_m / s) * (bd @ b) \
        - (derived.g0 / s) * ((ad @ a + cd @ c) @ x_b)
    if kind == "nondegenerate":
        h = h + (strength / s) * (a @ c + ad @ cd)
    else:
        h = h + (strength / s) * (a @ cd + ad @ c)
    return h


def rotating_frame_phases(dims, half_drive_frequency: float, t: float) -> np.ndarray:
    """Diagonal of U(t) = exp(i (w_d/2) t a^dag a) on the cavity subsystem.

    This is the frame map used to compare lab-frame and rotating-frame
    evolutions; apply it elementwise to a lab-frame state vector to move it
    into the rotating frame.
    """
    dims = HilbertDims.of(dims)
    phases = np.exp(1j * half_drive_frequency * t * np.arange(dims[0]))
    rest = int(np.prod(tuple(dims)[1:], dtype=int)) if len(dims) > 1 else 1
    return np.repeat(phases, rest)
