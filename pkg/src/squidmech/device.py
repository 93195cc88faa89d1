"""Circuit model of a dc-SQUID embedded in a coplanar microwave cavity.

A SQUID with one mechanically compliant loop arm bisects a transmission-line
cavity.  The SQUID acts as a flux-tunable lumped inductance, so the external
flux bias sets the cavity mode frequency; slow modulation of the bias drives
the mode parametrically, and the motion of the compliant arm in a static
in-plane field modulates the flux and hence the frequency, producing a
radiation-pressure coupling.

This module maps physical device parameters to every derived circuit
quantity: Josephson inductance, plasma frequency, mode wavenumber, the
renormalized cavity frequency, the optomechanical coupling g0, the
parametric couplings alpha and chi, decay rates, regime-validity checks and
figures of merit.  Everything here is a pure function of its inputs; all
parameter records are frozen dataclasses and safe to share between workers.

Units are SI with angular frequencies (rad/s) throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .constants import BOLTZMANN, FLUX_QUANTUM, HBAR, TWO_PI

# |flux fraction| closer than this to 1/2 is rejected: sec(pi*x) diverges.
FLUX_POLE_MARGIN = 1e-6

# "Much less than one" thresholds for the small-parameter validity ratios.
RATIO_OK_BELOW = 0.2
RATIO_VIOLATION_ABOVE = 0.5

# The applied field must stay below the material critical field; warn when
# within 20% of it.
FIELD_WARNING_ABOVE = 0.8

# Boundary below which (x tan x = r) is well approximated by x**2 = r.
SMALL_ARGUMENT_LIMIT = 0.5

VERDICT_OK = "ok"
VERDICT_WARNING = "warning"
VERDICT_VIOLATION = "violation"


class FluxBiasError(ValueError):
    """Flux bias at or beyond the half-integer point, where sec(pi*x) diverges."""


class WavenumberDomainError(ValueError):
    """The mode boundary condition has no root for the requested parameters."""


def _check_positive(name: str, value: float) -> None:
    if not value > 0.0:
        raise ValueError(f"{name} must be strictly positive, got {value!r}")


def _check_nonnegative(name: str, value: float) -> None:
    if value < 0.0:
        raise ValueError(f"{name} must be non-negative, got {value!r}")


@dataclass(frozen=True)
class SquidParameters:
    """Two identical Josephson junctions on a small superconducting loop.

    critical_current : A, per-junction critical current
    junction_capacitance : F, per-junction capacitance
    loop_self_inductance : H, geometric loop inductance (enters only the
        self-inductance validity ratio)
    junction_asymmetry : reserved, must stay 0 (identical junctions assumed)
    """

    critical_current: float
    junction_capacitance: float
    loop_self_inductance: float = 10e-12
    junction_asymmetry: float = 0.0

    def __post_init__(self) -> None:
        _check_positive("critical_current", self.critical_current)
        _check_positive("junction_capacitance", self.junction_capacitance)
        _check_nonnegative("loop_self_inductance", self.loop_self_inductance)
        if self.junction_asymmetry != 0.0:
            raise ValueError("junction_asymmetry is reserved and must be 0")


@dataclass(frozen=True)
class CavityParameters:
    """Coplanar transmission-line cavity of length `length`.

    inductance_per_length : H/m
    capacitance_per_length : F/m
    length : m
    bare_frequency_at_zero_bias : rad/s, mode frequency at zero flux bias
    quality_factor : loaded quality factor at the dc operating point
    """

    inductance_per_length: float
    capacitance_per_length: float
    length: float
    bare_frequency_at_zero_bias: float
    quality_factor: float

    def __post_init__(self) -> None:
        for name in ("inductance_per_length", "capacitance_per_length", "length",
                     "bare_frequency_at_zero_bias", "quality_factor"):
            _check_positive(name, getattr(self, name))

    @property
    def total_inductance(self) -> float:
        """Total line inductance L_c * l in henries."""
        return self.inductance_per_length * self.length


@dataclass(frozen=True)
class MechanicalParameters:
    """Doubly clamped beam forming the compliant arm of the SQUID loop.

    mass : kg, effective mass of the fundamental in-plane mode
    frequency : rad/s
    oscillator_length : m, beam length
    geometric_factor : dimensionless in (0, 1], accounts for the nonuniform
        displacement profile along the beam
    quality_factor : mechanical quality factor
    """

    mass: float
    frequency: float
    oscillator_length: float
    geometric_factor: float
    quality_factor: float

    def __post_init__(self) -> None:
        for name in ("mass", "frequency", "oscillator_length", "quality_factor"):
            _check_positive(name, getattr(self, name))
        if not 0.0 < self.geometric_factor <= 1.0:
            raise ValueError("geometric_factor must lie in (0, 1]")


@dataclass(frozen=True)
class BiasParameters:
    """External flux bias, drive tones and environment.

    dc_flux_fraction : Phi_dc / Phi_0, must satisfy |x| < 1/2
    modulation_amplitude_fraction : deltaPhi / Phi_0 of the flux modulation
    modulation_frequency : rad/s of the flux modulation
    external_field : T, static in-plane field at the compliant arm
    pump_amplitude : rad/s, classical microwave pump amplitude
    pump_frequency : rad/s
    temperature : K
    """

    dc_flux_fraction: float
    modulation_amplitude_fraction: float = 0.0
    modulation_frequency: float = 0.0
    external_field: float = 0.0
    pump_amplitude: float = 0.0
    pump_frequency: float = 0.0
    temperature: float = 0.0

    def __post_init__(self) -> None:
        if abs(self.dc_flux_fraction) >= 0.5 - FLUX_POLE_MARGIN:
            raise FluxBiasError(
                "dc_flux_fraction must satisfy |x| < 1/2 (half-integer flux "
                f"point excluded), got {self.dc_flux_fraction!r}")
        _check_nonnegative("modulation_amplitude_fraction",
                           self.modulation_amplitude_fraction)
        _check_nonnegative("temperature", self.temperature)


@dataclass(frozen=True)
class DeviceParameters:
    """Complete physical description of the device.

    The applied field should stay below `material_critical_field`; this is
    checked by `validate_regime` (reported, not raised) so that parameter
    sweeps can cross the boundary and see the verdict flip.
    """

    squid: SquidParameters
    cavity: CavityParameters
    mechanical: MechanicalParameters
    bias: BiasParameters
    material_critical_field: float = 0.198  # T, niobium

    def __post_init__(self) -> None:
        _check_positive("material_critical_field", self.material_critical_field)


@dataclass(frozen=True)
class DerivedQuantities:
    """All derived circuit quantities at the dc operating point."""

    josephson_inductance: float       # H, L_J at the dc bias
    plasma_frequency: float           # rad/s, flux-renormalized junction plasma frequency
    beta_L: float                     # dimensionless loop self-inductance parameter
    renormalized_cavity_frequency: float  # rad/s
    zero_point_displacement: float    # m
    g0: float                         # rad/s, single-photon optomechanical coupling
    alpha: float                      # rad/s, parametric drive amplitude
    chi: float                        # rad/s, intrinsic parametric coupling
    kappa: float                      # rad/s, cavity energy decay rate
    gamma_m: float                    # rad/s, mechanical energy decay rate
    nonlinearity_parameter: float     # g0^2 / (kappa * omega_m)


@dataclass(frozen=True)
class ConstraintReport:
    """Validity ratios of the lumped-SQUID approximation, as pure data.

    The three small-parameter ratios must stay well below one; the field
    ratio must stay below one.  Violations are reported, never raised.
    """

    current_ratio: float
    inductance_ratio: float
    flux_kick_ratio: float
    field_ratio: float
    verdicts: dict[str, str] = field(default_factory=dict)

    @property
    def worst(self) -> str:
        order = (VERDICT_VIOLATION, VERDICT_WARNING, VERDICT_OK)
        for level in order:
            if level in self.verdicts.values():
                return level
        return VERDICT_OK


def _secant(flux_fraction: float) -> float:
    """1/cos(pi*x) with a shared guard against the half-integer pole."""
    if abs(flux_fraction) >= 0.5 - FLUX_POLE_MARGIN:
        raise FluxBiasError(
            f"flux fraction {flux_fraction!r} is at or beyond the half-integer "
            "bias point; sec(pi*x) diverges")
    return 1.0 / math.cos(math.pi * flux_fraction)


def _tangent(flux_fraction: float) -> float:
    """tan(pi*x) evaluated through the guarded secant."""
    return math.sin(math.pi * flux_fraction) * _secant(flux_fraction)


def josephson_inductance(squid: SquidParameters, dc_flux_fraction: float) -> float:
    """Flux-dependent SQUID inductance Phi_0 sec(pi x) / (4 pi I_c).

    Keeps only the current-independent part of the effective inductance;
    the next correction is of order (I/I_c)^2 and is covered by the
    validity ratios in `validate_regime`.
    """
    return FLUX_QUANTUM * _secant(dc_flux_fraction) / (4.0 * math.pi * squid.critical_current)


def plasma_frequency(squid: SquidParameters, dc_flux_fraction: float = 0.0) -> float:
    """Junction plasma frequency sqrt(2 pi I_c / (C_J Phi_0)) in rad/s.

    At finite flux bias the effective critical current of the loop is
    reduced, renormalizing the plasma frequency by sqrt(cos(pi x)).
    """
    bare = math.sqrt(TWO_PI * squid.critical_current
                     / (squid.junction_capacitance * FLUX_QUANTUM))
    if dc_flux_fraction == 0.0:
        return bare
    return bare * math.sqrt(1.0 / _secant(dc_flux_fraction))


def beta_l(squid: SquidParameters) -> float:
    """Dimensionless loop self-inductance parameter 2 pi L I_c / Phi_0."""
    return TWO_PI * squid.loop_self_inductance * squid.critical_current / FLUX_QUANTUM


def zero_point_displacement(mech: MechanicalParameters) -> float:
    """Ground-state position spread sqrt(hbar / (2 m omega_m)) in meters."""
    return math.sqrt(HBAR / (2.0 * mech.mass * mech.frequency))


def thermal_occupation(frequency: float, temperature: float) -> float:
    """Bose-Einstein occupation 1 / (exp(hbar w / kB T) - 1); zero at T = 0."""
    _check_positive("frequency", frequency)
    _check_nonnegative("temperature", temperature)
    if temperature == 0.0:
        return 0.0
    x = HBAR * frequency / (BOLTZMANN * temperature)
    # expm1 keeps precision for x << 1 (highly occupied modes).
    return 1.0 / math.expm1(x)


def solve_x_tan_x(target: float) -> float:
    """Smallest positive root of x tan(x) = target on (0, pi/2).

    Bracketed bisection down to the working-precision interval, then a few
    Newton steps for a terminal-quadratic polish.  The left side is
    monotone on the principal branch, so the bracket never fails.
    """
    if not target > 0.0:
        raise WavenumberDomainError(
            f"x tan x = r requires r > 0 on the principal branch, got {target!r}")
    lo = 0.0
    hi = math.pi / 2.0 - 1e-9
    if hi * math.tan(hi) < target:
        raise WavenumberDomainError(
            f"r = {target!r} exceeds the numerical range of the principal branch")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if mid * math.tan(mid) > target:
            hi = mid
        else:
            lo = mid
    x = 0.5 * (lo + hi)
    for _ in range(4):
        t = math.tan(x)
        residual = x * t - target
        slope = t + x * (1.0 + t * t)
        step = residual / slope
        x -= step
        if abs(step) <= 1e-17 * max(1.0, x):
            break
    return x


def boundary_condition_strength(device: DeviceParameters,
                                modulation_cosine: float = 0.0) -> float:
    """Right-hand side r of the mode equation (k l / 2) tan(k l / 2) = r.

    r = (L_c l / L_J) * [1 - (pi dPhi/Phi_0) tan(pi Phi_dc/Phi_0) * cos(w_d t)],
    with `modulation_cosine` standing in for cos(w_d t).
    """
    if not -1.0 <= modulation_cosine <= 1.0:
        raise ValueError("modulation_cosine must lie in [-1, 1]")
    lj = josephson_inductance(device.squid, device.bias.dc_flux_fraction)
    modulation = (math.pi * device.bias.modulation_amplitude_fraction
                  * _tangent(device.bias.dc_flux_fraction) * modulation_cosine)
    return device.cavity.total_inductance / lj * (1.0 - modulation)


def solve_wavenumber(device: DeviceParameters, modulation_cosine: float = 0.0) -> float:
    """Fundamental mode wavenumber k0 (1/m) from the flux boundary condition.

    Solves (k0 l / 2) tan(k0 l / 2) = r for the smallest positive root with
    k0 l / 2 in (0, pi/2).  Raises `WavenumberDomainError` when the
    modulated right-hand side is not positive.
    """
    r = boundary_condition_strength(device, modulation_cosine)
    if r <= 0.0:
        raise WavenumberDomainError(
            f"boundary-condition strength r = {r!r} <= 0: modulation amplitude "
            "too large for the requested bias")
    x = solve_x_tan_x(r)
    return 2.0 * x / device.cavity.length


def wavenumber_report(device: DeviceParameters, modulation_cosine: float = 0.0) -> dict:
    """Root of the mode equation together with its small-argument diagnostics."""
    r = boundary_condition_strength(device, modulation_cosine)
    if r <= 0.0:
        raise WavenumberDomainError(f"boundary-condition strength r = {r!r} <= 0")
    x = solve_x_tan_x(r)
    sqrt_r = math.sqrt(r)
    return {
        "r": r,
        "half_argument": x,
        "wavenumber": 2.0 * x / device.cavity.length,
        "residual": x * math.tan(x) - r,
        "sqrt_r": sqrt_r,
        "small_argument_error": abs(x - sqrt_r) / sqrt_r,
        "small_argument_valid": r <= SMALL_ARGUMENT_LIMIT,
    }


def renormalized_cavity_frequency(device: DeviceParameters,
                                  method: str = "table_scaling") -> float:
    """Cavity mode frequency at the dc flux bias, in rad/s.

    Two methods are provided because they genuinely disagree:

    * ``table_scaling`` scales the zero-bias frequency by cos(pi Phi_dc/Phi_0).
      This is the default; it reproduces the headline figures of merit.
    * ``mode_equation`` solves the transcendental boundary condition at zero
      modulation and returns k0 / sqrt(L_c C_c).

    Reports built on top of this module surface both values so the
    discrepancy stays visible.
    """
    if method == "table_scaling":
        cos = 1.0 / _secant(device.bias.dc_flux_fraction)
        return device.cavity.bare_frequency_at_zero_bias * cos
    if method == "mode_equation":
        k0 = solve_wavenumber(device, modulation_cosine=0.0)
        return k0 / math.sqrt(device.cavity.inductance_per_length
                              * device.cavity.capacitance_per_length)
    raise ValueError(f"unknown method {method!r}; use 'table_scaling' or 'mode_equation'")


def optomechanical_coupling(device: DeviceParameters) -> float:
    """Single-photon radiation-pressure coupling g0 in rad/s.

    g0 = w_c^dc * (lambda B l_osc y_zp) / (Phi_0/pi) * (L_J / L_c l)
         * tan(pi Phi_dc / Phi_0)

    using the table-scaling frequency.  Vanishes at zero bias and grows
    with tan at larger bias; linear in the applied field.
    """
    mech = device.mechanical
    bias = device.bias
    omega_c = renormalized_cavity_frequency(device, method="table_scaling")
    y_zp = zero_point_displacement(mech)
    flux_lever = (mech.geometric_factor * bias.external_field
                  * mech.oscillator_length * y_zp) / (FLUX_QUANTUM / math.pi)
    inductance_ratio = (josephson_inductance(device.squid, bias.dc_flux_fraction)
                        / device.cavity.total_inductance)
    return omega_c * flux_lever * inductance_ratio * _tangent(bias.dc_flux_fraction)


def parametric_coupling(device: DeviceParameters) -> tuple[float, float]:
    """Parametric drive amplitude alpha and intrinsic coupling chi, in rad/s.

    chi = w_c^dc / 4 is the flux-to-squeezing conversion strength of the
    device itself; alpha = chi * (pi dPhi/Phi_0) tan(pi Phi_dc/Phi_0)
    additionally carries the modulation amplitude.
    """
    omega_c = renormalized_cavity_frequency(device, method="table_scaling")
    chi = omega_c / 4.0
    alpha = (chi * math.pi * device.bias.modulation_amplitude_fraction
             * _tangent(device.bias.dc_flux_fraction))
    return alpha, chi


def cavity_zero_point_current(device: DeviceParameters) -> float:
    """Zero-point current amplitude at the SQUID, in amperes.

    Lumped estimate: the mode's zero-point current through the total series
    inductance (line plus SQUID), weighted by the sinusoidal current profile
    at the cavity midpoint.  Used as the default current scale for the
    validity ratios.
    """
    omega_c = renormalized_cavity_frequency(device, method="table_scaling")
    l_total = (device.cavity.total_inductance
               + josephson_inductance(device.squid, device.bias.dc_flux_fraction))
    x = solve_x_tan_x(boundary_condition_strength(device, 0.0))
    return math.sin(x) * math.sqrt(HBAR * omega_c / (2.0 * l_total))


def _small_parameter_verdict(ratio: float) -> str:
    if ratio < RATIO_OK_BELOW:
        return VERDICT_OK
    if ratio <= RATIO_VIOLATION_ABOVE:
        return VERDICT_WARNING
    return VERDICT_VIOLATION


def _field_verdict(ratio: float) -> str:
    if ratio < FIELD_WARNING_ABOVE:
        return VERDICT_OK
    if ratio < 1.0:
        return VERDICT_WARNING
    return VERDICT_VIOLATION


def validate_regime(device: DeviceParameters,
                    cavity_current_estimate: float | None = None,
                    photon_number: float = 1.0) -> ConstraintReport:
    """Check the approximations behind the lumped flux-tunable-inductance model.

    Ratios reported (all should be small):

    * ``current``: |I / I_c| sec(pi Phi_dc/Phi_0), with I defaulting to the
      zero-point current scaled by sqrt(photon_number + 1)
    * ``inductance``: beta_L sec(pi Phi_dc/Phi_0)
    * ``flux_kick``: flux change from a zero-point mechanical displacement
      in units of Phi_0
    * ``field``: B_ext / B_c against the material critical field

    Returns pure data; violations are reported, never raised.
    """
    if cavity_current_estimate is not None and cavity_current_estimate < 0.0:
        raise ValueError("cavity_current_estimate must be non-negative")
    bias = device.bias
    mech = device.mechanical
    sec = _secant(bias.dc_flux_fraction)
    if cavity_current_estimate is None:
        cavity_current_estimate = (cavity_zero_point_current(device)
                                   * math.sqrt(photon_number + 1.0))
    current_ratio = abs(cavity_current_estimate / device.squid.critical_current * sec)
    inductance_ratio = abs(beta_l(device.squid) * sec)
    flux_kick_ratio = abs(mech.geometric_factor * bias.external_field
                          * mech.oscillator_length * zero_point_displacement(mech)
                          / FLUX_QUANTUM)
    field_ratio = bias.external_field / device.material_critical_field
    verdicts = {
        "current": _small_parameter_verdict(current_ratio),
        "inductance": _small_parameter_verdict(inductance_ratio),
        "flux_kick": _small_parameter_verdict(flux_kick_ratio),
        "field": _field_verdict(field_ratio),
    }
    return ConstraintReport(current_ratio, inductance_ratio, flux_kick_ratio,
                            field_ratio, verdicts)


def figures_of_merit(device: DeviceParameters) -> DerivedQuantities:
    """Populate every derived quantity at the dc operating point."""
    bias = device.bias
    omega_c = renormalized_cavity_frequency(device, method="table_scaling")
    g0 = optomechanical_coupling(device)
    alpha, chi = parametric_coupling(device)
    kappa = omega_c / device.cavity.quality_factor
    gamma_m = device.mechanical.frequency / device.mechanical.quality_factor
    return DerivedQuantities(
        josephson_inductance=josephson_inductance(device.squid, bias.dc_flux_fraction),
        plasma_frequency=plasma_frequency(device.squid, bias.dc_flux_fraction),
        beta_L=beta_l(device.squid),
        renormalized_cavity_frequency=omega_c,
        zero_point_displacement=zero_point_displacement(device.mechanical),
        g0=g0,
        alpha=alpha,
        chi=chi,
        kappa=kappa,
        gamma_m=gamma_m,
        nonlinearity_parameter=g0 * g0 / (kappa * device.mechanical.frequency),
    )


REGIME_ULTRA_STRONG = "ultra_strong"
REGIME_STRONG = "strong"
REGIME_WEAK = "weak"


def harmonic_couplings(device: DeviceParameters,
                       max_harmonic: int) -> list[tuple[int, float, str]]:
    """Radiation-pressure coupling to the odd beam harmonics.

    Harmonic n couples at g0 * n**-1.5 (reduced loop-area overlap and
    zero-point amplitude at higher frequency).  Each entry is classified:
    ultra-strong when g0(n)^2 / (kappa * n * omega_m) > 1, strong when
    g0(n) > max(kappa, gamma_m), weak otherwise.  Output is strictly
    decreasing in the coupling.
    """
    if max_harmonic < 1:
        raise ValueError("max_harmonic must be >= 1")
    derived = figures_of_merit(device)
    out: list[tuple[int, float, str]] = []
    for n in range(1, max_harmonic + 1, 2):
        g_n = derived.g0 * n ** -1.5
        if g_n * g_n / (derived.kappa * n * device.mechanical.frequency) > 1.0:
            regime = REGIME_ULTRA_STRONG
        elif g_n > max(derived.kappa, derived.gamma_m):
            regime = REGIME_STRONG
        else:
            regime = REGIME_WEAK
        out.append((n, g_n, regime))
    return out


def calibrated_capacitance_per_length(inductance_per_length: float,
                                      length: float,
                                      squid: SquidParameters,
                                      bare_frequency_at_zero_bias: float) -> float:
    """Capacitance per length that makes the mode equation match the
    stated zero-bias frequency.

    Solves 2 x0 / (l sqrt(L_c C_c)) = w(0) with x0 tan(x0) = L_c l / L_J(0),
    so the `mode_equation` and `table_scaling` methods agree at zero bias
    by construction.
    """
    lj0 = josephson_inductance(squid, 0.0)
    x0 = solve_x_tan_x(inductance_per_length * length / lj0)
    lc_cc = (2.0 * x0 / (length * bare_frequency_at_zero_bias)) ** 2
    return lc_cc / inductance_per_length


def reference_device(dc_flux_fraction: float = 0.35,
                     modulation_amplitude_fraction: float = 0.0,
                     temperature: float = 0.010) -> DeviceParameters:
    """Feasible niobium-on-chip reference device.

    100 nA junctions, a 1 nH line (5 mm at 200 nH/m), a 10 GHz zero-bias
    mode, a 10 MHz / 0.1 pg beam of length 10 um in a 40 mT in-plane field,
    quality factors 5e4 (cavity) and 1e4 (mechanics).  The capacitance per
    length is calibrated so the mode equation reproduces the zero-bias
    frequency; the junction capacitance (10 fF) keeps the plasma frequency
    far above the mode.  The flux modulation frequency defaults to twice
    the renormalized cavity frequency.
    """
    squid = SquidParameters(critical_current=100e-9, junction_capacitance=10e-15,
                            loop_self_inductance=10e-12)
    length = 5e-3
    inductance_per_length = 1e-9 / length
    bare = TWO_PI * 10e9
    capacitance_per_length = calibrated_capacitance_per_length(
        inductance_per_length, length, squid, bare)
    cavity = CavityParameters(
        inductance_per_length=inductance_per_length,
        capacitance_per_length=capacitance_per_length,
        length=length,
        bare_frequency_at_zero_bias=bare,
        quality_factor=5e4,
    )
    mechanical = MechanicalParameters(
        mass=1e-16,
        frequency=TWO_PI * 10e6,
        oscillator_length=10e-6,
        geometric_factor=2.0 / math.pi,
        quality_factor=1e4,
    )
    bias = BiasParameters(
        dc_flux_fraction=dc_flux_fraction,
        modulation_amplitude_fraction=modulation_amplitude_fraction,
        modulation_frequency=2.0 * bare * math.cos(math.pi * dc_flux_fraction),
        external_field=0.040,
        pump_amplitude=0.0,
        pump_frequency=0.0,
        temperature=temperature,
    )
    return DeviceParameters(squid=squid, cavity=cavity, mechanical=mechanical,
                            bias=bias, material_critical_field=0.198)
