"""Physical constants (2018 CODATA, SI-exact values) and unit helpers.

All internal frequencies in this package are angular (rad/s).  Ordinary
frequencies (Hz) appear only at I/O boundaries; the conversion lives here
so there is exactly one factor of 2*pi in the codebase.
"""

import math

PLANCK = 6.62607015e-34  # J s
ELEMENTARY_CHARGE = 1.602176634e-19  # C
BOLTZMANN = 1.380649e-23  # J / K

HBAR = PLANCK / (2.0 * math.pi)  # J s
FLUX_QUANTUM = PLANCK / (2.0 * ELEMENTARY_CHARGE)  # Wb, h/(2e) = 2.067833848e-15

TWO_PI = 2.0 * math.pi


def hz_to_angular(frequency_hz: float) -> float:
    """Convert ordinary frequency (Hz) to angular frequency (rad/s)."""
    return TWO_PI * frequency_hz


def angular_to_hz(omega: float) -> float:
    """Convert angular frequency (rad/s) to ordinary frequency (Hz)."""
    return omega / TWO_PI
