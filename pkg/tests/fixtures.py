"""Published oscillator-decomposition tables used as validation fixtures.

Each row pairs a molecular-side oscillator (cm^-1) with its circuit-side
counterpart as printed (value, unit, quantum of the printed precision).
The circuit columns are rounded to between one and four significant
figures, so consistency checks must allow for that quantization.
"""

from excisim.units import Quantity, Unit

GHZ = Unit.FREQUENCY_GHZ
MHZ = Unit.FREQUENCY_MHZ


def mhz(value, ulp):
    return (Quantity(value, MHZ), Quantity(ulp, MHZ))


def ghz(value, ulp):
    return (Quantity(value, GHZ), Quantity(ulp, GHZ))


# Six-oscillator decomposition of the 300 K super-Ohmic density:
# (freq_cm1, coupling_cm1, Q, circuit freq +/- ulp, circuit coupling +/- ulp)
DECOMPOSITION_300K = [
    (27.0, 2.42, 0.67, mhz(162.0, 1.0), mhz(14.50, 0.01)),
    (74.0, 8.60, 0.49, mhz(444.0, 1.0), mhz(51.56, 0.01)),
    (140.0, 11.98, 0.47, mhz(839.0, 1.0), mhz(71.83, 0.01)),
    (246.0, 14.10, 0.80, ghz(1.5, 0.1), mhz(84.54, 0.01)),
    (380.0, 10.00, 1.27, ghz(2.0, 1.0), mhz(59.95, 0.01)),
    (560.0, 5.40, 1.84, ghz(3.0, 1.0), mhz(32.38, 0.01)),
]

# Fifteen-oscillator decomposition of the measured low-temperature
# mode density (same column layout).
DECOMPOSITION_MEASURED = [
    (20.0, 3.0, 0.93, mhz(120.0, 1.0), mhz(18.00, 0.01)),
    (37.0, 5.9, 1.35, mhz(222.0, 1.0), mhz(35.38, 0.01)),
    (72.0, 9.7, 1.89, mhz(432.0, 1.0), mhz(58.16, 0.01)),
    (118.0, 7.8, 4.00, mhz(707.0, 1.0), mhz(46.77, 0.01)),
    (142.0, 2.8, 9.00, mhz(851.0, 1.0), mhz(16.79, 0.01)),
    (190.0, 16.5, 5.00, ghz(1.1, 0.1), mhz(98.93, 0.01)),
    (237.0, 10.4, 8.80, ghz(1.4, 0.1), mhz(62.36, 0.01)),
    (260.0, 6.1, 10.80, ghz(1.6, 0.1), mhz(36.57, 0.01)),
    (282.0, 9.9, 11.75, ghz(1.7, 0.1), mhz(59.36, 0.01)),
    (325.0, 4.8, 18.06, ghz(1.9, 0.1), mhz(28.78, 0.01)),
    (363.0, 6.3, 20.17, ghz(2.2, 0.1), mhz(37.77, 0.01)),
    (380.0, 5.3, 29.23, ghz(2.3, 0.1), mhz(31.79, 0.01)),
    (426.0, 4.4, 30.43, ghz(2.6, 0.1), mhz(26.38, 0.01)),
    (478.0, 3.4, 48.00, ghz(2.9, 0.1), mhz(20.39, 0.01)),
    (500.0, 1.3, 35.71, ghz(3.0, 1.0), mhz(7.79, 0.01)),
]


def scale_consistency(fmo: Quantity, circuit: Quantity, ulp: Quantity, s: float,
                      rel_tol: float = 0.02) -> bool:
    """True when the row pair is consistent with scale factor ``s``.

    A row passes if its implied ratio is within ``rel_tol`` of ``s``, or
    if the prediction fmo/s agrees with the printed circuit value to
    within one quantum of the printed precision.
    """
    from excisim.units import apply_scale, convert, ScaleMap

    predicted = convert(apply_scale(fmo, ScaleMap(s)), circuit.unit).magnitude
    implied = s * predicted / circuit.magnitude
    if abs(implied / s - 1.0) <= rel_tol:
        return True
    return abs(predicted - circuit.magnitude) <= ulp.magnitude


def all_rows():
    """Yield (fmo Quantity, circuit Quantity, ulp Quantity, fine) pairs.

    ``fine`` marks rows whose printed precision is better than 1%,
    suitable for estimating the scale factor itself.
    """
    from excisim.units import wavenumber

    for table in (DECOMPOSITION_300K, DECOMPOSITION_MEASURED):
        for freq_cm1, coupling_cm1, _q, (cf, cf_ulp), (cc, cc_ulp) in table:
            for fmo, circ, ulp in (
                (wavenumber(freq_cm1), cf, cf_ulp),
                (wavenumber(coupling_cm1), cc, cc_ulp),
            ):
                fine = ulp.magnitude / circ.magnitude < 0.01
                yield fmo, circ, ulp, fine


# Eight-site FMO Hamiltonian (cm^-1), site energies and couplings from
# Schmidt am Busch et al., J. Phys. Chem. Lett. 2, 93 (2011), as tabulated
# by Moix et al., J. Phys. Chem. Lett. 2, 3045 (2011).
FMO8_ENERGIES = [12505.0, 12425.0, 12195.0, 12375.0, 12600.0, 12515.0, 12465.0, 12700.0]

FMO8_COUPLINGS = [
    (0, 1, -94.8), (0, 2, 5.5), (0, 3, -5.9), (0, 4, 7.1),
    (0, 5, -15.1), (0, 6, -12.2), (0, 7, 39.5),
    (1, 2, 29.8), (1, 3, 7.6), (1, 4, 1.6), (1, 5, 13.1),
    (1, 6, 5.7), (1, 7, 7.9),
    (2, 3, -58.9), (2, 4, -1.2), (2, 5, -9.3), (2, 6, 3.4), (2, 7, 1.4),
    (3, 4, -64.1), (3, 5, -17.4), (3, 6, -62.3), (3, 7, -1.6),
    (4, 5, 89.5), (4, 6, -4.6), (4, 7, 4.4),
    (5, 6, 35.1), (5, 7, -9.1),
    (6, 7, -11.1),
]


def fmo8_model():
    import warnings

    from excisim.model import ParameterRangeWarning, build_model

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParameterRangeWarning)
        return build_model(FMO8_ENERGIES, FMO8_COUPLINGS)
