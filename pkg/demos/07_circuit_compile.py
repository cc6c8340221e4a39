"""Compile the FMO-8 model onto tunable-circuit parameters.

Site energies become qubit detunings (gauge-shifted so the lowest site
sits at the 4 GHz base offset), every nonzero coupling gets a tunable
coupler solved for the scaled target g, and the fitted bath oscillators
scale down with the same factor s = 5000.  Hardware-range violations
would land in plan.feasibility; dispersive-regime caveats go to
plan.warnings.
"""

import json
import warnings

from excisim import Oscillator, OscillatorSet, ParameterRangeWarning, ScaleMap, build_model
from excisim.compiler import compile as compile_circuit

ENERGIES = [12505.0, 12425.0, 12195.0, 12375.0, 12600.0, 12515.0, 12465.0, 12700.0]
COUPLINGS = [
    (0, 1, -94.8), (0, 2, 5.5), (0, 3, -5.9), (0, 4, 7.1), (0, 5, -15.1),
    (0, 6, -12.2), (0, 7, 39.5), (1, 2, 29.8), (1, 3, 7.6), (1, 4, 1.6),
    (1, 5, 13.1), (1, 6, 5.7), (1, 7, 7.9), (2, 3, -58.9), (2, 4, -1.2),
    (2, 5, -9.3), (2, 6, 3.4), (2, 7, 1.4), (3, 4, -64.1), (3, 5, -17.4),
    (3, 6, -62.3), (3, 7, -1.6), (4, 5, 89.5), (4, 6, -4.6), (4, 7, 4.4),
    (5, 6, 35.1), (5, 7, -9.1), (6, 7, -11.1),
]

# six-oscillator decomposition of the 300 K bath (omega0, eta, Q in cm^-1)
BATH_ROWS = [
    (27.0, 2.42, 0.67), (74.0, 8.60, 0.49), (140.0, 11.98, 0.47),
    (246.0, 14.10, 0.80), (380.0, 10.00, 1.27), (560.0, 5.40, 1.84),
]

with warnings.catch_warnings():
    warnings.simplefilter("ignore", ParameterRangeWarning)
    fmo = build_model(ENERGIES, COUPLINGS)
bath = OscillatorSet([Oscillator(w0, eta, w0 / q, 150.0) for w0, eta, q in BATH_ROWS])

plan = compile_circuit(fmo, bath, ScaleMap(5000.0))

print(f"feasible: {plan.feasible}   "
      f"({len(plan.feasibility)} violations, {len(plan.warnings)} warnings)")
print("\nqubit detunings [GHz]:",
      " ".join(f"{d:.3f}" for d in plan.detunings_ghz))

print("\nstrongest couplers:")
by_size = sorted(plan.couplers.items(),
                 key=lambda kv: -abs(plan.targets_ghz[kv[0]]))
for (i, j), spec in by_size[:5]:
    print(f"  ({i},{j}): target g = {plan.targets_ghz[(i, j)]*1e3:8.2f} MHz, "
          f"coupler at {spec.delta_c_ghz:7.3f} GHz")

print("\nscaled bath oscillators for qubit 0:")
for osc in plan.oscillators[0]:
    print(f"  {osc.frequency_ghz:6.3f} GHz, coupling {osc.coupling_mhz:6.2f} MHz,"
          f" Q = {osc.q_factor:.2f}")

# the JSON document the CLI writes is one call away
doc = plan.to_dict()
print(f"\nplan serializes to {len(json.dumps(doc))} bytes of JSON")
