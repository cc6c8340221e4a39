"""Downhill exciton relaxation in the eight-site FMO monomer.

Secular rates between exciton states are built from the super-Ohmic
density at 300 K; starting from site 0 (the antenna side) population
funnels toward the lowest exciton, ending in a Boltzmann distribution.
Also prints the dominant relaxation pathways above the 0.3 cm^-1
weight threshold.

Site energies and couplings follow the 8-chromophore Hamiltonian of
Schmidt am Busch et al., J. Phys. Chem. Lett. 2, 93 (2011).
"""

import warnings

import numpy as np

from excisim import (
    ParameterRangeWarning,
    SuperOhmic,
    build_model,
    eigendecompose,
    pathways,
    redfield_propagate,
    redfield_rates,
    thermal_wavenumber,
    kelvin,
)

ENERGIES = [12505.0, 12425.0, 12195.0, 12375.0, 12600.0, 12515.0, 12465.0, 12700.0]
COUPLINGS = [
    (0, 1, -94.8), (0, 2, 5.5), (0, 3, -5.9), (0, 4, 7.1), (0, 5, -15.1),
    (0, 6, -12.2), (0, 7, 39.5), (1, 2, 29.8), (1, 3, 7.6), (1, 4, 1.6),
    (1, 5, 13.1), (1, 6, 5.7), (1, 7, 7.9), (2, 3, -58.9), (2, 4, -1.2),
    (2, 5, -9.3), (2, 6, 3.4), (2, 7, 1.4), (3, 4, -64.1), (3, 5, -17.4),
    (3, 6, -62.3), (3, 7, -1.6), (4, 5, 89.5), (4, 6, -4.6), (4, 7, 4.4),
    (5, 6, 35.1), (5, 7, -9.1), (6, 7, -11.1),
]

with warnings.catch_warnings():
    # the published Hamiltonian has many sub-10 cm^-1 couplings; fine here
    warnings.simplefilter("ignore", ParameterRangeWarning)
    fmo = build_model(ENERGIES, COUPLINGS)

eig = eigendecompose(fmo)
sd = SuperOhmic(35.0, 150.0)
rates = redfield_rates(eig, sd, temperature_k=300.0)

print("dominant relaxation pathways (weight >= 0.3 cm^-1):")
for p in pathways(eig, sd, 0.3)[:6]:
    print(f"  exciton {p.from_state} -> {p.to_state}: gap {p.gap_cm1:7.1f} cm^-1,"
          f" weight {p.weight_cm1:6.2f} cm^-1")

rho0 = np.zeros((8, 8), complex)
rho0[0, 0] = 1.0
t = np.linspace(0.0, 10.0, 201)
traj = redfield_propagate(eig, rates, rho0, t)

print("\nsite populations:")
print("   t [ps]   " + " ".join(f"site{j}" for j in range(8)))
for i in (0, 10, 40, 100, 200):
    row = " ".join(f"{p:5.2f}" for p in traj.populations[i])
    print(f"  {t[i]:6.2f}   {row}")

kt = thermal_wavenumber(kelvin(300.0))
boltz = np.exp(-(eig.energies - eig.energies[0]) / kt)
boltz /= boltz.sum()
final = np.einsum("jm,jk,km->m", eig.vectors, traj.rho[-1], eig.vectors).real
print("\nexciton populations at 10 ps vs Boltzmann:")
for m in range(8):
    print(f"  state {m}: {final[m]:.4f}  (thermal {boltz[m]:.4f})")
