"""Unit bookkeeping and the molecule-to-circuit frequency slowdown.

Everything internal runs in cm^-1 and ps.  Strings with explicit units
come in through parse_quantity, and a ScaleMap carries spectra between
the molecular frame and a slowed-down simulator frame: energies divide
by s, times multiply by s.
"""

from excisim import (
    Quantity,
    Unit,
    apply_scale,
    convert,
    kelvin,
    parse_quantity,
    scale_map_from_beats,
    thermal_wavenumber,
    wavenumber,
)

# parse a few tagged strings the way the CLI does
for text in ("12400 cm^-1", "35 GHz", "208.5 cm-1", "77 K", "200 fs"):
    q = parse_quantity(text)
    print(f"{text:>12}  ->  {q.magnitude:g} {q.unit.value}")

print()
print("thermal energies:")
for t in (300.0, 77.0):
    kt = thermal_wavenumber(kelvin(t))
    print(f"  {t:5.0f} K  ->  kT = {kt:7.2f} cm^-1 "
          f"= {convert(wavenumber(kt), Unit.FREQUENCY_GHZ).magnitude:8.1f} GHz")

# A 200 fs molecular beating period slowed to 1 ns fixes the scale factor.
scale = scale_map_from_beats(parse_quantity("200 fs"), parse_quantity("1 ns"))
print(f"\nscale factor from beating times: s = {scale.scale_factor:g}")

coupling = wavenumber(87.0)
scaled = apply_scale(coupling, scale)
print(f"an 87 cm^-1 coupling maps to "
      f"{convert(scaled, Unit.FREQUENCY_MHZ).magnitude:.2f} MHz")

dephasing_time = Quantity(0.1, Unit.TIME_PS)
print(f"a {dephasing_time.magnitude} ps molecular dephasing time maps to "
      f"{convert(apply_scale(dephasing_time, scale), Unit.TIME_NS).magnitude:g} ns")
