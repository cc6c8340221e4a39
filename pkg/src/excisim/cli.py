"""Command-line front end: config ingestion, run orchestration, emission.

Configs are JSON documents with ``model``/``bath``/``dynamics``/``scale``/
``output`` blocks.  Every physical quantity is a string carrying its
unit (``"35 cm^-1"``, ``"300 K"``, ``"5 ps"``); unknown or missing keys
are rejected with the offending dotted key path.  Each run writes its
artifacts plus a ``manifest.json`` that embeds the config, the resolved
seed and library versions; pointing ``--config`` at a manifest reruns it
bit-for-bit.

Exit codes: 0 success, 2 validation/config error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import platform
import sys
import warnings
from pathlib import Path

import numpy as np
import scipy

from . import __version__, chainmap, compiler, dynamics, model, spectral
from .errors import (
    ConvergenceError,
    DomainError,
    ExcisimError,
    GridError,
    HorizonError,
    IncompatibleUnits,
    IntegrationError,
    MissingDisorderSpec,
    SchemaError,
    ShapeError,
    SingularCoupler,
    StepError,
    UnreachableCoupling,
    ValidationError,
)
from .units import (
    Quantity,
    ScaleMap,
    Unit,
    convert,
    parse_quantity,
    scale_map_from_beats,
)

SUBCOMMANDS = ("simulate", "fit-sd", "compile", "enaqt", "pathways", "chain")

_VALIDATION_ERRORS = (
    SchemaError,
    ValidationError,
    ShapeError,
    IncompatibleUnits,
    DomainError,
    GridError,
    HorizonError,
    MissingDisorderSpec,
)
_NUMERICAL_ERRORS = (
    ConvergenceError,
    IntegrationError,
    StepError,
    SingularCoupler,
    UnreachableCoupling,
)


# ---------------------------------------------------------------------------
# schema helpers

def _check_keys(block: dict, path: str, required: set[str], optional: set[str]):
    if not isinstance(block, dict):
        raise SchemaError(f"{path} must be an object")
    for key in block:
        if key not in required and key not in optional:
            raise SchemaError(f"unknown key {path}.{key}")
    for key in sorted(required):
        if key not in block:
            raise SchemaError(f"missing key {path}.{key}")


def _quantity(block: dict, path: str, key: str, unit: Unit, default=None) -> float:
    """Read a unit-tagged string and return it converted to ``unit``."""
    if key not in block:
        if default is not None:
            return default
        raise SchemaError(f"missing key {path}.{key}")
    raw = block[key]
    if not isinstance(raw, str):
        raise SchemaError(
            f"{path}.{key} must be a string with an explicit unit, got {raw!r}"
        )
    try:
        return convert(parse_quantity(raw), unit).magnitude
    except (DomainError, IncompatibleUnits) as exc:
        raise SchemaError(f"{path}.{key}: {exc}") from exc


def _integer(block, path, key, default=None, minimum=None):
    if key not in block:
        if default is not None:
            return default
        raise SchemaError(f"missing key {path}.{key}")
    value = block[key]
    if not isinstance(value, int) or isinstance(value, bool):
        raise SchemaError(f"{path}.{key} must be an integer")
    if minimum is not None and value < minimum:
        raise SchemaError(f"{path}.{key} must be >= {minimum}")
    return value


def _number(block, path, key, default=None):
    if key not in block:
        if default is not None:
            return default
        raise SchemaError(f"missing key {path}.{key}")
    value = block[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{path}.{key} must be a number")
    return float(value)


def _block(config: dict, name: str, required: bool = True) -> dict | None:
    if name not in config:
        if required:
            raise SchemaError(f"missing key {name}")
        return None
    return config[name]


# ---------------------------------------------------------------------------
# config ingestion

def load_config(path: Path) -> tuple[dict, dict | None]:
    """Parse a config file; returns (config, manifest) where manifest is
    the wrapper document when the file is a previously written manifest."""
    try:
        text = path.read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: top level must be an object")
    if "manifest_version" in doc:
        _check_keys(
            doc,
            "manifest",
            {"manifest_version", "subcommand", "seed", "config_sha256", "config"},
            {"versions"},
        )
        return doc["config"], doc
    return doc, None


def _config_digest(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


_SCALE_KEYS = {
    "factor", "tau_mol", "tau_sim", "j_ic", "j_jc", "j_direct",
    "base_offset", "dominance",
}


def validate_config(config: dict) -> None:
    """Reject unknown keys in every block that is present."""
    _check_keys(
        config, "config", set(),
        {"model", "bath", "dynamics", "scale", "output", "notes"},
    )
    if "notes" in config and not isinstance(config["notes"], str):
        raise SchemaError("config.notes must be a string")
    if "model" in config:
        _check_keys(
            config["model"], "model",
            {"site_energies", "couplings"}, {"disorder_sigma"},
        )
    if "bath" in config:
        _validate_bath_keys(config["bath"])
    if "dynamics" in config:
        _check_keys(config["dynamics"], "dynamics", set(), _DYNAMICS_KEYS)
    if "scale" in config:
        _check_keys(config["scale"], "scale", set(), _SCALE_KEYS)
    if "output" in config:
        _check_keys(config["output"], "output", set(), {"directory", "formats"})


def _build_model(config: dict) -> model.ExcitonModel:
    block = _block(config, "model")
    _check_keys(
        block, "model", {"site_energies", "couplings"}, {"disorder_sigma"}
    )
    energies_raw = block["site_energies"]
    if not isinstance(energies_raw, list) or not energies_raw:
        raise SchemaError("model.site_energies must be a nonempty list")
    energies = [
        _quantity({"e": e}, f"model.site_energies[{i}]", "e", Unit.WAVENUMBER_CM1)
        for i, e in enumerate(energies_raw)
    ]
    couplings_raw = block["couplings"]
    if not isinstance(couplings_raw, list):
        raise SchemaError("model.couplings must be a list of [i, j, value] rows")
    triples = []
    for idx, row in enumerate(couplings_raw):
        if not isinstance(row, list) or len(row) != 3:
            raise SchemaError(
                f"model.couplings[{idx}] must be [site_i, site_j, quantity]"
            )
        i, j, raw = row
        if not isinstance(i, int) or not isinstance(j, int):
            raise SchemaError(f"model.couplings[{idx}] site indices must be integers")
        v = _quantity({"v": raw}, f"model.couplings[{idx}]", "v", Unit.WAVENUMBER_CM1)
        triples.append((i, j, v))
    sigma = None
    if "disorder_sigma" in block:
        sigma = _quantity(block, "model", "disorder_sigma", Unit.WAVENUMBER_CM1)
    return model.build_model(energies, triples, disorder_sigma=sigma)


_BATH_KEYS_BY_FORM = {
    "super_ohmic": ({"lambda", "omega_c"}, set()),
    "tabulated": ({"file"}, set()),
    "oscillators": ({"oscillators"}, set()),
    "star": ({"frequencies", "couplings"}, set()),
}
_BATH_COMMON_OPTIONAL = {
    "temperature",
    "k_oscillators",
    "fit_grid_max",
    "fit_grid_points",
    "fit_alpha",
    "fit_n_starts",
}


def _validate_bath_keys(block) -> str:
    if not isinstance(block, dict) or "form" not in block:
        raise SchemaError("missing key bath.form")
    form = block["form"]
    if form not in _BATH_KEYS_BY_FORM:
        raise SchemaError(
            f"bath.form must be one of {sorted(_BATH_KEYS_BY_FORM)}, got {form!r}"
        )
    required, extra = _BATH_KEYS_BY_FORM[form]
    _check_keys(
        block, "bath", {"form"} | required, extra | _BATH_COMMON_OPTIONAL
    )
    return form


def _parse_bath(config: dict, config_dir: Path):
    """Returns (base_sd or None, bath block); sd is None for star baths."""
    block = _block(config, "bath")
    form = _validate_bath_keys(block)
    if form == "super_ohmic":
        lam = _quantity(block, "bath", "lambda", Unit.WAVENUMBER_CM1)
        omega_c = _quantity(block, "bath", "omega_c", Unit.WAVENUMBER_CM1)
        return spectral.SuperOhmic(lam, omega_c), block
    if form == "tabulated":
        path = config_dir / block["file"]
        if not path.exists():
            raise SchemaError(f"bath.file: {path} does not exist")
        return spectral.Tabulated.from_file(path), block
    if form == "oscillators":
        sd = spectral.OscillatorSum(
            _parse_oscillator_set(block), _bath_temperature(block)
        )
        return sd, block
    return None, block  # star: handled by the chain subcommand


def _parse_oscillator_set(block: dict) -> spectral.OscillatorSet:
    rows = block["oscillators"]
    if not isinstance(rows, list) or not rows:
        raise SchemaError("bath.oscillators must be a nonempty list")
    oscs = []
    for idx, row in enumerate(rows):
        path = f"bath.oscillators[{idx}]"
        _check_keys(row, path, {"omega0", "eta"}, {"q", "kappa0", "alpha"})
        omega0 = _quantity(row, path, "omega0", Unit.WAVENUMBER_CM1)
        eta = _quantity(row, path, "eta", Unit.WAVENUMBER_CM1)
        if ("q" in row) == ("kappa0" in row):
            raise SchemaError(f"{path} needs exactly one of q or kappa0")
        if "q" in row:
            kappa0 = omega0 / _number(row, path, "q")
        else:
            kappa0 = _quantity(row, path, "kappa0", Unit.WAVENUMBER_CM1)
        alpha = _quantity(row, path, "alpha", Unit.WAVENUMBER_CM1, default=10.0 * omega0)
        oscs.append(spectral.Oscillator(omega0, eta, kappa0, alpha))
    return spectral.OscillatorSet(tuple(oscs))


def _bath_temperature(block: dict) -> float:
    return _quantity(block, "bath", "temperature", Unit.TEMPERATURE_K)


def _parse_sink(dyn: dict) -> dynamics.SinkSpec | None:
    if "sink" not in dyn:
        return None
    sink = dyn["sink"]
    _check_keys(sink, "dynamics.sink", {"site", "time_constant"}, set())
    tau = _quantity(sink, "dynamics.sink", "time_constant", Unit.TIME_PS)
    if tau <= 0.0:
        raise SchemaError("dynamics.sink.time_constant must be positive")
    return dynamics.SinkSpec(
        site=_integer(sink, "dynamics.sink", "site", minimum=0),
        rate_ps=1.0 / tau,
    )


def _time_grid(dyn: dict) -> np.ndarray:
    t_max = _quantity(dyn, "dynamics", "t_max", Unit.TIME_PS)
    dt_out = _quantity(dyn, "dynamics", "dt_out", Unit.TIME_PS)
    if t_max <= 0.0 or dt_out <= 0.0:
        raise SchemaError("dynamics.t_max and dynamics.dt_out must be positive")
    steps = round(t_max / dt_out)
    if steps < 1 or abs(steps * dt_out - t_max) > 1e-9 * t_max:
        raise SchemaError("dynamics.t_max must be an integer multiple of dynamics.dt_out")
    return np.linspace(0.0, t_max, steps + 1)


def _initial_state(dyn: dict, n_sites: int) -> np.ndarray:
    if "initial_amplitudes" in dyn:
        amps = np.asarray(dyn["initial_amplitudes"], dtype=float)
        if amps.shape != (n_sites,):
            raise SchemaError(
                "dynamics.initial_amplitudes must list one amplitude per site"
            )
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise SchemaError("dynamics.initial_amplitudes must not be all zero")
        return amps / norm
    site = _integer(dyn, "dynamics", "initial_site", default=0, minimum=0)
    if site >= n_sites:
        raise SchemaError(f"dynamics.initial_site {site} out of range")
    psi = np.zeros(n_sites)
    psi[site] = 1.0
    return psi


def _gamma_cm1(dyn: dict, key: str = "gamma"):
    raw = dyn[key]
    if isinstance(raw, list):
        return np.array(
            [
                _quantity({"g": g}, f"dynamics.{key}[{i}]", "g", Unit.WAVENUMBER_CM1)
                for i, g in enumerate(raw)
            ]
        )
    return _quantity(dyn, "dynamics", key, Unit.WAVENUMBER_CM1)


# ---------------------------------------------------------------------------
# emission

def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".12g")


def write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2) + "\n")


def _emit_populations(out_dir, times, populations, sink, formats):
    n = populations.shape[1]
    header = ["time_ps"] + [f"pop_site_{j}" for j in range(n)] + ["sink"]
    rows = [
        [times[k], *populations[k], sink[k]] for k in range(times.size)
    ]
    paths = [out_dir / "populations.csv"]
    write_csv(paths[0], header, rows)
    if "json" in formats:
        paths.append(out_dir / "populations.json")
        write_json(
            paths[-1],
            {
                "time_ps": [float(t) for t in times],
                "populations": [[float(x) for x in row] for row in populations],
                "sink": [float(x) for x in sink],
            },
        )
    return paths


# ---------------------------------------------------------------------------
# subcommand runners

def _output_options(config):
    block = _block(config, "output", required=False) or {}
    _check_keys(block, "output", set(), {"directory", "formats"})
    formats = block.get("formats", ["csv"])
    if not isinstance(formats, list) or any(
        f not in ("csv", "json") for f in formats
    ):
        raise SchemaError("output.formats entries must be 'csv' or 'json'")
    return block.get("directory"), formats


_DYNAMICS_KEYS = {
    "engine",
    "initial_site",
    "initial_amplitudes",
    "t_max",
    "dt_out",
    "sink",
    "gamma",
    "gamma_list",
    "noise_file",
    "n_traj",
    "seed",
    "dephasing_extra_time",
    "disorder_realizations",
    "pathway_threshold",
}


def _dynamics_block(config) -> dict:
    dyn = _block(config, "dynamics")
    _check_keys(dyn, "dynamics", set(), _DYNAMICS_KEYS)
    return dyn


def _sample_models(mdl, dyn, seed):
    draws = _integer(dyn, "dynamics", "disorder_realizations", default=1, minimum=1)
    if mdl.disorder_sigma is None:
        if draws > 1:
            raise SchemaError(
                "dynamics.disorder_realizations needs model.disorder_sigma"
            )
        return [mdl]
    return [model.sample_disorder(mdl, seed + 1 + r) for r in range(draws)]


def run_simulate(config, config_dir, out_dir, seed, threads):
    mdl = _build_model(config)
    dyn = _dynamics_block(config)
    engine = dyn.get("engine")
    if engine not in ("redfield", "hsr", "lindblad"):
        raise SchemaError("dynamics.engine must be redfield, hsr or lindblad")
    t = _time_grid(dyn)
    psi0 = _initial_state(dyn, mdl.n_sites)
    _, formats = _output_options(config)
    realizations = _sample_models(mdl, dyn, seed)

    sd = temperature = None
    extra = 0.0
    if engine == "redfield":
        sd, bath = _parse_bath(config, config_dir)
        if sd is None:
            raise SchemaError("bath.form star is only used by the chain command")
        temperature = _bath_temperature(bath)
        if "dephasing_extra_time" in dyn:
            tau = _quantity(dyn, "dynamics", "dephasing_extra_time", Unit.TIME_PS)
            if tau <= 0.0:
                raise SchemaError("dynamics.dephasing_extra_time must be positive")
            extra = 1.0 / tau

    pops_sum = np.zeros((t.size, mdl.n_sites))
    sink_sum = np.zeros(t.size)
    for drawn in realizations:
        if engine == "redfield":
            eig = model.eigendecompose(drawn)
            rates = dynamics.redfield_rates(eig, sd, temperature)
            rho0 = np.outer(psi0, psi0).astype(complex)
            traj = dynamics.redfield_propagate(eig, rates, rho0, t, extra)
            pops, sink = traj.populations, traj.sink_captured
        elif engine == "hsr":
            noise = _hsr_noise(dyn, config_dir, drawn.n_sites)
            n_traj = _integer(dyn, "dynamics", "n_traj", default=1000, minimum=1)
            ens = dynamics.ensemble_average(
                drawn, noise, _parse_sink(dyn), psi0, t, n_traj, seed,
                n_threads=threads,
            )
            pops, sink = ens.populations, ens.sink_captured
        else:
            if "gamma" not in dyn:
                raise SchemaError("missing key dynamics.gamma")
            rho0 = np.outer(psi0, psi0).astype(complex)
            traj = dynamics.lindblad_dephasing_propagate(
                drawn, _gamma_cm1(dyn), _parse_sink(dyn), rho0, t
            )
            pops, sink = traj.populations, traj.sink_captured
        pops_sum += pops
        sink_sum += sink

    n = len(realizations)
    return _emit_populations(out_dir, t, pops_sum / n, sink_sum / n, formats)


def _hsr_noise(dyn, config_dir, n_sites):
    has_gamma = "gamma" in dyn
    has_file = "noise_file" in dyn
    if has_gamma == has_file:
        raise SchemaError("hsr needs exactly one of dynamics.gamma or dynamics.noise_file")
    if has_gamma:
        return dynamics.WhiteNoise(_gamma_cm1(dyn))
    path = config_dir / dyn["noise_file"]
    if not path.exists():
        raise SchemaError(f"dynamics.noise_file: {path} does not exist")
    series = dynamics.NoiseSeries.from_file(path)
    if series.shifts_cm1.shape[1] != n_sites:
        raise SchemaError("dynamics.noise_file column count does not match the model")
    return series


def run_fit_sd(config, config_dir, out_dir, seed, threads):
    sd, bath = _parse_bath(config, config_dir)
    if sd is None:
        raise SchemaError("bath.form star cannot be fitted")
    temperature = _bath_temperature(bath)
    target = spectral.temperature_transform(sd, temperature)
    k = _integer(bath, "bath", "k_oscillators", minimum=1)
    points = _integer(bath, "bath", "fit_grid_points", default=512, minimum=8)
    if "fit_grid_max" in bath:
        grid_max = _quantity(bath, "bath", "fit_grid_max", Unit.WAVENUMBER_CM1)
    elif isinstance(sd, spectral.Tabulated):
        grid_max = 1.2 * float(np.max(sd.omega_cm1))
    else:
        raise SchemaError("missing key bath.fit_grid_max (needed for parametric baths)")
    grid = np.linspace(0.0, grid_max, points)
    opts = spectral.FitOptions(
        seed=seed,
        n_starts=_integer(bath, "bath", "fit_n_starts", default=12, minimum=1),
        alpha_cm1=(
            _quantity(bath, "bath", "fit_alpha", Unit.WAVENUMBER_CM1)
            if "fit_alpha" in bath
            else None
        ),
    )
    oscillators, residual = spectral.fit_oscillators(target, k, grid, opts)

    _, formats = _output_options(config)
    osc_rows = [
        [o.omega0_cm1, o.eta_cm1, o.kappa0_cm1, o.q_factor]
        for o in oscillators.oscillators
    ]
    paths = [out_dir / "oscillators.csv", out_dir / "sd_curve.csv"]
    write_csv(paths[0], ["omega0_cm1", "eta_cm1", "kappa0_cm1", "q_factor"], osc_rows)
    target_curve = target(grid)
    fit_curve = oscillators.thermal_eval(temperature, grid)
    curve_rows = list(zip(grid, target_curve, fit_curve))
    write_csv(paths[1], ["omega_cm1", "target_c_cm1", "fit_c_cm1"], curve_rows)
    if "json" in formats:
        paths.append(out_dir / "fit.json")
        write_json(
            paths[-1],
            {
                "residual": residual,
                "oscillators": [
                    {
                        "omega0_cm1": o.omega0_cm1,
                        "eta_cm1": o.eta_cm1,
                        "kappa0_cm1": o.kappa0_cm1,
                        "alpha_cm1": o.alpha_cm1,
                        "q_factor": o.q_factor,
                    }
                    for o in oscillators.oscillators
                ],
            },
        )
    print(f"fit residual (relative RMS): {residual:.6g}")
    return paths


def run_compile(config, config_dir, out_dir, seed, threads):
    mdl = _build_model(config)
    bath = _block(config, "bath")
    if _validate_bath_keys(bath) != "oscillators":
        raise SchemaError("compile needs bath.form = oscillators")
    oscillators = _parse_oscillator_set(bath)
    scale_block = _block(config, "scale")
    _check_keys(scale_block, "scale", set(), _SCALE_KEYS)
    if "factor" in scale_block:
        if "tau_mol" in scale_block or "tau_sim" in scale_block:
            raise SchemaError("scale.factor excludes scale.tau_mol/tau_sim")
        factor = _number(scale_block, "scale", "factor")
        if factor <= 0.0:
            raise SchemaError("scale.factor must be positive")
        scale = ScaleMap(factor)
    else:
        tau_mol = _quantity(scale_block, "scale", "tau_mol", Unit.TIME_PS)
        tau_sim = _quantity(scale_block, "scale", "tau_sim", Unit.TIME_PS)
        scale = scale_map_from_beats(
            Quantity(tau_mol, Unit.TIME_PS), Quantity(tau_sim, Unit.TIME_PS)
        )
    opts = compiler.CompileOptions(
        j_ic_ghz=_quantity(scale_block, "scale", "j_ic", Unit.FREQUENCY_GHZ, 0.1),
        j_jc_ghz=_quantity(scale_block, "scale", "j_jc", Unit.FREQUENCY_GHZ, 0.1),
        j_direct_ghz=_quantity(
            scale_block, "scale", "j_direct", Unit.FREQUENCY_GHZ, 0.0
        ),
        dominance=_number(scale_block, "scale", "dominance", default=10.0),
        base_offset_ghz=_quantity(
            scale_block, "scale", "base_offset", Unit.FREQUENCY_GHZ, 4.0
        ),
    )
    plan = compiler.compile(mdl, oscillators, scale, opts)
    path = out_dir / "circuit_plan.json"
    write_json(path, plan.to_dict())
    status = "feasible" if plan.feasible else "INFEASIBLE"
    print(f"circuit plan {status}: {len(plan.feasibility)} violations, "
          f"{len(plan.warnings)} warnings")
    return [path]


def run_enaqt(config, config_dir, out_dir, seed, threads):
    mdl = _build_model(config)
    dyn = _dynamics_block(config)
    if "gamma_list" not in dyn:
        raise SchemaError("missing key dynamics.gamma_list")
    raw = dyn["gamma_list"]
    if not isinstance(raw, list) or not raw:
        raise SchemaError("dynamics.gamma_list must be a nonempty list")
    gammas = [
        _quantity({"g": g}, f"dynamics.gamma_list[{i}]", "g", Unit.WAVENUMBER_CM1)
        for i, g in enumerate(raw)
    ]
    sink = _parse_sink(dyn)
    if sink is None:
        raise SchemaError("missing key dynamics.sink")
    horizon = _quantity(dyn, "dynamics", "t_max", Unit.TIME_PS)
    psi0 = _initial_state(dyn, mdl.n_sites)
    n_traj = _integer(dyn, "dynamics", "n_traj", default=1000, minimum=1)
    curve = dynamics.enaqt_sweep(
        mdl, gammas, sink, psi0, horizon, n_traj, seed, n_threads=threads
    )
    path = out_dir / "enaqt.csv"
    write_csv(path, ["gamma_cm1", "efficiency", "stderr"], curve)
    return [path]


def run_pathways(config, config_dir, out_dir, seed, threads):
    mdl = _build_model(config)
    sd, _ = _parse_bath(config, config_dir)
    if sd is None:
        raise SchemaError("pathways needs an evaluable bath form")
    dyn = _dynamics_block(config)
    if "pathway_threshold" not in dyn:
        raise SchemaError("missing key dynamics.pathway_threshold")
    threshold = _quantity(dyn, "dynamics", "pathway_threshold", Unit.WAVENUMBER_CM1)
    eig = model.eigendecompose(mdl)
    found = model.pathways(eig, sd, threshold)
    path = out_dir / "pathways.csv"
    write_csv(
        path,
        ["from_state", "to_state", "gap_cm1", "weight_cm1"],
        [[p.from_state, p.to_state, p.gap_cm1, p.weight_cm1] for p in found],
    )
    return [path]


def run_chain(config, config_dir, out_dir, seed, threads):
    bath = _block(config, "bath")
    form = _validate_bath_keys(bath)
    if form == "star":
        if not isinstance(bath["frequencies"], list) or not isinstance(
            bath["couplings"], list
        ):
            raise SchemaError("bath.frequencies and bath.couplings must be lists")
        freqs = [
            _quantity({"f": f}, f"bath.frequencies[{i}]", "f", Unit.WAVENUMBER_CM1)
            for i, f in enumerate(bath["frequencies"])
        ]
        coups = [
            _quantity({"c": c}, f"bath.couplings[{i}]", "c", Unit.WAVENUMBER_CM1)
            for i, c in enumerate(bath["couplings"])
        ]
        star = chainmap.BathStar(np.array(freqs), np.array(coups))
    elif form == "oscillators":
        oscillators = _parse_oscillator_set(bath)
        star = chainmap.BathStar(
            np.array([o.omega0_cm1 for o in oscillators.oscillators]),
            np.array([o.eta_cm1 for o in oscillators.oscillators]),
        )
    else:
        raise SchemaError("chain needs bath.form = star or oscillators")
    chain = chainmap.to_chain(star)
    grid = np.linspace(0.0, 1.5 * float(np.max(star.frequencies)), 1024)
    deviation = chainmap.chain_spectral_check(star, chain, grid)
    path = out_dir / "chain.json"
    write_json(
        path,
        {
            "site_frequencies_cm1": [float(x) for x in chain.site_frequencies],
            "nn_couplings_cm1": [float(x) for x in chain.nn_couplings],
            "head_coupling_cm1": float(chain.head_coupling),
            "spectral_check_max_dev_cm1": float(deviation),
        },
    )
    return [path]


_RUNNERS = {
    "simulate": run_simulate,
    "fit-sd": run_fit_sd,
    "compile": run_compile,
    "enaqt": run_enaqt,
    "pathways": run_pathways,
    "chain": run_chain,
}


# ---------------------------------------------------------------------------
# entry point

def _resolve_threads(arg_threads) -> int:
    if arg_threads is not None:
        value = arg_threads
    else:
        env = os.environ.get("EXCISIM_THREADS")
        if env is None:
            return 1
        try:
            value = int(env)
        except ValueError as exc:
            raise SchemaError(f"EXCISIM_THREADS must be an integer, got {env!r}") from exc
    if value < 1:
        raise SchemaError("thread count must be >= 1")
    return value


def _resolve_seed(arg_seed, manifest, config) -> int:
    if arg_seed is not None:
        if arg_seed < 0:
            raise SchemaError("--seed must be a nonnegative integer")
        return arg_seed
    if manifest is not None:
        return int(manifest["seed"])
    dyn = config.get("dynamics")
    if isinstance(dyn, dict) and "seed" in dyn:
        return _integer(dyn, "dynamics", "seed", minimum=0)
    return 0


def _write_manifest(out_dir, subcommand, config, seed):
    write_json(
        out_dir / "manifest.json",
        {
            "manifest_version": 1,
            "subcommand": subcommand,
            "seed": seed,
            "config_sha256": _config_digest(config),
            "config": config,
            "versions": {
                "excisim": __version__,
                "python": platform.python_version(),
                "numpy": np.__version__,
                "scipy": scipy.__version__,
            },
        },
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="excisim",
        description="Exciton transport runs, bath fits and circuit compilation",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, type=Path)
        p.add_argument("--out", type=Path, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=None)
    return parser


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    warnings.showwarning = _show_warning
    try:
        config, manifest = load_config(args.config)
        if manifest is not None and manifest["subcommand"] != args.subcommand:
            raise SchemaError(
                f"manifest was written by {manifest['subcommand']!r}, "
                f"not {args.subcommand!r}"
            )
        validate_config(config)
        seed = _resolve_seed(args.seed, manifest, config)
        threads = _resolve_threads(args.threads)
        out_override, _ = _output_options(config)
        if args.out is not None:
            out_dir = args.out
        elif out_override is not None:
            out_dir = Path(out_override)
        else:
            out_dir = Path(".")
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = _RUNNERS[args.subcommand](
            config, args.config.parent, out_dir, seed, threads
        )
        _write_manifest(out_dir, args.subcommand, config, seed)
        for path in [*paths, out_dir / "manifest.json"]:
            print(f"wrote {path}")
        return 0
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ExcisimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
