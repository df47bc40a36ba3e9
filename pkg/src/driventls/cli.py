"""Command line interface: spectrum, heatpump, evolve, and verify.

Runs are configured by a YAML file (built-in defaults are used when no
config is given) and write CSV files with 17 significant digits, so a
fixed seed and config give byte-identical output.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 degenerate stationary state or frequency collision.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np
import yaml

from .dissipator import (
    BathSpec,
    cubic_density,
    density_matrix,
    evolve_schrodinger,
    evolve_interaction,
    flat_density,
    tabulated_density,
    total_generator,
)
from .errors import DegenerateStateError, FrequencyCollisionError
from .floquet import SystemParams, make_params
from .spectroscopy import mollow_spectrum
from .thermo import small_detuning_currents, thermo_report
from . import verify as verify_mod
from pathlib import Path


class ConfigError(ValueError):
    """Raised for any malformed or physically inconsistent configuration."""


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(row) + "\n")


@dataclass(frozen=True)
class DensityConfig:
    kind: str
    a: float | None = None
    value: float | None = None
    grid: tuple | None = None
    values: tuple | None = None

    def build(self):
        if self.kind == "cubic":
            return cubic_density(_require(self.a, "density.a"))
        if self.kind == "flat":
            return flat_density(_require(self.value, "density.value"))
        if self.kind == "tabulated":
            return tabulated_density(
                _require(self.grid, "density.grid"),
                _require(self.values, "density.values"),
            )
        raise ConfigError(f"unknown density kind {self.kind!r}")

    def to_dict(self):
        d = {"kind": self.kind}
        if self.a is not None:
            d["a"] = self.a
        if self.value is not None:
            d["value"] = self.value
        if self.grid is not None:
            d["grid"] = list(self.grid)
            d["values"] = list(self.values)
        return d


@dataclass(frozen=True)
class BathConfig:
    label: str
    channel: str
    temperature: float
    density: DensityConfig

    def build(self) -> BathSpec:
        try:
            return BathSpec(self.label, self.channel, self.temperature, self.density.build())
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self):
        return {
            "label": self.label,
            "channel": self.channel,
            "temperature": self.temperature,
            "density": self.density.to_dict(),
        }


@dataclass(frozen=True)
class RunConfig:
    omega0: float
    Omega: float
    g: float
    baths: tuple
    spectrum: dict = field(default_factory=dict)
    heatpump: dict = field(default_factory=dict)
    evolve: dict = field(default_factory=dict)
    verify: dict = field(default_factory=dict)

    def params(self) -> SystemParams:
        try:
            return make_params(self.omega0, self.Omega, self.g)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self):
        d = {
            "system": {"omega0": self.omega0, "Omega": self.Omega, "g": self.g},
            "baths": [b.to_dict() for b in self.baths],
        }
        for key in ("spectrum", "heatpump", "evolve", "verify"):
            block = getattr(self, key)
            if block:
                d[key] = dict(block)
        return d


def _require(value, name):
    if value is None:
        raise ConfigError(f"missing required config field {name!r}")
    return value


def _number(block, name, default=None):
    value = block.get(name, default)
    if value is None:
        raise ConfigError(f"missing required config field {name!r}")
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config field {name!r} must be a number, got {value!r}") from exc


def config_from_dict(data) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("top-level config must be a mapping")
    unknown = set(data) - {"system", "baths", "spectrum", "heatpump", "evolve", "verify"}
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    system = data.get("system")
    if not isinstance(system, dict):
        raise ConfigError("config must contain a 'system' mapping")
    baths = []
    for i, raw in enumerate(data.get("baths") or []):
        if not isinstance(raw, dict):
            raise ConfigError(f"baths[{i}] must be a mapping")
        dens_raw = raw.get("density")
        if not isinstance(dens_raw, dict) or "kind" not in dens_raw:
            raise ConfigError(f"baths[{i}].density must be a mapping with a 'kind'")
        dens = DensityConfig(
            kind=str(dens_raw["kind"]),
            a=dens_raw.get("a"),
            value=dens_raw.get("value"),
            grid=tuple(dens_raw["grid"]) if "grid" in dens_raw else None,
            values=tuple(dens_raw["values"]) if "values" in dens_raw else None,
        )
        baths.append(
            BathConfig(
                label=str(raw.get("label", f"bath{i}")),
                channel=str(_require(raw.get("channel"), f"baths[{i}].channel")),
                temperature=_number(raw, "temperature", 0.0),
                density=dens,
            )
        )
    return RunConfig(
        omega0=_number(system, "omega0"),
        Omega=_number(system, "Omega"),
        g=_number(system, "g"),
        baths=tuple(baths),
        spectrum=dict(data.get("spectrum") or {}),
        heatpump=dict(data.get("heatpump") or {}),
        evolve=dict(data.get("evolve") or {}),
        verify=dict(data.get("verify") or {}),
    )


def load_config(path) -> RunConfig:
    try:
        with open(path) as f:
            data = yaml.safe_load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    return config_from_dict(data)


def dump_config(cfg: RunConfig) -> str:
    return yaml.safe_dump(cfg.to_dict(), sort_keys=True)


FIG1_SYSTEM = {"omega0": 0.86, "Omega": 0.85, "g": 0.075}

DEFAULTS = {
    "spectrum": {
        "system": FIG1_SYSTEM,
        "baths": [
            {
                "label": "e",
                "channel": "sigma1",
                "temperature": 0.0,
                "density": {"kind": "cubic", "a": 1.0},
            }
        ],
        "spectrum": {"points": 2000},
    },
    "heatpump": {
        "system": {"omega0": 100.025, "Omega": 100.0, "g": 0.01},
        "baths": [
            {
                "label": "e",
                "channel": "sigma1",
                "temperature": 2.0,
                "density": {"kind": "flat", "value": 1.0},
            },
            {
                "label": "d",
                "channel": "sigma3",
                "temperature": 5.0,
                "density": {"kind": "flat", "value": 0.5},
            },
        ],
        "heatpump": {
            "sweep": {"delta_min": -0.05, "delta_max": 0.05, "points": 21}
        },
    },
    "evolve": {
        "system": FIG1_SYSTEM,
        "baths": [
            {
                "label": "e",
                "channel": "sigma1",
                "temperature": 0.0,
                "density": {"kind": "cubic", "a": 1.0},
            }
        ],
        "evolve": {"t_max": 40.0, "points": 400, "picture": "schrodinger"},
    },
    "verify": {"system": FIG1_SYSTEM, "baths": [], "verify": {}},
}


def _resolve_config(args, command) -> RunConfig:
    if args.config is not None:
        return load_config(args.config)
    return config_from_dict(DEFAULTS[command])


def cmd_spectrum(cfg: RunConfig, out: Path, seed: int) -> int:
    p = cfg.params()
    if len(cfg.baths) != 1:
        raise ConfigError("spectrum requires exactly one bath")
    bath = cfg.baths[0]
    if bath.channel != "sigma1" or bath.temperature != 0.0:
        raise ConfigError("spectrum requires a single vacuum sigma1 bath")
    if bath.density.kind != "cubic":
        raise ConfigError("spectrum requires a cubic vacuum spectral density")
    block = cfg.spectrum
    points = int(block.get("points", 2000))
    if points < 0:
        raise ConfigError("spectrum.points must be >= 0")
    normalize = bool(block.get("normalize", False))
    omega_min = _number(block, "omega_min", p.Omega - 4 * p.omega_r)
    omega_max = _number(block, "omega_max", p.Omega + 4 * p.omega_r)
    if omega_max <= omega_min:
        raise ConfigError("spectrum.omega_max must exceed spectrum.omega_min")

    grid = np.linspace(omega_min, omega_max, points) if points else None
    spec = mollow_spectrum(p, bath.density.a, omega_grid=grid, normalize=normalize)

    line_rows = [["elastic", _fmt(spec.elastic_frequency), _fmt(0.0), _fmt(spec.elastic_weight)]]
    for ln in spec.lines:
        line_rows.append([ln.kind, _fmt(ln.center), _fmt(ln.width), _fmt(ln.weight)])
    _write_csv(out / "spectrum_lines.csv", ["kind", "center", "width", "weight"], line_rows)
    written = ["spectrum_lines.csv"]
    if points:
        _write_csv(
            out / "spectrum.csv",
            ["omega", "intensity"],
            (
                [_fmt(w), _fmt(i)]
                for w, i in zip(spec.grid_omega, spec.grid_intensity)
            ),
        )
        written.insert(0, "spectrum.csv")
    print(f"spectrum: Omega_R={_fmt(p.omega_r)}, elastic weight={_fmt(spec.elastic_weight)}")
    print("wrote " + ", ".join(str(out / name) for name in written))
    return 0


def _thermo_row(p, baths_cfg):
    report = thermo_report(p, [b.build() for b in baths_cfg])
    by_channel = {b.channel: b.label for b in baths_cfg}
    j_d = report.currents.get(by_channel.get("sigma3", ""), 0.0)
    j_e = report.currents.get(by_channel.get("sigma1", ""), 0.0)
    entropy = report.entropy_rate if report.entropy_rate is not None else float("nan")
    return report, [_fmt(j_d), _fmt(j_e), _fmt(report.power), _fmt(entropy), report.regime]


def cmd_heatpump(cfg: RunConfig, out: Path, seed: int) -> int:
    p = cfg.params()
    channels = sorted(b.channel for b in cfg.baths)
    if channels != ["sigma1", "sigma3"]:
        raise ConfigError("heatpump requires exactly one sigma1 and one sigma3 bath")
    report, row = _thermo_row(p, cfg.baths)
    _write_csv(out / "thermo.csv", ["J_d", "J_e", "P", "entropy_rate", "regime"], [row])
    print(
        f"heatpump: regime={report.regime}, "
        f"J_d={row[0]}, J_e={row[1]}, P={row[2]}"
    )
    written = [out / "thermo.csv"]

    sweep = cfg.heatpump.get("sweep")
    if sweep:
        dmin = _number(sweep, "delta_min")
        dmax = _number(sweep, "delta_max")
        n = int(sweep.get("points", 21))
        if n < 2 or dmax <= dmin:
            raise ConfigError("heatpump.sweep needs points >= 2 and delta_max > delta_min")
        rows = []
        prev_regime = None
        flips = []
        for delta in np.linspace(dmin, dmax, n):
            p_d = make_params(cfg.Omega + delta, cfg.Omega, cfg.g)
            rep, r = _thermo_row(p_d, cfg.baths)
            rows.append([_fmt(delta)] + r)
            if prev_regime is not None and rep.regime != prev_regime:
                flips.append((prev_regime, rep.regime, delta))
            prev_regime = rep.regime
        _write_csv(
            out / "sweep.csv",
            ["delta", "J_d", "J_e", "P", "entropy_rate", "regime"],
            rows,
        )
        written.append(out / "sweep.csv")
        for before, after, delta in flips:
            print(f"regime flip {before} -> {after} at delta <= {_fmt(delta)}")
    print("wrote " + ", ".join(str(w) for w in written))
    return 0


_RHO0_KINDS = {
    "excited": np.diag([1.0, 0.0]),
    "ground": np.diag([0.0, 1.0]),
    "mixed": np.eye(2) / 2.0,
}


def cmd_evolve(cfg: RunConfig, out: Path, seed: int) -> int:
    p = cfg.params()
    if not cfg.baths:
        raise ConfigError("evolve requires at least one bath")
    gen = total_generator(p, [b.build() for b in cfg.baths])
    block = cfg.evolve
    t_max = _number(block, "t_max", 40.0)
    points = int(block.get("points", 400))
    picture = str(block.get("picture", "schrodinger"))
    if t_max <= 0 or points < 2:
        raise ConfigError("evolve needs t_max > 0 and points >= 2")
    if picture not in ("schrodinger", "interaction"):
        raise ConfigError(f"unknown evolve.picture {picture!r}")
    rho0_raw = block.get("rho0", "excited")
    if isinstance(rho0_raw, str):
        if rho0_raw not in _RHO0_KINDS:
            raise ConfigError(f"unknown evolve.rho0 {rho0_raw!r}")
        rho0_m = _RHO0_KINDS[rho0_raw]
    else:
        rho0_m = np.array(rho0_raw, dtype=complex)
    try:
        rho0 = density_matrix(rho0_m)
    except ValueError as exc:
        raise ConfigError(f"invalid evolve.rho0: {exc}") from exc

    rows = []
    for t in np.linspace(0.0, t_max, points):
        if picture == "schrodinger":
            rho = evolve_schrodinger(p, gen, rho0, t)
        else:
            rho = evolve_interaction(gen, rho0, t)
        rows.append(
            [
                _fmt(t),
                _fmt(rho.m[0, 0].real),
                _fmt(rho.m[1, 1].real),
                _fmt(rho.m[0, 1].real),
                _fmt(rho.m[0, 1].imag),
            ]
        )
    _write_csv(
        out / "trajectory.csv",
        ["t", "rho11", "rho22", "re_rho12", "im_rho12"],
        rows,
    )
    print(f"evolve: {points} samples of the {picture}-picture solution on [0, {_fmt(t_max)}]")
    print(f"wrote {out / 'trajectory.csv'}")
    return 0


def cmd_verify(cfg: RunConfig, out: Path, seed: int) -> int:
    block = cfg.verify
    cases = block.get("cases")
    cases = int(cases) if cases is not None else None
    tolerances = dict(block.get("tolerances") or {})
    results = verify_mod.run_all(seed=seed, cases=cases, tolerances=tolerances)
    rows = []
    for r in results:
        status = "pass" if r.passed else "FAIL"
        rows.append([r.name, str(r.cases), _fmt(r.tolerance), _fmt(r.max_violation), status])
        print(f"{status:4s}  {r.name:30s} worst={_fmt(r.max_violation)} tol={_fmt(r.tolerance)}")
    _write_csv(
        out / "verify.csv",
        ["check", "cases", "tolerance", "max_violation", "status"],
        rows,
    )
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed; wrote {out / 'verify.csv'}")
    if failed:
        replay = {"seed": seed}
        if cases is not None:
            replay["cases"] = cases
        if tolerances:
            replay["tolerances"] = tolerances
        print(f"replay with: driventls verify --seed {seed}  # config verify block: {replay}")
        return 1
    return 0


COMMANDS = {
    "spectrum": cmd_spectrum,
    "heatpump": cmd_heatpump,
    "evolve": cmd_evolve,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="driventls",
        description="Driven two-level system: fluorescence spectra and heat-pump thermodynamics",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("spectrum", "closed-form fluorescence spectrum of the driven TLS in vacuum"),
        ("heatpump", "stationary currents, power, and regime of the two-bath heat pump"),
        ("evolve", "time evolution of a state under the full master equation"),
        ("verify", "run the built-in invariant and oracle check suites"),
    ):
        cp = sub.add_parser(name, help=help_text)
        cp.add_argument("--config", default=None, help="YAML run configuration")
        cp.add_argument("--out", default=".", help="output directory for CSV files")
        cp.add_argument("--seed", type=int, default=0, help="RNG seed for randomized checks")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args, args.command)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](cfg, out, args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (FrequencyCollisionError, DegenerateStateError) as exc:
        print(f"degeneracy error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
