"""Batch front end: config parsing, experiment execution, CSV emission.

Three subcommands:

    hsdpa-ee run      --config cfg.ini | --preset figure5   [--seed N] [--out DIR] [--reps N]
    hsdpa-ee sweep    --config cfg.ini | --preset figure7   [--seed N] [--out DIR] [--reps N]
    hsdpa-ee tablegen [--step-db 1.0] [--entries 30] [--out mcs_table.csv]

Config files are INI-style key = value text.  A minimal run config:

    [scenario]
    distance_m = 435
    i_or_dbm = -72.5
    geometry_db = 23
    alpha = 0.995
    speed_kmh = 3
    antenna_mode = SIMO
    strategy = SemiStatic
    duration_ttis = 10000
    seed = 1
    table = reference

    [controller]
    ee_smoothing = 0.01

A sweep config adds:

    [sweep]
    variable = speed
    values = 3, 30, 120
    strategies = FixedBaseline, SemiStatic
    repetitions = 4

`run` writes trace.csv and metrics.csv, `sweep` writes series.csv, and
all floats are emitted with repr so the files re-parse losslessly.
Exit codes: 0 success, 1 config parse failure, 2 invalid experiment,
3 I/O failure.  HSDPA_EE_THREADS caps sweep parallelism.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import os
import re
import sys
from dataclasses import dataclass, fields, replace

import numpy as np

from .ee_controller import ControllerConfig
from .link_channel import make_channel, path_gain_db
from .mcs_table import (
    McsTable,
    default_table,
    load_table_file,
    make_uniform_table,
    reference_table,
    table_to_csv,
)
from .power_model import PowerModelParams, shannon_ee, shannon_se, total_power
from .sim_engine import (
    FIXED_BASELINE,
    MIMO,
    PER_TTI_OPTIMAL,
    SEMI_STATIC,
    SIMO,
    SISO,
    ScenarioConfig,
    power_model_for_mode,
    run,
    sweep,
)

__all__ = [
    "ExperimentSpec",
    "PRESETS",
    "build_preset",
    "load_config",
    "cmd_run",
    "cmd_sweep",
    "cmd_tablegen",
    "main",
]

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_INVALID = 2
EXIT_IO = 3


class ConfigError(Exception):
    """Malformed config text; message carries file and line when known."""


@dataclass(frozen=True)
class ExperimentSpec:
    """One executable experiment: labelled runs, or a sweep definition."""

    name: str
    kind: str  # "run" | "sweep" | "analytic"
    scenarios: tuple[tuple[str, ScenarioConfig], ...] = ()
    template: ScenarioConfig | None = None
    variable: str = ""
    values: tuple = ()
    strategies: tuple[str, ...] = ()
    antenna_modes: tuple[str, ...] = ()
    repetitions: int = 1

    def __post_init__(self):
        if not self.name:
            raise ValueError("experiment name must be nonempty")
        if self.kind not in ("run", "sweep", "analytic"):
            raise ValueError(f"unknown experiment kind {self.kind!r}")


# ------------------------------------------------------------- config

_SCENARIO_KEYS = {
    "distance_m": float,
    "i_or_dbm": float,
    "geometry_db": float,
    "alpha": float,
    "noise_figure_db": float,
    "speed_kmh": float,
    "antenna_mode": str,
    "strategy": str,
    "duration_ttis": int,
    "seed": int,
    "feedback_delay_ttis": int,
    "baseline_power_dbm": float,
    "max_retransmissions": int,
    "dual_shift_factor": float,
    "pair_tol_db": float,
    "pilot_window_s": float,
    "table": str,
    "collect_trace": bool,
}

_CONTROLLER_KEYS = {f.name: f.type for f in fields(ControllerConfig)}
_POWER_KEYS = {"eta": float, "p_cir_w": float, "p_sta_w": float}
_SWEEP_KEYS = {
    "variable": str,
    "values": str,
    "strategies": str,
    "antenna_modes": str,
    "repetitions": int,
}

_BOOL_WORDS = {"1": True, "true": True, "yes": True, "on": True,
               "0": False, "false": False, "no": False, "off": False}


def _key_line(text: str, key: str) -> int | None:
    pat = re.compile(rf"^\s*{re.escape(key)}\s*[=:]", re.IGNORECASE)
    for i, line in enumerate(text.splitlines(), start=1):
        if pat.match(line):
            return i
    return None


def _coerce(raw: str, typ, where: str, text: str, key: str):
    raw = raw.strip()
    try:
        if typ is bool:
            return _BOOL_WORDS[raw.lower()]
        if typ is int:
            return int(raw)
        if typ is float:
            return float(raw)
        return raw
    except (ValueError, KeyError):
        line = _key_line(text, key)
        loc = f" [line {line}]" if line is not None else ""
        raise ConfigError(
            f"{where}{loc}: cannot parse {raw!r} as {typ.__name__} for key {key!r}"
        ) from None


def _section_dict(cp, section, allowed, path, text):
    out = {}
    if not cp.has_section(section):
        return out
    for key, raw in cp.items(section):
        if key not in allowed:
            line = _key_line(text, key)
            loc = f" [line {line}]" if line is not None else ""
            raise ConfigError(f"{path}{loc}: unknown key {key!r} in [{section}]")
        typ = allowed[key]
        typ = typ if isinstance(typ, type) else float  # annotations stored as strings
        out[key] = _coerce(raw, typ, path, text, key)
    return out


def _controller_value(name: str, raw: str, path: str, text: str):
    # ControllerConfig is all floats except min_mcs
    typ = int if name == "min_mcs" else float
    return _coerce(raw, typ, path, text, name)


def _resolve_table(label: str) -> McsTable:
    if label == "default":
        return default_table()
    if label == "reference":
        return reference_table()
    return load_table_file(label)


def _scenario_from_config(cp, path: str, text: str) -> ScenarioConfig:
    if not cp.has_section("scenario"):
        raise ConfigError(f"{path}: missing required [scenario] section")
    sc = _section_dict(cp, "scenario", _SCENARIO_KEYS, path, text)

    ctrl_kwargs = {}
    if cp.has_section("controller"):
        for key, raw in cp.items("controller"):
            if key not in _CONTROLLER_KEYS:
                line = _key_line(text, key)
                loc = f" [line {line}]" if line is not None else ""
                raise ConfigError(f"{path}{loc}: unknown key {key!r} in [controller]")
            ctrl_kwargs[key] = _controller_value(key, raw, path, text)
    pm_kwargs = _section_dict(cp, "power", _POWER_KEYS, path, text)

    channel = make_channel(
        sc.pop("distance_m", 435.0),
        sc.pop("i_or_dbm", -72.5),
        geometry_db=sc.pop("geometry_db", 23.0),
        alpha=sc.pop("alpha", 0.995),
        noise_figure_db=sc.pop("noise_figure_db", 9.0),
        speed_kmh=sc.pop("speed_kmh", 3.0),
    )
    mode = sc.pop("antenna_mode", SIMO)
    table = _resolve_table(sc.pop("table", "reference"))
    base_pm = PowerModelParams(**pm_kwargs)
    return ScenarioConfig(
        channel=channel,
        antenna_mode=mode,
        table=table,
        controller=ControllerConfig(**ctrl_kwargs),
        power_model=power_model_for_mode(mode, base_pm),
        **sc,
    )


def _split_list(raw: str) -> list[str]:
    return [tok.strip() for tok in raw.split(",") if tok.strip()]


def load_config(path: str, kind: str) -> ExperimentSpec:
    """Parse an INI config into an ExperimentSpec of the given kind.

    Raises ConfigError for malformed text (exit 1 territory) and
    ValueError for configs that parse but describe an invalid or
    incomplete experiment (exit 2).
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text, source=path)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None

    known = {"scenario", "controller", "power", "sweep"}
    for section in cp.sections():
        if section not in known:
            raise ConfigError(f"{path}: unknown section [{section}]")

    scenario = _scenario_from_config(cp, path, text)
    name = os.path.splitext(os.path.basename(path))[0]

    if kind == "run":
        return ExperimentSpec(
            name=name, kind="run", scenarios=((scenario.strategy, scenario),)
        )

    if not cp.has_section("sweep"):
        raise ValueError(f"{path}: sweep command needs a [sweep] section")
    sw = _section_dict(cp, "sweep", _SWEEP_KEYS, path, text)
    variable = sw.get("variable", "")
    raw_values = _split_list(sw.get("values", ""))
    if variable == "antenna_mode":
        values = tuple(raw_values)
    elif variable == "theta_min":
        values = tuple(int(v) for v in raw_values)
    else:
        values = tuple(float(v) for v in raw_values)
    return ExperimentSpec(
        name=name,
        kind="sweep",
        template=scenario,
        variable=variable,
        values=values,
        strategies=tuple(_split_list(sw.get("strategies", ""))) or (scenario.strategy,),
        antenna_modes=tuple(_split_list(sw.get("antenna_modes", ""))),
        repetitions=sw.get("repetitions", 1),
    )


# ------------------------------------------------------------- presets

_PRESET_SEED = 20210 + 8


def _preset_channel(**over):
    base = dict(distance_m=435.0, i_or_dbm=-72.5, geometry_db=23.0,
                alpha=0.995, speed_kmh=3.0)
    base.update(over)
    d = base.pop("distance_m")
    i_or = base.pop("i_or_dbm")
    return make_channel(d, i_or, **base)


def _preset_scenario(**over) -> ScenarioConfig:
    kwargs = dict(
        channel=_preset_channel(),
        antenna_mode=SIMO,
        strategy=SEMI_STATIC,
        duration_ttis=10_000,
        seed=_PRESET_SEED,
        controller=ControllerConfig(ee_smoothing=0.01),
        table=reference_table(),
        collect_trace=False,
    )
    kwargs.update(over)
    mode = kwargs["antenna_mode"]
    kwargs.setdefault("power_model", power_model_for_mode(mode, PowerModelParams()))
    return ScenarioConfig(**kwargs)


def _figure1() -> ExperimentSpec:
    return ExperimentSpec(name="figure1", kind="analytic")


def _figure2() -> ExperimentSpec:
    return ExperimentSpec(
        name="figure2",
        kind="sweep",
        template=_preset_scenario(strategy=FIXED_BASELINE, duration_ttis=3000),
        variable="fixed_power",
        values=tuple(float(p) for p in range(21, 45, 2)),
        strategies=(FIXED_BASELINE,),
        antenna_modes=(SIMO,),
        repetitions=3,
    )


def _figure5() -> ExperimentSpec:
    scs = tuple(
        (strat, _preset_scenario(strategy=strat, duration_ttis=2000, collect_trace=True))
        for strat in (FIXED_BASELINE, SEMI_STATIC, PER_TTI_OPTIMAL)
    )
    return ExperimentSpec(name="figure5", kind="run", scenarios=scs)


def _figure6() -> ExperimentSpec:
    scs = tuple(
        (strat, _preset_scenario(strategy=strat, duration_ttis=2000, collect_trace=True))
        for strat in (SEMI_STATIC, PER_TTI_OPTIMAL)
    )
    return ExperimentSpec(name="figure6", kind="run", scenarios=scs)


def _figure7() -> ExperimentSpec:
    return ExperimentSpec(
        name="figure7",
        kind="sweep",
        template=_preset_scenario(duration_ttis=8000),
        variable="speed",
        values=(3.0, 30.0, 120.0),
        strategies=(FIXED_BASELINE, SEMI_STATIC),
        antenna_modes=(SIMO,),
        repetitions=4,
    )


def _figure8() -> ExperimentSpec:
    return ExperimentSpec(
        name="figure8",
        kind="sweep",
        template=_preset_scenario(duration_ttis=6000),
        variable="distance",
        values=(400.0, 500.0, 650.0, 800.0, 1100.0, 1500.0),
        strategies=(FIXED_BASELINE, SEMI_STATIC),
        antenna_modes=(SIMO,),
        repetitions=3,
    )


def _figure9() -> ExperimentSpec:
    return ExperimentSpec(
        name="figure9",
        kind="sweep",
        template=_preset_scenario(duration_ttis=8000),
        variable="theta_min",
        values=(1, 26, 28, 30),
        strategies=(FIXED_BASELINE, SEMI_STATIC),
        antenna_modes=(SIMO,),
        repetitions=3,
    )


def _figure10() -> ExperimentSpec:
    return ExperimentSpec(
        name="figure10",
        kind="sweep",
        template=_preset_scenario(
            channel=_preset_channel(distance_m=430.0),
            strategy=FIXED_BASELINE,
            duration_ttis=3000,
        ),
        variable="fixed_power",
        values=tuple(float(p) for p in range(21, 45, 2)),
        strategies=(FIXED_BASELINE,),
        antenna_modes=(SIMO, MIMO),
        repetitions=4,
    )


def _figure11() -> ExperimentSpec:
    return ExperimentSpec(
        name="figure11",
        kind="sweep",
        template=_preset_scenario(duration_ttis=6000),
        variable="distance",
        values=(400.0, 430.0, 460.0, 500.0, 550.0, 650.0),
        strategies=(SEMI_STATIC,),
        antenna_modes=(SIMO, MIMO),
        repetitions=3,
    )


PRESETS = {
    "figure1": _figure1,
    "figure2": _figure2,
    "figure5": _figure5,
    "figure6": _figure6,
    "figure7": _figure7,
    "figure8": _figure8,
    "figure9": _figure9,
    "figure10": _figure10,
    "figure11": _figure11,
}


def build_preset(name: str, seed: int | None = None, reps: int | None = None) -> ExperimentSpec:
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; have {', '.join(sorted(PRESETS))}")
    spec = PRESETS[name]()
    if seed is not None:
        if spec.scenarios:
            spec = replace(
                spec,
                scenarios=tuple((lbl, replace(sc, seed=seed)) for lbl, sc in spec.scenarios),
            )
        if spec.template is not None:
            spec = replace(spec, template=replace(spec.template, seed=seed))
    if reps is not None and spec.kind == "sweep":
        spec = replace(spec, repetitions=reps)
    return spec


# ------------------------------------------------------------- emission

def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _analytic_rows(pm_base: PowerModelParams):
    # Shannon EE/SE against transmit power over a flat link with the
    # preset path loss folded into the effective noise floor
    g_lin = 10.0 ** (path_gain_db(435.0) / 10.0)
    n0w = 3.9811e-21 * 10.0 ** 0.9 * 5e6 / g_lin
    pm1 = replace(pm_base, m_a=1)
    pm2 = replace(pm_base, m_a=2)
    for p_dbm in np.linspace(0.0, 46.0, 461):
        p_w = 10.0 ** ((p_dbm - 30.0) / 10.0)
        yield (
            p_dbm,
            total_power(p_w, pm1),
            total_power(p_w, pm2),
            shannon_se(p_w, n0w),
            shannon_ee(p_w, pm1, n0w),
            shannon_ee(p_w, pm2, n0w),
        )


def cmd_run(spec: ExperimentSpec, out_dir: str) -> list[str]:
    """Execute labelled runs; write trace.csv + metrics.csv (curves.csv
    for the analytic preset). Returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    if spec.kind == "analytic":
        path = os.path.join(out_dir, "curves.csv")
        _write_csv(
            path,
            ["p_tx_dbm", "p_total_m1_w", "p_total_m2_w",
             "se_bps_hz", "ee_m1_bits_per_joule", "ee_m2_bits_per_joule"],
            _analytic_rows(PowerModelParams()),
        )
        print(f"{spec.name}: wrote {path}")
        return [path]
    if spec.kind != "run":
        raise ValueError(f"{spec.name} is a {spec.kind} preset; use the {spec.kind} command")

    trace_rows = []
    metric_rows = []
    for label, sc in spec.scenarios:
        metrics, trace = run(sc)
        metric_rows.append(
            (label, sc.antenna_mode,
             metrics.avg_ee_bits_per_joule, metrics.throughput_bps,
             metrics.reconfig_count, metrics.nack_rate,
             metrics.delivered_bits, metrics.consumed_energy_j,
             metrics.duration_ttis)
        )
        for r in trace:
            trace_rows.append(
                (label, sc.antenna_mode, r.tti_index, r.p_tx_dbm,
                 r.mcs_index, r.mcs_secondary, r.outcome,
                 r.delivered_bits, r.consumed_energy_j, r.reconfigured)
            )
        print(
            f"{label}/{sc.antenna_mode}: ee={metrics.avg_ee_bits_per_joule:.0f} bits/J  "
            f"throughput={metrics.throughput_bps / 1e6:.2f} Mbps  "
            f"nack={metrics.nack_rate:.3f}  reconfigs={metrics.reconfig_count}"
        )

    trace_path = os.path.join(out_dir, "trace.csv")
    metrics_path = os.path.join(out_dir, "metrics.csv")
    _write_csv(
        trace_path,
        ["strategy", "antenna_mode", "tti_index", "p_tx_dbm", "mcs_index",
         "mcs_secondary", "outcome", "delivered_bits", "consumed_energy_j",
         "reconfigured"],
        trace_rows,
    )
    _write_csv(
        metrics_path,
        ["strategy", "antenna_mode", "avg_ee_bits_per_joule", "throughput_bps",
         "reconfig_count", "nack_rate", "delivered_bits", "consumed_energy_j",
         "duration_ttis"],
        metric_rows,
    )
    print(f"{spec.name}: wrote {trace_path} ({len(trace_rows)} rows), {metrics_path}")
    return [trace_path, metrics_path]


def cmd_sweep(spec: ExperimentSpec, out_dir: str) -> list[str]:
    """Execute a sweep spec; write series.csv. Returns the paths written."""
    if spec.kind != "sweep":
        raise ValueError(f"{spec.name} is a {spec.kind} preset; use the {spec.kind} command")
    if not spec.values:
        raise ValueError(f"{spec.name}: sweep value list is empty")
    os.makedirs(out_dir, exist_ok=True)
    points = sweep(
        spec.template,
        spec.variable,
        list(spec.values),
        repetitions=spec.repetitions,
        strategies=spec.strategies or None,
        antenna_modes=spec.antenna_modes or None,
    )
    path = os.path.join(out_dir, "series.csv")
    _write_csv(
        path,
        ["variable", "value", "strategy", "mean_ee", "std_ee",
         "mean_reconfigs", "mean_throughput"],
        (
            (p.variable, p.value, p.strategy, p.mean_ee, p.std_ee,
             p.mean_reconfigs, p.mean_throughput)
            for p in points
        ),
    )
    print(f"{spec.name}: wrote {path} ({len(points)} rows, {spec.repetitions} reps/cell)")
    return [path]


def cmd_tablegen(step_db: float, entries: int, out_path: str) -> str:
    """Materialize the synthetic uniform table as CSV; returns the path."""
    table = make_uniform_table(step_db=step_db, entries=entries)
    text = table_to_csv(
        table,
        comment=f"synthetic uniform table: step {step_db} dB, {entries} entries",
    )
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {out_path} ({entries} entries)")
    return out_path


# ------------------------------------------------------------- entry

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsdpa-ee",
        description="Link-level EE experiments: runs, sweeps, table generation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "single scenario (or run-style preset); writes trace.csv + metrics.csv"),
        ("sweep", "parameter sweep (or sweep-style preset); writes series.csv"),
    ):
        p = sub.add_parser(name, help=help_text)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", metavar="PATH", help="INI experiment config")
        src.add_argument("--preset", metavar="NAME",
                         help=f"one of: {', '.join(sorted(PRESETS))}")
        p.add_argument("--seed", type=int, default=None, help="override scenario seed")
        p.add_argument("--out", metavar="DIR", default=".", help="output directory")
        p.add_argument("--reps", type=int, default=None,
                       help="override sweep repetitions")
    t = sub.add_parser("tablegen", help="emit a synthetic MCS table as CSV")
    t.add_argument("--step-db", type=float, default=1.0, help="threshold spacing, dB")
    t.add_argument("--entries", type=int, default=30, help="number of CQI levels")
    t.add_argument("--out", metavar="PATH", default="mcs_table.csv",
                   help="output CSV path")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "tablegen":
        try:
            cmd_tablegen(args.step_db, args.entries, args.out)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
        except OSError as exc:
            print(f"I/O error: {exc}", file=sys.stderr)
            return EXIT_IO
        return EXIT_OK

    try:
        if args.preset:
            spec = build_preset(args.preset, seed=args.seed, reps=args.reps)
        else:
            spec = load_config(args.config, args.command)
            if args.seed is not None:
                if spec.scenarios:
                    spec = replace(
                        spec,
                        scenarios=tuple(
                            (lbl, replace(sc, seed=args.seed)) for lbl, sc in spec.scenarios
                        ),
                    )
                if spec.template is not None:
                    spec = replace(spec, template=replace(spec.template, seed=args.seed))
            if args.reps is not None and spec.kind == "sweep":
                spec = replace(spec, repetitions=args.reps)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        if args.command == "run":
            cmd_run(spec, args.out)
        else:
            cmd_sweep(spec, args.out)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
