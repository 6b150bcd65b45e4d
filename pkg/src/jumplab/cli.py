"""Command-line front end.

    jumplab run CONFIG [--seed-offset N] [--out DIR] [--dump-paths]
    jumplab list experiments|models

CONFIG is an INI file (grammar in the README) or a report JSON written by an
earlier run, in which case its embedded configuration is replayed.

Exit status: 0 all verdicts pass, 1 a verdict failed, 2 refused or
inconclusive, 3 configuration, schema or I/O error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from pathlib import Path

from . import harness
from .model import BUILTIN_MODELS, builtin
from .noise import MEASURE_KINDS, LevyMeasure
from .solver import SolveConfig, solve

SCHEMA_VERSION = 1
EXIT_PASS, EXIT_FAIL, EXIT_REFUSED, EXIT_ERROR = 0, 1, 2, 3


class ConfigError(Exception):
    pass


# --- value parsing --------------------------------------------------------------


def _float(v, key):
    try:
        out = float(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a number, got {v!r}") from None
    return out


def _int(v, key):
    try:
        f = float(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected an integer, got {v!r}") from None
    if not f.is_integer():
        raise ConfigError(f"{key}: expected an integer, got {v!r}")
    return int(f)


def _floats(v, key):
    items = v if isinstance(v, (list, tuple)) else [s for s in str(v).split(",") if s.strip()]
    return [_float(x, key) for x in items]


def _ints(v, key):
    items = v if isinstance(v, (list, tuple)) else [s for s in str(v).split(",") if s.strip()]
    return [_int(x, key) for x in items]


def _bool(v, key):
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected true/false, got {v!r}")


def _atoms(v, key):
    """``"0.5:5.0, 0.7:2.0"`` or ``[[0.5, 5.0], ...]`` -> list of (s, z)."""
    if v in (None, "", []):
        return None
    if isinstance(v, (list, tuple)):
        return [[_float(s, key), _float(z, key)] for s, z in v]
    out = []
    for item in str(v).split(","):
        s, sep, z = item.partition(":")
        if not sep:
            raise ConfigError(f"{key}: atoms are written time:mark, got {item.strip()!r}")
        out.append([_float(s, key), _float(z, key)])
    return out


def _param(v):
    """Model parameters are numbers when they parse as numbers, text otherwise."""
    if isinstance(v, (int, float)):
        return float(v)
    try:
        return float(v)
    except ValueError:
        return str(v).strip()


# --- schema ---------------------------------------------------------------------------

# experiment keys: name -> (converter, default); default None means optional
_EXPERIMENT_KEYS = {
    "uniqueness_gap_experiment": {"x0": (_float, 0.0), "deltas": (_floats, [0.0, 1e-3, 1e-2]),
                                  "state_box": (_floats, [-10.0, 10.0]), "slack": (_float, 0.5)},
    "slanted_zero_experiment": {"x0s": (_floats, [0.0, 0.1]), "second_leg": (str, "solve")},
    "comparison_experiment": {"x0s": (_floats, [0.0, 0.0]), "enforce_hypotheses": (_bool, True),
                              "state_box": (_floats, [-5.0, 5.0])},
    "lattice_experiment": {"x0s": (_floats, [0.0, 0.1]), "refinements": (_ints, [1]),
                           "order_floor": (_float, 0.35)},
    "big_jump_equivalence_experiment": {"x0": (_float, 0.0), "big_jump_threshold": (_float, 1.0),
                                        "forced_atoms": (_atoms, None)},
    "spectrally_positive_experiment": {"g": (str, "clamp:1"), "alpha": (_float, 1.5), "x0": (_float, 0.0),
                                       "deltas": (_floats, [1e-3, 1e-2, 1e-1]), "z_min": (_float, 0.01),
                                       "z_max": (_float, 100.0), "require_g_zero": (_bool, True)},
}
_NOISE_KEYS = {"t_end": (_float, 1.0), "base_step": (_float, 1e-3), "guard": (_float, 1e6),
               "compensator": (str, None), "kind": (str, None), "z_min": (_float, None),
               "z_max": (_float, None), "alpha": (_float, None)}
_SEED_KEYS = {"start": (_int, 0), "count": (_int, 10)}
_TOL_KEYS = {"K": (_float, None)}
_SECTIONS = ("jumplab", "experiment", "model", "model2", "noise", "seeds", "tolerances", "output")


def _resolve_keys(section: str, raw: dict, schema: dict) -> dict:
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"[{section}] unknown key {unknown[0]!r}")
    out = {}
    for key, (conv, default) in schema.items():
        v = raw.get(key)
        if v is None or v == "":
            out[key] = default
        elif conv is str:
            out[key] = str(v).strip()
        else:
            out[key] = conv(v, f"[{section}] {key}")
    return out


def _resolve_model(section: str, raw: dict) -> dict:
    raw = dict(raw)
    label = raw.pop("label", None)
    if not label:
        raise ConfigError(f"[{section}] needs a label")
    label = str(label).strip()
    if label not in BUILTIN_MODELS:
        raise ConfigError(f"[{section}] unknown model {label!r}")
    allowed = BUILTIN_MODELS[label][1]
    for k in sorted(raw):
        if k not in allowed:
            raise ConfigError(f"[{section}] model {label!r} has no parameter {k!r}")
    return {"label": label, "params": {k: _param(v) for k, v in sorted(raw.items())}}


def resolve_config(sections: dict) -> dict:
    """Validate raw sections and fill in defaults. Idempotent on its own output."""
    unknown = sorted(set(sections) - set(_SECTIONS) - {"DEFAULT"})
    if unknown:
        raise ConfigError(f"unknown section [{unknown[0]}]")
    meta = sections.get("jumplab", {})
    if "schema_version" not in meta:
        raise ConfigError("[jumplab] schema_version is required")
    version = _int(meta["schema_version"], "[jumplab] schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"[jumplab] schema_version {version} is not supported (expected {SCHEMA_VERSION})")
    exp_raw = dict(sections.get("experiment", {}))
    name = str(exp_raw.get("name", "")).strip()
    if name not in harness.EXPERIMENTS:
        raise ConfigError(f"[experiment] unknown experiment {name!r}")
    exp = {"name": name, **_resolve_keys("experiment", {k: v for k, v in exp_raw.items() if k != "name"},
                                         _EXPERIMENT_KEYS[name])}
    cfg = {"schema_version": version, "experiment": exp}
    n_models = harness.EXPERIMENTS[name].n_models
    if n_models >= 1:
        cfg["model"] = _resolve_model("model", sections.get("model", {}))
    if n_models == 2:
        cfg["model2"] = _resolve_model("model2", sections["model2"]) if "model2" in sections else cfg["model"]
    cfg["noise"] = _resolve_keys("noise", dict(sections.get("noise", {})), _NOISE_KEYS)
    if cfg["noise"]["kind"] is not None and cfg["noise"]["kind"] not in MEASURE_KINDS:
        raise ConfigError(f"[noise] unknown measure kind {cfg['noise']['kind']!r}")
    cfg["seeds"] = _resolve_keys("seeds", dict(sections.get("seeds", {})), _SEED_KEYS)
    if cfg["seeds"]["count"] < 1:
        raise ConfigError("[seeds] count must be at least 1")
    cfg["tolerances"] = _resolve_keys("tolerances", dict(sections.get("tolerances", {})), _TOL_KEYS)
    return cfg


def read_config(path: str) -> tuple[dict, str | None]:
    """Parse CONFIG into ``(resolved config, output dir or None)``."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}") from None
    if p.suffix == ".json":
        try:
            report = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: not valid JSON ({e.msg})") from None
        embedded = report.get("config") if isinstance(report, dict) else None
        if not isinstance(embedded, dict):
            raise ConfigError(f"{path}: report has no embedded config")
        sections = {"jumplab": {"schema_version": embedded.get("schema_version")}}
        for k, v in embedded.items():
            if k in ("model", "model2"):
                sections[k] = {"label": v["label"], **v["params"]}
            elif k != "schema_version":
                sections[k] = v
        return resolve_config(sections), None
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as e:
        raise ConfigError(f"{path}: {e}") from None
    sections = {s: dict(parser.items(s)) for s in parser.sections()}
    out_dir = sections.get("output", {}).get("dir")
    extra = sorted(set(sections.get("output", {})) - {"dir"})
    if extra:
        raise ConfigError(f"[output] unknown key {extra[0]!r}")
    return resolve_config(sections), out_dir


# --- building and running ----------------------------------------------------------------


def _measure(noise: dict) -> LevyMeasure | None:
    if noise["kind"] is None:
        return None
    try:
        return LevyMeasure(noise["kind"], noise["z_min"] if noise["z_min"] is not None else 0.0,
                           noise["z_max"] if noise["z_max"] is not None else 0.0, noise["alpha"])
    except (TypeError, ValueError) as e:
        raise ConfigError(f"[noise] {e}") from None


def _spec(model: dict, noise: dict):
    try:
        return builtin(model["label"], measure=_measure(noise), **model["params"])
    except (KeyError, ValueError) as e:
        raise ConfigError(f"model {model['label']!r}: {e}") from None


def _solve_config(noise: dict) -> SolveConfig:
    try:
        return SolveConfig(noise["base_step"], noise["guard"], noise["compensator"])
    except ValueError as e:
        raise ConfigError(f"[noise] {e}") from None


def run_experiment(cfg: dict, want_legs: bool = False):
    """Run a resolved config; returns the report (and the dumped legs on request)."""
    exp, noise = cfg["experiment"], cfg["noise"]
    name = exp["name"]
    sc = _solve_config(noise)
    common = {"t_end": noise["t_end"], "seed_offset": cfg["seeds"]["start"]}
    n = cfg["seeds"]["count"]
    k = cfg["tolerances"]["K"]
    legs = []
    if name == "uniqueness_gap_experiment":
        s = _spec(cfg["model"], noise)
        rep = harness.uniqueness_gap_experiment(s, exp["x0"], exp["deltas"], n, sc, state_box=tuple(exp["state_box"]),
                                                slack=exp["slack"], **common)
        legs = [(s, exp["x0"]), (s, exp["x0"] + max(exp["deltas"]))]
    elif name in ("slanted_zero_experiment", "comparison_experiment", "lattice_experiment"):
        s1 = _spec(cfg["model"], noise)
        s2 = _spec(cfg["model2"], noise) if "model2" in cfg else s1
        x0s = tuple(exp["x0s"])
        if len(x0s) != 2:
            raise ConfigError("[experiment] x0s needs two values")
        if name == "slanted_zero_experiment":
            if exp["second_leg"] not in ("solve", "mirror"):
                raise ConfigError(f"[experiment] unknown second_leg {exp['second_leg']!r}")
            rep = harness.slanted_zero_experiment((s1, s2), x0s, n, sc, k=k, second_leg=exp["second_leg"], **common)
        elif name == "comparison_experiment":
            rep = harness.comparison_experiment((s1, s2), x0s, n, sc, k=k, state_box=tuple(exp["state_box"]),
                                                enforce_hypotheses=exp["enforce_hypotheses"], **common)
        else:
            rep = harness.lattice_experiment(s1, x0s, n, sc, k=k, refinements=exp["refinements"],
                                             order_floor=exp["order_floor"], **common)
        legs = [(s1, x0s[0]), (s2, x0s[1])]
    elif name == "big_jump_equivalence_experiment":
        s = _spec(cfg["model"], noise)
        rep = harness.big_jump_equivalence_experiment(s, exp["x0"], n, sc, threshold=exp["big_jump_threshold"],
                                                      forced_atoms=exp["forced_atoms"], **common)
        legs = [(s, exp["x0"])]
    else:
        rep = harness.spectrally_positive_experiment(exp["g"], exp["alpha"], exp["x0"], n, sc, k=k,
                                                     deltas=exp["deltas"], z_min=exp["z_min"], z_max=exp["z_max"],
                                                     require_g_zero=exp["require_g_zero"], **common)
        if rep.verdict != harness.REFUSED:
            m = LevyMeasure("stable_positive", exp["z_min"], exp["z_max"], exp["alpha"])
            legs = [(builtin("spectrally_positive", measure=m, g=exp["g"], alpha=exp["alpha"]), exp["x0"])]
    rep.config = cfg
    return (rep, legs) if want_legs else rep


def _dump_paths(legs, cfg: dict, out: Path):
    noise = cfg["noise"]
    sc = _solve_config(noise)
    pdir = out / "paths"
    pdir.mkdir(exist_ok=True)
    seeds = range(cfg["seeds"]["start"], cfg["seeds"]["start"] + cfg["seeds"]["count"])
    measure = legs[0][0].measure
    for spec, _ in legs:
        if spec.measure.mass() > 0:
            measure = spec.measure
    atoms = cfg["experiment"].get("forced_atoms")
    for seed in seeds:
        nz = harness._noise(measure, sc, noise["t_end"], seed, atoms)
        for i, (spec, x0) in enumerate(legs):
            path = solve(spec, nz, x0, sc)
            (pdir / f"seed{seed}_leg{i}.csv").write_text(path.to_csv())


EXIT_FOR = {harness.PASS: EXIT_PASS, harness.FAIL: EXIT_FAIL, harness.REFUSED: EXIT_REFUSED,
            harness.INCONCLUSIVE: EXIT_REFUSED}


def cmd_run(args) -> int:
    cfg, out_dir = read_config(args.config)
    if args.seed_offset:
        cfg["seeds"]["start"] += args.seed_offset
    out = Path(args.out or out_dir or "jumplab_out")
    rep, legs = run_experiment(cfg, want_legs=True)
    name = cfg["experiment"]["name"]
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{name}.json").write_text(rep.to_json())
        (out / f"{name}.csv").write_text(rep.rows_csv())
        if args.dump_paths and legs:
            _dump_paths(legs, cfg, out)
    except OSError as e:
        raise ConfigError(f"cannot write to {out}: {e.strerror}") from None
    print(f"{name}: {rep.verdict} ({len(rep.seeds)} seeds) -> {out}")
    return EXIT_FOR[rep.verdict]


def cmd_list(args) -> int:
    if args.kind == "experiments":
        for name, info in harness.EXPERIMENTS.items():
            print(f"{name}: {info.description} [parameters: {', '.join(info.parameters)}]")
    elif args.kind == "models":
        for name, (desc, params) in BUILTIN_MODELS.items():
            print(f"{name}: {desc} [parameters: {', '.join(params) or 'none'}]")
    else:
        print(f"unknown list kind {args.kind!r} (expected experiments or models)", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_PASS


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jumplab", description="Monte Carlo experiments for SDEs with jumps")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    r = sub.add_parser("run", help="run the experiment described by a config file")
    r.add_argument("config")
    r.add_argument("--seed-offset", type=int, default=0, help="shift the seed range by N")
    r.add_argument("--out", help="output directory (overrides [output] dir)")
    r.add_argument("--dump-paths", action="store_true", help="also write one CSV per seed and leg")
    r.set_defaults(func=cmd_run)
    ls = sub.add_parser("list", help="list experiments or models")
    ls.add_argument("kind")
    ls.set_defaults(func=cmd_list)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"jumplab: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
