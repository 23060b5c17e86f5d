"""Command-line front end.

Subcommands: simulate | classify | floquet | abel | portrait.  Configs are
JSON, strictly validated (unknown keys rejected); reports are JSON with all
floats at 17 significant digits so byte-identical reruns are guaranteed;
trajectories go to CSV, portraits to standalone SVG.

Exit codes: 0 success (scientific outcomes such as blow-up or a positivity
failure are results, not errors), 2 configuration error, 3 numerical or
analysis failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__, abel, competing, floquet, predator_prey
from .errors import ConfigError, DomainError, ToolkitError
from .model_core import PeriodicFunction
from .ode_engine import EventSpec, IntegratorConfig, integrate
from .portrait import render_portrait

_MODEL_TYPES = ("predator_prey", "competing", "periodic_predator_prey", "abel")
_DEFAULT_SAMPLES = {"simulate": 512, "portrait": 512, "floquet": 256}


# ---------------------------------------------------------------------------
# JSON emission: deterministic bytes, floats at 17 significant digits.

def _fmt_float(v: float) -> str:
    if not math.isfinite(v):
        return "null"
    if v == int(v) and abs(v) < 1e16:
        return f"{v:.1f}"
    return format(v, ".17g")


def _emit(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            f"{pad}  {json.dumps(str(k))}: {_emit(v, indent + 1)}" for k, v in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in items):
            return "[" + ", ".join(_emit(v) for v in items) + "]"
        inner = ",\n".join(f"{pad}  {_emit(v, indent + 1)}" for v in items)
        return "[\n" + inner + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _report(command: str, config: dict, result: dict) -> str:
    doc = {
        "toolkit": {"name": "recipop", "version": __version__},
        "command": command,
        "config": config,
        "result": result,
    }
    return _emit(doc) + "\n"


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format(float(v), ".17g") for v in row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Config validation.

def _expect_mapping(obj, name):
    if not isinstance(obj, dict):
        raise ConfigError(f"{name} must be an object, got {type(obj).__name__}")
    return obj


def _check_keys(d: dict, name: str, required: tuple, optional: tuple = ()):
    missing = [k for k in required if k not in d]
    if missing:
        raise ConfigError(f"{name}: missing required key(s) {missing}")
    unknown = [k for k in d if k not in required and k not in optional]
    if unknown:
        raise ConfigError(f"{name}: unknown key(s) {unknown}")


def _number(d, name, key, positive=False, default=None):
    if key not in d:
        if default is not None:
            return default
        raise ConfigError(f"{name}: missing {key}")
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{name}.{key} must be a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(f"{name}.{key} must be finite")
    if positive and v <= 0:
        raise ConfigError(f"{name}.{key} must be positive, got {v}")
    return v


def _coefficient(spec, name, period) -> PeriodicFunction:
    """A periodic coefficient: either a bare number (constant) or
    {"mean": m, "cos": [...], "sin": [...]} on the model period."""
    if isinstance(spec, (int, float)) and not isinstance(spec, bool):
        return PeriodicFunction(period, float(spec))
    spec = _expect_mapping(spec, name)
    _check_keys(spec, name, (), ("mean", "cos", "sin"))
    mean = _number(spec, name, "mean", default=0.0) if "mean" in spec else 0.0
    cos = spec.get("cos", [])
    sin = spec.get("sin", [])
    for arr, label in ((cos, "cos"), (sin, "sin")):
        if not isinstance(arr, list) or any(
            isinstance(v, bool) or not isinstance(v, (int, float)) for v in arr
        ):
            raise ConfigError(f"{name}.{label} must be a list of numbers")
    try:
        return PeriodicFunction(period, mean, tuple(cos), tuple(sin))
    except DomainError as exc:
        raise ConfigError(f"{name}: {exc}") from exc


def _coefficient_echo(pf: PeriodicFunction) -> dict:
    return {"mean": pf.mean, "cos": list(pf.cos_coeffs), "sin": list(pf.sin_coeffs)}


def _parse_model(cfg: dict):
    mcfg = _expect_mapping(cfg.get("model"), "model") if "model" in cfg else None
    if mcfg is None:
        raise ConfigError("config requires a model section")
    mtype = mcfg.get("type")
    if mtype not in _MODEL_TYPES:
        raise ConfigError(f"model.type must be one of {_MODEL_TYPES}, got {mtype!r}")
    try:
        if mtype == "predator_prey":
            _check_keys(mcfg, "model", ("type", "b", "d"))
            b = _number(mcfg, "model", "b", positive=True)
            d = _number(mcfg, "model", "d", positive=True)
            return mtype, {"type": mtype, "b": b, "d": d}, (b, d)
        if mtype == "competing":
            _check_keys(mcfg, "model", ("type", "a", "b", "c", "d"))
            vals = tuple(_number(mcfg, "model", k, positive=True) for k in "abcd")
            return mtype, {"type": mtype, **dict(zip("abcd", vals))}, vals
        if mtype == "periodic_predator_prey":
            _check_keys(mcfg, "model", ("type", "b", "d", "period"), ("beta", "delta"))
            b = _number(mcfg, "model", "b", positive=True)
            d = _number(mcfg, "model", "d", positive=True)
            p = _number(mcfg, "model", "period", positive=True)
            beta = _coefficient(mcfg.get("beta", 0.0), "model.beta", p)
            delta = _coefficient(mcfg.get("delta", 0.0), "model.delta", p)
            model = floquet.PeriodicModel(b, d, beta, delta)
            echo = {
                "type": mtype, "b": b, "d": d, "period": p,
                "beta": _coefficient_echo(beta), "delta": _coefficient_echo(delta),
            }
            return mtype, echo, model
        _check_keys(mcfg, "model", ("type", "period"), ("a0", "a1", "a2", "a3"))
        p = _number(mcfg, "model", "period", positive=True)
        coeffs = [
            _coefficient(mcfg.get(k, 0.0), f"model.{k}", p) for k in ("a0", "a1", "a2", "a3")
        ]
        rhs = abel.AbelPolynomial(*coeffs, period=p)
        echo = {"type": mtype, "period": p}
        echo.update({k: _coefficient_echo(c) for k, c in zip(("a0", "a1", "a2", "a3"), coeffs)})
        return mtype, echo, rhs
    except DomainError as exc:
        raise ConfigError(f"model: {exc}") from exc


def _parse_initial(entry, name, scalar=False):
    entry = _expect_mapping(entry, name)
    if scalar:
        _check_keys(entry, name, ("x",))
        return (_number(entry, name, "x"),)
    if "X" in entry or "Y" in entry:
        _check_keys(entry, name, ("X", "Y"))
        X = _number(entry, name, "X", positive=True)
        Y = _number(entry, name, "Y", positive=True)
        return (1.0 / X, 1.0 / Y)
    _check_keys(entry, name, ("x", "y"))
    return (_number(entry, name, "x", positive=True), _number(entry, name, "y", positive=True))


def _parse_time(cfg, required=True):
    if "time" not in cfg:
        if required:
            raise ConfigError("config requires a time section")
        return None
    tcfg = _expect_mapping(cfg["time"], "time")
    _check_keys(tcfg, "time", ("t_end",), ("t0",))
    t0 = _number(tcfg, "time", "t0", default=0.0) if "t0" in tcfg else 0.0
    t_end = _number(tcfg, "time", "t_end")
    if not t_end > t0:
        raise ConfigError(f"time: t_end ({t_end}) must exceed t0 ({t0})")
    return (t0, t_end)


def _parse_integrator(cfg) -> IntegratorConfig:
    icfg = _expect_mapping(cfg.get("integrator", {}), "integrator")
    _check_keys(icfg, "integrator", (), ("rtol", "atol", "max_step", "blow_up_threshold", "max_steps"))
    kwargs = {}
    for key in ("rtol", "atol", "max_step", "blow_up_threshold"):
        if key in icfg:
            kwargs[key] = _number(icfg, "integrator", key, positive=True)
    if "max_steps" in icfg:
        v = icfg["max_steps"]
        if isinstance(v, bool) or not isinstance(v, int) or v <= 0:
            raise ConfigError(f"integrator.max_steps must be a positive integer, got {v!r}")
        kwargs["max_steps"] = v
    try:
        return IntegratorConfig(**kwargs)
    except DomainError as exc:
        raise ConfigError(f"integrator: {exc}") from exc


def _integrator_echo(icfg: IntegratorConfig) -> dict:
    return {
        "rtol": icfg.rtol,
        "atol": icfg.atol,
        "max_step": icfg.max_step if math.isfinite(icfg.max_step) else None,
        "blow_up_threshold": icfg.blow_up_threshold,
        "max_steps": icfg.max_steps,
    }


def _parse_output(cfg, args, command):
    ocfg = _expect_mapping(cfg.get("output", {}), "output")
    _check_keys(ocfg, "output", (), ("samples", "coords"))
    samples = ocfg.get("samples", _DEFAULT_SAMPLES.get(command, 512))
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < 2:
        raise ConfigError(f"output.samples must be an integer >= 2, got {samples!r}")
    coords = ocfg.get("coords", "population")
    if getattr(args, "samples", None) is not None:
        samples = args.samples
    if getattr(args, "coords", None) is not None:
        coords = args.coords
    if coords not in ("population", "reciprocal"):
        raise ConfigError(f"output.coords must be 'population' or 'reciprocal', got {coords!r}")
    return samples, coords


def _load_config(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    return _expect_mapping(raw, "config")


def _check_sections(cfg, allowed):
    unknown = [k for k in cfg if k not in allowed]
    if unknown:
        raise ConfigError(f"config: unknown section(s) {unknown}")


def _seed_echo(cfg, args):
    seed = cfg.get("seed")
    if getattr(args, "seed", None) is not None:
        seed = args.seed
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise ConfigError(f"seed must be an integer, got {seed!r}")
    return seed


# ---------------------------------------------------------------------------
# Reciprocal-plane setup shared by simulate and portrait.

def _plane_setup(mtype, obj):
    """Field, axis events and coordinate maps in reciprocal coordinates."""
    if mtype == "predator_prey":
        b, d = obj
        field = predator_prey.scaled_reciprocal_system(b, d).field()
        to_pop = lambda X, Y: predator_prey.from_scaled(b, d, X, Y)
        from_pop = lambda x, y: predator_prey.to_scaled(b, d, x, y)
        rest = (1.0 / math.sqrt(b * d), 1.0 / b)
        rest_pop = (d, b)
    elif mtype == "competing":
        a, b, c, d = obj
        from .model_core import GeneralModel, linearize

        field = linearize(GeneralModel.competing(a, b, c, d)).field()
        to_pop = lambda X, Y: (1.0 / X, 1.0 / Y)
        from_pop = lambda x, y: (1.0 / x, 1.0 / y)
        try:
            rp = competing.rest_point(a, b, c, d)
            rest = (rp.X0, rp.Y0) if rp.in_first_quadrant else None
            rest_pop = rp.populations() if rp.in_first_quadrant else None
        except ToolkitError:
            rest = rest_pop = None
    else:  # periodic_predator_prey
        model = obj
        field = model.forced_field()
        to_pop = lambda X, Y: (1.0 / X, 1.0 / Y)
        from_pop = lambda x, y: (1.0 / x, 1.0 / y)
        rest = (1.0 / model.d, 1.0 / model.b)
        rest_pop = (model.d, model.b)
    events = (
        EventSpec(lambda t, z: z[0], "decreasing", True),  # x population explodes
        EventSpec(lambda t, z: z[1], "decreasing", True),  # y population explodes
    )
    return field, events, to_pop, from_pop, rest, rest_pop


def _run_plane(mtype, obj, initial_pop, t_span, icfg):
    field, events, to_pop, from_pop, _, _ = _plane_setup(mtype, obj)
    init = from_pop(*initial_pop)
    tr = integrate(field, init, t_span, icfg, events)
    blow = None
    if tr.termination == "event":
        species = "x" if tr.terminal_event.index == 0 else "y"
        Xe, Ye = tr.terminal_event.state
        other = to_pop(1.0, Ye)[1] if species == "x" else to_pop(Xe, 1.0)[0]
        blow = {"species": species, "T": tr.terminal_event.time, "other_limit": other}
    return tr, to_pop, blow


# ---------------------------------------------------------------------------
# Commands.

def _cmd_simulate(args):
    cfg = _load_config(args.config)
    _check_sections(cfg, ("model", "initial", "time", "integrator", "output", "seed"))
    mtype, mecho, obj = _parse_model(cfg)
    t_span = _parse_time(cfg)
    icfg = _parse_integrator(cfg)
    samples, coords = _parse_output(cfg, args, "simulate")
    seed = _seed_echo(cfg, args)
    if args.out is None:
        raise ConfigError("simulate requires --out for the CSV path")

    if mtype == "abel":
        init = _parse_initial(cfg.get("initial"), "initial", scalar=True)
        resolved_initial = {"x": init[0]}
        tr = integrate(obj.ode_field(), init, t_span, icfg)
        times = np.linspace(tr.t_start, tr.t_final, samples)
        states = tr.sample(times)
        rows = np.column_stack([times, states[:, 0]])
        header = ("t", "x")
        blow = {"T": tr.t_final} if tr.termination == "blow_up" else None
    else:
        initial_pop = _parse_initial(cfg.get("initial"), "initial")
        resolved_initial = {"x": initial_pop[0], "y": initial_pop[1]}
        tr, to_pop, blow = _run_plane(mtype, obj, initial_pop, t_span, icfg)
        times = np.linspace(tr.t_start, tr.t_final, samples)
        states = tr.sample(times)
        header = ("t", "x", "y")
        if coords == "population":
            # Population coordinates exist only strictly inside the first
            # quadrant; on blow-up runs the terminal samples are dropped and
            # the sidecar report carries the blow-up data instead.
            rows = [
                (t, *to_pop(X, Y))
                for t, (X, Y) in zip(times, states)
                if X > 0.0 and Y > 0.0
            ]
        else:
            rows = np.column_stack([times, states])

    resolved = {
        "model": mecho,
        "initial": resolved_initial,
        "time": {"t0": t_span[0], "t_end": t_span[1]},
        "integrator": _integrator_echo(icfg),
        "output": {"samples": samples, "coords": coords},
        "seed": seed,
    }
    result = {
        "termination": tr.termination,
        "t_final": tr.t_final,
        "blow_up": blow,
        "rows": int(len(rows)),
    }
    csv_text = _csv(header, rows)
    report = _report("simulate", resolved, result)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text)
    sidecar = args.out.rsplit(".", 1)[0] + ".report.json"
    with open(sidecar, "w", encoding="utf-8", newline="") as fh:
        fh.write(report)
    return 0


def _orbit_result(orbit) -> dict:
    c = orbit.constants
    base = {
        "model": "predator_prey",
        "constants": {"c1": c.c1, "c2": c.c2, "R": c.R, "phi0": c.phi0},
        "center": [c.center[0], c.center[1]],
    }
    if isinstance(orbit, predator_prey.PeriodicOrbit):
        base.update({
            "class": "periodic",
            "period": orbit.period,
            "lower_bounds": {"x": orbit.x_lower_bound, "y": orbit.y_lower_bound},
        })
    elif isinstance(orbit, predator_prey.OrbitBlowUp):
        base.update({
            "class": "blow_up",
            "species": orbit.species,
            "T": orbit.time,
            "other_limit": orbit.other_limit,
            "hit_angle": orbit.hit_angle,
        })
    else:
        base.update({"class": "degenerate", "axis": orbit.axis, "gap": orbit.gap})
    return base


def _cmd_classify(args):
    cfg = _load_config(args.config)
    _check_sections(cfg, ("model", "initial", "seed"))
    mtype, mecho, obj = _parse_model(cfg)
    if mtype not in ("predator_prey", "competing"):
        raise ConfigError(f"classify expects predator_prey or competing models, got {mtype}")
    initial_pop = _parse_initial(cfg.get("initial"), "initial")
    seed = _seed_echo(cfg, args)

    if mtype == "predator_prey":
        b, d = obj
        orbit = predator_prey.classify_orbit(b, d, *initial_pop)
        result = _orbit_result(orbit)
    else:
        a, b, c, d = obj
        rp = competing.rest_point(a, b, c, d)
        es = competing.eigen_structure(a, b, c, d)
        cls = competing.classify_interaction(a, b, c, d)
        outcome = competing.predict_outcome(a, b, c, d, *initial_pop)
        if isinstance(outcome, competing.Coexistence):
            out_echo = {"type": "coexistence", "limits": list(outcome.limits)}
        else:
            out_echo = {
                "type": "blow_up",
                "species": outcome.species,
                "T": outcome.time,
                "other_limit": outcome.other_limit,
            }
        result = {
            "model": "competing",
            "class": cls.value,
            "rest_point": {
                "X": rp.X0,
                "Y": rp.Y0,
                "populations": list(rp.populations()) if rp.in_first_quadrant else None,
            },
            "eigenvalues": [es.lambda1, es.lambda2],
            "eigenvectors": [list(es.xi1), list(es.xi2)],
            "discriminant": es.discriminant,
            "outcome": out_echo,
        }

    resolved = {
        "model": mecho,
        "initial": {"x": initial_pop[0], "y": initial_pop[1]},
        "seed": seed,
    }
    report = _report("classify", resolved, result)
    sys.stdout.write(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(report)
    return 0


def _cmd_floquet(args):
    cfg = _load_config(args.config)
    _check_sections(cfg, ("model", "integrator", "output", "seed"))
    mtype, mecho, model = _parse_model(cfg)
    if mtype != "periodic_predator_prey":
        raise ConfigError(f"floquet expects a periodic_predator_prey model, got {mtype}")
    cfg_integ = _parse_integrator(cfg) if "integrator" in cfg else None
    samples, _ = _parse_output(cfg, args, "floquet")
    seed = _seed_echo(cfg, args)

    rep = floquet.periodic_solution(model, n_samples=samples, cfg=cfg_integ)
    result = {
        "period": model.period,
        "resonance": False,
        "resonance_margin": rep.resonance_margin,
        "nearest_m": rep.nearest_resonance_m,
        "multipliers": [[r.real, r.imag] for r in rep.multipliers],
        "product": rep.multiplier_product.real,
        "trace": rep.trace,
        "det": rep.fundamental.det,
        "initial": [rep.initial[0], rep.initial[1]],
        "closure_residual": rep.closure_residual,
        "positive": rep.positive,
        "samples": {
            "t": rep.times,
            "X": rep.X,
            "Y": rep.Y,
            "x": rep.x,
            "y": rep.y,
        },
    }
    resolved = {
        "model": mecho,
        "integrator": _integrator_echo(cfg_integ or floquet._DEFAULT_CFG),
        "output": {"samples": samples, "coords": "population"},
        "seed": seed,
    }
    report = _report("floquet", resolved, result)
    sys.stdout.write(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(report)
    return 0


def _cmd_abel(args):
    cfg = _load_config(args.config)
    _check_sections(cfg, ("model", "integrator", "analysis", "seed"))
    mtype, mecho, rhs = _parse_model(cfg)
    if mtype != "abel":
        raise ConfigError(f"abel expects an abel model, got {mtype}")
    acfg = _expect_mapping(cfg.get("analysis", {}), "analysis")
    _check_keys(acfg, "analysis", (), ("bracket", "grid_n"))
    bracket = acfg.get("bracket", [-5.0, 5.0])
    if (
        not isinstance(bracket, list)
        or len(bracket) != 2
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in bracket)
    ):
        raise ConfigError(f"analysis.bracket must be [lo, hi], got {bracket!r}")
    grid_n = acfg.get("grid_n", 512)
    if isinstance(grid_n, bool) or not isinstance(grid_n, int) or grid_n < 2:
        raise ConfigError(f"analysis.grid_n must be an integer >= 2, got {grid_n!r}")
    cfg_integ = _parse_integrator(cfg) if "integrator" in cfg else None
    seed = _seed_echo(cfg, args)

    analysis = abel.count_periodic(rhs, bracket, grid_n=grid_n, cfg=cfg_integ)
    result = {
        "period": rhs.period,
        "bracket": [analysis.bracket[0], analysis.bracket[1]],
        "grid_n": analysis.grid_n,
        "count": len(analysis.fixed_points),
        "fixed_points": list(analysis.fixed_points),
        "residuals": list(analysis.residuals),
        "hypothesis": analysis.hypothesis,
        "blow_up_intervals": [list(iv) for iv in analysis.blow_up_intervals],
    }
    resolved = {
        "model": mecho,
        "analysis": {"bracket": [float(bracket[0]), float(bracket[1])], "grid_n": grid_n},
        "integrator": _integrator_echo(cfg_integ or abel._DEFAULT_CFG),
        "seed": seed,
    }
    report = _report("abel", resolved, result)
    sys.stdout.write(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(report)
    return 0


def _cmd_portrait(args):
    cfg = _load_config(args.config)
    _check_sections(cfg, ("model", "trajectories", "time", "integrator", "output", "seed"))
    mtype, mecho, obj = _parse_model(cfg)
    if mtype == "abel":
        raise ConfigError("portrait expects a planar model")
    raw_trajs = cfg.get("trajectories")
    if not isinstance(raw_trajs, list) or not raw_trajs:
        raise ConfigError("portrait requires a nonempty trajectories list")
    t_span = _parse_time(cfg)
    icfg = _parse_integrator(cfg)
    samples, coords = _parse_output(cfg, args, "portrait")
    seed = _seed_echo(cfg, args)
    if args.out is None:
        raise ConfigError("portrait requires --out for the SVG path")

    initials = [
        _parse_initial(entry, f"trajectories[{i}]") for i, entry in enumerate(raw_trajs)
    ]
    field, events, to_pop, from_pop, rest, rest_pop = _plane_setup(mtype, obj)
    curves = []
    for init_pop in initials:
        tr = integrate(field, from_pop(*init_pop), t_span, icfg, events)
        times = np.linspace(tr.t_start, tr.t_final, samples)
        states = tr.sample(times)
        if coords == "population":
            pts = [to_pop(X, Y) for X, Y in states if X > 0 and Y > 0]
        else:
            pts = [(X, Y) for X, Y in states]
        curves.append(pts)

    markers = []
    marker = rest_pop if coords == "population" else rest
    if marker is not None:
        markers.append(marker)
    labels = ("x", "y") if coords == "population" else ("X", "Y")
    svg = render_portrait(curves, markers, labels)

    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(svg)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recipop",
        description="Explosive population models via reciprocal linearization",
    )
    parser.add_argument("--version", action="version", version=f"recipop {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("simulate", "integrate a model and write a trajectory CSV"),
        ("classify", "orbit / interaction classification report"),
        ("floquet", "periodic solution of the forced predator-prey model"),
        ("abel", "count periodic solutions of a scalar cubic-type equation"),
        ("portrait", "phase portrait SVG"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, help="JSON configuration path")
        p.add_argument("--out", default=None, help="output path (CSV/SVG/report)")
        p.add_argument("--coords", choices=("population", "reciprocal"), default=None)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
    return parser


_DISPATCH = {
    "simulate": _cmd_simulate,
    "classify": _cmd_classify,
    "floquet": _cmd_floquet,
    "abel": _cmd_abel,
    "portrait": _cmd_portrait,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, IsADirectoryError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ToolkitError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
