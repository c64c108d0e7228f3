"""Experiment configuration: defaults, file loading, overrides, validation.

Configs are plain JSON trees.  Every run starts from the per-model
default table below (the values of the reference study each model is
shipped with), deep-merges the user's file on top, then applies
``--override key=value`` dot-path assignments.  The fully resolved
config is embedded in every output file, so any result can be
reproduced from its own header.
"""

import copy
import json

import numpy as np

from .analysis import AveragingWindow
from .errors import ParameterError
from .models import MAX_SITES, Model, ModelParams

#: dense-solver site guard used unless the config raises it (hard cap 14)
DEFAULT_MAX_SITES = 12

_COMMON = {
    "solver": "auto",          # auto | momentum | exact
    "evolution": "auto",       # auto | spectral | stepper (exact solver)
    "n_modes": None,            # momentum solver; defaults to n_sites/2
    "threads": 1,
    "max_sites": DEFAULT_MAX_SITES,
    "output": {"directory": ".", "format": "csv"},
    "tolerances": {
        "eig_residual": 1e-8,   # decomposition residual flagging defectiveness
        "defect_cond": 1e10,    # eigenvector condition flagging defectiveness
        "reality": None,        # abs threshold on Im(eigenvalue); None = 1e-8*||H||
    },
}

#: per-model defaults matching each model's reference study
DEFAULTS = {
    "IXY": {
        "model": "IXY",
        "n_sites": 1200, "gamma": 1.0, "h_a": 0.0, "delta": 0.0, "alpha": 0.0,
        "h0": 2.0, "h1": 1.0,
        "sweep": {"start": 0.2, "stop": 2.5, "step": 0.05},
        "time": {"t_max": 200.0, "dt": 0.05},
        "window": {"tau0": 10.0, "tau1": 20.0, "tau": 200.0},
    },
    "IATXY": {
        "model": "IATXY",
        "n_sites": 100, "gamma": 1.0, "h_a": 0.5, "delta": 0.0, "alpha": 0.0,
        "h0": 3.0, "h1": 1.0,
        "sweep": {"start": 0.5, "stop": 2.3, "step": 0.05},
        "time": {"t_max": 500.0, "dt": 0.05},
        "window": {"tau0": 10.0, "tau1": 100.0, "tau": 500.0},
    },
    "IXYZ_SR": {
        "model": "IXYZ_SR",
        "n_sites": 12, "gamma": 0.25, "h_a": 0.0, "delta": 0.1, "alpha": 0.0,
        "h0": 3.0, "h1": 0.5,
        "sweep": {"start": 1.03, "stop": 1.43, "step": 0.05},
        "time": {"t_max": 40.0, "dt": 0.05},
        "window": {"tau0": 30.0, "tau1": 30.0, "tau": 40.0},
    },
    "IXYZ_LR": {
        "model": "IXYZ_LR",
        "n_sites": 12, "gamma": 0.25, "h_a": 0.0, "delta": 0.2, "alpha": 1.0,
        "h0": 5.0, "h1": 2.2,
        "sweep": {"start": 2.6, "stop": 3.4, "step": 0.1},
        "time": {"t_max": 810.0, "dt": 0.1},
        "window": {"tau0": 800.0, "tau1": 800.0, "tau": 810.0},
    },
}


def default_config(model_name):
    """Fully populated default config for one model."""
    if model_name not in DEFAULTS:
        raise ParameterError(
            f"unknown model {model_name!r}; expected one of {sorted(DEFAULTS)}"
        )
    cfg = copy.deepcopy(_COMMON)
    cfg.update(copy.deepcopy(DEFAULTS[model_name]))
    return cfg


def load_config_file(path):
    """Parse a JSON config file; errors carry the offending detail."""
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ParameterError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ParameterError(f"config file {path} must contain a JSON object")
    return cfg


def _deep_merge(base, override):
    out = copy.deepcopy(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def apply_override(cfg, assignment):
    """Apply one ``dotted.path=value`` assignment; value parsed as JSON."""
    if "=" not in assignment:
        raise ParameterError(f"override {assignment!r} is not of the form key=value")
    path, raw = assignment.split("=", 1)
    keys = path.strip().split(".")
    if not all(keys):
        raise ParameterError(f"override {assignment!r} has an empty key component")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw  # bare strings like IXY need no quoting
    node = cfg
    for key in keys[:-1]:
        nxt = node.get(key)
        if not isinstance(nxt, dict):
            nxt = {}
            node[key] = nxt
        node = nxt
    node[keys[-1]] = value


def resolve_config(file_cfg=None, overrides=(), out_dir=None, out_format=None,
                   threads=None):
    """Merge defaults <- file <- overrides <- explicit flags into one tree."""
    file_cfg = file_cfg or {}
    probe = copy.deepcopy(file_cfg)
    for assignment in overrides:
        apply_override(probe, assignment)
    model_name = probe.get("model")
    if model_name is None:
        raise ParameterError("config must name a model (field 'model')")
    cfg = _deep_merge(default_config(model_name), file_cfg)
    for assignment in overrides:
        apply_override(cfg, assignment)
    if out_dir is not None:
        cfg.setdefault("output", {})["directory"] = out_dir
    if out_format is not None:
        cfg.setdefault("output", {})["format"] = out_format
    if threads is not None:
        cfg["threads"] = threads
    return cfg


class ResolvedConfig:
    """Validated view of a config tree.

    Construction performs the full schema check; computations only start
    after this has passed, so every failure here is a config error.
    """

    def __init__(self, cfg):
        self.raw = cfg
        try:
            model = Model(self._get(cfg, "model", str))
        except ValueError as exc:
            raise ParameterError(f"unknown model {cfg.get('model')!r}") from exc
        n_sites = self._get(cfg, "n_sites", int)
        self.params = ModelParams(
            model=model,
            n_sites=n_sites,
            gamma=self._get(cfg, "gamma", float),
            h=self._get(cfg, "h0", float),
            h_a=self._get(cfg, "h_a", float),
            delta=self._get(cfg, "delta", float),
            alpha=self._get(cfg, "alpha", float),
        )
        self.h0 = self._get(cfg, "h0", float)
        self.h1 = self._get(cfg, "h1", float)
        self.h1_values = cfg.get("h1_values")
        if self.h1_values is not None:
            if (not isinstance(self.h1_values, (list, tuple)) or not self.h1_values
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                               for v in self.h1_values)):
                raise ParameterError(
                    "config field 'h1_values' must be a non-empty list of numbers"
                )
            self.h1_values = [float(v) for v in self.h1_values]

        sweep = cfg.get("sweep") or {}
        start = self._get(sweep, "start", float, "sweep.start")
        stop = self._get(sweep, "stop", float, "sweep.stop")
        step = self._get(sweep, "step", float, "sweep.step")
        if step <= 0 or stop < start:
            raise ParameterError(
                f"sweep grid needs step > 0 and stop >= start, got "
                f"start={start} stop={stop} step={step}"
            )
        npts = int(round((stop - start) / step)) + 1
        self.h1_grid = start + step * np.arange(npts)

        time = cfg.get("time") or {}
        self.t_max = self._get(time, "t_max", float, "time.t_max")
        self.dt = self._get(time, "dt", float, "time.dt")
        if self.dt <= 0 or self.t_max <= 0:
            raise ParameterError(
                f"time grid needs t_max > 0 and dt > 0, got "
                f"t_max={self.t_max} dt={self.dt}"
            )
        steps = round(self.t_max / self.dt)
        if abs(steps * self.dt - self.t_max) > 1e-9 * self.t_max:
            raise ParameterError(
                f"time.t_max={self.t_max} is not a multiple of time.dt={self.dt}"
            )
        self.t_grid = np.linspace(0.0, self.t_max, steps + 1)

        # the sweep horizon is window.tau; the quench horizon is time.t_max —
        # they are independent, so no cross-field constraint is imposed
        win = cfg.get("window") or {}
        self.window = AveragingWindow(
            tau0=self._get(win, "tau0", float, "window.tau0"),
            tau1=self._get(win, "tau1", float, "window.tau1"),
            tau=self._get(win, "tau", float, "window.tau"),
        )

        self.solver = cfg.get("solver") or "auto"
        if self.solver not in ("auto", "momentum", "exact"):
            raise ParameterError(f"solver must be auto|momentum|exact, got {self.solver!r}")
        self.evolution = cfg.get("evolution") or "auto"
        if self.evolution not in ("auto", "spectral", "stepper"):
            raise ParameterError(
                f"evolution must be auto|spectral|stepper, got {self.evolution!r}"
            )
        self.n_modes = cfg.get("n_modes")
        if self.n_modes is not None:
            self.n_modes = self._get(cfg, "n_modes", int)
            if self.n_modes < 1:
                raise ParameterError(f"n_modes must be positive, got {self.n_modes}")
        self.threads = self._get(cfg, "threads", int)
        if self.threads < 1:
            raise ParameterError(f"threads must be >= 1, got {self.threads}")

        self.max_sites = self._get(cfg, "max_sites", int)
        if not 2 <= self.max_sites <= MAX_SITES:
            raise ParameterError(
                f"max_sites must be within [2, {MAX_SITES}], got {self.max_sites}"
            )
        if self._needs_dense() and n_sites > self.max_sites:
            raise ParameterError(
                f"n_sites={n_sites} exceeds max_sites={self.max_sites} for the "
                f"exact solver (raise max_sites, hard cap {MAX_SITES})"
            )

        out = cfg.get("output") or {}
        self.out_dir = out.get("directory", ".")
        self.out_format = out.get("format", "csv")
        if self.out_format not in ("csv", "json"):
            raise ParameterError(f"output.format must be csv|json, got {self.out_format!r}")

        tols = cfg.get("tolerances") or {}
        self.reality_tol = tols.get("reality")
        if self.reality_tol is not None:
            self.reality_tol = float(self.reality_tol)
        self.eig_residual = float(tols.get("eig_residual", 1e-8))
        self.defect_cond = float(tols.get("defect_cond", 1e10))

    def _needs_dense(self):
        if self.solver == "exact":
            return True
        return self.solver == "auto" and self.params.model in (
            Model.IXYZ_SR, Model.IXYZ_LR
        )

    @staticmethod
    def _get(node, key, typ, label=None):
        label = label or key
        if key not in node or node[key] is None:
            raise ParameterError(f"config field '{label}' is required")
        val = node[key]
        if typ is float:
            if isinstance(val, bool) or not isinstance(val, (int, float)):
                raise ParameterError(f"config field '{label}' must be a number, got {val!r}")
            return float(val)
        if typ is int:
            if isinstance(val, bool) or not isinstance(val, int):
                raise ParameterError(f"config field '{label}' must be an integer, got {val!r}")
            return int(val)
        if typ is str:
            if not isinstance(val, str):
                raise ParameterError(f"config field '{label}' must be a string, got {val!r}")
            return val
        raise AssertionError(f"unsupported type {typ}")

    def header_json(self):
        """Compact deterministic JSON of the resolved tree (for file headers)."""
        return json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
