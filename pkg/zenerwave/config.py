"""Project configuration and run specifications.

Settings are layered: built-in defaults, then an optional ``zenerwave.yaml``
in the project root, then the ``quadrature`` block of a run spec, then CLI
flags. Run specs are JSON documents naming one command and its inputs.

Key functions:
- load_config: Loads defaults overlaid with zenerwave.yaml.
- load_run_spec / parse_run_spec: Read and validate a JSON run spec.
- resolve_threads: Thread count from ZENERWAVE_THREADS.
"""

from __future__ import annotations

import copy
import json
import logging
import os
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .errors import ParameterError, SpecError
from .params import PRESETS, MaterialParams
from .quadrature import QuadratureConfig
from .simulate import BoundarySignal

logger = logging.getLogger(__name__)

CONFIG_NAME = "zenerwave.yaml"
THREADS_ENV = "ZENERWAVE_THREADS"
COMMANDS = ("check", "modulus", "kernel", "simulate", "oracle")
SECTION_KEYS = frozenset({"grid", "signal", "modulus", "winding", "oracle", "probe"})
SPEC_KEYS = SECTION_KEYS | {"params", "command", "output_dir", "seed", "quadrature"}

DEFAULT_CONFIG: dict[str, Any] = {
    "output_dir": "output",
    "quadrature": QuadratureConfig().to_mapping(),
    "modulus": {"omega_min": 1e-3, "omega_max": 1e3, "points": 600},
    "winding": {"epsilon": 1e-3, "radius": 1e3, "samples": 10_000},
    "oracle": {"dt": 1e-3, "duration": 6.0, "x": 20.0},
    "plot_data": True,
}


def load_config(project_root: Path) -> dict[str, Any]:
    """Load settings from zenerwave.yaml.

    Args:
        project_root: Directory searched for zenerwave.yaml.

    Returns:
        Dictionary of settings with defaults applied. Nested sections are
        merged key by key; unknown top-level keys are ignored.
    """
    config = copy.deepcopy(DEFAULT_CONFIG)
    config_path = project_root / CONFIG_NAME
    if not config_path.exists():
        return config
    try:
        with open(config_path, encoding="utf-8") as f:
            loaded = yaml.safe_load(f) or {}
    except yaml.YAMLError as exc:
        raise SpecError(f"invalid YAML: {exc}", path=config_path, original_error=exc) from exc
    if not isinstance(loaded, dict):
        return config
    for key, value in loaded.items():
        if key not in config:
            continue
        if isinstance(config[key], dict) and isinstance(value, dict):
            config[key].update(value)
        else:
            config[key] = value
    return config


def resolve_threads(environ: Mapping[str, str] | None = None) -> int:
    """Worker threads for grid sweeps; 0 in ZENERWAVE_THREADS means one per CPU."""
    environ = os.environ if environ is None else environ
    raw = environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        threads = int(raw)
    except ValueError:
        raise ParameterError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if threads < 0:
        raise ParameterError(f"{THREADS_ENV} must be nonnegative, got {threads}")
    return threads or (os.cpu_count() or 1)


def parse_grid(value: Any, name: str) -> np.ndarray:
    """A grid is either an explicit list or ``{"start", "stop", "num"}``."""
    if isinstance(value, Mapping):
        try:
            start, stop, num = float(value["start"]), float(value["stop"]), int(value["num"])
        except (KeyError, TypeError, ValueError):
            raise ParameterError(f"{name} needs numeric start, stop and num") from None
        if num < 1:
            raise ParameterError(f"{name}.num must be positive")
        grid = np.linspace(start, stop, num)
    elif isinstance(value, list) and value:
        if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value):
            raise ParameterError(f"{name} must contain numbers only")
        grid = np.asarray(value, dtype=float)
    else:
        raise ParameterError(f"{name} must be a non-empty list or a start/stop/num object")
    if grid.size > 1 and np.any(np.diff(grid) <= 0.0):
        raise ParameterError(f"{name} must be strictly increasing")
    return grid


@dataclass(frozen=True)
class RunSpec:
    """A validated run specification.

    Attributes:
        params: Material parameters (inline object or preset name).
        command: One of check, modulus, kernel, simulate, oracle.
        output_dir: Where results are written.
        seed: Seed for randomised sweeps.
        quadrature: Quadrature overrides from the spec.
        sections: The command-specific blocks (grid, signal, modulus,
            winding, oracle, probe) as given.
        source: Path the spec was read from, if any.
    """

    params: MaterialParams
    command: str
    output_dir: Path | None = None
    seed: int = 0
    quadrature: dict[str, Any] = field(default_factory=dict)
    sections: dict[str, Any] = field(default_factory=dict)
    source: Path | None = None

    def section(self, name: str, defaults: Mapping[str, Any] | None = None) -> dict[str, Any]:
        merged = dict(defaults or {})
        merged.update(self.sections.get(name) or {})
        return merged

    def quadrature_config(self, settings: Mapping[str, Any]) -> QuadratureConfig:
        merged = {**settings.get("quadrature", {}), **self.quadrature}
        return QuadratureConfig.from_mapping(merged)

    def grid(self, axis: str) -> np.ndarray:
        block = self.sections.get("grid") or {}
        if axis not in block:
            raise ParameterError(f"grid.{axis} is required for the {self.command} command")
        return parse_grid(block[axis], f"grid.{axis}")

    def signal(self) -> BoundarySignal:
        return BoundarySignal.from_mapping(self.sections.get("signal") or {"kind": "dirac"})


def _parse_params(value: Any) -> MaterialParams:
    if isinstance(value, str):
        if value not in PRESETS:
            raise ParameterError(
                f"unknown preset {value!r}; choose one of {', '.join(sorted(PRESETS))}"
            )
        return PRESETS[value]
    return MaterialParams.from_mapping(value)


def parse_run_spec(
    data: Any, source: Path | None = None, command: str | None = None
) -> RunSpec:
    """Validate a decoded run spec.

    Args:
        data: Decoded JSON document.
        source: File the document came from, for error messages.
        command: Command requested by the caller; it replaces the spec's own
            and supplies one when the spec names none.

    Raises:
        SpecError: On any schema violation, including bad parameter values.
    """
    if not isinstance(data, dict):
        raise SpecError("run spec must be a JSON object", path=source)
    unknown = sorted(set(data) - SPEC_KEYS)
    if unknown:
        raise SpecError(f"unknown run spec keys: {', '.join(unknown)}", path=source)
    if "params" not in data:
        raise SpecError("missing 'params'", path=source)
    seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise SpecError("seed must be an integer", path=source)
    quadrature = data.get("quadrature") or {}
    if not isinstance(quadrature, dict):
        raise SpecError("quadrature must be an object", path=source)
    try:
        params = _parse_params(data["params"])
        QuadratureConfig.from_mapping({**DEFAULT_CONFIG["quadrature"], **quadrature})
    except ParameterError as exc:
        raise SpecError(exc.message, path=source, original_error=exc) from exc
    except TypeError as exc:
        raise SpecError(f"bad quadrature value: {exc}", path=source, original_error=exc) from exc

    named = data.get("command")
    if named is not None and named not in COMMANDS:
        raise SpecError(
            f"command must be one of {', '.join(COMMANDS)}; got {named!r}", path=source
        )
    if command is not None and named is not None and command != named:
        logger.info("spec names command %r; running %r", named, command)
    command = command or named
    if command is None:
        raise SpecError(
            f"missing 'command'; name one of {', '.join(COMMANDS)}", path=source
        )

    output_dir = data.get("output_dir")
    sections = {key: data[key] for key in SECTION_KEYS if key in data}
    return RunSpec(
        params=params,
        command=command,
        output_dir=Path(output_dir) if output_dir else None,
        seed=seed,
        quadrature=dict(quadrature),
        sections=sections,
        source=source,
    )


def load_run_spec(path: Path, command: str | None = None) -> RunSpec:
    """Read and validate a JSON run spec, reporting syntax errors by line and column."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read run spec: {exc.strerror}", path=path, original_error=exc) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(
            exc.msg, path=path, line=exc.lineno, column=exc.colno, original_error=exc
        ) from exc
    return parse_run_spec(data, source=path, command=command)
