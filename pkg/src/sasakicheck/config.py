"""Suite configuration: structured key-value text with nested sections.

Example::

    [ambient]
    name = standard_sasakian
    n = 1

    [embedding]
    inputs = s, t
    outputs = s, t, 0.1

    [normal]
    scaling = unit
    orientation = 1

    [sample]
    count = 50
    box = -1, 1
    seed = 7

    [tolerances]
    axiom = 1e-8

    [suite]
    checks = axioms, two_form, gauss_weingarten, structure, algebraic, differential, theorems, models
    strict_paper = false
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .errors import ConfigError, ExprParseError
from .exprs import compile_expression

CONFIG_DIR_ENV = "SASAKICHECK_CONFIG_DIR"

CHECK_GROUPS = (
    "axioms",
    "two_form",
    "gauss_weingarten",
    "structure",
    "algebraic",
    "differential",
    "theorems",
    "models",
)

DEFAULT_TOLERANCES = {
    "axiom": 1e-8,
    "algebraic": 1e-5,
    "differential": 1e-5,
    "hypothesis": 1e-6,
    "conclusion": 1e-5,
    "reconstruction": 1e-6,
}


@dataclass
class SuiteConfig:
    name: str
    ambient_name: str
    n: int
    inputs: List[str]
    outputs: List[str]
    scaling: Optional[str]
    orientation: object  # +1, -1, or "lambda_nonneg"
    base_point: Optional[Tuple[float, ...]]
    count: int
    box: Tuple[float, float]
    seed: int
    tolerances: Dict[str, float]
    checks: List[str]
    strict_paper: bool = False

    @property
    def surface_dim(self) -> int:
        return 2 * self.n

    @property
    def ambient_dim(self) -> int:
        return 2 * self.n + 1


def _split_list(raw: str) -> List[str]:
    lines = [ln.strip() for ln in raw.splitlines() if ln.strip()]
    if len(lines) > 1:
        return lines
    return [part.strip() for part in raw.split(",") if part.strip()]


def resolve_config_path(value: str) -> Path:
    """Literal path first, then the directory named by the environment."""
    p = Path(value)
    if p.exists():
        return p
    base = os.environ.get(CONFIG_DIR_ENV)
    if base:
        for candidate in (Path(base) / value, Path(base) / f"{value}.cfg"):
            if candidate.exists():
                return candidate
    raise ConfigError(f"config file not found: {value}")


def load_suite_config(path) -> SuiteConfig:
    path = Path(path)
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc

    def get(section, key, fallback=None):
        if parser.has_option(section, key):
            return parser.get(section, key)
        if fallback is not None:
            return fallback
        raise ConfigError(f"missing [{section}] {key} in {path}")

    ambient_name = get("ambient", "name")
    if ambient_name != "standard_sasakian":
        raise ConfigError(f"unknown ambient structure {ambient_name!r}")
    try:
        n = int(get("ambient", "n"))
    except ValueError as exc:
        raise ConfigError(f"[ambient] n must be an integer: {exc}") from exc
    if n < 1:
        raise ConfigError(f"[ambient] n must be >= 1, got {n}")

    inputs = _split_list(get("embedding", "inputs"))
    outputs = _split_list(get("embedding", "outputs"))
    if len(inputs) != 2 * n:
        raise ConfigError(
            f"embedding declares {len(inputs)} input coordinates {inputs}, "
            f"expected {2 * n} for n = {n}"
        )
    if len(outputs) != 2 * n + 1:
        raise ConfigError(
            f"embedding outputs {len(outputs)} coordinates {outputs}, "
            f"expected {2 * n + 1} for the {2 * n + 1}-dimensional ambient"
        )
    for text in outputs:
        try:
            compile_expression(text, inputs)
        except ExprParseError as exc:
            raise ConfigError(f"bad embedding expression {text!r}: {exc}") from exc

    scaling_raw = get("normal", "scaling", fallback="unit").strip()
    scaling: Optional[str]
    if scaling_raw == "unit":
        scaling = None
    else:
        try:
            compile_expression(scaling_raw, inputs)
        except ExprParseError as exc:
            raise ConfigError(f"bad normal scaling expression {scaling_raw!r}: {exc}") from exc
        scaling = scaling_raw
    orientation_raw = get("normal", "orientation", fallback="1").strip()
    base_point = None
    if orientation_raw == "lambda_nonneg":
        orientation: object = "lambda_nonneg"
        base_raw = get("normal", "base_point", fallback=", ".join(["0"] * (2 * n)))
        try:
            base_point = tuple(float(x) for x in _split_list(base_raw))
        except ValueError as exc:
            raise ConfigError(f"bad [normal] base_point: {exc}") from exc
        if len(base_point) != 2 * n:
            raise ConfigError(
                f"[normal] base_point has {len(base_point)} coordinates, expected {2 * n}"
            )
    else:
        try:
            orientation = int(orientation_raw)
        except ValueError as exc:
            raise ConfigError(
                f"[normal] orientation must be 1, -1 or lambda_nonneg: {exc}"
            ) from exc
        if orientation not in (1, -1):
            raise ConfigError(f"[normal] orientation must be 1 or -1, got {orientation}")

    try:
        count = int(get("sample", "count", fallback="50"))
        seed = int(get("sample", "seed", fallback="7"))
        box_vals = [float(x) for x in _split_list(get("sample", "box", fallback="-1, 1"))]
    except ValueError as exc:
        raise ConfigError(f"bad [sample] entry: {exc}") from exc
    if count < 1:
        raise ConfigError(f"[sample] count must be >= 1, got {count}")
    if len(box_vals) != 2 or box_vals[0] >= box_vals[1]:
        raise ConfigError(f"[sample] box must be 'lo, hi' with lo < hi, got {box_vals}")

    tolerances = dict(DEFAULT_TOLERANCES)
    if parser.has_section("tolerances"):
        for key in parser.options("tolerances"):
            if key not in DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance {key!r}")
            try:
                tolerances[key] = float(parser.get("tolerances", key))
            except ValueError as exc:
                raise ConfigError(f"bad tolerance {key}: {exc}") from exc

    checks = _split_list(get("suite", "checks", fallback=", ".join(CHECK_GROUPS)))
    for c in checks:
        if c not in CHECK_GROUPS:
            raise ConfigError(f"unknown check group {c!r}; valid: {', '.join(CHECK_GROUPS)}")
    strict_raw = get("suite", "strict_paper", fallback="false").strip().lower()
    if strict_raw not in ("true", "false", "yes", "no", "1", "0"):
        raise ConfigError(f"[suite] strict_paper must be boolean, got {strict_raw!r}")

    return SuiteConfig(
        name=path.stem,
        ambient_name=ambient_name,
        n=n,
        inputs=inputs,
        outputs=outputs,
        scaling=scaling,
        orientation=orientation,
        base_point=base_point,
        count=count,
        box=(box_vals[0], box_vals[1]),
        seed=seed,
        tolerances=tolerances,
        checks=checks,
        strict_paper=strict_raw in ("true", "yes", "1"),
    )
