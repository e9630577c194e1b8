"""Parsing of coin/initial-state specs and deterministic CSV/JSON tables."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import ConfigError
from .state import (
    HADAMARD,
    CoinMatrix,
    StateVector,
    WalkConfig,
    general_state,
    localized_state,
    paper_initial_state,
)

__all__ = [
    "NAMED_COINS",
    "parse_complex",
    "parse_coin",
    "parse_init",
    "load_state_file",
    "dump_state",
    "format_number",
    "render_csv",
    "render_json",
    "output_schema",
]

NAMED_COINS = {
    "hadamard": HADAMARD,
    "identity": CoinMatrix(np.eye(2)),
}


def parse_complex(text: str) -> complex:
    """Parse ``re+imi`` style numbers: ``0.5+0.5i``, ``-1i``, ``0.707``, ``2-3e-2i``."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ConfigError("empty complex number")
    if s[-1] in "ij":
        s = s[:-1] + "j"
    try:
        return complex(s)
    except ValueError:
        raise ConfigError(f"cannot parse complex number {text!r} (expected e.g. 0.707+0i)") from None


def parse_coin(spec: str) -> CoinMatrix:
    """Named coin or four comma-separated entries in row-major order."""
    key = spec.strip().lower()
    if key in NAMED_COINS:
        return NAMED_COINS[key]
    parts = spec.split(",")
    if len(parts) != 4:
        raise ConfigError(
            f"coin must be one of {sorted(NAMED_COINS)} or 4 comma-separated entries, got {spec!r}"
        )
    return CoinMatrix(np.array([parse_complex(p) for p in parts]).reshape(2, 2))


def load_state_file(path: str | Path, config: WalkConfig) -> StateVector:
    """Read a JSON array of [re, im] pairs (flat-index order) and normalize it.

    OSError propagates for unreadable files; malformed content raises
    ConfigError.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(data, list) or not all(
        isinstance(p, list) and len(p) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in p)
        for p in data
    ):
        raise ConfigError(f"{path}: expected a JSON array of [re, im] number pairs")
    amps = np.array([complex(re_, im) for re_, im in data], dtype=np.complex128)
    return general_state(config, amps)


def dump_state(state: StateVector) -> str:
    """Inverse of :func:`load_state_file`."""
    pairs = [[float(a.real), float(a.imag)] for a in state.amplitudes]
    return json.dumps(pairs)


def parse_init(spec: str, config: WalkConfig) -> StateVector:
    """``paper`` | ``localized:c,m,n`` (``c,n`` for memoryless) | ``file:PATH``."""
    s = spec.strip()
    if s == "paper":
        return paper_initial_state(config)
    if s.startswith("localized:"):
        fields = s[len("localized:"):].split(",")
        try:
            bits = [int(f) for f in fields]
        except ValueError:
            raise ConfigError(f"bad localized spec {spec!r}; expected localized:c,m,n") from None
        if len(bits) == 3:
            c, m, n = bits
        elif len(bits) == 2 and not config.memory:
            (c, n), m = bits, 0
        else:
            raise ConfigError(f"bad localized spec {spec!r}; expected localized:c,m,n")
        return localized_state(config, c, m, n)
    if s.startswith("file:"):
        return load_state_file(s[len("file:"):], config)
    raise ConfigError(f"unknown initial state {spec!r}; use paper, localized:c,m,n or file:PATH")


def format_number(x: Any) -> str:
    """Integers verbatim, floats with 17 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def render_csv(columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(format_number(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_value(v: Any) -> str:
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    if v is None:
        return "null"
    if isinstance(v, str):
        return json.dumps(v)
    return format_number(v)


def render_json(command: str, parameters: dict, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Table document matching ``schemas/output.schema.json``."""
    parts = [
        "{",
        f'  "command": {json.dumps(command)},',
        f'  "parameters": {_json_value(parameters)},',
        f'  "columns": {_json_value(list(columns))},',
        '  "rows": [',
    ]
    body = [f"    {_json_value(list(r))}" for r in rows]
    parts.append(",\n".join(body))
    parts.append("  ]")
    parts.append("}")
    return "\n".join(p for p in parts if p) + "\n"


def output_schema() -> dict:
    with resources.files("cyclewalk").joinpath("schemas/output.schema.json").open("r", encoding="utf-8") as fh:
        return json.load(fh)
