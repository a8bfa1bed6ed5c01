"""Run configuration: a single JSON document validated against the shipped
schema.

Model parameters accept either JSON numbers or exact-rational strings like
"3/10"; the latter are parsed as :class:`fractions.Fraction` and survive
untouched into the algebraic layer, so thresholds computed from them are
exact.  Validation failures are rewrapped as :class:`ConfigError` naming the
offending key.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import jsonschema

from .errors import ConfigError
from .model import ModelParams

__all__ = ["RunConfig", "load_config", "parse_number", "COMMANDS"]

COMMANDS = ("equilibrium", "region", "hopf", "normalform", "simulate", "modes")


@dataclass(frozen=True)
class RunConfig:
    """Parsed configuration: the model, one command, that command's options,
    and the output conventions."""

    model: ModelParams
    command: str
    options: dict = field(default_factory=dict)
    out_dir: str = "."
    formats: tuple = ("csv", "svg")
    raw: dict = field(default_factory=dict)


def parse_number(value):
    """JSON number passes through as float/int; a string 'p/q' or 'p' becomes
    an exact Fraction."""
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as err:
            raise ConfigError(f"not a rational literal: {value!r}") from err
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number or rational string, got {value!r}")
    return value


def _schema():
    text = resources.files("memohopf").joinpath("config_schema.json").read_text()
    return json.loads(text)


def _deep_parse(obj):
    # convert every rational string below this node; leaves other types alone
    if isinstance(obj, dict):
        return {k: _deep_parse(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_deep_parse(v) for v in obj]
    if isinstance(obj, str) and _looks_rational(obj):
        return Fraction(obj)
    return obj


def _looks_rational(s: str) -> bool:
    body = s[1:] if s.startswith("-") else s
    head, _, tail = body.partition("/")
    return head.isdigit() and (tail == "" and "/" not in body or tail.isdigit())


def load_config(path, command: str | None = None) -> RunConfig:
    """Read, validate and parse a configuration file.

    ``command`` is the command named on the command line; the config may
    repeat it (they must agree) or omit it.

    Raises
    ------
    ConfigError
        naming the offending key, for malformed JSON, schema violations,
        command mismatches, or unparseable numbers.
    """
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as err:
        raise ConfigError(f"malformed JSON in {path}: {err}") from err
    try:
        jsonschema.validate(raw, _schema())
    except jsonschema.ValidationError as err:
        where = "/".join(str(p) for p in err.absolute_path) or "(top level)"
        raise ConfigError(f"config key {where}: {err.message}") from err

    cfg_cmd = raw.get("command")
    if command is None and cfg_cmd is None:
        raise ConfigError("config key command: no command given on the command line or in the file")
    if command is not None and cfg_cmd is not None and command != cfg_cmd:
        raise ConfigError(
            f"config key command: file says {cfg_cmd!r} but the command line says {command!r}")
    effective = command or cfg_cmd
    if effective not in COMMANDS:
        raise ConfigError(f"config key command: unknown command {effective!r}")

    mraw = raw["model"]
    try:
        params = ModelParams(
            a=parse_number(mraw["a"]), b=parse_number(mraw["b"]), c=parse_number(mraw["c"]),
            d11=parse_number(mraw["d11"]), d22=parse_number(mraw["d22"]),
            d21=parse_number(mraw["d21"]), ell=parse_number(mraw["ell"]),
            tau=parse_number(mraw.get("tau", 0)))
    except ValueError as err:
        raise ConfigError(f"config key model: {err}") from err

    options = _deep_parse(raw.get(effective, {}))
    out = raw.get("output", {})
    out_dir = out.get("directory", ".")
    formats = tuple(out.get("formats", ("csv", "svg")))
    return RunConfig(model=params, command=effective, options=options,
                     out_dir=out_dir, formats=formats, raw=raw)
