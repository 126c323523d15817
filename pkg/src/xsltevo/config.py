"""Flat ``key = value`` experiment configuration with dotted keys.

Recognised keys::

    evolve.type = 1
    evolve.population = 128
    evolve.generations = 200
    evolve.tournament = 5
    evolve.elitism = 1
    evolve.seed = 0
    evolve.runs = 30
    evolve.applications-per-offspring = 1
    init.min-templates = 1          (any InitParams field, dashes or underscores)
    limits.max-recursion-depth = 64
    limits.max-output-lines = 10000
    operator.type1.xp-add-branch = 0.16
    operator.type1.group-balance = 0.5
    output.wrapper-tag = output
    output.line-tag = line

Lines starting with ``#`` or ``;`` are comments.
"""

from __future__ import annotations

import configparser
from dataclasses import fields, replace
from pathlib import Path

from .evolve import EvolveConfig
from .exceptions import ConfigError
from .genome import InitParams, check_structure_type
from .variation import Op, default_operator_table
from .xslt import TransformLimits

_SECTION = "config"

_EVOLVE_KEYS = {
    "type": ("structure_type", str),
    "population": ("population_size", int),
    "generations": ("max_generations", int),
    "tournament": ("tournament_size", int),
    "elitism": ("elitism", int),
    "seed": ("seed", int),
    "applications-per-offspring": ("applications_per_offspring", int),
}
_OUTPUT_KEYS = {"wrapper-tag": "wrapper_tag", "line-tag": "line_tag"}


def parse_config(text: str, source: str = "<config>") -> dict[str, str]:
    """Raw ``{key: value}`` mapping; later duplicates are an error."""
    parser = configparser.ConfigParser(
        interpolation=None, comment_prefixes=("#", ";"), inline_comment_prefixes=("#",), delimiters=("=",)
    )
    parser.optionxform = str
    try:
        parser.read_string(f"[{_SECTION}]\n{text}", source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    return {k.strip().lower(): v.strip() for k, v in parser.items(_SECTION)}


def read_config(path) -> dict[str, str]:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc.strerror}") from None
    return parse_config(text, str(p))


def _number(key, value, kind):
    try:
        return kind(value)
    except ValueError:
        raise ConfigError(f"{key}: expected {kind.__name__}, got {value!r}") from None


def build_config(settings: dict[str, str], overrides: dict | None = None) -> tuple[EvolveConfig, int]:
    """Turn raw settings into an :class:`EvolveConfig` and a run count.

    ``overrides`` holds already-typed values keyed like ``settings``
    (``evolve.population`` and so on); ``None`` values are ignored.
    """
    merged = dict(settings)
    for k, v in (overrides or {}).items():
        if v is not None:
            merged[k] = v
    evolve_kw = {}
    init_kw = {}
    limits_kw = {}
    op_weights = {}
    runs = 30
    init_names = {f.name for f in fields(InitParams)}
    limit_names = {f.name for f in fields(TransformLimits)}

    for key, value in merged.items():
        group, _, name = key.partition(".")
        if group == "evolve" and name == "runs":
            runs = _number(key, value, int)
        elif group == "evolve" and name in _EVOLVE_KEYS:
            attr, kind = _EVOLVE_KEYS[name]
            evolve_kw[attr] = value if kind is str else _number(key, value, kind)
        elif group == "output" and name in _OUTPUT_KEYS:
            evolve_kw[_OUTPUT_KEYS[name]] = str(value)
        elif group == "init" and name.replace("-", "_") in init_names:
            attr = name.replace("-", "_")
            kind = type(getattr(InitParams(), attr))
            init_kw[attr] = _number(key, value, kind)
        elif group == "limits" and name.replace("-", "_") in limit_names:
            limits_kw[name.replace("-", "_")] = _number(key, value, int)
        elif group == "operator" and "." in name:
            stype, _, kind = name.partition(".")
            try:
                stype = check_structure_type(stype)
            except ValueError as exc:
                raise ConfigError(f"{key}: {exc}") from None
            op_weights.setdefault(stype, {})[kind] = _number(key, value, float)
        else:
            raise ConfigError(f"unknown config key {key!r}")

    if runs < 1:
        raise ConfigError("evolve.runs must be >= 1")
    try:
        stype = check_structure_type(evolve_kw.get("structure_type", 1))
        evolve_kw["structure_type"] = stype
        if init_kw:
            evolve_kw["init_params"] = InitParams(**init_kw)
        if limits_kw:
            evolve_kw["limits"] = TransformLimits(**limits_kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    tables = {}
    for st, weights in op_weights.items():
        table = default_operator_table(st)
        for kind, w in weights.items():
            if kind == "group-balance":
                table = replace(table, group_balance=w)
                continue
            try:
                table.set_weight(Op(kind), w)
            except ValueError as exc:
                raise ConfigError(f"operator.{st}.{kind}: {exc}") from None
        tables[st] = table
    table = tables.get(stype) or default_operator_table(stype)
    evolve_kw["operator_table"] = table
    return EvolveConfig(**evolve_kw).check(), runs
