"""JSON run configurations: strict validation and object construction."""

from __future__ import annotations

import json
import re
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Sequence, Union

import jsonschema

from .monomials import MonomialIdeal
from .valuations import (
    Arc,
    ArcValuation,
    ClosurePowers,
    GradedFamily,
    Intersection,
    MonomialVal,
    MonomialValuation,
    Powers,
    Product,
    Veronese,
    Zariski,
    ZariskiValuation,
)
from .values import Value, parse_value

__all__ = [
    "ConfigError",
    "schema",
    "validate_config",
    "load_config",
    "parse_number",
    "parse_ideal",
    "build_valuation",
    "build_family",
    "DEFAULT_VARIABLES",
]

DEFAULT_VARIABLES = ("x", "y", "z", "w")


class ConfigError(ValueError):
    pass


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("valmult").joinpath("config.schema.json").read_text()
    return json.loads(text)


def validate_config(cfg: Any) -> dict:
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {where}: {e.message}")
    return cfg


def load_config(source: Union[str, Path, dict]) -> dict:
    if isinstance(source, dict):
        return validate_config(source)
    try:
        cfg = json.loads(Path(source).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {source}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source} is not valid JSON: {exc}") from exc
    return validate_config(cfg)


def parse_number(x: Union[int, str]) -> Value:
    if isinstance(x, bool):
        raise ConfigError("booleans are not numbers")
    if isinstance(x, int):
        return Value.of(x)
    try:
        return parse_value(str(x))
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"cannot parse number {x!r}: {exc}") from exc


_TOKEN = re.compile(r"^([A-Za-z][A-Za-z0-9_]*?)(?:\^(\d+))?$")


def _parse_monomial(text: str, variables: Sequence[str]) -> tuple[int, ...]:
    exps = [0] * len(variables)
    text = text.strip()
    if text == "1":
        return tuple(exps)
    for factor in text.split("*"):
        m = _TOKEN.match(factor.strip())
        if not m or m.group(1) not in variables:
            raise ConfigError(f"cannot parse monomial factor {factor!r} over {list(variables)}")
        exps[variables.index(m.group(1))] += int(m.group(2) or 1)
    return tuple(exps)


def parse_ideal(spec: Union[str, Sequence[Sequence[int]]], variables: Sequence[str] | None = None) -> MonomialIdeal:
    """Exponent vectors, or a string like ``"x^2, x*y, y^3"``."""
    if isinstance(spec, str):
        body = spec.strip()
        if body.startswith("(") and body.endswith(")"):
            body = body[1:-1]
        parts = [p for p in body.split(",") if p.strip()]
        if not parts:
            raise ConfigError("empty ideal")
        if variables is None:
            used = set(re.findall(r"[A-Za-z][A-Za-z0-9_]*", body))
            k = max((DEFAULT_VARIABLES.index(u) + 1 for u in used if u in DEFAULT_VARIABLES), default=2)
            variables = DEFAULT_VARIABLES[: max(k, 2)]
        return MonomialIdeal.from_gens([_parse_monomial(p, list(variables)) for p in parts], len(variables))
    gens = [tuple(int(x) for x in g) for g in spec]
    if len({len(g) for g in gens}) != 1:
        raise ConfigError("exponent vectors of different lengths")
    return MonomialIdeal.from_gens(gens)


def build_valuation(spec: dict):
    kind = spec["type"]
    if kind == "monomial":
        return MonomialValuation(tuple(parse_number(w) for w in spec["weights"]))
    if kind == "arc":
        return ArcValuation(spec.get("depth", 64))
    if kind == "zariski":
        beta0 = parse_number(spec.get("beta0", "3/2"))
        if not beta0.is_rational:
            raise ConfigError("beta0 must be rational")
        return ZariskiValuation.primes(spec.get("depth", 6), beta0.rational)
    raise ConfigError(f"unknown valuation type {kind!r}")


def build_family(spec: dict, variables: Sequence[str] | None = None) -> GradedFamily:
    kind = spec["type"]
    if kind in ("monomial", "arc", "zariski"):
        v = build_valuation(spec)
        if kind == "monomial":
            return MonomialVal(v)
        return Arc(v) if kind == "arc" else Zariski(v)
    if kind == "powers":
        return Powers(parse_ideal(spec["ideal"], variables))
    if kind == "closure_powers":
        return ClosurePowers(parse_ideal(spec["ideal"], variables))
    if kind == "veronese":
        return Veronese(build_family(spec["family"], variables), parse_number(spec["m0"]))
    if kind in ("product", "intersection"):
        cls = Product if kind == "product" else Intersection
        return cls(build_family(spec["left"], variables), build_family(spec["right"], variables))
    raise ConfigError(f"unknown family type {kind!r}")
