"""Run configuration files: a flat `key = value` text format.

A config names a ground field, a degree cap, generator counts, the module
identities cutting out the variety, and optionally relations and a twist
presenting a non-free target, plus command flags (seed, degree bound, output
path).  `#` starts a comment, blank lines are skipped, `identity` and
`relation` keys repeat.  Example:

    field = Q(sqrt 2)
    cap = 6
    lie_generators = 2
    module_generators = 1
    identity = x1*x2*x3*x4*x5*x6

Term values are kept as source text so emitting and re-parsing a config gives
back an equal one; they are only evaluated when a representation is built.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .field import (FieldDescriptor, conjugation, identity_automorphism)
from .freealg import NCPoly
from .freelie import LieElement
from .parser import TermParser, TermSyntaxError, parse_scalar
from .representation import (FreeRep, ModuleElement, Representation,
                             VarietyDescriptor, span_of)
from .verbal import WordSystem, twist


class ConfigError(ValueError):
    """Malformed or inconsistent configuration."""


@dataclass(frozen=True)
class RunConfig:
    field: FieldDescriptor
    cap: int
    lie_generators: int
    module_generators: int
    identities: tuple[str, ...] = ()
    relations: tuple[str, ...] = ()
    twist_scale: str | None = None
    twist_phi: str | None = None
    seed: int | None = None
    degree_bound: int | None = None
    output: str | None = None

    def with_overrides(self, **kwargs) -> "RunConfig":
        changed = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **changed) if changed else self

    def emit(self) -> str:
        lines = [
            f"field = {self.field}",
            f"cap = {self.cap}",
            f"lie_generators = {self.lie_generators}",
            f"module_generators = {self.module_generators}",
        ]
        lines.extend(f"identity = {s}" for s in self.identities)
        lines.extend(f"relation = {s}" for s in self.relations)
        if self.twist_scale is not None:
            lines.append(f"twist_scale = {self.twist_scale}")
        if self.twist_phi is not None:
            lines.append(f"twist_phi = {self.twist_phi}")
        if self.seed is not None:
            lines.append(f"seed = {self.seed}")
        if self.degree_bound is not None:
            lines.append(f"degree_bound = {self.degree_bound}")
        if self.output is not None:
            lines.append(f"output = {self.output}")
        return "\n".join(lines) + "\n"


_INT_KEYS = {"cap", "lie_generators", "module_generators", "seed",
             "degree_bound"}
_REQUIRED = ("field", "cap", "lie_generators", "module_generators")


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    fields: dict = {"identities": [], "relations": []}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', "
                              f"got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not value:
            raise ConfigError(f"{source}:{lineno}: empty value for {key!r}")
        if key == "identity":
            fields["identities"].append(value)
        elif key == "relation":
            fields["relations"].append(value)
        elif key == "field":
            try:
                fields["field"] = FieldDescriptor.parse(value)
            except ValueError as exc:
                raise ConfigError(f"{source}:{lineno}: {exc}") from exc
        elif key in _INT_KEYS:
            try:
                fields[key] = int(value)
            except ValueError:
                raise ConfigError(f"{source}:{lineno}: {key} needs an "
                                  f"integer, got {value!r}") from None
        elif key in ("twist_scale", "twist_phi", "output"):
            fields[key] = value
        else:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
    missing = [k for k in _REQUIRED if k not in fields]
    if missing:
        raise ConfigError(f"{source}: missing required keys: "
                          + ", ".join(missing))
    fields["identities"] = tuple(fields["identities"])
    fields["relations"] = tuple(fields["relations"])
    cfg = RunConfig(**fields)
    if cfg.cap < 1 or cfg.lie_generators < 1 or cfg.module_generators < 1:
        raise ConfigError(f"{source}: cap and generator counts must be >= 1")
    if (cfg.twist_scale is None) != (cfg.twist_phi is None):
        raise ConfigError(f"{source}: twist_scale and twist_phi come together")
    return cfg


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, source=path)


def build_variety(cfg: RunConfig) -> VarietyDescriptor:
    """Evaluate the identity terms; identities may use any xN letters."""
    parser = TermParser(cfg.field)
    polys = []
    for src in cfg.identities:
        try:
            value = parser.parse(src)
        except TermSyntaxError as exc:
            raise ConfigError(f"identity {src!r}: {exc}") from exc
        if isinstance(value, LieElement):
            value = value.poly
        if not isinstance(value, NCPoly):
            raise ConfigError(f"identity {src!r} is not a sort-1 polynomial")
        polys.append(value)
    return VarietyDescriptor(cfg.field, cfg.cap, tuple(polys))


def build_free(cfg: RunConfig) -> FreeRep:
    return FreeRep(build_variety(cfg), cfg.lie_generators,
                   cfg.module_generators)


def parse_word_system(cfg: RunConfig) -> WordSystem | None:
    if cfg.twist_scale is None:
        return None
    try:
        a = parse_scalar(cfg.twist_scale, cfg.field)
    except TermSyntaxError as exc:
        raise ConfigError(f"twist_scale {cfg.twist_scale!r}: {exc}") from exc
    phi = parse_automorphism(cfg.twist_phi, cfg.field)
    return WordSystem(a, phi)


def parse_automorphism(name: str, field: FieldDescriptor):
    if name in ("id", "identity"):
        return identity_automorphism(field)
    if name in ("conj", "conjugation"):
        if field.is_rational:
            raise ConfigError("conjugation needs a quadratic field")
        return conjugation(field)
    raise ConfigError(f"unknown automorphism {name!r}: use id or conj")


def build_target(cfg: RunConfig):
    """The representation the config presents: the free one, a quotient by
    the relation terms, a twist of either, or both."""
    free = build_free(cfg)
    target = free
    if cfg.relations:
        parser = TermParser(cfg.field, free)
        elements = []
        for src in cfg.relations:
            try:
                value = parser.parse(src)
            except TermSyntaxError as exc:
                raise ConfigError(f"relation {src!r}: {exc}") from exc
            if not isinstance(value, ModuleElement):
                raise ConfigError(f"relation {src!r} is not a module element")
            elements.append(value)
        target = Representation(free, span_of(free, elements))
    system = parse_word_system(cfg)
    if system is not None:
        target = twist(target, system)
    return target


def parse_system_file(text: str, rep: FreeRep,
                      source: str = "<system>") -> list[ModuleElement]:
    """Equation systems: one module term per line, comments as in configs."""
    parser = TermParser(rep.field, rep)
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            value = parser.parse(line)
        except TermSyntaxError as exc:
            raise ConfigError(f"{source}:{lineno}: {exc}") from exc
        if not isinstance(value, ModuleElement):
            raise ConfigError(f"{source}:{lineno}: {line!r} is not a "
                              "module element")
        out.append(value)
    if not out:
        raise ConfigError(f"{source}: no equations found")
    return out
