"""Run configuration files: parsing, validation, and object construction."""
import pytest

from repgeo.config import (ConfigError, RunConfig, build_free, build_target,
                           build_variety, parse_config, parse_system_file,
                           parse_word_system)
from repgeo.field import FieldDescriptor

SECTION_CFG = """\
# running example
field = Q(sqrt 2)
cap = 6
lie_generators = 2
module_generators = 1
identity = x1*x2*x3*x4*x5*x6
"""


def test_parse_minimal_config():
    cfg = parse_config(SECTION_CFG)
    assert cfg.field == "Q(sqrt 2)"
    assert cfg.cap == 6
    assert cfg.lie_generators == 2
    assert cfg.module_generators == 1
    assert cfg.identities == ("x1*x2*x3*x4*x5*x6",)
    assert cfg.relations == ()
    assert cfg.seed is None


def test_emit_round_trip():
    cfg = parse_config(SECTION_CFG)
    again = parse_config(cfg.emit())
    assert again == cfg


def test_repeatable_keys_and_twist_pairing():
    text = SECTION_CFG + "identity = x1*x1*x2*x2*x1*x2\n"
    cfg = parse_config(text)
    assert len(cfg.identities) == 2
    with pytest.raises(ConfigError):
        parse_config(SECTION_CFG + "twist_scale = 2\n")  # phi missing
    both = parse_config(SECTION_CFG + "twist_scale = 2\ntwist_phi = id\n")
    assert both.twist_scale == "2"
    system = parse_word_system(both)
    assert system is not None
    assert system.a == FieldDescriptor.quadratic(2).scalar(2)


def test_config_errors():
    with pytest.raises(ConfigError):
        parse_config("cap = 6\n")  # missing required keys
    with pytest.raises(ConfigError):
        parse_config(SECTION_CFG.replace("cap = 6", "cap = six"))
    with pytest.raises(ConfigError):
        parse_config(SECTION_CFG + "unknown_key = 1\n")
    with pytest.raises(ConfigError):
        parse_config(SECTION_CFG.replace("field = Q(sqrt 2)", "field = R"))
    with pytest.raises(ConfigError):
        parse_config(SECTION_CFG + "identity = [x1,v1]\n")  # not sort 1


def test_with_overrides_skips_none():
    cfg = parse_config(SECTION_CFG)
    assert cfg.with_overrides(seed=None) == cfg
    assert cfg.with_overrides(seed=5).seed == 5
    assert cfg.with_overrides(cap=4).cap == 4


def test_builders():
    cfg = parse_config(SECTION_CFG)
    variety = build_variety(cfg)
    assert variety.cap == 6
    assert len(variety.module_identities) == 1
    free = build_free(cfg)
    assert free.module_total_dim() == 63
    target = build_target(cfg)
    assert target is free or target.module_total_dim() == 63


def test_build_target_with_relation_and_twist():
    text = SECTION_CFG + (
        "relation = (sqrt(2)*[x1,[x1,[[x1,x2],x2]]]"
        " + [[x1,[x1,x2]],[x1,x2]])*v1\n"
        "twist_scale = 1\n"
        "twist_phi = conj\n")
    cfg = parse_config(text)
    target = build_target(cfg)
    assert target.module_total_dim() == 62


def test_parse_system_file():
    cfg = parse_config(SECTION_CFG)
    free = build_free(cfg)
    elems = parse_system_file("[x1,x2]*v1\n\n# comment\nx1*v1\n", free,
                              source="inline")
    assert len(elems) == 2
    with pytest.raises(ConfigError):
        parse_system_file("# nothing here\n", free, source="inline")
    with pytest.raises(ConfigError):
        parse_system_file("x1 + x2\n", free, source="inline")  # wrong sort
