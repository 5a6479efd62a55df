import json

import pytest

from polyls.instances import (FAMILIES, Instance, generate, instance_from_json,
                              instance_to_json, format_fraction,
                              parse_fraction, random_instance)
from fractions import Fraction


@pytest.mark.parametrize("family", FAMILIES)
def test_round_trip_identity(family):
    inst = random_instance(family, 6, 42)
    text = instance_to_json(inst)
    again = instance_from_json(text)
    assert again == inst
    assert instance_to_json(again) == text


def test_generation_is_deterministic():
    for family in FAMILIES:
        a = generate(family, 5, 7)
        b = generate(family, 5, 7)
        assert instance_to_json(a) == instance_to_json(b)
        assert instance_to_json(a) != instance_to_json(generate(family, 5, 8)) \
            or family == "interval-geometric"  # f fixed, direction canonical


def test_interval_gen_is_canonical_hard_instance():
    inst = generate("interval-geometric", 2, 0)
    assert inst.direction == (100, 299)
    f, d = inst.build()
    from polyls import bruteforce_linesearch
    assert bruteforce_linesearch(f, d).lambda_star == Fraction(4, 100)


def test_x0_translates_oracle():
    inst = random_instance("coverage", 4, 3)
    base_oracle, _ = inst.build()
    shifted = Instance(inst.n, inst.spec, inst.direction, x0=(0,) * inst.n)
    f, _ = shifted.build()
    assert f.dense_table() == base_oracle.dense_table()


def test_direction_always_has_positive_entry():
    for seed in range(200):
        inst = random_instance("digraph-cut", 3, seed)
        assert any(v > 0 for v in inst.direction)


def test_bad_json_rejected():
    with pytest.raises((ValueError, KeyError, json.JSONDecodeError)):
        instance_from_json("{nope")
    with pytest.raises(ValueError):
        instance_from_json(json.dumps(
            {"n": 2, "function": {"family": "martian"}, "direction": [1, 1]}))


def test_fraction_strings():
    assert format_fraction(Fraction(3, 7)) == "3/7"
    assert format_fraction(Fraction(2)) == "2/1"
    assert parse_fraction("3/7") == Fraction(3, 7)
    assert parse_fraction("-4") == -4
