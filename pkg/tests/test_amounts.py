import pytest

from tgkit.amounts import format_amount, parse_amount, to_coins


@pytest.mark.parametrize("text,sats", [
    ("0", 0),
    ("1", 10**8),
    ("600", 600 * 10**8),
    ("77.29740945", 7729740945),
    ("0.00000001", 1),
    ("0.5", 50_000_000),
    ("27.69184153", 2769184153),
])
def test_parse_known_values(text, sats):
    assert parse_amount(text) == sats


@pytest.mark.parametrize("text", ["", "-1", "1.123456789", "1e5", ".5", "1.", "x"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_amount(text)


@pytest.mark.parametrize("sats,text", [
    (0, "0"),
    (10**8, "1"),
    (7729740945, "77.29740945"),
    (50_000_000, "0.5"),
    (1, "0.00000001"),
    (600 * 10**8, "600"),
])
def test_format_known_values(sats, text):
    assert format_amount(sats) == text


def test_round_trip_exhaustive_small():
    for sats in range(0, 3000):
        assert parse_amount(format_amount(sats)) == sats


def test_round_trip_seeded_random():
    import random

    rng = random.Random(7)
    for _ in range(5000):
        sats = rng.randrange(0, 10**16)
        assert parse_amount(format_amount(sats)) == sats


def test_no_exponent_or_trailing_zeros():
    assert format_amount(1230000000) == "12.3"
    assert "e" not in format_amount(10**15)


def test_to_coins():
    assert to_coins(7729740945) == pytest.approx(77.29740945)
