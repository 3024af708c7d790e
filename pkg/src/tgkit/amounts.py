"""Fixed-point BTC amounts.

Token amounts are stored as integer satoshis (8 decimal places) so that
serialized values like ``77.29740945`` survive every round trip exactly.
Rendering trims trailing zeros and omits the decimal point for whole-coin
values; parsing accepts both integer and decimal literals.
"""

import re

SATS_PER_COIN = 10**8

_AMOUNT_RE = re.compile(r"^(\d+)(?:\.(\d{1,8}))?$")


def parse_amount(text: str) -> int:
    """Parse a non-negative decimal BTC amount into satoshis.

    Rejects signs, exponents, and more than 8 fractional digits.
    """
    text = text.strip()
    m = _AMOUNT_RE.match(text)
    if not m:
        raise ValueError(f"invalid amount: {text!r}")
    whole, frac = m.group(1), m.group(2) or ""
    return int(whole) * SATS_PER_COIN + int(frac.ljust(8, "0") or "0")


def format_amount(sats: int) -> str:
    """Render satoshis as shortest round-trip decimal text."""
    if sats < 0:
        raise ValueError("amounts are non-negative")
    whole, frac = divmod(sats, SATS_PER_COIN)
    if frac == 0:
        return str(whole)
    return f"{whole}.{frac:08d}".rstrip("0")


def to_coins(sats: int) -> float:
    """Satoshis as a float coin amount (for scoring formulas, not storage)."""
    return sats / SATS_PER_COIN
