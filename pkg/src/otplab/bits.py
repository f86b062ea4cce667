"""Bitstring helpers.

Bitstrings are plain strings of '0'/'1' characters, most significant bit
first, so a key written k1 k2 k3 k4 reads left to right.
"""

import random


def check_bits(s: str, name: str = "bitstring") -> str:
    """Validate that `s` is a string over {0,1}; returns it unchanged."""
    if not isinstance(s, str) or any(ch not in "01" for ch in s):
        raise ValueError(f"{name} must be a string of 0/1 characters, got {s!r}")
    return s


def xor_bits(a: str, b: str) -> str:
    """Bitwise XOR of two equal-length bitstrings."""
    if len(a) != len(b):
        raise ValueError(f"bitstring length mismatch: {len(a)} vs {len(b)}")
    return "".join("1" if x != y else "0" for x, y in zip(a, b))


def bits_to_int(s: str) -> int:
    """Integer code of a bitstring; the empty string codes to 0."""
    return int(s, 2) if s else 0


def int_to_bits(code: int, width: int) -> str:
    """Bitstring of `width` bits for an integer code (width 0 gives "")."""
    if width == 0:
        return ""
    return format(code, f"0{width}b")


def all_bitstrings(width: int):
    """All bitstrings of the given width in ascending numeric order."""
    for code in range(1 << width):
        yield int_to_bits(code, width)


def random_bits(width: int, rng: random.Random) -> str:
    """A uniformly random bitstring drawn from the caller's stream."""
    return "".join(rng.choice("01") for _ in range(width))
