"""State spaces attached to a signature of 0/1 flags.

A signature is a tuple of bits, one per tensor slot: slot r carries a
two-dimensional space when ``sig[r] == 1`` (occupation 0 or 1) and a
bosonic Fock space when ``sig[r] == 0`` (occupation 0, 1, 2, ...).
States are plain tuples of occupation numbers; sectors are labelled
either by a pair of level totals (weight-graded family) or by the
slotwise sum of the two factors of a tensor square (mixed family).
"""

from __future__ import annotations

from itertools import product
from math import comb
from typing import Iterator, List, Sequence, Tuple

Signature = Tuple[int, ...]
State = Tuple[int, ...]

__all__ = [
    "check_signature",
    "slot_max",
    "is_valid_state",
    "enumerate_level",
    "enumerate_truncated",
    "enumerate_pair_block",
    "enumerate_splittings",
    "level_dimension",
]


def check_signature(sig: Sequence[int]) -> Signature:
    sig = tuple(int(e) for e in sig)
    if not sig or any(e not in (0, 1) for e in sig):
        raise ValueError(f"bad signature {sig!r}: want a nonempty tuple of 0/1")
    return sig


def slot_max(sig: Signature, r: int) -> int | None:
    """Largest occupation allowed in slot r (None = unbounded)."""
    return 1 if sig[r] else None


def is_valid_state(sig: Signature, m: Sequence[int]) -> bool:
    if len(m) != len(sig):
        return False
    return all(v >= 0 and (e == 0 or v <= 1) for v, e in zip(m, sig))


def enumerate_level(sig: Signature, total: int) -> List[State]:
    """All states of the given total occupation, in lexicographic order."""
    sig = check_signature(sig)
    out: List[State] = []

    def rec(r: int, left: int, prefix: Tuple[int, ...]):
        if r == len(sig):
            if left == 0:
                out.append(prefix)
            return
        hi = left if sig[r] == 0 else min(1, left)
        for v in range(hi + 1):
            rec(r + 1, left - v, prefix + (v,))

    rec(0, total, ())
    return out


def enumerate_truncated(sig: Signature, max_total: int) -> List[State]:
    """All states with total occupation <= max_total (level by level)."""
    out: List[State] = []
    for total in range(max_total + 1):
        out.extend(enumerate_level(sig, total))
    return out


def enumerate_splittings(sig: Signature, s: State) -> List[Tuple[State, State]]:
    """All pairs (a, b) of valid states with a + b == s slotwise.

    These index a fixed sector of the mixed (slotwise-sum conserving)
    family; the list is finite because each slot splits independently.
    """
    sig = check_signature(sig)
    choices = []
    for r, tot in enumerate(s):
        if sig[r]:
            pairs = [(v, tot - v) for v in range(tot + 1)
                     if v <= 1 and tot - v <= 1]
            if not pairs:
                return []
        else:
            pairs = [(v, tot - v) for v in range(tot + 1)]
        choices.append(pairs)
    out = []
    for combo in product(*choices):
        a = tuple(c[0] for c in combo)
        b = tuple(c[1] for c in combo)
        out.append((a, b))
    return out


def enumerate_pair_block(sig: Signature, l: int, m: int) -> List[Tuple[State, State]]:
    """Product basis of a weight sector: first factor at level l, second at m."""
    return [(a, b) for a in enumerate_level(sig, l) for b in enumerate_level(sig, m)]


def level_dimension(sig: Signature, total: int) -> int:
    """Dimension of a level, via the generating function
    prod_r (1 + u)   for two-state slots, and
    prod_r 1/(1-u)   for Fock slots
    (coefficient of u**total)."""
    sig = check_signature(sig)
    n1 = sum(sig)
    n0 = len(sig) - n1
    dim = 0
    for k in range(min(n1, total) + 1):
        rest = total - k
        if n0 == 0:
            stars = 1 if rest == 0 else 0
        else:
            stars = comb(rest + n0 - 1, n0 - 1)
        dim += comb(n1, k) * stars
    return dim
