"""Local three-slot operators and their defining identities.

Two operators act on triples of slots inside a six-fold tensor product:

* the Fock-Fock-Fock operator ("R"), with matrix elements given by a
  terminating single sum of q-binomials;
* the bit-bit-Fock operator ("L"), with six sparse nonzero patterns.

Both conserve the pairwise sums (a+b, b+c) = (i+j, j+k) of their out /
in indices, which keeps every composition exact and finite.  Any
negative occupation index means the element vanishes.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Sequence, Tuple

from .scalars import QPoint, poch_binomial, q_int, to_mpc

State6 = Tuple[int, int, int, int, int, int]
Vec = Dict[Tuple[int, ...], object]

__all__ = [
    "r_element",
    "l_element",
    "s_element",
    "r_element_float",
    "l_element_float",
    "apply_r",
    "apply_l",
    "apply_threed",
    "tetrahedron_residual",
    "verify_local_identity",
    "LOCAL_IDENTITIES",
]


@lru_cache(maxsize=None)
def r_element(qpt: QPoint, a: int, b: int, c: int, i: int, j: int, k: int) -> Fraction:
    """Matrix element <a,b,c| R |i,j,k> of the Fock-cube operator."""
    if min(a, b, c, i, j, k) < 0:
        return Fraction(0)
    if a + b != i + j or b + c != j + k:
        return Fraction(0)
    q = qpt.q
    total = Fraction(0)
    for lam in range(min(b, j) + 1):
        mu = b - lam
        if mu > i:
            continue
        # (q^2)_{c+mu} / (q^2)_c as a terminating product
        ratio = Fraction(1)
        for r in range(1, mu + 1):
            ratio *= 1 - q ** (2 * (c + r))
        term = (
            (-1) ** lam
            * q ** (i * (c - j) + (k + 1) * lam + mu * (mu - k))
            * ratio
            * poch_binomial(qpt, i, mu)
            * poch_binomial(qpt, j, lam)
        )
        total += term
    return total


def l_element(qpt: QPoint, a: int, b: int, c: int, i: int, j: int, k: int) -> Fraction:
    """Matrix element of the bit-bit-Fock operator (six sparse patterns)."""
    if min(a, b, c, i, j, k) < 0 or max(a, b, i, j) > 1:
        return Fraction(0)
    q = qpt.q
    if (a, b) == (0, 0) and (i, j) == (0, 0):
        return Fraction(1) if c == k else Fraction(0)
    if (a, b) == (1, 1) and (i, j) == (1, 1):
        return Fraction(1) if c == k else Fraction(0)
    if (a, b) == (0, 1) and (i, j) == (0, 1):
        return -(q ** (k + 1)) if c == k else Fraction(0)
    if (a, b) == (1, 0) and (i, j) == (1, 0):
        return q ** k if c == k else Fraction(0)
    if (a, b) == (0, 1) and (i, j) == (1, 0):
        return 1 - q ** (2 * k) if c == k - 1 else Fraction(0)
    if (a, b) == (1, 0) and (i, j) == (0, 1):
        return Fraction(1) if c == k + 1 else Fraction(0)
    return Fraction(0)


def s_element(qpt: QPoint, eps: int, a, b, c, i, j, k) -> Fraction:
    """Dispatch on the slot flag: 0 -> Fock-cube element, 1 -> bit element."""
    return l_element(qpt, a, b, c, i, j, k) if eps else r_element(qpt, a, b, c, i, j, k)


# -- float backend ----------------------------------------------------------


def r_element_float(qpt: QPoint, a, b, c, i, j, k, ctx):
    if min(a, b, c, i, j, k) < 0 or a + b != i + j or b + c != j + k:
        return ctx.mpf(0)
    q = to_mpc(qpt.q, ctx).real
    total = ctx.mpf(0)
    for lam in range(min(b, j) + 1):
        mu = b - lam
        if mu > i:
            continue
        ratio = ctx.mpf(1)
        for r in range(1, mu + 1):
            ratio *= 1 - q ** (2 * (c + r))
        total += (
            (-1) ** lam
            * q ** (i * (c - j) + (k + 1) * lam + mu * (mu - k))
            * ratio
            * to_mpc(poch_binomial(qpt, i, mu), ctx).real
            * to_mpc(poch_binomial(qpt, j, lam), ctx).real
        )
    return total


def l_element_float(qpt: QPoint, a, b, c, i, j, k, ctx):
    return to_mpc(l_element(qpt, a, b, c, i, j, k), ctx).real


# ---------------------------------------------------------------------------
# application to sparse vectors over six slots
# ---------------------------------------------------------------------------


def apply_r(qpt: QPoint, slots: Sequence[int], vec: Vec) -> Vec:
    """Apply the Fock-cube operator at the given three slot positions."""
    p1, p2, p3 = slots
    out: Vec = {}
    for st, coeff in vec.items():
        i, j, k = st[p1], st[p2], st[p3]
        for b in range(min(i + j, j + k) + 1):
            a, c = i + j - b, j + k - b
            val = r_element(qpt, a, b, c, i, j, k)
            if val:
                ns = list(st)
                ns[p1], ns[p2], ns[p3] = a, b, c
                key = tuple(ns)
                out[key] = out.get(key, 0) + coeff * val
    return {k2: v for k2, v in out.items() if v}


def apply_l(qpt: QPoint, slots: Sequence[int], vec: Vec) -> Vec:
    """Apply the bit-bit-Fock operator at the given slot positions."""
    p1, p2, p3 = slots
    q = qpt.q
    out: Vec = {}
    for st, coeff in vec.items():
        i, j, m = st[p1], st[p2], st[p3]
        images = []
        if (i, j) == (0, 0):
            images.append((0, 0, m, Fraction(1)))
        elif (i, j) == (1, 1):
            images.append((1, 1, m, Fraction(1)))
        elif (i, j) == (0, 1):
            images.append((0, 1, m, -(q ** (m + 1))))
            images.append((1, 0, m + 1, Fraction(1)))
        else:  # (1, 0)
            images.append((1, 0, m, q ** m))
            if m >= 1:
                images.append((0, 1, m - 1, 1 - q ** (2 * m)))
        for a, b, c, val in images:
            if val:
                ns = list(st)
                ns[p1], ns[p2], ns[p3] = a, b, c
                key = tuple(ns)
                out[key] = out.get(key, 0) + coeff * val
    return {k2: v for k2, v in out.items() if v}


def apply_threed(qpt: QPoint, kind: str, side: str, state: State6) -> Vec:
    """Apply one side of a four-operator product to a basis state.

    kind: "RRRR" (four Fock-cube factors on slots 124/135/236/456) or
    "RLLL" (bit operators on 124/135/236, Fock-cube on 456).
    side: "left" applies the product written left-to-right, i.e. the
    456 factor acts first; "right" applies the reversed product.
    """
    if kind not in ("RRRR", "RLLL"):
        raise ValueError(f"unknown kind {kind!r}")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    slots124, slots135, slots236, slots456 = (0, 1, 3), (0, 2, 4), (1, 2, 5), (3, 4, 5)
    mixed = apply_l if kind == "RLLL" else apply_r
    if side == "left":
        steps = [(apply_r, slots456), (mixed, slots236), (mixed, slots135), (mixed, slots124)]
    else:
        steps = [(mixed, slots124), (mixed, slots135), (mixed, slots236), (apply_r, slots456)]
    vec: Vec = {tuple(state): Fraction(1)}
    for fn, slots in steps:
        vec = fn(qpt, slots, vec)
    return vec


def tetrahedron_residual(qpt: QPoint, kind: str, state: State6) -> Vec:
    """Difference of the two sides of the four-operator identity."""
    lhs = apply_threed(qpt, kind, "left", state)
    rhs = apply_threed(qpt, kind, "right", state)
    diff: Vec = dict(lhs)
    for st, v in rhs.items():
        diff[st] = diff.get(st, 0) - v
    return {st: v for st, v in diff.items() if v}


# ---------------------------------------------------------------------------
# linear recursion identities among neighbouring elements
# ---------------------------------------------------------------------------


def _rho(qpt: QPoint, eps: int) -> Fraction:
    # sign-twisted weight entering the mixed recursions
    return qpt.q if eps == 0 else -1 / qpt.q


def _res_hkr1(qpt, a, b, c, i, j, k):
    q = qpt.q
    return (
        q_int(qpt, a + 1) * r_element(qpt, a + 1, b, c, i, j, k)
        - q_int(qpt, j) * r_element(qpt, a, b, c, i, j - 1, k + 1)
        - q ** (-j + k) * q_int(qpt, i) * r_element(qpt, a, b, c, i - 1, j, k)
    )


def _res_hkr2(qpt, a, b, c, i, j, k):
    q = qpt.q
    return (
        q ** (k + 1) * q_int(qpt, a + 1) * r_element(qpt, a + 1, b, c, i, j, k)
        + q ** (-a - 1) * q_int(qpt, b + 1) * r_element(qpt, a, b + 1, c, i, j, k + 1)
        - q ** (-j - 1) * q_int(qpt, i) * r_element(qpt, a, b, c, i - 1, j, k)
    )


def _res_hkr3(qpt, a, b, c, i, j, k):
    q = qpt.q
    return (
        q ** (-a) * q_int(qpt, b + 1) * r_element(qpt, a, b + 1, c, i, j, k + 1)
        + q ** (k + 2) * q_int(qpt, j) * r_element(qpt, a, b, c, i, j - 1, k + 1)
        - q ** (-j) * (1 - q ** (2 * k + 2)) * q_int(qpt, i) * r_element(qpt, a, b, c, i - 1, j, k)
    )


def _res_hkr4(qpt, a, b, c, i, j, k):
    q = qpt.q
    return (
        (1 - q ** (2 * k + 2)) * q_int(qpt, a + 1) * r_element(qpt, a + 1, b, c, i, j, k)
        - q ** (-a + k) * q_int(qpt, b + 1) * r_element(qpt, a, b + 1, c, i, j, k + 1)
        - q_int(qpt, j) * r_element(qpt, a, b, c, i, j - 1, k + 1)
    )


def _res_hzk(qpt, a, b, c, i, j, k):
    q = qpt.q
    return (
        r_element(qpt, a - 1, b, c, i, j, k)
        - q ** (a + c + 2) * r_element(qpt, a, b - 1, c + 1, i, j, k)
        - r_element(qpt, a, b, c + 1, i, j + 1, k)
    )


def _res_ann(qpt, a, b, c, i, j, k):
    q = qpt.q
    return (
        q ** (a + 1) * r_element(qpt, a, b - 1, c, i, j, k - 1)
        + q ** c * r_element(qpt, a, b, c, i, j + 1, k - 1)
        - q ** (j + 1) * r_element(qpt, a, b, c - 1, i + 1, j, k - 1)
    )


def _res_mak(qpt, a, b, c, i, j, k):
    q = qpt.q
    return (
        q ** c * r_element(qpt, a - 1, b, c, i, j, k)
        + q ** a * (1 - q ** (2 * c + 2)) * r_element(qpt, a, b - 1, c + 1, i, j, k)
        - q ** j * r_element(qpt, a, b, c, i + 1, j, k)
    )


def _res_yum(qpt, a, b, c, i, j, k):
    q = qpt.q
    return (
        r_element(qpt, a - 1, b, c, i, j, k)
        - (1 - q ** (2 * c + 2)) * r_element(qpt, a, b, c + 1, i, j + 1, k)
        - q ** (c + j + 2) * r_element(qpt, a, b, c, i + 1, j, k)
    )


def _res_ior(qpt, eps, a, b, c, i, j, k):
    q = qpt.q
    rho = _rho(qpt, eps)
    return (
        -q * q_int(qpt, a + 1) * (1 - q ** k) * s_element(qpt, eps, a + 1, b, c, i, j, k - 1)
        + rho ** (-a) * q_int(qpt, b + 1) * s_element(qpt, eps, a, b + 1, c, i, j, k)
        + q * q_int(qpt, j) * s_element(qpt, eps, a, b, c, i, j - 1, k)
        - rho ** (-j) * q_int(qpt, i) * (1 - q ** k) * s_element(qpt, eps, a, b, c, i - 1, j, k - 1)
    )


def _res_ior2(qpt, eps, a, b, c, i, j, k):
    q = qpt.q
    rho = _rho(qpt, eps)
    return (
        s_element(qpt, eps, a - 1, b, c, i, j, k)
        - q * rho ** a * (1 + q ** (c + 1)) * s_element(qpt, eps, a, b - 1, c + 1, i, j, k)
        - (1 + q ** (c + 1)) * s_element(qpt, eps, a, b, c + 1, i, j + 1, k)
        + q * rho ** j * s_element(qpt, eps, a, b, c, i + 1, j, k)
    )


def _res_sseq(qpt, eps, eps2, a, b, i, j, a2, b2, i2, j2, c, k, k2):
    """Two-factor exchange recursion tying consecutive slots together.

    The middle index of the second factor is the in-auxiliary index of
    the first, as in a transfer-matrix product.
    """
    rho, rho2 = _rho(qpt, eps), _rho(qpt, eps2)
    S, S2 = (lambda *ix: s_element(qpt, eps, *ix)), (lambda *ix: s_element(qpt, eps2, *ix))
    lhs = (
        q_int(qpt, a + 1) * S(a + 1, b, c, i, j, k) * S2(a2 - 1, b2, k, i2, j2, k2)
        + rho ** (-a) * rho2 ** a2 * q_int(qpt, b + 1)
        * S(a, b + 1, c, i, j, k + 1) * S2(a2, b2 - 1, k + 1, i2, j2, k2)
    )
    rhs = (
        q_int(qpt, j) * S(a, b, c, i, j - 1, k + 1) * S2(a2, b2, k + 1, i2, j2 + 1, k2)
        + rho ** (-j) * rho2 ** j2 * q_int(qpt, i)
        * S(a, b, c, i - 1, j, k) * S2(a2, b2, k, i2 + 1, j2, k2)
    )
    return lhs - rhs


LOCAL_IDENTITIES = {
    "hkr1": (_res_hkr1, 0),
    "hkr2": (_res_hkr2, 0),
    "hkr3": (_res_hkr3, 0),
    "hkr4": (_res_hkr4, 0),
    "hzk": (_res_hzk, 0),
    "ann": (_res_ann, 0),
    "mak": (_res_mak, 0),
    "yum": (_res_yum, 0),
    "ior": (_res_ior, 1),
    "ior2": (_res_ior2, 1),
    "sseq": (_res_sseq, 2),
}


def verify_local_identity(qpt: QPoint, name: str, idx: Sequence[int],
                          eps: Sequence[int] = ()) -> Fraction:
    """Residual of a named local identity at the given index tuple.

    ``eps`` supplies the slot flag(s) for the mixed identities: one flag
    for "ior"/"ior2", two for "sseq", none for the pure Fock ones.
    """
    if name not in LOCAL_IDENTITIES:
        raise ValueError(f"unknown identity {name!r}")
    fn, n_eps = LOCAL_IDENTITIES[name]
    eps = tuple(eps)
    if len(eps) != n_eps:
        raise ValueError(f"{name} wants {n_eps} slot flag(s), got {len(eps)}")
    return fn(qpt, *eps, *idx)
