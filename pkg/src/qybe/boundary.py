"""Charge-coherent vectors on the Fock slot and their fixed-point
relation under the three-slot operator.

Two weight patterns exist: the plain one (every occupation, weight
1/(q)_m) and the even one (even occupations only, weight 1/(q^4)_{m/2}).
Dressed with a spectral parameter on the number operator, the triple
tensor product with parameters (x, xy, y) is fixed by the three-slot
operator, on both the ket and the bra side.  The check runs on the
big-float backend with an explicit cutoff, and the empirical decay of
the residual under growing cutoff is recorded rather than asserted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict

from .scalars import QPoint, mp_ctx, poch, to_mpc
from .threed import r_element_float

__all__ = [
    "BoundaryVector",
    "chi_coeff",
    "boundary_vector",
    "verify_boundary_eigenrelation",
]


def chi_coeff(qpt: QPoint, s: int, m: int) -> Fraction:
    """Exact weight of occupation m in the charge-coherent vector.

    s=1: 1/(q)_m for every m; s=2: 1/(q^4)_{m/2} for even m, else 0."""
    if s not in (1, 2):
        raise ValueError("weight pattern must be 1 or 2")
    if m < 0:
        raise ValueError("occupation must be nonnegative")
    if s == 1:
        return 1 / poch(qpt, 1, m)
    if m % 2:
        return Fraction(0)
    return 1 / poch(qpt, 4, m // 2)


@dataclass(frozen=True)
class BoundaryVector:
    """Truncated charge-coherent vector: weights for occupations <= cutoff."""

    s: int
    cutoff: int
    coefficients: Dict[int, Fraction] = field(compare=False)

    def __post_init__(self):
        if self.s not in (1, 2):
            raise ValueError("weight pattern must be 1 or 2")
        if self.cutoff < 0:
            raise ValueError("cutoff must be nonnegative")


def boundary_vector(qpt: QPoint, s: int, cutoff: int) -> BoundaryVector:
    coeffs = {m: chi_coeff(qpt, s, m) for m in range(cutoff + 1)}
    return BoundaryVector(s=s, cutoff=cutoff, coefficients={
        m: c for m, c in coeffs.items() if c})


def _dressed_floats(qpt: QPoint, s: int, z, cutoff: int, ctx):
    """Float weights of the spectrally dressed vector: z**(m/s) * weight."""
    zf = to_mpc(z, ctx)
    out = {}
    for m in range(cutoff + 1):
        c = chi_coeff(qpt, s, m)
        if c:
            out[m] = to_mpc(c, ctx) * zf ** (m // s)
    return out


def verify_boundary_eigenrelation(qpt: QPoint, s: int, x, y,
                                  cutoff: int = 40, precision: int = 256,
                                  component_max: int | None = None):
    """Residuals of the triple fixed-point relation, ket and bra side.

    Returns a dict with the worst ket/bra residuals over all components
    whose three indices are <= component_max (default cutoff // 2), plus
    the residual profile over increasing sub-cutoffs and the estimated
    decay ratio of the last profile steps (None when the profile sits at
    float noise, which is the generic outcome: slotwise conservation
    makes every component a finite sum)."""
    if cutoff < 10:
        raise ValueError("cutoff must be at least 10")
    ctx = mp_ctx(precision)
    cmax = cutoff // 2 if component_max is None else component_max
    cx = _dressed_floats(qpt, s, x, 3 * cutoff, ctx)
    cxy = _dressed_floats(qpt, s, Fraction(x) * Fraction(y), 3 * cutoff, ctx)
    cy = _dressed_floats(qpt, s, y, 3 * cutoff, ctx)

    def ket_residual(a, b, c, jmax):
        acc = ctx.mpc(0)
        for j in range(min(a + b, b + c, jmax) + 1):
            i, k = a + b - j, b + c - j
            if i not in cx or j not in cxy or k not in cy:
                continue
            r = r_element_float(qpt, a, b, c, i, j, k, ctx)
            if r:
                acc += r * cx[i] * cxy[j] * cy[k]
        rhs = cx.get(a, ctx.mpc(0)) * cxy.get(b, ctx.mpc(0)) * cy.get(c, ctx.mpc(0))
        return abs(acc - rhs)

    def pairing_weight(m):
        # the dual basis pairs with weight (q^2; q^2)_m
        return to_mpc(poch(qpt, 2, m), ctx)

    def bra_residual(i, j, k, bmax):
        acc = ctx.mpc(0)
        for b in range(min(i + j, j + k, bmax) + 1):
            a, c = i + j - b, j + k - b
            if a not in cx or b not in cxy or c not in cy:
                continue
            r = r_element_float(qpt, a, b, c, i, j, k, ctx)
            if r:
                acc += (r * cx[a] * cxy[b] * cy[c]
                        * pairing_weight(a) * pairing_weight(b) * pairing_weight(c))
        rhs = (cx.get(i, ctx.mpc(0)) * cxy.get(j, ctx.mpc(0)) * cy.get(k, ctx.mpc(0))
               * pairing_weight(i) * pairing_weight(j) * pairing_weight(k))
        return abs(acc - rhs)

    worst_ket = ctx.mpf(0)
    worst_bra = ctx.mpf(0)
    for a in range(cmax + 1):
        for b in range(cmax + 1):
            for c in range(cmax + 1):
                worst_ket = max(worst_ket, ket_residual(a, b, c, cutoff))
                worst_bra = max(worst_bra, bra_residual(a, b, c, cutoff))

    # residual profile on a probe component as the sub-cutoff grows
    probe = (cmax, cmax, cmax)
    profile = []
    for sub in range(max(10, cmax), cutoff + 1, 2):
        profile.append(ket_residual(*probe, sub))
    noise = ctx.mpf(2) ** (-(precision - 16))
    ratio = None
    if len(profile) >= 2 and profile[-2] > noise and profile[-1] > noise:
        ratio = profile[-1] / profile[-2]
        if ratio >= 1:
            raise ArithmeticError(
                "residual profile is not decaying; series diverges")
    return {
        "weight_pattern": s,
        "cutoff": cutoff,
        "precision_bits": precision,
        "component_max": cmax,
        "ket_residual": worst_ket,
        "bra_residual": worst_bra,
        "residual_profile": profile,
        "decay_ratio": ratio,
    }
