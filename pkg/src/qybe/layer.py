"""Two-slot operators assembled from a layer of three-slot operators.

A layer couples n visible slot pairs through a chain of auxiliary Fock
indices.  Closing the auxiliary chain in two different ways yields two
families acting on a tensor square of the signature space:

* trace closure with a spectral weight z on the auxiliary charge --
  evaluated *exactly*: slotwise conservation pins every auxiliary index
  to a common offset c0, the integrand becomes a Laurent polynomial in
  t = q**c0, and the sum over c0 is a finite combination of geometric
  series;
* boundary-vector closure with weights (s, t) -- an honestly infinite
  series, evaluated on the big-float backend with an explicit cutoff.

Also here: the diagonal gauges by powers of the phase constant p, the
local swap map exchanging an adjacent bit/Fock slot pair, Yang-Baxter
residuals, and a plain-text dump format for computed blocks.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from .scalars import GaussRat, QPoint, poch_binomial, q_pochhammer, to_mpc
from .spaces import (Signature, State, check_signature, enumerate_level,
                     enumerate_pair_block, enumerate_splittings)
from .threed import l_element_float, r_element_float

Pair = Tuple[State, State]

__all__ = [
    "rho_trace",
    "str_entry",
    "build_Str",
    "rho_boundary",
    "sst_entry_float",
    "build_Sst",
    "gauge_sandwich",
    "phi_local_images",
    "phi_apply",
    "phi_conjugation_residual",
    "phi_conjugation_residual_boundary",
    "trace_commutation_residual",
    "boundary_commutation_residual",
    "trace_ybe_residual",
    "boundary_ybe_residual",
    "dump_block",
]


# ---------------------------------------------------------------------------
# trace closure: exact rational evaluation
# ---------------------------------------------------------------------------


def _bit_factor_laurent(qpt: QPoint, a, b, i, j, dk: int):
    """Laurent polynomial (in t = q**c0) of one two-state slot factor.

    ``dk`` is the offset of the incoming auxiliary index: in-Fock = c0+dk.
    """
    q = qpt.q
    if (a, b) == (0, 0) and (i, j) == (0, 0):
        return {0: Fraction(1)}
    if (a, b) == (1, 1) and (i, j) == (1, 1):
        return {0: Fraction(1)}
    if (a, b) == (0, 1) and (i, j) == (0, 1):
        return {1: -(q ** (dk + 1))}
    if (a, b) == (1, 0) and (i, j) == (1, 0):
        return {1: q ** dk}
    if (a, b) == (0, 1) and (i, j) == (1, 0):
        return {0: Fraction(1), 2: -(q ** (2 * dk))}
    if (a, b) == (1, 0) and (i, j) == (0, 1):
        return {0: Fraction(1)}
    return {}


def _fock_factor_laurent(qpt: QPoint, a, b, i, j, dprev: int, dk: int):
    """Laurent polynomial of one Fock slot factor, exponents in t = q**c0."""
    if a + b != i + j:
        return {}
    q = qpt.q
    poly: Dict[int, Fraction] = {}
    for lam in range(min(b, j) + 1):
        mu = b - lam
        if mu > i:
            continue
        coeff = (
            Fraction((-1) ** lam)
            * q ** (i * dprev - i * j + lam * (dk + 1) + mu * mu - mu * dk)
            * poch_binomial(qpt, i, mu)
            * poch_binomial(qpt, j, lam)
        )
        base_exp = i + lam - mu
        # expand prod_{r=1}^{mu} (1 - q^{2(dprev+r)} t^2)
        terms = {0: coeff}
        for r in range(1, mu + 1):
            nxt: Dict[int, Fraction] = {}
            for e, v in terms.items():
                nxt[e] = nxt.get(e, Fraction(0)) + v
                nxt[e + 2] = nxt.get(e + 2, Fraction(0)) - v * q ** (2 * (dprev + r))
            terms = nxt
        for e, v in terms.items():
            if v:
                poly[base_exp + e] = poly.get(base_exp + e, Fraction(0)) + v
    return {e: v for e, v in poly.items() if v}


def _poly_mul(p1, p2):
    out: Dict[int, Fraction] = {}
    for e1, v1 in p1.items():
        for e2, v2 in p2.items():
            e = e1 + e2
            out[e] = out.get(e, Fraction(0)) + v1 * v2
    return {e: v for e, v in out.items() if v}


def rho_trace(qpt: QPoint, sig: Signature, z: Fraction, l: int, m: int) -> Fraction:
    """Overall scalar fixing the reference diagonal entry of a trace block.

    All-ones signatures get the two-state normalisation; any signature
    with a Fock slot gets the one fixing |l e_i> (x) |m e_i| for i the
    last Fock slot.
    """
    q = qpt.q
    if all(sig):
        return Fraction((-q)) ** (-max(m - l, 0)) * (1 - q ** abs(l - m) * z)
    num = q_pochhammer(q ** (l - m) * z, q ** 2, m + 1)
    den = q_pochhammer(q ** (l - m + 2) / z, q ** 2, m)
    if den == 0:
        raise ZeroDivisionError("spectral parameter hits a normalisation pole")
    return z ** (-m) * num / den


@lru_cache(maxsize=None)
def _trace_sum(qpt: QPoint, sig: Signature, z: Fraction, out_pair: Pair, in_pair: Pair) -> Fraction:
    """Unnormalised trace-closed entry: exact geometric resummation in c0."""
    a, b = out_pair
    i, j = in_pair
    n = len(sig)
    if any(a[r] + b[r] != i[r] + j[r] for r in range(n)):
        return Fraction(0)
    if sum(b) != sum(j):  # auxiliary chain cannot close
        return Fraction(0)
    # auxiliary offsets d_k relative to c0 (d_0 = 0, d_n = 0 by the above)
    d = [0]
    for r in range(n):
        d.append(d[-1] + b[r] - j[r])
    c0_min = max(0, -min(d[:-1]))
    poly = {0: Fraction(1)}
    for r in range(n):
        if sig[r]:
            fac = _bit_factor_laurent(qpt, a[r], b[r], i[r], j[r], d[r + 1])
        else:
            fac = _fock_factor_laurent(qpt, a[r], b[r], i[r], j[r], d[r], d[r + 1])
        if not fac:
            return Fraction(0)
        poly = _poly_mul(poly, fac)
        if not poly:
            return Fraction(0)
    q = qpt.q
    total = Fraction(0)
    for e, u in poly.items():
        ratio = z * q ** e
        if abs(ratio) >= 1:
            raise ValueError("trace series diverges: |z q^e| >= 1")
        total += u * ratio ** c0_min / (1 - ratio)
    return total


def str_entry(qpt: QPoint, sig, z, out_pair: Pair, in_pair: Pair,
              normalized: bool = True) -> Fraction:
    """One matrix element of the trace-closed layer operator (exact)."""
    sig = check_signature(sig)
    z = Fraction(z)
    val = _trace_sum(qpt, sig, z, out_pair, in_pair)
    if not normalized:
        return val
    l, m = sum(in_pair[0]), sum(in_pair[1])
    return rho_trace(qpt, sig, z, l, m) * val


def build_Str(qpt: QPoint, sig, z, l: int, m: int, normalized: bool = True):
    """Full block of the trace-closed operator on levels (l, m).

    Returns (basis, entries) with basis the product pair basis and
    entries a dict {(out_pair, in_pair): Fraction} of nonzero elements.
    """
    sig = check_signature(sig)
    z = Fraction(z)
    basis = enumerate_pair_block(sig, l, m)
    entries: Dict[Tuple[Pair, Pair], Fraction] = {}
    rho = rho_trace(qpt, sig, z, l, m) if normalized else Fraction(1)
    for inp in basis:
        i, j = inp
        s = tuple(iv + jv for iv, jv in zip(i, j))
        for a, b in enumerate_splittings(sig, s):
            if sum(a) != l:
                continue
            val = _trace_sum(qpt, sig, z, (a, b), inp)
            if val:
                entries[((a, b), inp)] = rho * val
    return basis, entries


# ---------------------------------------------------------------------------
# boundary closure: big-float series evaluation
# ---------------------------------------------------------------------------


def rho_boundary(qpt: QPoint, s: int, t: int, z, ctx):
    """Overall scalar of the boundary-closed operator.

    For (s, t) = (1, 1) it is the vacuum-fixing infinite product
    prod_r (1 - z q^r) / (1 + q z q^r); the other weight pairs are left
    unnormalised (scalar 1) pending a closed form.
    """
    if (s, t) != (1, 1):
        return ctx.mpf(1)
    q = to_mpc(qpt.q, ctx).real
    zf = to_mpc(z, ctx)
    out = ctx.mpc(1)
    qr = ctx.mpf(1)
    # run the product until q^r is below working precision
    while qr > ctx.mpf(2) ** (-(ctx.prec + 8)):
        out *= (1 - zf * qr) / (1 + q * zf * qr)
        qr *= q
    return out


def _slot_element_float(qpt, eps, a, b, c, i, j, k, ctx):
    if eps:
        return l_element_float(qpt, a, b, c, i, j, k, ctx)
    return r_element_float(qpt, a, b, c, i, j, k, ctx)


def sst_entry_float(qpt: QPoint, sig, s: int, t: int, z, out_pair: Pair,
                    in_pair: Pair, ctx, cutoff: int = 120,
                    normalized: bool = True):
    """One boundary-closed matrix element, summed to the c0 cutoff."""
    sig = check_signature(sig)
    a, b = out_pair
    i, j = in_pair
    n = len(sig)
    if any(a[r] + b[r] != i[r] + j[r] for r in range(n)):
        return ctx.mpc(0)
    q = to_mpc(qpt.q, ctx).real
    zf = to_mpc(z, ctx)
    if abs(zf) * q ** 0 >= 1 and abs(zf) >= 1:
        raise ValueError("boundary series diverges: |z| >= 1 required")
    total = ctx.mpc(0)
    for c0 in range(cutoff + 1):
        cprev = s * c0
        term = zf ** c0
        # charge weights of the two boundary vectors
        term *= to_mpc(Fraction(1), ctx)
        num = ctx.mpf(1)
        qq = q ** 2
        for r2 in range(1, s * c0 + 1):
            num *= 1 - qq ** r2
        den1 = ctx.mpf(1)
        qs = q ** (s * s)
        for r2 in range(1, c0 + 1):
            den1 *= 1 - qs ** r2
        term *= num / den1
        ok = True
        for r in range(n):
            if r < n - 1:
                ck = cprev + b[r] - j[r]
                if ck < 0:
                    ok = False
                    break
                fac = _slot_element_float(qpt, sig[r], a[r], b[r], cprev, i[r], j[r], ck, ctx)
            else:
                t_cn = cprev + b[r] - j[r]
                if t_cn < 0 or t_cn % t:
                    ok = False
                    break
                cn = t_cn // t
                fac = _slot_element_float(qpt, sig[r], a[r], b[r], cprev, i[r], j[r], t_cn, ctx)
                dent = ctx.mpf(1)
                qt = q ** (t * t)
                for r2 in range(1, cn + 1):
                    dent *= 1 - qt ** r2
                fac /= dent
            if fac == 0:
                ok = False
                break
            term *= fac
            cprev = ck if r < n - 1 else None
        if ok:
            total += term
    if normalized:
        total *= rho_boundary(qpt, s, t, z, ctx)
    return total


def build_Sst(qpt: QPoint, sig, s: int, t: int, z, l: int, m: int, ctx,
              cutoff: int = 120, normalized: bool = True):
    """Block of the boundary-closed operator on in-levels (l, m).

    Out pairs run over every slotwise splitting of i + j (levels are not
    separately conserved by this closure)."""
    sig = check_signature(sig)
    basis_in = enumerate_pair_block(sig, l, m)
    entries = {}
    for inp in basis_in:
        i, j = inp
        sv = tuple(iv + jv for iv, jv in zip(i, j))
        for outp in enumerate_splittings(sig, sv):
            val = sst_entry_float(qpt, sig, s, t, z, outp, inp, ctx, cutoff, normalized)
            if val != 0:
                entries[(outp, inp)] = val
    return basis_in, entries


# ---------------------------------------------------------------------------
# diagonal gauges by powers of the phase constant
# ---------------------------------------------------------------------------


def gauge_sandwich(qpt: QPoint, entries, direction: int = +1, exact: bool = True, ctx=None):
    """Conjugate a pair operator by the charge gauge K|m> = p^{-|m|}|m>.

    direction=+1 applies (K (x) 1) . O . (1 (x) K^{-1}), i.e. multiplies
    the (out, in) element by p^(|j| - |a|); direction=-1 applies the
    inverse sandwich (K^{-1} (x) 1) . O . (1 (x) K).
    """
    out = {}
    for ((a, b), (i, j)), val in entries.items():
        k = direction * (sum(j) - sum(a))
        fac = qpt.p_pow(k)
        out[((a, b), (i, j))] = (fac * val) if exact else (to_mpc(fac, ctx) * val)
    return out


# ---------------------------------------------------------------------------
# local swap of an adjacent bit/Fock slot pair
# ---------------------------------------------------------------------------


def phi_local_images(qpt: QPoint, alpha: int, beta: int, m4: int, m5: int):
    """Images of the local swap map on (bit, bit, Fock, Fock) data.

    Returns a list of ((alpha', beta', m4', m5'), coefficient)."""
    q = qpt.q
    out = []
    if (alpha, beta) == (0, 0):
        out.append(((0, 0, m4, m5), 1 + q ** (m4 + m5)))
    elif (alpha, beta) == (0, 1):
        out.append(((0, 1, m4, m5), q ** m4 - q ** (m5 + 1)))
        if m4 >= 1:
            out.append(((1, 0, m4 - 1, m5 + 1), 1 - q ** (2 * m4)))
    elif (alpha, beta) == (1, 0):
        if m5 >= 1:
            out.append(((0, 1, m4 + 1, m5 - 1), 1 - q ** (2 * m5)))
        out.append(((1, 0, m4, m5), q ** m5 - q ** (m4 + 1)))
    else:
        out.append(((1, 1, m4, m5), 1 + q ** (m4 + m5 + 2)))
    return [(img, c) for img, c in out if c]


def phi_apply(qpt: QPoint, pos: int, vec):
    """Apply the local swap at slot positions (pos, pos+1) of both factors.

    ``vec`` is a sparse vector over pairs of states whose signature has a
    bit slot at pos and a Fock slot at pos+1; the image lives over the
    signature with those two flags exchanged."""
    out = {}
    for (a, b), coeff in vec.items():
        alpha, beta = a[pos], b[pos]
        m4, m5 = a[pos + 1], b[pos + 1]
        for (al2, be2, m42, m52), c in phi_local_images(qpt, alpha, beta, m4, m5):
            a2 = a[:pos] + (m42, al2) + a[pos + 2:]
            b2 = b[:pos] + (m52, be2) + b[pos + 2:]
            key = (a2, b2)
            out[key] = out.get(key, 0) + coeff * c
    return {k: v for k, v in out.items() if v}


def phi_conjugation_residual(qpt: QPoint, sig, pos: int, z, l: int, m: int):
    """Exact residual of (swap . S_old - S_new . swap) on a level block.

    ``sig`` must have a bit at pos and a Fock slot at pos+1; S_new is the
    trace-closed operator of the transposed signature."""
    sig = check_signature(sig)
    if sig[pos] != 1 or sig[pos + 1] != 0:
        raise ValueError("need flags (1, 0) at the transposed positions")
    sig_new = list(sig)
    sig_new[pos], sig_new[pos + 1] = 0, 1
    sig_new = tuple(sig_new)
    worst = Fraction(0)
    for inp in enumerate_pair_block(sig, l, m):
        # S_old then swap
        i, j = inp
        sv = tuple(iv + jv for iv, jv in zip(i, j))
        mid = {}
        for outp in enumerate_splittings(sig, sv):
            if sum(outp[0]) != l:
                continue
            v = str_entry(qpt, sig, z, outp, inp)
            if v:
                mid[outp] = v
        lhs = phi_apply(qpt, pos, mid)
        # swap then S_new
        rhs = {}
        for outp0, c0 in phi_apply(qpt, pos, {inp: Fraction(1)}).items():
            i2, j2 = outp0
            sv2 = tuple(iv + jv for iv, jv in zip(i2, j2))
            for outp in enumerate_splittings(sig_new, sv2):
                if sum(outp[0]) != l:
                    continue
                v = str_entry(qpt, sig_new, z, outp, outp0)
                if v:
                    rhs[outp] = rhs.get(outp, Fraction(0)) + c0 * v
        for key in set(lhs) | set(rhs):
            d = abs(Fraction(lhs.get(key, 0)) - Fraction(rhs.get(key, 0)))
            worst = max(worst, d)
    return worst


def phi_conjugation_residual_boundary(qpt: QPoint, sig, pos: int, z, l: int,
                                      m: int, ctx, cutoff: int = 160):
    """Float residual of (swap . S_old - S_new . swap) for the boundary
    closure with weight pattern (1, 1) on the (l, m) in-level block."""
    sig = check_signature(sig)
    if sig[pos] != 1 or sig[pos + 1] != 0:
        raise ValueError("need flags (1, 0) at the transposed positions")
    sig_new = list(sig)
    sig_new[pos], sig_new[pos + 1] = 0, 1
    sig_new = tuple(sig_new)
    worst = ctx.mpf(0)
    for inp in enumerate_pair_block(sig, l, m):
        i, j = inp
        sv = tuple(iv + jv for iv, jv in zip(i, j))
        mid = {}
        for outp in enumerate_splittings(sig, sv):
            v = sst_entry_float(qpt, sig, 1, 1, z, outp, inp, ctx, cutoff)
            if v != 0:
                mid[outp] = v
        lhs = phi_apply(qpt, pos, mid)
        rhs = {}
        for outp0, c0 in phi_apply(qpt, pos, {inp: Fraction(1)}).items():
            i2, j2 = outp0
            sv2 = tuple(iv + jv for iv, jv in zip(i2, j2))
            for outp in enumerate_splittings(sig_new, sv2):
                v = sst_entry_float(qpt, sig_new, 1, 1, z, outp, outp0, ctx,
                                    cutoff)
                if v != 0:
                    rhs[outp] = rhs.get(outp, ctx.mpc(0)) + to_mpc(c0, ctx) * v
        for key in set(lhs) | set(rhs):
            worst = max(worst, abs(lhs.get(key, ctx.mpc(0))
                                   - rhs.get(key, ctx.mpc(0))))
    return worst


# ---------------------------------------------------------------------------
# coproduct commutation of the layer-built operators
# ---------------------------------------------------------------------------


def trace_commutation_residual(qpt: QPoint, sig, x, y, l: int, m: int):
    """Worst exact entry of (primed coproduct) . S - S . (coproduct).

    The trace-closed operator at z = x/y is applied blockwise; every
    cyclic-family generator is checked in all three kinds (Cartan,
    raising, lowering) on each basis pair of the (l, m) block."""
    from .gqg import cartan_data, coproduct_action

    sig = check_signature(sig)
    x, y = Fraction(x), Fraction(y)
    z = x / y

    def apply_S(vec):
        out = {}
        for (u, v), coeff in vec.items():
            sv = tuple(a + b for a, b in zip(u, v))
            for outp in enumerate_splittings(sig, sv):
                if sum(outp[0]) != sum(u):
                    continue
                val = str_entry(qpt, sig, z, outp, (u, v))
                if val:
                    out[outp] = out.get(outp, 0) + coeff * val
        return {k: w for k, w in out.items() if w}

    gens, _, _ = cartan_data(qpt, sig, "A")
    worst = GaussRat(0)
    for inp in enumerate_pair_block(sig, l, m):
        v0 = {inp: GaussRat(1)}
        sv0 = apply_S(v0)
        for g in gens:
            for kind in ("k", "e", "f"):
                lhs = coproduct_action(qpt, sig, "A", g, kind, x, y, sv0,
                                       primed=True)
                rhs = apply_S(coproduct_action(qpt, sig, "A", g, kind, x, y, v0))
                for key in set(lhs) | set(rhs):
                    d = GaussRat(0) + lhs.get(key, 0) - rhs.get(key, 0)
                    if (d.re * d.re + d.im * d.im
                            > worst.re * worst.re + worst.im * worst.im):
                        worst = d
    return worst


def boundary_commutation_residual(qpt: QPoint, sig, x, y, max_total: int, ctx,
                                  cutoff: int = 160, cache=None):
    """Float residual of the commutation of the gauge-dressed boundary
    operator with the mixed-boundary family.

    The operator is (K (x) 1) S^{1,1}(x/y) (1 (x) K^{-1}) with the charge
    gauge K; each generator of the mixed-boundary family is checked in
    all three kinds on every basis pair with slot totals <= max_total."""
    from .gqg import cartan_data, coproduct_action

    sig = check_signature(sig)
    x, y = Fraction(x), Fraction(y)
    z = x / y
    if cache is None:
        cache = {}

    def entry(outp, inp):
        key = (outp, inp)
        if key not in cache:
            fac = to_mpc(qpt.p_pow(sum(inp[1]) - sum(outp[0])), ctx)
            cache[key] = fac * sst_entry_float(qpt, sig, 1, 1, z, outp, inp,
                                               ctx, cutoff)
        return cache[key]

    def apply_S(vec):
        out = {}
        for (u, v), coeff in vec.items():
            sv = tuple(a + b for a, b in zip(u, v))
            for outp in enumerate_splittings(sig, sv):
                val = entry(outp, (u, v))
                if val != 0:
                    out[outp] = out.get(outp, ctx.mpc(0)) + coeff * val
        return out

    def apply_coproduct(vec, g, kind, primed):
        out = {}
        for pair, coeff in vec.items():
            img = coproduct_action(qpt, sig, "B", g, kind, x, y,
                                   {pair: GaussRat(1)}, primed=primed)
            for tgt, c in img.items():
                out[tgt] = out.get(tgt, ctx.mpc(0)) + coeff * to_mpc(c, ctx)
        return out

    from .spaces import enumerate_truncated
    states = enumerate_truncated(sig, max_total)
    gens, _, _ = cartan_data(qpt, sig, "B")
    worst = ctx.mpf(0)
    for u in states:
        for v in states:
            v0 = {(u, v): ctx.mpc(1)}
            sv0 = apply_S(v0)
            for g in gens:
                for kind in ("k", "e", "f"):
                    lhs = apply_coproduct(sv0, g, kind, primed=True)
                    rhs = apply_S(apply_coproduct(v0, g, kind, primed=False))
                    for key in set(lhs) | set(rhs):
                        d = abs(lhs.get(key, ctx.mpc(0))
                                - rhs.get(key, ctx.mpc(0)))
                        worst = max(worst, d)
    return worst


# ---------------------------------------------------------------------------
# Yang-Baxter residuals on triple tensor products
# ---------------------------------------------------------------------------


def _apply_pair_exact(qpt, sig, z, vec, p1, p2, conserve_levels=True):
    out = {}
    for st, coeff in vec.items():
        i, j = st[p1], st[p2]
        sv = tuple(iv + jv for iv, jv in zip(i, j))
        for a, b in enumerate_splittings(sig, sv):
            if conserve_levels and sum(a) != sum(i):
                continue
            v = str_entry(qpt, sig, z, (a, b), (i, j))
            if v:
                ns = list(st)
                ns[p1], ns[p2] = a, b
                key = tuple(ns)
                out[key] = out.get(key, 0) + coeff * v
    return {k: v for k, v in out.items() if v}


def trace_ybe_residual(qpt: QPoint, sig, x, y, triple) -> Fraction:
    """Exact residual of the Yang-Baxter identity on one basis triple.

    Applies S12(x) S13(xy) S23(y) and S23(y) S13(xy) S12(x) to the basis
    vector |triple> and returns the largest entry of the difference."""
    sig = check_signature(sig)
    x, y = Fraction(x), Fraction(y)
    v0 = {tuple(triple): Fraction(1)}
    lhs = _apply_pair_exact(qpt, sig, y, v0, 1, 2)
    lhs = _apply_pair_exact(qpt, sig, x * y, lhs, 0, 2)
    lhs = _apply_pair_exact(qpt, sig, x, lhs, 0, 1)
    rhs = _apply_pair_exact(qpt, sig, x, v0, 0, 1)
    rhs = _apply_pair_exact(qpt, sig, x * y, rhs, 0, 2)
    rhs = _apply_pair_exact(qpt, sig, y, rhs, 1, 2)
    worst = Fraction(0)
    for key in set(lhs) | set(rhs):
        worst = max(worst, abs(Fraction(lhs.get(key, 0)) - Fraction(rhs.get(key, 0))))
    return worst


def _apply_pair_float(qpt, sig, s, t, z, vec, p1, p2, ctx, cutoff, cache):
    out = {}
    for st, coeff in vec.items():
        i, j = st[p1], st[p2]
        sv = tuple(iv + jv for iv, jv in zip(i, j))
        for a, b in enumerate_splittings(sig, sv):
            key_e = (z, (a, b), (i, j))
            if key_e not in cache:
                cache[key_e] = sst_entry_float(qpt, sig, s, t, z, (a, b), (i, j), ctx, cutoff)
            v = cache[key_e]
            if v != 0:
                ns = list(st)
                ns[p1], ns[p2] = a, b
                key = tuple(ns)
                out[key] = out.get(key, 0) + coeff * v
    return out


def boundary_ybe_residual(qpt: QPoint, sig, s: int, t: int, x, y, triple,
                          ctx, cutoff: int = 120, cache=None):
    """Big-float residual of the Yang-Baxter identity for one basis triple."""
    sig = check_signature(sig)
    if cache is None:
        cache = {}
    xf, yf = Fraction(x), Fraction(y)
    v0 = {tuple(triple): ctx.mpf(1)}
    lhs = _apply_pair_float(qpt, sig, s, t, yf, v0, 1, 2, ctx, cutoff, cache)
    lhs = _apply_pair_float(qpt, sig, s, t, xf * yf, lhs, 0, 2, ctx, cutoff, cache)
    lhs = _apply_pair_float(qpt, sig, s, t, xf, lhs, 0, 1, ctx, cutoff, cache)
    rhs = _apply_pair_float(qpt, sig, s, t, xf, v0, 0, 1, ctx, cutoff, cache)
    rhs = _apply_pair_float(qpt, sig, s, t, xf * yf, rhs, 0, 2, ctx, cutoff, cache)
    rhs = _apply_pair_float(qpt, sig, s, t, yf, rhs, 1, 2, ctx, cutoff, cache)
    worst = ctx.mpf(0)
    for key in set(lhs) | set(rhs):
        worst = max(worst, abs(lhs.get(key, ctx.mpf(0)) - rhs.get(key, ctx.mpf(0))))
    return worst


# ---------------------------------------------------------------------------
# plain-text dump of a computed block
# ---------------------------------------------------------------------------


def dump_block(sig, sector, qpt: QPoint, z, backend: str, entries,
               cutoff: int | None = None) -> str:
    """Serialise a block as text: header lines, then one line per entry

        a1,..,an | b1,..,bn <- i1,..,in | j1,..,jn : value

    with exact values as reduced fractions (re[+im i]) and float values
    in decimal."""
    lines = [
        f"# signature: {','.join(str(e) for e in sig)}",
        f"# sector: {sector}",
        f"# q-root: {Fraction(qpt.root)}",
        f"# z: {z}",
        f"# backend: {backend}",
    ]
    if cutoff is not None:
        lines.append(f"# cutoff: {cutoff}")

    def fmt_state(st):
        return ",".join(str(v) for v in st)

    def fmt_val(v):
        if isinstance(v, GaussRat):
            return repr(v)
        if isinstance(v, (int, Fraction)):
            return str(Fraction(v))
        return str(v)

    for ((a, b), (i, j)) in sorted(entries.keys()):
        v = entries[((a, b), (i, j))]
        lines.append(
            f"{fmt_state(a)} | {fmt_state(b)} <- {fmt_state(i)} | {fmt_state(j)} : {fmt_val(v)}"
        )
    return "\n".join(lines) + "\n"
