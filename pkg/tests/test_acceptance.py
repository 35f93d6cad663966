"""Acceptance suite: thirteen end-to-end checks of the package, one test
(and one pass/fail line under ``pytest -v``) per criterion.

Everything that can be exact is exact (Gaussian-rational arithmetic at
q-root 1/2); series-backed checks run at 256-bit precision against the
stated tolerances.  Shared solver outputs are cached at module level so
the later criteria reuse the earlier work.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from qybe.boundary import verify_boundary_eigenrelation
from qybe.gqg import solve_intertwiner_A, solve_intertwiner_B
from qybe.layer import (boundary_commutation_residual, boundary_ybe_residual,
                        build_Str, phi_conjugation_residual,
                        phi_conjugation_residual_boundary,
                        sst_entry_float, trace_commutation_residual,
                        trace_ybe_residual)
from qybe.scalars import GaussRat, QPoint, mp_ctx, poch, to_mpc
from qybe.spaces import enumerate_truncated
from qybe.spectral import (annihilation_residual, bit_raise_residuals,
                           bit_singular_vector, mixed_eigenvalue,
                           mixed_singular_vector, mixed_spectral_residual,
                           mixed_transition_residuals,
                           one_fock_lower_residuals, one_fock_singular_vector,
                           reproduce_example, trace_eigenvalue,
                           trace_spectral_residual, two_fock_singular_vector,
                           two_fock_transition_residuals)
from qybe.threed import (r_element, tetrahedron_residual,
                         verify_local_identity)

QPT = QPoint(Fraction(1, 2))
Q = QPT.q
X, Y = Fraction(2, 7), Fraction(3, 5)
Z_VALUES = (Fraction(3, 5), Fraction(2, 7))

# solver outputs shared between criteria (filled lazily)
_B_SOLUTIONS: dict = {}
_A_SOLUTIONS: dict = {}


def _solve_b(sig):
    if sig not in _B_SOLUTIONS:
        _B_SOLUTIONS[sig] = solve_intertwiner_B(QPT, sig, 4, Fraction(3, 5),
                                                Fraction(1))
    return _B_SOLUTIONS[sig]


def _solve_a(sig, l, m, z):
    key = (sig, l, m, z)
    if key not in _A_SOLUTIONS:
        _A_SOLUTIONS[key] = solve_intertwiner_A(QPT, sig, l, m, z, Fraction(1))
    return _A_SOLUTIONS[key]


def _is_zero(v):
    if isinstance(v, GaussRat):
        return not v
    return v == 0


def test_c01_four_r_operator_identity_exact():
    """Four-operator identity of the plain three-slot operator: every
    state with per-slot total <= 2 plus 50 random states with total <= 4."""
    for st6 in enumerate_truncated((0,) * 6, 2):
        assert tetrahedron_residual(QPT, "RRRR", st6) == {}
    pool = list(enumerate_truncated((0,) * 6, 4))
    rng = random.Random(20250825)
    for st6 in rng.sample(pool, 50):
        assert tetrahedron_residual(QPT, "RRRR", st6) == {}


def test_c02_mixed_four_operator_identity_exact():
    """Bit/Fock four-operator identity on every input with the three bit
    slots free and Fock entries <= 3."""
    for bits in product((0, 1), repeat=3):
        for focks in product(range(4), repeat=3):
            assert tetrahedron_residual(QPT, "RLLL", bits + focks) == {}


def test_c03_three_slot_symmetries_exact():
    """Involution, transpose, and weighted transpose for all indices <= 4."""

    def conserved(a, b, c):
        out = []
        for j in range(a + b + 1):
            i, k = a + b - j, b + c - j
            if k >= 0:
                out.append((i, j, k))
        return out

    def w(m):
        return poch(QPT, 2, m)

    for a, b, c in product(range(5), repeat=3):
        u, v = a + b, b + c
        for i, j, k in conserved(a, b, c):
            assert r_element(QPT, a, b, c, i, j, k) == \
                r_element(QPT, c, b, a, k, j, i)
            assert (r_element(QPT, a, b, c, i, j, k) * w(a) * w(b) * w(c)
                    == r_element(QPT, i, j, k, a, b, c) * w(i) * w(j) * w(k))
            acc = Fraction(0)
            for y in range(min(u, v) + 1):
                x2, z2 = u - y, v - y
                acc += (r_element(QPT, a, b, c, x2, y, z2)
                        * r_element(QPT, x2, y, z2, i, j, k))
            assert acc == (1 if (a, b, c) == (i, j, k) else 0)


def test_c04_local_identity_suite_exact():
    """The eight six-index identities for all indices <= 3; both flagged
    identities for both flag values; the eleven-index identity for all
    four flag pairs (all 2^8 bit tuples when both flags are set; Fock
    index ranges sized to keep the all-Fock case tractable)."""
    for name in ("hkr1", "hkr2", "hkr3", "hkr4", "hzk", "ann", "mak", "yum"):
        for idx in product(range(4), repeat=6):
            assert verify_local_identity(QPT, name, idx) == 0, (name, idx)
    for name in ("ior", "ior2"):
        for idx in product(range(4), repeat=6):
            assert verify_local_identity(QPT, name, idx, (0,)) == 0
        for abij in product((0, 1), repeat=4):
            for c, k in product(range(4), repeat=2):
                idx = (abij[0], abij[1], c, abij[2], abij[3], k)
                assert verify_local_identity(QPT, name, idx, (1,)) == 0
    # both flags set: every bit tuple, Fock tails <= 3
    for main in product((0, 1), repeat=8):
        for aux in product(range(4), repeat=3):
            assert verify_local_identity(QPT, "sseq", main + aux, (1, 1)) == 0
    # one flag set: bits on the flagged half, Fock <= 3 elsewhere
    for eps in ((1, 0), (0, 1)):
        first = (0, 1) if eps[0] else range(4)
        second = (0, 1) if eps[1] else range(4)
        for h1 in product(first, repeat=4):
            for h2 in product(second, repeat=4):
                for aux in product(range(4), repeat=3):
                    idx = h1 + h2 + aux
                    assert verify_local_identity(QPT, "sseq", idx, eps) == 0
    # no flags set: full sweep with indices <= 2, plus a seeded sample
    # of tuples with indices <= 3
    for idx in product(range(3), repeat=11):
        assert verify_local_identity(QPT, "sseq", idx, (0, 0)) == 0
    rng = random.Random(11)
    for _ in range(2000):
        idx = tuple(rng.randrange(4) for _ in range(11))
        assert verify_local_identity(QPT, "sseq", idx, (0, 0)) == 0


def test_c05_boundary_fixed_point_close():
    """Charge-coherent fixed-point relation for both weight patterns at
    unit parameters and at one seeded random parameter pair: residual
    below 1e-40 on components with indices <= 6 (cutoff 40, 256 bits)."""
    rng = random.Random(5)
    xr = Fraction(rng.randrange(1, 9), rng.randrange(9, 17))
    yr = Fraction(rng.randrange(1, 9), rng.randrange(9, 17))
    for s in (1, 2):
        for (x, y) in ((Fraction(1), Fraction(1)), (xr, yr)):
            rep = verify_boundary_eigenrelation(QPT, s, x, y, cutoff=40,
                                                precision=256,
                                                component_max=6)
            assert rep["ket_residual"] < 1e-40, (s, x, y)
            assert rep["bra_residual"] < 1e-40, (s, x, y)


def test_c06_trace_closure_equals_cyclic_solver_exact():
    """The exactly resummed trace-closed operator equals the intertwiner
    solver of the cyclic family entry-for-entry (identical reduced
    fractions) on six signatures, all sectors l, m <= 3, two z values."""
    sigs = ((1, 0), (0, 1), (1, 1), (1, 1, 0), (1, 0, 0), (0, 0))
    for z in Z_VALUES:
        for sig in sigs:
            for l in range(4):
                for m in range(4):
                    sol = _solve_a(sig, l, m, z)
                    _, built = build_Str(QPT, sig, z, l, m)
                    assert set(sol) == set(built), (sig, l, m, z)
                    for key, v in built.items():
                        assert _is_zero(GaussRat(0) + sol[key] - v), \
                            (sig, l, m, z, key)


def test_c07_boundary_closure_equals_mixed_solver_close():
    """The series-built boundary-closed operator agrees with the exact
    mixed-family solver below 1e-30 at 256 bits, truncation total <= 4,
    on four signatures."""
    ctx = mp_ctx(256)
    tol = ctx.mpf(10) ** -30
    for sig in ((1, 0), (0, 1), (1, 1), (0, 0)):
        sol = _solve_b(sig)
        worst = ctx.mpf(0)
        for (outp, inp), v in sol.items():
            ser = sst_entry_float(QPT, sig, 1, 1, Fraction(3, 5), outp, inp,
                                  ctx, cutoff=160)
            worst = max(worst, abs(ser - to_mpc(v, ctx)))
        assert worst < tol, (sig, worst)


def test_c08_generator_commutation():
    """Both layer operators commute with the full generator action in
    the twisted sense: exactly for the trace closure (including the
    mixed signature (0, 1, 0), which no slot sorting reduces), and below
    1e-30 for the boundary closure."""
    for sig, l, m in (((1, 0), 1, 1), ((0, 1), 1, 1), ((1, 1), 1, 1),
                      ((0, 0), 2, 1), ((0, 1, 0), 1, 1)):
        assert _is_zero(trace_commutation_residual(QPT, sig, X, Y, l, m)), sig
    ctx = mp_ctx(256)
    tol = ctx.mpf(10) ** -30
    for sig, total in (((1, 0), 2), ((0, 1, 0), 1)):
        res = boundary_commutation_residual(QPT, sig, X, Y, total, ctx,
                                            cutoff=160)
        assert res < tol, (sig, res)


def test_c09_three_factor_exchange():
    """Triple exchange relation: exact for the trace closure on the
    bit+Fock signature with all three factors at level 1; below 1e-30
    for the boundary closure at every weight pattern on triples with
    combined level <= 3 (cutoff 160, 256 bits)."""
    sig = (1, 0)
    level1 = [st for st in enumerate_truncated(sig, 1) if sum(st) == 1]
    for triple in product(level1, repeat=3):
        assert trace_ybe_residual(QPT, sig, X, Y, triple) == 0, triple
    ctx = mp_ctx(256)
    tol = ctx.mpf(10) ** -30
    states = enumerate_truncated(sig, 3)
    triples = [t for t in product(states, repeat=3)
               if sum(sum(st) for st in t) <= 3]
    for s, t in product((1, 2), repeat=2):
        cache: dict = {}
        worst = ctx.mpf(0)
        for triple in triples:
            worst = max(worst, boundary_ybe_residual(
                QPT, sig, s, t, X, Y, triple, ctx, 160, cache))
        assert worst < tol, (s, t, worst)


def test_c10_tabled_blocks_reproduced_exactly():
    """Every displayed coefficient of the three worked blocks is
    reproduced exactly by the assembled operators."""
    for name in ("A10", "A110", "B10"):
        rep = reproduce_example(QPT, name, Fraction(3, 5))
        assert rep["match"] is True, rep
        assert _is_zero(rep["worst"])


def test_c11_spectral_suite_exact():
    """Singular-vector annihilation, every ladder/transition relation,
    the successive-scalar ratio, and the eigenvalue products: exact for
    the three trace families on sectors l, m <= 3 and for the mixed
    family up to charge 4."""
    z = Fraction(3, 5)

    def ratio_ok(sig, l, m, s):
        lhs = trace_eigenvalue(QPT, sig, l, m, s + 1, z) \
            / trace_eigenvalue(QPT, sig, l, m, s, z)
        e = l + m - 2 * s
        assert lhs == (1 - Q ** e * z) / (z - Q ** e), (sig, l, m, s)

    # all-bit slots
    for n in (2, 3):
        sig = (1,) * n
        for l in range(0, min(n, 3) + 1):
            for m in range(0, min(n, 3) + 1):
                lo, hi = max(0, l + m - n), min(l, m)
                for t in range(lo, hi + 1):
                    vec = bit_singular_vector(QPT, n, l, m, t)
                    assert _is_zero(annihilation_residual(QPT, sig, "A",
                                                          vec, X, Y))
                    if t < hi:
                        for r in bit_raise_residuals(QPT, n, l, m, t, X, Y):
                            assert r is None or _is_zero(r)
                        ratio_ok(sig, l, m, t)
                    assert _is_zero(trace_spectral_residual(QPT, sig, l, m,
                                                            t, z))
    # one trailing Fock slot
    for n in (2, 3):
        sig = (1,) * (n - 1) + (0,)
        for l in range(4):
            for m in range(4):
                for s in range(0, min(n - 1, l, m) + 1):
                    vec = one_fock_singular_vector(QPT, n, l, m, s)
                    assert _is_zero(annihilation_residual(QPT, sig, "A",
                                                          vec, X, Y))
                    if s >= 1:
                        for r in one_fock_lower_residuals(QPT, n, l, m, s,
                                                          X, Y):
                            assert r is None or _is_zero(r)
                    if s < min(n - 1, l, m):
                        ratio_ok(sig, l, m, s)
                    assert _is_zero(trace_spectral_residual(QPT, sig, l, m,
                                                            s, z))
    # two trailing Fock slots
    for sig in ((0, 0), (1, 0, 0)):
        for l in range(4):
            for m in range(4):
                for s in range(0, min(l, m) + 1):
                    vec = two_fock_singular_vector(QPT, len(sig), l, m, s)
                    assert _is_zero(annihilation_residual(QPT, sig, "A",
                                                          vec, X, Y))
                    for r in two_fock_transition_residuals(QPT, sig, l, m,
                                                           s, X, Y):
                        assert r is None or _is_zero(r)
                    if s < min(l, m):
                        ratio_ok(sig, l, m, s)
                    assert _is_zero(trace_spectral_residual(QPT, sig, l, m,
                                                            s, z))
    # mixed family: eigenvalue product and eigenrelation up to charge 4
    for l in range(5):
        want = Fraction(1)
        for j in range(1, l + 1):
            want *= (z + Q ** j) / (1 + Q ** j * z)
        assert mixed_eigenvalue(QPT, l, z) == want
        vec = mixed_singular_vector(QPT, 2, l)
        assert _is_zero(annihilation_residual(QPT, (1, 0), "B", vec, X, Y))
        for r in mixed_transition_residuals(QPT, (1, 0), l, X, Y):
            assert r is None or _is_zero(r)
        assert _is_zero(mixed_spectral_residual(QPT, (1, 0), l, z))


def test_c12_swap_equivalence():
    """Conjugating by the local slot swap carries each layer operator to
    the one of the transposed signature: exact for the trace closure and
    below 1e-30 for the boundary closure, for both adjacent transposition
    steps taking (1, 0, 0) to (0, 0, 1)."""
    z = Fraction(10, 21)
    for sig, pos in (((1, 0, 0), 0), ((0, 1, 0), 1)):
        for l, m in ((1, 1), (2, 1), (1, 2), (2, 2)):
            assert phi_conjugation_residual(QPT, sig, pos, z, l, m) == 0, \
                (sig, pos, l, m)
    ctx = mp_ctx(256)
    tol = ctx.mpf(10) ** -30
    for sig, pos in (((1, 0, 0), 0), ((0, 1, 0), 1)):
        for l, m in ((1, 1), (2, 1)):
            res = phi_conjugation_residual_boundary(QPT, sig, pos, z, l, m,
                                                    ctx, cutoff=160)
            assert res < tol, (sig, pos, l, m, res)


def test_c13_solver_nullity_is_one_everywhere():
    """The intertwining linear system has a one-dimensional interior
    solution space at every tested configuration: the solvers raise on
    any other nullity, so successful normalised solutions witness it."""
    from qybe.spaces import enumerate_pair_block
    sigs = ((1, 0), (0, 1), (1, 1), (1, 1, 0), (1, 0, 0), (0, 0))
    for z in Z_VALUES:
        for sig in sigs:
            for l in range(4):
                for m in range(4):
                    sol = _solve_a(sig, l, m, z)
                    if enumerate_pair_block(sig, l, m):
                        assert sol  # normalised: reference entry present
    for sig in ((1, 0), (0, 1), (1, 1), (0, 0)):
        sol = _solve_b(sig)
        vac = tuple(0 for _ in sig)
        assert sol[((vac, vac), (vac, vac))] == GaussRat(1)
