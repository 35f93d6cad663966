"""Layer operators on pairs of states: trace closure (exact), boundary
closure (big-float), gauges, the local swap map, and exchange residuals."""

from __future__ import annotations

from fractions import Fraction

import pytest

from qybe.layer import (boundary_ybe_residual, build_Sst, build_Str,
                        dump_block, gauge_sandwich, phi_apply,
                        phi_conjugation_residual, phi_local_images, rho_trace,
                        sst_entry_float, str_entry, trace_ybe_residual)
from qybe.scalars import QPoint, mp_ctx, to_mpc
from qybe.spaces import enumerate_pair_block

QPT = QPoint(Fraction(1, 2))
Q = QPT.q
Z = Fraction(3, 5)


class TestTraceEntries:
    def test_frozen_offdiagonal(self):
        # bit hop against a Fock slot at z = 3/5, q = 1/4
        v = str_entry(QPT, (1, 0), Z, ((0, 1), (1, 0)), ((1, 0), (0, 1)))
        assert v == (1 - Q ** 2) / (Z - Q ** 2) == Fraction(75, 43)

    def test_frozen_diagonal(self):
        v = str_entry(QPT, (1, 0), Z, ((1, 0), (0, 1)), ((1, 0), (0, 1)))
        assert v == Fraction(-8, 43)

    def test_reference_diagonal_is_one(self):
        # the normalisation pins the pure-Fock reference state
        for l, m in ((1, 1), (2, 1), (2, 3)):
            ref = ((0, l), (0, m))
            assert str_entry(QPT, (1, 0), Z, ref, ref) == 1

    def test_slotwise_conservation(self):
        assert str_entry(QPT, (1, 0), Z, ((1, 0), (0, 0)), ((0, 0), (0, 1))) == 0

    def test_block_levels_conserved(self):
        basis, ent = build_Str(QPT, (1, 0), Z, 1, 2)
        for (a, b), (i, j) in ent:
            assert sum(a) == 1 and sum(b) == 2
        assert set(basis) == set(enumerate_pair_block((1, 0), 1, 2))

    def test_divergent_parameter_rejected(self):
        with pytest.raises(ValueError):
            str_entry(QPT, (0,), Fraction(2), ((1,), (1,)), ((1,), (1,)))

    def test_normalisation_scalar(self):
        basis, raw = build_Str(QPT, (1, 0), Z, 1, 1, normalized=False)
        rho = rho_trace(QPT, (1, 0), Z, 1, 1)
        basis, nrm = build_Str(QPT, (1, 0), Z, 1, 1)
        assert nrm == {k: rho * v for k, v in raw.items()}


class TestBoundaryEntries:
    def test_vacuum_entry_is_one(self):
        ctx = mp_ctx(256)
        vac = ((0, 0), (0, 0))
        v = sst_entry_float(QPT, (1, 0), 1, 1, Z, vac, vac, ctx, 160)
        # accuracy is limited by the series cutoff (~ z^cutoff)
        assert abs(v - 1) < ctx.mpf(10) ** -30

    def test_level_mixing_allowed(self):
        # the boundary closure moves weight between the two tensor factors
        ctx = mp_ctx(192)
        basis, ent = build_Sst(QPT, (1, 0), 1, 1, Z, 1, 1, ctx, cutoff=120)
        mixing = [k for (k, v) in ent.items()
                  if sum(k[0][0]) != 1 and abs(v) > 1e-30]
        assert mixing


class TestGauge:
    def test_sandwich_and_inverse(self):
        basis, ent = build_Str(QPT, (1, 0), Z, 1, 2)
        dressed = gauge_sandwich(QPT, ent, +1)
        undone = gauge_sandwich(QPT, dressed, -1)
        assert {k: v for k, v in undone.items()} == \
            {k: v + 0 * v for k, v in ent.items()}

    def test_diagonal_entries_unchanged(self):
        basis, ent = build_Str(QPT, (1, 0), Z, 1, 1)
        dressed = gauge_sandwich(QPT, ent, +1)
        for (outp, inp), v in ent.items():
            if sum(outp[0]) == sum(inp[1]):
                assert dressed[(outp, inp)] == v


class TestLocalSwap:
    def test_double_vacuum_diagonal(self):
        assert phi_local_images(QPT, 0, 0, 2, 3) == [((0, 0, 2, 3), 1 + Q ** 5)]

    def test_mixed_pattern_two_terms(self):
        got = dict((img, c) for img, c in phi_local_images(QPT, 0, 1, 1, 0))
        # the q^m4 - q^(m5+1) coefficient vanishes here, so only the
        # exchange term survives
        assert got == {(1, 0, 0, 1): 1 - Q ** 2}

    def test_apply_respects_positions(self):
        vec = {((1, 2), (0, 1)): Fraction(1)}
        out = phi_apply(QPT, 0, vec)
        for (a, b) in out:
            assert a[0] + b[0] in (0, 1, 2, 3, 4)
            assert sum(a) + sum(b) == 4  # total occupation preserved

    @pytest.mark.parametrize("pos", [0])
    def test_conjugation_exact(self, pos):
        res = phi_conjugation_residual(QPT, (1, 0), pos, Z, 1, 1)
        assert res == 0

    def test_conjugation_three_slots(self):
        assert phi_conjugation_residual(QPT, (1, 0, 0), 0, Z, 1, 1) == 0
        assert phi_conjugation_residual(QPT, (0, 1, 0), 1, Z, 1, 1) == 0

    def test_bad_positions_rejected(self):
        with pytest.raises(ValueError):
            phi_conjugation_residual(QPT, (0, 1), 0, Z, 1, 1)


class TestExchange:
    def test_trace_exchange_exact(self):
        x, y = Fraction(2, 7), Fraction(3, 5)
        triple = ((1, 0), (0, 1), (0, 1))
        assert trace_ybe_residual(QPT, (1, 0), x, y, triple) == 0

    def test_boundary_exchange_small(self):
        ctx = mp_ctx(256)
        cache = {}
        triple = ((1, 0), (0, 0), (0, 1))
        res = boundary_ybe_residual(QPT, (1, 0), 1, 1, Fraction(2, 7),
                                    Fraction(3, 5), triple, ctx, cutoff=160,
                                    cache=cache)
        assert res < ctx.mpf(10) ** -30
        assert cache  # shared entry cache was populated


class TestDump:
    def test_text_format(self):
        basis, ent = build_Str(QPT, (1, 0), Z, 1, 1)
        txt = dump_block((1, 0), (1, 1), QPT, Z, "exact", ent)
        lines = txt.splitlines()
        assert lines[0] == "# signature: 1,0"
        assert lines[1] == "# sector: (1, 1)"
        assert "# backend: exact" in lines
        assert "0,1 | 1,0 <- 1,0 | 0,1 : 75/43" in lines
        assert txt.endswith("\n")

    def test_cutoff_header(self):
        txt = dump_block((1, 0), (1, 1), QPT, Z, "float", {}, cutoff=120)
        assert "# cutoff: 120" in txt
