"""Command-line entry point: verification suites and one-shot computations.

Two subcommands:

* ``verify``  runs a named suite and emits a pass/fail report (optionally
  as JSON with lowercase snake_case keys);
* ``compute`` evaluates a single object (a three-slot element, or a
  two-slot operator block in the plain-text dump format).

Exit codes: 0 all cases pass, 1 at least one case fails, 2 usage error,
3 solver failure (non-unique intertwining system).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from itertools import product

from .boundary import verify_boundary_eigenrelation
from .gqg import (SolverError, solve_intertwiner_A, solve_intertwiner_B,
                  verify_defining_relations)
from .layer import (boundary_ybe_residual, build_Sst, build_Str, dump_block,
                    phi_conjugation_residual, sst_entry_float,
                    trace_ybe_residual)
from .scalars import GaussRat, QPoint, mp_ctx, to_mpc
from .spaces import check_signature, enumerate_level, enumerate_truncated
from .spectral import (annihilation_residual, bit_raise_residuals,
                       bit_singular_vector, mixed_singular_vector,
                       mixed_spectral_residual, mixed_transition_residuals,
                       mixed_two_slot_closed_form, one_fock_lower_residuals,
                       one_fock_singular_vector, three_slot_closed_form,
                       three_slot_expanded_column, trace_spectral_residual,
                       two_fock_singular_vector,
                       two_fock_transition_residuals, two_slot_closed_form)
from .threed import (LOCAL_IDENTITIES, tetrahedron_residual,
                     verify_local_identity)

SUITES = ("tetrahedron", "boundary", "ybe", "intertwine", "theorem-main",
          "spectral", "identities", "relations", "phi-equivalence", "examples")
KINDS = ("rmatrix-trace", "rmatrix-boundary", "rmatrix-solver", "threed-element")


def _fmt_residual(r) -> str:
    if r is None:
        return "0"
    if isinstance(r, GaussRat):
        return "0" if not r else repr(r)
    if isinstance(r, (int, Fraction)):
        return "0" if r == 0 else str(Fraction(r))
    return repr(r) if r != 0 else "0"


class Runner:
    def __init__(self, tol: float):
        self.cases = []
        self.tol = tol

    def exact(self, name: str, residual, extra=None):
        self._record(name, residual, not residual, extra)

    def close(self, name: str, residual, extra=None):
        self._record(name, residual, abs(residual) < self.tol, extra)

    def _record(self, name, residual, ok, extra):
        case = {
            "name": name,
            "status": "pass" if ok else "fail",
            "residual": _fmt_residual(residual),
            "time_ms": int((time.time() - self._t0) * 1000),
        }
        if extra:
            case.update(extra)
        self.cases.append(case)
        self._t0 = time.time()

    def run(self, fn):
        self._t0 = time.time()
        fn(self)
        return self.cases


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------


def _sq(v) -> Fraction:
    """Squared magnitude of an exact scalar (Fraction or Gaussian)."""
    if isinstance(v, GaussRat):
        return v.re * v.re + v.im * v.im
    f = Fraction(v)
    return f * f


def _worst_of(values, current):
    for v in values:
        if _sq(v) > _sq(current):
            current = v
    return current


def suite_tetrahedron(a, qpt, run: Runner):
    total = a.truncation if a.truncation is not None else 2
    for kind in ("RRRR", "RLLL"):
        worst = Fraction(0)
        if kind == "RRRR":
            states = enumerate_truncated((0,) * 6, total)
        else:
            bits = list(product((0, 1), repeat=3))
            focks = enumerate_truncated((0,) * 3, total)
            states = [b + f for b in bits for f in focks]
        for st in states:
            worst = _worst_of(tetrahedron_residual(qpt, kind, st).values(),
                              worst)
        run.exact(f"{kind.lower()}_total_le_{total}", worst,
                  {"states": len(states)})
    rng = random.Random(a.seed)
    worst = Fraction(0)
    for _ in range(10):
        st = tuple(rng.randrange(0, 4) for _ in range(6))
        worst = _worst_of(tetrahedron_residual(qpt, "RRRR", st).values(),
                          worst)
    run.exact("rrrr_random_states", worst)


def identity_index_ranges(name: str, eps, total: int):
    """Admissible index ranges for one local identity: two-state slots
    contribute {0, 1} anchors, Fock slots the full range."""
    bit = range(2)
    fock = range(total + 1)
    if name == "sseq":
        e1 = bit if eps[0] else fock
        e2 = bit if eps[1] else fock
        return [e1] * 4 + [e2] * 4 + [fock] * 3
    if name in ("ior", "ior2"):
        e1 = bit if eps[0] else fock
        # layout (a, b, c, i, j, k): c and k are always auxiliary Fock
        return [e1, e1, fock, e1, e1, fock]
    return [fock] * 6


def suite_identities(a, qpt, run: Runner):
    total = a.truncation if a.truncation is not None else 2
    for name, (_fn, n_eps) in sorted(LOCAL_IDENTITIES.items()):
        for eps in product((0, 1), repeat=n_eps):
            worst = Fraction(0)
            count = 0
            for idx in product(*identity_index_ranges(name, eps, total)):
                r = verify_local_identity(qpt, name, idx, eps)
                count += 1
                worst = _worst_of((r,), worst)
            label = name + ("" if not eps else "_" + "".join(map(str, eps)))
            run.exact(label, worst, {"indices": count})


def suite_boundary(a, qpt, run: Runner):
    cutoff = a.truncation if a.truncation is not None else 40
    for s in (1, 2):
        for (x, y), tag in (((Fraction(1), Fraction(1)), "unit"),
                            ((a.x, a.y), "generic")):
            rep = verify_boundary_eigenrelation(qpt, s, x, y, cutoff=cutoff,
                                                precision=a.precision,
                                                component_max=6)
            run.close(f"fixed_point_s{s}_{tag}_ket", rep["ket_residual"])
            run.close(f"fixed_point_s{s}_{tag}_bra", rep["bra_residual"])


def suite_ybe(a, qpt, run: Runner):
    sig = a.eps
    states = enumerate_truncated(sig, 1)
    worst = Fraction(0)
    for triple in product(states, repeat=3):
        worst = max(worst, abs(trace_ybe_residual(qpt, sig, a.x, a.y, triple)))
    run.exact("trace_ybe", worst, {"triples": len(states) ** 3})
    ctx = mp_ctx(a.precision)
    cutoff = a.truncation if a.truncation is not None else 160
    cache = {}
    worst = ctx.mpf(0)
    small = enumerate_truncated(sig, 1)
    for triple in product(small, repeat=3):
        worst = max(worst, boundary_ybe_residual(qpt, sig, 1, 1, a.x, a.y,
                                                 triple, ctx, cutoff, cache))
    run.close("boundary_ybe_s1_t1", worst)


def suite_relations(a, qpt, run: Runner):
    total = a.truncation if a.truncation is not None else 2
    for family in ("A", "B") if a.family is None else (a.family,):
        r = verify_defining_relations(qpt, a.eps, family, a.x, max_total=total)
        run.exact(f"defining_relations_{family.lower()}", r)


def suite_intertwine(a, qpt, run: Runner):
    l, m = a.sector
    if a.family in (None, "A"):
        sol = solve_intertwiner_A(qpt, a.eps, l, m, a.x, a.y)
        run.exact("solver_a_unique", None,
                  {"nullity": 1, "entries": len(sol)})
    if a.family in (None, "B"):
        trunc = a.truncation if a.truncation is not None else 2
        sol = solve_intertwiner_B(qpt, a.eps, trunc, a.x, a.y)
        run.exact("solver_b_unique", None,
                  {"nullity": 1, "entries": len(sol)})


def suite_theorem_main(a, qpt, run: Runner):
    l, m = a.sector
    z = a.x / a.y
    sol = solve_intertwiner_A(qpt, a.eps, l, m, a.x, a.y)
    _, built = build_Str(qpt, a.eps, z, l, m)
    worst = GaussRat(0)
    for key in set(sol) | set(built):
        d = GaussRat(0) + sol.get(key, 0) - built.get(key, 0)
        if (d.re * d.re + d.im * d.im
                > worst.re * worst.re + worst.im * worst.im):
            worst = d
    run.exact("trace_equals_solver_a", worst, {"entries": len(built)})
    trunc = a.truncation if a.truncation is not None else 2
    solb = solve_intertwiner_B(qpt, a.eps, trunc, z, Fraction(1))
    ctx = mp_ctx(a.precision)
    worst = ctx.mpf(0)
    count = 0
    # residual decays roughly like z**cutoff; size the cutoff to the tolerance
    import math
    cut = max(160, int(math.log(a.tol) / math.log(float(abs(z)))) + 40)
    for (outp, inp), v in solb.items():
        ser = sst_entry_float(qpt, a.eps, 1, 1, z, outp, inp, ctx, cutoff=cut)
        worst = max(worst, abs(ser - to_mpc(v, ctx)))
        count += 1
    run.close("boundary_equals_solver_b", worst, {"entries": count})


def suite_spectral(a, qpt, run: Runner):
    x, y = a.x, a.y
    z = x / y
    lm = a.sector if a.sector else (2, 2)
    lmax, mmax = lm
    worst = GaussRat(0)

    def acc(r):
        nonlocal worst
        if r is None:
            return
        r = r if isinstance(r, GaussRat) else GaussRat(Fraction(r))
        if (r.re * r.re + r.im * r.im
                > worst.re * worst.re + worst.im * worst.im):
            worst = r

    for n in (2, 3):
        for l in range(0, min(n, lmax) + 1):
            for m in range(0, min(n, mmax) + 1):
                for t in range(max(0, l + m - n), min(l, m) + 1):
                    acc(annihilation_residual(
                        qpt, (1,) * n, "A",
                        bit_singular_vector(qpt, n, l, m, t), x, y))
                    if t < min(l, m):
                        for r in bit_raise_residuals(qpt, n, l, m, t, x, y):
                            acc(r)
                    acc(trace_spectral_residual(qpt, (1,) * n, l, m, t, z))
    run.exact("all_bit_slots", worst)
    worst = GaussRat(0)
    for n in (2, 3):
        sig = (1,) * (n - 1) + (0,)
        for l in range(0, lmax + 1):
            for m in range(0, mmax + 1):
                for s in range(0, min(n - 1, l, m) + 1):
                    acc(annihilation_residual(
                        qpt, sig, "A",
                        one_fock_singular_vector(qpt, n, l, m, s), x, y))
                    if s >= 1:
                        for r in one_fock_lower_residuals(qpt, n, l, m, s, x, y):
                            acc(r)
                    acc(trace_spectral_residual(qpt, sig, l, m, s, z))
    run.exact("one_fock_slot", worst)
    worst = GaussRat(0)
    for sig in ((0, 0), (1, 0, 0)):
        for l in range(0, lmax + 1):
            for m in range(0, mmax + 1):
                for s in range(0, min(l, m) + 1):
                    acc(annihilation_residual(
                        qpt, sig, "A",
                        two_fock_singular_vector(qpt, len(sig), l, m, s), x, y))
                    for r in two_fock_transition_residuals(qpt, sig, l, m, s, x, y):
                        acc(r)
                    acc(trace_spectral_residual(qpt, sig, l, m, s, z))
    run.exact("two_fock_slots", worst)
    worst = GaussRat(0)
    for l in range(0, min(lmax, 2) + 1):
        acc(annihilation_residual(qpt, (1, 0), "B",
                                  mixed_singular_vector(qpt, 2, l), x, y))
        for r in mixed_transition_residuals(qpt, (1, 0), l, x, y):
            acc(r)
        acc(mixed_spectral_residual(qpt, (1, 0), l, z))
    run.exact("mixed_family", worst)


def suite_phi(a, qpt, run: Runner):
    sig = a.eps if a.eps != (1, 0) else (1, 0, 0)
    l, m = a.sector
    pos = next((r for r in range(len(sig) - 1)
                if sig[r] == 1 and sig[r + 1] == 0), None)
    if pos is None:
        raise UsageError("signature has no adjacent (1, 0) slot pair")
    z = a.x / a.y
    r = phi_conjugation_residual(qpt, sig, pos, z, l, m)
    run.exact(f"swap_conjugation_pos{pos}", r)


def suite_examples(a, qpt, run: Runner):
    z = a.x / a.y

    def cmp_entries(got, want):
        worst = GaussRat(0)
        for key in set(got) | set(want):
            d = GaussRat(0) + got.get(key, 0) - want.get(key, 0)
            if (d.re * d.re + d.im * d.im
                    > worst.re * worst.re + worst.im * worst.im):
                worst = d
        return worst

    for (l, m) in ((1, 1), (2, 2), (2, 3)):
        cf = two_slot_closed_form(qpt, z, l, m)
        _, built = build_Str(qpt, (1, 0), z, l, m)
        run.exact(f"A10_sector_{l}{m}", cmp_entries(built, cf))
    for (l, m) in ((2, 2),):
        cf = three_slot_closed_form(qpt, z, l, m)
        _, built = build_Str(qpt, (1, 1, 0), z, l, m)
        run.exact(f"A110_sector_{l}{m}", cmp_entries(built, cf))
        inp, col = three_slot_expanded_column(qpt, z, l, m)
        got = {o: v for (o, i), v in built.items() if i == inp}
        run.exact(f"A110_expanded_{l}{m}", cmp_entries(got, col))
    trunc = a.truncation if a.truncation is not None else 3
    sol = solve_intertwiner_B(qpt, (1, 0), trunc, z, Fraction(1))
    cf = mixed_two_slot_closed_form(qpt, z)
    # the truncated solver only resolves entries away from the level cap;
    # compare on those (truncation 4 covers the whole table)
    shared = [k for k in cf if k in sol]
    worst = GaussRat(0)
    for key in shared:
        d = GaussRat(0) + sol[key] - cf[key]
        if (d.re * d.re + d.im * d.im
                > worst.re * worst.re + worst.im * worst.im):
            worst = d
    run.exact("B10_closed_form", worst,
              {"entries": len(cf), "compared": len(shared)})


SUITE_FNS = {
    "tetrahedron": suite_tetrahedron,
    "identities": suite_identities,
    "boundary": suite_boundary,
    "ybe": suite_ybe,
    "relations": suite_relations,
    "intertwine": suite_intertwine,
    "theorem-main": suite_theorem_main,
    "spectral": suite_spectral,
    "phi-equivalence": suite_phi,
    "examples": suite_examples,
}


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# one-shot computations
# ---------------------------------------------------------------------------


def cmd_compute(a, qpt) -> str:
    from .threed import l_element, r_element
    if a.kind == "threed-element":
        if a.element is None or len(a.element) != 6:
            raise UsageError("--element needs six comma-separated indices")
        fn = l_element if (a.family == "B") else r_element
        return str(fn(qpt, *a.element))
    l, m = a.sector
    if a.kind == "rmatrix-trace":
        z = a.x / a.y
        _, entries = build_Str(qpt, a.eps, z, l, m)
        return dump_block(a.eps, (l, m), qpt, z, "exact-trace", entries)
    if a.kind == "rmatrix-boundary":
        z = a.x / a.y
        ctx = mp_ctx(a.precision)
        cutoff = a.truncation if a.truncation is not None else 120
        _, entries = build_Sst(qpt, a.eps, a.st[0], a.st[1], z, l, m, ctx, cutoff)
        return dump_block(a.eps, (l, m), qpt, z,
                          f"float-boundary-{a.st[0]}{a.st[1]}", entries, cutoff)
    if a.kind == "rmatrix-solver":
        if a.family == "B":
            trunc = a.truncation if a.truncation is not None else 2
            entries = solve_intertwiner_B(qpt, a.eps, trunc, a.x, a.y)
            return dump_block(a.eps, ("truncated", trunc), qpt, a.x / a.y,
                              "exact-solver-b", entries)
        entries = solve_intertwiner_A(qpt, a.eps, l, m, a.x, a.y)
        return dump_block(a.eps, (l, m), qpt, a.x / a.y, "exact-solver-a",
                          entries)
    raise UsageError(f"unknown computation kind {a.kind!r}")


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _bitstring(text: str):
    if not text or any(c not in "01" for c in text):
        raise argparse.ArgumentTypeError(f"not a 0/1 signature: {text!r}")
    return tuple(int(c) for c in text)


def _int_list(text: str):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qybe",
        description="verify and compute layered Yang-Baxter solutions")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--family", choices=("A", "B"), default=None)
        sp.add_argument("--eps", type=_bitstring, default=(1, 0),
                        help="signature bitstring, e.g. 110")
        sp.add_argument("--qroot", type=_fraction, default=Fraction(1, 2))
        sp.add_argument("--z", type=_fraction, default=None)
        sp.add_argument("--x", type=_fraction, default=Fraction(2, 7))
        sp.add_argument("--y", type=_fraction, default=Fraction(3, 5))
        sp.add_argument("--sector", type=_int_list, default=(1, 1))
        sp.add_argument("--truncation", type=int, default=None)
        sp.add_argument("--precision", type=int, default=256)
        sp.add_argument("--tol", type=float, default=1e-30)
        sp.add_argument("--json", default=None, help="write JSON report here")
        sp.add_argument("--dump", default=None, help="write dump output here")
        sp.add_argument("--seed", type=int, default=0)

    sv = sub.add_parser("verify", help="run a verification suite")
    sv.add_argument("--suite", choices=SUITES, required=True)
    common(sv)

    sc = sub.add_parser("compute", help="evaluate a single object")
    sc.add_argument("--kind", choices=KINDS, required=True)
    sc.add_argument("--element", type=_int_list, default=None,
                    help="six indices a,b,c,i,j,k")
    sc.add_argument("--st", type=_int_list, default=(1, 1),
                    help="boundary weight pattern pair s,t")
    common(sc)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    if a.z is not None:
        # a plain spectral parameter stands for (x, y) = (z, 1)
        a.x, a.y = a.z, Fraction(1)
    try:
        qpt = QPoint(a.qroot)
    except ValueError as exc:
        parser.exit(2, f"error: {exc}\n")
    try:
        if a.command == "compute":
            out = cmd_compute(a, qpt)
            if a.dump:
                with open(a.dump, "w") as fh:
                    fh.write(out if out.endswith("\n") else out + "\n")
            else:
                sys.stdout.write(out if out.endswith("\n") else out + "\n")
            return 0
        runner = Runner(a.tol)
        cases = runner.run(lambda r: SUITE_FNS[a.suite](a, qpt, r))
        status = "pass" if all(c["status"] == "pass" for c in cases) else "fail"
        report = {
            "suite": a.suite,
            "config": {
                "family": a.family,
                "signature": "".join(str(e) for e in a.eps),
                "q_root": str(a.qroot),
                "x": str(a.x),
                "y": str(a.y),
                "sector": list(a.sector),
                "truncation": a.truncation,
                "precision_bits": a.precision,
                "tolerance": a.tol,
                "seed": a.seed,
            },
            "cases": cases,
            "status": status,
        }
        for c in cases:
            print(f"[{c['status']:>4}] {c['name']}: residual {c['residual']}")
        print(f"suite {a.suite}: {status}")
        if a.json:
            with open(a.json, "w") as fh:
                json.dump(report, fh, indent=2)
                fh.write("\n")
        return 0 if status == "pass" else 1
    except UsageError as exc:
        parser.exit(2, f"error: {exc}\n")
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
