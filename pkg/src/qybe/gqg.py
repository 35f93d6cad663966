"""Generalized quantum groups attached to a 0/1 signature, and the
intertwiner solver that produces their two-slot R matrices.

Two families act on the signature spaces of :mod:`qybe.spaces`:

* the cyclic family (generators 0..n-1, slot indices mod n), acting on
  each finite level of the space;
* the mixed-boundary family (generators 0..n), acting on the whole
  space, with the two end generators weighted by the phase constant p.

The R matrix on a tensor square is characterised (up to scalar) by the
intertwining equations between the coproduct and its flip.  The solver
assembles those equations exactly over Gaussian rationals, computes the
nullspace, asserts it is one-dimensional, and fixes the scalar by a
reference diagonal entry.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .scalars import GaussRat, QPoint, as_gauss, q_int
from .spaces import (Signature, State, check_signature, enumerate_level,
                     enumerate_pair_block, enumerate_splittings,
                     enumerate_truncated, is_valid_state)

Pair = Tuple[State, State]

__all__ = [
    "SolverError",
    "cartan_data",
    "rep_action",
    "coproduct_action",
    "verify_defining_relations",
    "nullspace",
    "solve_intertwiner_A",
    "solve_intertwiner_B",
]


class SolverError(RuntimeError):
    """Raised when the intertwining system does not determine a unique map."""


def _q_slot(qpt: QPoint, sig: Signature, k: int) -> Fraction:
    """Slot weight q_k (1-based slot index): q for Fock, -1/q for bits."""
    return qpt.q if sig[k - 1] == 0 else -1 / qpt.q


def _gens(sig: Signature, family: str) -> List[int]:
    n = len(sig)
    if family == "A":
        if n < 2:
            raise ValueError("cyclic family needs at least two slots")
        return list(range(n))
    if family == "B":
        return list(range(n + 1))
    raise ValueError(f"unknown family {family!r}")


def cartan_data(qpt: QPoint, sig, family: str):
    """Return (gens, D, r): generator labels, the symmetric exchange
    matrix D[i][j], and the denominators r[i] of the e-f commutators."""
    sig = check_signature(sig)
    n = len(sig)
    gens = _gens(sig, family)

    def support(i: int) -> set:
        if family == "A":
            # slot labels live in Z/nZ with 0 identified with n
            return {(i - 1) % n + 1, i % n + 1}
        return {k for k in (i, i + 1) if 1 <= k <= n}

    D: Dict[int, Dict[int, Fraction]] = {}
    for i in gens:
        D[i] = {}
        for j in gens:
            val = Fraction(1)
            for k in support(i) & support(j):
                val *= _q_slot(qpt, sig, k) ** (2 * (i == j) - 1)
            D[i][j] = val
    r = {}
    for i in gens:
        if family == "B" and i in (0, n):
            r[i] = qpt.p
        else:
            r[i] = as_gauss(qpt.q)
    return gens, D, r


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------


def rep_action(qpt: QPoint, sig, family: str, gen: int, kind: str, x: Fraction,
               state: State):
    """Images of one generator on a basis state: list of (state, coeff).

    ``kind`` is one of 'e', 'f', 'k', 'kinv'.  States that violate the
    slot bounds are dropped (they stand for the zero vector).
    """
    sig = check_signature(sig)
    n = len(sig)
    x = Fraction(x)
    m = state

    def shifted(src: int, dst: int | None):
        out = list(m)
        out[src - 1] -= 1
        if dst is not None:
            out[dst - 1] += 1
        return tuple(out)

    def added(dst: int):
        out = list(m)
        out[dst - 1] += 1
        return tuple(out)

    if family == "A":
        src = n if gen == 0 else gen
        dst = src % n + 1
        if kind == "e":
            coeff = as_gauss(1) * (x if gen == 0 else 1) * q_int(qpt, m[src - 1])
            st = shifted(src, dst)
        elif kind == "f":
            coeff = as_gauss(1) * (Fraction(1, 1) / x if gen == 0 else 1) * q_int(qpt, m[dst - 1])
            st = shifted(dst, src)
        elif kind in ("k", "kinv"):
            ev = _q_slot(qpt, sig, src) ** (-m[src - 1]) * _q_slot(qpt, sig, dst) ** (m[dst - 1])
            if kind == "kinv":
                ev = 1 / ev
            return [(m, as_gauss(ev))]
        else:
            raise ValueError(f"unknown kind {kind!r}")
    else:
        if gen == 0:
            if kind == "e":
                coeff, st = as_gauss(x), added(1)
            elif kind == "f":
                coeff, st = as_gauss(q_int(qpt, m[0])) / x, shifted(1, None)
            else:
                ev = qpt.p_pow(-1) * _q_slot(qpt, sig, 1) ** m[0]
                return [(m, ev if kind == "k" else as_gauss(1) / ev)]
        elif gen == n:
            if kind == "e":
                coeff, st = as_gauss(q_int(qpt, m[n - 1])), shifted(n, None)
            elif kind == "f":
                coeff, st = as_gauss(1), added(n)
            else:
                ev = qpt.p_pow(1) * _q_slot(qpt, sig, n) ** (-m[n - 1])
                return [(m, ev if kind == "k" else as_gauss(1) / ev)]
        else:
            src, dst = gen, gen + 1
            if kind == "e":
                coeff, st = as_gauss(q_int(qpt, m[src - 1])), shifted(src, dst)
            elif kind == "f":
                coeff, st = as_gauss(q_int(qpt, m[dst - 1])), shifted(dst, src)
            else:
                ev = _q_slot(qpt, sig, src) ** (-m[src - 1]) * _q_slot(qpt, sig, dst) ** (m[dst - 1])
                return [(m, as_gauss(ev) if kind == "k" else as_gauss(1 / ev))]
    if not coeff or not is_valid_state(sig, st):
        return []
    return [(st, coeff)]


def _k_eigenvalue(qpt, sig, family, gen, x, state, inverse=False) -> GaussRat:
    [(st, ev)] = rep_action(qpt, sig, family, gen, "kinv" if inverse else "k", x, state)
    return ev


def coproduct_action(qpt: QPoint, sig, family: str, gen: int, kind: str,
                     x: Fraction, y: Fraction, vec, primed: bool = False):
    """Apply a coproduct image (pi_x (x) pi_y) Delta(g) to a sparse vector.

    Delta e = 1 (x) e + e (x) k,  Delta f = f (x) 1 + k^-1 (x) f; the
    primed variant is the flip-conjugated coproduct.
    """
    out: Dict[Pair, GaussRat] = {}

    def add(key, val):
        if val:
            out[key] = out.get(key, as_gauss(0)) + val

    for (u, v), coeff in vec.items():
        if kind == "e":
            if not primed:
                for st, c in rep_action(qpt, sig, family, gen, "e", y, v):
                    add((u, st), coeff * c)
                kv = _k_eigenvalue(qpt, sig, family, gen, y, v)
                for st, c in rep_action(qpt, sig, family, gen, "e", x, u):
                    add((st, v), coeff * c * kv)
            else:
                for st, c in rep_action(qpt, sig, family, gen, "e", x, u):
                    add((st, v), coeff * c)
                ku = _k_eigenvalue(qpt, sig, family, gen, x, u)
                for st, c in rep_action(qpt, sig, family, gen, "e", y, v):
                    add((u, st), coeff * c * ku)
        elif kind == "f":
            if not primed:
                for st, c in rep_action(qpt, sig, family, gen, "f", x, u):
                    add((st, v), coeff * c)
                ku = _k_eigenvalue(qpt, sig, family, gen, x, u, inverse=True)
                for st, c in rep_action(qpt, sig, family, gen, "f", y, v):
                    add((u, st), coeff * c * ku)
            else:
                for st, c in rep_action(qpt, sig, family, gen, "f", y, v):
                    add((u, st), coeff * c)
                kv = _k_eigenvalue(qpt, sig, family, gen, y, v, inverse=True)
                for st, c in rep_action(qpt, sig, family, gen, "f", x, u):
                    add((st, v), coeff * c * kv)
        elif kind in ("k", "kinv"):
            ev = _k_eigenvalue(qpt, sig, family, gen, x, u, inverse=(kind == "kinv")) \
                * _k_eigenvalue(qpt, sig, family, gen, y, v, inverse=(kind == "kinv"))
            add((u, v), coeff * ev)
        else:
            raise ValueError(f"unknown kind {kind!r}")
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# defining relations
# ---------------------------------------------------------------------------


def verify_defining_relations(qpt: QPoint, sig, family: str, x: Fraction,
                              max_total: int = 3):
    """Exact check of the algebra relations on all states up to a level.

    Returns the worst residual (a GaussRat that should be zero): the
    k-e / k-f exchange relations and the e-f commutators against the
    Cartan data.
    """
    sig = check_signature(sig)
    gens, D, r = cartan_data(qpt, sig, family)
    states = enumerate_truncated(sig, max_total)
    worst = as_gauss(0)

    def vmax(a, b):
        return a if (a.re * a.re + a.im * a.im) >= (b.re * b.re + b.im * b.im) else b

    for i in gens:
        for j in gens:
            for m in states:
                for kind, dfac in (("e", D[i][j]), ("f", 1 / D[i][j])):
                    # k_i g_j |m> - D^{+-1}_{ij} g_j k_i |m>
                    lhs: Dict[State, GaussRat] = {}
                    for st, c in rep_action(qpt, sig, family, j, kind, x, m):
                        ev = _k_eigenvalue(qpt, sig, family, i, x, st)
                        lhs[st] = lhs.get(st, as_gauss(0)) + c * ev
                    ev0 = _k_eigenvalue(qpt, sig, family, i, x, m)
                    for st, c in rep_action(qpt, sig, family, j, kind, x, m):
                        lhs[st] = lhs.get(st, as_gauss(0)) - as_gauss(dfac) * ev0 * c
                    for vres in lhs.values():
                        worst = vmax(worst, vres)
                # [e_i, f_j] |m> - delta_ij (k_i - k_i^-1)/(r_i - r_i^-1)|m>
                acc: Dict[State, GaussRat] = {}
                for st, c in rep_action(qpt, sig, family, j, "f", x, m):
                    for st2, c2 in rep_action(qpt, sig, family, i, "e", x, st):
                        acc[st2] = acc.get(st2, as_gauss(0)) + c * c2
                for st, c in rep_action(qpt, sig, family, i, "e", x, m):
                    for st2, c2 in rep_action(qpt, sig, family, j, "f", x, st):
                        acc[st2] = acc.get(st2, as_gauss(0)) - c * c2
                if i == j:
                    ri = r[i]
                    ev = _k_eigenvalue(qpt, sig, family, i, x, m) \
                        - _k_eigenvalue(qpt, sig, family, i, x, m, inverse=True)
                    acc[m] = acc.get(m, as_gauss(0)) - ev / (ri - as_gauss(1) / ri)
                for vres in acc.values():
                    worst = vmax(worst, vres)
    return worst


# ---------------------------------------------------------------------------
# exact nullspace of a sparse system
# ---------------------------------------------------------------------------


def nullspace(rows: Sequence[Dict[int, GaussRat]], ncols: int):
    """Nullspace basis of a sparse homogeneous system over Q(i).

    Straightforward Gauss elimination with dict rows; returns a list of
    solution vectors (dicts over column indices)."""
    pivots: Dict[int, Dict[int, GaussRat]] = {}
    for row in rows:
        row = dict(row)
        while row:
            col = min(row)
            if col in pivots:
                fac = row[col]
                prow = pivots[col]
                for c, v in prow.items():
                    nv = row.get(c, as_gauss(0)) - fac * v
                    if nv:
                        row[c] = nv
                    elif c in row:
                        del row[c]
            else:
                inv = as_gauss(1) / row[col]
                pivots[col] = {c: inv * v for c, v in row.items()}
                break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    # back-substitute: pivot rows may still reference other pivot columns
    order = sorted(pivots, reverse=True)
    for fc in free:
        sol = {fc: as_gauss(1)}
        for pc in order:
            val = as_gauss(0)
            for c, v in pivots[pc].items():
                if c != pc and c in sol:
                    val = val - v * sol[c]
            if val:
                sol[pc] = val
        basis.append(sol)
    return basis


# ---------------------------------------------------------------------------
# intertwiner solvers
# ---------------------------------------------------------------------------


def _intertwiner_rows(qpt, sig, family, x, y, unknowns, in_pairs, in_trunc):
    """Equation rows of Delta'(g) R - R Delta(g) = 0 over the unknowns.

    ``in_trunc`` is a predicate saying whether a state is kept; any
    equation touching a dropped state is skipped entirely.
    """
    gens, _, _ = cartan_data(qpt, sig, family)
    index = {key: t for t, key in enumerate(unknowns)}
    rows = []
    for g in gens:
        for kind in ("e", "f"):
            for inp in in_pairs:
                # images of the in-pair under Delta(g)
                rhs = coproduct_action(qpt, sig, family, g, kind, x, y,
                                       {inp: as_gauss(1)})
                if any(not (in_trunc(u) and in_trunc(v)) for (u, v) in rhs):
                    continue
                # collect target out-pairs: apply Delta'(g) to every
                # out-pair reachable from inp by slotwise conservation
                s = tuple(a + b for a, b in zip(*inp))
                by_target: Dict[Pair, Dict[int, GaussRat]] = {}
                poisoned = set()
                for outp in enumerate_splittings(sig, s):
                    img = coproduct_action(qpt, sig, family, g, kind, x, y,
                                           {outp: as_gauss(1)}, primed=True)
                    if (outp, inp) not in index:
                        # truncated-away unknown: every row it would feed
                        # is incomplete and must be dropped
                        poisoned.update(img)
                        continue
                    col = index[(outp, inp)]
                    for tgt, c in img.items():
                        if not (in_trunc(tgt[0]) and in_trunc(tgt[1])):
                            poisoned.add(tgt)
                            continue
                        by_target.setdefault(tgt, {})
                        by_target[tgt][col] = by_target[tgt].get(col, as_gauss(0)) + c
                for mid, c in rhs.items():
                    sm = tuple(a + b for a, b in zip(*mid))
                    for outp in enumerate_splittings(sig, sm):
                        key = (outp, mid)
                        if key not in index:
                            poisoned.add(outp)
                            continue
                        col = index[key]
                        by_target.setdefault(outp, {})
                        by_target[outp][col] = by_target[outp].get(col, as_gauss(0)) - c
                for tgt, row in by_target.items():
                    if tgt in poisoned:
                        continue
                    row = {c: v for c, v in row.items() if v}
                    if row:
                        rows.append(row)
    return rows


def _component_of(rows, ncols: int, seed: int):
    """Columns connected to ``seed`` through shared equation rows."""
    parent = list(range(ncols))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for row in rows:
        cols = list(row)
        for c in cols[1:]:
            ra, rb = find(cols[0]), find(c)
            if ra != rb:
                parent[ra] = rb
    root = find(seed)
    return {c for c in range(ncols) if find(c) == root}


def _solve_component(rows, unknowns, seed: int, interior=None):
    """Solve the subsystem connected to the seed column and assert the
    solution space restricted to the interior is one-dimensional.

    ``interior`` is the set of trustworthy columns: on a truncated
    system the outermost shell is underdetermined (its equations were
    poisoned away) and may carry extra spurious freedom, so only the
    interior projection is required to be unique.  Returns the unique
    interior solution as a dict over columns."""
    comp = _component_of(rows, len(unknowns), seed)
    if interior is None:
        interior = set(range(len(unknowns)))
    kept_rows = [row for row in rows if next(iter(row)) in comp]
    basis = nullspace(kept_rows, len(unknowns))
    projections = []
    for b in basis:
        if not set(b) & comp:
            continue
        pb = {c: v for c, v in b.items() if c in interior}
        if pb:
            projections.append(pb)
    # rank of the interior projections must be exactly 1
    rank_basis = []
    for pb in projections:
        red = dict(pb)
        for piv in rank_basis:
            pc = min(piv)
            if pc in red:
                fac = red[pc]
                for c, v in piv.items():
                    nv = red.get(c, as_gauss(0)) - fac * v
                    if nv:
                        red[c] = nv
                    elif c in red:
                        del red[c]
        if red:
            pc = min(red)
            inv = as_gauss(1) / red[pc]
            rank_basis.append({c: inv * v for c, v in red.items()})
    if len(rank_basis) != 1:
        raise SolverError(
            f"interior solution space has dimension {len(rank_basis)} (expected 1)")
    sol = next((pb for pb in projections if pb.get(seed)), None)
    if sol is None:
        raise SolverError("reference entry vanishes; cannot normalise")
    return sol


def solve_intertwiner_A(qpt: QPoint, sig, l: int, m: int, x: Fraction, y: Fraction):
    """R matrix of the cyclic family on the (l, m) level block, exact.

    Output: dict {(out_pair, in_pair): GaussRat}, normalised to fix the
    reference vector (the all-trailing-ones vector for pure-bit
    signatures, else the one loading everything on the last Fock slot).
    """
    sig = check_signature(sig)
    x, y = Fraction(x), Fraction(y)
    n = len(sig)
    in_pairs = enumerate_pair_block(sig, l, m)
    if not in_pairs:  # a level exceeds the signature's capacity
        return {}
    unknowns = []
    for inp in in_pairs:
        s = tuple(a + b for a, b in zip(*inp))
        for outp in enumerate_splittings(sig, s):
            if sum(outp[0]) == l:
                unknowns.append((outp, inp))
    rows = _intertwiner_rows(qpt, sig, "A", x, y, unknowns, in_pairs,
                             lambda st: True)
    if all(sig):
        ref = tuple(1 if r >= n - l else 0 for r in range(n)), \
            tuple(1 if r >= n - m else 0 for r in range(n))
    else:
        slot = max(r for r, e in enumerate(sig) if e == 0)
        ref = tuple(l if r == slot else 0 for r in range(n)), \
            tuple(m if r == slot else 0 for r in range(n))
    index = {key: t for t, key in enumerate(unknowns)}
    sol = _solve_component(rows, unknowns, index[(ref, ref)])
    scale = as_gauss(1) / sol[index[(ref, ref)]]
    return {unknowns[c]: scale * v for c, v in sol.items() if v}


def solve_intertwiner_B(qpt: QPoint, sig, max_total: int, x: Fraction, y: Fraction,
                        gauged: bool = True):
    """R matrix of the mixed-boundary family on a truncated tensor square.

    Unknowns are slotwise-conserving entries whose four states all have
    level <= max_total; equations crossing the truncation boundary are
    discarded.  With ``gauged`` the charge gauge is applied and the
    vacuum-to-vacuum entry normalised to 1.
    """
    sig = check_signature(sig)
    x, y = Fraction(x), Fraction(y)
    states = set(enumerate_truncated(sig, max_total))
    in_pairs = [(u, v) for u in states for v in states]
    unknowns = []
    for inp in in_pairs:
        s = tuple(a + b for a, b in zip(*inp))
        for outp in enumerate_splittings(sig, s):
            if outp[0] in states and outp[1] in states:
                unknowns.append((outp, inp))
    rows = _intertwiner_rows(qpt, sig, "B", x, y, unknowns, in_pairs,
                             lambda st: st in states)
    index = {key: t for t, key in enumerate(unknowns)}
    vac0 = tuple(0 for _ in sig)
    interior = {
        t for t, ((a, b), (i, j)) in enumerate(unknowns)
        if max(sum(a), sum(b), sum(i), sum(j)) < max_total
    }
    sol = _solve_component(rows, unknowns, index[((vac0, vac0), (vac0, vac0))],
                           interior)
    entries = {unknowns[c]: v for c, v in sol.items() if v}
    if gauged:
        out = {}
        for ((a, b), (i, j)), v in entries.items():
            out[((a, b), (i, j))] = qpt.p_pow(sum(a) - sum(j)) * v
        entries = out
    vac = tuple(0 for _ in sig)
    ref = ((vac, vac), (vac, vac))
    if ref not in entries or not entries[ref]:
        raise SolverError("vacuum entry vanishes; cannot normalise")
    scale = as_gauss(1) / entries[ref]
    return {key: scale * v for key, v in entries.items()}
