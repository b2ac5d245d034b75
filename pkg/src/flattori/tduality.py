"""Mirror construction by dualizing a Lagrangian factor.

Given a splitting ``T = A x B`` into omega-isotropic halves, the doubled
lattice admits the obvious pairing-preserving isomorphism that exchanges
the A-windings with the A-momenta.  Transporting calJ to the calI slot and
calI to the calJ slot along this map and then solving the block formulas
backwards yields the mirror data ``(I', G', B')``.

Every recovered matrix is re-substituted into the forward block formulas;
any mismatch raises :class:`RecoveryError` naming the offending block, so a
wrong inversion branch cannot survive silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import gcd

from .equivalence import Certificate, LatticeMap, verify_map
from .errors import BudgetExceededError, RecoveryError, ValidationError
from .exactlinear import QZERO, RatMatrix
from .torus import TorusData, doubled, omega, require_valid, validate


@dataclass(frozen=True)
class LagrangianSplitting:
    """An integral splitting of the winding lattice into isotropic halves.

    ``change_of_basis`` has the A vectors as its first d columns and the B
    vectors as its last d columns, expressed in the torus basis.
    """

    a_basis: tuple
    b_basis: tuple
    change_of_basis: RatMatrix

    @staticmethod
    def from_vectors(a_vectors, b_vectors) -> "LagrangianSplitting":
        a = tuple(tuple(int(x) for x in v) for v in a_vectors)
        b = tuple(tuple(int(x) for x in v) for v in b_vectors)
        cols = list(a) + list(b)
        mat = RatMatrix([[col[i] for col in cols] for i in range(len(cols[0]))])
        return LagrangianSplitting(a, b, mat)


def splitting_report(t: TorusData, s: LagrangianSplitting):
    """Validity checks of a splitting for a given torus."""
    n = t.rank
    checks = []
    shape_ok = (len(s.a_basis) == t.d and len(s.b_basis) == t.d
                and all(len(v) == n for v in s.a_basis + s.b_basis))
    checks.append(("shape", shape_ok))
    if not shape_ok:
        return checks
    w = omega(t)
    det = s.change_of_basis.det()
    checks.append(("unimodular", abs(det) == 1))

    def isotropic(vectors):
        return all(
            sum(vectors[i][a] * w.entries[a][b] * vectors[j][b]
                for a in range(n) for b in range(n)) == 0
            for i in range(len(vectors)) for j in range(i + 1, len(vectors))
        )

    checks.append(("A_isotropic", isotropic(s.a_basis)))
    checks.append(("B_isotropic", isotropic(s.b_basis)))
    return checks


def require_splitting(t: TorusData, s: LagrangianSplitting):
    bad = [name for name, ok in splitting_report(t, s) if not ok]
    if bad:
        raise ValidationError(f"invalid Lagrangian splitting: {', '.join(bad)}")


# ---------------------------------------------------------------------------
# splitting search
# ---------------------------------------------------------------------------


def _candidate_vectors(n, bound):
    """All nonzero integer vectors of max-norm <= bound, in canonical order.

    Order: height, then support size, then position of the first nonzero,
    then digitwise rank with 0 < 1 < -1 < 2 < -2 < ...; this makes the
    standard basis vectors e_1, e_2, ... come first.
    """
    rank = {0: 0}
    for a in range(1, bound + 1):
        rank[a] = 2 * a - 1
        rank[-a] = 2 * a
    vecs = [v for v in product(range(-bound, bound + 1), repeat=n) if any(v)]

    def key(v):
        nz = [i for i, x in enumerate(v) if x]
        return (max(abs(x) for x in v), len(nz), nz[0], tuple(rank[x] for x in v))

    vecs.sort(key=key)
    return vecs


def _extendable_to_unimodular(columns, n):
    """True iff the integer columns span a direct summand of Z^n (gcd of maximal minors is 1)."""
    k = len(columns)
    g = 0
    for rows in combinations(range(n), k):
        minor = RatMatrix([[columns[j][i] for j in range(k)] for i in rows]).det()
        g = gcd(g, int(minor))
        if g == 1:
            return True
    return g == 1


def find_lagrangian_splitting(t: TorusData, bound: int = 1,
                              node_budget: int = 10 ** 6) -> LagrangianSplitting | None:
    """Deterministic search for an isotropic-halves splitting.

    Depth-first over candidate columns in canonical order (A columns first,
    then B columns, both index-increasing), pruning non-isotropic and
    non-summand partial choices; returns the first splitting whose full
    change of basis is unimodular, or None within the bound.
    """
    require_valid(t)
    n = t.rank
    d = t.d
    w = omega(t)
    vecs = _candidate_vectors(n, bound)
    nodes = 0

    def pairing(u, v):
        return sum(u[a] * w.entries[a][b] * v[b] for a in range(n) for b in range(n))

    def extend(chosen, start):
        nonlocal nodes
        depth = len(chosen)
        if depth == 2 * d:
            mat = RatMatrix([[col[i] for col in chosen] for i in range(n)])
            if abs(mat.det()) == 1:
                return list(chosen)
            return None
        in_b = depth >= d
        half = chosen[d:] if in_b else chosen[:d]
        lo = start if (depth != d) else 0  # B half restarts the index scan
        for idx in range(lo, len(vecs)):
            v = vecs[idx]
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceededError("splitting search budget exhausted",
                                          nodes, node_budget)
            if any(pairing(u, v) != 0 for u in half):
                continue
            cand = chosen + [v]
            if not _extendable_to_unimodular(cand, n):
                continue
            got = extend(cand, idx + 1)
            if got is not None:
                return got
        return None

    cols = extend([], 0)
    if cols is None:
        return None
    return LagrangianSplitting.from_vectors(cols[:d], cols[d:])


# ---------------------------------------------------------------------------
# the duality itself
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MirrorResult:
    mirror: TorusData
    duality_map: LatticeMap
    duality_certificate: Certificate
    recovery_report: tuple


def _swap_matrix(d: int) -> RatMatrix:
    """Exchange A-windings with A-momenta on the doubled split basis."""
    n4 = 4 * d
    n = 2 * d
    rows = [[QZERO] * n4 for _ in range(n4)]
    for i in range(d):
        rows[i][n + i] = 1       # new winding along dual A = old A momentum
        rows[n + i][i] = 1       # new A momentum = old A winding
    for i in range(d, n):
        rows[i][i] = 1           # B windings unchanged
        rows[n + i][n + i] = 1   # B momenta unchanged
    return RatMatrix(rows)


def mirror_via_tduality(t: TorusData, s: LagrangianSplitting) -> MirrorResult:
    """Construct the mirror torus and its certified duality map.

    The mirror is presented in the splitting-adapted basis: the first d
    coordinates are the duals of the A vectors, the last d are the B
    vectors.
    """
    require_valid(t)
    require_splitting(t, s)
    d, n = t.d, t.rank
    p = s.change_of_basis
    p_inv = p.inverse()
    t_split = TorusData(
        d=d,
        I=p_inv * t.I * p,
        G=p.transpose() * t.G * p,
        B=p.transpose() * t.B * p,
        label=f"{t.label}#split" if t.label else "split",
    )
    ds = doubled(t_split)
    sw = _swap_matrix(d)
    cal_i_new = sw * ds.calJ * sw
    cal_j_new = sw * ds.calI * sw

    report = []

    def check(name, ok):
        report.append((name, ok))
        if not ok:
            raise RecoveryError(f"mirror recovery failed at {name}", block=name)

    z = RatMatrix.zero(n, n)
    i_new = cal_i_new.block(0, n, 0, n)
    check("calI_upper_right_vanishes", cal_i_new.block(0, n, n, 2 * n) == z)
    check("I_squares_to_minus_id", i_new * i_new == -RatMatrix.identity(n))
    ur = cal_j_new.block(0, n, n, 2 * n)
    try:
        ur_inv = ur.inverse()
    except ZeroDivisionError:
        check("calJ_upper_right_invertible", False)
    g_new = ur_inv * i_new
    check("G_symmetric", g_new.is_symmetric())
    check("G_positive_definite", g_new.is_positive_definite())
    w_new = g_new * i_new
    b_new = w_new * cal_j_new.block(0, n, 0, n)
    check("B_skew", b_new.is_skew())
    mirror = TorusData(d=d, I=i_new, G=g_new, B=b_new,
                       label=f"{t.label}|mirror" if t.label else "mirror")
    check("mirror_validates", validate(mirror).ok)
    ds_mirror = doubled(mirror)
    check("calI_resubstitutes", ds_mirror.calI == cal_i_new)
    check("calJ_resubstitutes", ds_mirror.calJ == cal_j_new)

    # duality map: original coordinates -> split coordinates -> swap
    basis_change = RatMatrix.from_blocks([
        [p_inv, RatMatrix.zero(n, n)],
        [RatMatrix.zero(n, n), p.transpose()],
    ])
    g_total = sw * basis_change
    dmap = LatticeMap(g=g_total, source=t, target=mirror, kind="mirror")
    cert = verify_map(dmap)
    check("duality_map_verifies", cert.valid)
    return MirrorResult(mirror=mirror, duality_map=dmap,
                        duality_certificate=cert, recovery_report=tuple(report))


def dual_splitting(mirror: TorusData) -> LagrangianSplitting:
    """The splitting of a mirror along its dualized factor (first d coordinates).

    Used for the round trip: dualizing the mirror along this splitting
    returns to a torus isomorphic to the original.
    """
    n = mirror.rank
    d = mirror.d
    a = [tuple(1 if i == k else 0 for i in range(n)) for k in range(d)]
    b = [tuple(1 if i == k else 0 for i in range(n)) for k in range(d, n)]
    s = LagrangianSplitting.from_vectors(a, b)
    require_splitting(mirror, s)
    return s
