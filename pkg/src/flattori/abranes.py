"""Coisotropic brane checks for affine subtori with constant curvature.

A candidate brane is an affine subtorus spanned by primitive integer
directions ``Y`` inside a flat symplectic torus, carrying an integral
constant curvature form F on its tangent directions.  For constant data the
acceptance conditions are finite exact linear algebra:

(i)   the subtorus is coisotropic (skew-orthogonal complement inside it);
(ii)  F annihilates the characteristic foliation (the kernel of the
      restricted symplectic form);
(iii) the ratio of the two induced transverse forms squares to minus the
      identity, i.e. it is a complex structure transverse to the leaves.

The conditions are evaluated in the order (i), dimension law, (ii), (iii);
a rejection names the first failing condition.  Integrability statements
(the foliation, the transverse complex structure) are automatic here since
all distributions and forms are constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd

from .errors import DimensionError, InconsistencyError, ValidationError
from .exactlinear import (GAUSS_I, GaussRational, ExtElement, RatMatrix,
                          apply_linear, wedge)
from .torus import TorusData, omega, require_valid


@dataclass(frozen=True)
class AffineBrane:
    """An affine subtorus with a constant integral curvature 2-form.

    ``y_basis``: integer direction vectors (each of length 2d) spanning the
    tangent space V; ``curvature``: integral skew matrix in Y-coordinates;
    ``translation``: rational offset, carried along but irrelevant to every
    check below (all data are translation invariant).
    """

    torus: TorusData
    y_basis: tuple
    curvature: RatMatrix
    translation: tuple = ()

    def __post_init__(self):
        n = self.torus.rank
        if not self.y_basis or any(len(v) != n for v in self.y_basis):
            raise DimensionError("brane directions must have length 2d")
        if any(not isinstance(x, int) for v in self.y_basis for x in v):
            raise ValidationError("brane directions must be integral")
        r = len(self.y_basis)
        if self.curvature.rows != r or self.curvature.cols != r:
            raise DimensionError("curvature must be square of size rank(Y)")
        if not self.curvature.is_skew() or not self.curvature.is_integral():
            raise ValidationError("curvature must be an integral skew matrix")
        if self.translation and len(self.translation) != n:
            raise DimensionError("translation must have length 2d")

    @property
    def r(self) -> int:
        return len(self.y_basis)

    def direction_matrix(self) -> RatMatrix:
        n = self.torus.rank
        return RatMatrix([[self.y_basis[j][i] for j in range(self.r)] for i in range(n)])


def _require_structural(b: AffineBrane):
    require_valid(b.torus)
    y = b.direction_matrix()
    if y.rank() != b.r:
        raise ValidationError("brane directions are linearly dependent")
    g = 0
    cols = list(range(b.r))
    for rows in combinations(range(b.torus.rank), b.r):
        minor = RatMatrix([[y.entries[i][j] for j in cols] for i in rows]).det()
        g = gcd(g, int(minor))
        if g == 1:
            return
    if g != 1:
        raise ValidationError("brane directions do not span a primitive sublattice")


@dataclass(frozen=True)
class FoliationData:
    """Kernel of the restricted symplectic form and the transverse data.

    All vectors are in Y-coordinates.  ``complement`` lists the coordinate
    indices representing the transverse space; ``sigma`` and ``f`` are the
    induced forms on those representatives (None in the Lagrangian case,
    where the transverse space is zero).
    """

    l_basis: tuple
    n_rank: int
    complement: tuple
    sigma: RatMatrix | None
    f: RatMatrix | None


def _complement_indices(l_rows, r, prefer_last=False):
    if not l_rows:
        return tuple(range(r))
    order = list(range(r))[::-1] if prefer_last else list(range(r))
    mat = RatMatrix([[row[j] for j in order] for row in l_rows])
    _, pivots = mat.rref()
    piv = {order[c] for c in pivots}
    return tuple(j for j in range(r) if j not in piv)


def _restricted_form(mat: RatMatrix, indices):
    return RatMatrix([[mat.entries[i][j] for j in indices] for i in indices])


def characteristic_foliation(b: AffineBrane, prefer_last_complement: bool = False) -> FoliationData:
    """Compute the foliation data; raises with a witness if not coisotropic.

    Coisotropy is checked through the equivalent finite condition that the
    skew-orthogonal complement of V is contained in V.  For an affine
    subtorus the kernel distribution is constant, hence integrable.
    """
    _require_structural(b)
    w = omega(b.torus)
    y = b.direction_matrix()
    w_v = y.transpose() * w * y
    witness = coisotropy_witness(b)
    if witness is not None:
        raise ValidationError(
            f"subtorus is not coisotropic; witness vector {witness} is "
            "skew-orthogonal to it but lies outside")
    l_basis = tuple(w_v.kernel_basis())
    comp = _complement_indices(l_basis, b.r, prefer_last_complement)
    sigma = _restricted_form(w_v, comp) if comp else None
    f = _restricted_form(b.curvature, comp) if comp else None
    return FoliationData(l_basis=l_basis, n_rank=len(comp), complement=comp,
                         sigma=sigma, f=f)


def coisotropy_witness(b: AffineBrane):
    """A vector in the skew-orthogonal complement of V outside V, or None."""
    w = omega(b.torus)
    y = b.direction_matrix()
    perp = (y.transpose() * w).kernel_basis()
    for v in perp:
        if y.solve(v) is None:
            return v
    return None


@dataclass(frozen=True)
class ConditionResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class AbraneReport:
    conditions: tuple
    accepted: bool
    k: int | None
    transverse_j: RatMatrix | None
    foliation: FoliationData | None

    @property
    def rejection(self):
        return next((c.name for c in self.conditions if not c.ok), None)


def check_abrane(b: AffineBrane, prefer_last_complement: bool = False) -> AbraneReport:
    """Run the acceptance conditions in order; stop at the first failure."""
    _require_structural(b)
    conditions = []
    d = b.torus.d
    r = b.r

    witness = coisotropy_witness(b)
    if witness is not None:
        conditions.append(ConditionResult(
            "coisotropic", False, f"witness {tuple(str(x) for x in witness)}"))
        return AbraneReport(tuple(conditions), False, None, None, None)
    conditions.append(ConditionResult("coisotropic", True))

    if (r - d) % 2 != 0 or r < d:
        conditions.append(ConditionResult(
            "dimension_law", False, f"dim Y = {r} is not n + 2k for n = {d}"))
        return AbraneReport(tuple(conditions), False, None, None, None)
    k = (r - d) // 2
    conditions.append(ConditionResult("dimension_law", True, f"k = {k}"))

    fol = characteristic_foliation(b, prefer_last_complement)
    bad = [l for l in fol.l_basis
           if any(x != 0 for x in b.curvature.apply(l))]
    if bad:
        conditions.append(ConditionResult(
            "curvature_annihilates_foliation", False,
            f"curvature does not annihilate leaf direction {tuple(str(x) for x in bad[0])}"))
        return AbraneReport(tuple(conditions), False, None, None, fol)
    conditions.append(ConditionResult("curvature_annihilates_foliation", True))

    if fol.n_rank == 0:
        conditions.append(ConditionResult("transverse_complex_structure", True,
                                          "vacuous for a Lagrangian"))
        return AbraneReport(tuple(conditions), True, k, None, fol)
    try:
        j_n = fol.sigma.inverse() * fol.f
    except ZeroDivisionError:
        conditions.append(ConditionResult(
            "transverse_complex_structure", False, "induced symplectic form degenerate"))
        return AbraneReport(tuple(conditions), False, None, None, fol)
    if j_n * j_n != -RatMatrix.identity(fol.n_rank):
        conditions.append(ConditionResult(
            "transverse_complex_structure", False, "(sigma^-1 f)^2 != -id"))
        return AbraneReport(tuple(conditions), False, None, None, fol)
    conditions.append(ConditionResult("transverse_complex_structure", True))
    return AbraneReport(tuple(conditions), True, k, j_n, fol)


@dataclass(frozen=True)
class WedgePowerReport:
    k: int
    vanishing_powers: tuple
    first_vanishing_power: int | None
    stated_conditions_hold: bool
    condition_iii_holds: bool
    agreement: bool


def wedge_characterization(b: AffineBrane) -> WedgePowerReport:
    """Evaluate the wedge-power conditions on ``f + i sigma`` and compare.

    The literal conditions tested are "all powers below k are nonzero and
    the k-th power vanishes".  For accepted branes the observed first
    vanishing power is k+1 (the transverse space has complex rank 2k and
    carries a nondegenerate holomorphic symplectic form), so the report
    records agreement or disagreement with condition (iii) instead of
    asserting either indexing; see the package notes.
    """
    report = check_abrane(b)
    passed = {c.name for c in report.conditions if c.ok}
    if not {"coisotropic", "dimension_law", "curvature_annihilates_foliation"} <= passed:
        raise ValidationError("wedge characterization needs conditions (i)-(ii) to hold")
    fol = report.foliation
    k = (b.r - b.torus.d) // 2
    n_rank = max(fol.n_rank, 1)
    powers_vanish = []
    if fol.n_rank:
        phi = (ExtElement.two_form(fol.f.to_gauss())
               + ExtElement.two_form(fol.sigma.to_gauss()).scale(GAUSS_I))
        current = ExtElement.scalar(n_rank, GaussRational(1))
        for rr in range(1, fol.n_rank // 2 + 2):
            current = wedge(current, phi)
            if not current:
                powers_vanish.append(rr)
    first_zero = powers_vanish[0] if powers_vanish else None
    stated = all(rr not in powers_vanish for rr in range(1, k)) and (k == 0 or k in powers_vanish)
    iii = "transverse_complex_structure" in passed
    return WedgePowerReport(
        k=k,
        vanishing_powers=tuple(powers_vanish),
        first_vanishing_power=first_zero,
        stated_conditions_hold=stated,
        condition_iii_holds=iii,
        agreement=stated == iii,
    )


@dataclass(frozen=True)
class AnomalyReport:
    h_constant: bool
    bockstein_class_zero: bool
    top_coefficient: GaussRational


def holomorphic_volume(t: TorusData) -> ExtElement:
    """Wedge of a Q(i)-basis of +i eigencovectors of the complex structure.

    Any two such choices differ by a nonzero constant, which affects none of
    the reported conclusions.
    """
    require_valid(t)
    n = t.rank
    it = t.I.transpose().to_gauss()
    shifted = it - RatMatrix.identity(n).to_gauss().scale(GAUSS_I)
    kernel = shifted.kernel_basis()
    if len(kernel) != t.d:
        raise InconsistencyError("eigenspace of the complex structure has wrong dimension")
    result = ExtElement.scalar(n, GaussRational(1))
    for vec in kernel:
        result = wedge(result, ExtElement(n, {(i,): c for i, c in enumerate(vec) if c}))
    return result


def anomaly_check_affine(b: AffineBrane) -> AnomalyReport:
    """Anomaly data for an accepted brane: constant data force a trivial class.

    ``Omega|_Y ^ F^k`` is a constant multiple of the volume form on Y; the
    multiple is computed exactly over the Gaussian rationals and must be
    nonzero (a zero would contradict acceptance and raises).  Since the
    ratio h is a nonzero constant, its Bockstein image vanishes.
    """
    report = check_abrane(b)
    if not report.accepted:
        raise ValidationError("anomaly check requires an accepted brane")
    k = report.k
    t = b.torus
    y = b.direction_matrix()
    om = holomorphic_volume(t)
    om_restricted = apply_linear(om, y.transpose().to_gauss())
    total = om_restricted
    f_form = ExtElement.two_form(b.curvature.to_gauss())
    for _ in range(k):
        total = wedge(total, f_form)
    top = tuple(range(b.r))
    coeff = total.coefficient(top)
    if not coeff:
        raise InconsistencyError(
            "top-form coefficient vanished for an accepted brane (bug)")
    return AnomalyReport(h_constant=True, bockstein_class_zero=True,
                         top_coefficient=coeff)
