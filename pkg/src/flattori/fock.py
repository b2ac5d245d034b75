"""Level-truncated oscillator algebras and the superconformal state vectors.

The truncated space is spanned by monomials in even creator variables (one
per lattice index and positive integer level, separately for left and right
movers) and odd creator variables (half-odd levels), with total level at
most a cap.  Annihilators act by the metric-contracted derivative rule, so
the canonical (anti)commutation relations hold exactly on every subspace
whose level keeps both operator orders inside the truncation; the verifiers
report "inconclusive" outside that guarded subspace rather than pretending.

Scalars for the superconformal vectors live in Q(i) extended by a formal
sqrt(2) tag, keeping the supercharge normalization exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import TruncationError, ValidationError
from .exactlinear import GaussRational, Q, QZERO, RatMatrix
from .torus import TorusData, omega, require_valid

HALF = Fraction(1, 2)

EVEN_FAMILIES = ("a", "abar")
ODD_FAMILIES = ("th", "thbar")

# a generator is (family, level, index); monomials sort these tuples


class RootTwoScalar:
    """Exact scalar ``value = coeff * sqrt(2)^tag`` with tag in {0, 1}."""

    __slots__ = ("coeff", "tag")

    def __init__(self, coeff, tag=0):
        coeff = GaussRational.coerce(coeff)
        tag = int(tag) % 2
        if not coeff:
            tag = 0
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "tag", tag)

    def __setattr__(self, *a):
        raise AttributeError("RootTwoScalar is immutable")

    def __bool__(self):
        return bool(self.coeff)

    def __eq__(self, other):
        if not isinstance(other, RootTwoScalar):
            other = RootTwoScalar(other)
        return self.coeff == other.coeff and self.tag == other.tag

    def __hash__(self):
        return hash((self.coeff, self.tag))

    def __add__(self, other):
        if not isinstance(other, RootTwoScalar):
            other = RootTwoScalar(other)
        if not self:
            return other
        if not other:
            return self
        if self.tag != other.tag:
            raise ValueError("cannot add scalars of different sqrt(2) parity")
        return RootTwoScalar(self.coeff + other.coeff, self.tag)

    def __neg__(self):
        return RootTwoScalar(-self.coeff, self.tag)

    def __sub__(self, other):
        return self + (-other if isinstance(other, RootTwoScalar) else RootTwoScalar(-other))

    def __mul__(self, other):
        if not isinstance(other, RootTwoScalar):
            other = RootTwoScalar(other)
        t = self.tag + other.tag
        c = self.coeff * other.coeff
        if t == 2:
            c = c * 2
            t = 0
        return RootTwoScalar(c, t)

    __rmul__ = __mul__

    def __repr__(self):
        if self.tag:
            return f"({self.coeff})*sqrt2"
        return f"{self.coeff}"


SQRT2 = RootTwoScalar(1, 1)
INV_SQRT2 = RootTwoScalar(Fraction(1, 2), 1)  # sqrt2 / 2


def _monomial_level(mono):
    even, odd = mono
    return sum(g[1] for g in even) + sum(g[1] for g in odd)


def _monomial_parity(mono):
    return len(mono[1]) % 2


@dataclass(frozen=True)
class TruncatedFock:
    """Deterministic monomial basis of the truncated oscillator space."""

    d: int
    level_cap: Fraction
    G: RatMatrix
    basis: tuple = field(default=None, compare=False, repr=False)
    index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        n = 2 * self.d
        if self.G.rows != n or self.G.cols != n:
            raise ValidationError("metric must be 2d x 2d")
        if not self.G.is_symmetric() or not self.G.is_positive_definite():
            raise ValidationError("metric must be symmetric positive definite")
        cap = Fraction(self.level_cap)
        object.__setattr__(self, "level_cap", cap)
        even_vars = [(fam, Fraction(s), i)
                     for fam in EVEN_FAMILIES
                     for s in range(1, int(cap) + 1)
                     for i in range(n)]
        odd_vars = []
        for fam in ODD_FAMILIES:
            s = HALF
            while s <= cap:
                odd_vars.extend((fam, s, i) for i in range(n))
                s += 1
        even_vars.sort()
        odd_vars.sort()
        monos = []

        def extend_odd(pos, chosen, level):
            monos.append((tuple(chosen[0]), tuple(chosen[1])))
            for t in range(pos, len(odd_vars)):
                var = odd_vars[t]
                if level + var[1] > cap:
                    continue
                chosen[1].append(var)
                extend_odd(t + 1, chosen, level + var[1])
                chosen[1].pop()

        def extend_even(pos, chosen, level):
            extend_odd(0, chosen, level)
            for t in range(pos, len(even_vars)):
                var = even_vars[t]
                if level + var[1] > cap:
                    continue
                chosen[0].append(var)
                extend_even(t, chosen, level + var[1])  # repetition allowed
                chosen[0].pop()

        extend_even(0, [[], []], Fraction(0))
        monos.sort(key=lambda m: (_monomial_level(m), m))
        object.__setattr__(self, "basis", tuple(monos))
        object.__setattr__(self, "index", {m: i for i, m in enumerate(monos)})
        object.__setattr__(self, "_levels", tuple(_monomial_level(m) for m in monos))
        object.__setattr__(self, "_op_cache", {})

    @property
    def rank(self) -> int:
        return 2 * self.d

    def vacuum(self):
        return ((), ())

    def levels(self):
        return [_monomial_level(m) for m in self.basis]


def _creator_action(mono, var, cap):
    """Left multiplication by a creator variable; None when truncated away."""
    even, odd = mono
    fam, s, i = var
    if _monomial_level(mono) + s > cap:
        return None
    if fam in EVEN_FAMILIES:
        new_even = tuple(sorted(even + (var,)))
        return (new_even, odd), Q(1)
    if var in odd:
        return None
    pos = sum(1 for g in odd if g < var)
    new_odd = tuple(sorted(odd + (var,)))
    return (even, new_odd), (Q(-1) if pos % 2 else Q(1))


def _derivative_terms(mono, fam, s, n):
    """All ways to remove one factor of family/level; yields (var_index, new_mono, sign_or_mult)."""
    even, odd = mono
    if fam in EVEN_FAMILIES:
        seen = set()
        for t, g in enumerate(even):
            if g[0] != fam or g[1] != s or g in seen:
                continue
            seen.add(g)
            mult = even.count(g)
            new_even = list(even)
            new_even.remove(g)
            yield g[2], (tuple(new_even), odd), Q(mult)
    else:
        for t, g in enumerate(odd):
            if g[0] != fam or g[1] != s:
                continue
            new_odd = odd[:t] + odd[t + 1:]
            yield g[2], (even, new_odd), (Q(-1) if t % 2 else Q(1))


_KIND_FAMILY = {"alpha": "a", "alphabar": "abar", "psi": "th", "psibar": "thbar"}


@dataclass(frozen=True)
class OscillatorOp:
    """Exact sparse matrix of one oscillator on the truncated basis.

    Columns list ``(row_index, coefficient)`` pairs and are computed on
    demand (the verifiers only ever touch low-level columns).  Creator
    images that exceed the level cap are silently dropped (the
    corestriction to the truncated space), which is why verifications
    guard their subspaces.
    """

    space: TruncatedFock
    kind: str
    index: int
    mode: Fraction
    _column_fn: object = field(compare=False, repr=False)
    _cols: dict = field(compare=False, repr=False, default_factory=dict)

    def column(self, col: int):
        got = self._cols.get(col)
        if got is None:
            got = self._cols[col] = self._column_fn(self.space.basis[col])
        return got

    def matrix_columns(self):
        """Materialize every column (the full exact matrix, sparsely)."""
        return tuple(self.column(c) for c in range(len(self.space.basis)))

    def apply_index(self, col: int):
        return self.column(col)

    def apply_monomial(self, mono):
        return self.column(self.space.index[mono])

    def apply_state(self, state):
        """Apply to a dict monomial -> scalar (any scalar supporting + and *)."""
        out = {}
        for mono, c in state.items():
            for row, a in self.column(self.space.index[mono]):
                key = self.space.basis[row]
                acc = out.get(key)
                term = c * a
                out[key] = term if acc is None else acc + term
        return {m: c for m, c in out.items() if c}


def build_oscillator(space: TruncatedFock, kind: str, i: int, s) -> OscillatorOp:
    """The oscillator with the given flavor, lattice index, and mode.

    Negative modes are creators (multiplication), positive modes act by the
    metric-contracted derivative; bosonic modes must be integers and
    fermionic modes half-odd.  Modes beyond the cap cannot act at all.
    """
    if kind not in _KIND_FAMILY:
        raise ValueError(f"unknown oscillator kind {kind!r}")
    s = Fraction(s)
    if s == 0:
        raise ValueError("zero modes are not oscillators; see field_modes")
    n = space.rank
    if not 0 <= i < n:
        raise ValueError(f"index must lie in 0..{n - 1}")
    bosonic = kind in ("alpha", "alphabar")
    if bosonic and s.denominator != 1:
        raise ValidationError("bosonic modes are integers")
    if not bosonic and (s.denominator != 2):
        raise ValidationError("fermionic modes are half-odd integers")
    if abs(s) > space.level_cap:
        raise TruncationError(f"mode {s} exceeds the level cap {space.level_cap}")
    cache_key = (kind, i, s)
    cache = space._op_cache
    if cache_key in cache:
        return cache[cache_key]
    fam = _KIND_FAMILY[kind]
    ginv = space.G.inverse()
    if s < 0:
        var = (fam, -s, i)

        def column_fn(mono):
            got = _creator_action(mono, var, space.level_cap)
            if got is None:
                return ()
            new_mono, sign = got
            return ((space.index[new_mono], sign),)
    else:
        prefactor = (s if bosonic else Q(1))

        def column_fn(mono):
            entries = []
            for j, new_mono, factor in _derivative_terms(mono, fam, s, n):
                c = prefactor * ginv.entries[i][j] * factor
                if c:
                    entries.append((space.index[new_mono], c))
            return tuple(entries)

    op = OscillatorOp(space=space, kind=kind, index=i, mode=s, _column_fn=column_fn)
    cache[cache_key] = op
    return op


# ---------------------------------------------------------------------------
# algebra verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckOutcome:
    status: str  # "pass", "fail", or "inconclusive"
    tested_dimension: int
    expected: Fraction

    def __bool__(self):
        return self.status == "pass"


def _bracket_on_subspace(space, op1, op2, sign, testable):
    """Evaluate op1 op2 + sign*op2 op1 on the given basis columns, as dicts."""
    results = []
    for col in testable:
        acc = {}

        def add_terms(first, second, factor):
            for mid, c1 in first.column(col):
                for row, c2 in second.column(mid):
                    acc[row] = acc.get(row, QZERO) + factor * c1 * c2

        add_terms(op2, op1, Q(1))       # op1 after op2
        add_terms(op1, op2, Q(sign))    # sign * op2 after op1
        results.append({r: c for r, c in acc.items() if c})
    return results


def _verify_pairs(space, i, j, s, p, flavors, sign, expected_same_flavor):
    from bisect import bisect_right
    cap = space.level_cap
    # basis is level-sorted, so the guarded subspace is a prefix
    testable = range(bisect_right(space._levels, cap - abs(s) - abs(p)))
    if not testable:
        return CheckOutcome("inconclusive", 0, expected_same_flavor)
    left, right = flavors
    checks = (
        (left, left, expected_same_flavor),
        (right, right, expected_same_flavor),
        (left, right, QZERO),
    )
    for kind1, kind2, expected in checks:
        op1 = build_oscillator(space, kind1, i, s)
        op2 = build_oscillator(space, kind2, j, p)
        got = _bracket_on_subspace(space, op1, op2, sign, testable)
        for col, result in zip(testable, got):
            want = {col: expected} if expected else {}
            if result != want:
                return CheckOutcome("fail", len(testable), expected_same_flavor)
    return CheckOutcome("pass", len(testable), expected_same_flavor)


def verify_ccr(space: TruncatedFock, i: int, j: int, s, p) -> CheckOutcome:
    """Commutators of the bosonic oscillators on the guarded subspace.

    Checks ``[alpha^i_s, alpha^j_p]`` and its right-moving twin against
    ``s (G^-1)^{ij} delta_{s,-p}``, and the mixed commutator against zero.
    """
    s = Fraction(s)
    p = Fraction(p)
    ginv = space.G.inverse()
    expected = s * ginv.entries[i][j] if s == -p else QZERO
    return _verify_pairs(space, i, j, s, p, ("alpha", "alphabar"), -1, expected)


def verify_car(space: TruncatedFock, i: int, j: int, s, p) -> CheckOutcome:
    """Anticommutators of the fermionic oscillators on the guarded subspace."""
    s = Fraction(s)
    p = Fraction(p)
    ginv = space.G.inverse()
    expected = ginv.entries[i][j] if s == -p else QZERO
    return _verify_pairs(space, i, j, s, p, ("psi", "psibar"), +1, expected)


def ccr_car_sweep(space: TruncatedFock):
    """All index/mode pairs testable at the cap; rows for reports and the CLI."""
    cap = space.level_cap
    n = space.rank
    rows = []
    boson_modes = [Fraction(s) for a in range(1, int(cap) + 1) for s in (a, -a)]
    fermi_modes = []
    s = HALF
    while s <= cap:
        fermi_modes.extend((s, -s))
        s += 1
    for algebra, modes, verify in (("ccr", boson_modes, verify_ccr),
                                   ("car", fermi_modes, verify_car)):
        for i in range(n):
            for j in range(n):
                for s in modes:
                    for p in modes:
                        out = verify(space, i, j, s, p)
                        rows.append({
                            "algebra": algebra, "i": i, "j": j,
                            "s": str(s), "p": str(p),
                            "status": out.status,
                            "tested_dimension": out.tested_dimension,
                        })
    return rows


# ---------------------------------------------------------------------------
# superconformal vectors
# ---------------------------------------------------------------------------


def _state_add(target, mono, scalar):
    if not scalar:
        return
    acc = target.get(mono)
    target[mono] = scalar if acc is None else acc + scalar
    if not target[mono]:
        del target[mono]


def superconformal_states(space: TruncatedFock, t: TorusData):
    """The eight generator states, as exact tagged-scalar vectors.

    Left movers:

    * ``L = G(a_-1, a_-1)/2 - G(theta_-1/2, theta_-3/2)/2``
    * ``Qpm = (-i/(4 sqrt 2)) (G -+ i omega)(theta_-1/2, a_-1)``
    * ``J = (-i/2) omega(theta_-1/2, theta_-1/2)``

    and the right movers with the barred variables.  The bilinear forms are
    expanded literally over all index pairs; no symmetrization beyond what
    the variables themselves impose is applied.
    """
    require_valid(t)
    if space.rank != t.rank:
        raise ValidationError("space and torus dimensions differ")
    if space.level_cap < 2:
        raise TruncationError("superconformal vectors need level cap >= 2")
    G = t.G
    w = omega(t)
    n = space.rank
    minus_i_over_8 = GaussRational(0, Fraction(-1, 8))
    states = {}
    for side, afam, thfam in (("", "a", "th"), ("bar", "abar", "thbar")):
        L = {}
        for a in range(n):
            for b in range(n):
                g = G.entries[a][b]
                if not g:
                    continue
                mono = (tuple(sorted(((afam, Q(1), a), (afam, Q(1), b)))), ())
                _state_add(L, mono, RootTwoScalar(Fraction(g, 2)))
                mono_f = ((), ((thfam, HALF, a), (thfam, Fraction(3, 2), b)))
                _state_add(L, mono_f, RootTwoScalar(Fraction(-g, 2)))
        states["L" + side] = L
        for name, sgn in (("Qplus", -1), ("Qminus", 1)):
            state = {}
            for a in range(n):
                for b in range(n):
                    coeff = GaussRational(G.entries[a][b], sgn * w.entries[a][b])
                    if not coeff:
                        continue
                    mono = (((afam, Q(1), b),), ((thfam, HALF, a),))
                    _state_add(state, mono, RootTwoScalar(minus_i_over_8 * coeff, 1))
            states[name + side] = state
        J = {}
        for a in range(n):
            for b in range(a + 1, n):
                wc = w.entries[a][b]
                if not wc:
                    continue
                mono = ((), ((thfam, HALF, a), (thfam, HALF, b)))
                _state_add(J, mono, RootTwoScalar(GaussRational(0, -wc)))
            # omega(theta, theta) doubles the strictly-upper coefficients;
            # with the -i/2 prefactor this leaves -i * w_ab per monomial
        states["J" + side] = J
    return states


def state_level(state):
    levels = {_monomial_level(m) for m in state}
    if len(levels) != 1:
        raise ValueError("state is not level-homogeneous")
    return levels.pop()


def state_parity(state):
    parities = {_monomial_parity(m) for m in state}
    if len(parities) != 1:
        raise ValueError("state is not parity-homogeneous")
    return parities.pop()


# ---------------------------------------------------------------------------
# field modes and the monomial pairing oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroModeDescriptor:
    """The s = 0 mode of a bosonic current: diagonal on charge sectors.

    Acts on the sector ``(w, m)`` by the number ``(G^-1 p)_j`` (left) or
    ``(G^-1 pbar)_j`` (right), in the sqrt(2)-rescaled normalization used
    for all zero-mode quantities.
    """

    torus: TorusData
    index: int
    chirality: str  # "left" or "right"
    rescaled_by_sqrt2: bool = True

    def apply_charge(self, charge):
        from .torus import zero_mode_momenta
        z = zero_mode_momenta(self.torus, charge)
        vec = z.p if self.chirality == "left" else z.pbar
        ginv = self.torus.G.inverse()
        return sum(ginv.entries[self.index][k] * vec[k] for k in range(self.torus.rank))


_FIELD_TABLE = {
    "dX": ("alpha", "left"),
    "dXbar": ("alphabar", "right"),
    "psi": ("psi", None),
    "psibar": ("psibar", None),
}


def field_modes(space: TruncatedFock, t: TorusData, fld: str, j: int, s):
    """Mode content of the basic currents.

    For nonzero modes this is the corresponding oscillator; the bosonic
    zero mode is a :class:`ZeroModeDescriptor` delegating to the charge
    sector data (the currents themselves have no zero-mode oscillator).
    """
    if fld not in _FIELD_TABLE:
        raise ValueError(f"unknown field {fld!r}; expected one of {sorted(_FIELD_TABLE)}")
    kind, chirality = _FIELD_TABLE[fld]
    s = Fraction(s)
    if s == 0:
        if chirality is None:
            raise ValidationError("fermionic currents have no zero mode")
        return ZeroModeDescriptor(torus=t, index=j, chirality=chirality)
    return build_oscillator(space, kind, j, s)


def monomial_pairing(space: TruncatedFock, m1, m2):
    """Wick pairing of two basis monomials (the creator-adjointness oracle).

    Independent of the operator implementation: a permanent over bosonic
    contractions times a determinant over fermionic contractions, each
    single contraction pairing equal levels and families through
    ``level * G^-1`` (bosons) or ``G^-1`` (fermions).
    """
    from itertools import permutations
    even1, odd1 = m1
    even2, odd2 = m2
    if len(even1) != len(even2) or len(odd1) != len(odd2):
        return QZERO
    ginv = space.G.inverse()

    def single_even(g1, g2):
        if g1[0] != g2[0] or g1[1] != g2[1]:
            return QZERO
        return g1[1] * ginv.entries[g1[2]][g2[2]]

    def single_odd(g1, g2):
        if g1[0] != g2[0] or g1[1] != g2[1]:
            return QZERO
        return ginv.entries[g1[2]][g2[2]]

    even_total = QZERO
    if even1:
        for perm in permutations(range(len(even2))):
            term = Q(1)
            for a, b in enumerate(perm):
                term *= single_even(even1[a], even2[b])
                if not term:
                    break
            even_total += term
    else:
        even_total = Q(1)
    odd_total = QZERO
    if odd1:
        for perm in permutations(range(len(odd2))):
            sign = _perm_sign(perm)
            term = Q(sign)
            for a, b in enumerate(perm):
                term *= single_odd(odd1[a], odd2[b])
                if not term:
                    break
            odd_total += term
    else:
        odd_total = Q(1)
    return even_total * odd_total


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        t = start
        while not seen[t]:
            seen[t] = True
            t = perm[t]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
