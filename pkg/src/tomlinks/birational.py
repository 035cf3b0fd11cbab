"""The link engine: blow-up scroll, wall crossings, endpoints, baskets.

Pipeline for one case: build the Tom matrix, unproject, put the blow-up
inside the rank-2 scroll, divide out the t factors to get the nine
equations of the blown-up 3-fold, then walk the Mori-cone walls in
decreasing ideal weight.  Every wall is analysed locally at its base point
via the Jacobian of the nine equations: variables with an invertible
linear coefficient there are eliminable, the survivors' localised weights
are the flip data.  The link ends in a divisorial contraction, a del Pezzo
fibration or a conic bundle according to the multiplicity pattern of the
ideal weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import (
    AlgebraError,
    BiDegree,
    Mono,
    Polynomial,
    Ring,
    bidegree,
    exact_divide,
    mix_seed,
    substitute,
    well_form,
)
from .groebner import (
    DEFAULT_BUDGET,
    Ideal,
    MatrixOrder,
    NotZeroDimensional,
    affine_colength,
    buchberger,
    hilbert_numerator,
    normal_form,
    projective_dim_degree,
    zero_dim_degree,
)
from .pfaffian import (
    SkewMatrix5,
    TomFormat,
    WeightMatrix5,
    build_general_tom,
    maximal_pfaffians,
)
from .unprojection import UnprojectionResult, build_unprojection

SCROLL_NAMES = ("t", "s", "x1", "x2", "x3", "y1", "y2", "y3", "y4")
Y_NAMES = ("y1", "y2", "y3", "y4")
X_NAMES = ("x1", "x2", "x3")


class LinkError(AlgebraError):
    pass


# ---------------------------------------------------------------------------
# case data

@dataclass
class Basket:
    """Multiset of cyclic quotient singularities 1/r(a,b,c)."""

    entries: list[tuple[int, tuple[int, int, int]]] = field(default_factory=list)

    @staticmethod
    def normal(r: int, weights: Sequence[int]) -> tuple[int, tuple[int, int, int]]:
        return (int(r), tuple(sorted(int(x) % r for x in weights)))

    def copy(self) -> "Basket":
        return Basket(list(self.entries))

    def add(self, r: int, weights: Sequence[int]):
        if r <= 1:
            return  # smooth point
        self.entries.append(Basket.normal(r, weights))
        self.entries.sort()

    def remove(self, r: int, weights: Sequence[int]):
        if r <= 1:
            return
        key = Basket.normal(r, weights)
        if key not in self.entries:
            raise LinkError(f"basket removal target 1/{key[0]}{key[1]} absent: {self}")
        self.entries.remove(key)

    def __str__(self):
        if not self.entries:
            return "{}"
        return "{" + ", ".join(f"1/{r}({a},{b},{c})" for r, (a, b, c) in self.entries) + "}"

    def __eq__(self, other):
        return sorted(self.entries) == sorted(other.entries)


@dataclass
class FanoCase:
    """Input data for one Tom-type family."""

    id: str
    abc: tuple[int, int, int]          # orbinate weights, sorted ascending, min 1
    d: tuple[int, int, int, int]       # ideal weights, sorted descending
    r: int                             # unprojection variable weight / centre index
    tom_k: int
    matrix_weights: WeightMatrix5
    matrix: SkewMatrix5 | None         # explicit entries, or None for seeded general
    basket: Basket
    declared_nodes: int | None = None
    matrix_seed: int | None = None     # fixed seed for GENERAL matrices

    def __post_init__(self):
        a, b, c = self.abc
        if sorted(self.abc) != list(self.abc) or a != 1:
            raise LinkError("orbinate weights must be ascending with minimum 1")
        if list(self.d) != sorted(self.d, reverse=True):
            raise LinkError("ideal weights not sorted")
        if min(self.d) < 1:
            raise LinkError("ideal weights must be positive")

    @property
    def ambient6(self) -> Ring:
        return Ring(X_NAMES + Y_NAMES, (self.abc + self.d,))

    def build_matrix(self, seed: int) -> SkewMatrix5:
        if self.matrix is not None:
            return self.matrix
        use = self.matrix_seed if self.matrix_seed is not None else seed
        return build_general_tom(self.matrix_weights, TomFormat(self.tom_k), self.ambient6, use)


@dataclass
class Scroll:
    ring: Ring
    irrelevant: tuple[tuple[str, ...], tuple[str, ...]] = (("t", "s"), X_NAMES + Y_NAMES)


def kawamata_scroll(case: FanoCase) -> Scroll:
    """Rank-2 ambient of the blow-up: top (0,r,a,b,c,d), bottom (1,1,0,0,0,-1,...)."""
    a, b, c = case.abc
    top = (0, case.r, a, b, c) + case.d
    bottom = (1, 1, 0, 0, 0, -1, -1, -1, -1)
    return Scroll(Ring(SCROLL_NAMES, (top, bottom)))


# ---------------------------------------------------------------------------
# deltas and the blow-up ideal

def compute_deltas(g: Sequence[Polynomial], case: FanoCase,
                   require_general: bool = True) -> tuple[int, int, int, int]:
    """Least t-exponent picked up by each unprojection equation under pull-back.

    Scanning the monomials of g_j that avoid y_j, the t-exponent of a
    monomial is its x-weighted degree plus (r + d_k) per y_k factor; for a
    general Tom member the minimum is realised by a pure-orbinate monomial
    and equals r + d_j, which the standard scroll shape depends on (enforced
    unless require_general is cleared).
    """
    ring = g[0].ring
    xw = [ring.top[ring.index[n]] for n in X_NAMES]
    xi = [ring.index[n] for n in X_NAMES]
    yi = [ring.index[n] for n in Y_NAMES]
    deltas = []
    for j, gj in enumerate(g):
        best = None
        for m in gj.terms:
            if m[yi[j]]:
                continue  # the h_j part: stays with s*y_j
            val = sum(w * m[i] for w, i in zip(xw, xi))
            val += sum(m[yi[k]] * (case.r + case.d[k]) for k in range(4))
            best = val if best is None else min(best, val)
        if best is None:
            raise LinkError(
                f"g_{j + 1} has no y_{j + 1}-free monomial; input is not a general Tom member"
            )
        if best < case.d[j]:
            raise LinkError(f"delta_{j + 1} = {best} < d_{j + 1}; grading bug")
        if require_general and best != case.r + case.d[j]:
            raise LinkError(
                f"delta_{j + 1} = {best} != r + d_{j + 1} = {case.r + case.d[j]}: "
                f"g_{j + 1} lacks a pure-orbinate monomial (non-general member)"
            )
        deltas.append(best)
    return tuple(deltas)


def _pullback_maps(scroll: Scroll, case: FanoCase):
    """alpha_1 and the integer-exponent blow-up pull-back into the scroll ring."""
    S = scroll.ring
    t = S.gen("t")
    alpha = {n: S.gen(n) for n in X_NAMES}
    alpha |= {n: t * S.gen(n) for n in Y_NAMES}
    a, b, c = case.abc
    phi = {n: (t ** w) * S.gen(n) for n, w in zip(X_NAMES, (a, b, c))}
    phi |= {n: (t ** (case.d[k] + 1)) * S.gen(n) for k, n in enumerate(Y_NAMES)}
    return alpha, phi


def _divide_t(p: Polynomial) -> tuple[Polynomial, int]:
    """Strip the maximal power of t (slot 0 of the scroll ring)."""
    if p.is_zero():
        return p, 0
    k = min(m[0] for m in p.terms)
    if k == 0:
        return p, 0
    return Polynomial(
        p.ring,
        {tuple((e - k if i == 0 else e) for i, e in enumerate(m)): c for m, c in p.terms.items()},
        _clean=True,
    ), k


@dataclass
class BlowupData:
    generators: list[Polynomial]    # h_1..h_9 in the scroll ring
    deltas: tuple[int, int, int, int]
    t_exponents: list[int]          # power of t divided out of each generator
    pullback_ideal: Ideal           # the nine raw pull-backs (before division)


def blowup_ideal(res: UnprojectionResult, scroll: Scroll, case: FanoCase) -> BlowupData:
    """The nine equations of the blow-up: pull back, then divide out all t factors.

    The pfaffian pull-backs lose t and t^2 (Tom format guarantees at least
    one factor), the unprojection ones lose t^delta_j; by construction each
    quotient is bihomogeneous in the scroll grading.
    """
    deltas = compute_deltas(res.g, case)
    alpha, phi = _pullback_maps(scroll, case)
    S = scroll.ring
    gens: list[Polynomial] = []
    exps: list[int] = []
    raw: list[Polynomial] = []

    pf = res.pfaffians
    # order pfaffians so the y-quadratic one (slot tom_k) comes first
    order = [case.tom_k] + [i for i in range(1, 6) if i != case.tom_k]
    for pos, i in enumerate(order):
        pulled = substitute(pf[i - 1], alpha, S)
        raw.append(pulled)
        h, k = _divide_t(pulled)
        expected = 2 if pos == 0 else 1
        if k < expected:
            raise LinkError(
                f"pfaffian {i} pull-back lost t^{k}, expected at least t^{expected}: not Tom"
            )
        gens.append(h)
        exps.append(k)
    a = case.abc[0]
    t = S.gen("t")
    for j in range(4):
        f = substitute(res.g[j], phi, S)
        sy_exp = (case.r - a) + case.d[j] + 1
        pulled = (t ** sy_exp) * S.gen("s") * S.gen(Y_NAMES[j]) - f
        raw.append(pulled)
        h, k = _divide_t(pulled)
        if k != deltas[j]:
            raise LinkError(
                f"unprojection pull-back {j + 1} divided by t^{k}, deltas predicted {deltas[j]}"
            )
        gens.append(h)
        exps.append(k)
    for h in gens:
        bidegree(h)  # raises if any generator fails bihomogeneity
    return BlowupData(gens, deltas, exps, Ideal(raw, S))


# ---------------------------------------------------------------------------
# classification

TAGS = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii")


def classify_case(d: Sequence[int]) -> str:
    """Equality pattern tag (i)..(viii) of the sorted ideal weights."""
    d1, d2, d3, d4 = d
    if not (d1 >= d2 >= d3 >= d4 >= 1):
        raise LinkError("ideal weights must be sorted descending and positive")
    pattern = (d1 > d2, d2 > d3, d3 > d4)
    table = {
        (True, True, True): "i",
        (True, False, True): "ii",
        (False, True, True): "iii",
        (True, True, False): "iv",
        (False, True, False): "v",
        (True, False, False): "vi",
        (False, False, True): "vii",
        (False, False, False): "viii",
    }
    return table[pattern]


@dataclass
class WeightConfig:
    tag: str                      # "a", "b" or "neither"
    pi: int | None
    matches: list[tuple[str, int]]  # all template fits, most specific first


def detect_weight_config(w: WeightMatrix5, d: Sequence[int]) -> WeightConfig:
    """Match the two special weight patterns of the ideal block.

    (a): the four entries (2,4),(2,5),(3,4),(3,5) share one weight pi.
    (b): only (2,5),(3,4) share pi, which must be d1 or d2, with the rest of
    the matrix forced by homogeneity.  Configuration (b) is what makes a
    pure square of an ideal variable appear in the blown-up equations, so a
    wall crossing restricts to an isomorphism.
    """
    m = {p: w[p] for p in ((1, 2), (1, 3), (1, 4), (1, 5),
                           (2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5))}
    matches: list[tuple[str, int]] = []

    if m[(2, 4)] == m[(2, 5)] == m[(3, 4)] == m[(3, 5)]:
        pi = m[(2, 4)]
        sigma, tau = m[(1, 2)], m[(2, 3)]
        if (m[(1, 3)] == sigma and m[(1, 4)] == m[(1, 5)] == pi + sigma - tau
                and m[(4, 5)] == 2 * pi - tau):
            matches.append(("a", pi))

    if m[(2, 5)] == m[(3, 4)] and m[(2, 5)] in (d[0], d[1]):
        pi = m[(2, 5)]
        sigma, tau, ups = m[(1, 2)], m[(2, 3)], m[(2, 4)]
        if (m[(1, 3)] == pi + sigma - ups and m[(1, 4)] == pi + sigma - tau
                and m[(1, 5)] == 2 * pi + sigma - tau - ups
                and m[(3, 5)] == 2 * pi - ups and m[(4, 5)] == 2 * pi - tau):
            matches.append(("b", pi))

    if matches:
        tag, pi = matches[0]
        return WeightConfig(tag, pi, matches)
    return WeightConfig("neither", None, [])


# ---------------------------------------------------------------------------
# flops

@dataclass
class FlopData:
    count: int
    matrix_a: list[list[Polynomial]]
    declared: int | None


def coefficient_matrix(res: UnprojectionResult, case: FanoCase) -> list[list[Polynomial]]:
    """A[i][j]: the orbinate coefficient of y_i in the j-th linear pfaffian."""
    ring = case.ambient6
    yi = [ring.index[n] for n in Y_NAMES]
    pf = res.pfaffians
    order = [k for k in range(1, 6) if k != case.tom_k]
    A: list[list[Polynomial]] = [[None] * 4 for _ in range(4)]
    for col, k in enumerate(order):
        for row in range(4):
            picked = {}
            for m, c in pf[k - 1].terms.items():
                ydeg = sum(m[i] for i in yi)
                if ydeg == 1 and m[yi[row]] == 1:
                    reduced = tuple(e - 1 if i == yi[row] else e for i, e in enumerate(m))
                    picked[reduced] = c
            A[row][col] = Polynomial(ring, picked, _clean=True)
    return A


def minors_ideal(A: list[list[Polynomial]], ring: Ring, size: int = 3) -> Ideal:
    from itertools import combinations

    n = len(A)
    gens = []
    for rows in combinations(range(n), size):
        for cols in combinations(range(n), size):
            gens.append(_det(A, rows, cols, ring))
    return Ideal([g for g in gens if not g.is_zero()], ring)


def _det(A, rows, cols, ring) -> Polynomial:
    if len(rows) == 1:
        return A[rows[0]][cols[0]]
    out = ring.zero()
    for k, c in enumerate(cols):
        minor = _det(A, rows[1:], cols[:k] + cols[k + 1:], ring)
        term = A[rows[0]][c] * minor
        out = out + (term if k % 2 == 0 else -term)
    return out


def count_flops(res: UnprojectionResult, case: FanoCase,
                budget: int = DEFAULT_BUDGET) -> FlopData:
    """Number of nodes on the unprojected plane: the length of the rank<=2
    locus of the coefficient matrix, counted in P^2(a,b,c)."""
    if case.abc != (1, 1, 1):
        raise LinkError("node counting implemented for P^2(1,1,1) planes only")
    A = coefficient_matrix(res, case)
    ring6 = case.ambient6
    P2 = Ring(X_NAMES, ((1, 1, 1),))
    into = {n: P2.gen(n) for n in X_NAMES} | {n: 0 for n in Y_NAMES}
    A2 = [[substitute(e, into, P2) for e in row] for row in A]
    ideal = minors_ideal(A2, P2, 3)
    count = zero_dim_degree(ideal, (1, 1, 1), budget)
    return FlopData(count, A2, case.declared_nodes)


def rank_at_point(A2: list[list[Polynomial]], point: Sequence[Fraction]) -> int:
    vals = [[_eval_xpoly(e, point) for e in row] for row in A2]
    return _rank(vals)


def _eval_xpoly(p: Polynomial, point: Sequence[Fraction]) -> Fraction:
    out = Fraction(0)
    for m, c in p.terms.items():
        v = c
        for e, x in zip(m, point):
            v *= x ** e
        out += v
    return out


def _rank(rows: list[list[Fraction]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0])
    used = set()
    for col in range(ncols):
        piv = None
        for i, r in enumerate(rows):
            if i not in used and r[col] != 0:
                piv = i
                break
        if piv is None:
            continue
        used.add(piv)
        rank += 1
        pr = rows[piv]
        for i, r in enumerate(rows):
            if i != piv and r[col] != 0:
                f = r[col] / pr[col]
                for k in range(ncols):
                    r[k] -= f * pr[k]
    return rank


# ---------------------------------------------------------------------------
# quadratic field extension for conjugate wall points

class QuadExt:
    """Element a + b*w of Q[w]/(w^2 - P*w - Q0)."""

    __slots__ = ("a", "b", "P", "Q0")

    def __init__(self, a, b, P, Q0):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.P = Fraction(P)
        self.Q0 = Fraction(Q0)

    def _lift(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            return other
        return QuadExt(other, 0, self.P, self.Q0)

    def __add__(self, other):
        o = self._lift(other)
        return QuadExt(self.a + o.a, self.b + o.b, self.P, self.Q0)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.P, self.Q0)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        # (a + bw)(c + dw) with w^2 = P w + Q0
        a, b, c, d = self.a, self.b, o.a, o.b
        return QuadExt(a * c + b * d * self.Q0, a * d + b * c + b * d * self.P,
                       self.P, self.Q0)

    __rmul__ = __mul__

    def inverse(self) -> "QuadExt":
        # solve (a + bw)(x + yw) = 1
        a, b = self.a, self.b
        det = a * a + a * b * self.P - b * b * self.Q0
        if det == 0:
            raise ZeroDivisionError("non-invertible quadratic extension element")
        return QuadExt((a + b * self.P) / det, -b / det, self.P, self.Q0)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __eq__(self, other):
        o = self._lift(other)
        return self.a == o.a and self.b == o.b

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        return f"({self.a} + {self.b}w)"

    def power(self, e: int) -> "QuadExt":
        out = QuadExt(1, 0, self.P, self.Q0)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out


def _power(value, e: int):
    if isinstance(value, QuadExt):
        return value.power(e)
    return Fraction(value) ** e


# ---------------------------------------------------------------------------
# wall analysis

@dataclass
class Flip:
    wall: tuple[str, ...]
    survivors: tuple[str, ...]
    weights: tuple[int, ...]              # localised top weights, descending
    contracted: tuple[int, ...]           # positive weights
    extracted: tuple[int, ...]            # negative weights (as positives)
    hypersurface_degree: int | None
    eliminated: tuple[str, ...]
    point: str                            # label of the base point
    hyp_pair: tuple[str, str] | None = None  # t*(negative variable) in the cutting equation


@dataclass
class Isomorphism:
    wall: tuple[str, ...]
    witness: str  # the pure power certifying the wall misses the 3-fold


@dataclass
class SimultaneousFlips:
    wall: tuple[str, ...]
    flips: tuple[Flip, Flip]
    quadratic_form: str


@dataclass
class KawamataBlowup:
    centre: tuple[int, tuple[int, int, int]]


@dataclass
class Flop:
    count: int | None
    declared: int | None


@dataclass
class DivisorialContractionToFano:
    kind: tuple[int, int]                 # (2,0) or (2,1)
    wall: tuple[str, ...]
    endpoint: "EndpointFano"


@dataclass
class DelPezzoFibration:
    base: tuple[str, ...]
    degree: int | None
    note: str = ""


@dataclass
class ConicBundle:
    base: tuple[str, ...]
    discriminant_degree: int | None
    patch_determinants: list[tuple[str, str]]   # (patch variable, determinant text)
    patch_degrees: list[int]
    overlap: int
    note: str = ""


LinkStep = object  # union of the step dataclasses above


def wall_groups(d: Sequence[int]) -> list[list[str]]:
    """Ideal variables grouped by equal weight, in decreasing weight order."""
    groups: list[list[str]] = []
    for k, name in enumerate(Y_NAMES):
        if groups and d[k] == d[k - 1]:
            groups[-1].append(name)
        else:
            groups.append([name])
    return groups


def _localized_ring(scroll: Scroll, weight: int) -> Ring:
    S = scroll.ring
    top = tuple(t + weight * b for t, b in zip(S.top, S.bottom))
    return Ring(S.names, (top, S.bottom))


_PRIORITY = ("s", "x1", "x2", "x3", "y1", "y2", "y3", "y4", "t")


class _PointData:
    """Linear and quadratic coefficients of the generators at a wall point."""

    def __init__(self, gens: Sequence[Polynomial], ring: Ring,
                 wall_idx: dict[int, object], one):
        # wall_idx: variable slot -> point value; `one` is the field unit
        self.rows: list[dict[int, object]] = []
        self.consts: list = []
        self.quads: list[dict[tuple[int, int], object]] = []
        for g in gens:
            lin: dict[int, object] = {}
            quad: dict[tuple[int, int], object] = {}
            const = one * 0
            for m, c in g.terms.items():
                supp = [(i, e) for i, e in enumerate(m) if e and i not in wall_idx]
                scale = one * c
                for i, v in wall_idx.items():
                    if m[i]:
                        scale = scale * _power(v, m[i])
                if not supp:
                    const = const + scale
                elif len(supp) == 1 and supp[0][1] == 1:
                    i = supp[0][0]
                    lin[i] = lin.get(i, one * 0) + scale
                elif len(supp) == 1 and supp[0][1] == 2:
                    key = (supp[0][0], supp[0][0])
                    quad[key] = quad.get(key, one * 0) + scale
                elif len(supp) == 2 and supp[0][1] == 1 and supp[1][1] == 1:
                    key = (supp[0][0], supp[1][0])
                    quad[key] = quad.get(key, one * 0) + scale
            self.rows.append({i: v for i, v in lin.items() if v})
            self.quads.append({k: v for k, v in quad.items() if v})
            self.consts.append(const)


def _greedy_pivots(point: _PointData, ring: Ring, skip: set[int]):
    """Gaussian elimination with the fixed variable priority.

    Returns (pivots: var slot -> row index, L: eliminated slot -> {survivor
    slot: coefficient}) where L gives the linear part of the local solution.
    """
    priority = [ring.index[n] for n in _PRIORITY if ring.index[n] not in skip]
    rows = [dict(r) for r in point.rows]
    used: set[int] = set()
    pivots: dict[int, int] = {}
    for var in priority:
        hit = None
        for ri, row in enumerate(rows):
            if ri not in used and row.get(var):
                hit = ri
                break
        if hit is None:
            continue
        used.add(hit)
        pivots[var] = hit
        prow = rows[hit]
        pc = prow[var]
        for ri, row in enumerate(rows):
            if ri == hit or not row.get(var):
                continue
            f = row[var] / pc
            for k, v in prow.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    # linear parts: solve the pivot system on the original rows
    elim = sorted(pivots)
    surv = [ring.index[n] for n in _PRIORITY if ring.index[n] not in skip and ring.index[n] not in pivots]
    L: dict[int, dict[int, object]] = {}
    if elim:
        mat = []
        rhs = []
        for var in elim:
            row = point.rows[pivots[var]]
            mat.append([row.get(v, 0) for v in elim])
            rhs.append([row.get(sv, 0) for sv in surv])
        sol = _solve_linear(mat, rhs)
        for k, var in enumerate(elim):
            L[var] = {sv: -sol[k][j] for j, sv in enumerate(surv) if sol[k][j]}
    return pivots, L


def _solve_linear(mat, rhs):
    """Solve mat . X = rhs for X (square system over a field)."""
    n = len(mat)
    m = [list(row) + list(rv) for row, rv in zip(mat, rhs)]
    width = len(m[0]) if m else 0
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            raise LinkError("singular pivot system in wall analysis")
        m[col], m[piv] = m[piv], m[col]
        pc = m[col][col]
        for k in range(width):
            m[col][k] = m[col][k] / pc
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                for k in range(width):
                    m[r][k] = m[r][k] - f * m[col][k]
    return [row[n:] for row in m]


def _composed_quad_coeff(point: _PointData, gi: int, t_slot: int, v_slot: int,
                         L: dict[int, dict[int, object]], pivots: dict[int, int], one):
    """Coefficient of x_t * x_v in generator gi after eliminating the pivots."""

    def image(slot: int) -> dict[int, object]:
        if slot in pivots:
            return L.get(slot, {})
        return {slot: one}

    # coefficient of the cross term x_t * x_v (t != v) in the composition
    total = one * 0
    for (al, be), c in point.quads[gi].items():
        la, lb = image(al), image(be)
        if al == be:
            total = total + c * 2 * la.get(t_slot, 0) * la.get(v_slot, 0)
        else:
            total = total + c * (la.get(t_slot, 0) * lb.get(v_slot, 0)
                                 + la.get(v_slot, 0) * lb.get(t_slot, 0))
    return total


def analyze_wall(gens: Sequence[Polynomial], scroll: Scroll, wall: Sequence[str],
                 case: FanoCase) -> LinkStep:
    """Cross one Mori-cone wall: isomorphism, flip, or two simultaneous flips."""
    wall = tuple(wall)
    S = scroll.ring
    widx = [S.index[v] for v in wall]
    wall_weight = S.top[widx[0]]
    loc = _localized_ring(scroll, wall_weight)

    if len(wall) == 1:
        # pure power of the wall variable => the wall misses the 3-fold
        for g in gens:
            for m in g.terms:
                if m[widx[0]] and all(e == 0 for i, e in enumerate(m) if i != widx[0]):
                    return Isomorphism(wall, f"{wall[0]}^{m[widx[0]]}")
        flip = _flip_at_point(gens, S, loc, {widx[0]: Fraction(1)}, wall,
                              point_label=f"P_{wall[0]}", one=Fraction(1))
        return flip

    if len(wall) == 2:
        return _simultaneous_flips(gens, S, loc, wall, widx)

    raise LinkError(f"wall group of size {len(wall)} is not a flip wall")


def _wall_quadratic(gens: Sequence[Polynomial], S: Ring, widx: list[int]):
    """Restriction of the generators to the wall line: one quadratic form."""
    i1, i2 = widx
    found = None
    for g in gens:
        coeffs = {}
        for m, c in g.terms.items():
            if all(e == 0 for i, e in enumerate(m) if i not in (i1, i2)) and (m[i1] or m[i2]):
                coeffs[(m[i1], m[i2])] = c
        if coeffs:
            if set(map(sum, coeffs)) != {2}:
                raise LinkError("wall-line restriction is not a single quadratic form")
            if found is not None:
                raise LinkError("several generators survive on the wall line")
            found = coeffs
    if found is None:
        raise LinkError("no quadratic form on the wall line: the line lies on the 3-fold")
    A = found.get((2, 0), Fraction(0))
    B = found.get((1, 1), Fraction(0))
    C = found.get((0, 2), Fraction(0))
    return A, B, C


def _is_square(f: Fraction) -> Fraction | None:
    if f < 0:
        return None
    num, den = f.numerator, f.denominator
    rn = _isqrt_exact(num)
    rd = _isqrt_exact(den)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


def _isqrt_exact(n: int) -> int | None:
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


def _simultaneous_flips(gens, S: Ring, loc: Ring, wall, widx) -> SimultaneousFlips:
    A, B, C = _wall_quadratic(gens, S, widx)
    disc = B * B - 4 * A * C
    if A == 0 and B == 0:
        raise LinkError("wall quadratic form has rank < 2")
    qtext = _quad_text(A, B, C, wall)

    points: list[tuple[dict[int, object], object, str]] = []
    if A == 0:
        # roots [1:0] and [-C : B]
        points.append(({widx[0]: Fraction(1), widx[1]: Fraction(0)}, Fraction(1), "P1"))
        points.append(({widx[0]: -C / B, widx[1]: Fraction(1)}, Fraction(1), "P2"))
    else:
        root = _is_square(disc)
        if disc == 0:
            raise LinkError("wall quadratic form is a perfect square (rank 1)")
        if root is not None:
            r1 = (-B + root) / (2 * A)
            r2 = (-B - root) / (2 * A)
            points.append(({widx[0]: r1, widx[1]: Fraction(1)}, Fraction(1), "P1"))
            points.append(({widx[0]: r2, widx[1]: Fraction(1)}, Fraction(1), "P2"))
        else:
            # conjugate pair: analyse over Q[w]/(w^2 - P w - Q0), mirror the result
            P, Q0 = -B / A, -C / A
            w = QuadExt(0, 1, P, Q0)
            one = QuadExt(1, 0, P, Q0)
            points.append(({widx[0]: w, widx[1]: one}, one, "P1"))

    flips = []
    for point, one, label in points:
        flips.append(_flip_at_point(gens, S, loc, point, wall, label, one))
    if len(flips) == 1:
        twin = flips[0]
        mirror = Flip(twin.wall, twin.survivors, twin.weights, twin.contracted,
                      twin.extracted, twin.hypersurface_degree, twin.eliminated, "P2")
        flips.append(mirror)
    return SimultaneousFlips(wall, (flips[0], flips[1]), qtext)


def _quad_text(A, B, C, wall) -> str:
    parts = []
    for coeff, mono in ((A, f"{wall[0]}^2"), (B, f"{wall[0]}*{wall[1]}"), (C, f"{wall[1]}^2")):
        if coeff:
            parts.append(f"{coeff}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def _flip_at_point(gens, S: Ring, loc: Ring, point: dict[int, object], wall,
                   point_label: str, one) -> Flip:
    pd = _PointData(gens, S, point, one)
    for gi, c in enumerate(pd.consts):
        if c:
            raise LinkError(
                f"generator {gi + 1} does not vanish at the wall point {point_label}"
            )
    skip = set(point)
    pivots, L = _greedy_pivots(pd, S, skip)
    surv = [n for n in _PRIORITY if S.index[n] not in pivots and S.index[n] not in skip]
    weights = {n: loc.top[loc.index[n]] for n in surv}
    ordered = sorted(surv, key=lambda n: -weights[n])
    wts = tuple(weights[n] for n in ordered)
    contracted = tuple(w for w in wts if w > 0)
    extracted = tuple(-w for w in wts if w < 0)
    if len(surv) not in (4, 5):
        raise LinkError(
            f"{len(surv)} surviving variables at {point_label}; expected a toric or "
            f"hypersurface flip"
        )
    hdeg = None
    hyp_pair = None
    if len(surv) == 5:
        t_slot = S.index["t"]
        used_rows = set(pivots.values())
        for gi in range(len(gens)):
            if gi in used_rows:
                continue
            for v in surv:
                vs = S.index[v]
                if weights[v] >= 0 or vs == t_slot:
                    continue
                corrected = _composed_quad_coeff(pd, gi, t_slot, vs, L, pivots, one)
                if corrected:
                    hdeg = bidegree(_project(gens[gi], loc)).top
                    hyp_pair = ("t", v)
                    break
            if hdeg is not None:
                break
        if hdeg is None:
            raise LinkError(f"no surviving t*(negative variable) monomial at {point_label}")
    return Flip(tuple(wall), tuple(ordered), wts, contracted, extracted, hdeg,
                tuple(S.names[i] for i in sorted(pivots)), point_label, hyp_pair)


def _raw_quad(pd: _PointData, gi: int, a: int, b: int, one):
    return pd.quads[gi].get((min(a, b), max(a, b)), one * 0)


def _project(p: Polynomial, ring: Ring) -> Polynomial:
    return Polynomial(ring, dict(p.terms), _clean=True)


# ---------------------------------------------------------------------------
# global (exact) elimination for endpoint operations

def global_eliminate(gens: Sequence[Polynomial], ring: Ring,
                     skip: Iterable[str] = (),
                     priority: Sequence[str] = _PRIORITY):
    """Repeatedly solve for variables occurring as a lone scalar linear term.

    A variable is eliminated only when its occurrences in the chosen
    equation are exactly the single monomial v (so the solve is polynomial,
    not merely local-analytic); the substitution is propagated and the scan
    restarts.  Returns (surviving generators, eliminated names, used count).
    """
    work = [g for g in gens if not g.is_zero()]
    skip = set(skip)
    eliminated: list[str] = []
    changed = True
    while changed:
        changed = False
        for name in priority:
            if name in skip or name not in ring.index or name in eliminated:
                continue
            slot = ring.index[name]
            unit = tuple(1 if i == slot else 0 for i in range(ring.nvars))
            for k, g in enumerate(work):
                c = g.terms.get(unit)
                if not c:
                    continue
                if any(m[slot] for m in g.terms if m != unit):
                    continue  # solve would not be polynomial; try another equation
                expr = Polynomial(
                    ring,
                    {m: -cf / c for m, cf in g.terms.items() if m != unit},
                    _clean=True,
                )
                work = [substitute(h, {name: expr}, ring)
                        for i, h in enumerate(work) if i != k]
                work = [h for h in work if not h.is_zero()]
                eliminated.append(name)
                changed = True
                break
            if changed:
                break
    return work, tuple(eliminated)


@dataclass
class EndpointFano:
    names: tuple[str, ...]
    weights: tuple[int, ...]
    ring: Ring
    equations: list[Polynomial]
    degrees: tuple[int, ...]
    gorenstein: bool
    codim: int
    eliminated: tuple[str, ...]
    minimal_certified: bool
    fractional_weights: bool
    notes: list[str] = field(default_factory=list)

    def identification_hints(self) -> tuple:
        return (tuple(sorted(self.weights)), tuple(sorted(self.degrees)))


def endpoint_fano(gens: Sequence[Polynomial], scroll: Scroll,
                  contraction_group: Sequence[str], contracted: str,
                  case: FanoCase, budget: int = DEFAULT_BUDGET) -> EndpointFano:
    """Contract the last divisor: set the contracted variable to 1, globally
    eliminate, and present the image Fano with its induced weights."""
    S = scroll.ring
    dhat = S.top[S.index[contraction_group[0]]]
    d4 = S.top[S.index[contracted]]
    denom = dhat - d4
    if denom <= 0:
        raise LinkError("contraction ray weight must exceed the contracted weight")

    at_one = [substitute(g, {contracted: 1}, S) for g in gens]
    work, eliminated = global_eliminate(at_one, S, skip={contracted})

    survivors = [n for n in S.names if n != contracted and n not in eliminated]
    lam: dict[str, Fraction] = {}
    fractional = False
    for n in survivors:
        i = S.index[n]
        lam[n] = Fraction(S.top[i] + d4 * S.bottom[i], denom)
        if lam[n].denominator != 1:
            fractional = True
    scale = 1
    if fractional:
        from math import lcm

        scale = lcm(*(lam[n].denominator for n in survivors))
    weights = tuple(int(lam[n] * scale) for n in survivors)
    ring_new = Ring(tuple(survivors), (weights,))
    eqs = [substitute(g, {}, ring_new) for g in work]
    eqs = [e for e in eqs if not e.is_zero()]

    codim = (len(survivors) - 1) - 3
    if codim >= 4:
        raise LinkError(f"endpoint codimension {codim} did not drop below 4")

    notes: list[str] = []
    minimal_certified = True
    if sum(len(e) for e in eqs) > 700:
        minimal_certified = False
        notes.append("minimality not certified: system too large")
    else:
        try:
            # small step cap: redundancy pruning is cosmetic, so give up
            # early on systems whose bases balloon and report instead
            eqs = _minimalize_generators(eqs, ring_new, min(budget, 2_500))
        except Exception as e:  # reported, not fatal
            minimal_certified = False
            notes.append(f"minimality not certified: {e}")
    degrees = tuple(bidegree(e).top for e in eqs)
    gorenstein = (d4 - dhat) == -1
    if fractional:
        notes.append(f"weights scaled by {scale} to clear denominators")
    return EndpointFano(
        names=tuple(survivors), weights=weights, ring=ring_new, equations=eqs,
        degrees=degrees, gorenstein=gorenstein, codim=codim,
        eliminated=eliminated, minimal_certified=minimal_certified,
        fractional_weights=fractional, notes=notes,
    )


def _minimalize_generators(eqs: list[Polynomial], ring: Ring,
                           budget: int) -> list[Polynomial]:
    """Drop generators lying in the ideal of the others (graded minimality)."""
    order = MatrixOrder.grevlex(ring)
    eqs = sorted(eqs, key=lambda e: (-bidegree(e).top, len(e)))
    out = list(eqs)
    changed = True
    while changed:
        changed = False
        for k, e in enumerate(out):
            others = out[:k] + out[k + 1:]
            if not others:
                continue
            gb = buchberger(Ideal(others, ring), order, budget)
            if normal_form(e, gb, budget=budget).is_zero():
                out.pop(k)
                changed = True
                break
    return sorted(out, key=lambda e: (bidegree(e).top, len(e)))


def dp_degree(gens: Sequence[Polynomial], scroll: Scroll, base: Sequence[str],
              case: FanoCase, seed: int = 0,
              budget: int = DEFAULT_BUDGET) -> DelPezzoFibration:
    """Degree of the general fibre over the base line, by Hilbert series."""
    S = scroll.ring
    d3 = S.top[S.index[base[0]]]
    loc = _localized_ring(scroll, d3)
    fiber = [n for n in S.names if n not in base]
    fw = {n: loc.top[loc.index[n]] for n in fiber}
    note = ""
    for attempt in range(5):
        rng_seed = mix_seed(seed, "dp_point", attempt)
        lam = Fraction(1 + rng_seed % 7)
        mu = Fraction(1 + (rng_seed // 7) % 7)
        F = Ring(tuple(fiber), (tuple(fw[n] for n in fiber),))
        subs = {base[0]: lam, base[1]: mu}
        gens_f = [substitute(g, subs, F) for g in gens]
        work, eliminated = global_eliminate(gens_f, F, priority=("s",))
        if "s" not in eliminated:
            note = "could not eliminate the unprojection variable; retrying"
            continue
        fiber2 = [n for n in fiber if n != "s"]
        F2 = Ring(tuple(fiber2), (tuple(fw[n] for n in fiber2),))
        eqs = [substitute(g, {}, F2) for g in work if not g.is_zero()]
        if any(fw[n] != 1 for n in fiber2):
            return DelPezzoFibration(tuple(base), None,
                                     "weighted fibre ambient; degree not computed")
        try:
            dim, deg = projective_dim_degree(Ideal(eqs, F2), budget)
        except NotZeroDimensional as e:
            note = f"fibre ideal degenerate at attempt {attempt}: {e}"
            continue
        if dim != 2:
            note = f"fibre dimension {dim} != 2 at attempt {attempt}; retrying"
            continue
        return DelPezzoFibration(tuple(base), deg, "")
    raise LinkError(f"no good del Pezzo fibre found in 5 seeded attempts: {note}")


def conic_discriminant(pf_gens: Sequence[Polynomial], scroll: Scroll,
                       base: Sequence[str], case: FanoCase,
                       budget: int = DEFAULT_BUDGET) -> ConicBundle:
    """Discriminant degree of the conic bundle over the plane of base variables.

    Works on the line where the last base variable vanishes: on each of its
    two affine patches the pfaffian equations reduce, after local
    eliminations, to a single conic in the three surviving fibre variables;
    the two Gram determinants meet the line in deg+deg-overlap points, which
    is the discriminant degree.
    """
    if len(base) != 3:
        return ConicBundle(tuple(base), None, [], [], 0,
                           "conic bundle over a 3-space; patch analysis done on planes only")
    S = scroll.ring
    fiber = [n for n in S.names if n not in base and n != "s"]
    dets: list[Polynomial] = []
    det_texts: list[tuple[str, str]] = []
    degrees: list[int] = []
    free_names: list[str] = []
    for patch, free in ((base[0], base[1]), (base[1], base[0])):
        P = Ring(tuple(fiber) + (free,), ((1,) * (len(fiber) + 1),))
        subs = {patch: 1, base[2]: 0}
        gens_p = [substitute(g, subs, P) for g in pf_gens]
        work, eliminated = global_eliminate(
            gens_p, P, skip={free}, priority=tuple(fiber))
        work = [g for g in work if not g.is_zero()]
        if not work:
            raise LinkError(f"no conic equation survives on patch {patch}")
        conic = None
        for cand in sorted(work, key=lambda g: (g.degree(), len(g))):
            try:
                for other in work:
                    exact_divide(other, cand)
            except Exception:
                continue
            conic = cand
            break
        if conic is None:
            raise LinkError(f"surviving equations on patch {patch} are not principal")
        surv = [n for n in fiber if n not in eliminated]
        if len(surv) != 3:
            raise LinkError(f"{len(surv)} fibre variables survive on patch {patch}")
        vi = [P.index[n] for n in surv]
        fi = P.index[free]
        for m in conic.terms:
            if sum(m[i] for i in vi) != 2:
                raise LinkError(f"patch {patch} equation is not a fibre conic")
        gram: list[list[Polynomial]] = [[None] * 3 for _ in range(3)]
        U = Ring((free,), ((1,),))
        for aa in range(3):
            for bb in range(aa, 3):
                picked = {}
                for m, c in conic.terms.items():
                    exps = [m[i] for i in vi]
                    want = [0, 0, 0]
                    want[aa] += 1
                    want[bb] += 1
                    if exps == want:
                        picked[(m[fi],)] = c
                coeff = Polynomial(U, picked, _clean=True)
                if aa == bb:
                    gram[aa][bb] = coeff
                else:
                    gram[aa][bb] = gram[bb][aa] = coeff * Fraction(1, 2)
        det = _det(gram, (0, 1, 2), (0, 1, 2), U)
        dets.append(det)
        det_texts.append((patch, str(det)))
        degrees.append(det.degree())
        free_names.append(free)

    overlap = _patch_overlap(dets[0], dets[1])
    total = degrees[0] + degrees[1] - overlap
    return ConicBundle(tuple(base), total, det_texts, degrees, overlap)


def conic_discriminant_or_note(pf_gens, scroll, base, case,
                               budget: int = DEFAULT_BUDGET) -> ConicBundle:
    """Structural fallback: a patch where the local eliminations do not leave
    a principal conic yields a ConicBundle step with a note instead of a
    discriminant degree."""
    try:
        return conic_discriminant(pf_gens, scroll, base, case, budget)
    except LinkError as e:
        return ConicBundle(tuple(base), None, [], [], 0, f"discriminant not computed: {e}")


def _patch_overlap(f: Polynomial, g: Polynomial) -> int:
    """Common roots (with multiplicity) of two patch determinants away from
    the coordinate points, seen in the first patch's coordinate."""
    if f.is_zero() or g.is_zero():
        raise LinkError("vanishing patch determinant; discriminant undefined")
    U = f.ring
    dg = g.degree()
    reversed_terms = {(dg - m[0],): c for m, c in g.terms.items()}
    g_rev = Polynomial(U, reversed_terms, _clean=True)
    order = MatrixOrder.grevlex(U, weights=(1,))
    gb = buchberger(Ideal([f, g_rev], U), order)
    assert len(gb.elements) == 1
    h = gb.elements[0]
    deg = h.degree()
    val = min(m[0] for m in h.terms)
    return deg - val


# ---------------------------------------------------------------------------
# basket tracking

def _flip_basket_moves(flip: Flip):
    """(removed, added) singularity lists for one flip.

    At a singular coordinate point of the flipped locus the local transverse
    weights are the other survivors' localised weights; for a hypersurface
    flip the variable paired with the point in the cutting equation is
    locally eliminated there first.
    """
    removed = []
    added = []
    wts = dict(zip(flip.survivors, flip.weights))
    for u in flip.survivors:
        w = wts[u]
        if abs(w) <= 1:
            continue
        others = [v for v in flip.survivors if v != u]
        if flip.hyp_pair is not None and u in flip.hyp_pair:
            drop = flip.hyp_pair[0] if flip.hyp_pair[1] == u else flip.hyp_pair[1]
            others = [v for v in others if v != drop]
        if len(others) != 3:
            raise LinkError(f"cannot read 3 local weights at P_{u} of flip {flip.wall}")
        local = [wts[v] for v in others]
        entry = (abs(w), local)
        if w > 0:
            removed.append(entry)
        else:
            added.append(entry)
    return removed, added


def track_basket(steps: Sequence[LinkStep], case: FanoCase,
                 strict: bool = True) -> tuple[list[Basket], list]:
    """Basket after each step.

    A removal target missing from the current basket signals an inconsistent
    trace and raises in strict mode; with strict=False it is recorded in the
    returned missing list instead (used when assembling new case data).
    """
    basket = case.basket.copy()
    out = [basket.copy()]
    missing: list = []
    a, b, c = case.abc

    def take(r, local):
        try:
            basket.remove(r, local)
        except LinkError:
            if strict:
                raise
            missing.append(Basket.normal(r, local))

    for step in steps:
        if isinstance(step, KawamataBlowup):
            take(case.r, (a, b, c))
            for w, others in ((a, (b, c)), (b, (a, c)), (c, (a, b))):
                if w > 1:
                    basket.add(w, (others[0], others[1], -case.r))
        elif isinstance(step, (Flop, Isomorphism)):
            pass
        elif isinstance(step, Flip):
            removed, added = _flip_basket_moves(step)
            for r, local in removed:
                take(r, local)
            for r, local in added:
                basket.add(r, local)
        elif isinstance(step, SimultaneousFlips):
            for flip in step.flips:
                removed, added = _flip_basket_moves(flip)
                for r, local in removed:
                    take(r, local)
                for r, local in added:
                    basket.add(r, local)
        elif isinstance(step, DivisorialContractionToFano):
            pass  # Gorenstein point contraction; singular survivors are flagged upstream
        out.append(basket.copy())
    return out, missing


# ---------------------------------------------------------------------------
# Picard rank

@dataclass
class PicardReport:
    determined: bool
    rho: int | None
    chain: list[str]


def picard_report(case: FanoCase, trace: "LinkTrace",
                  endpoint_quasismooth: bool) -> PicardReport:
    """rho_X = 1 exactly when the link ends in a divisorial contraction to a
    quasi-smooth Fano of codimension <= 3 (flag supplied, not computed)."""
    last = trace.steps[-1] if trace.steps else None
    if not isinstance(last, DivisorialContractionToFano):
        return PicardReport(False, None, ["link does not end in a divisorial contraction"])
    ep = last.endpoint
    if ep.codim > 3:
        return PicardReport(False, None, [f"endpoint codimension {ep.codim} > 3"])
    if not endpoint_quasismooth:
        return PicardReport(False, None, ["endpoint quasi-smoothness not asserted"])
    chain = [
        f"endpoint X' is Fano of codimension {ep.codim} <= 3",
        "X' quasi-smooth (input flag) and Q-factorial, so rho(X') = 1",
        "the link is an isomorphism in codimension 1 apart from one divisor "
        "extracted and one contracted, so rho(X) = rho(X') = 1",
    ]
    return PicardReport(True, 1, chain)


# ---------------------------------------------------------------------------
# full trace

@dataclass
class LinkTrace:
    case: FanoCase
    seed: int
    tag: str
    config: WeightConfig
    steps: list
    baskets: list[Basket]
    flop: FlopData | None
    blowup: BlowupData
    unprojection: UnprojectionResult
    template_ok: bool
    template_notes: list[str]

    @property
    def endpoint(self):
        return self.steps[-1]


def normalized_weight_matrix(case: FanoCase) -> WeightMatrix5:
    from .pfaffian import PAIRS
    from .unprojection import tom_normalising_permutation

    perm = tom_normalising_permutation(case.tom_k)
    return WeightMatrix5({(i, j): case.matrix_weights[(perm[i], perm[j])]
                          for (i, j) in PAIRS})


COMPLEMENTARY_PAIRS = (((2, 3), (4, 5)), ((2, 4), (3, 5)), ((2, 5), (3, 4)))


def wall_skip_expected(weights: WeightMatrix5, wall_weight: int) -> bool:
    """A single-variable wall is skipped when the quadratic pfaffian can carry
    a pure square of the wall variable: some complementary pair of ideal
    entries has both weights equal to the wall weight.  (Configuration (b)
    with pi equal to that weight is the typical source.)"""
    return any(weights[p] == wall_weight and weights[q] == wall_weight
               for p, q in COMPLEMENTARY_PAIRS)


def expected_middle_kinds(groups: list[list[str]], middle: list[list[str]],
                          norm_weights: WeightMatrix5, d: Sequence[int]) -> list[str]:
    out = []
    weight_of = dict(zip(Y_NAMES, d))
    for wall in middle:
        if len(wall) == 2:
            out.append("SimultaneousFlips")
        elif wall_skip_expected(norm_weights, weight_of[wall[0]]):
            out.append("Isomorphism")
        else:
            out.append("Flip")
    return out


ENDPOINT_KIND = {
    "i": ("DivisorialContractionToFano", (2, 0)),
    "ii": ("DivisorialContractionToFano", (2, 1)),
    "iii": ("DivisorialContractionToFano", (2, 0)),
    "iv": ("DelPezzoFibration", None),
    "v": ("DelPezzoFibration", None),
    "vi": ("ConicBundle", None),
    "vii": ("DivisorialContractionToFano", (2, 1)),
    "viii": ("ConicBundle", None),
}


def trace_link(case: FanoCase, seed: int = 0, budget: int = DEFAULT_BUDGET,
               count_nodes: bool | None = None, strict_basket: bool = True) -> LinkTrace:
    """Run the full birational link for one case."""
    M = case.build_matrix(seed)
    fmt = TomFormat(case.tom_k)
    res = build_unprojection(M, fmt, case.r)
    scroll = kawamata_scroll(case)
    blow = blowup_ideal(res, scroll, case)
    tag = classify_case(case.d)
    config = detect_weight_config(normalized_weight_matrix(case), case.d)

    steps: list = [KawamataBlowup((case.r, case.abc))]
    flop_data = None
    if count_nodes is None:
        count_nodes = case.abc == (1, 1, 1)
    if count_nodes:
        flop_data = count_flops(res, case, budget)
        steps.append(Flop(flop_data.count, case.declared_nodes))
    else:
        steps.append(Flop(case.declared_nodes, case.declared_nodes))

    groups = wall_groups(case.d)
    divisorial = len(groups[-1]) == 1
    middle = groups[:-2] if divisorial else groups[:-1]
    for wall in middle:
        steps.append(analyze_wall(blow.generators, scroll, wall, case))

    if divisorial:
        kind = (2, 0) if len(groups[-2]) == 1 else (2, 1)
        ep = endpoint_fano(blow.generators, scroll, groups[-2], groups[-1][0],
                           case, budget)
        steps.append(DivisorialContractionToFano(kind, tuple(groups[-2]), ep))
    elif len(groups[-1]) == 2:
        steps.append(dp_degree(blow.generators, scroll, groups[-1], case, seed, budget))
    else:
        pf_part = blow.generators[:5]
        steps.append(conic_discriminant_or_note(pf_part, scroll, groups[-1], case, budget))

    baskets, missing = track_basket(steps, case, strict=strict_basket)

    notes: list[str] = []
    if missing:
        notes.append(f"basket removals missing from input data: {missing}")
    expected = expected_middle_kinds(groups, middle, normalized_weight_matrix(case), case.d)
    ok = True
    for want, got, wall in zip(expected, steps[2:], middle):
        kind = type(got).__name__
        if kind != want:
            ok = False
            notes.append(f"wall {wall}: expected {want}, computed {kind}")
    want_kind, want_type = ENDPOINT_KIND[tag]
    last = steps[-1]
    if type(last).__name__ != want_kind:
        ok = False
        notes.append(f"endpoint: expected {want_kind}, computed {type(last).__name__}")
    elif want_type is not None and last.kind != want_type:
        ok = False
        notes.append(f"endpoint type {last.kind} != expected {want_type}")
    if flop_data is not None and case.declared_nodes is not None \
            and flop_data.count != case.declared_nodes:
        notes.append(f"computed {flop_data.count} nodes, declared {case.declared_nodes}")
    if missing:
        ok = False

    return LinkTrace(case, seed, tag, config, steps, baskets, flop_data, blow,
                     res, ok, notes)


def verify_blowup_saturation(blow: BlowupData, budget: int = DEFAULT_BUDGET) -> bool:
    """Oracle: the divided generators span the t-saturation of the pull-back."""
    from .groebner import saturate

    ring = blow.pullback_ideal.ring
    sat = saturate(blow.pullback_ideal, "t", budget)
    order = MatrixOrder.grevlex(ring, weights=(1,) * ring.nvars)
    gb_h = buchberger(Ideal(list(blow.generators), ring), order, budget)
    ok = all(normal_form(g, gb_h, budget=budget).is_zero() for g in sat.generators)
    if not ok:
        return False
    gb_sat = buchberger(Ideal(sat.generators, ring), order, budget)
    return all(normal_form(h, gb_sat, budget=budget).is_zero() for h in blow.generators)
