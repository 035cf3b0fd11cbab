"""Type I unprojection of a Tom matrix: the four equations s*y_j = g_j.

Given a Tom_k matrix M over P^6(a,b,c,d1..d4), the construction (after
relabelling so the unconstrained row is row 1):

  * decompose each constrained entry as sum_j alpha_j * y_j,
  * form N_j by replacing constrained entries with their alpha_j,
  * Q[i][j] = i-th linear pfaffian of N_j, so that Q . y = (linear pfaffians),
  * H_i = i-th row of the cofactor matrix of Q,
  * g = H_i / p_i for any i with p_i != 0 (the quotient is independent of i).

The codimension-4 ideal is then spanned by the five pfaffians together with
s*y_j - g_j in the ring extended by the unprojection variable s.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import (
    AlgebraError,
    Mono,
    NotDivisible,
    Polynomial,
    Ring,
    bidegree,
    exact_divide,
    substitute,
)
from .groebner import GroebnerBasis, Ideal, MatrixOrder, buchberger, normal_form
from .pfaffian import (
    PfaffianError,
    SkewMatrix5,
    TomFormat,
    WeightMatrix5,
    check_tom,
    constrained_pairs,
    maximal_pfaffians,
)


class UnprojectionError(AlgebraError):
    pass


@dataclass
class EntryDecomposition:
    """alpha[(k, l)][j] with a_{k,l} = sum_j alpha_j * y_{j+1} for constrained entries."""

    alpha: dict[tuple[int, int], list[Polynomial]]
    fmt: TomFormat


def decompose_entries(M: SkewMatrix5, fmt: TomFormat) -> EntryDecomposition:
    """Greedy decomposition: y1-divisible terms feed alpha_1, then y2, y3, y4."""
    if not check_tom(M, fmt):
        raise UnprojectionError(f"matrix is not in Tom_{fmt.k} format")
    ring = M.ring
    yidx = [ring.index[v] for v in fmt.ideal_vars]
    alpha: dict[tuple[int, int], list[Polynomial]] = {}
    for (k, l) in constrained_pairs(fmt):
        entry = M.entries[(k, l)]
        parts: list[dict] = [dict() for _ in fmt.ideal_vars]
        for mono, c in entry.terms.items():
            for slot, i in enumerate(yidx):
                if mono[i]:
                    reduced = tuple(e - 1 if p == i else e for p, e in enumerate(mono))
                    parts[slot][reduced] = c
                    break
            else:
                raise UnprojectionError(
                    f"constrained entry {(k, l)} has a term with no y factor"
                )
        alpha[(k, l)] = [Polynomial(ring, p, _clean=True) for p in parts]
    # recombination must reproduce each entry exactly
    for (k, l), parts in alpha.items():
        total = ring.zero()
        for slot, v in enumerate(fmt.ideal_vars):
            total = total + parts[slot] * ring.gen(v)
        if total != M.entries[(k, l)]:
            raise UnprojectionError(f"decomposition failed to recombine entry {(k, l)}")
    return EntryDecomposition(alpha, fmt)


@dataclass
class UnprojectionResult:
    N: list[SkewMatrix5]          # N_1..N_4, Tom-normalised ordering
    Q: list[list[Polynomial]]     # 4x4, Q . (y1..y4)^T = linear pfaffians
    H: list[list[Polynomial]]     # H_i = i-th cofactor row of Q
    g: list[Polynomial]           # right-hand sides of s*y_j = g_j
    p: list[Polynomial]           # unconstrained row entries of the normalised matrix
    pfaffians: list[Polynomial]   # the five pfaffians of the input matrix
    X_ideal: Ideal                # 9 generators in the ring extended by s
    ring_x: Ring                  # ambient of X (with s)
    s_weight: int
    permutation: dict[int, int]   # Tom-normalising row/column relabelling


def _pfaffian_linear_rows(Mn: SkewMatrix5) -> list[Polynomial]:
    """Pfaffians 2..5 of the Tom_1-normalised matrix (the y-linear ones)."""
    return maximal_pfaffians(Mn)[1:]


def _cofactor_row(Q: list[list[Polynomial]], i: int, ring: Ring) -> list[Polynomial]:
    """(H_i)_j = (-1)^(i+j) det(Q with row i and column j removed); 1-based i, j."""
    out = []
    rows = [r for r in range(4) if r != i - 1]
    for j in range(1, 5):
        cols = [c for c in range(4) if c != j - 1]
        det = _det3([[Q[r][c] for c in cols] for r in rows], ring)
        out.append(det if (i + j) % 2 == 0 else -det)
    return out


def _det3(m: list[list[Polynomial]], ring: Ring) -> Polynomial:
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def tom_normalising_permutation(k: int) -> dict[int, int]:
    """Relabelling that moves row/column k to slot 1, keeping the rest in order."""
    order = [k] + [i for i in range(1, 6) if i != k]
    return {new: old for new, old in enumerate(order, start=1)}


def extend_ring_by_s(ring: Ring, s_weight: int) -> Ring:
    if "s" in ring.index:
        raise UnprojectionError("ambient ring already has an s variable")
    return Ring(ring.names + ("s",), (ring.top + (s_weight,),))


def build_unprojection(M: SkewMatrix5, fmt: TomFormat, s_weight: int) -> UnprojectionResult:
    """Run the unprojection construction and assemble the 9-equation ideal."""
    ring = M.ring
    perm = tom_normalising_permutation(fmt.k)
    Mn = M.permuted(perm) if fmt.k != 1 else M
    fmt1 = TomFormat(1, fmt.ideal_vars)
    dec = decompose_entries(Mn, fmt1)

    p = [Mn.entries[(1, j)] for j in range(2, 6)]
    if all(pi.is_zero() for pi in p):
        raise UnprojectionError("all p_i vanish; unprojection undefined")

    N: list[SkewMatrix5] = []
    for slot in range(4):
        entries = {(1, j): p[j - 2] for j in range(2, 6)}
        wts = {(1, j): Mn.weights[(1, j)] for j in range(2, 6)}
        for (k, l) in constrained_pairs(fmt1):
            entries[(k, l)] = dec.alpha[(k, l)][slot]
            d_slot = bidegree(ring.gen(fmt.ideal_vars[slot])).top
            wts[(k, l)] = Mn.weights[(k, l)] - d_slot
        N.append(SkewMatrix5(entries, WeightMatrix5(wts), ring))

    Q = [[None] * 4 for _ in range(4)]
    for j in range(4):
        lin = _pfaffian_linear_rows(N[j])
        for i in range(4):
            Q[i][j] = lin[i]

    # consistency: Q . y reproduces the linear pfaffians of Mn
    lin_pf = _pfaffian_linear_rows(Mn)
    ygens = [ring.gen(v) for v in fmt.ideal_vars]
    for i in range(4):
        recomb = ring.zero()
        for j in range(4):
            recomb = recomb + Q[i][j] * ygens[j]
        if recomb != lin_pf[i]:
            raise UnprojectionError(f"Q row {i + 1} does not recombine its pfaffian")

    H = [_cofactor_row(Q, i, ring) for i in range(1, 5)]

    g: list[Polynomial] | None = None
    for i in range(4):
        if p[i].is_zero():
            continue
        try:
            cand = [exact_divide(H[i][j], p[i]) for j in range(4)]
        except NotDivisible as e:
            raise UnprojectionError(f"H_{i + 1}/p_{i + 1} is not exact: {e}")
        if g is None:
            g = cand
        elif cand != g:
            raise UnprojectionError("H_i/p_i differs across rows")
    assert g is not None

    ring_x = extend_ring_by_s(ring, s_weight)
    into_x = {nm: ring_x.gen(nm) for nm in ring.names}
    s = ring_x.gen("s")
    pf_orig = maximal_pfaffians(M)
    gens = [substitute(q, into_x, ring_x) for q in pf_orig]
    for j, v in enumerate(fmt.ideal_vars):
        gens.append(s * ring_x.gen(v) - substitute(g[j], into_x, ring_x))
    return UnprojectionResult(
        N=N, Q=Q, H=H, g=g, p=p, pfaffians=pf_orig,
        X_ideal=Ideal(gens, ring_x), ring_x=ring_x,
        s_weight=s_weight, permutation=perm,
    )


@dataclass
class VerificationReport:
    degrees_ok: bool
    degree_detail: list[tuple[int, int]]        # (expected, actual) per g_j
    ph_identity_ok: bool                        # p_i H_j == p_j H_i
    consistency_ok: bool                        # y_i g_j - y_j g_i in (Pf)
    consistency_detail: list[tuple[int, int, bool]]
    eliminant_contains_pfaffians: bool | None   # s-eliminant check, optional

    def ok(self) -> bool:
        checks = [self.degrees_ok, self.ph_identity_ok, self.consistency_ok]
        if self.eliminant_contains_pfaffians is not None:
            checks.append(self.eliminant_contains_pfaffians)
        return all(checks)


def pfaffian_membership(target: Polynomial, pfaffians: Sequence[Polynomial],
                        gb_cache: dict | None = None, budget: int = 10**6) -> bool:
    """Is target in the pfaffian ideal?  Tries plain division first (sound),
    falling back to a reduced Groebner basis when division is inconclusive."""
    if normal_form(target, list(pfaffians), budget=budget).is_zero():
        return True
    ring = pfaffians[0].ring
    key = id(gb_cache) if gb_cache is None else "gb"
    if gb_cache is not None and key in gb_cache:
        gb = gb_cache[key]
    else:
        gb = buchberger(Ideal(list(pfaffians), ring), MatrixOrder.grevlex(ring), budget)
        if gb_cache is not None:
            gb_cache[key] = gb
    return normal_form(target, gb, budget=budget).is_zero()


def verify_unprojection(res: UnprojectionResult, d_weights: Sequence[int],
                        check_eliminant: bool = False,
                        budget: int = 10**6) -> VerificationReport:
    """Certify the defining identities of the unprojection output."""
    ring = res.pfaffians[0].ring
    fmt_vars = ("y1", "y2", "y3", "y4")

    degree_detail = []
    degrees_ok = True
    for j in range(4):
        expected = res.s_weight + d_weights[j]
        actual = bidegree(res.g[j]).top if not res.g[j].is_zero() else expected
        degree_detail.append((expected, actual))
        degrees_ok = degrees_ok and expected == actual

    ph_ok = True
    for i in range(4):
        for j in range(i + 1, 4):
            for c in range(4):
                if res.p[i] * res.H[j][c] != res.p[j] * res.H[i][c]:
                    ph_ok = False

    # the pfaffians used here are those of the normalised matrix, which span
    # the same ideal as the input's
    gb_cache: dict = {}
    consistency = []
    cons_ok = True
    ygens = [ring.gen(v) for v in fmt_vars]
    for i in range(4):
        for j in range(i + 1, 4):
            target = ygens[i] * res.g[j] - ygens[j] * res.g[i]
            good = pfaffian_membership(target, res.pfaffians, gb_cache, budget)
            consistency.append((i + 1, j + 1, good))
            cons_ok = cons_ok and good

    elim_ok = None
    if check_eliminant:
        from .groebner import eliminate

        el = eliminate(res.X_ideal, ["s"], budget)
        gb = buchberger(el, MatrixOrder.grevlex(res.ring_x), budget) if el.generators else None
        elim_ok = gb is not None and all(
            normal_form(substitute(pf, {nm: res.ring_x.gen(nm) for nm in ring.names}, res.ring_x), gb).is_zero()
            for pf in res.pfaffians
        )

    return VerificationReport(degrees_ok, degree_detail, ph_ok, cons_ok, consistency, elim_ok)
