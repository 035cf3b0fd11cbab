"""Graded 5x5 skew-symmetric matrices and their five maximal pfaffians.

A matrix is stored by its ten upper-triangle entries, indexed by pairs
(i, j) with 1 <= i < j <= 5.  The weight data carries the same shape and
must satisfy pfaffian homogeneity: m[i,j] + m[k,l] depends only on the set
{i, j, k, l}, so every maximal pfaffian is homogeneous.

Tom_k format: every entry off row/column k lies in the ideal spanned by the
y variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .algebra import (
    AlgebraError,
    Mono,
    Polynomial,
    Ring,
    bidegree,
    mix_seed,
    monomials_of_degree,
    random_general,
)

PAIRS = tuple((i, j) for i in range(1, 6) for j in range(i + 1, 6))

IDEAL_VARS = ("y1", "y2", "y3", "y4")


class PfaffianError(AlgebraError):
    pass


@dataclass(frozen=True)
class WeightMatrix5:
    """Upper-triangle integer weights m[i,j] with pfaffian homogeneity."""

    m: Mapping[tuple[int, int], int]

    def __post_init__(self):
        entries = dict(self.m)
        if set(entries) != set(PAIRS):
            raise PfaffianError("weight matrix needs exactly the 10 upper-triangle slots")
        object.__setattr__(self, "m", entries)
        for k in range(1, 6):
            degs = {
                entries[_pair(i, j)] + entries[_pair(a, b)]
                for (i, j), (a, b) in _complement_pairs(k)
            }
            if len(degs) > 1:
                raise PfaffianError(
                    f"pfaffian {k} would be inhomogeneous: partial degrees {sorted(degs)}"
                )

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.m[_pair(*ij)]

    def pfaffian_degree(self, k: int) -> int:
        (i, j), (a, b) = next(iter(_complement_pairs(k)))
        return self.m[_pair(i, j)] + self.m[_pair(a, b)]

    @classmethod
    def from_list(cls, values: Iterable[int]) -> "WeightMatrix5":
        vals = list(values)
        if len(vals) != 10:
            raise PfaffianError("expected 10 weights, row by row")
        return cls(dict(zip(PAIRS, (int(v) for v in vals))))

    def as_list(self) -> list[int]:
        return [self.m[p] for p in PAIRS]


def _pair(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


def _complement_pairs(k: int):
    """The three 2+2 splittings of {1..5} minus {k}."""
    rest = [i for i in range(1, 6) if i != k]
    a, b, c, d = rest
    return (((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c)))


@dataclass(frozen=True)
class TomFormat:
    k: int
    ideal_vars: tuple[str, ...] = IDEAL_VARS

    def __post_init__(self):
        if not 1 <= self.k <= 5:
            raise PfaffianError("Tom index out of range 1..5")


class SkewMatrix5:
    """Graded skew 5x5 matrix over a ring, held as its upper triangle."""

    __slots__ = ("entries", "weights", "ring")

    def __init__(self, entries: Mapping[tuple[int, int], Polynomial],
                 weights: WeightMatrix5, ring: Ring):
        table = {}
        for (i, j), p in entries.items():
            table[_pair(i, j)] = p
        for p_ij in PAIRS:
            if p_ij not in table:
                raise PfaffianError(f"missing entry {p_ij}")
        for p_ij, p in table.items():
            if p.ring != ring:
                raise PfaffianError(f"entry {p_ij} lives in the wrong ring")
            if not p.is_zero() and bidegree(p).top != weights[p_ij]:
                raise PfaffianError(
                    f"entry {p_ij} has degree {bidegree(p).top}, declared {weights[p_ij]}"
                )
        self.entries = table
        self.weights = weights
        self.ring = ring

    def __getitem__(self, ij: tuple[int, int]) -> Polynomial:
        i, j = ij
        if i == j:
            return self.ring.zero()
        p = self.entries[_pair(i, j)]
        return p if i < j else -p

    def permuted(self, perm: Mapping[int, int]) -> "SkewMatrix5":
        """Conjugate by a row/column permutation (entry (i,j) <- old (perm[i], perm[j]))."""
        new_entries = {}
        new_weights = {}
        for (i, j) in PAIRS:
            a, b = perm[i], perm[j]
            p = self[(a, b)]
            new_entries[(i, j)] = p
            new_weights[(i, j)] = self.weights[_pair(a, b)]
        return SkewMatrix5(new_entries, WeightMatrix5(new_weights), self.ring)


def _pf4(m: Mapping[tuple[int, int], Polynomial], idx: tuple[int, int, int, int]) -> Polynomial:
    a, b, c, d = idx
    return m[_pair(a, b)] * m[_pair(c, d)] - m[_pair(a, c)] * m[_pair(b, d)] \
        + m[_pair(a, d)] * m[_pair(b, c)]


def maximal_pfaffians(M: SkewMatrix5) -> list[Polynomial]:
    """The five signed 4x4 pfaffians: Pf_i = (-1)^(i+1) pf(M with row/col i deleted).

    The signs are fixed so that M . (Pf_1..Pf_5)^T = 0 identically.
    """
    table = {p: M.entries[p] for p in PAIRS}
    out = []
    for i in range(1, 6):
        idx = tuple(k for k in range(1, 6) if k != i)
        pf = _pf4(table, idx)
        out.append(pf if i % 2 == 1 else -pf)
    return out


def is_ideal_element(p: Polynomial, ideal_indices: tuple[int, ...]) -> bool:
    """True iff every term is divisible by one of the ideal variables."""
    return all(any(m[i] for i in ideal_indices) for m in p.terms)


def _ideal_indices(ring: Ring, fmt: TomFormat) -> tuple[int, ...]:
    try:
        return tuple(ring.index[v] for v in fmt.ideal_vars)
    except KeyError as e:
        raise PfaffianError(f"ring lacks ideal variable {e}")


def constrained_pairs(fmt: TomFormat) -> list[tuple[int, int]]:
    return [(i, j) for (i, j) in PAIRS if i != fmt.k and j != fmt.k]


def check_tom(M: SkewMatrix5, fmt: TomFormat) -> bool:
    """True iff all six entries avoiding row/column k lie in (y1..y4)."""
    idx = _ideal_indices(M.ring, fmt)
    return all(is_ideal_element(M.entries[p], idx) for p in constrained_pairs(fmt))


@dataclass
class QuasilinearityReport:
    """Where ideal and orbinate variables appear with scalar coefficient."""

    y_linear: dict[str, list[tuple[int, int]]]
    x_linear: dict[str, list[tuple[int, int]]]
    ideal_linear_count: int
    violates_bound: bool  # fewer than three constrained entries carry a linear y

    def ok(self) -> bool:
        return not self.violates_bound


def check_quasilinearity(M: SkewMatrix5, fmt: TomFormat) -> QuasilinearityReport:
    """Locate linear variable occurrences of the kind a general Tom member shows."""
    ring = M.ring
    y_linear: dict[str, list[tuple[int, int]]] = {v: [] for v in fmt.ideal_vars}
    x_names = [n for n in ring.names if n.startswith("x")]
    x_linear: dict[str, list[tuple[int, int]]] = {v: [] for v in x_names}

    def var_mono(name: str) -> Mono:
        i = ring.index[name]
        return tuple(1 if j == i else 0 for j in range(ring.nvars))

    constrained = set(constrained_pairs(fmt))
    for p_ij in PAIRS:
        entry = M.entries[p_ij]
        for v in fmt.ideal_vars:
            if p_ij in constrained and entry.coefficient(var_mono(v)) != 0:
                y_linear[v].append(p_ij)
        for v in x_names:
            if entry.coefficient(var_mono(v)) != 0:
                x_linear[v].append(p_ij)
    count = sum(len(v) for v in y_linear.values())
    return QuasilinearityReport(y_linear, x_linear, count, count < 3)


def build_general_tom(weights: WeightMatrix5, fmt: TomFormat, ambient: Ring,
                      seed: int) -> SkewMatrix5:
    """Seeded general Tom matrix: constrained entries are general elements of
    (y1..y4) in their degree, the rest general forms; deterministic per seed.
    """
    idx = _ideal_indices(ambient, fmt)
    entries = {}
    for (i, j) in PAIRS:
        d = weights[(i, j)]
        constrained = i != fmt.k and j != fmt.k
        entry_seed = mix_seed(seed, "tom_entry", i, j)
        if constrained:
            entries[(i, j)] = random_general(
                d, ambient, constraint=lambda m: any(m[k] for k in idx), seed=entry_seed
            )
        else:
            entries[(i, j)] = random_general(d, ambient, seed=entry_seed)
    return SkewMatrix5(entries, weights, ambient)
