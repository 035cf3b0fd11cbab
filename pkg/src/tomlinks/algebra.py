"""Exact sparse multivariate polynomial arithmetic over Q with weighted gradings.

A monomial is a tuple of non-negative integer exponents, one slot per ring
variable.  A polynomial is a map from monomials to nonzero Fractions; the
zero polynomial has an empty term map.  Rings carry one or two integer
weight rows ("top" and optional "bottom"), so a polynomial can be graded
either by a single weighted degree or by a bidegree.

Everything here is immutable after construction and all operations are pure,
so values can be shared freely.
"""

from __future__ import annotations

import hashlib
import itertools
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

Mono = tuple  # tuple[int, ...], one exponent per ring variable


class AlgebraError(Exception):
    pass


class RingMismatch(AlgebraError):
    pass


class ParseError(AlgebraError):
    pass


class NotHomogeneous(AlgebraError):
    pass


class NotDivisible(AlgebraError):
    """Multivariate division left a nonzero remainder."""


@dataclass(frozen=True)
class BiDegree:
    top: int
    bottom: int | None = None

    def __add__(self, other: "BiDegree") -> "BiDegree":
        if (self.bottom is None) != (other.bottom is None):
            raise AlgebraError("cannot add degrees of different rank")
        if self.bottom is None:
            return BiDegree(self.top + other.top)
        return BiDegree(self.top + other.top, self.bottom + other.bottom)

    def __iter__(self):
        yield self.top
        if self.bottom is not None:
            yield self.bottom


class Ring:
    """Ordered variable names plus one or two integer weight rows."""

    __slots__ = ("names", "weights", "index", "_display")

    def __init__(self, names: Sequence[str], weights: Sequence[Sequence[int]]):
        names = tuple(names)
        rows = tuple(tuple(int(w) for w in row) for row in weights)
        if not rows or len(rows) > 2:
            raise AlgebraError("a ring carries 1 or 2 weight rows")
        for row in rows:
            if len(row) != len(names):
                raise AlgebraError("weight row length != variable count")
        if len(set(names)) != len(names):
            raise AlgebraError("duplicate variable names")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "weights", rows)
        object.__setattr__(self, "index", {n: i for i, n in enumerate(names)})
        object.__setattr__(self, "_display", None)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Ring is immutable")

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def rank(self) -> int:
        return len(self.weights)

    @property
    def top(self) -> tuple:
        return self.weights[0]

    @property
    def bottom(self) -> tuple:
        if self.rank != 2:
            raise AlgebraError("ring has no bottom weight row")
        return self.weights[1]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Ring)
            and self.names == other.names
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.names, self.weights))

    def __repr__(self):
        return f"Ring({list(self.names)}, {[list(r) for r in self.weights]})"

    def gen(self, name: str) -> "Polynomial":
        i = self.index[name]
        mono = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {mono: Fraction(1)})

    def gens(self) -> list["Polynomial"]:
        return [self.gen(n) for n in self.names]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.nvars: c})

    def monomial(self, mono: Mono, coeff=1) -> "Polynomial":
        c = Fraction(coeff)
        if c == 0:
            return Polynomial(self, {})
        return Polynomial(self, {tuple(mono): c})

    def mono_degree(self, mono: Mono, row: int = 0) -> int:
        w = self.weights[row]
        return sum(w[i] * e for i, e in enumerate(mono) if e)

    def display_key(self, mono: Mono):
        # graded reverse lex on the top weight row; fixed choice for printing
        return (self.mono_degree(mono), tuple(-e for e in reversed(mono)))


class MatrixOrder:
    """Monomial order given by stacked integer weight rows.

    Monomials are compared by the lexicographic value of their weighted
    degrees under `rows`; remaining ties are broken by plain lex on the
    exponents read in `lex_tail` order (default: ring variable order), which
    makes the comparison total whatever the rows are.
    """

    __slots__ = ("ring", "rows", "lex_tail")

    def __init__(self, ring: Ring, rows: Sequence[Sequence[int]], lex_tail: Sequence[int] | None = None):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "rows", tuple(tuple(int(w) for w in r) for r in rows))
        for r in self.rows:
            if len(r) != ring.nvars:
                raise AlgebraError("order row length != variable count")
        tail = tuple(lex_tail) if lex_tail is not None else tuple(range(ring.nvars))
        object.__setattr__(self, "lex_tail", tail)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("MatrixOrder is immutable")

    def key(self, mono: Mono):
        vals = tuple(sum(r[i] * e for i, e in enumerate(mono) if e) for r in self.rows)
        return vals + tuple(mono[i] for i in self.lex_tail)

    @classmethod
    def grevlex(cls, ring: Ring, weights: Sequence[int] | None = None) -> "MatrixOrder":
        """Weighted graded reverse lexicographic order (top row by default).

        A weight row with non-positive entries would not give a well-order,
        so it falls back to total degree.
        """
        w = tuple(weights) if weights is not None else ring.top
        if any(x <= 0 for x in w):
            w = (1,) * ring.nvars
        n = ring.nvars
        rows = [w]
        for i in range(n - 1, 0, -1):
            rows.append(tuple(-1 if j == i else 0 for j in range(n)))
        return cls(ring, rows)

    @classmethod
    def block(cls, ring: Ring, first: Iterable[str], weights: Sequence[int] | None = None) -> "MatrixOrder":
        """Elimination order: monomials involving `first` variables dominate."""
        idx = {ring.index[n] for n in first}
        head = tuple(1 if i in idx else 0 for i in range(ring.nvars))
        return cls(ring, (head,) + cls.grevlex(ring, weights).rows)


class Polynomial:
    """Sparse polynomial: map from exponent tuples to nonzero Fractions."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Mapping[Mono, Fraction], *, _clean: bool = False):
        object.__setattr__(self, "ring", ring)
        if _clean:
            object.__setattr__(self, "terms", dict(terms))
        else:
            object.__setattr__(
                self, "terms", {m: Fraction(c) for m, c in terms.items() if c != 0}
            )

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Polynomial is immutable")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatch("polynomials live in different rings")

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __add__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out, _clean=True)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return self.ring.zero()
            return Polynomial(
                self.ring, {m: co * c for m, co in self.terms.items()}, _clean=True
            )
        self._check(other)
        out: dict = {}
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(e1 + e2 for e1, e2 in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial(self.ring, out, _clean=True)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise AlgebraError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def coefficient(self, mono: Mono) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def max_degree_in(self, var: str) -> int:
        i = self.ring.index[var]
        return max((m[i] for m in self.terms), default=0)

    def degree(self, row: int = 0) -> int:
        """Max weighted degree of the terms (0 for the zero polynomial)."""
        return max((self.ring.mono_degree(m, row) for m in self.terms), default=0)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"<{format_polynomial(self)}>"


# ---------------------------------------------------------------------------
# parsing and printing

_TOKEN = re.compile(r"\s*(\d+(?:/\d+)?|[A-Za-z][A-Za-z0-9_]*|\^|\*|\+|-)")


def parse(text: str, ring: Ring) -> Polynomial:
    """Parse a +/- separated sum of integer- or rational-coefficient monomial words.

    Products are written with `*` or by juxtaposition, powers with `^`.
    Underscores in variable names are ignored, so `x_2` reads as `x2`.
    """
    pos = 0
    tokens: list[str] = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos+10]!r}")
        tokens.append(m.group(1))
        pos = m.end()

    n = ring.nvars
    terms: dict = {}
    i = 0
    ntok = len(tokens)

    def add_term(coeff: Fraction, expo: list):
        m = tuple(expo)
        s = terms.get(m, 0) + coeff
        if s:
            terms[m] = s
        else:
            terms.pop(m, None)

    if ntok == 0:
        raise ParseError("empty polynomial text")

    while i < ntok:
        sign = 1
        while i < ntok and tokens[i] in "+-":
            if tokens[i] == "-":
                sign = -sign
            i += 1
        if i >= ntok:
            raise ParseError("dangling sign")
        coeff = Fraction(sign)
        expo = [0] * n
        saw_factor = False
        while i < ntok and tokens[i] not in "+-":
            tok = tokens[i]
            if tok == "*":
                i += 1
                continue
            if tok == "^":
                raise ParseError("exponent with no base")
            if tok[0].isdigit():
                coeff *= Fraction(tok)
                i += 1
            else:
                names = _split_variables(tok, ring)
                e = 1
                i += 1
                if i < ntok and tokens[i] == "^":
                    i += 1
                    if i >= ntok or not tokens[i].isdigit():
                        raise ParseError("malformed exponent")
                    e = int(tokens[i])
                    i += 1
                for name in names[:-1]:
                    expo[ring.index[name]] += 1
                expo[ring.index[names[-1]]] += e  # a trailing power binds to the last factor
            saw_factor = True
        if not saw_factor:
            raise ParseError("empty term")
        add_term(coeff, expo)
    return Polynomial(ring, terms, _clean=True)


def _split_variables(word: str, ring: Ring) -> list[str]:
    """Split a juxtaposed identifier like x1y4 into ring names, longest match first."""
    text = word.replace("_", "")
    if text in ring.index:
        return [text]
    by_length = sorted(ring.names, key=len, reverse=True)
    out: list[str] = []
    pos = 0
    while pos < len(text):
        for name in by_length:
            if text.startswith(name, pos):
                out.append(name)
                pos += len(name)
                break
        else:
            raise ParseError(f"unknown variable name {word!r}")
    return out


def format_polynomial(p: Polynomial) -> str:
    """Canonical text form: terms in descending graded-revlex order on the top row."""
    if p.is_zero():
        return "0"
    ring = p.ring
    monos = sorted(p.terms, key=ring.display_key, reverse=True)
    pieces: list[str] = []
    for k, m in enumerate(monos):
        c = p.terms[m]
        neg = c < 0
        c = -c if neg else c
        factors = []
        if c != 1 or not any(m):
            factors.append(str(c))
        for i, e in enumerate(m):
            if e == 1:
                factors.append(ring.names[i])
            elif e > 1:
                factors.append(f"{ring.names[i]}^{e}")
        body = "*".join(factors)
        if k == 0:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces)


# ---------------------------------------------------------------------------
# graded structure

def bidegree(p: Polynomial) -> BiDegree:
    """Common weighted (bi)degree of all terms; raises if p is 0 or inhomogeneous."""
    if p.is_zero():
        raise AlgebraError("the zero polynomial has no degree")
    degs = []
    for row in range(p.ring.rank):
        vals = {p.ring.mono_degree(m, row) for m in p.terms}
        if len(vals) > 1:
            raise NotHomogeneous(
                f"mixed degrees {sorted(vals)} in weight row {row}: {p}"
            )
        degs.append(vals.pop())
    return BiDegree(*degs)


def is_homogeneous(p: Polynomial) -> bool:
    if p.is_zero():
        return True
    try:
        bidegree(p)
        return True
    except NotHomogeneous:
        return False


def exact_divide(p: Polynomial, q: Polynomial) -> Polynomial:
    """Return u with u*q == p, or raise NotDivisible.

    A nonzero remainder signals a violated unprojection precondition upstream.
    """
    if q.is_zero():
        raise AlgebraError("division by zero polynomial")
    p._check(q)
    ring = p.ring
    key = ring.display_key
    qlead = max(q.terms, key=key)
    qc = q.terms[qlead]
    work = dict(p.terms)
    quot: dict = {}
    while work:
        m = max(work, key=key)
        c = work[m]
        shift = tuple(a - b for a, b in zip(m, qlead))
        if any(e < 0 for e in shift):
            raise NotDivisible(f"remainder starts with {ring.monomial(m, c)}")
        factor = c / qc
        quot[shift] = quot.get(shift, 0) + factor
        for mq, cq in q.terms.items():
            mm = tuple(a + b for a, b in zip(shift, mq))
            s = work.get(mm, 0) - factor * cq
            if s:
                work[mm] = s
            else:
                work.pop(mm, None)
    return Polynomial(ring, quot, _clean=True)


def divides(m1: Mono, m2: Mono) -> bool:
    return all(a <= b for a, b in zip(m1, m2))


def substitute(p: Polynomial, assignments: Mapping[str, "Polynomial | int | Fraction"],
               target: Ring | None = None) -> Polynomial:
    """Simultaneous substitution of variables; unassigned names must exist in target."""
    ring = p.ring
    values: dict[int, Polynomial] = {}
    for name, v in assignments.items():
        if name not in ring.index:
            raise AlgebraError(f"{name!r} is not a variable of the source ring")
        if isinstance(v, Polynomial):
            if target is None:
                target = v.ring
            elif v.ring != target:
                raise RingMismatch("assignment values live in different rings")
            values[ring.index[name]] = v
    if target is None:
        target = ring
    for name, v in assignments.items():
        if not isinstance(v, Polynomial):
            values[ring.index[name]] = target.const(v)

    # variables kept by name in the target ring (only those actually present)
    occurring = set()
    for m in p.terms:
        occurring.update(i for i, e in enumerate(m) if e)
    keep: dict[int, int] = {}
    for i in sorted(occurring):
        if i not in values:
            name = ring.names[i]
            if name not in target.index:
                raise AlgebraError(f"unassigned variable {name!r} missing from target ring")
            keep[i] = target.index[name]

    powers: dict[tuple[int, int], Polynomial] = {}

    def power(i: int, e: int) -> Polynomial:
        got = powers.get((i, e))
        if got is None:
            got = values[i] ** e
            powers[(i, e)] = got
        return got

    out = target.zero()
    for m, c in p.terms.items():
        base = [0] * target.nvars
        for i, e in enumerate(m):
            if e and i in keep:
                base[keep[i]] += e
        term = target.monomial(tuple(base), c)
        for i, e in enumerate(m):
            if e and i in values:
                term = term * power(i, e)
        out = out + term
    return out


# ---------------------------------------------------------------------------
# rank-2 ring manipulation

def well_form(ring: Ring, pivot: str | None = None) -> tuple[Ring, tuple]:
    """Normalise a rank-2 grading by integer row operations.

    With no pivot: a blow-up grading with rows (0, r, w...) / (-r, 0, w'...)
    is turned into the standard scroll shape by replacing the bottom row with
    (top - bottom)/r; an already well-formed ring is returned unchanged.

    With a pivot variable: the top row is replaced by top + k*bottom with k
    chosen so the pivot's top weight becomes 0 (localisation at that
    coordinate point).

    Returns (ring, T) where T is the 2x2 rational row-transform applied,
    acting on the stacked weight rows from the left.
    """
    if ring.rank != 2:
        raise AlgebraError("well_form needs a rank-2 ring")
    top, bottom = ring.top, ring.bottom
    for i in range(ring.nvars):
        if top[i] == 0 and bottom[i] == 0:
            raise AlgebraError(f"variable {ring.names[i]} has bidegree (0,0)")

    if pivot is not None:
        i = ring.index[pivot]
        if bottom[i] == 0:
            raise AlgebraError(f"cannot localise: {pivot} has bottom weight 0")
        if top[i] % bottom[i]:
            raise AlgebraError(f"cannot localise integrally at {pivot}")
        k = -top[i] // bottom[i]
        new_top = tuple(t + k * b for t, b in zip(top, bottom))
        return Ring(ring.names, (new_top, bottom)), ((1, k), (0, 1))

    # blow-up shape: bottom = (-r, 0, ...), top = (0, r, ...)
    r = top[1]
    if r > 0 and bottom[0] == -r and bottom[1] == 0 and top[0] == 0:
        diff = tuple(t - b for t, b in zip(top, bottom))
        if any(d % r for d in diff):
            raise AlgebraError("row reduction is not integral")
        new_bottom = tuple(d // r for d in diff)
        fr = Fraction(1, r)
        return Ring(ring.names, (top, new_bottom)), ((1, 0), (fr, -fr))
    return ring, ((1, 0), (0, 1))


# ---------------------------------------------------------------------------
# seeded general elements

def mix_seed(seed: int, *tag) -> int:
    """Derive a child seed deterministically from a root seed and a tag."""
    blob = repr((seed,) + tag).encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


def monomials_of_degree(ring: Ring, degree: "int | BiDegree") -> list[Mono]:
    """All monomials of the given weighted degree (or bidegree for rank-2 rings)."""
    if isinstance(degree, BiDegree) and degree.bottom is not None:
        return _monomials_of_bidegree(ring, degree.top, degree.bottom)
    d = degree.top if isinstance(degree, BiDegree) else int(degree)
    w = ring.top
    if any(x <= 0 for x in w):
        raise AlgebraError("degree enumeration needs positive top weights")
    n = ring.nvars
    out: list[Mono] = []
    expo = [0] * n

    def rec(i: int, rem: int):
        if i == n - 1:
            if rem % w[i] == 0:
                expo[i] = rem // w[i]
                out.append(tuple(expo))
                expo[i] = 0
            return
        for e in range(rem // w[i] + 1):
            expo[i] = e
            rec(i + 1, rem - e * w[i])
        expo[i] = 0

    rec(0, d)
    return out


def _monomials_of_bidegree(ring: Ring, top: int, bottom: int) -> list[Mono]:
    w, b = ring.top, ring.bottom
    zero_top = [i for i in range(ring.nvars) if w[i] == 0]
    if len(zero_top) > 1:
        raise AlgebraError("at most one top-weight-0 variable supported")
    n = ring.nvars
    out: list[Mono] = []
    expo = [0] * n
    pos = [i for i in range(n) if w[i] > 0]

    def rec(k: int, rem: int):
        if k == len(pos):
            if rem != 0:
                return
            bot = sum(b[i] * expo[i] for i in range(n))
            if zero_top:
                i = zero_top[0]
                if b[i] == 0:
                    return
                need = bottom - bot
                if need % b[i] == 0 and need // b[i] >= 0:
                    expo[i] = need // b[i]
                    out.append(tuple(expo))
                    expo[i] = 0
            elif bot == bottom:
                out.append(tuple(expo))
            return
        i = pos[k]
        for e in range(rem // w[i] + 1):
            expo[i] = e
            rec(k + 1, rem - e * w[i])
        expo[i] = 0

    rec(0, top)
    return out


def random_general(degree, ring: Ring, constraint: Callable[[Mono], bool] | None = None,
                   seed: int = 0) -> Polynomial:
    """Seeded general form: every admissible monomial of the degree appears
    with a nonzero small integer coefficient drawn from [-9, 9].

    Deterministic for a fixed seed; raises if no monomial is admissible.
    """
    monos = monomials_of_degree(ring, degree)
    if constraint is not None:
        monos = [m for m in monos if constraint(m)]
    if not monos:
        raise AlgebraError(f"no admissible monomial of degree {degree}")
    tag = degree if isinstance(degree, int) else tuple(degree)
    rng = random.Random(mix_seed(seed, "random_general", tag))
    terms = {}
    for m in sorted(monos):
        c = rng.randint(1, 18)  # 1..9 -> positive, 10..18 -> negative: never zero
        terms[m] = Fraction(c if c <= 9 else 9 - c)
    return Polynomial(ring, terms, _clean=True)
