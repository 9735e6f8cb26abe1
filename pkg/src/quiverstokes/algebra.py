"""Exact lattice, polynomial and matrix arithmetic.

Everything here is exact: lattice vectors have integer coordinates,
polynomial coefficients are rationals of arbitrary precision, and matrix
entries are polynomials.  No floating point is used anywhere.

A ``TruncatedPoly`` is a sparse multivariate polynomial in the variables
``s1, ..., sn``.  It optionally carries a total-degree bound ``p``: terms of
total degree >= p are dropped by every operation, which makes the type double
as the quotient ring by the ideal (s1, ..., sn)^p.  Mixing an exact value
with a truncated one truncates the result (the smaller bound wins).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


# ---------------------------------------------------------------------------
# Lattice vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeVector:
    """An integer class in the rank-n lattice spanned by the simple classes."""

    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        self._check(other)
        return LatticeVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(tuple(-a for a in self.coords))

    def _check(self, other: "LatticeVector") -> None:
        if len(self.coords) != len(other.coords):
            raise ValueError("lattice vectors of different rank")

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_effective(self) -> bool:
        """True when the class lies in the effective cone (>= 0, not all zero)."""
        return all(a >= 0 for a in self.coords) and any(self.coords)

    def positive_part(self) -> "LatticeVector":
        return LatticeVector(tuple(max(a, 0) for a in self.coords))

    def negative_part(self) -> "LatticeVector":
        return LatticeVector(tuple(min(a, 0) for a in self.coords))


def lv(*coords: int) -> LatticeVector:
    return LatticeVector(tuple(coords))


def simple_class(n: int, i: int) -> LatticeVector:
    """The class of the i-th simple (1-based) in rank n."""
    if not 1 <= i <= n:
        raise ValueError(f"index {i} out of range 1..{n}")
    return LatticeVector(tuple(1 if j == i - 1 else 0 for j in range(n)))


def lv_len(v: LatticeVector) -> int:
    """Sum of absolute values of the coordinates."""
    return sum(abs(a) for a in v.coords)


def lv_monomial(v: LatticeVector, trunc: Optional[int] = None) -> "TruncatedPoly":
    """The monomial with exponent vector (|a1|, ..., |an|) and coefficient 1."""
    exps = tuple(abs(a) for a in v.coords)
    return TruncatedPoly.monomial(len(v.coords), exps, Fraction(1), trunc)


# ---------------------------------------------------------------------------
# Sparse polynomials with optional total-degree truncation
# ---------------------------------------------------------------------------

class TruncatedPoly:
    """Sparse polynomial over Q, optionally reduced mod (s1,...,sn)^p.

    ``terms`` maps exponent tuples to nonzero Fraction coefficients.  The
    instance is treated as immutable; do not mutate ``terms`` in place.
    """

    __slots__ = ("nvars", "trunc", "terms")

    def __init__(self, nvars: int, terms: Optional[dict] = None,
                 trunc: Optional[int] = None):
        self.nvars = int(nvars)
        self.trunc = None if trunc is None else int(trunc)
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars:
                raise ValueError("exponent vector has wrong length")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            coeff = _as_fraction(coeff)
            if coeff == 0:
                continue
            if self.trunc is not None and sum(exps) >= self.trunc:
                continue
            clean[exps] = coeff
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, trunc: Optional[int] = None) -> "TruncatedPoly":
        return cls(nvars, {}, trunc)

    @classmethod
    def constant(cls, nvars: int, c, trunc: Optional[int] = None) -> "TruncatedPoly":
        return cls(nvars, {(0,) * nvars: _as_fraction(c)}, trunc)

    @classmethod
    def one(cls, nvars: int, trunc: Optional[int] = None) -> "TruncatedPoly":
        return cls.constant(nvars, 1, trunc)

    @classmethod
    def variable(cls, nvars: int, i: int, trunc: Optional[int] = None) -> "TruncatedPoly":
        """The variable s_i (1-based)."""
        exps = tuple(1 if j == i - 1 else 0 for j in range(nvars))
        return cls(nvars, {exps: Fraction(1)}, trunc)

    @classmethod
    def monomial(cls, nvars: int, exps: Iterable[int], coeff=1,
                 trunc: Optional[int] = None) -> "TruncatedPoly":
        return cls(nvars, {tuple(exps): _as_fraction(coeff)}, trunc)

    # -- ring operations ----------------------------------------------------

    def _join_trunc(self, other: "TruncatedPoly") -> Optional[int]:
        if self.trunc is None:
            return other.trunc
        if other.trunc is None:
            return self.trunc
        return min(self.trunc, other.trunc)

    def _coerce(self, other) -> "TruncatedPoly":
        if isinstance(other, TruncatedPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable-count mismatch")
            return other
        return TruncatedPoly.constant(self.nvars, other, self.trunc)

    def __add__(self, other) -> "TruncatedPoly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            terms[exps] = terms.get(exps, Fraction(0)) + c
        return TruncatedPoly(self.nvars, terms, self._join_trunc(other))

    __radd__ = __add__

    def __neg__(self) -> "TruncatedPoly":
        return TruncatedPoly(self.nvars, {e: -c for e, c in self.terms.items()},
                             self.trunc)

    def __sub__(self, other) -> "TruncatedPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TruncatedPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "TruncatedPoly":
        if not isinstance(other, TruncatedPoly):
            c = _as_fraction(other)
            return TruncatedPoly(self.nvars,
                                 {e: v * c for e, v in self.terms.items()},
                                 self.trunc)
        other = self._coerce(other)
        trunc = self._join_trunc(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if trunc is not None and d1 + sum(e2) >= trunc:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                v = terms.get(e, Fraction(0)) + c1 * c2
                if v:
                    terms[e] = v
                elif e in terms:
                    del terms[e]
        return TruncatedPoly(self.nvars, terms, trunc)

    __rmul__ = __mul__

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = TruncatedPoly.constant(self.nvars, other)
        if not isinstance(other, TruncatedPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, self.key()))

    def key(self):
        """Canonical graded-lexicographic term tuple; stable sort key."""
        return tuple(sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0])))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def truncate(self, p: Optional[int]) -> "TruncatedPoly":
        if p is None:
            return TruncatedPoly(self.nvars, self.terms, self.trunc)
        new = p if self.trunc is None else min(self.trunc, p)
        return TruncatedPoly(self.nvars, self.terms, new)

    def drop_bound(self) -> "TruncatedPoly":
        """Same terms, no truncation bound (trivial lift of a jet)."""
        return TruncatedPoly(self.nvars, self.terms, None)

    def evaluate(self, point) -> Fraction:
        pt = [_as_fraction(x) for x in point]
        if len(pt) != self.nvars:
            raise ValueError("point has wrong length")
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            v = coeff
            for x, e in zip(pt, exps):
                if e:
                    v *= x ** e
            total += v
        return total

    def congruent(self, other: "TruncatedPoly", p: int) -> bool:
        return (self - other).truncate(p).is_zero()

    # -- display ------------------------------------------------------------

    def text(self, names: Optional[list[str]] = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"s{i+1}" for i in range(self.nvars)]
        bits = []
        for exps, coeff in sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0])):
            mono = "*".join(
                (names[i] if e == 1 else f"{names[i]}^{e}")
                for i, e in enumerate(exps) if e
            )
            if not mono:
                bits.append(str(coeff))
            elif coeff == 1:
                bits.append(mono)
            elif coeff == -1:
                bits.append(f"-{mono}")
            else:
                bits.append(f"{coeff}*{mono}")
        out = bits[0]
        for b in bits[1:]:
            out += f" - {b[1:]}" if b.startswith("-") else f" + {b}"
        return out

    def __repr__(self):
        return f"TruncatedPoly({self.text()!r}, trunc={self.trunc})"


def poly_mul(a: TruncatedPoly, b: TruncatedPoly) -> TruncatedPoly:
    """Exact product; the result keeps the smaller truncation bound."""
    return a * b


# ---------------------------------------------------------------------------
# Square matrices of polynomials
# ---------------------------------------------------------------------------

class PolyMatrix:
    """n x n matrix with TruncatedPoly entries sharing one variable count."""

    __slots__ = ("n", "nvars", "entries")

    def __init__(self, n: int, entries):
        self.n = int(n)
        if len(entries) != n or any(len(row) != n for row in entries):
            raise ValueError("entries must be an n x n array")
        self.nvars = entries[0][0].nvars
        for row in entries:
            for e in row:
                if e.nvars != self.nvars:
                    raise ValueError("variable-count mismatch inside matrix")
        self.entries = [list(row) for row in entries]

    @classmethod
    def identity(cls, n: int, nvars: int, trunc: Optional[int] = None) -> "PolyMatrix":
        return cls(n, [[TruncatedPoly.one(nvars, trunc) if i == j
                        else TruncatedPoly.zero(nvars, trunc)
                        for j in range(n)] for i in range(n)])

    @classmethod
    def elementary(cls, n: int, i: int, j: int, coeff: TruncatedPoly) -> "PolyMatrix":
        """I + coeff * E_ij with 1-based positions, i != j."""
        if i == j:
            raise ValueError("elementary position must be off-diagonal")
        m = cls.identity(n, coeff.nvars, coeff.trunc)
        m.entries[i - 1][j - 1] = m.entries[i - 1][j - 1] + coeff
        return m

    def __getitem__(self, ij) -> TruncatedPoly:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.n == other.n and
                all(self.entries[i][j] == other.entries[i][j]
                    for i in range(self.n) for j in range(self.n)))

    def __hash__(self):
        return hash(self.key())

    def key(self):
        return tuple(self.entries[i][j].key()
                     for i in range(self.n) for j in range(self.n))

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        n = self.n
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = None
                for k in range(n):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    term = a * b
                    acc = term if acc is None else acc + term
                if acc is None:
                    acc = TruncatedPoly.zero(self.nvars, self._join_trunc(other))
                row.append(acc)
            rows.append(row)
        return PolyMatrix(n, rows)

    def _join_trunc(self, other: "PolyMatrix") -> Optional[int]:
        ts = [e.trunc for row in self.entries for e in row if e.trunc is not None]
        ts += [e.trunc for row in other.entries for e in row if e.trunc is not None]
        return min(ts) if ts else None

    def truncate(self, p: Optional[int]) -> "PolyMatrix":
        return PolyMatrix(self.n, [[e.truncate(p) for e in row] for row in self.entries])

    def drop_bound(self) -> "PolyMatrix":
        return PolyMatrix(self.n, [[e.drop_bound() for e in row] for row in self.entries])

    def evaluate(self, point) -> tuple:
        """Evaluate every entry; returns a tuple-of-tuples of Fractions."""
        return tuple(tuple(e.evaluate(point) for e in row) for row in self.entries)

    def congruent(self, other: "PolyMatrix", p: int) -> bool:
        return all(self.entries[i][j].congruent(other.entries[i][j], p)
                   for i in range(self.n) for j in range(self.n))

    def is_unipotent_wrt(self, order) -> bool:
        """Unit diagonal, and entry (i, j) = 0 whenever i comes after j in order.

        ``order`` lists 1-based indices from leftmost (first factor) position
        to rightmost; entry (order[a], order[b]) with a > b must vanish.
        """
        pos = {v - 1: k for k, v in enumerate(order)}
        for i in range(self.n):
            if self.entries[i][i] != 1:
                return False
            for j in range(self.n):
                if i != j and pos[i] > pos[j] and not self.entries[i][j].is_zero():
                    return False
        return True

    def inverse_unipotent(self) -> "PolyMatrix":
        """Neumann-series inverse; requires nilpotent off-diagonal part."""
        n = self.n
        ident = PolyMatrix.identity(n, self.nvars, self._join_trunc(self))
        nil = PolyMatrix(n, [[self.entries[i][j] - ident.entries[i][j]
                              for j in range(n)] for i in range(n)])
        acc = ident
        power = ident
        for k in range(1, n):
            power = power * nil
            sign = -1 if k % 2 else 1
            acc = PolyMatrix(n, [[acc.entries[i][j] + sign * power.entries[i][j]
                                  for j in range(n)] for i in range(n)])
        check = power * nil
        if any(not check.entries[i][j].is_zero() for i in range(n) for j in range(n)):
            raise ValueError("matrix is not unipotent (off-diagonal part not nilpotent)")
        return acc

    def text(self, names: Optional[list[str]] = None) -> str:
        cells = [[e.text(names) for e in row] for row in self.entries]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]"
                         for row in cells)

    def __repr__(self):
        return f"PolyMatrix(n={self.n})\n{self.text()}"


def pm_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    """Matrix product over the (possibly truncated) polynomial ring."""
    return a * b


def pm_evaluate(a: PolyMatrix, point) -> tuple:
    """Evaluate every entry at the given rational point."""
    return a.evaluate(point)


JOYCE_POINT = "sJ"


def joyce_point(nvars: int) -> list[Fraction]:
    """The distinguished evaluation point s1 = ... = sn = 1."""
    return [Fraction(1)] * nvars


# ---------------------------------------------------------------------------
# Bases of the lattice
# ---------------------------------------------------------------------------

class Basis:
    """An ordered tuple of n rank-n lattice vectors, independent over Q."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(r if isinstance(r, LatticeVector) else LatticeVector(tuple(r))
                     for r in rows)
        n = len(rows)
        if any(r.rank != n for r in rows):
            raise ValueError("basis rows must be square")
        self.rows = rows
        if self.det() == 0:
            raise ValueError("basis rows are linearly dependent")

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, i: int) -> LatticeVector:
        """1-based access to the i-th basis vector."""
        return self.rows[i - 1]

    def __eq__(self, other):
        return isinstance(other, Basis) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def diff(self, i: int, j: int) -> LatticeVector:
        """alpha_i - alpha_j (1-based)."""
        return self.rows[i - 1] - self.rows[j - 1]

    def matrix(self) -> list[list[Fraction]]:
        return [[Fraction(c) for c in r.coords] for r in self.rows]

    def det(self) -> Fraction:
        return _det(self.matrix())

    def inverse(self) -> list[list[Fraction]]:
        return _inv(self.matrix())

    @classmethod
    def triangular(cls, n: int) -> "Basis":
        """alpha_i = sum of the simple classes with index >= i."""
        return cls([tuple(1 if j >= i else 0 for j in range(n)) for i in range(n)])

    @classmethod
    def alternating(cls, n: int) -> "Basis":
        """alpha_i = (-1)^(i-1) [S_i] + [S_n] for i < n, alpha_n = [S_n]."""
        rows = []
        for i in range(1, n):
            row = [0] * n
            row[i - 1] = 1 if i % 2 == 1 else -1
            row[n - 1] += 1
            rows.append(tuple(row))
        rows.append(tuple(1 if j == n - 1 else 0 for j in range(n)))
        return cls(rows)

    def __repr__(self):
        return f"Basis({[r.coords for r in self.rows]})"


def _det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    a = [row[:] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[piv], a[col] = a[col], a[piv]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] == 0:
                continue
            f = a[r][col] * inv
            for c in range(col, n):
                a[r][c] -= f * a[col][c]
    return det


def _inv(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [row[:] + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[piv], a[col] = a[col], a[piv]
        f = 1 / a[col][col]
        a[col] = [x * f for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                g = a[r][col]
                a[r] = [x - g * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]
