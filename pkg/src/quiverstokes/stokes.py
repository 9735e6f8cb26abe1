"""Chambers, elementary factors, and ordered Stokes products.

A chamber is a rational central charge Z together with the list of active
classes (those carrying a nonzero count for that Z).  Each active class that
occurs as a difference alpha_i - alpha_j of basis vectors contributes an
elementary unipotent factor

    S_ij = I - (-1)^<a_i, a_j> <a_i, a_j> * dt(a_i - a_j) * s^(a_i - a_j) E_ij,

attached to the ray of Z(alpha_i - alpha_j).  The Stokes matrix is the
product of these factors over rays in the semi-closed upper half plane,
ordered clockwise: strictly decreasing argument in (0, pi], leftmost factor
first.  All ray comparisons are exact sign tests on Gaussian rationals.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .algebra import (Basis, LatticeVector, PolyMatrix, TruncatedPoly,
                      _as_fraction, lv_len, lv_monomial)
from .quiver import EulerForm, Quiver


class RayCollision(ValueError):
    pass


class ChamberError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Counting models
# ---------------------------------------------------------------------------

def _canon_class(v: LatticeVector) -> LatticeVector:
    for c in v.coords:
        if c > 0:
            return v
        if c < 0:
            return -v
    return v


def _is_simple(v: LatticeVector) -> bool:
    return sum(abs(c) for c in v.coords) == 1


def _interval_bounds(v: LatticeVector) -> Optional[tuple[int, int]]:
    """(i, j) 1-based if +-v is a run of consecutive ones, else None."""
    w = _canon_class(v)
    idx = [k for k, c in enumerate(w.coords) if c]
    if not idx or any(w.coords[k] != 1 for k in idx):
        return None
    if idx != list(range(idx[0], idx[-1] + 1)):
        return None
    return idx[0] + 1, idx[-1] + 1


class DTModel:
    """Rational counts attached to lattice classes, symmetric under negation.

    Kinds: ``simples-only`` (1 on the signed simple classes), ``an-intervals``
    (1 on signed consecutive-run classes), ``kronecker-chain`` (1 on simples,
    (-1)^(lam-1) * lam on signed sums of adjacent simples), and ``table``
    (explicit values; signed simple classes default to 1 unless overridden).
    """

    def __init__(self, kind: str, fn: Callable[[LatticeVector], Fraction]):
        self.kind = kind
        self._fn = fn

    def dt(self, v: LatticeVector) -> Fraction:
        if v.is_zero():
            raise ValueError("the zero class carries no count")
        return self._fn(_canon_class(v))

    @classmethod
    def simples_only(cls) -> "DTModel":
        return cls("simples-only",
                   lambda v: Fraction(1) if _is_simple(v) else Fraction(0))

    @classmethod
    def an_intervals(cls) -> "DTModel":
        return cls("an-intervals",
                   lambda v: Fraction(1) if _interval_bounds(v) else Fraction(0))

    @classmethod
    def kronecker_chain(cls, lam: int) -> "DTModel":
        lam = int(lam)

        def fn(v: LatticeVector) -> Fraction:
            if _is_simple(v):
                return Fraction(1)
            b = _interval_bounds(v)
            if b and b[1] - b[0] == 1:
                return Fraction((-1) ** (lam - 1) * lam)
            return Fraction(0)

        return cls(f"kronecker-chain({lam})", fn)

    @classmethod
    def table(cls, mapping: dict, simples_default: bool = True) -> "DTModel":
        tab = {}
        for key, val in mapping.items():
            vec = key if isinstance(key, LatticeVector) else LatticeVector(tuple(key))
            tab[_canon_class(vec).coords] = _as_fraction(val)

        def fn(v: LatticeVector) -> Fraction:
            if v.coords in tab:
                return tab[v.coords]
            if simples_default and _is_simple(v):
                return Fraction(1)
            return Fraction(0)

        return cls("table", fn)

    @classmethod
    def from_quiver_extensions(cls, q: Quiver) -> "DTModel":
        """1 on simples; (-1)^(lam-1) * lam on signed two-simple sums with
        lam arrows between the supports; 0 elsewhere."""

        def fn(v: LatticeVector) -> Fraction:
            if _is_simple(v):
                return Fraction(1)
            w = _canon_class(v)
            idx = [k for k, c in enumerate(w.coords) if c]
            if len(idx) == 2 and all(w.coords[k] == 1 for k in idx):
                lam = q.arrows_between(idx[0] + 1, idx[1] + 1)
                return Fraction((-1) ** (lam - 1) * lam) if lam else Fraction(0)
            return Fraction(0)

        return cls("quiver-extensions", fn)


# ---------------------------------------------------------------------------
# Exact ray geometry
# ---------------------------------------------------------------------------

def _in_upper(x: Fraction, y: Fraction) -> bool:
    """Membership in the semi-closed upper half plane {y > 0} u {y = 0, x < 0}."""
    return y > 0 or (y == 0 and x < 0)


def _arg_greater(a: tuple, b: tuple) -> bool:
    """Exact comparison arg(a) > arg(b) for rays in (0, pi]."""
    return b[0] * a[1] - b[1] * a[0] > 0


@dataclass(frozen=True)
class Chamber:
    """A central charge plus the list of active classes for it.

    Z is a tuple of (x, y) Gaussian rationals, one per simple class; every
    Z_i must lie in the semi-closed upper half plane.  Active classes are
    recorded with their ray in the upper half plane and must have pairwise
    distinct rays.
    """

    Z: tuple
    active: tuple

    def __post_init__(self):
        Z = tuple((_as_fraction(x), _as_fraction(y)) for x, y in self.Z)
        object.__setattr__(self, "Z", Z)
        act = tuple(v if isinstance(v, LatticeVector) else LatticeVector(tuple(v))
                    for v in self.active)
        object.__setattr__(self, "active", act)
        for x, y in Z:
            if not _in_upper(x, y):
                raise ChamberError("central charge leaves the upper half plane")
        rays = []
        for v in act:
            if v.is_zero():
                raise ChamberError("zero class marked active")
            x, y = self.z_of(v)
            if (x, y) == (0, 0):
                raise ChamberError(f"active class {v.coords} has Z = 0")
            if not _in_upper(x, y):
                raise ChamberError(
                    f"active class {v.coords} has its ray outside the upper half plane")
            rays.append((x, y))
        for a, b in itertools.combinations(rays, 2):
            if a[0] * b[1] - a[1] * b[0] == 0:
                raise RayCollision("two active classes lie on the same ray")

    @property
    def n(self) -> int:
        return len(self.Z)

    def z_of(self, v: LatticeVector) -> tuple:
        x = sum((Fraction(c) * zx for c, (zx, _) in zip(v.coords, self.Z)),
                Fraction(0))
        y = sum((Fraction(c) * zy for c, (_, zy) in zip(v.coords, self.Z)),
                Fraction(0))
        return (x, y)

    def active_set(self) -> set:
        return {v.coords for v in self.active}


def ray_order(chamber: Chamber, classes: Iterable[LatticeVector]) -> list[LatticeVector]:
    """Sort classes by strictly decreasing argument of their ray in (0, pi].

    Classes whose ray lies in the lower half plane are replaced by their
    negatives first.  Raises RayCollision when two inputs share a ray and
    ChamberError when a class evaluates to zero.
    """
    fixed = []
    for v in classes:
        x, y = chamber.z_of(v)
        if (x, y) == (0, 0):
            raise ChamberError(f"class {v.coords} has Z = 0")
        if not _in_upper(x, y):
            v, x, y = -v, -x, -y
        fixed.append((v, (x, y)))

    def cmp(a, b):
        if a[1][0] * b[1][1] - a[1][1] * b[1][0] == 0:
            raise RayCollision(
                f"classes {a[0].coords} and {b[0].coords} lie on the same ray")
        return -1 if _arg_greater(a[1], b[1]) else 1

    fixed.sort(key=functools.cmp_to_key(cmp))
    return [v for v, _ in fixed]


# ---------------------------------------------------------------------------
# Elementary factors and their ordered products
# ---------------------------------------------------------------------------

def stokes_factor(i: int, j: int, basis: Basis, e: EulerForm, dt,
                  p: Optional[int] = None) -> PolyMatrix:
    """I - (-1)^<a_i,a_j> <a_i,a_j> dt s^(a_i - a_j) E_ij (1-based i != j)."""
    if i == j:
        raise ValueError("factor position must be off-diagonal")
    coeff = factor_coefficient(i, j, basis, e, dt, p)
    n = basis.n
    if coeff.is_zero():
        return PolyMatrix.identity(n, n, p)
    return PolyMatrix.elementary(n, i, j, coeff)


def factor_coefficient(i: int, j: int, basis: Basis, e: EulerForm, dt,
                       p: Optional[int] = None) -> TruncatedPoly:
    dt = _as_fraction(dt)
    x = e.pairing(basis[i], basis[j])
    sign = 1 if x % 2 == 0 else -1
    c = Fraction(-sign * x) * dt
    return lv_monomial(basis.diff(i, j), p) * c


@dataclass
class StokesData:
    """An ordered factorization and its product.

    ``order`` is a permutation of 1..n (leftmost rows first) with respect to
    which the product is unipotent upper triangular; ``factors`` lists
    (i, j, coefficient) from the leftmost factor to the rightmost.
    """

    basis: Basis
    order: tuple[int, ...]
    factors: list
    product: PolyMatrix

    def factor_positions(self) -> list[tuple[int, int]]:
        return [(i, j) for (i, j, _) in self.factors]


def _index_order(n: int, positions: Iterable[tuple[int, int]]) -> tuple[int, ...]:
    """Topological order of 1..n putting i before j for each position (i, j)."""
    succ = {i: set() for i in range(1, n + 1)}
    deg = {i: 0 for i in range(1, n + 1)}
    for (i, j) in positions:
        if j not in succ[i]:
            succ[i].add(j)
            deg[j] += 1
    order = []
    ready = sorted(i for i in deg if deg[i] == 0)
    while ready:
        v = ready.pop(0)
        order.append(v)
        for w in sorted(succ[v]):
            deg[w] -= 1
            if deg[w] == 0:
                ready.append(w)
        ready.sort()
    if len(order) != n:
        raise ValueError("factor positions contain a cycle; no unipotent order")
    return tuple(order)


def _chamber_factors(basis: Basis, chamber: Chamber, model: DTModel,
                     len_bound: Optional[int]):
    """Pairs (i, j) whose difference is active with its ray in the upper
    half plane, optionally restricted to len < len_bound."""
    n = basis.n
    act = chamber.active_set()
    found = []
    seen_classes = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            d = basis.diff(i, j)
            x, y = chamber.z_of(d)
            if (x, y) == (0, 0):
                raise ChamberError(f"difference {d.coords} has Z = 0")
            if not _in_upper(x, y):
                continue
            if d.coords not in act:
                continue
            if len_bound is not None and lv_len(d) >= len_bound:
                continue
            if d.coords in seen_classes:
                raise RayCollision(
                    f"positions {seen_classes[d.coords]} and {(i, j)} share "
                    f"the class {d.coords}")
            seen_classes[d.coords] = (i, j)
            dt = model.dt(d)
            if dt == 0:
                raise ChamberError(
                    f"active class {d.coords} has zero count under the model")
            found.append((i, j, d, dt))
    return found


def stokes_product(basis: Basis, e: EulerForm, model: DTModel, chamber: Chamber,
                   p: Optional[int] = None) -> StokesData:
    """Clockwise ordered product of the chamber's elementary factors.

    With p given, factors of classes of length >= p are dropped and the
    product is reduced mod (s)^p; with p absent the product is exact.
    """
    if chamber.n != basis.n:
        raise ValueError("chamber and basis rank mismatch")
    entries = _chamber_factors(basis, chamber, model, p)
    ordered_classes = ray_order(chamber, [d for (_, _, d, _) in entries])
    by_class = {d.coords: (i, j, d, dt) for (i, j, d, dt) in entries}
    n = basis.n
    product = PolyMatrix.identity(n, n, p)
    factors = []
    for cls in ordered_classes:
        i, j, d, dt = by_class[cls.coords]
        coeff = factor_coefficient(i, j, basis, e, dt, p)
        factors.append((i, j, coeff))
        product = product * PolyMatrix.elementary(n, i, j, coeff)
    order = _index_order(n, [(i, j) for (i, j, _) in factors])
    data = StokesData(basis, order, factors, product)
    if not product.is_unipotent_wrt(order):
        raise ChamberError("product is not unipotent for the induced order")
    return data


def natural_lifts(basis: Basis, e: EulerForm, model: DTModel,
                  chambers: Iterable[Chamber], p: int) -> list[PolyMatrix]:
    """Distinct exact products of trivially lifted mod-(s)^p factors.

    Every returned matrix is an exact polynomial matrix; all of them agree
    mod (s)^p (checked, ValueError otherwise).
    """
    values: list[PolyMatrix] = []
    for chamber in chambers:
        entries = _chamber_factors(basis, chamber, model, p)
        ordered = ray_order(chamber, [d for (_, _, d, _) in entries])
        by_class = {d.coords: (i, j, d, dt) for (i, j, d, dt) in entries}
        n = basis.n
        product = PolyMatrix.identity(n, n, None)
        for cls in ordered:
            i, j, d, dt = by_class[cls.coords]
            coeff = factor_coefficient(i, j, basis, e, dt, None)
            product = product * PolyMatrix.elementary(n, i, j, coeff)
        if product not in values:
            values.append(product)
    for a, b in itertools.combinations(values, 2):
        if not a.congruent(b, p):
            raise ValueError("chamber products disagree below the stated order")
    values.sort(key=lambda m: m.key())
    return values


def an_stokes(n: int) -> PolyMatrix:
    """I - sum_i s_i E_{i,i+1}, the bidiagonal unipotent matrix."""
    if n < 2:
        raise ValueError("need n >= 2")
    m = PolyMatrix.identity(n, n, None)
    for i in range(1, n):
        m.entries[i - 1][i] = -TruncatedPoly.variable(n, i)
    return m


def factor_product(T: PolyMatrix, positions: list[tuple[int, int]]) -> list[TruncatedPoly]:
    """Coefficients c_k with prod_k (I + c_k E_{positions[k]}) = T.

    Solved level by level: adjusting a coefficient at order-distance l never
    changes entries at distance < l, so one sweep per level converges; the
    result is verified by re-multiplication.
    """
    n = T.n
    if len(set(positions)) != len(positions):
        raise ValueError("positions must be distinct")
    order = _index_order(n, positions)
    pos_of = {v: k for k, v in enumerate(order)}
    if not T.is_unipotent_wrt(order):
        raise ValueError("matrix is not unipotent for the order induced by positions")
    level = {(i, j): pos_of[j] - pos_of[i] for (i, j) in positions}
    if any(l <= 0 for l in level.values()):
        raise ValueError("positions incompatible with a triangular order")
    coeffs = {pos: TruncatedPoly.zero(T.nvars) for pos in positions}

    def rebuild() -> PolyMatrix:
        m = PolyMatrix.identity(n, T.nvars, None)
        for pos in positions:
            c = coeffs[pos]
            if not c.is_zero():
                m = m * PolyMatrix.elementary(n, pos[0], pos[1], c)
        return m

    for lev in range(1, n):
        current = rebuild()
        for pos in positions:
            if level[pos] == lev:
                i, j = pos
                coeffs[pos] = coeffs[pos] + (T.entries[i - 1][j - 1]
                                             - current.entries[i - 1][j - 1])
    if rebuild() != T:
        raise ValueError("no factorization over the given positions")
    return [coeffs[pos] for pos in positions]


# ---------------------------------------------------------------------------
# Chambers for concrete quivers
# ---------------------------------------------------------------------------

def convex_charge(n: int, seed_x: int = 0) -> tuple:
    """A generic central charge with strictly decreasing phases.

    x-coordinates grow quadratically so that sums of distinct index sets
    never align; good enough as a default chamber for small ranks.
    """
    return tuple((Fraction((k + 1) ** 2 - (n + 2) + seed_x), Fraction(1))
                 for k in range(n))


def extension_actives(q: Quiver, Z) -> list[LatticeVector]:
    """Simple classes plus the stable two-simple extension classes.

    For lam >= 1 arrows u -> v the extension of class [S_u] + [S_v] has the
    destabilizing sub S_v, so it is active exactly when
    arg Z_u > arg Z_v.
    """
    n = q.n
    Z = tuple((_as_fraction(x), _as_fraction(y)) for x, y in Z)
    act = [LatticeVector(tuple(1 if t == k else 0 for t in range(n)))
           for k in range(n)]
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            if u == v or q.arrows[u - 1][v - 1] == 0:
                continue
            if _arg_greater(Z[u - 1], Z[v - 1]):
                vec = [0] * n
                vec[u - 1] = 1
                vec[v - 1] = 1
                act.append(LatticeVector(tuple(vec)))
    return act


def level2_chamber(q: Quiver, Z) -> Chamber:
    """Chamber for Z whose actives are simples and stable two-simple sums."""
    return Chamber(tuple(Z), tuple(extension_actives(q, Z)))


def quiver_stokes_jet(q: Quiver, basis: Basis, p: int = 3,
                      seed_x: int = 0) -> PolyMatrix:
    """Order-p jet of the Stokes matrix of (quiver, basis).

    Chamber independent below order p, so any valid chamber gives the same
    answer; a generic convex charge is used, nudged until no rays collide.
    """
    from .quiver import euler_form
    e = euler_form(q)
    model = DTModel.from_quiver_extensions(q)
    for shift in range(24):
        Z = convex_charge(q.n, seed_x + shift)
        try:
            ch = level2_chamber(q, Z)
            return stokes_product(basis, e, model, ch, p).product
        except RayCollision:
            continue
    raise RayCollision("no collision-free convex charge found")


# ---------------------------------------------------------------------------
# Linear-quiver chambers and the order-(n+1) jet check
# ---------------------------------------------------------------------------

def _interval_class(n: int, i: int, j: int) -> LatticeVector:
    return LatticeVector(tuple(1 if i - 1 <= t <= j - 1 else 0 for t in range(n)))


def an_stable_intervals(n: int, Z) -> list[LatticeVector]:
    """Stable interval classes of the linear quiver 1 -> 2 -> ... -> n.

    The indecomposable on [i, j] has exactly the right-closed subobjects
    [k, j], so it is stable iff arg Z([k, j]) < arg Z([i, j]) for all
    i < k <= j.
    """
    Z = tuple((_as_fraction(x), _as_fraction(y)) for x, y in Z)

    def zval(i, j):
        x = sum((Z[t][0] for t in range(i - 1, j)), Fraction(0))
        y = sum((Z[t][1] for t in range(i - 1, j)), Fraction(0))
        return (x, y)

    out = []
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            whole = zval(i, j)
            if all(_arg_greater(whole, zval(k, j)) for k in range(i + 1, j + 1)):
                out.append(_interval_class(n, i, j))
    return out


def an_chamber(n: int, Z) -> Chamber:
    return Chamber(tuple(Z), tuple(an_stable_intervals(n, Z)))


def _charge_samples(n: int, count: int, seed: int = 20240915):
    """Deterministic pseudo-random rational charges in the upper half plane."""
    state = seed

    def rnd(lo, hi):
        nonlocal state
        state = (state * 6364136223846793005 + 1442695040888963407) % (1 << 64)
        return lo + (state >> 33) % (hi - lo + 1)

    for _ in range(count):
        yield tuple((Fraction(rnd(-12, 12)), Fraction(rnd(1, 9))) for _ in range(n))


def enumerate_an_chambers(n: int, samples: int = 600) -> list[Chamber]:
    """Distinct linear-quiver chambers found by deterministic sampling.

    Chambers are keyed by (stable set, ray order of the stable classes);
    structured monotone charges are always included.
    """
    structured = [
        convex_charge(n, 0),
        tuple(reversed(convex_charge(n, 0))),
        tuple((Fraction(-10 * 3 ** k), Fraction(1 + k)) for k in range(n)),
        tuple((Fraction(10 * 3 ** (n - k)), Fraction(1 + k)) for k in range(n)),
    ]
    seen = {}
    for Z in itertools.chain(structured, _charge_samples(n, samples)):
        try:
            ch = an_chamber(n, Z)
            key = (frozenset(v.coords for v in ch.active),
                   tuple(v.coords for v in ray_order(ch, list(ch.active))))
        except (RayCollision, ChamberError):
            continue
        if key not in seen:
            seen[key] = ch
    return list(seen.values())


def verify_an_jet(n: int, samples: int = 600) -> dict:
    """Check that every sampled linear-quiver chamber yields the bidiagonal
    Stokes matrix exactly, and that the mod-(s)^(n+1) lifted products agree.

    Returns a report dict; ``ok`` is True when every chamber product equals
    an_stokes(n) and the natural lifts at order n+1 take a single value.
    """
    if not 2 <= n <= 5:
        raise ValueError("desk-scale check supports 2 <= n <= 5")
    basis = Basis.triangular(n)
    from .quiver import euler_form, linear_quiver
    e = euler_form(linear_quiver(n))
    model = DTModel.an_intervals()
    chambers = enumerate_an_chambers(n, samples)
    expected = an_stokes(n)
    mismatches = []
    for ch in chambers:
        prod = stokes_product(basis, e, model, ch, None).product
        if prod != expected:
            mismatches.append((ch, prod))
    lifts = natural_lifts(basis, e, model, chambers, n + 1)
    ok = not mismatches and len(lifts) == 1 and lifts[0] == expected
    return {
        "n": n,
        "chambers": len(chambers),
        "mismatched_chambers": len(mismatches),
        "lift_values_mod_n_plus_1": len(lifts),
        "ok": ok,
    }
