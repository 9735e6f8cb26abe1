"""Good-basis conditions and the search for compatible quivers.

A basis alpha_1..alpha_n of the lattice is *good* at order p when two kinds
of conditions hold:

* quadratic conditions: for pairwise distinct i, j, k with
  len(alpha_j - alpha_i) < p,

      <a_j, a_i> <a_j - a_k, a_k - a_i>  =  <a_j, a_k> <a_k, a_i>.

  Equivalently all in-range pairings equal eps_ij * lambda for a sign tensor
  eps satisfying  1 + eps_ij eps_jk + eps_ji eps_ik + eps_ik eps_kj = 0.

* vanishing conditions (p = 3 form): every difference alpha_j - alpha_i is
  a signed simple class, a sum of two signed simple classes that splits
  through some alpha_k, or not a sum of two signed simple classes at all.

Given a basis and a scale lambda, `find_good_quivers` solves
<a_i, a_j> = eps_ij * lambda for the skew form, transports it to the simple
classes, and realizes each resulting form as a quiver.  Pairs whose length
is >= p are unconstrained; they enter the form as named free parameters and
are printed symbolically on the quiver arrows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import Basis, LatticeVector, TruncatedPoly, lv_len
from .quiver import EulerForm, Quiver


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class GoodnessReport:
    """Outcome of the quadratic and/or vanishing checks.

    A flag of None means the corresponding family of conditions was not
    evaluated by the producing call.
    """

    quadratic_ok: Optional[bool] = None
    vanishing_ok: Optional[bool] = None
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.quadratic_ok is not False) and (self.vanishing_ok is not False)

    def merge(self, other: "GoodnessReport") -> "GoodnessReport":
        def pick(a, b):
            if a is None:
                return b
            if b is None:
                return a
            return a and b
        return GoodnessReport(pick(self.quadratic_ok, other.quadratic_ok),
                              pick(self.vanishing_ok, other.vanishing_ok),
                              self.violations + other.violations)


def check_quadratic(basis: Basis, e: EulerForm, p: int) -> GoodnessReport:
    """Check the quadratic conditions at order p (p >= 3)."""
    if p < 3:
        raise ValueError("quadratic conditions are defined for p >= 3")
    n = basis.n
    violations = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j or lv_len(basis.diff(j, i)) >= p:
                continue
            for k in range(1, n + 1):
                if k == i or k == j:
                    continue
                lhs = (e.pairing(basis[j], basis[i]) *
                       e.pairing(basis.diff(j, k), basis.diff(k, i)))
                rhs = e.pairing(basis[j], basis[k]) * e.pairing(basis[k], basis[i])
                if lhs != rhs:
                    key = (min(i, j), max(i, j), k)
                    entry = ("quadratic", key, f"lhs={lhs} rhs={rhs}")
                    if entry not in violations:
                        violations.append(entry)
    return GoodnessReport(quadratic_ok=not violations, violations=violations)


def check_vanishing_p3(basis: Basis) -> GoodnessReport:
    """Check the order-3 vanishing conditions.

    The only way a pair can fail is a difference of length exactly 2 that
    does not split as (alpha_j - alpha_k) + (alpha_k - alpha_i) with both
    parts of length 1.
    """
    n = basis.n
    violations = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            gamma = basis.diff(j, i)
            if lv_len(gamma) != 2:
                continue
            has_split = any(
                lv_len(basis.diff(j, k)) == 1 and lv_len(basis.diff(k, i)) == 1
                for k in range(1, n + 1) if k != i and k != j)
            if not has_split:
                violations.append(("vanishing", (i, j),
                                   "length-2 difference with no admissible split"))
    return GoodnessReport(vanishing_ok=not violations, violations=violations)


# ---------------------------------------------------------------------------
# Sign tensors
# ---------------------------------------------------------------------------

def full_domain(n: int) -> frozenset:
    return frozenset((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))


def basis_domain(basis: Basis, p: int) -> frozenset:
    """Pairs (i, j), i < j, with len(alpha_j - alpha_i) < p."""
    return frozenset((i, j) for i in range(1, basis.n + 1)
                     for j in range(i + 1, basis.n + 1)
                     if lv_len(basis.diff(j, i)) < p)


@dataclass(frozen=True)
class EpsilonTensor:
    """Skew sign tensor on a set of index pairs, with its integer scale."""

    n: int
    domain: frozenset
    signs: tuple  # tuple of ((i, j), +-1) sorted by pair, for hashing
    lam: int = 1

    @classmethod
    def from_dict(cls, n: int, domain, eps: dict, lam: int = 1) -> "EpsilonTensor":
        dom = frozenset(tuple(p) for p in domain)
        signs = tuple(sorted(((i, j), int(eps[(i, j)])) for (i, j) in dom))
        t = cls(n, dom, signs, lam)
        bad = t.triple_violations()
        if bad:
            raise ValueError(f"sign tensor violates triple conditions at {bad}")
        return t

    def as_dict(self) -> dict:
        return dict(self.signs)

    def __getitem__(self, ij) -> int:
        i, j = ij
        if i == j:
            raise KeyError("diagonal is unused")
        d = self.as_dict()
        if (i, j) in d:
            return d[(i, j)]
        if (j, i) in d:
            return -d[(j, i)]
        raise KeyError(f"pair {ij} outside domain")

    def triple_violations(self) -> list:
        d = self.as_dict()

        def get(i, j):
            return d[(i, j)] if (i, j) in d else -d[(j, i)]

        bad = []
        for i, j, k in itertools.combinations(range(1, self.n + 1), 3):
            pairs = {(i, j), (i, k), (j, k)}
            if not pairs <= self.domain:
                continue
            val = (1 + get(i, j) * get(j, k) + get(j, i) * get(i, k)
                   + get(i, k) * get(k, j))
            if val != 0:
                bad.append((i, j, k))
        return bad

    def flipped(self) -> "EpsilonTensor":
        return EpsilonTensor(self.n, self.domain,
                             tuple((p, -s) for p, s in self.signs), self.lam)


def epsilon_solutions(n: int, domain=None) -> list[EpsilonTensor]:
    """All sign tensors over the domain satisfying the triple conditions.

    Brute force over 2^|domain| assignments; returned in canonical order
    (lexicographic over the sorted pair list, +1 before -1).
    """
    if n < 2:
        raise ValueError("need n >= 2")
    dom = full_domain(n) if domain is None else frozenset(tuple(p) for p in domain)
    pairs = sorted(dom)
    out = []
    for assignment in itertools.product((1, -1), repeat=len(pairs)):
        eps = dict(zip(pairs, assignment))
        try:
            out.append(EpsilonTensor.from_dict(n, dom, eps))
        except ValueError:
            continue
    return out


# ---------------------------------------------------------------------------
# Good-quiver search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymbolicQuiver:
    """Quiver whose arrow multiplicities may be polynomials in free parameters.

    ``arrows`` maps (source, target) to a TruncatedPoly in the parameter
    variables; constant entries are ordinary multiplicities.
    """

    n: int
    params: tuple[str, ...]
    arrows: tuple  # tuple of ((u, v), TruncatedPoly) sorted by (u, v)

    def arrow_dict(self) -> dict:
        return dict(self.arrows)

    def is_concrete(self) -> bool:
        return all(p.degree() <= 0 for _, p in self.arrows)

    def to_quiver(self) -> Quiver:
        if not self.is_concrete():
            raise ValueError("quiver has symbolic multiplicities")
        pairs = {uv: int(p.constant_term()) for uv, p in self.arrows}
        return Quiver.from_arrows(self.n, pairs)

    def substitute(self, values) -> Quiver:
        """Concrete quiver at given parameter values; a negative evaluated
        multiplicity flips the arrow direction."""
        m = [[0] * self.n for _ in range(self.n)]
        for (u, v), poly in self.arrows:
            c = poly.evaluate(values)
            if c.denominator != 1:
                raise ValueError("non-integer multiplicity after substitution")
            c = int(c)
            if c >= 0:
                m[u - 1][v - 1] += c
            else:
                m[v - 1][u - 1] += -c
        return Quiver(self.n, tuple(tuple(r) for r in m))

    def label(self, uv) -> str:
        return self.arrow_dict()[uv].text(list(self.params))


@dataclass(frozen=True)
class GoodQuiverSolution:
    quiver: SymbolicQuiver
    eps: EpsilonTensor
    params: tuple[str, ...]
    # skew form on the basis and on the simple classes, entries polynomial
    # in the free parameters
    basis_form: tuple
    simple_form: tuple


def _param_poly(nparams: int, index: Optional[int], const=0) -> TruncatedPoly:
    terms = {}
    z = (0,) * nparams
    if const:
        terms[z] = Fraction(const)
    if index is not None:
        e = tuple(1 if t == index else 0 for t in range(nparams))
        terms[e] = Fraction(1)
    return TruncatedPoly(nparams, terms)


def find_good_quivers(basis: Basis, lam: int = 1, p: int = 3,
                      require_vanishing: bool = True) -> list[GoodQuiverSolution]:
    """Quivers whose skew form makes the basis good at order p.

    For every sign tensor over the in-range pairs, the form on the basis is
    eps_ij * lam in range and a named free parameter out of range.  The free
    parameter attached to an out-of-range pair (i, j) is <alpha_j, alpha_i>
    (this orientation matches the published arrow labels).  A solution is
    emitted only when the transported form on the simple classes has integer
    entries, so that every concrete entry e[u][v] is realized by |e[u][v]|
    arrows (u -> v when the entry is negative).
    """
    if require_vanishing and not check_vanishing_p3(basis).ok:
        raise ValueError("basis fails the order-3 vanishing conditions")
    n = basis.n
    dom = basis_domain(basis, p)
    free_pairs = sorted(set(full_domain(n)) - dom)
    params = tuple("k" if len(free_pairs) == 1 else f"k{t+1}"
                   for t in range(len(free_pairs)))
    nparams = len(free_pairs)
    zero = TruncatedPoly.zero(nparams)
    binv = Basis(basis.rows).inverse()

    solutions = []
    for eps in epsilon_solutions(n, dom):
        # skew form on the basis: constants in range, parameters out of range
        form = [[zero for _ in range(n)] for _ in range(n)]
        for (i, j) in sorted(dom):
            c = _param_poly(nparams, None, eps[(i, j)] * lam)
            form[i - 1][j - 1] = c
            form[j - 1][i - 1] = -c
        for t, (i, j) in enumerate(free_pairs):
            c = _param_poly(nparams, t)  # the parameter is <alpha_j, alpha_i>
            form[i - 1][j - 1] = -c
            form[j - 1][i - 1] = c
        simple = _transport_form(binv, form, nparams)
        if simple is None:
            continue
        arrows = _realize_arrows(simple, nparams)
        if arrows is None:
            continue
        quiver = SymbolicQuiver(n, params, tuple(sorted(arrows.items())))
        solutions.append(GoodQuiverSolution(
            quiver=quiver, eps=eps, params=params,
            basis_form=tuple(tuple(row) for row in form),
            simple_form=tuple(tuple(row) for row in simple)))
    solutions.sort(key=lambda s: tuple((uv, p_.key()) for uv, p_ in s.quiver.arrows))
    return solutions


def _transport_form(binv, form, nparams):
    """Form on simple classes: Binv * F * Binv^T; None if non-integral."""
    n = len(binv)
    zero = TruncatedPoly.zero(nparams)

    def scale(c: Fraction, poly: TruncatedPoly) -> TruncatedPoly:
        return poly * c

    tmp = [[zero for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = zero
            for k in range(n):
                if binv[i][k]:
                    acc = acc + scale(binv[i][k], form[k][j])
            tmp[i][j] = acc
    out = [[zero for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = zero
            for k in range(n):
                if binv[j][k]:
                    acc = acc + scale(binv[j][k], tmp[i][k])
            out[i][j] = acc
    for i in range(n):
        for j in range(n):
            for coeff in out[i][j].terms.values():
                if coeff.denominator != 1:
                    return None
    return out


def _realize_arrows(simple, nparams):
    """Arrow table from the skew form on simples; None if unrealizable.

    Concrete entry e[u][v] < 0 gives |e| arrows u -> v; symbolic entries are
    emitted as an arrow u -> v (u < v) with multiplicity -e[u][v].
    """
    n = len(simple)
    arrows = {}
    for u in range(n):
        for v in range(u + 1, n):
            entry = simple[u][v]
            if entry.is_zero():
                continue
            if entry.degree() <= 0:
                c = entry.constant_term()
                if c < 0:
                    arrows[(u + 1, v + 1)] = TruncatedPoly.constant(nparams, -c)
                else:
                    arrows[(v + 1, u + 1)] = TruncatedPoly.constant(nparams, c)
            else:
                arrows[(u + 1, v + 1)] = -entry
    return arrows


# ---------------------------------------------------------------------------
# Distinguished bases for mutated linear quivers
# ---------------------------------------------------------------------------

class UnrecognizedPattern(ValueError):
    """Quiver not covered by the recognized local configurations."""


def _clockwise_triangle_tops(q: Quiver) -> set[int]:
    """Vertices k such that (k-1, k, k+1) carries the oriented triangle
    (k-1) -> (k+1) -> k -> (k-1), all with multiplicity one."""
    tops = set()
    for k in range(2, q.n):
        if (q.arrows[k - 2][k] == 1 and q.arrows[k][k - 1] == 1
                and q.arrows[k - 1][k - 2] == 1):
            tops.add(k)
    return tops


def mutation_basis(n: int, target: Quiver) -> Basis:
    """Distinguished good basis for a quiver obtained by mutating the
    linear quiver, assembled from its local configurations.

    Recognized patterns: the linear graph in label order (any orientation);
    chains of clockwise oriented triangles on consecutive labels, possibly
    overlapping, with linear tails; and the two rank-3 cycle quivers coming
    from the annulus.  Raises UnrecognizedPattern otherwise.
    """
    if target.n != n:
        raise ValueError("rank mismatch")

    special = _rank3_cycle_basis(target)
    if special is not None:
        return special

    tops = _clockwise_triangle_tops(target)
    for k in tops:
        if k + 1 in tops:
            raise UnrecognizedPattern("adjacent triangle tops")

    # every arrow must lie inside a recognized triangle or join consecutive
    # labels with multiplicity one
    tri_pairs = set()
    for k in tops:
        tri_pairs |= {(k - 1, k), (k, k + 1), (k - 1, k + 1)}
    for (u, v), mult in target.arrow_pairs().items():
        a, b = min(u, v), max(u, v)
        if (a, b) in tri_pairs:
            continue
        if b - a != 1 or mult != 1:
            raise UnrecognizedPattern(
                f"arrow {u}->{v} (x{mult}) not part of a recognized pattern")

    zero = LatticeVector((0,) * n)
    alphas: dict[int, LatticeVector] = {n + 1: zero, n + 2: zero}

    def simple(i):
        return LatticeVector(tuple(1 if t == i - 1 else 0 for t in range(n)))

    for i in range(n, 0, -1):
        if i in tops:
            alphas[i] = -simple(i) + alphas[i + 1]
        elif i + 1 in tops:
            alphas[i] = simple(i) + alphas[i + 2]
        else:
            alphas[i] = simple(i) + alphas[i + 1]

    basis = Basis([alphas[i] for i in range(1, n + 1)])
    _validate_mutation_basis(basis, target)
    return basis


def _rank3_cycle_basis(q: Quiver) -> Optional[Basis]:
    """Special rank-3 cycle quivers: the two annulus triangulation quivers
    and the anticlockwise oriented triangle (whose clockwise twin is covered
    by the general triangle recursion)."""
    if q.n != 3:
        return None
    acyclic_cycle = Quiver.from_arrows(3, {(1, 2): 1, (1, 3): 1, (2, 3): 1})
    double_cycle = Quiver.from_arrows(3, {(2, 1): 1, (1, 3): 2, (3, 2): 1})
    anticlockwise = Quiver.from_arrows(3, {(1, 2): 1, (2, 3): 1, (3, 1): 1})
    if q in (acyclic_cycle, anticlockwise):
        return Basis.alternating(3)
    if q == double_cycle:
        return Basis.triangular(3)
    return None


def _validate_mutation_basis(basis: Basis, target: Quiver) -> None:
    from .quiver import euler_form  # local import to avoid cycle at module load

    d = basis.det()
    if d not in (1, -1):
        raise UnrecognizedPattern(f"assembled basis has determinant {d}")
    rep = check_vanishing_p3(basis).merge(
        check_quadratic(basis, euler_form(target), 3))
    if not rep.ok:
        raise UnrecognizedPattern(f"assembled basis is not good: {rep.violations}")
