"""Braiding, permutation and sign actions on unipotent matrices, and the
bounded orbit search certifying that two Stokes matrices are related.

The braiding move at (i, i+1) perturbs the identity by the block

    [[0, 1], [1, -m]]      (inverse: [[-m, 1], [1, 0]])

and acts by A -> X(A) A X(A), where m is read off the (i, i+1)/(i+1, i)
entry pair of A (for an upper-triangular matrix this is just A[i][i+1];
allowing the transposed position lets the same move act on matrices that
are unipotent with respect to a permuted order).  Together with permutation
conjugation and sign conjugation these generate the equivalence used by the
orbit search: two matrices are certified equivalent when a word in these
moves carries one to the other exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from . import _kernels
from .algebra import PolyMatrix, TruncatedPoly, _as_fraction

RationalMatrix = tuple  # tuple of tuples of Fractions
MatrixLike = Union[PolyMatrix, tuple, list]


# ---------------------------------------------------------------------------
# Exact matrix plumbing
# ---------------------------------------------------------------------------

def as_rational_matrix(m) -> RationalMatrix:
    if isinstance(m, PolyMatrix):
        raise TypeError("pass PolyMatrix entries through beta directly")
    rows = tuple(tuple(_as_fraction(x) for x in row) for row in m)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    return rows


def _unit_diagonal(rows) -> bool:
    return all(rows[i][i] == 1 for i in range(len(rows)))


def _mat_mul(a, b):
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)),
                           start=a[0][0] * 0) for j in range(n)) for i in range(n))


def _braid_block(n, i, m, forward, one, zero):
    rows = [[one if r == c else zero for c in range(n)] for r in range(n)]
    i -= 1
    if forward:
        rows[i][i], rows[i][i + 1] = zero, one
        rows[i + 1][i], rows[i + 1][i + 1] = one, -m
    else:
        rows[i][i], rows[i][i + 1] = -m, one
        rows[i + 1][i], rows[i + 1][i + 1] = one, zero
    return tuple(tuple(r) for r in rows)


def _beta_generic(i: int, mat, forward: bool):
    n = len(mat)
    if not 1 <= i <= n - 1:
        raise ValueError(f"braid index {i} out of range 1..{n - 1}")
    a = mat[i - 1][i]
    b = mat[i][i - 1]
    nz = (not _is_zero_entry(a), not _is_zero_entry(b))
    if all(nz):
        raise ValueError("matrix is not unipotent for any order at the braid position")
    m = a + b
    if isinstance(m, TruncatedPoly):
        one = TruncatedPoly.one(m.nvars, m.trunc)
        zero = TruncatedPoly.zero(m.nvars, m.trunc)
    else:
        one, zero = Fraction(1), Fraction(0)
    x = _braid_block(n, i, m, forward, one, zero)
    return _mat_mul(_mat_mul(x, mat), x)


def _is_zero_entry(x) -> bool:
    if isinstance(x, TruncatedPoly):
        return x.is_zero()
    return x == 0


def _beta_dispatch(i: int, A: MatrixLike, forward: bool):
    if isinstance(A, PolyMatrix):
        rows = tuple(tuple(A.entries[r][c] for c in range(A.n)) for r in range(A.n))
        if any(rows[k][k] != 1 for k in range(A.n)):
            raise ValueError("matrix must have unit diagonal")
        return PolyMatrix(A.n, [list(r) for r in _beta_generic(i, rows, forward)])
    rows = as_rational_matrix(A)
    if not _unit_diagonal(rows):
        raise ValueError("matrix must have unit diagonal")
    return _beta_generic(i, rows, forward)


def beta(i: int, A: MatrixLike):
    """Forward braiding action at (i, i+1); accepts rational or polynomial
    matrices with unit diagonal."""
    return _beta_dispatch(i, A, True)


def beta_inv(i: int, A: MatrixLike):
    """Inverse braiding action at (i, i+1)."""
    return _beta_dispatch(i, A, False)


def perm_conj(sigma, A: MatrixLike):
    """Conjugation by the permutation sending index k to sigma[k-1].

    (P A P^-1)[sigma(i), sigma(j)] = A[i, j]; output triangularity is not
    guaranteed and is re-checked by callers that need it.
    """
    sigma = tuple(int(s) for s in sigma)
    n = len(sigma)
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError("not a permutation of 1..n")
    inv = [0] * n
    for k, s in enumerate(sigma):
        inv[s - 1] = k
    if isinstance(A, PolyMatrix):
        return PolyMatrix(A.n, [[A.entries[inv[r]][inv[c]] for c in range(n)]
                                for r in range(n)])
    rows = as_rational_matrix(A)
    return tuple(tuple(rows[inv[r]][inv[c]] for c in range(n)) for r in range(n))


def sign_conj(k_or_vec, A: MatrixLike):
    """Conjugation by a diagonal sign matrix.

    Accepts a single 1-based index (flip that one sign) or a full vector
    of +-1.  Involutive.
    """
    if isinstance(A, PolyMatrix):
        n = A.n
        d = _sign_vector(k_or_vec, n)
        return PolyMatrix(n, [[A.entries[r][c] * Fraction(d[r] * d[c])
                               for c in range(n)] for r in range(n)])
    rows = as_rational_matrix(A)
    n = len(rows)
    d = _sign_vector(k_or_vec, n)
    return tuple(tuple(rows[r][c] * (d[r] * d[c]) for c in range(n))
                 for r in range(n))


def _sign_vector(k_or_vec, n) -> tuple:
    if isinstance(k_or_vec, int):
        if not 1 <= k_or_vec <= n:
            raise ValueError(f"sign index {k_or_vec} out of range 1..{n}")
        return tuple(-1 if t == k_or_vec - 1 else 1 for t in range(n))
    d = tuple(int(x) for x in k_or_vec)
    if len(d) != n or any(x not in (1, -1) for x in d):
        raise ValueError("sign vector must consist of +-1 of length n")
    return d


# ---------------------------------------------------------------------------
# Words of moves
# ---------------------------------------------------------------------------

Move = tuple  # ("braid", i, +1/-1) | ("perm", sigma) | ("sign", vec)


@dataclass(frozen=True)
class BraidWord:
    moves: tuple

    def apply(self, A: MatrixLike):
        m = A
        for mv in self.moves:
            m = apply_move(mv, m)
        return m

    def inverse(self) -> "BraidWord":
        out = []
        for mv in reversed(self.moves):
            if mv[0] == "braid":
                out.append(("braid", mv[1], -mv[2]))
            elif mv[0] == "perm":
                sigma = mv[1]
                inv = [0] * len(sigma)
                for k, s in enumerate(sigma):
                    inv[s - 1] = k + 1
                out.append(("perm", tuple(inv)))
            else:
                out.append(mv)
        return BraidWord(tuple(out))

    def __len__(self):
        return len(self.moves)


def apply_move(mv: Move, A: MatrixLike):
    kind = mv[0]
    if kind == "braid":
        return beta(mv[1], A) if mv[2] > 0 else beta_inv(mv[1], A)
    if kind == "perm":
        return perm_conj(mv[1], A)
    if kind == "sign":
        return sign_conj(mv[1], A)
    raise ValueError(f"unknown move {mv!r}")


@dataclass
class EquivalenceCertificate:
    source: RationalMatrix
    target: RationalMatrix
    word: BraidWord
    verified: bool

    def replay(self) -> bool:
        return self.word.apply(self.source) == self.target


# ---------------------------------------------------------------------------
# Orbit search
# ---------------------------------------------------------------------------

@dataclass
class OrbitSearchResult:
    """Outcome of a bounded orbit search.

    status "found" carries a certificate; "exhausted" means every state
    within the entry bound was explored without a hit (the budget ran out,
    which says nothing about equivalence); "inconclusive" means the depth
    limit stopped the search first.
    """

    status: str  # "found" | "exhausted" | "inconclusive"
    certificate: Optional[EquivalenceCertificate]
    depth_reached: int
    states: int
    pruned: int


def _to_int_matrix(m) -> np.ndarray:
    if isinstance(m, PolyMatrix):
        raise ValueError("orbit search works on evaluated matrices; "
                         "evaluate at a rational point first")
    rows = as_rational_matrix(m)
    n = len(rows)
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            x = rows[i][j]
            if x.denominator != 1:
                raise ValueError("orbit search expects integer matrices")
            out[i, j] = int(x)
    return out


def _np_to_rational(a: np.ndarray) -> RationalMatrix:
    return tuple(tuple(Fraction(int(x)) for x in row) for row in a)


def _sorting_permutation(a: np.ndarray) -> Optional[tuple]:
    """Permutation sigma with perm_conj(sigma, a) upper triangular, or None."""
    n = a.shape[0]
    succ = {i: set() for i in range(n)}
    deg = {i: 0 for i in range(n)}
    for i in range(n):
        for j in range(n):
            if i != j and a[i, j] != 0 and j not in succ[i]:
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
        return None
    sigma = [0] * n
    for pos, v in enumerate(order):
        sigma[v] = pos + 1
    return tuple(sigma)


def _conj_np(sigma: tuple, a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    out = np.zeros_like(a)
    for i in range(n):
        for j in range(n):
            out[sigma[i] - 1, sigma[j] - 1] = a[i, j]
    return out


def _is_upper(a: np.ndarray) -> bool:
    n = a.shape[0]
    return all(a[i, j] == 0 for i in range(n) for j in range(i))


def orbit_search(S1: MatrixLike, S2: MatrixLike, depth: int = 12,
                 entry_bound: int = 64) -> OrbitSearchResult:
    """Bounded BFS over braid moves certifying S1 ~ S2.

    Both inputs must be unit-diagonal integer matrices that are unipotent
    with respect to some order.  States are explored up to sign conjugation
    (lexicographically minimal representative); the target set is closed
    under triangularity-preserving permutation conjugations and all sign
    conjugations.  Absence of a certificate within the bounds is reported as
    inconclusive, never as inequivalence.
    """
    a1 = _to_int_matrix(S1)
    a2 = _to_int_matrix(S2)
    if a1.shape != a2.shape:
        raise ValueError("dimension mismatch")
    n = a1.shape[0]
    if any(a1[i, i] != 1 for i in range(n)) or any(a2[i, i] != 1 for i in range(n)):
        raise ValueError("matrices must have unit diagonal")

    src = _np_to_rational(a1)
    tgt = _np_to_rational(a2)
    if np.array_equal(a1, a2):
        cert = EquivalenceCertificate(src, tgt, BraidWord(()), True)
        return OrbitSearchResult("found", cert, 0, 1, 0)

    tau1 = _sorting_permutation(a1)
    tau2 = _sorting_permutation(a2)
    if tau1 is None or tau2 is None:
        raise ValueError("input is not unipotent with respect to any order")
    up1 = _conj_np(tau1, a1)
    up2 = _conj_np(tau2, a2)

    # Target set: sign-canonical forms of the upper-triangular permutation
    # conjugates of up2, remembering how to get back.
    targets: dict[bytes, tuple] = {}
    for sigma in itertools.permutations(range(1, n + 1)):
        cand = _conj_np(sigma, up2)
        if not _is_upper(cand):
            continue
        canon, signs = _kernels.sign_canonical(cand)
        key = canon.tobytes()
        if key not in targets:
            targets[key] = (sigma, tuple(int(s) for s in signs))

    canon0, _ = _kernels.sign_canonical(up1)
    key0 = canon0.tobytes()
    parents: dict[bytes, Optional[tuple]] = {key0: None}
    pruned = 0

    def reconstruct(final_key: bytes) -> EquivalenceCertificate:
        chain = []
        key = final_key
        while parents[key] is not None:
            pkey, move = parents[key]
            chain.append(move)
            key = pkey
        chain.reverse()

        moves: list[Move] = []
        ident = tuple(range(1, n + 1))

        def emit_sign(vec):
            if any(s != 1 for s in vec):
                moves.append(("sign", tuple(int(s) for s in vec)))

        def emit_perm(sigma):
            if tuple(sigma) != ident:
                moves.append(("perm", tuple(sigma)))

        emit_perm(tau1)
        cur = up1.copy()
        for (i, direction) in chain:
            canon, signs = _kernels.sign_canonical(cur)
            emit_sign(signs)
            cur = canon
            moves.append(("braid", i, direction))
            cur = _kernels.braid_apply(cur, i - 1, direction > 0)
        canon, signs = _kernels.sign_canonical(cur)
        emit_sign(signs)
        cur = canon
        sigma, tsigns = targets[cur.tobytes()]
        emit_sign(tsigns)
        inv = [0] * n
        for k, s in enumerate(sigma):
            inv[s - 1] = k + 1
        emit_perm(inv)
        inv2 = [0] * n
        for k, s in enumerate(tau2):
            inv2[s - 1] = k + 1
        emit_perm(inv2)

        word = BraidWord(tuple(moves))
        verified = word.apply(src) == tgt
        return EquivalenceCertificate(src, tgt, word, verified)

    if key0 in targets:
        return OrbitSearchResult("found", reconstruct(key0), 0, 1, pruned)

    frontier = [canon0]
    frontier_keys = [key0]
    for level in range(1, depth + 1):
        if not frontier:
            return OrbitSearchResult("exhausted", None, level - 1,
                                     len(parents), pruned)
        batch = np.stack(frontier)
        children, ok = _kernels.expand_frontier(batch, entry_bound)
        moves_per = 2 * (n - 1)
        new_frontier = []
        new_keys = []
        for idx in range(children.shape[0]):
            if not ok[idx]:
                pruned += 1
                continue
            s = idx // moves_per
            k = idx % moves_per
            direction = 1 if k < n - 1 else -1
            i = (k if k < n - 1 else k - (n - 1)) + 1
            canon, _ = _kernels.sign_canonical(children[idx])
            key = canon.tobytes()
            if key in parents:
                continue
            parents[key] = (frontier_keys[s], (i, direction))
            if key in targets:
                return OrbitSearchResult("found", reconstruct(key), level,
                                         len(parents), pruned)
            new_frontier.append(canon)
            new_keys.append(key)
        frontier = new_frontier
        frontier_keys = new_keys
    return OrbitSearchResult("inconclusive", None, depth, len(parents), pruned)


def equivalent(S1: MatrixLike, S2: MatrixLike, depth: int = 12,
               entry_bound: int = 64) -> Optional[EquivalenceCertificate]:
    """Shortest-word certificate that S1 and S2 are related, or None when the
    bounded search is inconclusive."""
    return orbit_search(S1, S2, depth, entry_bound).certificate


# ---------------------------------------------------------------------------
# Relations of the action
# ---------------------------------------------------------------------------

def random_unipotent(n: int, rng, bound: int = 5) -> RationalMatrix:
    return tuple(tuple(Fraction(1) if i == j
                       else (Fraction(rng.randint(-bound, bound)) if j > i
                             else Fraction(0))
                       for j in range(n)) for i in range(n))


def verify_braid_group_relations(n: int, samples: int = 100,
                                 seed: int = 7) -> dict:
    """Check the braid and commutation relations as actions on random
    unipotent upper-triangular integer matrices."""
    import random as _random
    if n < 3:
        raise ValueError("need n >= 3 for a braid relation")
    rng = _random.Random(seed)
    failures = []
    for t in range(samples):
        a = random_unipotent(n, rng)
        for i in range(1, n - 1):
            lhs = beta(i, beta(i + 1, beta(i, a)))
            rhs = beta(i + 1, beta(i, beta(i + 1, a)))
            if lhs != rhs:
                failures.append(("braid", t, i))
        for i in range(1, n):
            for j in range(i + 2, n):
                if beta(i, beta(j, a)) != beta(j, beta(i, a)):
                    failures.append(("commute", t, (i, j)))
        for i in range(1, n):
            if beta_inv(i, beta(i, a)) != a or beta(i, beta_inv(i, a)) != a:
                failures.append(("inverse", t, i))
    return {"n": n, "samples": samples, "failures": failures,
            "ok": not failures}
