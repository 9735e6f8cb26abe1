import os
import random
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from quiverstokes import _kernels
from quiverstokes.algebra import TruncatedPoly, joyce_point
from quiverstokes.braid import (BraidWord, apply_move, beta, beta_inv,
                                equivalent, orbit_search, perm_conj,
                                random_unipotent, sign_conj,
                                verify_braid_group_relations)
from quiverstokes.stokes import an_stokes


def F(rows):
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


class TestBeta:
    def test_rank2_sign_flip(self):
        assert beta(1, F([[1, 5], [0, 1]])) == F([[1, -5], [0, 1]])
        assert beta_inv(1, F([[1, 5], [0, 1]])) == F([[1, -5], [0, 1]])

    def test_a2_stokes(self):
        s2 = an_stokes(2).evaluate(joyce_point(2))
        assert beta(1, s2) == F([[1, 1], [0, 1]])

    def test_polynomial_matrix_path(self):
        m = an_stokes(2)
        out = beta(1, m)
        assert out.entries[0][1] == TruncatedPoly.variable(2, 1)

    def test_preserves_upper_unipotent(self):
        rng = random.Random(43)
        for _ in range(120):
            n = rng.randint(2, 6)
            a = random_unipotent(n, rng)
            for i in range(1, n):
                for out in (beta(i, a), beta_inv(i, a)):
                    for r in range(n):
                        assert out[r][r] == 1
                        for c in range(r):
                            assert out[r][c] == 0

    def test_roundtrips(self):
        rng = random.Random(47)
        for _ in range(120):
            n = rng.randint(2, 6)
            a = random_unipotent(n, rng)
            i = rng.randint(1, n - 1)
            assert beta_inv(i, beta(i, a)) == a
            assert beta(i, beta_inv(i, a)) == a

    def test_identity_fixed(self):
        ident = F([[1 if i == j else 0 for j in range(4)] for i in range(4)])
        for i in range(1, 4):
            assert beta(i, ident) == ident

    def test_rejects_bad_diagonal(self):
        with pytest.raises(ValueError):
            beta(1, F([[2, 0], [0, 1]]))


class TestBraidRelations:
    def test_relations_hold(self):
        for n in range(3, 7):
            assert verify_braid_group_relations(n, 100, seed=n)["ok"]


class TestPermAndSign:
    def test_sign_involutive(self):
        rng = random.Random(53)
        a = random_unipotent(4, rng)
        for k in range(1, 5):
            assert sign_conj(k, sign_conj(k, a)) == a

    def test_perm_composition(self):
        rng = random.Random(59)
        a = random_unipotent(4, rng)
        p1 = (2, 1, 4, 3)
        p2 = (3, 2, 1, 4)
        composed = tuple(p2[p1[i] - 1] for i in range(4))
        assert perm_conj(p2, perm_conj(p1, a)) == perm_conj(composed, a)

    def test_identity_perm(self):
        rng = random.Random(61)
        a = random_unipotent(3, rng)
        assert perm_conj((1, 2, 3), a) == a

    def test_sign_example(self):
        s2 = an_stokes(2).evaluate(joyce_point(2))
        assert sign_conj(2, s2) == F([[1, 1], [0, 1]])


class TestWord:
    def test_inverse_roundtrip(self):
        rng = random.Random(67)
        for _ in range(60):
            n = rng.randint(2, 5)
            a = random_unipotent(n, rng)
            moves = []
            current = a
            for _ in range(rng.randint(0, 6)):
                kind = rng.choice(("braid", "perm", "sign"))
                if kind == "braid":
                    mv = ("braid", rng.randint(1, n - 1), rng.choice((1, -1)))
                elif kind == "perm":
                    p = list(range(1, n + 1))
                    rng.shuffle(p)
                    mv = ("perm", tuple(p))
                else:
                    mv = ("sign", tuple(rng.choice((1, -1)) for _ in range(n)))
                try:
                    current = apply_move(mv, current)
                except ValueError:
                    continue  # braid position blocked after a permutation
                moves.append(mv)
            word = BraidWord(tuple(moves))
            assert word.apply(a) == current
            assert word.inverse().apply(current) == a


class TestOrbitSearch:
    def test_same_matrix_empty_word(self):
        s3 = an_stokes(3).evaluate(joyce_point(3))
        cert = equivalent(s3, s3)
        assert cert is not None and len(cert.word) == 0 and cert.verified

    def test_a3_vs_cyclic_triangle(self):
        s3 = an_stokes(3).evaluate(joyce_point(3))
        target = F([[1, -1, -1], [0, 1, 0], [0, 1, 1]])
        cert = equivalent(s3, target)
        assert cert is not None and cert.verified
        assert BraidWord(cert.word.moves).apply(s3) == target

    def test_annulus_pair(self):
        s_printed = F([[1, -1, 1], [0, 1, 0], [0, -1, 1]])
        s_prime = F([[1, -1, -1], [0, 1, 1], [0, 0, 1]])
        cert = equivalent(s_prime, s_printed)
        assert cert is not None and cert.verified
        # related by signs and permutations alone
        assert all(mv[0] != "braid" for mv in cert.word.moves)

    def test_depth_zero_inconclusive(self):
        s3 = an_stokes(3).evaluate(joyce_point(3))
        target = F([[1, 2, 0], [0, 1, 2], [0, 0, 1]])
        res = orbit_search(s3, target, depth=0)
        assert res.certificate is None
        assert res.status in ("inconclusive", "exhausted")

    def test_entry_bound_prunes(self):
        big = F([[1, 63, 0], [0, 1, 63], [0, 0, 1]])
        tgt = F([[1, 2, 0], [0, 1, 2], [0, 0, 1]])
        res = orbit_search(big, tgt, depth=3, entry_bound=64)
        assert res.pruned > 0 or res.status == "found"

    def test_rejects_non_integer(self):
        with pytest.raises(ValueError):
            orbit_search(F([[1, Fraction(1, 2)], [0, 1]]), F([[1, 1], [0, 1]]))


class TestKernels:
    def test_backends_agree(self):
        rng = np.random.default_rng(5)
        for n in (2, 3, 4, 5):
            batch = np.zeros((6, n, n), dtype=np.int64)
            for b in range(6):
                m = np.eye(n, dtype=np.int64)
                for i in range(n):
                    for j in range(i + 1, n):
                        m[i, j] = rng.integers(-5, 6)
                batch[b] = m
            got_c, got_ok = _kernels.expand_frontier(batch, 64)
            exp_c, exp_ok = _kernels._py_expand_frontier(batch, 64)
            assert np.array_equal(got_c, exp_c)
            assert np.array_equal(got_ok, exp_ok)
            for b in range(6):
                c1, s1 = _kernels.sign_canonical(batch[b])
                c2, s2 = _kernels._py_sign_canonical(batch[b])
                assert np.array_equal(c1, c2)
                assert np.array_equal(s1, s2)

    def test_numpy_backend_selectable(self):
        code = ("import os; os.environ['QUIVERSTOKES_BACKEND']='numpy'; "
                "from quiverstokes import _kernels; "
                "print(_kernels.backend_name())")
        out = subprocess.run([sys.executable, "-c", code],
                             capture_output=True, text=True, check=True)
        assert out.stdout.strip() == "numpy"

    def test_sign_canonical_is_minimal(self):
        rng = np.random.default_rng(9)
        m = np.eye(4, dtype=np.int64)
        for i in range(4):
            for j in range(i + 1, 4):
                m[i, j] = rng.integers(-4, 5)
        canon, signs = _kernels.sign_canonical(m)
        assert np.array_equal(canon, m * np.outer(signs, signs))
        for mask in range(1 << 3):
            d = np.ones(4, dtype=np.int64)
            for t in range(3):
                if (mask >> t) & 1:
                    d[t + 1] = -1
            cand = m * np.outer(d, d)
            assert tuple(canon.ravel()) <= tuple(cand.ravel())
