import random
from fractions import Fraction

import pytest

from quiverstokes.algebra import (Basis, LatticeVector, PolyMatrix,
                                  TruncatedPoly, joyce_point)
from quiverstokes.goodness import mutation_basis
from quiverstokes.quiver import (apply_word, euler_form, kronecker_quiver,
                                 linear_quiver)
from quiverstokes.stokes import (Chamber, ChamberError, DTModel, RayCollision,
                                 an_chamber, an_stokes, factor_product,
                                 level2_chamber, natural_lifts, ray_order,
                                 stokes_factor, stokes_product, verify_an_jet,
                                 convex_charge)


def lv(*coords):
    return LatticeVector(tuple(coords))


def s(nvars, i):
    return TruncatedPoly.variable(nvars, i)


class TestDTModel:
    def test_symmetry(self):
        for model in (DTModel.simples_only(), DTModel.an_intervals(),
                      DTModel.kronecker_chain(3),
                      DTModel.table({(1, 1, 0): Fraction(2)})):
            for v in (lv(1, 0, 0), lv(1, 1, 0), lv(0, 1, 1), lv(1, -1, 0)):
                assert model.dt(v) == model.dt(-v)

    def test_simples_only_is_unit_kronecker_on_simples(self):
        a = DTModel.simples_only()
        b = DTModel.kronecker_chain(1)
        for v in (lv(1, 0), lv(0, -1)):
            assert a.dt(v) == b.dt(v) == 1

    def test_kronecker_values(self):
        m = DTModel.kronecker_chain(3)
        assert m.dt(lv(1, 1, 0)) == 3
        assert m.dt(lv(0, 1, 1)) == 3
        assert m.dt(lv(1, 0, 1)) == 0
        assert DTModel.kronecker_chain(2).dt(lv(1, 1)) == -2

    def test_intervals(self):
        m = DTModel.an_intervals()
        assert m.dt(lv(0, 1, 1, 0)) == 1
        assert m.dt(lv(1, 0, 1, 0)) == 0


class TestRayOrder:
    def chamber(self):
        return Chamber(((-1, 1), (1, 1)), (lv(1, 0), lv(0, 1), lv(1, 1)))

    def test_sorting_example(self):
        ch = self.chamber()
        out = ray_order(ch, [lv(0, 1), lv(1, 1), lv(1, 0)])
        assert [v.coords for v in out] == [(1, 0), (1, 1), (0, 1)]

    def test_singleton(self):
        assert ray_order(self.chamber(), [lv(1, 0)]) == [lv(1, 0)]

    def test_negative_ray_is_flipped(self):
        out = ray_order(self.chamber(), [lv(-1, 0), lv(0, 1)])
        assert [v.coords for v in out] == [(1, 0), (0, 1)]

    def test_collision_raises(self):
        ch = Chamber(((0, 1), (0, 2)), (lv(1, 0),))
        with pytest.raises(RayCollision):
            ray_order(ch, [lv(1, 0), lv(0, 1)])

    def test_zero_class_raises(self):
        ch = Chamber(((-1, 1), (-1, 1)), (lv(1, 0),))
        with pytest.raises(ChamberError):
            ray_order(ch, [lv(1, -1)])

    def test_boundary_ray_is_leftmost(self):
        ch = Chamber(((-1, 0), (1, 1)), (lv(1, 0), lv(0, 1)))
        out = ray_order(ch, [lv(0, 1), lv(1, 0)])
        assert [v.coords for v in out] == [(1, 0), (0, 1)]


class TestChamberValidation:
    def test_charge_must_stay_in_half_plane(self):
        with pytest.raises(ChamberError):
            Chamber(((1, 0), (0, 1)), ())

    def test_active_ray_collision(self):
        with pytest.raises(RayCollision):
            Chamber(((-1, 1), (-2, 2)), (lv(1, 0), lv(0, 1)))


class TestStokesFactor:
    def test_a2(self):
        b = Basis.triangular(2)
        e = euler_form(linear_quiver(2))
        f = stokes_factor(1, 2, b, e, 1)
        assert f == PolyMatrix.elementary(2, 1, 2, -s(2, 1))

    def test_kronecker(self):
        for lam in (1, 2, 3, 4):
            b = Basis.triangular(2)
            e = euler_form(kronecker_quiver(lam))
            f = stokes_factor(1, 2, b, e, 1)
            coeff = TruncatedPoly.monomial(2, (1, 0), (-1) ** lam * lam)
            assert f == PolyMatrix.elementary(2, 1, 2, coeff)

    def test_zero_dt_gives_identity(self):
        b = Basis.triangular(2)
        e = euler_form(linear_quiver(2))
        assert stokes_factor(1, 2, b, e, 0) == PolyMatrix.identity(2, 2)

    def test_factor_inverse_is_sign_flip(self):
        b = Basis.triangular(3)
        e = euler_form(linear_quiver(3))
        f = stokes_factor(1, 3, b, e, 1)
        inv = f.inverse_unipotent()
        flipped = PolyMatrix.elementary(3, 1, 3, -f.entries[0][2])
        assert inv == flipped


class TestStokesProduct:
    def test_a3_simples_chamber(self):
        q = linear_quiver(3)
        b = Basis.triangular(3)
        ch = level2_chamber(q, convex_charge(3))
        sd = stokes_product(b, euler_form(q), DTModel.an_intervals(), ch, None)
        assert sd.product == an_stokes(3)
        assert sd.order == (1, 2, 3)
        assert sd.product.is_unipotent_wrt(sd.order)

    def test_cyclic_triangle(self):
        q = apply_word(linear_quiver(3), [2])
        b = mutation_basis(3, q)
        ch = level2_chamber(q, convex_charge(3))
        sd = stokes_product(b, euler_form(q), DTModel.from_quiver_extensions(q),
                            ch, None)
        rows = [[c.text() for c in row] for row in sd.product.entries]
        assert rows == [["1", "-s1*s2", "-s1"], ["0", "1", "0"], ["0", "s2", "1"]]
        assert sd.order == (1, 3, 2)

    def test_a4_jet_mod_s3(self):
        q = linear_quiver(4)
        b = Basis.triangular(4)
        ch = an_chamber(4, [(-10, 1), (-1, 2), (1, 2), (1, 3)])
        sd = stokes_product(b, euler_form(q), DTModel.an_intervals(), ch, 3)
        expect = an_stokes(4).truncate(3)
        assert sd.product == expect

    def test_empty_active_set_gives_identity(self):
        b = Basis.triangular(2)
        ch = Chamber(((-1, 1), (1, 1)), ())
        sd = stokes_product(b, euler_form(linear_quiver(2)),
                            DTModel.simples_only(), ch, None)
        assert sd.product == PolyMatrix.identity(2, 2)

    def test_inconsistent_active_class(self):
        b = Basis.triangular(2)
        ch = Chamber(((-1, 1), (1, 1)), (lv(1, 0),))
        model = DTModel.table({}, simples_default=False)
        with pytest.raises(ChamberError):
            stokes_product(b, euler_form(linear_quiver(2)), model, ch, None)


class TestNaturalLifts:
    def setup_method(self):
        self.basis = Basis.triangular(4)
        self.e = euler_form(linear_quiver(4))
        self.model = DTModel.an_intervals()
        self.ch1 = an_chamber(4, [(3, 1), (1, 1), (-1, 1), (-3, 1)])
        self.ch2 = an_chamber(4, [(-10, 1), (-1, 2), (1, 2), (1, 3)])

    def test_a4_two_values_mod_s3(self):
        lifts = natural_lifts(self.basis, self.e, self.model,
                              [self.ch1, self.ch2], 3)
        assert len(lifts) == 2
        assert an_stokes(4) in lifts
        extra = next(m for m in lifts if m != an_stokes(4))
        assert extra.entries[0][3] == TruncatedPoly.monomial(4, (1, 1, 1, 0))

    def test_a4_unique_mod_s5(self):
        lifts = natural_lifts(self.basis, self.e, self.model,
                              [self.ch1, self.ch2], 5)
        assert lifts == [an_stokes(4)]

    def test_a2_single_value(self):
        b = Basis.triangular(2)
        e = euler_form(linear_quiver(2))
        chambers = [an_chamber(2, [(-3, 1), (1, 1)]), an_chamber(2, [(1, 2), (-5, 1)])]
        lifts = natural_lifts(b, e, DTModel.an_intervals(), chambers, 3)
        assert lifts == [an_stokes(2)]


class TestAnStokes:
    def test_small(self):
        m2 = an_stokes(2)
        assert m2.entries[0][1] == -s(2, 1)
        m3 = an_stokes(3)
        assert m3.entries[0][1] == -s(3, 1)
        assert m3.entries[1][2] == -s(3, 2)
        assert m3.entries[0][2].is_zero()

    def test_joyce_point_is_bidiagonal_integer_matrix(self):
        for n in range(2, 6):
            m = an_stokes(n).evaluate(joyce_point(n))
            for i in range(n):
                for j in range(n):
                    expect = 1 if i == j else (-1 if j == i + 1 else 0)
                    assert m[i][j] == expect


class TestFactorProduct:
    def test_spec_examples(self):
        t = an_stokes(3)
        cs = factor_product(t, [(2, 3), (1, 3), (1, 2)])
        assert [c.text() for c in cs] == ["-s2", "0", "-s1"]
        cs = factor_product(t, [(1, 2), (1, 3), (2, 3)])
        assert [c.text() for c in cs] == ["-s1", "-s1*s2", "-s2"]

    def test_a4_chain_order_recovers_interval_factor(self):
        t = an_stokes(4)
        pos = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
        cs = factor_product(t, pos)
        by_pos = dict(zip(pos, cs))
        assert by_pos[(1, 4)] == -TruncatedPoly.monomial(4, (1, 1, 1, 0))

    def test_no_solution(self):
        t = an_stokes(3)
        with pytest.raises(ValueError):
            factor_product(t, [(1, 2), (2, 3)])  # cannot produce the 0 at (1,3)

    def test_random_roundtrip(self):
        rng = random.Random(41)
        done = 0
        while done < 110:
            n = rng.randint(2, 4)
            order = list(range(1, n + 1))
            rng.shuffle(order)
            pos_pool = [(order[a], order[b])
                        for a in range(n) for b in range(a + 1, n)]
            rng.shuffle(pos_pool)
            positions = pos_pool[:rng.randint(1, len(pos_pool))]
            m = PolyMatrix.identity(n, n)
            coeffs = []
            for (i, j) in positions:
                terms = {tuple(rng.randint(0, 2) for _ in range(n)):
                         Fraction(rng.randint(-3, 3)) for _ in range(2)}
                c = TruncatedPoly(n, terms)
                coeffs.append(c)
                m = m * PolyMatrix.elementary(n, i, j, c) if not c.is_zero() else m
            got = factor_product(m, positions)
            rebuilt = PolyMatrix.identity(n, n)
            for (i, j), c in zip(positions, got):
                if not c.is_zero():
                    rebuilt = rebuilt * PolyMatrix.elementary(n, i, j, c)
            assert rebuilt == m
            done += 1


class TestVerifyAnJet:
    def test_n2_and_n3(self):
        assert verify_an_jet(2, 80)["ok"]
        rep = verify_an_jet(3, 150)
        assert rep["ok"] and rep["chambers"] >= 2

    def test_range(self):
        with pytest.raises(ValueError):
            verify_an_jet(6)


class TestChamberIndependence:
    def test_mutated_quiver_jets_agree_mod_s3(self):
        # order-3 jets of a good pair are the same in every valid chamber
        q = apply_word(linear_quiver(4), [2])
        basis = mutation_basis(4, q)
        e = euler_form(q)
        model = DTModel.from_quiver_extensions(q)
        jets = set()
        import itertools
        pts = [(Fraction(3 * (k + 1) ** 2 - 12), Fraction(2)) for k in range(4)]
        for perm in itertools.permutations(range(4)):
            Z = tuple(pts[p] for p in perm)
            try:
                ch = level2_chamber(q, Z)
                jets.add(stokes_product(basis, e, model, ch, 3).product)
            except (RayCollision, ChamberError):
                continue
        assert len(jets) == 1

    def test_natural_lift_values_at_unit_point_are_small(self):
        # regression property: unit-point entries of the linear-quiver lifts
        # stay in {-1, 0, 1} for the triangular basis
        from quiverstokes.stokes import enumerate_an_chambers
        for n in (2, 3, 4):
            basis = Basis.triangular(n)
            e = euler_form(linear_quiver(n))
            model = DTModel.an_intervals()
            chambers = enumerate_an_chambers(n, 120)
            for p in (3, n + 1):
                for lift in natural_lifts(basis, e, model, chambers, p):
                    vals = lift.evaluate(joyce_point(n))
                    assert all(x in (-1, 0, 1) for row in vals for x in row)


class TestPipelineEvaluations:
    def test_mu1mu3_a4_at_unit_point(self):
        from quiverstokes.verify import pipeline_product
        prod = pipeline_product(4, [3, 1],
                                [(-9, 2), (0, 2), (15, 2), (36, 2)])
        assert prod.evaluate(joyce_point(4)) == (
            (1, 1, -1, -1), (0, 1, -1, -1), (0, 0, 1, 0), (0, 0, 1, 1))
