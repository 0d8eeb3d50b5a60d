"""Integer linear algebra and the lattice engine."""

from fractions import Fraction

import pytest

from superdenom.intlinalg import (det, hnf, hnf_with_transform,
                                  left_kernel_basis, mat_inv, mat_mul,
                                  snf_invariants)
from superdenom.lattices import (IntegralLattice, LorentzianLattice,
                                 LorentzianPoint, build_coset_shift_table,
                                 e8_lattice, enumerate_coset,
                                 fixed_sublattice, orthogonal_complement,
                                 preserves_lattice, theta_coset)
from superdenom.octonion import build_twist_element, rho_V

F = Fraction


class TestIntLinalg:
    def test_hnf_transform_property(self):
        a = [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]
        h, u = hnf_with_transform(a)
        assert mat_mul(u, a) == h
        assert abs(det(u)) == 1

    def test_left_kernel(self):
        a = [[1, 2], [2, 4], [3, 6]]
        k = left_kernel_basis(a)
        assert len(k) == 2
        for row in k:
            assert all(sum(r * a[i][j] for i, r in enumerate(row)) == 0
                       for j in range(2))

    def test_snf_divisibility(self):
        # d1 = gcd of entries = 2, d1*d2 = gcd of 2x2 minors = 4,
        # d1*d2*d3 = det = 624
        d = snf_invariants([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
        assert d == [2, 2, 156]
        for i in range(len(d) - 1):
            assert d[i + 1] % d[i] == 0

    def test_mat_inv(self):
        a = [[F(2), F(1)], [F(1), F(1)]]
        assert mat_mul(a, mat_inv(a)) == [[1, 0], [0, 1]]


class TestE8:
    def test_unimodular_even(self):
        e8 = e8_lattice()
        assert e8.det() == 1 and e8.is_even() and e8.rank == 8
        assert e8.level() == 1

    def test_theta_series(self):
        th = theta_coset(e8_lattice(), None, F(4))
        assert [th.coeff(k) for k in range(4)] == [1, 240, 2160, 6720]

    def test_membership(self):
        e8 = e8_lattice()
        halves = e8.coords_of([F(1, 2)] * 8)  # all-halves vector is in E8
        assert all(x.denominator == 1 for x in halves)
        # an odd-sum integer vector lies in the span but not in the lattice
        odd = e8.coords_of([1, 0, 0, 0, 0, 0, 0, 0])
        assert any(x.denominator != 1 for x in odd)

    def test_twists_preserve_e8(self):
        e8 = e8_lattice()
        for order in (3, 7):
            assert preserves_lattice(e8, rho_V(build_twist_element(order)))


FIXED_FACTS = {3: (4, 9, 3, (3, 3), 12), 7: (2, 7, 7, (7,), 42)}


class TestFixedLattices:
    @pytest.mark.parametrize("order", [3, 7])
    def test_invariants(self, order):
        rank, det_, level, invs, roots = FIXED_FACTS[order]
        e8 = e8_lattice()
        m = rho_V(build_twist_element(order))
        f = fixed_sublattice(m, e8)
        c = orthogonal_complement(f, e8)
        assert (f.rank, f.det(), f.level()) == (rank, det_, level)
        assert f.is_even() and c.is_even()
        assert f.discriminant_group().invariants == invs
        assert f.rank + c.rank == 8
        assert c.det() == f.det()
        nroots = sum(1 for v in enumerate_coset(c, None, 2)
                     if c.norm_of_coords(v) == 2)
        assert nroots == roots

    @pytest.mark.parametrize("order", [3, 7])
    def test_n_dual_inside_lattice(self, order):
        e8 = e8_lattice()
        f = fixed_sublattice(rho_V(build_twist_element(order)), e8)
        n = f.level()
        dual = f.dual()
        for i in range(dual.rank):
            v = tuple(n * x for x in dual.basis[i])
            f.coords_of(v)  # must not raise, and must be integral
            assert all(x.denominator == 1 for x in f.coords_of(v))

    @pytest.mark.parametrize("order", [3, 7])
    def test_shift_table_covers_cosets(self, order):
        e8 = e8_lattice()
        f = fixed_sublattice(rho_V(build_twist_element(order)), e8)
        dg = f.discriminant_group()
        table = build_coset_shift_table(f, e8, dg)
        assert len(table) == dg.order
        # the zero coset has the zero shift
        zero = dg.coset_label((0,) * f.rank)
        assert all(x == 0 for x in table[zero])

    def test_dual_of_dual(self):
        f = fixed_sublattice(rho_V(build_twist_element(3)), e8_lattice())
        dd = f.dual().dual()
        assert dd.gram == f.gram and dd.basis == f.basis


class TestEnumeration:
    def test_counts_match_theta(self):
        f = fixed_sublattice(rho_V(build_twist_element(3)), e8_lattice())
        th = theta_coset(f, None, F(5))
        for norm in (2, 4, 6, 8):
            count = sum(1 for v in enumerate_coset(f, None, norm)
                        if f.norm_of_coords(v) == norm)
            assert count == th.coeff(F(norm, 2))

    def test_negative_bound_is_empty(self):
        f = e8_lattice()
        assert enumerate_coset(f, None, F(-1)) == []

    def test_deterministic_order(self):
        f = e8_lattice()
        a = enumerate_coset(f, None, 2)
        assert a == sorted(a)
        assert len(a) == 241  # 240 roots plus zero


class TestLorentzian:
    def setup_method(self):
        e8 = e8_lattice()
        self.f = fixed_sublattice(rho_V(build_twist_element(3)), e8)
        self.lor = LorentzianLattice(self.f)

    def test_norm_and_height(self):
        zero = (0,) * self.f.rank
        p = LorentzianPoint(zero, 2, 3)
        assert self.lor.norm(p) == -12 and p.height == 5

    def test_pairing_divisor_and_divide(self):
        zero = (0,) * self.f.rank
        p = LorentzianPoint(zero, 3, 6)
        assert self.lor.pairing_divisor(p) == 3
        assert p.divide(3) == LorentzianPoint(zero, 1, 2)
        with pytest.raises(ValueError):
            p.divide(2)

    def test_cone_enum_predicate(self):
        pts = self.lor.positive_cone_enum(4)
        assert len(pts) == len(set(pts))
        for p in pts:
            assert 1 <= p.height <= 4 and p.m >= 0 and p.n >= 0
            assert self.lor.norm(p) <= 0
        # closed under the predicate: brute filter over a box reproduces it
        brute = set()
        for m in range(5):
            for n in range(5):
                if not 1 <= m + n <= 4:
                    continue
                for coords in enumerate_coset(self.f.dual(), None,
                                              F(2 * m * n)):
                    q = LorentzianPoint(tuple(coords), m, n)
                    if self.lor.norm(q) <= 0:
                        brute.add(q)
        assert brute == set(pts)

    def test_isotropic_enum(self):
        iso = self.lor.primitive_isotropic_enum(4)
        seen = set()
        for p, kmax in iso:
            assert self.lor.norm(p) == 0
            assert self.lor.pairing_divisor(p) == 1
            assert self.lor.in_lattice(p)
            assert kmax == 4 // p.height
            assert p not in seen
            seen.add(p)

    def test_membership_layers(self):
        # a vector of 3L* that is not in 3L
        dual = self.f.dual()
        cands = [c for c in enumerate_coset(dual, None, F(4, 3))
                 if self.lor.rstar_norm(tuple(c)) == F(4, 3)]
        beta = LorentzianPoint(tuple(cands[0]), 1, 1)
        alpha = beta.multiply(3)
        assert not self.lor.in_lattice(beta)
        assert self.lor.in_lattice(alpha)
        assert self.lor.in_n_dual(alpha, 3)
        assert not self.lor.in_n_lattice(alpha, 3)
