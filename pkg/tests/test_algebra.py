"""
Finite fields, polynomials, factorization, linear algebra and residue rings.
"""

import random

import pytest

from drinfeld_lab.algebra.factor import (
    factor,
    irreducibles_of_degree,
    is_irreducible,
    least_irreducible,
    necklace_count,
    splitting_degree,
)
from drinfeld_lab.algebra.fields import FiniteField, PrimeField, constant_field, extension_field
from drinfeld_lab.algebra.linalg import FqMatrix, reverse_echelon_basis
from drinfeld_lab.algebra.matrix_groups import MatrixAlgebra
from drinfeld_lab.algebra.poly import Poly, Var
from drinfeld_lab.algebra.residue_ring import ResidueRing
from drinfeld_lab.algebra.smith import invariant_factors
from drinfeld_lab.core.cache import get_cache
from drinfeld_lab.core.exceptions import AmbientCapError, DomainError

FIELDS = [
    pytest.param(lambda: PrimeField(5), id="F5"),
    pytest.param(lambda: constant_field(4), id="F4"),
    pytest.param(lambda: constant_field(9), id="F9"),
    pytest.param(lambda: extension_field(constant_field(2), 3), id="F8/F2"),
]


class TestFieldAxioms:
    """Randomized field axioms with fixed seeds."""

    @pytest.mark.parametrize("make_field", FIELDS)
    def test_ring_laws(self, make_field):
        F = make_field()
        rng = random.Random(20240611)
        for _ in range(250):
            a, b, c = (F.random_element(rng) for _ in range(3))
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
            assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
            assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
            assert F.add(a, F.neg(a)) == F.zero
            if a != F.zero:
                assert F.mul(a, F.inv(a)) == F.one

    @pytest.mark.parametrize("make_field", FIELDS)
    def test_frobenius_is_additive(self, make_field):
        F = make_field()
        rng = random.Random(7)
        for _ in range(50):
            a, b = F.random_element(rng), F.random_element(rng)
            assert F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b))
            assert F.frob(a, F.fq_dimension) == a

    @pytest.mark.parametrize("make_field", FIELDS)
    def test_encode_decode(self, make_field):
        F = make_field()
        for x in F.elements():
            assert F.decode(F.encode(x)) == x


class TestFiniteFields:
    """Concrete facts about small fields."""

    def test_f4_over_f2(self, f4_over_f2):
        k = f4_over_f2
        omega = (0, 1)
        assert k.cardinality == 4
        assert k.q == 2
        assert k.mul(omega, omega) == (1, 1)
        assert k.inv(omega) == (1, 1)
        assert k.frob(omega) == (1, 1)
        assert k.frob(omega, 2) == omega

    def test_constant_f4_frobenius_is_trivial(self):
        F4 = constant_field(4)
        assert F4.q == 4
        assert all(F4.frob(x) == x for x in F4.elements())

    def test_elements_are_ordered(self):
        F9 = constant_field(9)
        elements = list(F9.elements())
        assert len(elements) == 9
        assert [F9.sort_key(x) for x in elements] == list(range(9))

    def test_not_a_prime_power(self):
        with pytest.raises(DomainError):
            constant_field(6)

    def test_reducible_modulus_rejected(self):
        with pytest.raises(DomainError):
            FiniteField(PrimeField(2), (1, 0, 1))

    def test_non_monic_modulus_rejected(self):
        with pytest.raises(DomainError):
            FiniteField(PrimeField(3), (1, 0, 2))


class TestPolynomials:
    """Polynomial arithmetic over F_q."""

    def test_divmod(self, f2):
        f = Poly.from_ints(f2, [1, 1, 0, 1])
        g = Poly.from_ints(f2, [1, 1])
        q, r = divmod(f, g)
        assert q * g + r == f
        assert r.degree < g.degree

    def test_gcd(self, f2):
        a = Poly.from_ints(f2, [1, 1])
        b = Poly.from_ints(f2, [1, 1, 1])
        assert (a * b).gcd(a * a) == a
        assert a.gcd(b).is_one()

    def test_compose(self, f2):
        w = Poly.from_ints(f2, [1, 1], Var.U)
        b = Poly.from_ints(f2, [0, 0, 1], Var.T)
        assert w.compose(b) == Poly.from_ints(f2, [1, 0, 1], Var.T)

    def test_variables_do_not_mix(self, f2):
        assert Poly.gen(f2, Var.T) != Poly.gen(f2, Var.THETA)


class TestFactorization:
    """Irreducibility, factorization and splitting degrees."""

    def test_necklace_counts(self):
        assert necklace_count(2, 1) == 2
        assert necklace_count(2, 3) == 2
        assert necklace_count(2, 4) == 3
        assert necklace_count(3, 2) == 3

    def test_irreducible_enumeration(self, f2):
        quartics = irreducibles_of_degree(f2, 4)
        assert len(quartics) == 3
        assert all(is_irreducible(f) for f in quartics)

    def test_least_irreducible_is_cached(self, f2):
        least_irreducible.cache_clear()
        f = least_irreducible(f2, 2)
        assert f == Poly.from_ints(f2, [1, 1, 1])
        assert get_cache().inspect()["moduli"]

    def test_factor_reconstructs(self):
        F3 = constant_field(3)
        rng = random.Random(11)
        for _ in range(20):
            f = Poly(F3, [F3.random_element(rng) for _ in range(6)] + [F3.one])
            product = Poly.one(F3)
            for g, e in factor(f):
                assert is_irreducible(g)
                assert g.is_monic()
                product = product * g**e
            assert product == f

    def test_factor_with_multiplicity(self, f2):
        x1 = Poly.from_ints(f2, [1, 1])
        x2 = Poly.from_ints(f2, [1, 1, 1])
        assert factor(x1**3 * x2) == [(x1, 3), (x2, 1)]

    def test_splitting_degree(self, f2):
        g2 = Poly.from_ints(f2, [1, 1, 1])
        g3 = Poly.from_ints(f2, [1, 1, 0, 1])
        assert splitting_degree(g2) == 2
        assert splitting_degree(g3) == 3
        assert splitting_degree(g2 * g3) == 6
        assert splitting_degree(Poly.from_ints(f2, [0, 1, 1])) == 1

    def test_splitting_degree_cap(self, f2):
        with pytest.raises(AmbientCapError):
            splitting_degree(Poly.from_ints(f2, [1, 1, 1]) * Poly.from_ints(f2, [1, 1, 0, 1]), cap=3)

    def test_splitting_degree_needs_squarefree(self, f2):
        with pytest.raises(DomainError):
            splitting_degree(Poly.from_ints(f2, [1, 1]) ** 2)


class TestLinearAlgebra:
    """Kernels, solving and inverses over F_q."""

    def test_kernel(self, f2):
        M = FqMatrix.from_rows(f2, [[1, 1, 0], [0, 1, 1]])
        kernel = M.kernel()
        assert len(kernel) == 1
        assert M.apply(kernel[0]) == (0, 0)

    def test_solve(self, f2):
        M = FqMatrix.from_rows(f2, [[1, 1], [0, 1]])
        assert M.solve([1, 1]) == (0, 1)
        singular = FqMatrix.from_rows(f2, [[1, 1], [1, 1]])
        assert singular.solve([1, 0]) is None

    def test_inverse(self):
        F5 = PrimeField(5)
        M = FqMatrix.from_rows(F5, [[2, 1], [1, 1]])
        assert M @ M.inverse() == FqMatrix.identity(F5, 2)

    def test_reverse_echelon(self, f2):
        basis = reverse_echelon_basis(f2, [(1, 1, 0), (0, 1, 1), (1, 0, 1)])
        assert len(basis) == 2
        pivots = [max(i for i, c in enumerate(v) if c) for v in basis]
        assert pivots == sorted(pivots, reverse=True)


class TestSmithForm:
    """Invariant factors over F_q[t]."""

    def test_diagonal(self, f2):
        t = Poly.gen(f2, Var.T)
        zero = Poly.zero(f2, Var.T)
        t1 = Poly.from_ints(f2, [1, 1], Var.T)
        assert invariant_factors([[t, zero], [zero, t]]) == [t, t]
        assert invariant_factors([[t, zero], [zero, t1]]) == [t * t1]

    def test_unimodular(self, f2):
        one = Poly.one(f2, Var.T)
        t = Poly.gen(f2, Var.T)
        assert invariant_factors([[one, t], [Poly.zero(f2, Var.T), one]]) == []


class TestResidueRings:
    """A/(a) and matrices over it."""

    def test_units(self, f2):
        R = ResidueRing(Poly.from_ints(f2, [1, 0, 1], Var.T))
        assert R.cardinality == 4
        assert R.unit_count == 2
        assert len(R.units()) == 2
        assert R.prime_factors == [(Poly.from_ints(f2, [1, 1], Var.T), 2)]

    def test_field_level(self, f2):
        R = ResidueRing(Poly.from_ints(f2, [1, 1, 1], Var.T))
        assert R.unit_count == 3
        for x in R.units():
            assert R.mul(x, R.inv(x)) == R.one

    def test_constant_level_rejected(self, f2):
        with pytest.raises(DomainError):
            ResidueRing(Poly.one(f2, Var.T))

    def test_gl2_f2(self, f2):
        algebra = MatrixAlgebra(ResidueRing(Poly.gen(f2, Var.T)), 2)
        assert algebra.gl_order == 6
        assert algebra.sl_order == 6
        assert len(algebra.general_linear_group(100)) == 6
        assert len(algebra.conjugacy_classes(100)) == 3

    def test_matrix_invariants(self):
        F3 = constant_field(3)
        algebra = MatrixAlgebra(ResidueRing(Poly.gen(F3, Var.T)), 2)
        m = algebra.from_rows([[(2,), (0,)], [(0,), (2,)]])
        assert algebra.is_scalar(m)
        assert algebra.order(m) == 2
        assert algebra.elements[algebra.det(m)] == (1,)
        assert algebra.mul(m, algebra.inverse(m)) == algebra.identity
