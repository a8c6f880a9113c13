"""
Divisibility densities, division hulls and the finite-base index bound.
"""

from fractions import Fraction

import pytest

from drinfeld_lab.algebra.poly import Poly, Var
from drinfeld_lab.algebra.residue_ring import ResidueRing
from drinfeld_lab.arithmetic.drinfeld import DrinfeldModule
from drinfeld_lab.arithmetic.funcfield import Place, rational_function_field
from drinfeld_lab.arithmetic.ore import OrePoly
from drinfeld_lab.arithmetic.torsion import DeltaImage
from drinfeld_lab.core.exceptions import DomainError, NonEtaleError, TorsionGeneratorError, UnderSampleError
from drinfeld_lab.services.galois_service import matrix_algebra
from drinfeld_lab.services.kummer_service import (
    DensityModel,
    DensityVerdict,
    HullVerdict,
    IndexBoundVerdict,
    PrimeMultipleTest,
    division_hull,
    expand_in,
    expected_density,
    find_frobenius_generator,
    global_divisor,
    is_divisible_at,
    kummer_density,
    kummer_model,
    rational_torsion,
    unsharp_prime,
    verify_index_bound,
)

OMEGA = (0, 1)


def scalar_model(level, units, delta="full"):
    """Rank-one model with G the given scalars."""
    algebra = matrix_algebra(level, 1)
    R = algebra.ring
    group = [algebra.from_rows([[R.from_constant(R.field.from_int(u))]]) for u in units]
    if delta == "full":
        points = [(x,) for x in R.elements()]
    else:
        points = [(R.zero,)]
    return DensityModel(level, 1, group, points)


class TestExpectedDensity:
    def test_trivial_group_over_f2(self, t_poly):
        assert expected_density(scalar_model(t_poly([0, 1]), [1])) == Fraction(1, 2)

    def test_full_scalars_over_f3(self, t_poly):
        assert expected_density(scalar_model(t_poly([0, 1], q=3), [1, 2])) == Fraction(2, 3)

    def test_trivial_delta(self, t_poly):
        assert expected_density(scalar_model(t_poly([0, 1], q=3), [1, 2], delta="zero")) == 1

    def test_empty_model(self, t_poly):
        with pytest.raises(DomainError):
            expected_density(DensityModel(t_poly([0, 1]), 1, [], []))

    def test_full_gl2_over_f2(self, t_poly):
        algebra = matrix_algebra(t_poly([0, 1]), 2)
        R = algebra.ring
        group = sorted(algebra.general_linear_group(100))
        delta = [(x, y) for x in R.elements() for y in R.elements()]
        density = expected_density(DensityModel(t_poly([0, 1]), 2, group, delta))
        # identity: 1 of 4 shifts; 3 transvections: 2 each; 2 elements of order 3: all 4
        assert density == Fraction(1 + 3 * 2 + 2 * 4, 24)


class TestDivisibility:
    def test_theta_is_a_global_image(self, carlitz2, f2, t_poly):
        """θ = φ_{t+1}(1) for Carlitz over F_2."""
        K = carlitz2.base_field
        a = t_poly([1, 1])
        assert global_divisor(carlitz2, K.theta, a) == a
        v = Place.from_poly(Poly.gen(f2, Var.THETA))
        assert is_divisible_at(carlitz2, K.theta, a, v).divisible

    def test_kummer_model_for_global_image(self, carlitz2, t_poly):
        model = kummer_model(carlitz2, carlitz2.base_field.theta, t_poly([1, 1]), [matrix_algebra(t_poly([1, 1]), 1).identity])
        assert len(model.delta) == 1
        assert expected_density(model) == 1

    def test_level_meeting_residue_characteristic(self, carlitz2, f2, t_poly):
        v = Place.from_poly(Poly.from_ints(f2, [1, 1], Var.THETA))
        with pytest.raises(NonEtaleError):
            is_divisible_at(carlitz2, carlitz2.base_field.theta, t_poly([1, 1]), v)

    def test_under_sample(self, carlitz2, t_poly):
        a = t_poly([0, 1])
        model = kummer_model(carlitz2, carlitz2.base_field.theta, a, [matrix_algebra(a, 1).identity])
        with pytest.raises(UnderSampleError):
            kummer_density(carlitz2, carlitz2.base_field.theta, a, 3, model)

    @pytest.mark.slow
    def test_carlitz_density_at_t(self, carlitz2, t_poly):
        a = t_poly([0, 1])
        model = kummer_model(carlitz2, carlitz2.base_field.theta, a, [matrix_algebra(a, 1).identity])
        assert expected_density(model) == Fraction(1, 2)
        report = kummer_density(carlitz2, carlitz2.base_field.theta, a, 10, model)
        assert report.total >= 30
        assert 0 <= report.hits <= report.total
        assert report.verdict in (DensityVerdict.PASS, DensityVerdict.WARN)
        assert report.to_dict()["oracle"] == Fraction(1, 2)


class TestDivisionHull:
    def test_rational_torsion_of_carlitz(self, carlitz2, t_poly):
        torsion = rational_torsion(carlitz2, 2)
        assert len(torsion.points) == 4
        assert torsion.structure == [t_poly([0, 1, 1])]

    def test_torsion_generator_rejected(self, carlitz2):
        with pytest.raises(TorsionGeneratorError):
            division_hull(carlitz2, [carlitz2.base_field.one], 2)

    def test_no_generators(self, carlitz2):
        with pytest.raises(DomainError):
            division_hull(carlitz2, [], 2)

    @pytest.mark.slow
    def test_index_two_instance(self, carlitz2, t_poly):
        K = carlitz2.base_field
        m = K.from_ints([0, 0, 0, 1, 1])
        report = division_hull(carlitz2, [m], 3)
        assert report.index_orders == [2]
        assert report.c_torsion_free == t_poly([0, 1])
        assert report.verdict == HullVerdict.STABILIZED
        assert report.witness_consistent
        assert K.from_ints([0, 0, 1]) in [p.x for p in report.points]

    @pytest.mark.slow
    def test_no_new_points(self, carlitz2, t_poly):
        K = carlitz2.base_field
        report = division_hull(carlitz2, [K.from_ints([0, 0, 1])], 3)
        assert report.index_orders == []
        assert report.c_torsion_free.is_one()
        assert report.to_dict()["stabilized"]


class TestIndexBound:
    @pytest.fixture
    def isotrivial_f4(self, f4_over_f2):
        """φ_t = 1 + τ² over F_4, where φ_{t+1} = τ² is the Frobenius of F_4."""
        k = f4_over_f2
        return DrinfeldModule(OrePoly(k, (k.one, k.zero, k.one)))

    def test_frobenius_generator(self, isotrivial_f4, t_poly):
        assert find_frobenius_generator(isotrivial_f4) == t_poly([1, 1])

    def test_expand_in(self, t_poly):
        assert expand_in(t_poly([1, 0, 1]), t_poly([1, 1])) == Poly.from_ints(t_poly([1]).field, [0, 0, 1], Var.U)
        assert expand_in(t_poly([0, 1]), t_poly([0, 0, 1])) is None

    def test_holds(self, isotrivial_f4, f4_over_f2, t_poly):
        report = verify_index_bound(isotrivial_f4, [f4_over_f2.one], t_poly([0, 1]))
        assert report.verdict == IndexBoundVerdict.HOLDS
        certificate = report.to_dict()["certificate"]
        assert certificate["hom_size"] == 2
        assert certificate["abc_mod_a"] == [0]
        assert all(test["passes"] for test in certificate["prime_tests"])

    def test_holds_with_nonzero_abc(self, isotrivial_f4, f4_over_f2, t_poly):
        """M = k at level t²: c = 1, so abc = t is a nonzero class mod a."""
        level = t_poly([0, 0, 1])
        report = verify_index_bound(isotrivial_f4, [f4_over_f2.one, OMEGA], level)
        assert report.verdict == IndexBoundVerdict.HOLDS
        certificate = report.to_dict()["certificate"]
        assert report.c == t_poly([1])
        assert certificate["abc_mod_a"] == [0, 1]
        assert certificate["hom_size"] > 1
        assert certificate["frobenius_scalar"] == [1, 1]
        assert [test["witness_power"] for test in certificate["prime_tests"]] == [1, 1]

    def test_fails_when_delta_is_too_small(self, isotrivial_f4, f4_over_f2, t_poly, mocker):
        level = t_poly([0, 0, 1])
        mocker.patch(
            "drinfeld_lab.services.kummer_service.delta_image",
            return_value=DeltaImage(level, [], []),
        )
        report = verify_index_bound(isotrivial_f4, [f4_over_f2.one, OMEGA], level)
        assert report.verdict == IndexBoundVerdict.FAILS
        assert report.reason == "abc·Hom_R ⊄ Δ_a"
        assert report.to_dict()["certificate"]["delta"] == []

    def test_failed_prime_multiple_test_is_inapplicable(self, isotrivial_f4, f4_over_f2, t_poly, mocker):
        p = t_poly([0, 1])
        mocker.patch(
            "drinfeld_lab.services.kummer_service.prime_multiple_test",
            return_value=[PrimeMultipleTest(p, f4_over_f2.one, False, None)],
        )
        report = verify_index_bound(isotrivial_f4, [f4_over_f2.one], p)
        assert report.verdict == IndexBoundVerdict.INAPPLICABLE
        assert report.reason == f"prime multiple test failed for p={p}"

    def test_unsharp_prime(self, t_poly):
        R = ResidueRing(t_poly([0, 0, 1]))
        t = t_poly([0, 1])
        assert unsharp_prime(R, R.one, t) == t
        assert unsharp_prime(R, R.reduce(t_poly([1, 1])), t) is None

    def test_unsharp_prime_invisible_at_level(self, t_poly):
        """At level t only gcd(t², t) = t is visible, which divides b = t."""
        R = ResidueRing(t_poly([0, 1]))
        assert unsharp_prime(R, R.one, t_poly([0, 1])) is None

    def test_unsharp_frobenius_is_inapplicable(self, isotrivial_f4, f4_over_f2, t_poly, mocker):
        mocker.patch("drinfeld_lab.services.kummer_service.unsharp_prime", return_value=t_poly([0, 1]))
        report = verify_index_bound(isotrivial_f4, [f4_over_f2.one], t_poly([0, 0, 1]))
        assert report.verdict == IndexBoundVerdict.INAPPLICABLE
        assert report.reason.startswith("Frobenius scalar is ≡ 1 mod p·b")
        assert report.to_dict()["certificate"]["delta"] == []

    def test_rational_base_rejected(self, carlitz2, t_poly):
        with pytest.raises(DomainError):
            verify_index_bound(carlitz2, [carlitz2.base_field.one], t_poly([0, 1]))

    def test_no_frobenius_generator(self, f2, t_poly):
        d = DrinfeldModule(OrePoly(f2, (1, 1, 1)))
        report = verify_index_bound(d, [1], t_poly([0, 1]))
        assert report.verdict == IndexBoundVerdict.INAPPLICABLE


def test_rational_function_field_is_cached():
    assert rational_function_field(2) is rational_function_field(2)
