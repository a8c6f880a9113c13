"""
Torsion modules, Kummer values and torsion maps over finite base fields.
"""

import random

import pytest

from drinfeld_lab.algebra.fields import constant_field
from drinfeld_lab.algebra.poly import Poly
from drinfeld_lab.arithmetic.drinfeld import DrinfeldModule, Isogeny, carlitz_module
from drinfeld_lab.arithmetic.ore import OrePoly
from drinfeld_lab.arithmetic.torsion import (
    check_torsion_free,
    delta_image,
    frobenius_cocycle,
    frobenius_matrix,
    isogeny_torsion_map,
    kummer_value,
    torsion_space,
    torsion_structure,
)
from drinfeld_lab.core.config import get_settings
from drinfeld_lab.core.exceptions import DomainError, NonEtaleError, TorsionGeneratorError

OMEGA = (0, 1)
OMEGA2 = (1, 1)


@pytest.fixture
def one_plus_tau(f2):
    """φ_t = 1 + τ over F_2, characteristic t + 1."""
    return DrinfeldModule(OrePoly(f2, (1, 1)))


@pytest.fixture
def omega_plus_tau(f4_over_f2):
    """φ_t = ω + τ over F_4, characteristic t² + t + 1."""
    return DrinfeldModule(OrePoly(f4_over_f2, (OMEGA, f4_over_f2.one)))


def assert_points_are_torsion(T):
    F = T.ambient.field
    points = T.points()
    assert len(points) == T.count
    assert len(set(points)) == T.count
    for p in points:
        assert T.phi_a.evaluate(p, F, T.ambient.embed) == F.zero


class TestTorsionCounts:
    """|φ[a]| = q^{r·deg a} exactly at étale levels."""

    @pytest.mark.parametrize("coeffs", [[0, 1], [1, 0, 1, 1], [1, 1, 1]])
    def test_etale_rank_one(self, one_plus_tau, t_poly, coeffs):
        a = t_poly(coeffs)
        T = torsion_space(one_plus_tau, a)
        assert T.etale
        assert T.count == 2 ** (len(coeffs) - 1)
        assert_points_are_torsion(T)

    def test_non_etale_level(self, one_plus_tau, t_poly):
        T = torsion_space(one_plus_tau, t_poly([1, 1]))
        assert T.non_etale
        assert not T.etale
        assert T.count < 2
        with pytest.raises(NonEtaleError):
            frobenius_matrix(T)

    def test_rank_two(self, f2, t_poly):
        d = DrinfeldModule(OrePoly(f2, (1, 1, 1)))
        assert torsion_space(d, t_poly([0, 1])).count == 4
        assert torsion_space(d, t_poly([1, 1, 1])).count == 4**2
        special = torsion_space(d, t_poly([1, 1]))
        assert special.count == 2

    @pytest.mark.parametrize("coeffs,etale", [([0, 1], True), ([1, 1], True), ([1, 1, 1], False)])
    def test_over_f4(self, omega_plus_tau, t_poly, coeffs, etale):
        T = torsion_space(omega_plus_tau, t_poly(coeffs))
        assert T.etale is etale
        if etale:
            assert T.count == 2 ** (len(coeffs) - 1)
        else:
            assert T.count < 2 ** (len(coeffs) - 1)

    def test_rational_base_rejected(self, carlitz2, t_poly):
        with pytest.raises(DomainError):
            torsion_space(carlitz2, t_poly([0, 1]))

    def test_zero_level_rejected(self, one_plus_tau, t_poly):
        with pytest.raises(DomainError):
            torsion_space(one_plus_tau, t_poly([0]))


class TestCoordinates:
    """The A/(a)-basis turns torsion points into coordinates A-linearly."""

    def test_additive_and_a_linear(self, omega_plus_tau, t_poly):
        T = torsion_space(omega_plus_tau, t_poly([1, 0, 1]))
        F = T.ambient.field
        t = t_poly([0, 1])
        points = T.points()
        for x in points:
            cx = T.coords(x)
            assert T.point(cx) == x
            assert T.coords(T.t_map(x)) == T.scale_coords(t, cx)
            for y in points[:4]:
                assert T.coords(F.add(x, y)) == T.add_coords(cx, T.coords(y))

    def test_frobenius_is_phi_of_t_plus_one(self, one_plus_tau, t_poly):
        """Over F_2 the Frobenius endomorphism of 1 + τ is τ = φ_{t+1}."""
        T = torsion_space(one_plus_tau, t_poly([1, 1, 1]))
        R = T.ring
        assert frobenius_matrix(T) == [[R.reduce(t_poly([1, 1]))]]

    def test_extension_keeps_coordinates(self, one_plus_tau, t_poly):
        T = torsion_space(one_plus_tau, t_poly([1, 1, 1]))
        E = T.extend(2)
        assert E.count == T.count
        assert E.ambient.degree == 2 * T.ambient.degree
        assert E.coords(E.basis[0]) == T.coords(T.basis[0])

    def test_structure(self, one_plus_tau, t_poly):
        assert torsion_structure(one_plus_tau, t_poly([0, 1])) == [t_poly([0, 1])]


class TestKummerValues:
    """m ↦ ⟨σ', m⟩ is an A-module homomorphism k → φ[a]."""

    def test_additive(self, omega_plus_tau, f4_over_f2, t_poly):
        a = t_poly([0, 1])
        T = torsion_space(omega_plus_tau, a)
        k = f4_over_f2
        values = {m: kummer_value(omega_plus_tau, a, m, T) for m in k.elements()}
        for m1, v1 in values.items():
            assert v1.well_defined
            for m2, v2 in values.items():
                assert values[k.add(m1, m2)].coords == T.add_coords(v1.coords, v2.coords)
        assert values[k.zero].is_zero(T.ring)

    def test_a_linear(self, omega_plus_tau, f4_over_f2, t_poly):
        a = t_poly([1, 0, 1])
        T = torsion_space(omega_plus_tau, a)
        t = t_poly([0, 1])
        for m in f4_over_f2.elements():
            image = omega_plus_tau.phi(t).evaluate(m)
            assert kummer_value(omega_plus_tau, a, image, T).coords == T.scale_coords(
                t, kummer_value(omega_plus_tau, a, m, T).coords
            )

    def test_cocycle_iterates_to_the_kummer_value(self, omega_plus_tau, t_poly):
        a = t_poly([1, 1])
        T = torsion_space(omega_plus_tau, a)
        m = OMEGA2
        cocycle = frobenius_cocycle(omega_plus_tau, a, m, T)
        assert cocycle.apply(tuple(T.ring.zero for _ in range(T.rank))) == cocycle.shift
        assert cocycle.power_shift(T.ambient.degree) == kummer_value(omega_plus_tau, a, m, T).coords

    def test_delta_image_is_a_group(self, omega_plus_tau, t_poly):
        a = t_poly([0, 1])
        delta = delta_image(omega_plus_tau, [OMEGA], a, check_torsion=False)
        T = torsion_space(omega_plus_tau, a)
        zero = (tuple(T.ring.zero for _ in range(T.rank)),)
        assert delta.contains(zero)
        assert T.count % delta.order == 0
        for x in delta.elements:
            for y in delta.elements:
                assert delta.contains((T.add_coords(x[0], y[0]),))


class TestFrobeniusCocycle:
    """σ(x0 + P) − x0 = c + F·P on every fiber, σ the Frobenius of k."""

    @pytest.mark.parametrize("coeffs", [[0, 1], [1, 1], [1, 0, 1]])
    def test_reconstructs_frobenius_on_the_fiber(self, omega_plus_tau, f4_over_f2, t_poly, coeffs):
        a = t_poly(coeffs)
        T = torsion_space(omega_plus_tau, a)
        for m in f4_over_f2.elements():
            cocycle = frobenius_cocycle(omega_plus_tau, a, m, T)
            E = cocycle.fiber.torsion
            F = E.ambient.field
            x0 = cocycle.fiber.base_solution
            assert len(cocycle.fiber.solutions) == T.count
            for x in cocycle.fiber.solutions:
                moved = E.coords(F.sub(E.ambient.frobenius(x), x0))
                assert moved == cocycle.apply(E.coords(F.sub(x, x0)))

    @pytest.mark.parametrize("coeffs", [[0, 1], [1, 1], [1, 0, 1]])
    def test_power_shifts_compose(self, omega_plus_tau, t_poly, coeffs):
        a = t_poly(coeffs)
        T = torsion_space(omega_plus_tau, a)
        cocycle = frobenius_cocycle(omega_plus_tau, a, OMEGA2, T)
        E = cocycle.fiber.torsion
        F = E.ambient.field
        x0 = cocycle.fiber.base_solution
        order = cocycle.fiber.degree

        def frobenius_power(coords, i):
            for _ in range(i):
                coords = E.apply_matrix(cocycle.matrix, coords)
            return coords

        for n in range(order + 1):
            assert cocycle.power_shift(n) == E.coords(F.sub(E.ambient.frobenius(x0, n), x0))
        for i in range(order):
            for j in range(order):
                assert cocycle.power_shift(i + j) == E.add_coords(
                    cocycle.power_shift(i), frobenius_power(cocycle.power_shift(j), i)
                )


SHIPPED_FINITE = ["index-bound", "isogeny", "restrict", "torsion-q4"]


@pytest.fixture(params=SHIPPED_FINITE)
def shipped_finite(request, f2, f4_over_f2, t_poly):
    """(module, level) for each finite-base config under configs/."""
    k = f4_over_f2
    if request.param == "index-bound":
        return DrinfeldModule(OrePoly(k, (k.one, k.zero, k.one))), t_poly([0, 1])
    if request.param == "isogeny":
        return DrinfeldModule(OrePoly(k, (k.one, OMEGA))), t_poly([1, 1, 1])
    if request.param == "restrict":
        return DrinfeldModule(OrePoly(f2, (1, 1))), t_poly([0, 1])
    F4 = constant_field(4)
    return DrinfeldModule(OrePoly(F4, (F4.one, F4.one))), t_poly([0, 0, 1], q=4)


class TestRandomKummerCases:
    """Additivity and A-linearity of m ↦ ⟨σ', m⟩ on random (m, b)."""

    def test_additive_and_a_linear(self, shipped_finite):
        d, a = shipped_finite
        k = d.base_field
        T = torsion_space(d, a)
        values = {m: kummer_value(d, a, m, T).coords for m in k.elements()}
        rng = random.Random(4100 + T.count)
        for _ in range(get_settings().random_cases):
            m1, m2 = k.random_element(rng), k.random_element(rng)
            b = Poly(d.fq, [d.fq.random_element(rng) for _ in range(rng.randint(1, 4))], d.var)
            assert values[k.add(m1, m2)] == T.add_coords(values[m1], values[m2])
            assert values[d.phi(b).evaluate(m1)] == T.scale_coords(b, values[m1])


class TestTorsionFreeness:
    def test_zero_generator(self, carlitz2):
        with pytest.raises(TorsionGeneratorError):
            check_torsion_free(carlitz2, [carlitz2.base_field.zero], carlitz2.a_poly([0, 1]))

    def test_carlitz_one_is_torsion_free(self, carlitz2):
        check_torsion_free(carlitz2, [carlitz2.base_field.one], carlitz2.a_poly([1, 1, 1]))

    def test_killed_generator(self, one_plus_tau, t_poly):
        with pytest.raises(TorsionGeneratorError) as excinfo:
            check_torsion_free(one_plus_tau, [1], t_poly([0, 1]))
        assert "t" in str(excinfo.value)


class TestIsogenyMaps:
    """An isogeny restricts to a Frobenius-equivariant map on torsion."""

    @pytest.mark.parametrize("coeffs", [[0, 1], [1, 1, 1]])
    def test_frobenius_twist(self, f4_over_f2, t_poly, coeffs):
        k = f4_over_f2
        source = DrinfeldModule(OrePoly(k, (k.one, OMEGA)))
        target = DrinfeldModule(OrePoly(k, (k.one, OMEGA2)))
        f = Isogeny(OrePoly.tau(k), source, target)
        result = isogeny_torsion_map(f, t_poly(coeffs))
        assert result.frobenius_compatible
        assert result.injective
        assert result.source.count == result.target.count

    def test_non_etale_level(self, f4_over_f2, t_poly):
        k = f4_over_f2
        source = DrinfeldModule(OrePoly(k, (k.one, OMEGA)))
        target = DrinfeldModule(OrePoly(k, (k.one, OMEGA2)))
        f = Isogeny(OrePoly.tau(k), source, target)
        with pytest.raises(NonEtaleError):
            isogeny_torsion_map(f, t_poly([1, 1]))


class TestRestriction:
    """Restricting to F_q[b] regroups the same torsion points."""

    def test_counts_agree(self, one_plus_tau, t_poly):
        b = t_poly([0, 0, 1])
        w = t_poly([0, 1], var=one_plus_tau.restrict(b).var)
        psi = one_plus_tau.restrict(b)
        restricted = torsion_space(psi, w)
        full = torsion_space(one_plus_tau, w.compose(b.with_var(w.var)).with_var(one_plus_tau.var))
        assert restricted.etale and full.etale
        assert restricted.count == full.count == 2 ** (1 * 2 * 1)
        assert set(restricted.points()) == set(full.points())


def test_carlitz_module_is_rational():
    assert carlitz_module(3).is_rational
