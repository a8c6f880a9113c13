"""
Frobenius sampling and classification of the mod-a image.
"""

import pytest

from drinfeld_lab.algebra.poly import Poly, Var
from drinfeld_lab.arithmetic.drinfeld import DrinfeldModule
from drinfeld_lab.arithmetic.funcfield import Place, place_rng, places_up_to, rational_function_field
from drinfeld_lab.arithmetic.ore import OrePoly
from drinfeld_lab.core.exceptions import DomainError, NonEtaleError
from drinfeld_lab.services.galois_service import (
    ImageVerdict,
    alternative_basis_sample,
    classify_image,
    image_report,
    matrix_algebra,
    sample_frobenii,
)
from drinfeld_lab.services.place_sweep import run_sweep


def _square(x):
    return x * x


class TestFrobeniusSampling:
    def test_carlitz_reciprocity(self, carlitz2, f2, t_poly):
        """Frobenius at (π) acts on Carlitz torsion as the scalar π mod a."""
        a = t_poly([1, 1, 1])
        sampling = sample_frobenii(carlitz2, a, 6)
        R = matrix_algebra(a, 1).ring
        assert sampling.samples
        for sample in sampling.samples:
            pi = Poly.from_ints(f2, sample.place, Var.T)
            assert sample.matrix == [[R.reduce(pi)]]
            assert sample.scalar

    def test_residue_characteristic_skipped(self, carlitz2, t_poly):
        sampling = sample_frobenii(carlitz2, t_poly([1, 1, 1]), 3)
        reasons = {tuple(s.place): s.reason for s in sampling.skips}
        assert reasons == {(1, 1, 1): "level meets residue characteristic"}
        assert len(sampling.samples) + len(sampling.skips) == len(places_up_to(carlitz2.fq, 3))

    def test_bad_reduction_skipped(self, t_poly):
        K = rational_function_field(2)
        d = DrinfeldModule(OrePoly(K, (K.theta, K.one, K.theta)))
        sampling = sample_frobenii(d, t_poly([0, 1]), 2)
        assert {"place": [0, 1], "reason": "bad reduction"} in [s.to_dict() for s in sampling.skips]

    def test_basis_change_keeps_invariants(self, rank2, t_poly):
        a = t_poly([0, 1])
        sampling = sample_frobenii(rank2, a, 4)
        by_place = {tuple(s.place): s for s in sampling.samples}
        for v in places_up_to(rank2.fq, 4):
            other = alternative_basis_sample(rank2, a, v)
            if other is None:
                assert tuple(v.encode()) not in by_place
                continue
            assert other.invariants == by_place[tuple(v.encode())].invariants
            assert other.det == by_place[tuple(v.encode())].det

    def test_finite_base_rejected(self, f2, t_poly):
        with pytest.raises(DomainError):
            sample_frobenii(DrinfeldModule(OrePoly(f2, (1, 1))), t_poly([0, 1]), 3)

    def test_non_etale_level_rejected(self, t_poly):
        K = rational_function_field(2)
        d = DrinfeldModule(OrePoly(K, (K.one, K.theta)))
        with pytest.raises(NonEtaleError):
            sample_frobenii(d, t_poly([1, 1]), 3)


class TestImageClassification:
    def test_carlitz_full(self, carlitz2, t_poly):
        report = image_report(carlitz2, t_poly([1, 1, 1]), 8)
        assert report.classification.verdict == ImageVerdict.FULL
        assert len(report.det_group) == 3
        payload = report.to_dict()
        assert payload["verdict"] == "full"
        assert payload["B"] == 8

    def test_carlitz_f3_full(self, carlitz3, t_poly):
        report = image_report(carlitz3, t_poly([1, 0, 1], q=3), 4)
        assert report.classification.verdict == ImageVerdict.FULL

    def test_isotrivial_module_is_scalar(self, t_poly):
        K = rational_function_field(2)
        d = DrinfeldModule(OrePoly(K, (K.one, K.theta)))
        report = image_report(d, t_poly([0, 1]), 4)
        assert report.classification.verdict in (ImageVerdict.FULL, ImageVerdict.CYCLIC_SCALAR)

    def test_classification_needs_samples(self, t_poly):
        with pytest.raises(DomainError):
            classify_image([], t_poly([0, 1]), 2)

    @pytest.mark.slow
    @pytest.mark.parametrize("coeffs", [[0, 1], [1, 1]])
    def test_rank_two_full(self, rank2, t_poly, coeffs):
        report = image_report(rank2, t_poly(coeffs), 8)
        assert report.classification.verdict == ImageVerdict.FULL
        orders = {s.order for s in report.samples}
        assert {2, 3} <= orders
        assert report.classification.index == 1

    def test_gl2_f2(self, t_poly):
        algebra = matrix_algebra(t_poly([0, 1]), 2)
        assert algebra.gl_order == 6


class TestPlaceSweep:
    def test_place_rng_is_stable(self, f2):
        pi = Poly.from_ints(f2, [1, 1, 1], Var.THETA)
        assert place_rng(7, pi).random() == place_rng(7, pi).random()
        assert place_rng(7, pi).random() != place_rng(8, pi).random()

    def test_places_do_not_depend_on_seed(self, f2):
        first = places_up_to(f2, 4, seed=1)
        second = places_up_to(f2, 4, seed=2)
        assert [v.encode() for v in first] == [v.encode() for v in second]
        assert [v.root for v in first] == [v.root for v in second]

    def test_run_sweep_serial(self):
        assert run_sweep(_square, [1, 2, 3]) == [1, 4, 9]

    @pytest.mark.slow
    def test_run_sweep_parallel_keeps_order(self):
        tasks = list(range(20))
        assert run_sweep(_square, tasks, workers=2) == [x * x for x in tasks]

    @pytest.mark.slow
    def test_parallel_sampling_matches_serial(self, rank2, t_poly):
        serial = sample_frobenii(rank2, t_poly([0, 1]), 5, workers=1)
        parallel = sample_frobenii(rank2, t_poly([0, 1]), 5, workers=2)
        assert [s.to_dict(matrix_algebra(serial.level, 2).ring) for s in serial.samples] == [
            s.to_dict(matrix_algebra(parallel.level, 2).ring) for s in parallel.samples
        ]
