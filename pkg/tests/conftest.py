"""
Shared fixtures: an isolated cache directory for every test and the modules
the tests keep coming back to.
"""

import pytest

from drinfeld_lab.algebra.fields import FiniteField, PrimeField, constant_field
from drinfeld_lab.algebra.poly import Poly, Var
from drinfeld_lab.arithmetic.drinfeld import DrinfeldModule, carlitz_module
from drinfeld_lab.arithmetic.funcfield import rational_function_field
from drinfeld_lab.arithmetic.ore import OrePoly
from drinfeld_lab.core.config import reload_settings


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    """Point the persistent cache at a per-test directory."""
    monkeypatch.setenv("DRINFELD_LAB_CACHE_DIR", str(tmp_path / "cache"))
    settings = reload_settings()
    yield settings
    monkeypatch.delenv("DRINFELD_LAB_CACHE_DIR", raising=False)
    reload_settings()


@pytest.fixture
def f2():
    return constant_field(2)


@pytest.fixture
def f4_over_f2():
    """k = F_2[x]/(x² + x + 1), with F_q = F_2."""
    return FiniteField(PrimeField(2), (1, 1, 1))


@pytest.fixture
def carlitz2():
    return carlitz_module(2)


@pytest.fixture
def carlitz3():
    return carlitz_module(3)


@pytest.fixture
def rank2():
    """φ_t = θ + τ + τ² over F_2(θ)."""
    K = rational_function_field(2)
    return DrinfeldModule(OrePoly(K, (K.theta, K.one, K.one)))


@pytest.fixture
def t_poly():
    """Build polynomials in t over F_q from ascending coefficient lists."""

    def make(coeffs, q=2, var=Var.T):
        return Poly.from_ints(constant_field(q), coeffs, var)

    return make
