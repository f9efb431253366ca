"""Shared fixtures: a seeded generator and valid coefficient triples from real geometries."""
import numpy as np
import pytest

from src.models.nifg import GeometryConfig, coefficients_from_geometry

GEOMETRIES = [
    GeometryConfig.one_d(0.1, 0.05),
    GeometryConfig.one_d(1.0, 0.3),
    GeometryConfig.one_d(2.5, 1.1),
    GeometryConfig.one_d(4.0, 3.3),
    GeometryConfig.one_d(7.0, 0.6),
    GeometryConfig.two_d(3.0, 1.2),
    GeometryConfig.two_d(1.5, 2.0),
    GeometryConfig.two_d(3.5, 4.4),
]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def triples():
    return [coefficients_from_geometry(g) for g in GEOMETRIES]


def random_hermitian(rng, n=8):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (m + m.conj().T) / 2
