import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corona_disc import (
    Blaschke,
    DeltaTooSmall,
    EtaTooSmall,
    Polynomial,
    Product,
    Scalar,
    build_grid,
    corona_delta,
    derivative,
    eval_function,
    spec_from_json,
    spec_to_json,
    validate_corona,
    zero_separation,
)

disc_points = st.builds(
    lambda r, t: r * complex(math.cos(t), math.sin(t)),
    st.floats(0.0, 0.95),
    st.floats(0.0, 2 * math.pi),
)


def test_basic_evaluation():
    assert eval_function(Polynomial((0, 1)), 0.5) == pytest.approx(0.5)
    assert abs(eval_function(Blaschke((0.5,)), 0.5)) == 0.0
    assert eval_function(Scalar(2 - 1j), np.zeros(3)).tolist() == [2 - 1j] * 3


def test_blaschke_unimodular_on_circle():
    z = np.exp(0.7j)
    assert abs(abs(Blaschke((0.5,))(z)) - 1) < 1e-12


def test_blaschke_positive_at_origin():
    b = Blaschke((0.5, -0.3j, 0.2 + 0.4j))
    v = b(0.0)
    assert v.real > 0 and abs(v.imag) < 1e-15


def test_blaschke_of_origin_is_z():
    z = build_grid(16).centers
    assert np.allclose(Blaschke((0j,))(z), z, atol=1e-15)


def test_empty_blaschke_is_one():
    z = build_grid(16).centers
    assert np.array_equal(Blaschke(())(z), np.ones(z.size, dtype=complex))


def test_blaschke_rejects_boundary_zero():
    with pytest.raises(ValueError):
        Blaschke((1.0,))


def test_simple_derivatives():
    assert derivative(Polynomial((0, 0, 1)))(3.0) == pytest.approx(6.0)
    assert np.all(derivative(Scalar(5.0))(np.linspace(0, 1, 4)) == 0)


def test_blaschke_derivative_matches_central_difference():
    f = Blaschke((0.5,))
    z, h = 0.2, 1e-5
    fd = (f(z + h) - f(z - h)) / (2 * h)
    assert abs(derivative(f)(z) - fd) < 1e-6


@pytest.mark.parametrize(
    "f",
    [
        Blaschke((0.5, -0.2 + 0.6j, 0.1j)),
        Product((Polynomial((1, 2, 0.5), zero_list=(-2 + math.sqrt(2), -2 - math.sqrt(2))), Blaschke((0.3,)))),
        Polynomial.from_roots((0.1, -0.4j, 0.3 + 0.3j), lead=2.0),
    ],
    ids=["blaschke3", "product", "cubic"],
)
def test_derivative_matches_finite_difference(f):
    z = np.array([0.2 + 0.1j, -0.5j, 0.7])
    h = 1e-5
    fd = (f(z + h) - f(z - h)) / (2 * h)
    assert np.max(np.abs(derivative(f)(z) - fd)) < 1e-6


def test_polynomial_needs_zero_list_above_degree_one():
    with pytest.raises(ValueError):
        Polynomial((1, 0, 1))
    with pytest.raises(ValueError):
        Polynomial((1, 0, 1), zero_list=(0.5, -0.5))
    p = Polynomial((1, 0, 1), zero_list=(1j, -1j))
    assert set(p.zeros) == {1j, -1j}
    assert Polynomial((0, 0, 0, 2)).zeros == (0j, 0j, 0j)


@pytest.mark.parametrize(
    "f",
    [
        Scalar(1 + 2j),
        Polynomial((-0.5, 1)),
        Polynomial.from_roots((0.2, -0.1j, 0.5)),
        Blaschke((0.5, 0.25j)),
        Product((Scalar(3.0), Blaschke((0.1,)), Polynomial((0.5, 1)))),
    ],
)
def test_json_round_trip(f):
    back = spec_from_json(spec_to_json(f))
    z = build_grid(16).centers
    assert np.array_equal(back(z), f(z))
    assert back.zeros == f.zeros


def test_json_rejects_bad_input():
    with pytest.raises(ValueError):
        spec_from_json({"kind": "spline"})
    with pytest.raises(ValueError):
        spec_from_json({"kind": "scalar", "c": [1.0, 2.0, 3.0]})


@settings(max_examples=40, deadline=None)
@given(st.lists(disc_points, min_size=1, max_size=6))
def test_blaschke_vanishes_at_zeros_and_is_bounded(zs):
    b = Blaschke(tuple(zs))
    assert np.max(np.abs(b(np.array(zs)))) <= 1e-12
    circle = np.exp(2j * math.pi * np.arange(1024) / 1024)
    assert np.max(np.abs(np.abs(b(circle)) - 1)) < 1e-10
    assert np.max(np.abs(b(build_grid(32).centers))) <= 1 + 1e-10


def test_delta_examples():
    g = build_grid(128)
    assert corona_delta(Polynomial((0, 1)), Scalar(1.0), g) == pytest.approx(1.0, abs=g.h)
    d = corona_delta(Polynomial((-0.5, 1)), Polynomial((0.5, 1)), g)
    # triangle inequality: |z - 1/2| + |z + 1/2| >= 1, equality on [-1/2, 1/2]
    assert 1.0 <= d <= 1.0 + 2 * g.h


def test_delta_common_zero_shrinks_and_fails():
    f = Polynomial((0, 1))
    vals = [corona_delta(f, f, build_grid(n), delta_min=0.0) for n in (16, 64, 256)]
    assert vals[0] > vals[1] > vals[2]
    with pytest.raises(DeltaTooSmall):
        corona_delta(f, f, build_grid(64), delta_min=0.05)


def test_delta_refinement_fluctuation():
    f1, f2 = Blaschke((0.3, -0.2j)), Blaschke((-0.6,))
    for n in (32, 64, 128):
        a = corona_delta(f1, f2, build_grid(n))
        b = corona_delta(f1, f2, build_grid(2 * n))
        assert abs(a - b) <= 4 * build_grid(n).h


def test_zero_separation_examples():
    assert zero_separation(Polynomial((-0.5, 1)), Polynomial((0.5, 1))) == 1.0
    assert zero_separation(Polynomial((-0.3, 1)), Polynomial((-0.3, 1))) == 0.0
    assert zero_separation(Scalar(1.0), Polynomial((0.5, 1))) == math.inf


def test_validate_accepts_baseline():
    p = validate_corona(Polynomial((-0.5, 1)), Polynomial((0.5, 1)), build_grid(128))
    assert p.delta == pytest.approx(1.0, abs=2 * p.grid.h)
    assert p.eta == 1.0
    assert p.thresholds == (p.delta / 4, p.delta / 2)


def test_validate_rejections():
    g = build_grid(64)
    z = Polynomial((0, 1))
    with pytest.raises(DeltaTooSmall):
        validate_corona(z, z, g, delta_min=0.05)
    with pytest.raises(EtaTooSmall):
        validate_corona(Polynomial((-0.5, 1)), Polynomial((-0.5 - 1e-9, 1)), g, eta_min=1e-3)


def test_validate_warns_on_tiny_eta():
    g = build_grid(32)
    with pytest.warns(RuntimeWarning):
        validate_corona(Polynomial((-1e-9, 1)), Polynomial((1e-9, 1)), g)


@pytest.mark.parametrize(
    "f",
    [Polynomial.from_roots((0.3, -0.7j)), Blaschke((0.9, 0.5j)), Product((Blaschke((0.2,)), Polynomial((0.4j, 1))))],
)
def test_listed_zeros_annihilate(f):
    assert np.max(np.abs(f(np.array(f.zeros)))) <= 1e-12
