import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import lpmv

from pdmwell import model
from pdmwell.model import ModelParams
from pdmwell.quadrature import fourier_integral, integrate
from pdmwell.states import (
    REGISTRY,
    InadmissibleStateError,
    QuantumNumbers,
    build_state,
    matching_check,
    momentum_state,
    normalization_constant,
    orthonormality_matrix,
    psi_hypergeometric,
    residual_check,
    zk_residual,
)

states = st.integers(0, 6).flatmap(lambda n: st.tuples(st.just(n), st.integers(-n, n)))
widths = st.floats(0.25, 8.0)


def test_quantum_numbers():
    q = QuantumNumbers(3, -2)
    assert q.parity == -1 and q.node_count == 1
    assert QuantumNumbers(2, 1) < QuantumNumbers(2, 2) < QuantumNumbers(3, 0)
    for bad in ((-1, 0), (1, 2), (2, -3), (1.5, 0), (True, 0)):
        with pytest.raises(InadmissibleStateError):
            QuantumNumbers(*bad)


@given(nk=states, a=widths)
@settings(max_examples=40, deadline=None)
def test_normalised(nk, a):
    s = build_state(QuantumNumbers(*nk), ModelParams(a=a))
    v = integrate(s.density, breakpoints=tuple(s.nodes()), scale=1 / a).value
    assert v == pytest.approx(1.0, abs=1e-10)


@given(nk=states, a=widths, x=st.floats(-10, 10))
def test_matches_legendre_form(nk, a, x):
    q = QuantumNumbers(*nk)
    s = build_state(q, ModelParams(a=a))
    u = a * x
    ref = normalization_constant(q, s.params) / math.cosh(u) * lpmv(q.kappa, q.n, math.tanh(u))
    assert float(s.psi(x)) == pytest.approx(ref, rel=1e-9, abs=1e-12)


@given(nk=states, x=st.floats(0, 12))
def test_parity(nk, x):
    s = build_state(QuantumNumbers(*nk), ModelParams(a=1.3))
    assert float(s.psi(-x)) == pytest.approx(s.parity * float(s.psi(x)), rel=1e-13, abs=1e-300)


def test_nodes_are_zeros():
    for n in range(6):
        for k in range(-n, n + 1):
            s = build_state(QuantumNumbers(n, k), ModelParams(a=2.0))
            nodes = s.nodes()
            assert len(nodes) == n - abs(k)
            assert np.max(np.abs(s.psi(nodes)), initial=0.0) < 1e-12


def test_derivatives_finite_difference():
    s = build_state(QuantumNumbers(4, 1), ModelParams(a=1.7))
    x = np.linspace(-3, 3, 13)
    h = 1e-5
    f0, f1, f2 = s.psi_derivs(x)
    assert np.max(np.abs(f1 - (s.psi(x + h) - s.psi(x - h)) / (2 * h))) < 1e-8
    assert np.max(np.abs(f2 - (s.dpsi(x + h) - s.dpsi(x - h)) / (2 * h))) < 1e-7


def test_no_overflow_far_out():
    s = build_state(QuantumNumbers(5, 2), ModelParams(a=3.0))
    v = s.psi(np.array([-1e4, -400.0, 400.0, 1e4]))
    assert np.all(np.isfinite(v)) and np.all(np.abs(v) < 1e-300)


@pytest.mark.parametrize("kappa", [0, 1, 2, -1])
def test_orthonormality(kappa):
    p = model.params_for_kappa(abs(kappa), ModelParams(a=1.5))
    g = orthonormality_matrix(p, 6, kappa)
    assert np.max(np.abs(g - np.eye(len(g)))) < 1e-10


@pytest.mark.parametrize("n,k", [(n, k) for n in range(5) for k in range(-n, n + 1)])
def test_residuals(n, k):
    p = ModelParams(a=1.2, V0=0.2)
    s = build_state(QuantumNumbers(n, k), p)
    x = np.linspace(-7, 7, 141)
    assert residual_check(s, x) < 1e-10
    assert zk_residual(s, x) < 1e-10
    # a wrong energy is detected
    assert residual_check(s, x, energy=s.energy + 0.1) > 1e-4


def test_matching():
    s = build_state(QuantumNumbers(0), ModelParams(a=2.0))
    left, right = matching_check(s, 0.25)
    assert abs(left - right) < 1e-8


@pytest.mark.parametrize("n,k", [(n, k) for n in range(5) for k in range(-n, 1)])
def test_hypergeometric_form(n, k):
    q = QuantumNumbers(n, k)
    p = ModelParams(a=0.8)
    x = np.linspace(-5, 5, 101)
    s = build_state(q, p)
    assert np.max(np.abs(psi_hypergeometric(q, p, x) - s.psi(x))) < 1e-10


def test_hypergeometric_printed_bracket_differs():
    q = QuantumNumbers(2, -1)
    p = ModelParams()
    x = np.linspace(-3, 3, 61)
    assert np.max(np.abs(psi_hypergeometric(q, p, x, "printed") - build_state(q, p).psi(x))) > 1e-2
    with pytest.raises(ValueError):
        psi_hypergeometric(QuantumNumbers(2, 1), p, x)


@pytest.mark.parametrize("key", sorted(REGISTRY))
@pytest.mark.parametrize("a", [0.5, 2.0])
def test_registry_matches_numeric_transform(key, a):
    s = build_state(QuantumNumbers(*key), ModelParams(a=a))
    p = np.linspace(-10 * a, 10 * a, 81)
    num = fourier_integral(s.psi, p, scale=1 / a).value
    assert np.max(np.abs(s.phi(p) - num)) < 1e-8
    dnum = fourier_integral(s.psi, p, scale=1 / a, weight=lambda x: -1j * x).value
    assert np.max(np.abs(s.momentum.derivative(p) - dnum)) < 1e-8 / a


def test_momentum_numeric_fallback():
    s = build_state(QuantumNumbers(3, 2), ModelParams(a=1.0))
    mom = s.momentum
    assert not mom.analytic
    assert integrate(mom.density, breakpoints=tuple(mom.nodes()), scale=1.0).value == pytest.approx(1.0, abs=1e-10)
    forced = momentum_state(build_state(QuantumNumbers(2, 0), ModelParams()), force_numeric=True)
    p = np.array([-1.3, 0.4, 2.2])
    assert np.max(np.abs(forced(p) - build_state(QuantumNumbers(2, 0), ModelParams()).phi(p))) < 1e-12


def test_momentum_nodes():
    s = build_state(QuantumNumbers(3, 0), ModelParams(a=2.0))
    nodes = s.momentum.nodes()
    # Phi ~ p (7 a^2 - 5 p^2): nodes at +-a sqrt(7/5); p = 0 is not sampled by design
    expect = np.array([-1, 1]) * 2.0 * math.sqrt(7 / 5)
    assert np.allclose(nodes[np.abs(nodes) > 1e-6], expect, atol=1e-12)
