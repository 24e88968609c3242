import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fraclmi.curves import FrequencyRange, make_curve, rho
from fraclmi.errors import InvalidInput
from fraclmi.lmi import (assemble_generic, build_hinf_lmi, build_linf_lmi, build_pi,
                         generic_matrix, hinf_generic, hinf_matrix, hinf_pre_schur,
                         hinf_region, linf_matrix, linf_pre_schur)
from fraclmi.model import principal_power
from fraclmi.numkernel import lambda_max

from conftest import example1, random_hermitian, random_stable

RANGES = [FrequencyRange.low(3.0), FrequencyRange.middle(0.5, 4.0),
          FrequencyRange.high(2.0), FrequencyRange.entire()]


def _sample(seed, nu):
    rng = np.random.default_rng(seed)
    sys = random_stable(rng, nu, m=int(rng.integers(1, 3)), p=int(rng.integers(1, 3)))
    U = random_hermitian(rng, sys.n)
    W = random_hermitian(rng, sys.n)
    return sys, U, W @ W + 0.1 * np.eye(sys.n), float(rng.uniform(0.2, 5.0))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.4, 1.0, 1.6]), st.sampled_from(RANGES))
def test_generic_assembly_equals_specialized_pre_schur(seed, nu, frange):
    sys, U, V, delta = _sample(seed, nu)
    if frange.kind == "entire":
        V = None
    G = generic_matrix(sys, make_curve(frange, nu), build_pi(sys.C, sys.D, delta), U, V)
    assert np.max(np.abs(G - linf_pre_schur(sys, frange, delta, U, V))) <= 1e-12 * (1 + np.abs(G).max())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.4, 1.0, 1.6]), st.sampled_from(RANGES))
def test_schur_bridge(seed, nu, frange):
    sys, U, V, delta = _sample(seed, nu)
    post = lambda_max(linf_matrix(sys, frange, delta, U, V)) < 0
    pre = lambda_max(linf_pre_schur(sys, frange, delta, delta * U, delta * V)) < 0
    assert post == pre


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.4, 0.8, 1.0, 1.3, 1.6]))
def test_hinf_generic_matches_specialized(seed, nu):
    sys, U, _, delta = _sample(seed, nu)
    scale = 2.0 if nu <= 1.0 else 1.0
    np.testing.assert_allclose(hinf_generic(sys, delta, U), hinf_pre_schur(sys, delta, scale * U),
                               atol=1e-12 * (1 + np.abs(U).max()))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.1, 1.9), st.floats(-3, 3), st.floats(-3, 3))
def test_kyp_identity(seed, nu, re, im):
    # [H; I]* N* (Delta (x) U + Sigma (x) V) N [H; I] = rho(t, Delta) H*UH + rho(t, Sigma) H*VH
    rng = np.random.default_rng(seed)
    sys = random_stable(rng, nu)
    theta = complex(re, im)
    pair = make_curve(FrequencyRange.middle(0.3, 2.0), nu)
    U, V = random_hermitian(rng, sys.n), random_hermitian(rng, sys.n)
    try:
        H = np.linalg.solve(theta * np.eye(sys.n) - sys.A, sys.B)
    except np.linalg.LinAlgError:
        return
    S = np.vstack([H, np.eye(sys.m)])
    Z = np.zeros((sys.n + sys.m,) * 2)
    lhs = S.conj().T @ generic_matrix(sys, pair, Z, U, V) @ S
    rhs = (rho(theta, pair.Delta)[0, 0] * H.conj().T @ U @ H
           + rho(theta, pair.Sigma)[0, 0] * H.conj().T @ V @ H)
    np.testing.assert_allclose(lhs, rhs, atol=1e-9 * (1 + np.abs(rhs).max()))


def test_built_map_reproduces_block_formula():
    sys = example1()
    fr = FrequencyRange.low(100.0)
    prob = build_linf_lmi(sys, fr, 0.9)
    rng = np.random.default_rng(0)
    U = random_hermitian(rng, 2)
    V = np.eye(2)
    np.testing.assert_allclose(prob.matrix(U=U, V=V), linf_matrix(sys, fr, 0.9, U, V), atol=1e-12)
    assert prob.variables == {"U": "free", "V": "positive"}
    assert prob.theorem == "linf-low"


def test_entire_range_has_no_positive_block():
    prob = build_linf_lmi(example1(), FrequencyRange.entire(), 1.0)
    assert prob.variables == {"U": "free"}
    assert assemble_generic(example1(), make_curve(FrequencyRange.entire(), 0.6),
                            build_pi(example1().C, example1().D, 1.0)).variables == {"U": "free"}


def test_hinf_builder_tags():
    assert build_hinf_lmi(example1(), 1.0).theorem == "hinf-le1"
    sys = random_stable(np.random.default_rng(1), 1.5)
    prob = build_hinf_lmi(sys, 1.0)
    assert prob.theorem == "hinf-gt1" and prob.variables == {"U": "positive"}
    np.testing.assert_allclose(prob.matrix(U=np.eye(sys.n)), hinf_matrix(sys, 1.0, np.eye(sys.n)))


@pytest.mark.parametrize("nu", [0.5, 1.0, 1.5])
def test_hinf_region_contains_image_of_right_half_plane(nu):
    Delta, Sigma = hinf_region(nu)
    rng = np.random.default_rng(7)
    for s in rng.uniform(0, 5, 50) * np.exp(1j * rng.uniform(-np.pi / 2, np.pi / 2, 50)):
        theta = s ** nu
        if nu > 1.0 and theta.imag > 0:
            theta = theta.conjugate()
        assert rho(theta, Delta)[0, 0].real >= -1e-12
        assert rho(theta, Sigma)[0, 0].real >= -1e-12


def test_nonpositive_delta_rejected():
    with pytest.raises(InvalidInput):
        build_linf_lmi(example1(), FrequencyRange.entire(), 0.0)
    with pytest.raises(InvalidInput):
        build_hinf_lmi(example1(), -1.0)


def test_imaginary_axis_lies_on_curve_line():
    pair = make_curve(FrequencyRange.entire(), 0.6)
    assert abs(rho(principal_power(2.0, 0.6), pair.Delta)[0, 0]) < 1e-12
