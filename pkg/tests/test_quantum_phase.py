import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tripodgate.errors import ConfigError
from tripodgate.propagation import coefficients
from tripodgate.quantum_phase import (
    CoherentInput,
    coherent_expectation,
    default_bandwidth,
    evaluate,
    phase_from_eta,
    quantum_phase,
)

amp = st.complex_numbers(max_magnitude=5.0, allow_nan=False, allow_infinity=False)
phase = st.floats(-10.0, 10.0)


def test_zero_phase_is_identity():
    inp = CoherentInput(0.3 + 0.4j, 2.0 - 1j, 1.7)
    ep, et = coherent_expectation(inp, 0.0, 0.0)
    assert ep == inp.alpha_p and et == inp.alpha_t


def test_pi_phase_gives_maximal_decoherence():
    inp = CoherentInput(1.0 + 0.5j, 0.8j, 2.0)
    ep, _ = coherent_expectation(inp, math.pi, 0.0)
    # −2·sin²(π/2) = −2 and sin π = 0
    assert ep == pytest.approx(inp.alpha_p * math.exp(-2 * abs(inp.alpha_t) ** 2 / 2.0), rel=1e-12)


def test_small_phase_expansion():
    phi, n, dw = 1e-3, 4.0, 2.0
    ep, _ = coherent_expectation(CoherentInput(1.0, math.sqrt(n), dw), phi, 0.0)
    assert abs(ep) == pytest.approx(math.exp(-phi**2 * n / (2 * dw)), rel=1e-9)
    assert np.angle(ep) == pytest.approx(phi * n / dw, rel=1e-6)


def test_bandwidth_must_be_positive():
    with pytest.raises(ConfigError):
        CoherentInput(1.0, 1.0, 0.0)


@settings(max_examples=200, deadline=None)
@given(amp, amp, phase, phase, st.floats(0.01, 100.0))
def test_amplitude_never_grows_and_swap_symmetry(ap, at, pp, pt, dw):
    inp = CoherentInput(ap, at, dw)
    ep, et = coherent_expectation(inp, pp, pt)
    assert abs(ep) <= abs(ap) * (1 + 1e-12) and abs(et) <= abs(at) * (1 + 1e-12)
    sp, st_ = coherent_expectation(CoherentInput(at, ap, dw), pt, pp)
    assert sp == et and st_ == ep


@settings(max_examples=100, deadline=None)
@given(amp, amp, phase, st.floats(0.1, 10.0))
def test_periodic_in_phase(ap, at, pp, dw):
    inp = CoherentInput(ap, at, dw)
    a, _ = coherent_expectation(inp, pp, 0.0)
    b, _ = coherent_expectation(inp, pp + 2 * math.pi, 0.0)
    assert abs(a - b) <= 1e-12 * max(1.0, abs(ap))


def test_zero_eta_zero_phase():
    assert phase_from_eta(0.0, 1e7, 3e7) == 0.0


def test_reference_quantum_phase(ref):
    co = coefficients(ref.atom, ref.fields, ref.medium)
    phi_p, phi_t = quantum_phase(ref.atom, ref.fields, ref.medium)
    dw = default_bandwidth(co)
    assert dw == min(co.dwtr_p, co.dwtr_t)
    expected = (299792458.0 / ref.atom.gamma) * co.eta_p.real * dw / ref.atom.gamma
    assert phi_p == pytest.approx(expected, rel=1e-12)
    assert np.sign(phi_p) == np.sign(phi_t) == np.sign(co.eta_p.real)


def test_semiclassical_limit_of_expectation_phase(ref):
    # small Φ and large |α_T|²: arg⟨E_P⟩ equals Φ·|α_T|²/Δω
    res = evaluate(ref.atom, ref.fields, ref.medium, 1.0, 30.0)
    dw = res.delta_omega / ref.atom.gamma
    assert np.angle(res.mean_e_p) == pytest.approx(res.phi_p * 900.0 / dw, rel=0.05)
    assert res.damping_p >= 0 and res.damping_t >= 0
    assert abs(res.mean_e_p) <= 1.0
