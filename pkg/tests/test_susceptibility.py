import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tripodgate.bloch import chi_from_bloch
from tripodgate.errors import ConfigError, DegenerateDetuningError, PoleProximityError
from tripodgate.params import AtomParams, Beam, Convention, FieldParams, MediumParams
from tripodgate.susceptibility import (
    absorption,
    chi1,
    chi3,
    chi_total,
    kerr_core,
    kerr_prefactor,
    linear_core,
    linear_prefactor,
    susceptibilities,
)

MED = MediumParams()
detuning = st.floats(-3.0, 3.0)


def clamped_rel_errors(atom, w, medium=MED):
    fields = FieldParams(w, w, 4.5)
    out = []
    for beam in (Beam.P, Beam.T):
        ref = chi_from_bloch(atom, fields, medium, beam, populations=(0, 0.5, 0, 0.5))
        got = chi_total(beam, atom, fields, medium)
        out += [abs(got.real - ref.real) / abs(ref.real), abs(got.imag - ref.imag) / abs(ref.imag)]
    return np.array(out)


def test_closed_forms_match_clamped_bloch_oracle():
    rng = np.random.default_rng(11)
    for _ in range(5):
        d = rng.uniform(-2, 2, 3)
        atom = AtomParams(*d, gamma_d=rng.uniform(0.005, 0.05))
        e1 = clamped_rel_errors(atom, 2e-2)
        e2 = clamped_rel_errors(atom, 1e-2)
        assert np.all(e2 < 1e-2)
        # second-order convergence of the residual
        np.testing.assert_allclose(e1 / e2, 4.0, rtol=0.05)


def test_prefactor_calibration_against_bloch_weak_field(ref_atom):
    fields = FieldParams(1e-5, 1e-5, 4.5)
    for beam in (Beam.P, Beam.T):
        ref = chi_from_bloch(ref_atom, fields, MED, beam, populations=(0, 0.5, 0, 0.5))
        assert chi1(beam, ref_atom, fields, MED) == pytest.approx(ref, rel=1e-6)


def test_two_level_limit_of_linear_core():
    # Without the pump the probe core is ½/Δ10
    core = linear_core(Beam.P, 0.7, 0.2, -0.5, 0.01, 0.0)
    assert core == pytest.approx(0.5 / (0.7 + 1j))


def test_printed_trigger_linear_form_is_exact_and_probe_form_differs(ref_atom):
    args = (*ref_atom.deltas, ref_atom.gamma_d, 4.5**2)
    assert linear_core("T", *args, form="printed") == pytest.approx(linear_core("T", *args), rel=1e-14)
    assert abs(linear_core("P", *args, form="printed") - linear_core("P", *args)) > 1e-3 * abs(
        linear_core("P", *args))
    # with the pump off both forms coincide
    args0 = (*ref_atom.deltas, ref_atom.gamma_d, 0.0)
    assert linear_core("P", *args0, form="printed") == pytest.approx(linear_core("P", *args0))


def test_printed_kerr_form_is_much_smaller_than_derived(ref_atom):
    args = (*ref_atom.deltas, ref_atom.gamma_d, 4.5**2)
    ratio = abs(kerr_core("P", *args, form="printed")) / abs(kerr_core("P", *args))
    assert ratio < 0.05


@settings(max_examples=50, deadline=None)
@given(detuning, detuning, detuning, st.floats(0.0, 0.1), st.floats(0.5, 6.0))
def test_probe_trigger_mirror_symmetry(d1, d2, d3, gd, w):
    if abs(d1 - d3) < 1e-3 and gd < 1e-3:
        return
    a = (d1, d2, d3, gd, w**2)
    b = (d3, d2, d1, gd, w**2)
    assert complex(linear_core("P", *a)) == pytest.approx(complex(linear_core("T", *b)), rel=1e-12)
    assert complex(kerr_core("P", *a)) == pytest.approx(complex(kerr_core("T", *b)), rel=1e-10)


def test_printed_forms_break_mirror_symmetry_even_for_real_detunings():
    # The sign of |Ω|² in the printed probe denominator differs from the
    # trigger one, so exchanging 1 <-> 3 does not map P onto T.
    a = (0.4, 0.1, -0.3, 0.0, 4.0)
    b = (-0.3, 0.1, 0.4, 0.0, 4.0)
    for core in (linear_core, kerr_core):
        p = complex(core("P", *a, form="printed"))
        t = complex(core("T", *b, form="printed"))
        assert abs(p - t) > 1e-2 * abs(t)
        assert complex(core("P", *a)) == pytest.approx(complex(core("T", *b)), rel=1e-12)


def test_convention_prefactors_agree_numerically(ref_atom, default_fields):
    for beam in (Beam.P, Beam.T):
        si = linear_prefactor(MED, beam, Convention.SI, ref_atom.gamma)
        g = linear_prefactor(MED, beam, Convention.GAUSSIAN, ref_atom.gamma)
        # equal up to the non-exact μ0 = 4π·10⁻⁷ behind the CGS conversion
        assert g == pytest.approx(si, rel=1e-9)
        assert chi_total(beam, ref_atom, default_fields, MED, "si") == pytest.approx(
            chi_total(beam, ref_atom, default_fields, MED, "gaussian"), rel=1e-9)
    # χ⁽³⁾ carries field units: m²/V² against cm²/statV²
    ratio = kerr_prefactor(MED, "gaussian", ref_atom.gamma) / kerr_prefactor(MED, "si", ref_atom.gamma)
    v_per_m_per_statv_per_cm = 299792458.0 * 1e-4
    assert ratio == pytest.approx(v_per_m_per_statv_per_cm**2, rel=1e-8)


def test_prefactor_value(ref_atom):
    # 𝒩μ²/(ħε₀) for the reference medium
    x = linear_prefactor(MED, "P", "si", ref_atom.gamma) * ref_atom.gamma
    assert x == pytest.approx(3.0e18 * 1e-58 / (1.054571817e-34 * 8.8541878128e-12), rel=1e-8)


def test_absorption_sign_and_perfect_eit():
    fields = FieldParams(1.0, 1.0, 4.5)
    resonant = AtomParams(0.0, 0.0, 0.0, gamma_d=0.0)
    assert absorption(chi1("P", resonant, fields, MED), MED.k_p, MED.length) == 0.0
    lossy = AtomParams(0.0, 0.0, 0.0, gamma_d=0.05)
    assert absorption(chi1("P", lossy, fields, MED), MED.k_p, MED.length) > 0.0
    # absorption exponent scales with the index multiplier
    c = chi1("P", lossy, fields, MED)
    assert absorption(c, 1.0, 1.0, "gaussian") / absorption(c, 1.0, 1.0, "si") == pytest.approx(4 * np.pi)


def test_pole_and_raman_guards():
    with pytest.raises(DegenerateDetuningError):
        kerr_core("P", 0.0, 0.0, 0.0, 0.0, 20.25)
    # D_P = Δ10·(δ1−δ2) − Ω² vanishes for δ1 = 0, δ1 − δ2 = ... choose an exact zero
    with pytest.raises(PoleProximityError):
        linear_core("P", 0.0, 0.0, 0.0, 0.0, 0.0)
    with pytest.raises(ConfigError):
        linear_core("P", 1.0, 0.0, 0.0, 0.0, 1.0, form="typo")


def test_chi3_scales_with_density(ref_atom, default_fields):
    dense = MediumParams(density=6e18)
    assert chi3("P", ref_atom, default_fields, dense) == pytest.approx(
        2 * chi3("P", ref_atom, default_fields, MED), rel=1e-12)


def test_susceptibilities_record(ref_atom, default_fields):
    s = susceptibilities(ref_atom, default_fields, MED, "gaussian")
    d = s.as_dict()
    assert d["convention"] == "gaussian" and set(d["chi1_p"]) == {"re", "im"}
    assert s.chi1_p == pytest.approx(chi1("P", ref_atom, default_fields, MED, "gaussian"))
