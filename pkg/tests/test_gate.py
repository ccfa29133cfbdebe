import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tripodgate.errors import ConfigError
from tripodgate.gate import (
    BASIS,
    NoiseModel,
    PhaseShifts,
    absorption_scan,
    conditional_phase,
    draw_normals,
    gate_error_mc,
    phase_shifts,
    table_from_shifts,
    truth_table,
)
from tripodgate.params import AtomParams, Convention, FieldParams, MediumParams, Polarization

SP, SM = Polarization.SIGMA_PLUS, Polarization.SIGMA_MINUS


def shifts(nl_p, nl_t, ex_p=0.3, ex_t=-0.2, phi0=1.0e5):
    return PhaseShifts(phi0, phi0 * 1.01, ex_p, ex_t, nl_p, nl_t, Convention.GAUSSIAN)


def test_conditional_phase_trivial_values():
    assert conditional_phase(table_from_shifts(shifts(math.pi / 2, math.pi / 2))) == math.pi
    assert conditional_phase(table_from_shifts(shifts(0.0, 0.0))) == 0.0


@settings(max_examples=200, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(-100, 100), st.floats(-100, 100),
       st.floats(0, 1e6))
def test_conditional_phase_identity(nl_p, nl_t, ex_p, ex_t, phi0):
    table = table_from_shifts(shifts(nl_p, nl_t, ex_p, ex_t, phi0))
    assert abs(conditional_phase(table) - (nl_p + nl_t)) <= 1e-12 * max(1.0, abs(nl_p) + abs(nl_t))
    for key in BASIS:
        e = table[key]
        assert e.total == pytest.approx(e.vacuum + e.linear + e.nonlinear, rel=1e-15)


def test_table_structure(ref):
    t = truth_table(ref.atom, ref.fields, ref.medium, ref.pulses)
    assert t[(SM, SP)].linear == 0 and t[(SM, SP)].nonlinear == 0
    assert [t[k].nonlinear != 0 for k in BASIS] == [False, False, False, True]
    # roles of probe and trigger are not exchangeable
    assert t[(SP, SM)].total != t[(SM, SP)].total
    u = t.unitary()
    np.testing.assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-12)
    assert t.as_dict()["conditional_phase"] == conditional_phase(t)


def test_empty_medium_has_only_vacuum_phases(ref):
    empty = MediumParams(density=1e-12, n_atoms=1e-12)
    t = truth_table(ref.atom, ref.fields, empty, ref.pulses)
    assert abs(conditional_phase(t)) < 1e-12
    for k in BASIS:
        assert abs(t[k].total - t[k].vacuum) < 1e-12


def test_linear_excess_convention_ratio(ref):
    s = phase_shifts(ref.atom, ref.fields, ref.medium, ref.pulses, "gaussian")
    assert s.lin_excess_p / s.lin_excess_si_p == pytest.approx(4 * math.pi, rel=1e-9)


def test_absorption_scan_shape():
    gd = np.linspace(0, 0.1, 11)
    data = absorption_scan(gd)
    assert data[0, 1] == 0.0 and data[0, 2] == 0.0
    assert np.all(np.diff(data[:, 1]) > 0)
    assert data[-1, 1] == 1.0
    with pytest.raises(ConfigError):
        absorption_scan([-0.1])


def test_mc_zero_noise_zero_error(ref):
    r = gate_error_mc(NoiseModel(0.0, 50, 1), ref.atom, ref.fields, ref.medium, ref.pulses)
    assert r.mean_error == 0.0 and r.n_failed == 0


def test_mc_reproducible_and_counter_based(ref):
    args = (ref.atom, ref.fields, ref.medium, ref.pulses)
    a = gate_error_mc(NoiseModel(0.01, 300, 7), *args)
    b = gate_error_mc(NoiseModel(0.01, 300, 7), *args)
    assert a.mean_error == b.mean_error and np.array_equal(a.dphi, b.dphi)
    np.testing.assert_array_equal(draw_normals(7, 1000)[:300], draw_normals(7, 300))


def test_mc_quadratic_scaling_and_monotonic(ref):
    args = (ref.atom, ref.fields, ref.medium, ref.pulses)
    z = draw_normals(3, 2000)
    errs = [gate_error_mc(NoiseModel(lv, 2000, 3), *args, normals=z).mean_error for lv in (0.005, 0.01, 0.02)]
    assert errs[0] <= errs[1] <= errs[2]
    assert 0.2 <= errs[0] / errs[1] <= 0.3


def test_mc_counts_failures():
    atom = AtomParams(0.0, 0.0, 0.0, gamma_d=0.01)
    fields = FieldParams(1.0, 1.0, 4.5)
    from tripodgate.params import Pulses
    # huge noise produces nonpositive intensities, which are counted not averaged
    r = gate_error_mc(NoiseModel(2.0, 200, 0), atom, fields, MediumParams(), Pulses.from_fields(fields, 5e-7, 5e-7))
    assert r.n_failed > 0 and r.n_ok + r.n_failed == 200


def test_noise_model_validation():
    with pytest.raises(ConfigError):
        NoiseModel(-0.1)
    with pytest.raises(ConfigError):
        NoiseModel(0.01, 0)
    with pytest.raises(ConfigError):
        NoiseModel(0.01, 10, fluctuate=("laser_phase",))
