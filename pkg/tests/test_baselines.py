import numpy as np
import pytest
import scipy.linalg

from rolldamp.baselines import (LQR_BENCHMARK_WEIGHTS, BaselineDesignError,
                                NotchController, baseline_from_json,
                                baseline_to_json, design_lqr,
                                notch_controller)
from rolldamp.lti import is_stable
from rolldamp.polyalg import Polynomial


def test_lqr_benchmark_stable(plant_ss, lqr):
    assert lqr.K.shape == (2, 6)
    stable, margin = is_stable(lqr.closed_loop(plant_ss))
    assert stable and margin > 0.0


def test_lqr_gain_matches_scipy(plant_ss, lqr):
    Q = plant_ss.C.T @ np.diag(LQR_BENCHMARK_WEIGHTS[:2]) @ plant_ss.C
    R = np.diag(LQR_BENCHMARK_WEIGHTS[2:])
    P = scipy.linalg.solve_continuous_are(plant_ss.A, plant_ss.B, Q, R)
    K = np.linalg.solve(R, plant_ss.B.T @ P)
    np.testing.assert_allclose(lqr.K, K, rtol=1e-6, atol=1e-9)


def test_lqr_riccati_residual(plant_ss, lqr):
    # reconstruct P from the returned gain: K = R^-1 B' P has full row rank
    # here, so check the Riccati equation through scipy's P instead
    Q = plant_ss.C.T @ np.diag(LQR_BENCHMARK_WEIGHTS[:2]) @ plant_ss.C
    R = np.diag(LQR_BENCHMARK_WEIGHTS[2:])
    from rolldamp.lti import solve_care
    P = solve_care(plant_ss.A, plant_ss.B, Q, R)
    res = (plant_ss.A.T @ P + P @ plant_ss.A
           - P @ plant_ss.B @ np.linalg.solve(R, plant_ss.B.T @ P) + Q)
    assert np.linalg.norm(res) <= 1e-8 * np.linalg.norm(Q)


def test_lqr_rejects_nonpositive_weights(plant_ss):
    with pytest.raises(BaselineDesignError):
        design_lqr(plant_ss, (0.0, 1.0, 0.1, 0.01))


def test_lqr_closed_loop_outputs(plant_ss, lqr):
    cl = lqr.closed_loop(plant_ss)
    assert cl.n_outputs == 4
    assert cl.E.shape == (6, 3)
    s = 1.15j
    u_rows = cl.transfer(s, channel="d")[2:]
    np.testing.assert_allclose(u_rows, lqr.disturbance_to_control(plant_ss, s),
                               rtol=1e-10, atol=1e-12)


def test_lqr_gain_shape_guard(plant_ss, lqr):
    import dataclasses
    wrong = dataclasses.replace(lqr, K=lqr.K[:, :4])
    with pytest.raises(ValueError):
        wrong.closed_loop(plant_ss)


def test_notch_benchmark_coefficients(notch):
    np.testing.assert_allclose(notch.numerator.coeffs, [-13.225, -2.3, -10.0])
    np.testing.assert_allclose(notch.denominator.coeffs, [1.3225, 2.3, 1.0])
    assert notch.drive == 0
    roots = notch.denominator.roots()
    np.testing.assert_allclose(sorted(r.real for r in roots), [-1.15, -1.15],
                               atol=1e-8)
    np.testing.assert_allclose([r.imag for r in roots], [0.0, 0.0], atol=1e-8)


def test_notch_gain_values(notch):
    H = notch.transfer_matrix()
    assert H(0.0)[0, 0] == pytest.approx(-10.0)
    # at the center the band numerator is down to its damping term
    assert abs(H(1.15j)[0, 0]) == pytest.approx(1.0, rel=1e-12)
    assert abs(H(1.15j)[0, 0]) < abs(H(0.575j)[0, 0])
    assert abs(H(1.15j)[0, 0]) < abs(H(2.3j)[0, 0])


def test_notch_routing(plant_ss):
    rudder = notch_controller(drive=0)
    fin = notch_controller(drive=1)
    s = 0.9j
    H0, H1 = rudder.transfer_matrix()(s), fin.transfer_matrix()(s)
    assert H0[0, 0] != 0 and H0[1, 0] == 0 and H0[0, 1] == 0
    assert H1[1, 0] != 0 and H1[0, 0] == 0
    for ctrl in (rudder, fin):
        stable, margin = is_stable(ctrl.closed_loop(plant_ss))
        assert stable and margin > 0.0


def test_notch_validation():
    with pytest.raises(ValueError):
        notch_controller(omega=-1.0)
    with pytest.raises(ValueError):
        notch_controller(drive=2)
    with pytest.raises(ValueError):
        NotchController(numerator=Polynomial([0.0, 0.0, 0.0, 1.0]),
                        denominator=Polynomial([1.3225, 2.3, 1.0]))


def test_unstable_notch_rejected(plant_ss):
    hot = notch_controller(gain=500.0)
    with pytest.raises(BaselineDesignError, match="unstable"):
        hot.closed_loop(plant_ss)


def test_dtoc_matches_closed_loop(plant, plant_ss, notch):
    cl = notch.closed_loop(plant_ss)
    for w in (0.3, 1.15, 2.7):
        s = 1j * w
        u_rows = cl.transfer(s, channel="d")[2:]
        direct = notch.disturbance_to_control(plant, s)
        np.testing.assert_allclose(u_rows, direct, rtol=0,
                                   atol=1e-8 * (1 + np.max(np.abs(direct))))


def test_baseline_json_roundtrip(lqr, notch):
    lqr2 = baseline_from_json(baseline_to_json(lqr))
    np.testing.assert_array_equal(lqr2.K, lqr.K)
    assert lqr2.q_weights == lqr.q_weights

    notch2 = baseline_from_json(baseline_to_json(notch))
    np.testing.assert_array_equal(notch2.numerator.coeffs,
                                  notch.numerator.coeffs)
    np.testing.assert_array_equal(notch2.denominator.coeffs,
                                  notch.denominator.coeffs)
    assert notch2.drive == notch.drive


def test_baseline_json_rejects_unknown_kind():
    with pytest.raises(ValueError):
        baseline_from_json('{"kind": "pid"}')
