import numpy as np
import pytest

from nhskin.errors import AmbiguousTargetError, SingularProbeError, StepSizeError
from nhskin.model import HoppingTerm, LatticeModel, builtin_hatano_nelson, builtin_nh_ssh
from nhskin.realspace import OBC, PBC, build, from_matrix
from nhskin.response import (
    amplification_log_ratio,
    boundary_crossover,
    funnel_model,
    reciprocity_test,
    sensor_sweep,
    susceptibility,
    time_evolve,
)
from nhskin.spectral import dense_spectrum, hausdorff_distance


def test_susceptibility_two_site_hand_values():
    op = build(builtin_hatano_nelson(0.5, 1.0), [2], OBC)
    s = susceptibility(op, 2.0)
    ref = -1j / 3.5 * np.array([[2.0, 0.5], [1.0, 2.0]])
    np.testing.assert_allclose(s.chi, ref, atol=1e-14)
    assert s.asymmetry == pytest.approx(0.5 / 3.5, abs=1e-14)


def test_resolvent_identity():
    op = build(builtin_hatano_nelson(0.5, 1.0), [25], OBC)
    for w in (2.1, 0.4 + 0.3j, -1.9 - 0.1j):
        s = susceptibility(op, w)
        A = w * np.eye(25) - op.matrix
        kappa = np.linalg.cond(A)
        assert np.abs(A @ (1j * s.chi) - np.eye(25)).max() < 1e-8 * kappa


def test_probe_on_eigenvalue_is_singular():
    op = build(builtin_hatano_nelson(1.0, 1.0), [5], OBC)
    w = dense_spectrum(op)[2]
    with pytest.raises(SingularProbeError):
        susceptibility(op, w)


def test_reciprocity_verdicts():
    omegas = [3.0, 2.0 + 1.0j]
    herm = build(builtin_hatano_nelson(1.0, 1.0), [12], OBC)
    rows = reciprocity_test(herm, omegas)
    assert all(r["reciprocal"] for r in rows)
    assert max(r["asymmetry"] for r in rows) < 1e-12
    skin = build(builtin_hatano_nelson(0.5, 1.0), [12], OBC)
    assert not any(r["reciprocal"] for r in reciprocity_test(skin, omegas))


def test_diagonal_gain_loss_is_reciprocal():
    # non-Hermitian but reciprocal: no direction is preferred
    op = from_matrix(np.diag([0.3 + 0.2j, -0.1j, 1.0, 0.5 - 0.7j]))
    rows = reciprocity_test(op, [2.0 + 0.5j])
    assert rows[0]["reciprocal"]


def test_amplification_matches_direct_ratio():
    op = build(builtin_hatano_nelson(0.5, 1.0), [20], OBC)
    s = susceptibility(op, 0.0)
    direct = np.log(np.abs(s.chi[19, 0] / s.chi[0, 19]))
    assert direct == pytest.approx(19 * np.log(2.0), rel=1e-9)
    assert amplification_log_ratio(op, 0.0) == pytest.approx(direct, rel=1e-9)


def test_amplification_survives_singular_resolvent():
    # odd length: omega = 0 is an eigenvalue and the susceptibility itself
    # is unavailable, but the gain ratio stays finite
    op = build(builtin_hatano_nelson(0.5, 1.0), [5], OBC)
    with pytest.raises(SingularProbeError):
        susceptibility(op, 0.0)
    assert amplification_log_ratio(op, 0.0) == pytest.approx(4 * np.log(2.0), rel=1e-9)


def test_time_evolve_zero_hamiltonian():
    op = from_matrix(np.zeros((8, 8)))
    psi0 = np.zeros(8, complex)
    psi0[2] = 1.0
    traj = time_evolve(op, psi0, 1.0, 0.1)
    np.testing.assert_allclose(traj.states - traj.states[0], 0.0, atol=1e-14)
    np.testing.assert_allclose(traj.log_growth, 0.0, atol=1e-14)


def test_hermitian_evolution_is_norm_preserving():
    op = build(builtin_hatano_nelson(1.0, 1.0), [20], OBC)
    psi0 = np.zeros(20, complex)
    psi0[3] = 1.0
    traj = time_evolve(op, psi0, 5.0, 0.05)
    steps = np.diff(traj.log_growth)
    assert np.abs(np.exp(steps) - 1.0).max() < 1e-9
    assert np.all(np.diff(traj.times) > 0)
    np.testing.assert_allclose(np.linalg.norm(traj.states, axis=1), 1.0, atol=1e-12)


def test_step_size_guard():
    op = build(builtin_hatano_nelson(1.0, 1.0), [10], OBC)
    with pytest.raises(StepSizeError):
        time_evolve(op, np.ones(10, complex), 1.0, 0.3)


def test_funnel_model_shape_and_interface():
    op = funnel_model(0.5, 1.0, 6)
    h = op.matrix
    assert h.shape == (12, 12)
    assert h[0, 1] == 0.5 and h[1, 0] == 1.0  # left half
    assert h[10, 11] == 1.0 and h[11, 10] == 0.5  # right half mirrored
    assert h[5, 6] == h[6, 5] == 0.75  # interface carries the average


def test_funnel_requires_asymmetry():
    with pytest.raises(ValueError):
        funnel_model(1.0, 1.0, 30)


def test_funnel_eigenstates_concentrate_at_interface():
    op = funnel_model(0.5, 1.0, 30)
    _, v = np.linalg.eig(op.matrix)
    third = slice(20, 40)
    mass = (np.abs(v[third, :]) ** 2).sum(axis=0) / (np.abs(v) ** 2).sum(axis=0)
    assert mass.min() > 0.9


def test_anti_funnel_pushes_mass_outward():
    op = funnel_model(1.0, 0.5, 30)
    _, v = np.linalg.eig(op.matrix)
    third = slice(20, 40)
    mass = (np.abs(v[third, :]) ** 2).sum(axis=0) / (np.abs(v) ** 2).sum(axis=0)
    assert np.mean(mass) < 0.3


def test_sensor_zero_coupling_zero_shift():
    rows = sensor_sweep(builtin_nh_ssh(0.6, 1.0, 0.3), 0.0, [10, 14])
    assert all(r["delta_E"] == 0 for r in rows)


def test_sensor_rejects_sizes_off_the_cell_grid():
    with pytest.raises(ValueError):
        sensor_sweep(builtin_nh_ssh(0.6, 1.0, 0.3), 1e-4, [11])


def test_sensor_ambiguous_on_degenerate_spectrum():
    # two decoupled identical chains: every eigenvalue is doubly degenerate
    amp = lambda a: np.array([[a, 0.0], [0.0, a]])
    twin = LatticeModel(
        dimension=1,
        bands=2,
        terms=[
            HoppingTerm(offset=(1,), amplitude=amp(0.5)),
            HoppingTerm(offset=(-1,), amplitude=amp(1.0)),
        ],
    )
    with pytest.raises(AmbiguousTargetError):
        sensor_sweep(twin, 1e-4, [12])


def test_hermitian_control_sweep_runs():
    rows = sensor_sweep(builtin_nh_ssh(0.6, 1.0, 0.0), 1e-4, [10, 14, 18, 22])
    assert [r["N"] for r in rows] == [10, 14, 18, 22]
    assert all(r["delta_E"] >= 0 for r in rows)


def test_crossover_endpoints():
    m = builtin_hatano_nelson(0.5, 1.0)
    rows = boundary_crossover(m, 30, [1.0])
    obc = dense_spectrum(build(m, [30], OBC))
    pbc = dense_spectrum(build(m, [30], PBC))
    assert rows[0]["distance"] == pytest.approx(hausdorff_distance(pbc, obc), abs=1e-12)
    assert rows[0]["max_imag"] == pytest.approx(np.abs(pbc.imag).max(), abs=1e-12)
    tiny = boundary_crossover(m, 30, [1e-16])[0]
    assert tiny["distance"] < 1e-8


def test_crossover_distance_monotone_in_epsilon():
    m = builtin_hatano_nelson(0.5, 1.0)
    rows = boundary_crossover(m, 24, [1e-12, 1e-6, 1e-2, 1.0])
    d = [r["distance"] for r in rows]
    assert all(np.diff(d) >= -1e-9)
