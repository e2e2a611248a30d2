"""Finite-volume kernel tests: fluctuation algebra, conservation, N=1 agreement."""

import numpy as np
import pytest

from swmoments.basis import coefficient_tensors
from swmoments.models import ModelKind, convective_matrices_batch
from swmoments.solver import (
    Field1D,
    Friction,
    SolverConfig,
    SolverError,
    friction_source,
    path_fluctuations,
    run,
    step,
    wave_speeds,
)
from swmoments.state import ConvectiveState, DryStateError, PrimitiveState


def smooth_periodic_field(N, n_cells=80):
    x = np.linspace(0, 1, n_cells, endpoint=False) + 0.5 / n_cells
    h = 1.0 + 0.2 * np.sin(2 * np.pi * x)
    u = 0.1 * np.cos(2 * np.pi * x)
    al = 0.05 * np.sin(4 * np.pi * x)[:, None] * np.ones(N)
    return Field1D.from_primitive(0.0, 1.0, h, u, al, boundary="periodic")


def dam_break_field(N, n_cells=100):
    x = np.linspace(-1, 1, n_cells, endpoint=False) + 1.0 / n_cells
    h = np.where(x <= 0, 1.5, 1.0)
    u = np.full(n_cells, 0.25)
    al = np.zeros((n_cells, N))
    al[:, 0] = -0.25
    return Field1D.from_primitive(-1.0, 1.0, h, u, al)


def test_zero_jump_gives_zero_fluctuations(tensors_cache):
    UL = ConvectiveState(1.5, 0.375, [-0.375, 0.0])
    Dm, Dp = path_fluctuations(UL, UL, ModelKind.PMHSWME, tensors_cache(2))
    np.testing.assert_array_equal(Dm, 0.0)
    np.testing.assert_array_equal(Dp, 0.0)


def test_mass_component_is_discharge_jump(rng, tensors_cache):
    for model in ModelKind:
        UL = ConvectiveState(1.2, 0.3, rng.uniform(-0.5, 0.5, 3))
        UR = ConvectiveState(0.9, -0.2, rng.uniform(-0.5, 0.5, 3))
        Dm, Dp = path_fluctuations(UL, UR, model, tensors_cache(3))
        assert Dm[0] + Dp[0] == pytest.approx(UR.hu_m - UL.hu_m, abs=1e-14)


def test_consistency_identity(rng, tensors_cache):
    for model in ModelKind:
        for _ in range(5):
            UL = ConvectiveState(rng.uniform(0.5, 2), rng.uniform(-1, 1), rng.uniform(-1, 1, 2))
            UR = ConvectiveState(rng.uniform(0.5, 2), rng.uniform(-1, 1), rng.uniform(-1, 1, 2))
            Dm, Dp = path_fluctuations(UL, UR, model, tensors_cache(2), g=1.3)
            Ubar = 0.5 * (UL.as_array() + UR.as_array())
            A = convective_matrices_batch(model, Ubar[None, :], tensors_cache(2), 1.3)[0]
            want = A @ (UR.as_array() - UL.as_array())
            np.testing.assert_allclose(Dm + Dp, want, atol=1e-13)


def test_hand_evaluated_first_order_jump(tensors_cache):
    # one concrete N = 1 interface worked out from the closed formulas
    g = 1.0
    UL = ConvectiveState(2.0, 1.0, [-0.5])
    UR = ConvectiveState(1.0, 0.3, [0.2])
    hb, hub, hab = 1.5, 0.65, -0.15
    ub, ab = hub / hb, hab / hb
    A = np.array([
        [0.0, 1.0, 0.0],
        [-ub**2 + g * hb - ab**2 / 3.0, 2 * ub, 2 * ab / 3.0],
        [-2 * ub * ab, 2 * ab, ub],
    ])
    states = [(2.0, 0.5, -0.25), (1.0, 0.3, 0.2), (hb, ub, ab)]
    s = max(abs(u) + np.sqrt(g * h + a * a) for h, u, a in states)
    dU = UR.as_array() - UL.as_array()
    Dm_want = 0.5 * (A @ dU - s * dU)
    Dp_want = 0.5 * (A @ dU + s * dU)
    Dm, Dp = path_fluctuations(UL, UR, ModelKind.HSWME, tensors_cache(1), g)
    np.testing.assert_allclose(Dm, Dm_want, atol=1e-14)
    np.testing.assert_allclose(Dp, Dp_want, atol=1e-14)


def test_fluctuations_need_wet_states(tensors_cache):
    wet = ConvectiveState(1.0, 0.0, [0.0])
    with pytest.raises(DryStateError):
        path_fluctuations(wet, ConvectiveState(1e-12, 0.0, [0.0]), ModelKind.SWME, tensors_cache(1))


def test_wave_speeds_match_numeric_radius(rng, tensors_cache):
    for model in ModelKind:
        for N in (1, 2, 4):
            U = np.column_stack([
                rng.uniform(0.5, 2.0, 12),
                rng.uniform(-1, 1, 12),
                *[rng.uniform(-1, 1, 12) for _ in range(N)],
            ])
            speeds, _ = wave_speeds(model, U, tensors_cache(N), 1.6)
            ev = np.linalg.eigvals(convective_matrices_batch(model, U, tensors_cache(N), 1.6))
            np.testing.assert_allclose(speeds, np.max(np.abs(ev), axis=1), atol=1e-10)


def test_friction_flat_profile(tensors_cache):
    src = friction_source(PrimitiveState(1.0, 0.8, [0.0, 0.0]), 0.1, 0.2, tensors_cache(2))
    assert src[0] == 0.0
    assert src[1] == pytest.approx(-(0.1 / 0.2) * 0.8, abs=1e-15)


def test_friction_zero_bottom_velocity(tensors_cache):
    # u(0) = u_m + sum alpha_j = 0 kills every slip term
    st = PrimitiveState(1.0, 0.25, [-0.25])
    src = friction_source(st, 0.1, 0.1, tensors_cache(1))
    assert src[1] == pytest.approx(0.0, abs=1e-16)
    # remaining moment source is the profile-curvature part -(nu/h) D_11 a_1
    assert src[2] == pytest.approx(-0.1 * 12.0 * (-0.25), abs=1e-13)


def test_friction_hand_value(tensors_cache):
    src = friction_source(PrimitiveState(1.0, 0.25, [-0.25]), 0.1, 0.1, tensors_cache(1))
    assert src[2] == pytest.approx(0.3, abs=1e-13)


def test_constant_field_is_stationary(tensors_cache):
    for model in ModelKind:
        U = np.tile([1.2, 0.36, -0.12, 0.06], (20, 1))
        f = Field1D(0.0, 1.0, U)
        cfg = SolverConfig(model=model, N=2, t_end=1.0)
        f2, _ = step(f, cfg, 0.01, tensors_cache(2))
        np.testing.assert_array_equal(f2.U, f.U)


def test_periodic_mass_conservation(tensors_cache):
    for model in ModelKind:
        f = smooth_periodic_field(2, n_cells=50)
        cfg = SolverConfig(model=model, N=2, t_end=1.0)
        mass0 = np.sum(f.U[:, 0]) * f.dx
        dt = 2e-4
        for _ in range(1000):
            f, _ = step(f, cfg, dt, tensors_cache(2))
        mass1 = np.sum(f.U[:, 0]) * f.dx
        assert abs(mass1 - mass0) / mass0 <= 1e-13


def test_update_telescopes_to_interface_sums(tensors_cache):
    # on a periodic ring the one-step total update of every component equals
    # -(dt/dx) sum_k A(Ubar_k) dU_k: the s-weighted diffusive parts cancel
    # interface by interface, for the conservative and nonconservative rows
    # alike; the mass component of that sum telescopes to exactly zero
    from swmoments.solver import _fluctuations, _padded

    for model in (ModelKind.SWME, ModelKind.PMHSWME):
        f = smooth_periodic_field(3, n_cells=40)
        cfg = SolverConfig(model=model, N=3, t_end=1.0)
        dt = 1e-4
        f2, _ = step(f, cfg, dt, tensors_cache(3))
        total_update = np.sum(f2.U - f.U, axis=0)
        Up = _padded(f)
        Dm, Dp, _ = _fluctuations(Up[:-1], Up[1:], model, tensors_cache(3), cfg.g)
        consistency = Dm[1:] + Dp[1:]  # one interface per cell on the ring
        want = -(dt / f.dx) * np.sum(consistency, axis=0)
        np.testing.assert_allclose(total_update, want, atol=1e-14)
        assert abs(np.sum(consistency[:, 0])) <= 1e-13  # mass row telescopes


def test_dam_break_far_field_untouched(tensors_cache):
    f = dam_break_field(2)
    cfg = SolverConfig(model=ModelKind.PMHSWME, N=2, t_end=1.0)
    f2, _ = step(f, cfg, 1e-3, tensors_cache(2))
    np.testing.assert_array_equal(f2.U[0], f.U[0])
    np.testing.assert_array_equal(f2.U[-1], f.U[-1])
    # something moved near the dam
    mid = f.n_cells // 2
    assert np.max(np.abs(f2.U[mid - 1 : mid + 1] - f.U[mid - 1 : mid + 1])) > 0


def test_models_agree_at_first_order(tensors_cache):
    finals = []
    for model in ModelKind:
        f = dam_break_field(1, n_cells=60)
        cfg = SolverConfig(model=model, N=1, t_end=0.05,
                           friction=Friction(nu=0.1, lambda_slip=0.1))
        finals.append(run(f, cfg, tensors_cache(1)).field.U)
    for U in finals[1:]:
        assert np.max(np.abs(U - finals[0])) <= 1e-13


def test_run_reaches_t_end_exactly(tensors_cache):
    f = smooth_periodic_field(1, n_cells=30)
    cfg = SolverConfig(model=ModelKind.SWLME, N=1, t_end=0.0371)
    res = run(f, cfg, tensors_cache(1))
    assert res.times[-1] == pytest.approx(0.0371, abs=1e-14)
    assert res.n_steps == res.times.size == res.mass.size == res.max_imag.size


def test_fixed_dt_mode(tensors_cache):
    f = smooth_periodic_field(1, n_cells=30)
    cfg = SolverConfig(model=ModelKind.SWLME, N=1, t_end=0.01, dt_mode="fixed", dt=0.002)
    res = run(f, cfg, tensors_cache(1))
    assert res.n_steps == 5


def test_cfl_monotonicity_smoke(tensors_cache):
    # halving dt never increases the one-step increment
    f = smooth_periodic_field(2, n_cells=40)
    cfg = SolverConfig(model=ModelKind.PMHSWME, N=2, t_end=1.0)
    inc = []
    for dt in (4e-4, 2e-4, 1e-4):
        f2, _ = step(f, cfg, dt, tensors_cache(2))
        inc.append(np.max(np.abs(f2.U - f.U)))
    assert inc[0] >= inc[1] >= inc[2]


def test_dry_cell_aborts_with_location(tensors_cache):
    U = np.tile([1.0, 0.0, 0.0], (10, 1))
    U[4, 0] = 1.00000001e-8  # barely wet; strong outflow will drain it
    U[4, 1] = 5.0
    f = Field1D(0.0, 1.0, U)
    cfg = SolverConfig(model=ModelKind.SWLME, N=1, t_end=1.0)
    with pytest.raises((SolverError, DryStateError)):
        for _ in range(50):
            f, _ = step(f, cfg, 1e-3, tensors_cache(1))


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(model=ModelKind.SWME, N=1, t_end=-1.0)
    with pytest.raises(ValueError):
        SolverConfig(model=ModelKind.SWME, N=1, t_end=1.0, dt_mode="fixed")
    with pytest.raises(ValueError):
        SolverConfig(model=ModelKind.SWME, N=1, t_end=1.0, cfl_number=1.5)
    with pytest.raises(ValueError):
        Friction(nu=-0.1, lambda_slip=0.1)
