import numpy as np
import pytest

from kgwnf.algebra import build
from kgwnf.dynamics import (ConfigurationError, FieldState, FrameError, Grid, SolverConfig,
                            SolverFailure, SpectralToolbox, compare_trajectories, evaluate,
                            field_values, g1_flow_map, g1_rhs, gaussian_state, grad_sq,
                            hamiltonian_vector_field, integrate, make_stepper, mass, step_kgw,
                            step_kgw_complex, step_nf2, step_sp, step_sw, sup_error,
                            well_prepared_state, write_diagnostics_csv)
from kgwnf.dynamics.systems import SCHEMES
from kgwnf.normalform import reference

GRID = Grid(1, 128, 32.0)


def _plane_wave(grid, m, amplitude=0.3):
    k = 2 * np.pi * m / grid.box_length
    return k, amplitude * np.exp(1j * k * grid.coords[0])


def _smooth_state(grid, eps=0.05, velocity=0.4):
    return well_prepared_state(gaussian_state(grid, sigma=1.5, epsilon=eps, velocity=velocity).massive("T"),
                               grid, eps)


# -- grid and spectral operators -------------------------------------------------

@pytest.mark.parametrize("kwargs", [{"dim": 4}, {"n": 100}, {"n": 2}, {"box_length": 0.0}])
def test_grid_validation(kwargs):
    with pytest.raises(ValueError):
        Grid(**kwargs)


def test_grid_geometry():
    g = Grid(2, 16, 8.0)
    assert g.shape == (16, 16)
    assert g.dx == 0.5 and g.cell_volume == 0.25
    assert g.axes[0][0] == -4.0
    assert g.integrate(np.ones(g.shape)) == pytest.approx(64.0)


def test_spectral_derivatives_are_exact_on_resolved_modes():
    tb = SpectralToolbox(GRID)
    x = GRID.coords[0]
    k = 2 * np.pi * 3 / GRID.box_length
    f = np.sin(k * x)
    assert np.allclose(tb.derivative(f), k * np.cos(k * x), atol=1e-12)
    assert np.allclose(tb.laplacian(f), -k * k * f, atol=1e-12)
    assert np.allclose(tb.inverse_laplacian_zero_mean(f + 2.0), -f / k ** 2, atol=1e-12)
    assert np.isrealobj(tb.gradient(f)[0])
    assert grad_sq(f, tb) == pytest.approx(k * k * GRID.box_length / 2, rel=1e-12)


def test_dealias_mask_keeps_two_thirds():
    tb = SpectralToolbox(GRID)
    x = GRID.coords[0]
    low, high = np.cos(2 * np.pi * 10 * x / 32), np.cos(2 * np.pi * 60 * x / 32)
    assert np.allclose(tb.dealias(low + high), low, atol=1e-12)
    assert np.allclose(SpectralToolbox(GRID, dealias=False).dealias(high), high)


# -- states and frames -------------------------------------------------------------

def test_frame_changes_are_inverse():
    s = gaussian_state(GRID, epsilon=0.02, velocity=0.5)
    s = FieldState.real(s.u, s.p_u, s.phi + 0.1, s.p_phi, time=0.37, epsilon=0.02)
    back = s.to_frame("T").to_frame("tau").to_real()
    for a, b in zip(s.arrays(), back.arrays()):
        assert np.allclose(a, b, atol=1e-14)
    T = s.to_frame("T")
    assert T.time == pytest.approx(0.37 * 0.02)
    assert np.allclose(T.psi, np.exp(1j * 0.37) * s.to_complex().psi)
    assert mass(s, GRID) == pytest.approx(mass(T, GRID))


def test_gaussian_state_normalization():
    s = gaussian_state(GRID, norm=2.0)
    assert GRID.integrate(s.u ** 2) == pytest.approx(2.0)
    assert mass(s, GRID) == pytest.approx(1.0)


def test_frame_errors():
    psi = np.ones(GRID.shape, complex)
    z = np.zeros(GRID.shape)
    with pytest.raises(FrameError):
        FieldState.complex(psi, z, z, frame="T").to_frame("tau")
    with pytest.raises(FrameError):
        FieldState("real", z, z, u=z, p_u=z, frame="T")
    with pytest.raises(ValueError):
        FieldState.complex(psi, z[:10], z)
    with pytest.raises(ValueError):
        FieldState("imaginary", z, z)


# -- solver configuration ------------------------------------------------------------

def test_solver_config_validation():
    assert SolverConfig("KGW", 0.1, 0.01).scheme == SCHEMES["KGW"][0]
    assert SolverConfig("SP", 0.0, 0.01).frame == "T"
    assert SolverConfig("KGW", 0.1, 0.01, t_end=1.0).n_steps == 100
    for bad in (dict(system="XYZ"), dict(epsilon=0.0), dict(dt=-1.0), dict(scheme="euler")):
        args = dict(system="SW", epsilon=0.1, dt=0.01)
        args.update(bad)
        with pytest.raises(ValueError):
            SolverConfig(**args)


def test_stepper_rejects_wrong_system_config():
    s = _smooth_state(GRID)
    with pytest.raises(ValueError):
        step_sw(s, SolverConfig("SP", 0.0, 0.01, grid=GRID))


def test_unstable_run_raises_solver_failure():
    s = _smooth_state(GRID, eps=0.01)
    with pytest.raises(SolverFailure) as info, np.errstate(all="ignore"):
        step_nf2(s, SolverConfig("NF2", 0.01, 0.5, grid=GRID), 200)
    assert info.value.step is not None


# -- exact solutions -----------------------------------------------------------------

def test_kgw_free_wave_is_exact():
    eps, m = 0.05, 4
    k = 2 * np.pi * m / GRID.box_length
    x = GRID.coords[0]
    z = np.zeros(GRID.shape)
    s = FieldState.real(z, z, np.cos(k * x), z, epsilon=eps)
    out = step_kgw(s, SolverConfig("KGW", eps, 0.7, grid=GRID), 10)
    w = np.sqrt(eps) * k
    assert np.allclose(out.phi, np.cos(w * 7.0) * np.cos(k * x), atol=1e-12)
    assert np.allclose(out.p_phi, -w * np.sin(w * 7.0) * np.cos(k * x), atol=1e-12)


@pytest.mark.parametrize("system", ["SW", "SP"])
def test_plane_wave_is_exact(system):
    # constant density: the mean-free source vanishes and only the kinetic phase remains
    eps = 0.03
    k, psi = _plane_wave(GRID, 5)
    z = np.zeros(GRID.shape)
    s = FieldState.complex(psi, z, z, 0.0, "T", eps)
    step = step_sw if system == "SW" else step_sp
    out = step(s, SolverConfig(system, eps, 0.25, grid=GRID), 8)
    assert np.allclose(out.psi, np.exp(-0.5j * k * k * 2.0) * psi, atol=1e-13)


def test_nf2_plane_wave_dispersion():
    eps, A = 0.03, 0.3
    k, psi = _plane_wave(GRID, 5, A)
    z = np.zeros(GRID.shape)
    s = FieldState.complex(psi, z, z, 0.0, "T", eps)
    out = step_nf2(s, SolverConfig("NF2", eps, 1e-3, grid=GRID), 500)
    freq = k * k / 2 - eps * k ** 4 / 8 + eps * A * A / 8
    assert np.allclose(out.psi, np.exp(-1j * freq * 0.5) * psi, atol=1e-10)


# -- symmetries ----------------------------------------------------------------------

@pytest.mark.parametrize("system", ["SW", "SP", "NF2"])
def test_gauge_covariance(system):
    eps = 0.05
    s = _smooth_state(GRID, eps)
    turned = FieldState.complex(np.exp(0.8j) * s.psi, s.phi, s.p_phi, 0.0, "T", eps)
    cfg = SolverConfig(system, eps, 1e-3, grid=GRID)
    a = make_stepper(cfg).advance(s, 50)
    b = make_stepper(cfg).advance(turned, 50)
    assert np.allclose(np.exp(0.8j) * a.psi, b.psi, atol=1e-12)
    assert np.allclose(a.phi, b.phi, atol=1e-12)


def test_sp_time_reversal():
    cfg = SolverConfig("SP", 0.0, 0.01, scheme="strang", grid=GRID)
    s = _smooth_state(GRID)
    fwd = step_sp(s, cfg, 100)
    back = step_sp(FieldState.complex(np.conj(fwd.psi), fwd.phi, fwd.p_phi, 0.0, "T", None), cfg, 100)
    assert np.allclose(np.conj(back.psi), s.psi, atol=1e-12)


@pytest.mark.parametrize("scheme, order", [("strang", 2), ("yoshida4", 4)])
def test_splitting_convergence_order(scheme, order):
    s = _smooth_state(GRID)
    ref = step_sp(s, SolverConfig("SP", 0.0, 1e-3, scheme="yoshida4", grid=GRID), 1000)
    errs = []
    for dt in (0.05, 0.025):
        out = step_sp(s, SolverConfig("SP", 0.0, dt, scheme=scheme, grid=GRID), int(round(1 / dt)))
        errs.append(np.sqrt(GRID.norm2(out.psi - ref.psi)))
    assert np.log2(errs[0] / errs[1]) == pytest.approx(order, abs=0.3)


def test_steppers_accept_either_frame():
    eps = 0.05
    s = gaussian_state(GRID, epsilon=eps)
    cfg = SolverConfig("KGW", eps, 0.02, grid=GRID)
    a = step_kgw(s, cfg, 5)
    b = step_kgw(s.to_frame("T"), cfg, 5)
    assert np.allclose(a.u, b.u, atol=1e-13)
    out = step_kgw_complex(s, SolverConfig("KGW_complex", eps, 1e-4, grid=GRID), 1)
    assert out.frame == "T"


# -- symbolic evaluator as a second route ------------------------------------------------

def test_evaluate_matches_direct_quadratures():
    s = _smooth_state(GRID)
    tb = SpectralToolbox(GRID, dealias=False)
    vals = field_values(s.psi, s.phi, s.p_phi)
    assert evaluate(build("int |psi|^2"), vals, GRID, tb) == pytest.approx(GRID.norm2(s.psi))
    assert evaluate(build("int |grad psi|^2"), vals, GRID, tb).real == pytest.approx(grad_sq(s.psi, tb))
    direct = GRID.integrate(s.phi * np.abs(s.psi) ** 2)
    assert evaluate(build("int phi |psi|^2"), vals, GRID, tb) == pytest.approx(direct)


def test_g1_vector_field_matches_symbolic_generator():
    g = Grid(1, 64, 16.0)
    tb = SpectralToolbox(g, dealias=False)
    s = _smooth_state(g).to_frame("tau")
    phi, p = s.phi - s.phi.mean(), s.p_phi - s.p_phi.mean()
    direct = g1_rhs(s.psi, phi, p, tb)
    symbolic = hamiltonian_vector_field(reference("G1"), s.psi, phi, p, g, tb)
    for a, b in zip(direct, symbolic):
        b = b - b.mean() if np.isrealobj(b) else b
        assert np.max(np.abs(a - b)) <= 1e-12 * max(1.0, np.max(np.abs(a)))


def test_nf2_vector_field_matches_symbolic_normal_form():
    g = Grid(1, 64, 16.0)
    eps = 0.05
    tb = SpectralToolbox(g, dealias=False)
    s = _smooth_state(g, eps)
    phi, p = s.phi - s.phi.mean(), s.p_phi - s.p_phi.mean()
    stepper = make_stepper(SolverConfig("NF2", eps, 1e-3, grid=g, dealias=False))
    spec = [np.fft.fftn(s.psi), np.fft.fftn(phi), np.fft.fftn(p)]
    direct = [np.fft.ifftn(a) for a in stepper.rhs(0.0, spec)]
    # exact coefficients stay exact; the float eps only enters the numerical combination
    first = hamiltonian_vector_field(reference("Z1"), s.psi, phi, p, g, tb)
    second = hamiltonian_vector_field(reference("Z2"), s.psi, phi, p, g, tb)
    dpsi, dphi, dp = (a + eps * b for a, b in zip(first, second))
    dphi = p / eps + (dphi - dphi.mean())
    dp = dp - dp.mean()
    for a, b in zip(direct, (dpsi, dphi, dp)):
        assert np.max(np.abs(a - b)) <= 1e-10 * np.max(np.abs(b))


# -- near-identity transform ----------------------------------------------------------------

def test_g1_flow_round_trip():
    eps = 0.02
    s = _smooth_state(GRID, eps)
    there = g1_flow_map(s, eps, 1, GRID)
    back = g1_flow_map(there, eps, -1, GRID)
    assert np.sqrt(GRID.norm2(back.psi - s.psi) / GRID.norm2(s.psi)) <= 1e-10
    assert np.max(np.abs(back.phi - s.phi)) <= 1e-10
    assert np.sqrt(GRID.norm2(there.psi - s.psi) / GRID.norm2(s.psi)) > 1e-4
    assert there.frame == s.frame and there.form == s.form
    with pytest.raises(ValueError):
        g1_flow_map(s, eps, 2, GRID)
    with pytest.raises(ValueError):
        g1_flow_map(s, eps, 1, None)


# -- prepared data ------------------------------------------------------------------------

def test_well_prepared_state_solves_poisson():
    tb = SpectralToolbox(GRID)
    s = _smooth_state(GRID, 0.05)
    rho = np.abs(s.psi) ** 2
    assert np.max(np.abs(tb.laplacian(s.phi) - tb.dealias(rho - rho.mean()))) < 1e-10
    # continuity: p_phi / eps = lap^-1 rho_T; a static real profile has no current
    still = well_prepared_state(np.exp(-GRID.coords[0] ** 2), GRID, 0.05)
    assert np.max(np.abs(still.p_phi)) < 1e-14


def test_second_order_preparation_reduces_to_first_at_zero_epsilon():
    psi = _smooth_state(GRID).psi
    a = well_prepared_state(psi, GRID, None, order=1)
    b = well_prepared_state(psi, GRID, None, order=2)
    assert np.allclose(a.phi, b.phi, atol=1e-12)
    with pytest.raises(ValueError):
        well_prepared_state(psi, GRID, 0.1, order=3)


# -- integration driver and comparisons -----------------------------------------------------

def test_integrate_samples_and_diagnostics(tmp_path):
    eps = 0.05
    cfg = SolverConfig("SW", eps, 0.01, t_end=0.5, grid=GRID, diagnostics_period=10)
    traj = integrate(_smooth_state(GRID, eps), cfg, sample_every=25)
    assert traj.times == pytest.approx([0.0, 0.25, 0.5])
    assert [d.step for d in traj.diagnostics] == [0, 10, 20, 25, 30, 40, 50]
    masses = [d.mass for d in traj.diagnostics]
    assert max(masses) - min(masses) < 1e-13
    path = write_diagnostics_csv(tmp_path / "d.csv", traj)
    lines = path.read_text().splitlines()
    assert lines[0] == "step,time,mass,hamiltonian,error_vs_ref"
    assert len(lines) == 8


def test_compare_trajectories():
    eps = 0.05
    s = _smooth_state(GRID, eps)
    cfg = SolverConfig("SW", eps, 0.01, t_end=0.2, grid=GRID)
    a = integrate(s, cfg, sample_every=5)
    b = integrate(s, cfg, sample_every=5)
    for norm in ("L2_state", "L2_full", "mass_gap"):
        assert np.all(compare_trajectories(a, b, norm) == 0.0)
    obs = compare_trajectories(a, b, "observable", observable=lambda st, g: mass(st, g))
    assert np.all(obs == 0.0)
    sp = integrate(s, SolverConfig("SP", 0.0, 0.01, t_end=0.2, grid=GRID), sample_every=5)
    assert 0 < sup_error(a, sp) < 0.1
    with pytest.raises(ConfigurationError):
        compare_trajectories(a, integrate(s, cfg, sample_every=10))
    with pytest.raises(ConfigurationError):
        compare_trajectories(a, b, "max")
    with pytest.raises(ConfigurationError):
        compare_trajectories(a, b, "observable")
    other = SolverConfig("SW", eps, 0.01, t_end=0.2, grid=Grid(1, 64, 32.0))
    with pytest.raises(ConfigurationError):
        compare_trajectories(a, integrate(gaussian_state(other.grid, epsilon=eps), other, sample_every=5))


def test_kgw_and_sw_trajectories_compare_across_frames():
    eps = 0.01
    s = _smooth_state(GRID, eps)
    kgw = integrate(s, SolverConfig("KGW", eps, 0.5, t_end=20.0, scheme="yoshida4", grid=GRID),
                    sample_every=10)
    sw = integrate(s, SolverConfig("SW", eps, 0.01, t_end=0.2, scheme="yoshida4", grid=GRID),
                   sample_every=5)
    err = compare_trajectories(kgw, sw)
    assert len(err) == 5 and err[0] < 1e-14
    assert np.max(err) < 5 * eps
