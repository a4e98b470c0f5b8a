import numpy as np
import pytest

from kgwnf.dynamics import FieldState, Grid, SolverConfig, SpectralToolbox, read_snapshot, step_sw
from kgwnf.stationary import (ExistenceVerdict, eigen_sequence, existence_gate,
                              imaginary_time_ground, imaginary_time_radial, mu_from_omega,
                              omega_from_mu, profile_on_grid, radial_average, radial_norm,
                              radial_potential, radial_residual, read_profile_csv,
                              rescale_profile, shoot_radial, sp_operator, sp_potential,
                              write_profile_csv, write_profile_snapshot)


@pytest.fixture(scope="module")
def ground():
    return shoot_radial(0)


def _sign_changes(chi):
    s = np.sign(chi[np.abs(chi) > 1e-8 * np.max(np.abs(chi))])
    return int(np.sum(s[1:] != s[:-1]))


# -- radial helpers ----------------------------------------------------------------

def test_radial_potential_of_uniform_ball():
    # chi^2 = 1 inside R: phi = (r^2 - 3 R^2)/6 inside, -R^3/(3 r) outside
    r = np.linspace(0, 4, 4001)
    R = 2.0
    chi = np.where(r <= R, 1.0, 0.0)
    phi = radial_potential(r, chi)
    inside, outside = r < 1.9, r > 2.1
    assert np.allclose(phi[inside], (r[inside] ** 2 - 3 * R * R) / 6, atol=2e-3)
    assert np.allclose(phi[outside], -R ** 3 / (3 * r[outside]), atol=2e-3)
    assert radial_norm(r, chi) == pytest.approx(4 * np.pi * R ** 3 / 3, rel=1e-3)


def test_residual_of_harmonic_oscillator_ground_state():
    # chi = exp(-r^2/2) in the potential r^2/2 has omega = 3/2
    from kgwnf.stationary import RadialProfile

    r = np.linspace(0, 10, 2001)
    prof = RadialProfile(r, np.exp(-r * r / 2), r * r / 2)
    assert radial_residual(prof, 1.5) < 1e-8
    assert radial_residual(prof, 1.4) > 1e-2


def test_mu_omega_dictionary():
    assert mu_from_omega(omega_from_mu(0.3)) == pytest.approx(0.3)
    assert omega_from_mu(2.0) == -2.0
    with pytest.raises(ValueError):
        mu_from_omega(0.1)
    with pytest.raises(ValueError):
        omega_from_mu(0.0)


# -- shooting -----------------------------------------------------------------------

def test_ground_state(ground):
    assert ground.nodes == 0 and ground.method == "shooting"
    assert ground.profile.norm() == pytest.approx(1.0, rel=1e-8)
    assert ground.residual < 1e-8
    assert ground.mu == pytest.approx(mu_from_omega(ground.omega))
    assert _sign_changes(ground.profile.chi) == 0
    # the potential stored with the profile is the Newtonian potential of chi^2
    ref = radial_potential(ground.profile.r, ground.profile.chi)
    assert np.max(np.abs(ground.profile.phi - ref)) < 1e-6 * np.max(np.abs(ref))


def test_ground_energy_matches_known_value(ground):
    # lap phi = chi^2 puts a 4 pi into the coupling; undoing it gives the classic
    # Newtonian boson-star ground-state energy of about -0.163
    assert ground.omega * (4 * np.pi) ** 2 == pytest.approx(-0.163, abs=1e-3)
    # the solve works with chi(0) = 1 and maps back with the scaling symmetry
    mass_unit = ground.extra["mass_unit_center"]
    assert ground.extra["omega_unit_center"] == pytest.approx(ground.omega * mass_unit ** 2, rel=1e-10)


@pytest.mark.parametrize("nodes", [1, 2])
def test_excited_states_have_the_requested_nodes(nodes):
    res = shoot_radial(nodes)
    assert _sign_changes(res.profile.chi) == nodes
    assert res.residual < 1e-8


def test_eigenvalue_ordering():
    mus = eigen_sequence(4)
    assert all(a > b > 0 for a, b in zip(mus, mus[1:]))


@pytest.mark.parametrize("factor", [0.5, 2.0])
def test_scaling_symmetry(ground, factor):
    prof, omega = rescale_profile(ground.profile, ground.omega, factor)
    assert prof.norm() == pytest.approx(factor, rel=1e-8)
    assert omega == pytest.approx(factor ** 2 * ground.omega)
    assert radial_residual(prof, omega) == pytest.approx(ground.residual, rel=1e-6, abs=1e-12)


def test_imaginary_time_agrees_with_shooting(ground):
    relaxed = imaginary_time_radial()
    assert abs(relaxed.omega - ground.omega) <= 1e-6 * abs(ground.omega)
    chi = np.interp(ground.profile.r, relaxed.profile.r, relaxed.profile.chi, right=0.0)
    assert np.max(np.abs(chi - ground.profile.chi)) < 1e-4 * ground.profile.chi[0]


# -- existence gate ---------------------------------------------------------------------

def test_existence_gate():
    seq = eigen_sequence(4)
    hit = existence_gate(seq[2], seq)
    assert hit == ExistenceVerdict(True, seq[0], 2, "eigenvalue")
    above = existence_gate(1.5 * seq[0], seq)
    assert above.exists is False and above.status == "above-ground-state"
    between = existence_gate(0.5 * (seq[0] + seq[1]), seq)
    assert between.exists is None and between.index is None
    with pytest.raises(ValueError):
        existence_gate(-1.0, seq)


# -- Cartesian ground state ---------------------------------------------------------------

def test_cartesian_ground_state_1d():
    g = Grid(1, 256, 32.0)
    res = imaginary_time_ground(g, 1e-11)
    tb = SpectralToolbox(g)
    psi, phi = res.extra["psi"], res.extra["phi"]
    assert g.norm2(psi) == pytest.approx(1.0)
    assert np.allclose(phi, sp_potential(tb, psi))
    h_psi = sp_operator(tb, psi, phi)
    assert np.max(np.abs(h_psi - res.omega * psi)) < 1e-8
    assert res.omega < 0


def test_cartesian_ground_state_is_radial_in_3d():
    g = Grid(3, 16, 16.0)
    res = imaginary_time_ground(g, 1e-9, norm=25.9)
    r, f = radial_average(g, np.abs(res.extra["psi"]), bins=8)
    assert np.all(np.diff(f[np.isfinite(f)]) < 0)


def test_stationary_under_schroedinger_wave():
    # prepared standing wave: SW keeps |Psi| close to its start, drifting only at order eps
    g = Grid(1, 256, 32.0)
    gs = imaginary_time_ground(g, 1e-12)
    psi0 = gs.extra["psi"].astype(complex)
    eps = 0.01
    s = FieldState.complex(psi0, gs.extra["phi"], np.zeros(g.shape), 0.0, "T", eps)
    out = step_sw(s, SolverConfig("SW", eps, 1e-3, scheme="yoshida4", grid=g), 1000)
    assert np.max(np.abs(np.abs(out.psi) - np.abs(psi0))) < 1e-5


# -- export -----------------------------------------------------------------------------

def test_profile_csv_round_trip(ground, tmp_path):
    path = write_profile_csv(tmp_path / "p.csv", ground)
    assert path.read_text().startswith("# omega=")
    back = read_profile_csv(path)
    assert np.array_equal(back.chi, ground.profile.chi)
    assert np.array_equal(back.r, ground.profile.r)


def test_profile_snapshot(ground, tmp_path):
    g = Grid(3, 16, 400.0)
    chi, phi = profile_on_grid(ground, g)
    assert chi.shape == g.shape
    assert g.norm2(chi) == pytest.approx(1.0, rel=0.05)
    path = write_profile_snapshot(tmp_path / "p.nfld", ground, g, scale=1.0)
    state, meta = read_snapshot(path)
    assert meta["box_length"] == "400.0"
    assert np.allclose(state.psi.real, chi)
    with pytest.raises(ValueError):
        profile_on_grid(ground, Grid(1, 16, 10.0))
