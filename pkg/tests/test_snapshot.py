import numpy as np
import pytest

from kgwnf.dynamics import FieldState, Grid, SnapshotError, gaussian_state, read_snapshot, write_snapshot


@pytest.fixture
def complex_state():
    g = Grid(2, 8, 4.0)
    rng = np.random.default_rng(3)
    psi = rng.normal(size=g.shape) + 1j * rng.normal(size=g.shape)
    return g, FieldState.complex(psi, rng.normal(size=g.shape), rng.normal(size=g.shape), 0.25, "T", 0.01)


def test_complex_round_trip_is_bit_exact(tmp_path, complex_state):
    g, s = complex_state
    path = write_snapshot(tmp_path / "s.nfld", s, g)
    back, meta = read_snapshot(path)
    assert np.array_equal(back.psi, s.psi) and np.array_equal(back.phi, s.phi)
    assert np.array_equal(back.p_phi, s.p_phi)
    assert (back.time, back.frame, back.epsilon) == (0.25, "T", 0.01)
    assert meta["shape"] == "8 8" and meta["box_length"] == "4.0"
    assert path.read_bytes().startswith(b"NFLD1\nversion: 1\n")


def test_real_round_trip_without_epsilon(tmp_path):
    g = Grid(1, 16, 8.0)
    s = gaussian_state(g)
    back, meta = read_snapshot(write_snapshot(tmp_path / "r.nfld", s))
    assert back.form == "real" and back.epsilon is None
    assert np.array_equal(back.u, s.u)
    assert "box_length" not in meta


def _corrupt(path, transform):
    data = path.read_bytes()
    path.write_bytes(transform(data))


@pytest.mark.parametrize("transform, message", [
    (lambda d: d.replace(b"NFLD1", b"NFLD2", 1), "magic"),
    (lambda d: d.replace(b"version: 1", b"version: 9"), "version"),
    (lambda d: d.replace(b"frame: T\n", b""), "frame"),
    (lambda d: d.replace(b"END\n", b"STOP\n"), "END|header line"),
    (lambda d: d[:-8], "truncated"),
    (lambda d: d + b"\0", "trailing"),
    (lambda d: d.replace(b"dim: 2", b"dim: 3"), "dim"),
    (lambda d: d.replace(b"fields: psi_re psi_im phi p_phi", b"fields: a b c d"), "unrecognised"),
])
def test_corrupt_files_are_rejected(tmp_path, complex_state, transform, message):
    g, s = complex_state
    path = write_snapshot(tmp_path / "s.nfld", s, g)
    _corrupt(path, transform)
    with pytest.raises(SnapshotError, match=message):
        read_snapshot(path)
