import numpy as np
import pytest

from rotorvqe.linalg import canonical_sign, jacobi_eigh


@pytest.mark.parametrize("size", [2, 5, 16, 33, 65])
def test_matches_numpy_eigh(size):
    rng = np.random.default_rng(size)
    a = rng.normal(size=(size, size))
    a = a + a.T
    w, v = jacobi_eigh(a)
    order = np.argsort(w)
    w = w[order]
    v = v[:, order]
    expected = np.linalg.eigvalsh(a)
    scale = max(1.0, np.abs(expected).max())
    assert np.allclose(w, expected, atol=1e-10 * scale)
    assert np.allclose(v.T @ v, np.eye(size), atol=1e-10)
    assert np.allclose(a @ v, v * w, atol=1e-9 * scale)


def test_diagonal_input_is_fixed_point():
    d = np.diag([3.0, -1.0, 2.0])
    w, v = jacobi_eigh(d)
    assert np.array_equal(np.sort(w), np.array([-1.0, 2.0, 3.0]))
    assert np.allclose(np.abs(v), np.eye(3))


def test_large_scale_entries_converge():
    # entries of order 5e2 appear for the widest spectral matrices
    rng = np.random.default_rng(7)
    a = rng.normal(scale=500.0, size=(40, 40))
    a = a + a.T
    w, _ = jacobi_eigh(a)
    expected = np.linalg.eigvalsh(a)
    assert np.allclose(np.sort(w), expected, atol=1e-8 * np.abs(expected).max())


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        jacobi_eigh(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        jacobi_eigh(np.array([[0.0, 1.0], [2.0, 0.0]]))


def test_canonical_sign():
    v = np.array([0.1, -0.9, 0.3])
    assert canonical_sign(v)[1] == pytest.approx(0.9)
    assert np.allclose(canonical_sign(-v), canonical_sign(v) * -1.0 * -1.0)
    w = np.array([0.5, -0.5])
    assert canonical_sign(w)[0] == pytest.approx(0.5)
