import numpy as np
import pytest

from tools.gram_schmidt import gram_schmidt, orthonormality_residual
from tools.oracle import crandn, random_isometry


def test_orthonormal_prefix_passes_through_unchanged():
    q = random_isometry(5, 3, seed=7)
    columns = [q[:, c] for c in range(3)]
    identity = np.eye(5)
    outputs = gram_schmidt(columns + [identity[:, j] for j in range(5)])
    for original, kept in zip(columns, outputs):
        assert np.array_equal(original, kept)
    nonzero = [v for v in outputs if np.any(v)]
    assert len(nonzero) == 5
    assert orthonormality_residual(nonzero) < 1e-12


def test_dependent_inputs_give_zero_vectors():
    outputs = gram_schmidt([np.array([1.0, 0.0]), np.array([2.0, 0.0]), np.array([1.0, 1.0])])
    assert np.array_equal(outputs[1], np.zeros(2))
    assert np.allclose(outputs[2], [0.0, 1.0])


def test_zero_input_and_empty_input():
    assert gram_schmidt([]) == []
    (out,) = gram_schmidt([np.zeros(3)])
    assert not np.any(out)


def test_unequal_dimensions_rejected():
    with pytest.raises(ValueError):
        gram_schmidt([np.ones(2), np.ones(3)])


def test_nearly_dependent_complex_vectors_stay_orthonormal():
    rng = np.random.default_rng(3)
    base = crandn(6, rng)
    vectors = [base, base + 1e-7 * crandn(6, rng), crandn(6, rng)]
    nonzero = [v for v in gram_schmidt(vectors) if np.any(v)]
    assert len(nonzero) == 3
    assert orthonormality_residual(nonzero) < 1e-12
