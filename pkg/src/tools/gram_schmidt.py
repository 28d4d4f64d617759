from __future__ import annotations

from typing import List, Sequence

import numpy as np


def _extends_orthonormal(v: np.ndarray, basis: Sequence[np.ndarray], ortho_tol: float) -> bool:
    if abs(np.linalg.norm(v) - 1.0) > ortho_tol:
        return False
    return all(abs(np.vdot(q, v)) <= ortho_tol for q in basis)


def gram_schmidt(vectors: Sequence[np.ndarray], tol: float = 1e-10, ortho_tol: float = 1e-12) -> List[np.ndarray]:
    """Modified Gram-Schmidt with one re-orthogonalization pass.

    Output i is the normalized residual of input i against the nonzero outputs
    before it, or the zero vector when that residual is at most `tol` times the
    input norm. The longest already-orthonormal prefix of the input is passed
    through untouched.
    """

    inputs = [np.asarray(v, dtype=np.complex128).reshape(-1) for v in vectors]
    if not inputs:
        return []
    dim = inputs[0].shape[0]
    if any(v.shape[0] != dim for v in inputs):
        raise ValueError("gram_schmidt needs vectors of equal dimension")

    outputs: List[np.ndarray] = []
    basis: List[np.ndarray] = []
    in_prefix = True
    for v in inputs:
        if in_prefix and _extends_orthonormal(v, basis, ortho_tol):
            kept = v.copy()
            outputs.append(kept)
            basis.append(kept)
            continue
        in_prefix = False

        w = v.copy()
        for _ in range(2):
            for q in basis:
                w -= np.vdot(q, w) * q
        scale = np.linalg.norm(v)
        residual = np.linalg.norm(w)
        if scale == 0.0 or residual <= tol * scale:
            outputs.append(np.zeros(dim, dtype=np.complex128))
            continue
        q = w / residual
        outputs.append(q)
        basis.append(q)
    return outputs


def orthonormality_residual(vectors: Sequence[np.ndarray]) -> float:
    """max |<u_i, u_j> - δ_ij| over the given vectors."""

    if not vectors:
        return 0.0
    stacked = np.column_stack(vectors)
    gram = stacked.conj().T @ stacked
    return float(np.max(np.abs(gram - np.eye(gram.shape[0]))))
