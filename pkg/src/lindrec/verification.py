"""Independent verification of reconstructed generators.

The generator is vectorized into a dense d^2 x d^2 matrix acting on
column-stacked states, from which steady states, residuals, and the
spectral gap are obtained without going through the correlation matrix.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .engine import LindbladAnsatz, LindbladianParams
from .errors import DimMismatchError, DimTooLargeError, NoSteadyStateError

# Largest supported superoperator dimension d^2.
MAX_SUPEROP_DIM = 10_000

# Relative singular-value threshold below which a direction counts as null.
NULL_SV_TOL = 1e-8


def stack_state(rho: np.ndarray) -> np.ndarray:
    """Column-stack a d x d matrix into a d^2 vector."""
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unstack_state(vec: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of ``stack_state``."""
    return np.asarray(vec, dtype=complex).reshape(dim, dim, order="F")


@dataclass
class Liouvillian:
    """Dense matrix representation of a generator on column-stacked states.

    Trace preservation appears as the vectorized identity being a left null
    vector of ``superop``.
    """

    superop: np.ndarray
    params: LindbladianParams
    ansatz: LindbladAnsatz

    @property
    def dim(self) -> int:
        return self.ansatz.dim


def vectorize_liouvillian(
    params: LindbladianParams, ansatz: LindbladAnsatz
) -> Liouvillian:
    """Build the d^2 x d^2 matrix whose action equals the generator.

    Column stacking turns A rho B into (B^T kron A) vec(rho).  The drive sum
    collapses into one effective Hamiltonian, and a Hermitian rate matrix is
    expanded over its eigenchannels, so the number of Kronecker products
    stays O(K) instead of O(K^2); a non-Hermitian gamma falls back to the
    entrywise double sum.
    """
    d = ansatz.dim
    if d * d > MAX_SUPEROP_DIM:
        raise DimTooLargeError(f"superoperator dimension {d * d} exceeds {MAX_SUPEROP_DIM}")
    if params.n_drive != ansatz.n_drive or params.n_jump != ansatz.n_jump:
        raise DimMismatchError("parameter shapes do not match the ansatz")
    eye = np.eye(d, dtype=complex)
    sup = np.zeros((d * d, d * d), dtype=complex)
    if params.n_drive:
        h_eff = np.tensordot(params.c, np.array(ansatz.h_ops), axes=1)
        sup += -1j * (np.kron(eye, h_eff) - np.kron(h_eff.T, eye))
    gamma = params.gamma
    if gamma.size == 0:
        return Liouvillian(superop=sup, params=params, ansatz=ansatz)
    herm_defect = np.linalg.norm(gamma - gamma.conj().T)
    if herm_defect <= 1e-12 * max(1.0, np.linalg.norm(gamma)):
        rates, chans = np.linalg.eigh((gamma + gamma.conj().T) / 2.0)
        jump_stack = np.array(ansatz.jump_ops)
        anticomm = np.zeros((d, d), dtype=complex)
        rate_floor = 1e-14 * float(np.max(np.abs(rates))) if rates.size else 0.0
        for mu in range(rates.size):
            if abs(rates[mu]) <= rate_floor:
                continue
            l_mu = np.tensordot(chans[:, mu], jump_stack, axes=1)
            sup += rates[mu] * np.kron(l_mu.conj(), l_mu)
            anticomm += rates[mu] * (l_mu.conj().T @ l_mu)
        sup -= 0.5 * (np.kron(eye, anticomm) + np.kron(anticomm.T, eye))
    else:
        for j, l_j in enumerate(ansatz.jump_ops):
            for k, l_k in enumerate(ansatz.jump_ops):
                g = gamma[j, k]
                if g == 0.0:
                    continue
                kd_j = l_k.conj().T @ l_j
                sup += g * (
                    np.kron(l_k.conj(), l_j)
                    - 0.5 * (np.kron(eye, kd_j) + np.kron(kd_j.T, eye))
                )
    return Liouvillian(superop=sup, params=params, ansatz=ansatz)


@dataclass
class SteadyStateResult:
    """Steady state plus diagnostics.

    ``null_space_dim`` counts the singular values below the null threshold;
    it is None when the fast linear-solve path was used (which verifies the
    residual but does not probe multiplicity).
    """

    rho: np.ndarray
    residual: float
    null_space_dim: int | None
    method: str

    @property
    def unique(self) -> bool | None:
        if self.null_space_dim is None:
            return None
        return self.null_space_dim == 1


def _canonicalize_state(x: np.ndarray) -> np.ndarray:
    """Phase-fix on the trace, Hermitize, clamp tiny negatives, normalize."""
    tr = np.trace(x)
    if abs(tr) > 1e-12 * np.linalg.norm(x):
        x = x * (tr.conjugate() / abs(tr))
    x = (x + x.conj().T) / 2.0
    w, v = np.linalg.eigh(x)
    if w[0] < 0 and w[0] > -1e-8:
        w = np.maximum(w, 0.0)
        x = (v * w) @ v.conj().T
    tr = np.trace(x).real
    if abs(tr) < 1e-300:
        raise NoSteadyStateError("null vector has vanishing trace")
    return x / tr


def steady_state_of(
    params: LindbladianParams,
    ansatz: LindbladAnsatz,
    method: str = "svd",
) -> SteadyStateResult:
    """Steady state of the parameterized generator.

    ``method='svd'`` takes the right singular vector of the smallest
    singular value of the vectorized generator (robust for non-normal
    matrices and aware of null-space multiplicity).  ``method='lu'`` solves
    the trace-constrained linear system instead, which is several times
    faster at large dimension; its residual is always verified and it falls
    back to the SVD path on failure.  Raises ``NoSteadyStateError`` when no
    null direction exists within tolerance.
    """
    liou = vectorize_liouvillian(params, ansatz)
    if method == "lu":
        result = _steady_state_lu(liou)
        if result is not None:
            return result
        method = "svd"
    if method != "svd":
        raise ValueError(f"unknown method {method!r}")
    return _steady_state_svd(liou)


def _steady_state_svd(liou: Liouvillian) -> SteadyStateResult:
    d = liou.dim
    _, s, vh = np.linalg.svd(liou.superop)
    scale = float(s[0]) if s[0] > 0 else 1.0
    null_dim = int(np.sum(s <= NULL_SV_TOL * scale))
    if s[0] == 0.0:
        # zero generator: every state is steady
        null_dim = s.size
    if null_dim == 0:
        raise NoSteadyStateError(
            f"smallest singular value {s[-1]:.3e} above {NULL_SV_TOL:.0e} * {scale:.3e}"
        )
    rho = _canonicalize_state(unstack_state(vh[-1].conj(), d))
    residual = float(np.linalg.norm(liou.superop @ stack_state(rho)))
    limit = NULL_SV_TOL * max(1.0, scale)
    if residual > limit:
        raise NoSteadyStateError(f"steady-state residual {residual:.3e} > {limit:.3e}")
    return SteadyStateResult(
        rho=rho, residual=residual, null_space_dim=null_dim, method="svd"
    )


def _steady_state_lu(liou: Liouvillian) -> SteadyStateResult | None:
    """Trace-constrained solve; None signals fallback to the SVD path."""
    d = liou.dim
    mod = liou.superop.copy()
    trace_row = np.zeros(d * d, dtype=complex)
    trace_row[np.arange(d) * (d + 1)] = 1.0
    mod[0] = trace_row
    rhs = np.zeros(d * d, dtype=complex)
    rhs[0] = 1.0
    try:
        vec = np.linalg.solve(mod, rhs)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(vec)):
        return None
    rho = _canonicalize_state(unstack_state(vec, d))
    residual = float(np.linalg.norm(liou.superop @ stack_state(rho)))
    scale = float(np.linalg.norm(liou.superop, ord="fro")) / d
    if residual > NULL_SV_TOL * max(1.0, scale):
        return None
    return SteadyStateResult(rho=rho, residual=residual, null_space_dim=None, method="lu")


def norm_difference(rho_a: np.ndarray, rho_b: np.ndarray) -> float:
    """Frobenius norm of the difference between two states."""
    rho_a = np.asarray(rho_a)
    rho_b = np.asarray(rho_b)
    if rho_a.shape != rho_b.shape:
        raise DimMismatchError(f"shape mismatch {rho_a.shape} vs {rho_b.shape}")
    return float(np.linalg.norm(rho_a - rho_b))


def liouvillian_gap(params: LindbladianParams, ansatz: LindbladAnsatz) -> float:
    """Smallest nonzero decay rate |Re(lambda)| of the vectorized generator.

    The null space is excluded at a relative threshold of 1e-10; a generator
    with no decaying mode at all (for example the zero generator) returns
    0.0 with a warning.
    """
    liou = vectorize_liouvillian(params, ansatz)
    eigs = np.linalg.eigvals(liou.superop)
    re = np.abs(eigs.real)
    scale = float(re.max()) if re.size else 0.0
    if scale == 0.0:
        warnings.warn("generator has no decaying modes; gap is 0 by convention")
        return 0.0
    nonzero = re[re > 1e-10 * max(1.0, scale)]
    if nonzero.size == 0:
        warnings.warn("generator has no decaying modes; gap is 0 by convention")
        return 0.0
    return float(nonzero.min())
