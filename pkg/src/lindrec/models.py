"""Target-state families, their operator ansatz catalogs, and the
closed-form oracles (kernel vectors and correlation matrices) used to
cross-check the numerical pipeline.

The closed-form expressions are transcribed once and kept on a separate
code path from the numerical Gram builder, so each side independently
validates the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .engine import LindbladAnsatz, LindbladianParams, apply_lindbladian
from .errors import DegenerateParamsError, UnsupportedVariantError
from .quantum_ops import (
    FockSpace,
    SpinSector,
    boson_ops,
    coherent_state,
    spin_ops,
    squeezed_vacuum,
)

SINGLE_JUMPS = "single"
TWO_JUMPS = "two"
FULL_BASIS = "full3"
XY_BASIS = "xy2"


@dataclass(frozen=True)
class CoherentSpec:
    """Coherent target |alpha><alpha| with linear drive and jump operators."""

    alpha: complex
    n_max: int | None = None


@dataclass(frozen=True)
class SqueezedSpec:
    """Squeezed-vacuum target with quadratic drives and single- or
    two-particle jump operators."""

    r: float
    theta: float = 0.0
    jumps: str = SINGLE_JUMPS
    n_max: int | None = None

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("r must be >= 0")
        if self.jumps not in (SINGLE_JUMPS, TWO_JUMPS):
            raise ValueError(f"jumps must be '{SINGLE_JUMPS}' or '{TWO_JUMPS}'")


@dataclass(frozen=True)
class CollectiveSpec:
    """Driven-dissipative collective spin target on the maximal sector."""

    n_spins: int
    omega0: float
    kappa: float
    basis: str = FULL_BASIS

    def __post_init__(self):
        if self.n_spins < 2:
            raise ValueError("n_spins must be >= 2")
        if self.kappa <= 0:
            raise ValueError("kappa must be > 0")
        if self.basis not in (FULL_BASIS, XY_BASIS):
            raise ValueError(f"basis must be '{FULL_BASIS}' or '{XY_BASIS}'")


ModelSpec = Union[CoherentSpec, SqueezedSpec, CollectiveSpec]


def default_cutoff(spec: CoherentSpec | SqueezedSpec) -> int:
    """Fock cutoff large enough for a truncation tail below ~1e-18."""
    if isinstance(spec, CoherentSpec):
        return int(max(40, np.ceil(10 * max(4.0, abs(spec.alpha) ** 2))))
    t2 = np.tanh(spec.r) ** 2
    floor = int(np.ceil(20 + 20 * np.sinh(spec.r) ** 2))
    if t2 == 0:
        return max(40, floor)
    pairs = int(np.ceil(np.log(1e-18 * (1 - t2)) / np.log(t2)))
    return max(40, floor, 2 * pairs + 8)


@dataclass(frozen=True)
class Model:
    spec: ModelSpec
    ansatz: LindbladAnsatz
    rho_ss: np.ndarray


def _quadratic_drives(ops) -> list[np.ndarray]:
    a2 = ops.a @ ops.a
    ad2 = ops.a_dag @ ops.a_dag
    return [(a2 + ad2) / np.sqrt(2), (a2 - ad2) / (1j * np.sqrt(2))]


def build_model(spec: ModelSpec) -> Model:
    """Target state plus the operator basis for the reconstruction.

    Coherent: drives {x, p}, jumps {a, a_dag}.  Squeezed: quadratic drives
    {(a^2 + ad^2)/sqrt2, (a^2 - ad^2)/(i sqrt2)} with jumps {a, a_dag} or
    {a^2, ad^2}.  Collective: drives and jumps both {Sx, Sy, Sz} (full) or
    {Sx, Sy} (reduced).
    """
    if isinstance(spec, CoherentSpec):
        space = FockSpace(spec.n_max or default_cutoff(spec))
        ops = boson_ops(space)
        ansatz = LindbladAnsatz(
            h_ops=(ops.x, ops.p), jump_ops=(ops.a, ops.a_dag)
        )
        return Model(spec=spec, ansatz=ansatz, rho_ss=coherent_state(space, spec.alpha))
    if isinstance(spec, SqueezedSpec):
        space = FockSpace(spec.n_max or default_cutoff(spec))
        ops = boson_ops(space)
        drives = _quadratic_drives(ops)
        if spec.jumps == SINGLE_JUMPS:
            jumps = (ops.a, ops.a_dag)
        else:
            jumps = (ops.a @ ops.a, ops.a_dag @ ops.a_dag)
        ansatz = LindbladAnsatz(h_ops=tuple(drives), jump_ops=jumps)
        return Model(
            spec=spec,
            ansatz=ansatz,
            rho_ss=squeezed_vacuum(space, spec.r, spec.theta),
        )
    if isinstance(spec, CollectiveSpec):
        sector = SpinSector(spec.n_spins)
        ops = spin_ops(sector)
        if spec.basis == FULL_BASIS:
            drives = (ops.sx, ops.sy, ops.sz)
            jumps = drives
        else:
            # reduced basis for the noise-robustness sweeps; jumps carry the
            # intensive 1/sqrt(S) normalization so the recovered rate matrix
            # is size-independent and the smallest correlation-matrix
            # eigenvalue follows its 1/N decay
            scale = np.sqrt(sector.total_spin)
            drives = (ops.sx, ops.sy)
            jumps = (ops.sx / scale, ops.sy / scale)
        ansatz = LindbladAnsatz(h_ops=drives, jump_ops=jumps)
        rho = collective_steady_state(spec.n_spins, spec.omega0, spec.kappa)
        return Model(spec=spec, ansatz=ansatz, rho_ss=rho)
    raise UnsupportedVariantError(f"unknown spec type {type(spec)!r}")


def collective_generator_params(spec: CollectiveSpec) -> LindbladianParams:
    """Exact generator parameters of the driven-dissipative collective model
    expressed in the model's reconstruction basis.

    Drive omega0 along Sx; the collective decay channel S- = Sx - i Sy at
    rate kappa/S appears as the rank-1 rate matrix (kappa/S) w w^dag with
    w = (1, -i, 0), i.e. gamma_12 = +i kappa/S and gamma_21 = -i kappa/S.
    In the reduced basis the jumps carry 1/sqrt(S), so the rate block is
    kappa w w^dag instead.
    """
    s = spec.n_spins / 2.0
    if spec.basis == FULL_BASIS:
        c = np.array([spec.omega0, 0.0, 0.0])
        gamma = (spec.kappa / s) * np.array(
            [[1.0, 1.0j, 0.0], [-1.0j, 1.0, 0.0], [0.0, 0.0, 0.0]], dtype=complex
        )
    else:
        c = np.array([spec.omega0, 0.0])
        gamma = spec.kappa * np.array([[1.0, 1.0j], [-1.0j, 1.0]], dtype=complex)
    return LindbladianParams(c=c, gamma=gamma)


def collective_steady_state(n_spins: int, omega0: float, kappa: float) -> np.ndarray:
    """Analytic steady state of the driven-dissipative collective spin model.

    eta = sum_{j=0}^{N+1} (S_- / beta)^j with beta = -i omega0 N / (2 kappa),
    accumulated Horner style; powers beyond j = N vanish by ladder
    nilpotency.  The density matrix is eta eta^dag normalized (this product
    ordering is the one annihilated by the generator; the construction is
    verified against it to 1e-10 before returning).
    """
    if n_spins < 2:
        raise DegenerateParamsError("n_spins must be >= 2")
    if omega0 == 0:
        raise DegenerateParamsError("omega0 must be nonzero")
    if kappa <= 0:
        raise DegenerateParamsError("kappa must be > 0")
    sector = SpinSector(n_spins)
    ops = spin_ops(sector)
    beta = -1j * omega0 * n_spins / (2.0 * kappa)
    step = ops.sm / beta
    eye = np.eye(sector.dim, dtype=complex)
    eta = eye.copy()
    for _ in range(n_spins + 1):
        eta = eye + step @ eta
    rho = eta @ eta.conj().T
    rho /= np.trace(rho).real
    ansatz = LindbladAnsatz(h_ops=(ops.sx,), jump_ops=(ops.sm,))
    params = LindbladianParams(
        c=np.array([omega0]),
        gamma=np.array([[kappa / sector.total_spin]], dtype=complex),
    )
    residual = float(np.linalg.norm(apply_lindbladian(params, ansatz, rho)))
    if residual > 1e-10:
        raise DegenerateParamsError(
            f"steady-state residual {residual:.3e} exceeds 1e-10"
        )
    return rho


def analytic_kernel_vectors(spec: ModelSpec) -> list[np.ndarray]:
    """Closed-form null vectors of the correlation matrix, in index-map order.

    Coherent and two-particle squeezed targets have a one-dimensional kernel;
    the single-particle squeezed target has the three orthogonal directions
    (two with indefinite rate matrices, one purely dissipative).
    """
    if isinstance(spec, CoherentSpec):
        al = complex(spec.alpha)
        return [
            np.array(
                [
                    1j * np.sqrt(2) / 4 * (al - al.conjugate()),
                    np.sqrt(2) / 4 * (al + al.conjugate()),
                    1.0,
                    0.0,
                    0.0,
                    0.0,
                ],
                dtype=complex,
            )
        ]
    if isinstance(spec, SqueezedSpec):
        r, th = spec.r, spec.theta
        ch2, sh2 = np.cosh(2 * r), np.sinh(2 * r)
        if spec.jumps == SINGLE_JUMPS:
            v1 = np.array(
                [
                    -np.sqrt(2) / 2 * np.sin(th),
                    np.sqrt(2) / 2 * np.cos(th),
                    -np.tanh(2 * r),
                    np.exp(-1j * th) / ch2,
                    np.exp(1j * th) / ch2,
                    np.tanh(2 * r),
                ],
                dtype=complex,
            )
            v2 = np.array(
                [
                    np.sqrt(2) / 2 * np.cos(th),
                    np.sqrt(2) / 2 * np.sin(th),
                    0.0,
                    1j * np.exp(-1j * th) * ch2,
                    -1j * np.exp(1j * th) * ch2,
                    0.0,
                ],
                dtype=complex,
            )
            v3 = 0.5 * np.array(
                [
                    0.0,
                    0.0,
                    ch2 + 1.0,
                    np.exp(-1j * th) * sh2,
                    np.exp(1j * th) * sh2,
                    ch2 - 1.0,
                ],
                dtype=complex,
            )
            return [v1, v2, v3]
        ch4, sh4 = np.cosh(4 * r), np.sinh(4 * r)
        return [
            np.array(
                [
                    np.sqrt(2) * np.sin(th) * sh4,
                    -np.sqrt(2) * np.cos(th) * sh4,
                    3.0 + 4.0 * ch2 + ch4,
                    np.exp(-2j * th) * (1.0 - ch4),
                    np.exp(2j * th) * (1.0 - ch4),
                    3.0 - 4.0 * ch2 + ch4,
                ],
                dtype=complex,
            )
        ]
    raise UnsupportedVariantError("closed-form kernel vectors exist only for bosonic targets")


def _hermitian_completion(upper: np.ndarray) -> np.ndarray:
    return upper + np.triu(upper, 1).conj().T


def analytic_corr_matrix(spec: ModelSpec) -> np.ndarray:
    """Closed-form correlation matrix for the bosonic targets.

    All 21 independent entries of the 6x6 matrix come from the displayed
    expressions; the lower triangle is the Hermitian completion.
    """
    if isinstance(spec, CoherentSpec):
        al = complex(spec.alpha)
        m13 = -np.sqrt(2) / 4 * 1j * (al - al.conjugate())
        m23 = -np.sqrt(2) / 4 * (al + al.conjugate())
        aa = abs(al) ** 2
        m = np.zeros((6, 6), dtype=complex)
        m[0, 0] = m[1, 1] = 1.0
        m[0, 2], m[0, 5] = m13, -m13
        m[1, 2], m[1, 5] = m23, -m23
        m[2, 2], m[2, 5] = aa / 2, -aa / 2
        m[3, 3] = m[4, 4] = 0.5
        m[5, 5] = 2.0 + aa / 2
        return _hermitian_completion(m)
    if not isinstance(spec, SqueezedSpec):
        raise UnsupportedVariantError(
            "closed-form correlation matrices exist only for bosonic targets"
        )
    r, th = spec.r, spec.theta
    ch = np.cosh
    sh = np.sinh
    m = np.zeros((6, 6), dtype=complex)
    # the drive-drive block is the same for both jump choices
    m[0, 0] = 0.5 * (3 - np.cos(2 * th) + (1 + np.cos(2 * th)) * ch(4 * r))
    m[0, 1] = 0.5 * np.sin(2 * th) * (ch(4 * r) - 1)
    m[1, 1] = 0.5 * (3 + np.cos(2 * th) + (1 - np.cos(2 * th)) * ch(4 * r))
    if spec.jumps == SINGLE_JUMPS:
        m[0, 2] = -np.sqrt(2) / 2 * np.sin(th) * sh(2 * r)
        m[0, 3] = 1j * np.sqrt(2) / 2 * ch(2 * r)
        m[0, 4] = m[0, 3].conjugate()
        m[0, 5] = -np.sqrt(2) / 2 * np.sin(th) * sh(2 * r)
        m[1, 2] = np.sqrt(2) / 2 * np.cos(th) * sh(2 * r)
        m[1, 3] = -np.sqrt(2) / 2 * ch(2 * r)
        m[1, 4] = m[1, 3].conjugate()
        m[1, 5] = np.sqrt(2) / 2 * np.cos(th) * sh(2 * r)
        m[2, 2] = 5 / 8 - ch(2 * r) + 3 / 8 * ch(4 * r)
        m[2, 3] = 0.5 * np.exp(1j * th) * (sh(2 * r) - 0.75 * sh(4 * r))
        m[2, 4] = m[2, 3].conjugate()
        m[2, 5] = 3 / 8 * (ch(4 * r) - 1)
        m[3, 3] = m[4, 4] = (1 + 3 * ch(4 * r)) / 8
        m[3, 4] = 3 / 8 * np.exp(-2j * th) * (ch(4 * r) - 1)
        m[3, 5] = -0.5 * np.exp(-1j * th) * (sh(2 * r) + 0.75 * sh(4 * r))
        m[4, 5] = m[3, 5].conjugate()
        m[5, 5] = 5 / 8 + ch(2 * r) + 3 / 8 * ch(4 * r)
        return _hermitian_completion(m)
    m[0, 2] = -np.sqrt(2) / 2 * np.sin(th) * (sh(4 * r) - sh(2 * r))
    m[0, 3] = -1j * np.sqrt(2) / 2 * np.exp(1j * th) * sh(4 * r)
    m[0, 4] = m[0, 3].conjugate()
    m[0, 5] = -np.sqrt(2) / 2 * np.sin(th) * (sh(4 * r) + sh(2 * r))
    m[1, 2] = np.sqrt(2) / 2 * np.cos(th) * (sh(4 * r) - sh(2 * r))
    m[1, 3] = np.sqrt(2) / 2 * np.exp(1j * th) * sh(4 * r)
    m[1, 4] = m[1, 3].conjugate()
    m[1, 5] = np.sqrt(2) / 2 * np.cos(th) * (sh(4 * r) + sh(2 * r))
    m[2, 2] = (
        71 / 32
        - 13 / 4 * ch(2 * r)
        + 3 / 2 * ch(4 * r)
        - 3 / 4 * ch(6 * r)
        + 9 / 32 * ch(8 * r)
    )
    m[2, 3] = (
        1
        / 8
        * np.exp(2j * th)
        * (-29 / 4 + 3 * ch(2 * r) + 5 * ch(4 * r) - 3 * ch(6 * r) + 9 / 4 * ch(8 * r))
    )
    m[2, 4] = m[2, 3].conjugate()
    m[2, 5] = 0.25 * (15 / 8 - 3 * ch(4 * r) + 9 / 8 * ch(8 * r))
    m[3, 3] = m[4, 4] = (91 / 4 + 23 * ch(4 * r) + 9 / 4 * ch(8 * r)) / 8
    m[3, 4] = 9 / 32 * np.exp(-4j * th) * (3 - 4 * ch(4 * r) + ch(8 * r))
    m[3, 5] = (
        1
        / 8
        * np.exp(-2j * th)
        * (-29 / 4 - 3 * ch(2 * r) + 5 * ch(4 * r) + 3 * ch(6 * r) + 9 / 4 * ch(8 * r))
    )
    m[4, 5] = m[3, 5].conjugate()
    m[5, 5] = (
        71 / 32
        + 13 / 4 * ch(2 * r)
        + 3 / 2 * ch(4 * r)
        + 3 / 4 * ch(6 * r)
        + 9 / 32 * ch(8 * r)
    )
    return _hermitian_completion(m)
