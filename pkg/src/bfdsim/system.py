"""State container, evolution right-hand side, and frozen-coefficient algebra.

The evolution system on the torus is

    (1 - b*mu*Lap) dt zeta + (1/gamma) div((A(D) - eps*zeta) v) = 0,
    (1 - d*mu*Lap) dt v + (1-gamma)(1 + c*mu*Lap) grad zeta
                        - (eps/(2*gamma)) grad(|v|^2) = 0,

with A(D) the combined dispersion multiplier.  Freezing the coefficients at
a constant background (zeta_bar, v_bar) and taking Fourier transforms yields
a first-order system  W(xi) dt V + M(xi) V = 0 whose symmetrizer S(xi) makes
i S M Hermitian; three S families cover b = d, b != d with b > 0, and b = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import GridMismatchError, ParameterDomainError
from .params import (
    VARIANT_B_ZERO,
    VARIANT_BD_DISTINCT,
    VARIANT_BD_EQUAL,
    ModelParams,
    symmetrizer_variant,
)
from .spectral import GridSpec, SpectralField, _check_same_grid
from .symbols import SymbolTable, sigma_of, symbol_table


@dataclass
class FieldState:
    """Surface displacement and layer-mean velocity at one instant."""

    t: float
    zeta: SpectralField
    v: tuple[SpectralField, ...]
    params: ModelParams

    def __post_init__(self):
        if not isinstance(self.v, tuple):
            self.v = tuple(self.v)
        grid = _check_same_grid(self.zeta, *self.v)
        if len(self.v) != grid.dim:
            raise GridMismatchError(
                f"velocity needs {grid.dim} components, got {len(self.v)}"
            )

    @property
    def grid(self) -> GridSpec:
        return self.zeta.grid

    @property
    def dim(self) -> int:
        return self.grid.dim

    def copy(self) -> "FieldState":
        return FieldState(t=self.t, zeta=self.zeta.copy(),
                          v=tuple(c.copy() for c in self.v), params=self.params)

    @classmethod
    def from_arrays(cls, grid: GridSpec, params: ModelParams, zeta, v, t: float = 0.0):
        zf = SpectralField.from_real(grid, zeta)
        vf = tuple(SpectralField.from_real(grid, comp) for comp in v)
        return cls(t=t, zeta=zf, v=vf, params=params)

    def is_finite(self) -> bool:
        if not np.all(np.isfinite(self.zeta.hat)):
            return False
        return all(np.all(np.isfinite(c.hat)) for c in self.v)


def rhs_hat(zhat: np.ndarray, vhats: tuple[np.ndarray, ...], grid: GridSpec,
            params: ModelParams, table: SymbolTable | None = None,
            use_dealias: bool = True):
    """Tendency spectra (dt zeta_hat, dt v_hat) of the primitive system.

    Quadratic products are formed pointwise in physical space and, unless
    use_dealias is False, truncated by the two-thirds rule.  At eps = 0 no
    product is formed at all, so the map is exactly linear.
    """
    if table is None:
        table = symbol_table(grid, params)
    gamma, eps = params.gamma, params.epsilon

    div_Av = np.zeros(grid.n, dtype=np.complex128)
    for xi, vh in zip(grid.xi_mesh, vhats):
        div_Av += 1j * xi * (table.A * vh)

    if eps != 0.0:
        zr = grid.ifft_real(zhat)
        vr = [grid.ifft_real(vh) for vh in vhats]
        mask = grid.dealias_mask if use_dealias else None
        div_zv = np.zeros(grid.n, dtype=np.complex128)
        for xi, comp in zip(grid.xi_mesh, vr):
            prod_hat = grid.fft(zr * comp)
            if mask is not None:
                prod_hat = prod_hat * mask
            div_zv += 1j * xi * prod_hat
        vsq_hat = grid.fft(sum(comp * comp for comp in vr))
        if mask is not None:
            vsq_hat = vsq_hat * mask
        dz = -(div_Av - eps * div_zv) / (gamma * table.helmholtz_b)
        dv = tuple(
            -(1j * xi * ((1.0 - gamma) * table.one_minus_cmu * zhat
                         - eps / (2.0 * gamma) * vsq_hat)) / table.helmholtz_d
            for xi in grid.xi_mesh
        )
    else:
        dz = -div_Av / (gamma * table.helmholtz_b)
        dv = tuple(
            -(1.0 - gamma) * 1j * xi * table.one_minus_cmu * zhat / table.helmholtz_d
            for xi in grid.xi_mesh
        )
    return dz, dv


def rhs_primitive(state: FieldState, use_dealias: bool = True):
    """Tendency of the state as spectral fields (dt zeta, dt v)."""
    grid = state.grid
    dz, dv = rhs_hat(state.zeta.hat, tuple(c.hat for c in state.v),
                     grid, state.params, use_dealias=use_dealias)
    return (SpectralField(grid, hat=dz),
            tuple(SpectralField(grid, hat=h) for h in dv))


# frozen-coefficient algebra ----------------------------------------------


@dataclass(frozen=True)
class FrozenSymbolMatrices:
    """Weighted first-order system and symmetrizer at one wavenumber.

    M is the system matrix of  W(xi) dt V + M V = 0  where the weight W is
    1 + b*mu*|xi|^2 for the b = d and b != d variants and 1 + d*mu*|xi|^2
    for the b = 0 variant.  prefactor is the overall scalar in front of the
    symmetrizer family (1 for b = d, gamma*(1-gamma) otherwise); margins
    quoted per unit prefactor are comparable across variants.
    """

    xi: tuple[float, ...]
    M: np.ndarray
    S: np.ndarray
    variant: str
    prefactor: float


def frozen_symbol_matrices(xi, zeta_bar: float, v_bar, params: ModelParams,
                           variant: str | None = None) -> FrozenSymbolMatrices:
    """Assemble M(xi) and S(xi) frozen at a constant background."""
    xi = tuple(float(c) for c in np.atleast_1d(xi))
    v_bar = tuple(float(c) for c in np.atleast_1d(v_bar))
    dim = len(xi)
    if dim not in (1, 2) or len(v_bar) != dim:
        raise ParameterDomainError("xi and v_bar must both have 1 or 2 components")
    if variant is None:
        variant = symmetrizer_variant(params)
    if variant not in (VARIANT_BD_EQUAL, VARIANT_BD_DISTINCT, VARIANT_B_ZERO):
        raise ParameterDomainError(f"unknown symmetrizer variant {variant!r}")
    if variant == VARIANT_B_ZERO and params.b != 0.0:
        raise ParameterDomainError("the b=0 variant requires b = 0 exactly")

    gamma, eps, mu = params.gamma, params.epsilon, params.mu
    abs2 = sum(c * c for c in xi)
    sig = float(sigma_of(np.sqrt(params.mu2 * abs2)))
    A = (1.0 - params.a * mu * abs2
         + math.sqrt(mu / params.mu2) / gamma * sig
         + (mu / params.mu2) / gamma**2 * sig**2)
    helm_b = 1.0 + params.b * mu * abs2
    helm_d = 1.0 + params.d * mu * abs2
    omc = 1.0 - params.c * mu * abs2
    g = helm_b / helm_d
    Aez = A - eps * zeta_bar
    ixi = [1j * c for c in xi]
    v_dot_ixi = sum(vb * ix for vb, ix in zip(v_bar, ixi))

    m = dim + 1
    M = np.zeros((m, m), dtype=np.complex128)
    S = np.zeros((m, m), dtype=np.complex128)

    if variant in (VARIANT_BD_EQUAL, VARIANT_BD_DISTINCT):
        g_row = 1.0 if variant == VARIANT_BD_EQUAL else g
        M[0, 0] = -(eps / gamma) * v_dot_ixi
        for j in range(dim):
            M[0, 1 + j] = Aez / gamma * ixi[j]
            M[1 + j, 0] = (1.0 - gamma) * g_row * omc * ixi[j]
            for k in range(dim):
                M[1 + j, 1 + k] = -(eps / gamma) * g_row * v_bar[k] * ixi[j]
    else:
        M[0, 0] = -(eps / gamma) * helm_d * v_dot_ixi
        for j in range(dim):
            M[0, 1 + j] = helm_d * Aez / gamma * ixi[j]
            M[1 + j, 0] = (1.0 - gamma) * omc * ixi[j]
            for k in range(dim):
                M[1 + j, 1 + k] = -(eps / gamma) * v_bar[k] * ixi[j]

    gg = gamma * (1.0 - gamma)
    if variant == VARIANT_BD_EQUAL:
        prefactor = 1.0
        S[0, 0] = gg * omc
        for j in range(dim):
            S[0, 1 + j] = S[1 + j, 0] = -eps * v_bar[j]
            S[1 + j, 1 + j] = Aez
    elif variant == VARIANT_BD_DISTINCT:
        prefactor = gg
        S[0, 0] = gg * (gg * omc**2 * g)
        for j in range(dim):
            S[0, 1 + j] = S[1 + j, 0] = gg * (-eps * g * v_bar[j] * omc)
            S[1 + j, 1 + j] = gg * (Aez * omc)
            for k in range(dim):
                S[1 + j, 1 + k] += eps**2 * (g - 1.0) * v_bar[j] * v_bar[k]
    else:
        prefactor = gg
        S[0, 0] = gg * (gg * omc**2)
        for j in range(dim):
            S[0, 1 + j] = S[1 + j, 0] = gg * (-eps * v_bar[j] * omc)
            S[1 + j, 1 + j] = gg * (omc * Aez * helm_d)
            for k in range(dim):
                S[1 + j, 1 + k] += -params.d * eps**2 * mu * abs2 * v_bar[j] * v_bar[k]

    return FrozenSymbolMatrices(xi=xi, M=M, S=S, variant=variant,
                                prefactor=prefactor)


class HermitianReport(NamedTuple):
    defect: float
    margin: float


def hermitian_defect(S: np.ndarray, M: np.ndarray) -> HermitianReport:
    """Deviation of i*S*M from Hermitian, and the positivity margin of S.

    defect = ||i S M - (i S M)^H||_F / (1 + ||i S M||_F); margin is the
    smallest eigenvalue of the symmetric part of S.
    """
    P = 1j * (S @ M)
    defect = float(np.linalg.norm(P - P.conj().T) / (1.0 + np.linalg.norm(P)))
    sym = 0.5 * (S + S.conj().T)
    margin = float(np.linalg.eigvalsh(sym)[0])
    return HermitianReport(defect=defect, margin=margin)


class CavitationReport(NamedTuple):
    margin: float
    eps_w1inf: float


def noncavitation_margin(state: FieldState) -> CavitationReport:
    """min over the grid of (1 - eps*zeta), plus a steepness proxy.

    The proxy is eps*(||zeta||_inf + ||grad zeta||_inf + ||v||_inf +
    ||grad v||_inf) with gradients from the spectrum; the long-time
    arguments need it small of order sqrt(eps).
    """
    grid = state.grid
    eps = state.params.epsilon
    zvals = state.zeta.values
    margin = float(np.min(1.0 - eps * zvals))

    def grad_maxabs(field: SpectralField) -> float:
        mag = np.zeros(grid.n)
        for xi in grid.xi_mesh:
            mag += grid.ifft_real(1j * xi * field.hat) ** 2
        return float(np.sqrt(np.max(mag)))

    vmag = np.zeros(grid.n)
    for comp in state.v:
        vmag += comp.values**2
    w1 = (float(np.max(np.abs(zvals))) + grad_maxabs(state.zeta)
          + float(np.sqrt(np.max(vmag))) + sum(grad_maxabs(c) for c in state.v))
    return CavitationReport(margin=margin, eps_w1inf=eps * w1)


# amplitude/shallowness normal form ----------------------------------------


def rescale_to_unit(state: FieldState) -> FieldState:
    """Map a state to the equivalent unit-parameter system.

    With zeta(t, X) = eps^{-1} zt(t/sqrt(mu), X/sqrt(mu)) the rescaled pair
    solves the same system with eps = mu = 1 and depth parameter mu2/mu.
    Amplitudes are multiplied by eps, lengths and time divided by sqrt(mu).
    """
    p = state.params
    if p.epsilon <= 0.0:
        raise ParameterDomainError("rescale_to_unit requires epsilon > 0")
    root = math.sqrt(p.mu)
    new_params = ModelParams(gamma=p.gamma, epsilon=1.0, mu=1.0, mu2=p.mu2 / p.mu,
                             a=p.a, b=p.b, c=p.c, d=p.d)
    grid = state.grid
    new_grid = GridSpec(n=grid.n, length=tuple(L / root for L in grid.length))
    zeta = SpectralField(new_grid, real=p.epsilon * state.zeta.values)
    v = tuple(SpectralField(new_grid, real=p.epsilon * c.values) for c in state.v)
    return FieldState(t=state.t / root, zeta=zeta, v=v, params=new_params)


def rescale_from_unit(state: FieldState, epsilon: float, mu: float) -> FieldState:
    """Inverse of rescale_to_unit for the given target (epsilon, mu)."""
    p = state.params
    if epsilon <= 0.0 or mu <= 0.0:
        raise ParameterDomainError("epsilon and mu must be > 0")
    root = math.sqrt(mu)
    new_params = ModelParams(gamma=p.gamma, epsilon=epsilon, mu=mu, mu2=p.mu2 * mu,
                             a=p.a, b=p.b, c=p.c, d=p.d)
    grid = state.grid
    new_grid = GridSpec(n=grid.n, length=tuple(L * root for L in grid.length))
    zeta = SpectralField(new_grid, real=state.zeta.values / epsilon)
    v = tuple(SpectralField(new_grid, real=c.values / epsilon) for c in state.v)
    return FieldState(t=state.t * root, zeta=zeta, v=v, params=new_params)
