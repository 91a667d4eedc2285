"""Norms, symmetrizer energies, Hamiltonian, and variational diagnostics.

The weighted Sobolev scale is  ||u||^2_{X^s_{mu^k}} = ||u||^2_{H^s}
+ mu^k ||grad^k u||^2_{H^s}, realized spectrally with the Bessel weight
<xi>^s = (1 + |xi|^2)^{s/2} and |xi|^k in place of the k-th gradient.  The
symmetrizer energy E_s pairs the Helmholtz-weighted state against the
symmetrizer applied to it, with every operator chain evaluated exactly as
displayed (multipliers in spectral space, coefficient multiplications
pointwise with two-thirds dealiasing after each product).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterDomainError
from .params import (
    VARIANT_B_ZERO,
    VARIANT_BD_DISTINCT,
    VARIANT_BD_EQUAL,
    CaseClass,
    classify_case,
)
from .spectral import GridSpec, SpectralField
from .symbols import symbol_table
from .system import FieldState, noncavitation_margin, rhs_hat

REPORT_COLUMNS = ("t", "hamiltonian", "E_s", "calE_s", "ratio",
                  "x0_norm", "noncav", "smallness")

# relative imaginary residue allowed in the E_s pairing before it is an error
PAIRING_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class EnergyReport:
    """One diagnostic row of a run."""

    t: float
    hamiltonian: float
    E_s: float
    calE_s: float
    ratio: float
    x0_norm: float
    noncav: float
    smallness: float

    def csv_row(self) -> str:
        return ",".join(format(getattr(self, c), ".17g") for c in REPORT_COLUMNS)


def csv_header() -> str:
    return ",".join(REPORT_COLUMNS)


def bessel_weight(grid: GridSpec, s: float) -> np.ndarray:
    return (1.0 + grid.abs2_xi) ** (s / 2.0)


def x_norm(field: SpectralField, s: float, k: int, mu: float) -> float:
    """Norm of X^s_{mu^k}; k = 0 gives the plain H^s norm."""
    if s < 0.0 or k < 0:
        raise ParameterDomainError("s and k must be nonnegative")
    grid = field.grid
    weight = (1.0 + grid.abs2_xi) ** s
    if k > 0:
        weight = weight * (1.0 + mu**k * grid.abs2_xi**k)
    return math.sqrt(grid.spectral_l2_sq(field.hat, weight=weight))


def x_norm_state(state: FieldState, s: float, k: int, k_prime: int) -> float:
    """||zeta||_{X^s_{mu^k}} + ||v||_{X^s_{mu^k'}} for a full state."""
    mu = state.params.mu
    vsq = sum(x_norm(c, s, k_prime, mu) ** 2 for c in state.v)
    return x_norm(state.zeta, s, k, mu) + math.sqrt(vsq)


def _mult_dealias(grid: GridSpec, coeff_values: np.ndarray, hat: np.ndarray) -> np.ndarray:
    """Pointwise multiply a spectrum by a real coefficient field, dealiased."""
    return grid.fft(coeff_values * grid.ifft_real(hat)) * grid.dealias_mask


def _pair(grid: GridSpec, f_hat: np.ndarray, g_hat: np.ndarray) -> complex:
    """L2 pairing of two (nominally real) fields from their spectra."""
    return grid.cell_volume / grid.npoints * complex(np.vdot(g_hat, f_hat))


def symmetrizer_apply(state: FieldState, arg_z: np.ndarray,
                      arg_v: tuple[np.ndarray, ...], variant: str):
    """Apply the case's symmetrizer to the argument spectra (arg_z, arg_v).

    The coefficients (zeta, v) come from the state; the argument is the
    (already Bessel-weighted) field the energy pairs against.
    """
    grid = state.grid
    p = state.params
    tab = symbol_table(grid, p)
    gamma, eps, mu = p.gamma, p.epsilon, p.mu
    gg = gamma * (1.0 - gamma)
    omc = tab.one_minus_cmu
    zvals = state.zeta.values
    vvals = [c.values for c in state.v]
    dim = grid.dim

    if variant == VARIANT_BD_EQUAL:
        out_z = gg * omc * arg_z
        for j in range(dim):
            out_z = out_z - eps * _mult_dealias(grid, vvals[j], arg_v[j])
        out_v = []
        for j in range(dim):
            comp = tab.A * arg_v[j] - eps * _mult_dealias(grid, zvals, arg_v[j])
            comp = comp - eps * _mult_dealias(grid, vvals[j], arg_z)
            out_v.append(comp)
        return out_z, tuple(out_v)

    if variant == VARIANT_BD_DISTINCT:
        g = tab.g
        out_z = gg * (gg * omc**2 * g * arg_z)
        for j in range(dim):
            out_z = out_z - gg * eps * g * _mult_dealias(grid, vvals[j], omc * arg_v[j])
        out_v = []
        for j in range(dim):
            omc_arg = omc * arg_v[j]
            comp = gg * (tab.A * omc_arg - eps * _mult_dealias(grid, zvals, omc_arg))
            comp = comp - gg * eps * g * _mult_dealias(grid, vvals[j], omc * arg_z)
            for k in range(dim):
                vv = grid.ifft_real(grid.dealias_mask * grid.fft(vvals[j] * vvals[k]))
                comp = comp + eps**2 * _mult_dealias(grid, vv, (g - 1.0) * arg_v[k])
            out_v.append(comp)
        return out_z, tuple(out_v)

    if variant == VARIANT_B_ZERO:
        if p.b != 0.0:
            raise ParameterDomainError("the b=0 variant requires b = 0 exactly")
        out_z = gg * (gg * omc**2 * arg_z)
        for j in range(dim):
            out_z = out_z - gg * eps * _mult_dealias(grid, vvals[j], omc * arg_v[j])
        out_v = []
        for j in range(dim):
            helm_arg = tab.helmholtz_d * arg_v[j]
            inner = tab.A * helm_arg - eps * _mult_dealias(grid, zvals, helm_arg)
            comp = gg * omc * inner
            comp = comp - gg * eps * _mult_dealias(grid, vvals[j], omc * arg_z)
            for k in range(dim):
                vv = grid.ifft_real(grid.dealias_mask * grid.fft(vvals[j] * vvals[k]))
                lap = -grid.abs2_xi * arg_v[k]
                comp = comp + p.d * eps**2 * mu * _mult_dealias(grid, vv, lap)
            out_v.append(comp)
        return out_z, tuple(out_v)

    raise ParameterDomainError(f"unknown symmetrizer variant {variant!r}")


def energy_Es(state: FieldState, s: float, case: CaseClass | None = None) -> float:
    """Symmetrizer energy (W Lam^s V | S_V Lam^s V)_2 for the state's case.

    W is 1 - b*mu*Lap for the b = d and b != d formulations and
    1 - d*mu*Lap for b = 0 (identity when the coefficient vanishes).
    """
    if case is None:
        case = classify_case(state.params)
    grid = state.grid
    tab = symbol_table(grid, state.params)
    lam = bessel_weight(grid, s)

    arg_z = lam * state.zeta.hat
    arg_v = tuple(lam * c.hat for c in state.v)
    s_z, s_v = symmetrizer_apply(state, arg_z, arg_v, case.variant)

    weight = tab.helmholtz_d if case.variant == VARIANT_B_ZERO else tab.helmholtz_b
    total = _pair(grid, weight * arg_z, s_z)
    for j in range(grid.dim):
        total += _pair(grid, weight * arg_v[j], s_v[j])

    if abs(total.imag) > PAIRING_IMAG_TOL * max(1.0, abs(total)):
        raise ArithmeticError(
            f"energy pairing has imaginary residue {total.imag:.3e} "
            f"relative to {abs(total):.3e}"
        )
    return float(total.real)


def equivalence_ratio(state: FieldState, s: float,
                      case: CaseClass | None = None):
    """(E_s / calE_s, k, k'); ratio is NaN for the zero state."""
    if case is None:
        case = classify_case(state.params)
    cal = calE_s(state, s, case)
    if cal == 0.0:
        return (math.nan, case.k, case.k_prime)
    return (energy_Es(state, s, case) / cal, case.k, case.k_prime)


def calE_s(state: FieldState, s: float, case: CaseClass | None = None) -> float:
    """Reference energy ||zeta||^2_{X^s_{mu^k}} + ||v||^2_{X^s_{mu^k'}}."""
    if case is None:
        case = classify_case(state.params)
    mu = state.params.mu
    out = x_norm(state.zeta, s, case.k, mu) ** 2
    out += sum(x_norm(c, s, case.k_prime, mu) ** 2 for c in state.v)
    return out


def hamiltonian(state: FieldState) -> float:
    """Conserved functional of the equal-coefficient case.

    H = (1/2) integral of (1-gamma)zeta^2 + (1/gamma)(1-eps*zeta)|v|^2
        - (1-gamma)*c*mu*|grad zeta|^2 - (a*mu/gamma)|grad v|^2
        + (1/gamma^2)sqrt(mu/mu2)|sigma^{1/2} v|^2
        + (1/gamma^3)(mu/mu2)|sigma v|^2.
    """
    grid = state.grid
    p = state.params
    tab = symbol_table(grid, p)
    gamma = p.gamma
    zhat = state.zeta.hat
    vhats = [c.hat for c in state.v]

    total = (1.0 - gamma) * grid.spectral_l2_sq(zhat)
    total -= (1.0 - gamma) * p.c * p.mu * grid.spectral_l2_sq(zhat, weight=grid.abs2_xi)
    ratio = p.mu / p.mu2
    for vh in vhats:
        total += grid.spectral_l2_sq(vh) / gamma
        total -= p.a * p.mu / gamma * grid.spectral_l2_sq(vh, weight=grid.abs2_xi)
        total += math.sqrt(ratio) / gamma**2 * grid.spectral_l2_sq(vh, weight=tab.sigma)
        total += ratio / gamma**3 * grid.spectral_l2_sq(vh, weight=tab.sigma**2)

    if p.epsilon != 0.0:
        vsq = sum(c.values**2 for c in state.v)
        vsq_d = grid.ifft_real(grid.dealias_mask * grid.fft(vsq))
        total -= p.epsilon / gamma * grid.integral(state.zeta.values * vsq_d)
    return 0.5 * total


def variational_gradients(state: FieldState):
    """Spectra of dH/dzeta and dH/dv at the state."""
    grid = state.grid
    p = state.params
    tab = symbol_table(grid, p)
    gamma = p.gamma
    mask = grid.dealias_mask

    dz = (1.0 - gamma) * tab.one_minus_cmu * state.zeta.hat
    linear_v = (1.0 / gamma - p.a * p.mu / gamma * grid.abs2_xi
                + math.sqrt(p.mu / p.mu2) / gamma**2 * tab.sigma
                + (p.mu / p.mu2) / gamma**3 * tab.sigma**2)
    dv = [linear_v * c.hat for c in state.v]

    if p.epsilon != 0.0:
        vsq = sum(c.values**2 for c in state.v)
        dz = dz - p.epsilon / (2.0 * gamma) * (grid.fft(vsq) * mask)
        zvals = state.zeta.values
        for j, comp in enumerate(state.v):
            dv[j] = dv[j] - p.epsilon / gamma * (grid.fft(zvals * comp.values) * mask)
    return dz, tuple(dv)


def variational_check(state: FieldState) -> float:
    """Residual of the gradient-flow form of the evolution equations.

    Compares (1 - b*mu*Lap) dt zeta with -div dH/dv and (1 - d*mu*Lap) dt v
    with -grad dH/dzeta; returns the worse relative L2 mismatch.
    """
    grid = state.grid
    p = state.params
    tab = symbol_table(grid, p)
    dz_dt, dv_dt = rhs_hat(state.zeta.hat, tuple(c.hat for c in state.v),
                           grid, p, table=tab)
    gz, gv = variational_gradients(state)

    lhs1 = tab.helmholtz_b * dz_dt
    rhs1 = np.zeros(grid.n, dtype=np.complex128)
    for xi, comp in zip(grid.xi_mesh, gv):
        rhs1 -= 1j * xi * comp

    def rel(a_hat, b_hat):
        na = math.sqrt(grid.spectral_l2_sq(a_hat))
        nb = math.sqrt(grid.spectral_l2_sq(b_hat))
        scale = max(na, nb)
        if scale == 0.0:
            return 0.0
        return math.sqrt(grid.spectral_l2_sq(a_hat - b_hat)) / scale

    worst = rel(lhs1, rhs1)
    for xi, dvj in zip(grid.xi_mesh, dv_dt):
        lhs2 = tab.helmholtz_d * dvj
        rhs2 = -1j * xi * gz
        worst = max(worst, rel(lhs2, rhs2))
    return worst


def hamiltonian_coercivity_form(state: FieldState) -> float:
    """Lower-bound bracket ||zeta||^2 + mu||grad zeta||^2 + ||v||^2
    + 2*mu*(1 - eps*||zeta||^2)||grad v||^2 used to gauge H's positivity."""
    grid = state.grid
    p = state.params
    zhat = state.zeta.hat
    z_l2 = grid.spectral_l2_sq(zhat)
    out = z_l2 + p.mu * grid.spectral_l2_sq(zhat, weight=grid.abs2_xi)
    grad_v = 0.0
    for c in state.v:
        out += grid.spectral_l2_sq(c.hat)
        grad_v += grid.spectral_l2_sq(c.hat, weight=grid.abs2_xi)
    out += 2.0 * p.mu * (1.0 - p.epsilon * z_l2) * grad_v
    return out


def energy_report(state: FieldState, s: float = 0.0,
                  case: CaseClass | None = None) -> EnergyReport:
    """Assemble the standard diagnostic row for one instant."""
    if case is None:
        case = classify_case(state.params)
    p = state.params
    ham = hamiltonian(state)
    es = energy_Es(state, s, case)
    cal = calE_s(state, s, case)
    ratio = es / cal if cal > 0.0 else math.nan
    x0 = x_norm_state(state, 0.0, 1, 1)
    noncav = noncavitation_margin(state).margin
    small = p.epsilon * state.grid.spectral_l2_sq(state.zeta.hat)
    return EnergyReport(t=state.t, hamiltonian=ham, E_s=es, calE_s=cal,
                        ratio=ratio, x0_norm=x0, noncav=noncav, smallness=small)
