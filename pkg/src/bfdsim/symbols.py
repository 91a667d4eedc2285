"""Fourier multipliers of the linearized system.

sigma(xi) = sqrt(mu2)*|xi|*coth(sqrt(mu2)*|xi|) is the full-dispersion
symbol; it is evaluated through the overflow-safe rewriting
sigma = s + 2*s/(exp(2*s) - 1) with s = sqrt(mu2)*|xi|, which tends to 1 as
s -> 0 and to s as s -> inf.  The combined symbol

    A(xi) = 1 - a*mu*|xi|^2 + (1/gamma)*sqrt(mu/mu2)*sigma
              + (1/gamma^2)*(mu/mu2)*sigma^2

drives the surface equation, and the linear modes travel with frequencies
Omega(xi) = |xi|*sqrt(omega1*omega2) where

    omega1 = (1/gamma)*A(xi)/(1 + b*mu*|xi|^2),
    omega2 = (1 - gamma)*(1 - c*mu*|xi|^2)/(1 + b*mu*|xi|^2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .params import ModelParams
from .spectral import GridSpec

# beyond this 2*s, exp(2*s) overflows double precision; coth is 1 to machine
# precision long before, so the asymptote is exact there
_EXP_CUTOFF = 700.0


def sigma_of(s: np.ndarray) -> np.ndarray:
    """s*coth(s) evaluated stably for s >= 0, with value 1 at s = 0."""
    s = np.asarray(s, dtype=np.float64)
    out = np.empty_like(s)
    small = 2.0 * s <= _EXP_CUTOFF
    with np.errstate(divide="ignore", invalid="ignore"):
        out[small] = s[small] + 2.0 * s[small] / np.expm1(2.0 * s[small])
    out[~small] = s[~small]
    out[s == 0.0] = 1.0
    return out


@dataclass(eq=False)
class SymbolTable:
    """Multiplier arrays over one grid for one parameter set."""

    grid: GridSpec
    params: ModelParams
    sigma: np.ndarray = field(repr=False)
    A: np.ndarray = field(repr=False)
    g: np.ndarray = field(repr=False)
    omega1: np.ndarray = field(repr=False)
    omega2: np.ndarray = field(repr=False)
    lambda_plus: np.ndarray = field(repr=False)
    helmholtz_b: np.ndarray = field(repr=False)
    helmholtz_d: np.ndarray = field(repr=False)
    one_minus_cmu: np.ndarray = field(repr=False)

    @property
    def Omega(self) -> np.ndarray:
        """Dispersion relation |xi|*sqrt(omega1*omega2) = Im lambda_plus."""
        return self.lambda_plus.imag

    @property
    def ratio_sqrt(self) -> np.ndarray:
        """sqrt(omega1/omega2), the mode-splitting impedance."""
        return np.sqrt(self.omega1 / self.omega2)

    @property
    def lambda_minus(self) -> np.ndarray:
        return np.conj(self.lambda_plus)


@lru_cache(maxsize=64)
def symbol_table(grid: GridSpec, params: ModelParams) -> SymbolTable:
    """Build (or fetch the cached) symbol table for a grid/parameter pair."""
    mu, mu2, gamma = params.mu, params.mu2, params.gamma
    abs_xi = grid.abs_xi
    abs2 = grid.abs2_xi

    sig = sigma_of(np.sqrt(mu2) * abs_xi)
    ratio = mu / mu2
    A = (1.0 - params.a * mu * abs2
         + np.sqrt(ratio) / gamma * sig
         + ratio / gamma**2 * sig**2)
    helm_b = 1.0 + params.b * mu * abs2
    helm_d = 1.0 + params.d * mu * abs2
    one_minus_cmu = 1.0 - params.c * mu * abs2
    g = helm_b / helm_d
    omega1 = A / (gamma * helm_b)
    omega2 = (1.0 - gamma) * one_minus_cmu / helm_b
    lam = 1j * abs_xi * np.sqrt(omega1 * omega2)

    return SymbolTable(grid=grid, params=params, sigma=sig, A=A, g=g,
                       omega1=omega1, omega2=omega2, lambda_plus=lam,
                       helmholtz_b=helm_b, helmholtz_d=helm_d,
                       one_minus_cmu=one_minus_cmu)
