"""Time integration: exact-phase exponential stepping and classical RK4.

For b = d the linear flow diagonalizes exactly: W = |D|^{-1} curl v is
frozen, and the dispersive movers Z+- = zeta +- sqrt(omega1/omega2)
(1/(i|D|)) div v obey  dt Z+- = -(+-) i Omega Z+- + f+- with Omega(xi) =
|xi| sqrt(omega1 omega2).  The exponential path applies an
integrating-factor RK4 whose linear part is the exact phase, so eps = 0
evolution is exact to roundoff.  The classical path runs RK4 on the
Helmholtz-inverted primitive equations and works for every coefficient
case.  The xi = 0 modes decouple, are stored separately on the diagonal
path, and are conserved bitwise on both paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .energy import x_norm_state
from .errors import ParameterDomainError, UnsupportedCaseError
from .params import ModelParams
from .spectral import GridSpec, SpectralField
from .symbols import SymbolTable, symbol_table
from .system import FieldState, rhs_hat

BLOWUP_NORM = 1e6

SCHEME_EXPONENTIAL = "exponential"
SCHEME_CLASSICAL = "classical"


@dataclass
class SchemeConfig:
    dt: float
    max_t: float
    scheme: str = SCHEME_EXPONENTIAL
    cadence: int = 1
    dealias: bool = True

    def __post_init__(self):
        if self.scheme not in (SCHEME_EXPONENTIAL, SCHEME_CLASSICAL):
            raise ParameterDomainError(f"unknown scheme {self.scheme!r}")
        if not self.dt > 0.0:
            raise ParameterDomainError(f"dt must be > 0, got {self.dt}")
        if self.cadence < 1:
            raise ParameterDomainError("cadence must be >= 1 step")


class BlowUpSignal(RuntimeError):
    """Raised when the solution leaves the finite regime."""

    def __init__(self, t: float, norm: float, steps: int, events: list):
        super().__init__(f"blow-up at t={t:.6g} (X0 norm {norm:.3e})")
        self.t = t
        self.norm = norm
        self.steps = steps
        self.events = events


@dataclass
class DiagState:
    """State in the diagonal variables of the b = d case.

    Spectra store 0 at xi = 0; the (conserved) means live in zero_mode as
    (zeta_hat(0), (v_hat(0), ...)).  W_hat is None in one dimension, where
    every field is a gradient.
    """

    t: float
    Zp_hat: np.ndarray
    Zm_hat: np.ndarray
    W_hat: np.ndarray | None
    zero_mode: tuple
    grid: GridSpec
    params: ModelParams

    def copy(self) -> "DiagState":
        return DiagState(t=self.t, Zp_hat=self.Zp_hat.copy(),
                         Zm_hat=self.Zm_hat.copy(),
                         W_hat=None if self.W_hat is None else self.W_hat.copy(),
                         zero_mode=self.zero_mode, grid=self.grid,
                         params=self.params)


def _require_diagonalizable(params: ModelParams):
    if params.b != params.d:
        raise UnsupportedCaseError(
            f"diagonalization requires b = d, got b={params.b}, d={params.d}"
        )


def diagonalize(state: FieldState) -> DiagState:
    """Split the state into frozen-rotational and dispersive-mover spectra."""
    _require_diagonalizable(state.params)
    grid = state.grid
    tab = symbol_table(grid, state.params)
    origin = (0,) * grid.dim

    zhat = state.zeta.hat
    vhats = [c.hat for c in state.v]
    proj = np.zeros(grid.n, dtype=np.complex128)
    for u, vh in zip(grid.unit_xi, vhats):
        proj += u * vh
    r = tab.ratio_sqrt
    Zp = zhat + r * proj
    Zm = zhat - r * proj

    if grid.dim == 2:
        u1, u2 = grid.unit_xi
        W = 1j * (u1 * vhats[1] - u2 * vhats[0])
        W[origin] = 0.0
    else:
        W = None

    zero_mode = (complex(zhat[origin]), tuple(complex(vh[origin]) for vh in vhats))
    Zp = Zp.copy()
    Zm = Zm.copy()
    Zp[origin] = 0.0
    Zm[origin] = 0.0
    return DiagState(t=state.t, Zp_hat=Zp, Zm_hat=Zm, W_hat=W,
                     zero_mode=zero_mode, grid=grid, params=state.params)


def _reconstruct_hats(diag: DiagState, tab: SymbolTable):
    """Primitive spectra (zeta_hat, v_hats) from diagonal variables."""
    grid = diag.grid
    origin = (0,) * grid.dim
    zhat = 0.5 * (diag.Zp_hat + diag.Zm_hat)
    proj = 0.5 * (diag.Zp_hat - diag.Zm_hat) / tab.ratio_sqrt
    vhats = [u * proj for u in grid.unit_xi]
    if grid.dim == 2 and diag.W_hat is not None:
        u1, u2 = grid.unit_xi
        vhats[0] = vhats[0] + 1j * u2 * diag.W_hat
        vhats[1] = vhats[1] - 1j * u1 * diag.W_hat
    zhat[origin] = diag.zero_mode[0]
    for vh, v0 in zip(vhats, diag.zero_mode[1]):
        vh[origin] = v0
    return zhat, vhats


def undiagonalize(diag: DiagState) -> FieldState:
    """Rebuild the primitive state; the output fields are real-valued."""
    tab = symbol_table(diag.grid, diag.params)
    zhat, vhats = _reconstruct_hats(diag, tab)
    return FieldState(t=diag.t,
                      zeta=SpectralField(diag.grid, hat=zhat),
                      v=tuple(SpectralField(diag.grid, hat=vh) for vh in vhats),
                      params=diag.params)


def nonlinear_f_pm(diag: DiagState, use_dealias: bool = True):
    """Quadratic forcing spectra (f+_hat, f-_hat) of the mover equations.

    f+- = (eps/gamma)(1 - b*mu*Lap)^{-1} div(zeta v)
          +- (eps/(2*gamma)) sqrt(omega1/omega2) i|xi|
             (1 - b*mu*Lap)^{-1} (|v|^2).
    Both terms carry a factor xi, so the xi = 0 component is exactly 0.
    """
    grid = diag.grid
    p = diag.params
    if p.epsilon == 0.0:
        zero = np.zeros(grid.n, dtype=np.complex128)
        return zero, zero.copy()
    tab = symbol_table(grid, p)
    zhat, vhats = _reconstruct_hats(diag, tab)
    zr = grid.ifft_real(zhat)
    vr = [grid.ifft_real(vh) for vh in vhats]
    mask = grid.dealias_mask if use_dealias else None

    div_zv = np.zeros(grid.n, dtype=np.complex128)
    for xi, comp in zip(grid.xi_mesh, vr):
        prod = grid.fft(zr * comp)
        if mask is not None:
            prod = prod * mask
        div_zv += 1j * xi * prod
    vsq = grid.fft(sum(comp * comp for comp in vr))
    if mask is not None:
        vsq = vsq * mask

    eps, gamma = p.epsilon, p.gamma
    common = eps / gamma * div_zv / tab.helmholtz_b
    split = (eps / (2.0 * gamma) * tab.ratio_sqrt * 1j * grid.abs_xi
             * vsq / tab.helmholtz_b)
    return common + split, common - split


def step_exponential(diag: DiagState, dt: float, use_dealias: bool = True) -> DiagState:
    """One integrating-factor RK4 step in the diagonal variables.

    The linear phase e^{-+ i dt Omega} is applied exactly; W_hat and the
    zero mode are carried through untouched.
    """
    tab = symbol_table(diag.grid, diag.params)
    Om = tab.Omega
    ep_h = np.exp(-0.5j * dt * Om)
    em_h = np.conj(ep_h)
    ep_f = ep_h * ep_h
    em_f = np.conj(ep_f)

    def nl(t, Zp, Zm):
        probe = DiagState(t=t, Zp_hat=Zp, Zm_hat=Zm, W_hat=diag.W_hat,
                          zero_mode=diag.zero_mode, grid=diag.grid,
                          params=diag.params)
        return nonlinear_f_pm(probe, use_dealias=use_dealias)

    t0 = diag.t
    Zp0, Zm0 = diag.Zp_hat, diag.Zm_hat
    h = dt

    k1p, k1m = nl(t0, Zp0, Zm0)
    k2p, k2m = nl(t0 + h / 2, ep_h * (Zp0 + h / 2 * k1p), em_h * (Zm0 + h / 2 * k1m))
    k3p, k3m = nl(t0 + h / 2, ep_h * Zp0 + h / 2 * k2p, em_h * Zm0 + h / 2 * k2m)
    k4p, k4m = nl(t0 + h, ep_f * Zp0 + h * ep_h * k3p, em_f * Zm0 + h * em_h * k3m)

    Zp1 = ep_f * Zp0 + h / 6 * (ep_f * k1p + 2.0 * ep_h * (k2p + k3p) + k4p)
    Zm1 = em_f * Zm0 + h / 6 * (em_f * k1m + 2.0 * em_h * (k2m + k3m) + k4m)

    return DiagState(t=t0 + dt, Zp_hat=Zp1, Zm_hat=Zm1, W_hat=diag.W_hat,
                     zero_mode=diag.zero_mode, grid=diag.grid, params=diag.params)


def step_classical(state: FieldState, dt: float, use_dealias: bool = True) -> FieldState:
    """One RK4 step on the Helmholtz-inverted primitive equations."""
    grid = state.grid
    p = state.params
    tab = symbol_table(grid, p)
    z0 = state.zeta.hat
    v0 = tuple(c.hat for c in state.v)

    def f(zh, vh):
        return rhs_hat(zh, vh, grid, p, table=tab, use_dealias=use_dealias)

    k1z, k1v = f(z0, v0)
    k2z, k2v = f(z0 + dt / 2 * k1z, tuple(a + dt / 2 * b for a, b in zip(v0, k1v)))
    k3z, k3v = f(z0 + dt / 2 * k2z, tuple(a + dt / 2 * b for a, b in zip(v0, k2v)))
    k4z, k4v = f(z0 + dt * k3z, tuple(a + dt * b for a, b in zip(v0, k3v)))

    z1 = z0 + dt / 6 * (k1z + 2 * k2z + 2 * k3z + k4z)
    v1 = tuple(a + dt / 6 * (b1 + 2 * b2 + 2 * b3 + b4)
               for a, b1, b2, b3, b4 in zip(v0, k1v, k2v, k3v, k4v))
    return FieldState(t=state.t + dt,
                      zeta=SpectralField(grid, hat=z1),
                      v=tuple(SpectralField(grid, hat=h) for h in v1),
                      params=p)


def step(state, cfg: SchemeConfig):
    """Advance one step; accepts FieldState or DiagState per the scheme."""
    if cfg.scheme == SCHEME_EXPONENTIAL:
        diag = state if isinstance(state, DiagState) else diagonalize(state)
        return step_exponential(diag, cfg.dt, use_dealias=cfg.dealias)
    if isinstance(state, DiagState):
        state = undiagonalize(state)
    return step_classical(state, cfg.dt, use_dealias=cfg.dealias)


def default_dt(state: FieldState, scheme: str = SCHEME_EXPONENTIAL) -> float:
    """Advective CFL guess: 0.9*dx/(eps*max|v|/gamma + 1); the classical
    scheme is additionally capped at 2.8/Omega_max for stability of RK4 on
    the imaginary axis."""
    grid = state.grid
    p = state.params
    vmag = np.zeros(grid.n)
    for c in state.v:
        vmag += c.values**2
    vmax = float(np.sqrt(np.max(vmag)))
    dt = 0.9 * min(grid.dx) / (p.epsilon * vmax / p.gamma + 1.0)
    if scheme == SCHEME_CLASSICAL:
        om_max = float(np.max(symbol_table(grid, p).Omega))
        if om_max > 0.0:
            dt = min(dt, 2.8 / om_max)
    return dt


@dataclass
class EvolveSummary:
    final_state: FieldState
    steps: int
    events: list = field(default_factory=list)
    terminated_by: str = "max_t"


def evolve(state: FieldState, cfg: SchemeConfig,
           monitors: Sequence[Callable[[FieldState], None]] = (),
           stop_when: Callable[[FieldState], bool] | None = None) -> EvolveSummary:
    """March to cfg.max_t, invoking monitors every cfg.cadence steps.

    Monitors receive immutable snapshots (on the exponential path the state
    is reconstructed for them).  Raises BlowUpSignal when a non-finite
    value appears or the X^0_mu norm passes the blow-up threshold; the
    signal carries t, the norm, the step count, and the event log.  An
    optional stop_when predicate ends the run early with
    terminated_by="threshold".  The event log records exceptional
    happenings only (blow-up, threshold); an uneventful run returns an
    empty log.
    """
    exponential = cfg.scheme == SCHEME_EXPONENTIAL
    if exponential:
        current = diagonalize(state)
    else:
        current = state

    t0 = state.t
    n_steps = max(0, int(round((cfg.max_t - t0) / cfg.dt)))
    events: list[dict] = []

    def snapshot():
        return undiagonalize(current) if exponential else current

    def norm_of(snap: FieldState) -> float:
        return x_norm_state(snap, 0.0, 1, 1)

    def check_finite(snap: FieldState, steps_done: int) -> float:
        if not snap.is_finite():
            events.append({"event": "blow-up", "t": snap.t, "norm": float("inf")})
            raise BlowUpSignal(snap.t, float("inf"), steps_done, events)
        norm = norm_of(snap)
        if norm > BLOWUP_NORM:
            events.append({"event": "blow-up", "t": snap.t, "norm": norm})
            raise BlowUpSignal(snap.t, norm, steps_done, events)
        return norm

    def crossed(snap: FieldState, norm: float) -> bool:
        if stop_when is not None and stop_when(snap):
            events.append({"event": "threshold", "t": snap.t, "norm": norm})
            return True
        return False

    snap = snapshot()
    norm = check_finite(snap, 0)
    for mon in monitors:
        mon(snap)
    if crossed(snap, norm):
        return EvolveSummary(final_state=snap, steps=0, events=events,
                             terminated_by="threshold")

    for k in range(1, n_steps + 1):
        if exponential:
            current = step_exponential(current, cfg.dt, use_dealias=cfg.dealias)
        else:
            current = step_classical(current, cfg.dt, use_dealias=cfg.dealias)
        current.t = t0 + k * cfg.dt
        if k % cfg.cadence == 0 or k == n_steps:
            snap = snapshot()
            norm = check_finite(snap, k)
            for mon in monitors:
                mon(snap)
            if crossed(snap, norm):
                return EvolveSummary(final_state=snap, steps=k, events=events,
                                     terminated_by="threshold")

    return EvolveSummary(final_state=snap, steps=n_steps, events=events,
                         terminated_by="max_t")
