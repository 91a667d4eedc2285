"""Reproducible desk-scale studies: lifespan scaling, conservation,
smallness persistence, and energy-equivalence statistics.

Every study is deterministic given (config, seed): sweep points run as
independent jobs (parallelism capped by the BFD_THREADS environment
variable), results are merged in parameter order, and CSV floats are
written with 17 significant digits so re-runs are byte-identical.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .energy import (
    calE_s,
    energy_report,
    equivalence_ratio,
    hamiltonian,
    x_norm_state,
)
from .errors import ConfigError, UnsupportedCaseError
from .evolution import (
    SCHEME_EXPONENTIAL,
    BlowUpSignal,
    SchemeConfig,
    default_dt,
    evolve,
)
from .initial_data import make_initial_state
from .params import ModelParams, classify_case
from .spectral import GridSpec, SpectralField
from .system import FieldState


def fmt(x) -> str:
    return format(float(x), ".17g")


def thread_count() -> int:
    raw = os.environ.get("BFD_THREADS", "1")
    try:
        count = int(raw)
    except ValueError as exc:
        raise ConfigError(f"BFD_THREADS must be an integer, got {raw!r}") from exc
    return max(1, count)


def _run_jobs(jobs):
    """Evaluate callables, in parallel when allowed, preserving order."""
    workers = thread_count()
    if workers == 1 or len(jobs) <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        futures = [pool.submit(job) for job in jobs]
        return [f.result() for f in futures]


@dataclass
class StudyConfig:
    """Resolved settings for one study invocation."""

    kind: str
    params: ModelParams
    grid: GridSpec
    scheme: str = SCHEME_EXPONENTIAL
    dt: float | None = None
    max_t: float = 100.0
    cadence: int = 10
    dealias: bool = True
    profile: str = "gaussian"
    amplitude: float = 0.1
    seed: int = 1234
    width: float | None = None
    mode_k: tuple[int, ...] | None = None
    velocity: str = "right-mover"
    out_dir: str | None = None
    epsilons: tuple[float, ...] = ()
    mus: tuple[float, ...] | None = None
    growth_factor: float = 2.0
    s: float | None = None
    dts: tuple[float, ...] = ()
    num_states: int = 100
    smallness_target: float = 0.25
    case_override: int | None = None

    def monitor_s(self, grid: GridSpec) -> float:
        if self.s is not None:
            return self.s
        return 4.0 if grid.dim == 2 else 3.0

    def manifest_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "model": {
                "gamma": self.params.gamma, "epsilon": self.params.epsilon,
                "mu": self.params.mu, "mu2": self.params.mu2,
                "a": self.params.a, "b": self.params.b,
                "c": self.params.c, "d": self.params.d,
            },
            "grid": {"n": list(self.grid.n), "length": list(self.grid.length)},
            "scheme": {"scheme": self.scheme, "dt": self.dt, "max_t": self.max_t,
                       "cadence": self.cadence, "dealias": self.dealias},
            "initial": {"profile": self.profile, "amplitude": self.amplitude,
                        "seed": self.seed, "width": self.width,
                        "mode_k": None if self.mode_k is None else list(self.mode_k),
                        "velocity": self.velocity},
            "study": {"epsilons": list(self.epsilons),
                      "mus": None if self.mus is None else list(self.mus),
                      "growth_factor": self.growth_factor, "s": self.s,
                      "dts": list(self.dts), "num_states": self.num_states,
                      "smallness_target": self.smallness_target,
                      "case_override": self.case_override},
            "version": __version__,
        }
        return out


def write_manifest(cfg: StudyConfig, extra: dict | None = None) -> Path | None:
    if cfg.out_dir is None:
        return None
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc = cfg.manifest_dict()
    if extra:
        doc.update(extra)
    path = out / f"{cfg.kind}_manifest.json"
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return path


def _write_csv(cfg: StudyConfig, name: str, header: str, rows: list[str]) -> Path | None:
    if cfg.out_dir is None:
        return None
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text("\n".join([header] + rows) + "\n")
    return path


def _sweep_pairs(cfg: StudyConfig):
    if not cfg.epsilons:
        raise ConfigError("study requires a nonempty epsilons list")
    if cfg.mus is None:
        return [(e, e) for e in cfg.epsilons]
    if len(cfg.mus) == len(cfg.epsilons):
        return list(zip(cfg.epsilons, cfg.mus))
    raise ConfigError("mus must be omitted (tied to epsilon) or match epsilons")


# lifespan ------------------------------------------------------------------


@dataclass
class LifespanRecord:
    epsilon: float
    mu: float
    T_obs: float
    product: float
    terminated_by: str


def _lifespan_point(cfg: StudyConfig, eps: float, mu: float) -> LifespanRecord:
    params = cfg.params.replace(epsilon=eps, mu=mu)
    case = classify_case(params, cfg.case_override)
    state = make_initial_state(cfg.grid, params, profile=cfg.profile,
                               amplitude=cfg.amplitude, seed=cfg.seed,
                               width=cfg.width, mode_k=cfg.mode_k,
                               velocity=cfg.velocity)
    s = cfg.monitor_s(cfg.grid)
    initial = x_norm_state(state, s, case.k, case.k_prime)
    threshold = cfg.growth_factor * initial

    def crossed(snap: FieldState) -> bool:
        if initial == 0.0:
            return False
        return x_norm_state(snap, s, case.k, case.k_prime) > threshold

    dt = cfg.dt if cfg.dt is not None else default_dt(state, cfg.scheme)
    scheme = SchemeConfig(dt=dt, max_t=cfg.max_t, scheme=cfg.scheme,
                          cadence=cfg.cadence, dealias=cfg.dealias)
    try:
        summary = evolve(state, scheme, stop_when=crossed)
        if summary.terminated_by == "threshold":
            t_obs = summary.final_state.t
            term = "threshold"
        else:
            t_obs = cfg.max_t
            term = "max_t"
    except BlowUpSignal as sig:
        t_obs = sig.t
        term = "blow-up"
    return LifespanRecord(epsilon=eps, mu=mu, T_obs=t_obs,
                          product=eps * t_obs, terminated_by=term)


def lifespan_study(cfg: StudyConfig) -> list[LifespanRecord]:
    """Observed norm-doubling horizon per epsilon; emits CSV + manifest."""
    pairs = _sweep_pairs(cfg)
    records = _run_jobs([
        (lambda e=e, m=m: _lifespan_point(cfg, e, m)) for e, m in pairs
    ])
    rows = [",".join([fmt(r.epsilon), fmt(r.mu), fmt(r.T_obs), fmt(r.product),
                      r.terminated_by]) for r in records]
    _write_csv(cfg, "lifespan.csv", "epsilon,mu,T_obs,product,terminated_by", rows)
    write_manifest(cfg)
    return records


# conservation --------------------------------------------------------------


@dataclass
class ConservationResult:
    dts: tuple[float, ...]
    drifts: tuple[float, ...]
    pair_orders: tuple[float, ...]
    order_fit: float


def _drift_for_dt(cfg: StudyConfig, dt: float) -> float:
    params = cfg.params
    state = make_initial_state(cfg.grid, params, profile=cfg.profile,
                               amplitude=cfg.amplitude, seed=cfg.seed,
                               width=cfg.width, mode_k=cfg.mode_k,
                               velocity=cfg.velocity)
    h0 = hamiltonian(state)
    worst = 0.0

    def watch(snap: FieldState):
        nonlocal worst
        h = hamiltonian(snap)
        denom = abs(h0) if h0 != 0.0 else 1.0
        worst = max(worst, abs(h - h0) / denom)

    scheme = SchemeConfig(dt=dt, max_t=cfg.max_t, scheme=cfg.scheme,
                          cadence=cfg.cadence, dealias=cfg.dealias)
    evolve(state, scheme, monitors=(watch,))
    return worst


def conservation_study(cfg: StudyConfig) -> ConservationResult:
    """Hamiltonian drift over a dt-halving sequence, with order fit."""
    if cfg.params.b != cfg.params.d:
        raise UnsupportedCaseError(
            "conservation study requires b = d "
            f"(got b={cfg.params.b}, d={cfg.params.d})"
        )
    dts = cfg.dts if cfg.dts else ((cfg.dt,) if cfg.dt else ())
    if not dts:
        raise ConfigError("conservation study requires a dts list")
    drifts = _run_jobs([(lambda h=h: _drift_for_dt(cfg, h)) for h in dts])
    pair_orders = [math.nan]
    for i in range(1, len(dts)):
        ratio_dt = dts[i - 1] / dts[i]
        if drifts[i] > 0.0 and ratio_dt > 1.0:
            pair_orders.append(math.log(drifts[i - 1] / drifts[i]) / math.log(ratio_dt))
        else:
            pair_orders.append(math.nan)
    if len(dts) >= 2 and all(d > 0.0 for d in drifts):
        slope = np.polyfit(np.log(np.asarray(dts)), np.log(np.asarray(drifts)), 1)[0]
        order_fit = float(slope)
    else:
        order_fit = math.nan
    rows = [",".join([fmt(h), fmt(dr), fmt(po)])
            for h, dr, po in zip(dts, drifts, pair_orders)]
    _write_csv(cfg, "conservation.csv", "dt,drift,order_fit", rows)
    write_manifest(cfg)
    return ConservationResult(dts=tuple(dts), drifts=tuple(drifts),
                              pair_orders=tuple(pair_orders), order_fit=order_fit)


# smallness -----------------------------------------------------------------


@dataclass
class SmallnessReport:
    epsilon: float
    target: float
    initial_smallness: float
    initial_x0: float
    max_smallness: float
    max_x0: float
    min_noncav: float
    precondition_ok: bool
    invariant_held: bool
    terminated_by: str


def smallness_check(cfg: StudyConfig) -> SmallnessReport:
    """Long-horizon run monitoring eps*||zeta||^2_{L2} against 1/2.

    mu is tied to epsilon.  Data are rescaled so the initial smallness
    equals cfg.smallness_target (1/4 by default); a target >= 1/2 is
    reported as a violated precondition but the run still executes.
    """
    violations = []
    if not (cfg.params.b == cfg.params.d and cfg.params.b > 0.0):
        violations.append(f"b = d > 0 (got b={cfg.params.b}, d={cfg.params.d})")
    if not cfg.params.c < 0.0:
        violations.append(f"c < 0 (got c={cfg.params.c})")
    if violations:
        raise UnsupportedCaseError(
            "smallness study requires " + "; ".join(violations))
    eps = cfg.params.epsilon
    if eps <= 0.0:
        raise ConfigError("smallness study requires epsilon > 0")
    params = cfg.params.replace(mu=eps)
    classify_case(params, cfg.case_override)
    state = make_initial_state(cfg.grid, params, profile=cfg.profile,
                               amplitude=cfg.amplitude, seed=cfg.seed,
                               width=cfg.width, mode_k=cfg.mode_k,
                               velocity=cfg.velocity)
    grid = cfg.grid
    z_sq = grid.spectral_l2_sq(state.zeta.hat)
    if z_sq > 0.0:
        # Rescale so the initial smallness hits the target; zero data are
        # left alone (the invariant then holds trivially for all time).
        scale = math.sqrt(cfg.smallness_target / (eps * z_sq))
        state = FieldState(t=state.t, zeta=scale * state.zeta,
                           v=tuple(scale * c for c in state.v), params=params)
    initial_small = eps * grid.spectral_l2_sq(state.zeta.hat)

    rows: list[str] = []
    tracker = {"max_small": 0.0, "max_x0": 0.0, "min_noncav": math.inf}
    x0_initial = x_norm_state(state, 0.0, 1, 1)

    def watch(snap: FieldState):
        rep = energy_report(snap, s=0.0)
        tracker["max_small"] = max(tracker["max_small"], rep.smallness)
        tracker["max_x0"] = max(tracker["max_x0"], rep.x0_norm)
        tracker["min_noncav"] = min(tracker["min_noncav"], rep.noncav)
        rows.append(",".join([fmt(snap.t), fmt(rep.smallness), fmt(rep.noncav),
                              fmt(rep.hamiltonian), fmt(rep.x0_norm)]))

    dt = cfg.dt if cfg.dt is not None else default_dt(state, cfg.scheme)
    scheme = SchemeConfig(dt=dt, max_t=cfg.max_t, scheme=cfg.scheme,
                          cadence=cfg.cadence, dealias=cfg.dealias)
    terminated = "max_t"
    try:
        evolve(state, scheme, monitors=(watch,))
    except BlowUpSignal:
        terminated = "blow-up"

    _write_csv(cfg, "smallness.csv", "t,smallness,noncav,hamiltonian,x0_norm", rows)
    report = SmallnessReport(
        epsilon=eps, target=cfg.smallness_target,
        initial_smallness=initial_small, initial_x0=x0_initial,
        max_smallness=tracker["max_small"], max_x0=tracker["max_x0"],
        min_noncav=tracker["min_noncav"],
        precondition_ok=initial_small < 0.5,
        invariant_held=tracker["max_small"] < 0.5,
        terminated_by=terminated,
    )
    write_manifest(cfg, extra={"report": {
        "precondition_ok": report.precondition_ok,
        "invariant_held": report.invariant_held,
        "max_smallness": report.max_smallness,
        "max_x0": report.max_x0,
        "terminated_by": report.terminated_by,
    }})
    return report


# equivalence ---------------------------------------------------------------


@dataclass
class EquivalenceRecord:
    epsilon: float
    mu: float
    case_id: int
    ratio_min: float
    ratio_max: float


def _equivalence_point(cfg: StudyConfig, eps: float, mu: float) -> EquivalenceRecord:
    params = cfg.params.replace(epsilon=eps, mu=mu)
    case = classify_case(params, cfg.case_override)
    s = cfg.monitor_s(cfg.grid)
    lo, hi = math.inf, -math.inf
    for i in range(cfg.num_states):
        state = make_initial_state(cfg.grid, params, profile="random_bandlimited",
                                   amplitude=cfg.amplitude,
                                   seed=cfg.seed + 1000 * i, velocity="random")
        # Spread the mixture from zeta-dominant to velocity-dominant states;
        # the observed ratio band is then anchored by the per-component
        # extremes rather than by whichever balance the draw happened to hit.
        mix = np.random.default_rng(cfg.seed + 1000 * i + 7)
        weight = 10.0 ** mix.uniform(-2.0, 2.0)
        state = FieldState(
            t=state.t,
            zeta=state.zeta,
            v=tuple(SpectralField(state.grid, hat=weight * vj.hat)
                    for vj in state.v),
            params=params,
        )
        if calE_s(state, s, case) == 0.0:
            continue
        ratio, _, _ = equivalence_ratio(state, s, case)
        lo = min(lo, ratio)
        hi = max(hi, ratio)
    return EquivalenceRecord(epsilon=eps, mu=mu, case_id=case.case_id,
                             ratio_min=lo, ratio_max=hi)


def equivalence_spread_monotone(records: list[EquivalenceRecord],
                                tol: float = 0.05) -> bool:
    """Check that the ratio spread stabilizes as (epsilon, mu) shrink.

    For every pair of records ordered componentwise (q no larger than r in
    both epsilon and mu), the max/min spread at q must not exceed the
    spread at r by more than the noise tolerance.  Records whose bounds
    are not finite (all states degenerate) are ignored.
    """
    finite = [r for r in records
              if math.isfinite(r.ratio_min) and math.isfinite(r.ratio_max)
              and r.ratio_min > 0.0]
    for r in finite:
        spread_r = r.ratio_max / r.ratio_min
        for q in finite:
            if q is r:
                continue
            if (q.epsilon <= r.epsilon and q.mu <= r.mu
                    and (q.epsilon < r.epsilon or q.mu < r.mu)):
                if q.ratio_max / q.ratio_min > spread_r * (1.0 + tol):
                    return False
    return True


def equivalence_study(cfg: StudyConfig) -> list[EquivalenceRecord]:
    """Min/max of E_s/calE_s over random states per (epsilon, mu) point.

    When mus is given the sweep is the full Cartesian product, ordered by
    epsilon first (descending lists recommended).  The manifest records
    whether the spread stabilized as the pair shrank.
    """
    if not cfg.epsilons:
        raise ConfigError("equivalence study requires a nonempty epsilons list")
    if cfg.mus is None:
        pairs = [(e, e) for e in cfg.epsilons]
    else:
        pairs = [(e, m) for e in cfg.epsilons for m in cfg.mus]
    records = _run_jobs([
        (lambda e=e, m=m: _equivalence_point(cfg, e, m)) for e, m in pairs
    ])
    rows = [",".join([fmt(r.epsilon), fmt(r.mu), str(r.case_id),
                      fmt(r.ratio_min), fmt(r.ratio_max)]) for r in records]
    _write_csv(cfg, "equivalence.csv", "epsilon,mu,case,ratio_min,ratio_max", rows)
    write_manifest(cfg, extra={
        "spread_monotone": equivalence_spread_monotone(records),
    })
    return records
