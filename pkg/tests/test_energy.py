"""Tests for norms, symmetrizer energies, and the conserved functional."""

import math

import numpy as np
import pytest

from bfdsim import (
    FieldState,
    GridSpec,
    ModelParams,
    ParameterDomainError,
    SpectralField,
    classify_case,
    energy_Es,
    energy_report,
    equivalence_ratio,
    hamiltonian,
    variational_check,
    x_norm,
)
from bfdsim.energy import (
    REPORT_COLUMNS,
    bessel_weight,
    calE_s,
    csv_header,
    hamiltonian_coercivity_form,
    variational_gradients,
    x_norm_state,
)
from bfdsim.spectral import TWO_PI
from bfdsim.symbols import symbol_table


def _params(**kw):
    base = dict(gamma=0.9, epsilon=0.1, mu=0.1, mu2=0.1,
                a=0.0, b=5.0 / 24.0, c=-1.0 / 12.0, d=5.0 / 24.0)
    base.update(kw)
    return ModelParams(**base)


def _random_state(grid, params, seed, scale=0.1):
    rng = np.random.default_rng(seed)
    band = 1.0 / (1.0 + grid.abs2_xi) ** 2

    def field():
        hat = grid.fft(rng.standard_normal(grid.n)) * band
        f = SpectralField(grid, real=grid.ifft_real(hat))
        peak = np.max(np.abs(f.values))
        return (scale / peak) * f if peak > 0 else f

    return FieldState(t=0.0, zeta=field(),
                      v=tuple(field() for _ in range(grid.dim)), params=params)


# ---------------------------------------------------------------------------
# Weighted norms
# ---------------------------------------------------------------------------

def test_x_norm_single_mode_closed_forms():
    g = GridSpec.square(32, TWO_PI, dim=2)
    u = SpectralField.from_real(g, np.cos(g.x_mesh[0]))
    two_pi_sq = 2.0 * np.pi**2

    assert x_norm(u, 0.0, 0, 0.1) ** 2 == pytest.approx(two_pi_sq, rel=1e-12)
    assert x_norm(u, 0.0, 1, 0.04) ** 2 == pytest.approx(
        two_pi_sq * 1.04, rel=1e-12)
    assert x_norm(u, 2.0, 0, 0.1) ** 2 == pytest.approx(
        4.0 * two_pi_sq, rel=1e-12)
    assert x_norm(u, 1.0, 2, 0.3) ** 2 == pytest.approx(
        2.0 * (1 + 0.3**2) * two_pi_sq, rel=1e-12)


def test_x_norm_zero_field():
    g = GridSpec.square(8, TWO_PI, dim=1)
    assert x_norm(SpectralField.zeros(g), 3.0, 2, 0.1) == 0.0


def test_x_norm_rejects_negative_orders():
    g = GridSpec.square(8, TWO_PI, dim=1)
    u = SpectralField.zeros(g)
    with pytest.raises(ParameterDomainError):
        x_norm(u, -1.0, 0, 0.1)
    with pytest.raises(ParameterDomainError):
        x_norm(u, 0.0, -1, 0.1)


def test_x_norm_state_combines_components():
    g = GridSpec.square(16, TWO_PI, dim=2)
    p = _params(mu=0.25)
    x = g.x_mesh[0]
    state = FieldState.from_arrays(g, p, np.cos(x),
                                   (np.cos(x), 2.0 * np.cos(x)))
    got = x_norm_state(state, 0.0, 1, 1)
    single = math.sqrt(2.0 * np.pi**2 * 1.25)
    assert got == pytest.approx(single + math.sqrt(5.0) * single, rel=1e-12)


def test_bessel_weight_formula():
    g = GridSpec.square(8, TWO_PI, dim=2)
    np.testing.assert_allclose(bessel_weight(g, 3.0),
                               (1.0 + g.abs2_xi) ** 1.5, rtol=1e-15)


# ---------------------------------------------------------------------------
# Hamiltonian: closed forms
# ---------------------------------------------------------------------------

def test_hamiltonian_zero_state():
    g = GridSpec.square(8, TWO_PI, dim=2)
    state = FieldState.from_arrays(g, _params(), np.zeros(g.n),
                                   (np.zeros(g.n), np.zeros(g.n)))
    assert hamiltonian(state) == 0.0


def test_hamiltonian_surface_only():
    """zeta = cos(x), v = 0 on the 2-d torus: the quadratic surface terms."""
    g = GridSpec.square(32, TWO_PI, dim=2)
    gamma, c, mu = 0.5, -1.0 / 6.0, 0.04
    p = _params(gamma=gamma, c=c, mu=mu, mu2=mu, b=0.2, d=0.2)
    state = FieldState.from_arrays(g, p, np.cos(g.x_mesh[0]),
                                   (np.zeros(g.n), np.zeros(g.n)))
    expect = 0.5 * (1 - gamma) * (1 + abs(c) * mu) * 2.0 * np.pi**2
    assert hamiltonian(state) == pytest.approx(expect, rel=1e-12)


def test_hamiltonian_velocity_only():
    """zeta = 0, v = (cos(x), 0): kinetic terms with the dispersive weight."""
    g = GridSpec.square(32, TWO_PI, dim=2)
    gamma, a, mu, mu2 = 0.5, -0.1, 0.04, 0.25
    p = _params(gamma=gamma, a=a, mu=mu, mu2=mu2, b=0.2, d=0.2, c=-0.05)
    state = FieldState.from_arrays(g, p, np.zeros(g.n),
                                   (np.cos(g.x_mesh[0]), np.zeros(g.n)))
    s = math.sqrt(mu2)
    sig1 = s * math.cosh(s) / math.sinh(s)  # sigma at |xi| = 1
    bracket = (1 / gamma + abs(a) * mu / gamma
               + math.sqrt(mu / mu2) / gamma**2 * sig1
               + (mu / mu2) / gamma**3 * sig1**2)
    expect = 0.5 * bracket * 2.0 * np.pi**2
    assert hamiltonian(state) == pytest.approx(expect, rel=1e-12)


def test_hamiltonian_cubic_term():
    """zeta = alpha*cos(2x), v = beta*cos(x) in 1-d: the only cubic
    contribution is -(eps/2gamma) * alpha*beta^2 * pi/2 * 2."""
    g = GridSpec.square(64, TWO_PI, dim=1)
    gamma, a, c, mu, mu2, eps = 0.5, -0.1, -0.05, 0.04, 0.25, 0.3
    p = ModelParams(gamma=gamma, epsilon=eps, mu=mu, mu2=mu2,
                    a=a, b=0.2, c=c, d=0.2)
    alpha, beta = 0.2, 0.3
    x = g.x_mesh[0]
    state = FieldState.from_arrays(g, p, alpha * np.cos(2 * x),
                                   (beta * np.cos(x),))

    s = math.sqrt(mu2)
    sig1 = s * math.cosh(s) / math.sinh(s)
    quad_z = 0.5 * (1 - gamma) * (alpha**2 * np.pi
                                  + abs(c) * mu * 4 * alpha**2 * np.pi)
    quad_v = 0.5 * beta**2 * np.pi * (1 / gamma + abs(a) * mu / gamma
                                      + math.sqrt(mu / mu2) / gamma**2 * sig1
                                      + (mu / mu2) / gamma**3 * sig1**2)
    # integral of cos(2x)cos^2(x) over one period is pi/2
    cubic = -0.5 * eps / gamma * alpha * beta**2 * (np.pi / 2.0)
    assert hamiltonian(state) == pytest.approx(quad_z + quad_v + cubic,
                                               rel=1e-12)


# ---------------------------------------------------------------------------
# Variational structure
# ---------------------------------------------------------------------------

def test_variational_residual_linear():
    g = GridSpec.square(32, TWO_PI, dim=2)
    state = _random_state(g, _params(epsilon=0.0), 1)
    assert variational_check(state) < 1e-12


def test_variational_residual_nonlinear():
    g = GridSpec.square(32, TWO_PI, dim=2)
    for seed in range(5):
        state = _random_state(g, _params(epsilon=0.05), seed, scale=0.2)
        assert variational_check(state) < 1e-11


def test_variational_residual_zero_state():
    g = GridSpec.square(16, TWO_PI, dim=2)
    state = FieldState.from_arrays(g, _params(), np.zeros(g.n),
                                   (np.zeros(g.n), np.zeros(g.n)))
    assert variational_check(state) == 0.0


def test_gradients_match_finite_differences():
    """H(U + h dU) - H(U) - h <grad H, dU> = O(h^2), order >= 1.95."""
    g = GridSpec.square(16, TWO_PI, dim=2)
    p = _params(gamma=0.6, epsilon=0.3, mu=0.05, mu2=0.2, a=-0.1)
    state = _random_state(g, p, 7, scale=0.3)
    direction = _random_state(g, p, 8, scale=1.0)

    gz, gv = variational_gradients(state)
    gz_vals = g.ifft_real(gz)
    gv_vals = [g.ifft_real(c) for c in gv]
    pairing = g.integral(gz_vals * direction.zeta.values)
    pairing += sum(g.integral(c * d.values)
                   for c, d in zip(gv_vals, direction.v))

    h0 = hamiltonian(state)
    hs = np.array([1e-2, 1e-3, 1e-4])
    remainders = []
    for h in hs:
        shifted = FieldState(
            t=0.0, zeta=state.zeta + float(h) * direction.zeta,
            v=tuple(a + float(h) * b for a, b in zip(state.v, direction.v)),
            params=p)
        remainders.append(abs(hamiltonian(shifted) - h0 - h * pairing))
    fit = np.polyfit(np.log(hs), np.log(remainders), 1)[0]
    assert fit >= 1.95


# ---------------------------------------------------------------------------
# Symmetrizer energies: independent oracles
# ---------------------------------------------------------------------------

def _diag_oracle(state, s, zeta_coef, v_coef):
    """Dense per-mode sum with explicit diagonal weights."""
    grid = state.grid
    w = (1.0 + grid.abs2_xi) ** s
    total = grid.spectral_l2_sq(state.zeta.hat, weight=w * zeta_coef)
    for c in state.v:
        total += grid.spectral_l2_sq(c.hat, weight=w * v_coef)
    return total


def test_energy_diagonal_oracle_equal_weights():
    """eps = 0, b = d: per mode the energy is
    gg*(1-c*mu*|xi|^2)*(1+b*mu*|xi|^2)|zeta|^2 + A*(1+b*mu*|xi|^2)|v|^2."""
    g = GridSpec.square(16, TWO_PI, dim=2)
    p = _params(epsilon=0.0, gamma=0.4, mu=0.2, mu2=0.5)
    state = _random_state(g, p, 11)
    tab = symbol_table(g, p)
    gg = p.gamma * (1 - p.gamma)
    expect = _diag_oracle(state, 1.5,
                          gg * tab.one_minus_cmu * tab.helmholtz_b,
                          tab.A * tab.helmholtz_b)
    assert energy_Es(state, 1.5) == pytest.approx(expect, rel=1e-12)


def test_energy_diagonal_oracle_distinct_weights():
    g = GridSpec.square(16, TWO_PI, dim=2)
    p = _params(epsilon=0.0, gamma=0.4, mu=0.2, mu2=0.5, b=0.25, d=1.0 / 6.0)
    state = _random_state(g, p, 12)
    tab = symbol_table(g, p)
    gg = p.gamma * (1 - p.gamma)
    expect = _diag_oracle(
        state, 2.0,
        gg**2 * tab.one_minus_cmu**2 * tab.g * tab.helmholtz_b,
        gg * tab.A * tab.one_minus_cmu * tab.helmholtz_b)
    assert energy_Es(state, 2.0) == pytest.approx(expect, rel=1e-12)


def test_energy_diagonal_oracle_b_zero():
    g = GridSpec.square(16, TWO_PI, dim=2)
    p = _params(epsilon=0.0, gamma=0.4, mu=0.2, mu2=0.5, b=0.0, d=5.0 / 12.0)
    state = _random_state(g, p, 13)
    tab = symbol_table(g, p)
    gg = p.gamma * (1 - p.gamma)
    expect = _diag_oracle(
        state, 1.0,
        gg**2 * tab.one_minus_cmu**2 * tab.helmholtz_d,
        gg * tab.one_minus_cmu * tab.A * tab.helmholtz_d**2)
    assert energy_Es(state, 1.0) == pytest.approx(expect, rel=1e-12)


def _circulant_2d(grid, w_vals):
    """Dense spectral matrix of pointwise multiplication by w."""
    n1, n2 = grid.n
    what = grid.fft(w_vals)
    N = grid.npoints
    C = np.zeros((N, N), dtype=complex)
    for k1 in range(n1):
        for k2 in range(n2):
            for l1 in range(n1):
                for l2 in range(n2):
                    C[k1 * n2 + k2, l1 * n2 + l2] = (
                        what[(k1 - l1) % n1, (k2 - l2) % n2] / N)
    return C


def test_energy_dense_matrix_oracle():
    """Nonlinear energy, b = d = 0 case, on an 8x8 grid: the symmetrizer
    applied through dense circulant matrices agrees with the fft path."""
    g = GridSpec.square(8, TWO_PI, dim=2)
    p = _params(gamma=0.6, epsilon=0.4, mu=0.3, mu2=0.3, a=0.0,
                b=0.0, c=-1.0 / 12.0, d=0.0)
    state = _random_state(g, p, 21, scale=0.4)
    s = 0.5

    tab = symbol_table(g, p)
    lam = bessel_weight(g, s)
    D = np.diag(g.dealias_mask.ravel().astype(float))
    OMC = np.diag(tab.one_minus_cmu.ravel())
    A = np.diag(tab.A.ravel())
    Cz = _circulant_2d(g, state.zeta.values)
    Cv = [_circulant_2d(g, c.values) for c in state.v]
    gg = p.gamma * (1 - p.gamma)

    arg_z = (lam * state.zeta.hat).ravel()
    arg_v = [(lam * c.hat).ravel() for c in state.v]

    out_z = gg * OMC @ arg_z
    for j in range(2):
        out_z = out_z - p.epsilon * D @ Cv[j] @ arg_v[j]
    out_v = []
    for j in range(2):
        comp = A @ arg_v[j] - p.epsilon * D @ Cz @ arg_v[j]
        comp = comp - p.epsilon * D @ Cv[j] @ arg_z
        out_v.append(comp)

    norm = g.cell_volume / g.npoints
    dense = norm * np.vdot(out_z, arg_z).real
    for j in range(2):
        dense += norm * np.vdot(out_v[j], arg_v[j]).real

    assert energy_Es(state, s) == pytest.approx(dense, rel=1e-10)


def test_equivalence_ratio_zero_state_is_nan():
    g = GridSpec.square(8, TWO_PI, dim=2)
    state = FieldState.from_arrays(g, _params(), np.zeros(g.n),
                                   (np.zeros(g.n), np.zeros(g.n)))
    ratio, k, kp = equivalence_ratio(state, 2.0)
    assert math.isnan(ratio)
    assert (k, kp) == (2, 2)  # b = d > 0, c < 0 row


def test_equivalence_ratio_consistency():
    g = GridSpec.square(16, TWO_PI, dim=2)
    p = _params(epsilon=0.01, mu=0.01, mu2=0.01)
    state = _random_state(g, p, 30)
    ratio, k, kp = equivalence_ratio(state, 2.0)
    case = classify_case(p)
    assert ratio == pytest.approx(
        energy_Es(state, 2.0, case) / calE_s(state, 2.0, case), rel=1e-12)
    assert ratio > 0.0


def test_forced_case_energy_stays_comparable():
    """Forcing the two-weight machinery onto b = d coefficients gives a
    different but equivalent energy (the cross-check the overrides exist for)."""
    g = GridSpec.square(16, TWO_PI, dim=2)
    p = _params(epsilon=0.05, mu=0.05, mu2=0.05)
    state = _random_state(g, p, 31)
    native = equivalence_ratio(state, 2.0)[0]
    forced = equivalence_ratio(state, 2.0, classify_case(p, case_override=1))[0]
    assert native > 0 and forced > 0
    assert 0.01 < forced / native < 100.0


# ---------------------------------------------------------------------------
# Coercivity and reports
# ---------------------------------------------------------------------------

def test_coercivity_form_closed_form():
    g = GridSpec.square(32, TWO_PI, dim=1)
    p = _params(gamma=0.5, epsilon=0.2, mu=0.3)
    alpha, beta = 0.4, 0.7
    x = g.x_mesh[0]
    state = FieldState.from_arrays(g, p, alpha * np.cos(x),
                                   (beta * np.cos(x),))
    z2 = alpha**2 * np.pi
    v2 = beta**2 * np.pi
    expect = z2 * (1 + p.mu) + v2 + 2 * p.mu * (1 - p.epsilon * z2) * v2
    assert hamiltonian_coercivity_form(state) == pytest.approx(expect, rel=1e-12)


@pytest.mark.parametrize("gamma,c3", [(0.9, 0.35), (0.5, 0.90)])
def test_hamiltonian_coercive_at_small_data(gamma, c3):
    """H >= c3 * (coercivity bracket); c3 measured once per parameter set
    and frozen here."""
    g = GridSpec.square(32, TWO_PI, dim=2)
    p = _params(gamma=gamma, epsilon=0.05, mu=0.05, mu2=1.0)
    for seed in range(20):
        state = _random_state(g, p, seed, scale=0.3)
        assert hamiltonian(state) >= c3 * hamiltonian_coercivity_form(state)


def test_energy_report_row_and_header():
    assert csv_header() == "t,hamiltonian,E_s,calE_s,ratio,x0_norm,noncav,smallness"
    g = GridSpec.square(16, TWO_PI, dim=2)
    p = _params(epsilon=0.2)
    state = _random_state(g, p, 40, scale=0.3)
    rep = energy_report(state, s=1.0)
    row = rep.csv_row()
    parts = row.split(",")
    assert len(parts) == len(REPORT_COLUMNS)
    # 17 significant digits round-trip doubles exactly
    for col, tok in zip(REPORT_COLUMNS, parts):
        assert float(tok) == getattr(rep, col)
    assert rep.smallness == pytest.approx(
        p.epsilon * g.spectral_l2_sq(state.zeta.hat), rel=1e-12)
    assert rep.noncav == pytest.approx(
        1.0 - p.epsilon * np.max(state.zeta.values), rel=1e-12)
    assert rep.ratio == pytest.approx(rep.E_s / rep.calE_s, rel=1e-12)
