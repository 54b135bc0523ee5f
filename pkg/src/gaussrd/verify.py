"""Seeded self-verification: every closed form against an independent route.

Each check draws from its own counter-based generator keyed by ``(seed,
check name)``, so results do not depend on which checks run or in what order.
"""
from __future__ import annotations

import math
import zlib
from dataclasses import asdict, dataclass
import numpy as np

from . import channel as ch_mod
from .channel import JOINT_FORM, GaussianChannel, apply, finite_r_op, general_joint_cm, joint_cm
from .coherent import (
    NoiseParams,
    coherent_info,
    coherent_info_from_cm,
    d_values,
    entropy_slope,
    noise_matrix,
    tau_from_t,
)
from .distortion import (
    average_distortion,
    build_form,
    canonical_distortion,
    minimal_distortion,
    sl2_from_params,
    thermal_minimal_distortion,
    thermal_optimal_map,
)
from .figure import FIGURE1_NS, figure1_curves
from .ratedist import (
    GridSpec,
    analyze_source,
    brute_force_rate,
    pure_state_rate,
    rate_distortion,
    rate_point,
    rd_curve,
)
from .states import family_cm, thermal_cm
from .symcore import (
    SymplecticForm,
    bosonic_entropy,
    check_uncertainty,
    gaussian_entropy,
    purification_cm,
    quadratic_expectation,
    rotation,
    symplectic_eigenvalues,
    williamson_one_mode,
)

SPOT_RATE = 0.36873


@dataclass
class CheckResult:
    name: str
    passed: bool
    tolerance: float
    worst_error: float
    cases: int


def generator(seed: int, name: str) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, zlib.crc32(name.encode())])))


# -- random objects ---------------------------------------------------------

def random_cm(rng, pure_fraction=0.1) -> np.ndarray:
    gamma_s = 1.0 if rng.random() < pure_fraction else 1.0 + rng.exponential(1.5)
    z = math.exp(rng.normal(0.0, 0.8))
    r = rotation(rng.uniform(0.0, math.pi))
    return r @ np.diag([gamma_s * z, gamma_s / z]) @ r.T


def random_sl2(rng) -> np.ndarray:
    return sl2_from_params(rng.uniform(0, math.pi), rng.normal(0.0, 0.7), rng.uniform(0, math.pi))


def random_psd(rng, scale=1.0) -> np.ndarray:
    a = rng.normal(size=(2, 2)) * scale
    return a @ a.T


# -- symcore ---------------------------------------------------------------

def _uncertainty_implies_nu(rng, cases):
    worst, n = 0.0, 0
    for _ in range(cases):
        if rng.random() < 0.5:
            g = random_cm(rng) * rng.uniform(0.6, 1.2)
        else:
            a = rng.normal(size=(4, 4))
            g = a @ a.T + rng.uniform(0.3, 2.0) * np.eye(4)
        if check_uncertainty(g).valid:
            n += 1
            worst = max(worst, 1.0 - float(symplectic_eigenvalues(g)[-1]))
    return worst, n


def _purification_purity(rng, cases):
    worst = 0.0
    for _ in range(cases):
        g = random_cm(rng)
        p = purification_cm(g)
        if not (np.array_equal(p[:2, :2], g) and np.array_equal(p[2:, 2:], g)):
            return math.inf, cases
        nu = symplectic_eigenvalues(p, SymplecticForm.joint())
        worst = max(worst, float(np.max(np.abs(nu - 1.0))))
    return worst, cases


def _thermal_entropy(rng, cases):
    worst = 0.0
    for _ in range(cases):
        gs = 1.0 + rng.exponential(2.0)
        worst = max(worst, abs(gaussian_entropy(gs * np.eye(2)) - bosonic_entropy((gs - 1) / 2)))
    return worst, cases


def _williamson_residual(rng, cases):
    worst = 0.0
    for _ in range(cases):
        g = random_cm(rng)
        S, gs = williamson_one_mode(g)
        res = np.max(np.abs(S.T @ g @ S - gs * np.eye(2)))
        worst = max(worst, float(res), abs(float(np.linalg.det(S)) - 1.0))
    return worst, cases


def _quadratic_linearity(rng, cases):
    worst = 0.0
    for _ in range(cases):
        q1, q2 = (random_psd(rng) - random_psd(rng) for _ in range(2))
        g1, g2 = random_cm(rng), random_cm(rng)
        lam = rng.random()
        e1 = quadratic_expectation(lam * q1 + (1 - lam) * q2, g1)
        e2 = lam * quadratic_expectation(q1, g1) + (1 - lam) * quadratic_expectation(q2, g1)
        e3 = quadratic_expectation(q1, lam * g1 + (1 - lam) * g2)
        e4 = lam * quadratic_expectation(q1, g1) + (1 - lam) * quadratic_expectation(q1, g2)
        worst = max(worst, abs(e1 - e2), abs(e3 - e4))
    return worst, cases


# -- channel ---------------------------------------------------------------

def _validity_equivalence(rng, cases):
    # a pure input has beta = 0 and cannot witness complete positivity
    disagreements, n = 0, 0
    for _ in range(cases):
        K = rng.uniform(0.1, 2.5)
        M = math.sqrt(K) * random_sl2(rng)
        chan = GaussianChannel(M, random_psd(rng, rng.uniform(0.0, 1.5)))
        rep = ch_mod.validate_channel(chan)
        if abs(rep.slack) < 1e-6:
            continue
        n += 1
        joint = joint_cm(chan, random_cm(rng, 0.0), allow_gain=True)
        flags = {rep.valid, check_uncertainty(joint, JOINT_FORM).valid, ch_mod.simon_condition(joint) >= -1e-9}
        disagreements += len(flags) > 1
    return float(disagreements), n


def _reference_block_exact(rng, cases):
    bad = 0
    for _ in range(cases):
        g = random_cm(rng)
        joint = joint_cm(GaussianChannel(random_sl2(rng), random_psd(rng)), g)
        bad += not np.array_equal(joint[2:, 2:], g)
    return float(bad), cases


def _output_positivity(rng, cases):
    worst = 0.0
    for _ in range(cases):
        K = rng.uniform(0.1, 2.5)
        M = math.sqrt(K) * random_sl2(rng)
        # noise on the validity boundary plus a random PSD excess
        N = abs(1.0 - K) * np.eye(2) + random_psd(rng, 0.3)
        out = apply(GaussianChannel(M, N), random_cm(rng))
        worst = max(worst, -check_uncertainty(out).min_eigenvalue)
    return worst, cases


FINITE_R = (5.0, 10.0, 15.0, 20.0)


def _finite_r_errors(M, N, g):
    ref = joint_cm(GaussianChannel(M, N), g)
    return np.array([np.max(np.abs(general_joint_cm(finite_r_op(M, N, r), g) - ref)) for r in FINITE_R])


def _finite_r_cases(rng, cases):
    out = [(np.eye(2), np.zeros((2, 2)), 3 * np.eye(2)), (np.eye(2), np.eye(2), 3 * np.eye(2))]
    for _ in range(max(0, min(cases, 5) - 2)):
        out.append((random_sl2(rng), random_psd(rng, 0.5), random_cm(rng, 0.0)))
    return out


def _finite_r_rate(rng, cases):
    worst, items = 0.0, _finite_r_cases(rng, cases)
    for M, N, g in items:
        slope = np.polyfit(FINITE_R, np.log(_finite_r_errors(M, N, g)), 1)[0]
        worst = max(worst, abs(slope + 2.0))
    return float(worst), len(items)


def _finite_r_r20(rng, cases):
    items = _finite_r_cases(rng, cases)
    return float(max(_finite_r_errors(M, N, g)[-1] for M, N, g in items)), len(items)


def _normalize_gain(rng, cases):
    worst = 0.0
    for _ in range(cases):
        K = rng.uniform(0.1, 3.0)
        M = math.sqrt(K) * random_sl2(rng)
        g = random_cm(rng)
        chan, k = ch_mod.normalize_gain(GaussianChannel(M, np.zeros((2, 2))))
        lhs = M.T @ g @ M
        rhs = k * k * (chan.M.T @ g @ chan.M)
        worst = max(worst, float(np.max(np.abs(lhs - rhs)) / max(1.0, np.max(np.abs(lhs)))))
    return worst, cases


# -- distortion ------------------------------------------------------------

def _closed_form_vs_expectation(rng, cases):
    q = build_form(1).q
    worst = 0.0
    for _ in range(cases):
        g = random_cm(rng)
        chan = GaussianChannel(random_sl2(rng), random_psd(rng))
        worst = max(worst, abs(average_distortion(chan, g) - quadratic_expectation(q, joint_cm(chan, g))))
    return worst, cases


def _rotation_invariance(rng, cases):
    g = random_cm(rng, 0.0)
    base = minimal_distortion(g)
    worst = 0.0
    for _ in range(2):
        r = rotation(rng.uniform(0.0, math.pi))
        m = minimal_distortion(r.T @ g @ r)
        worst = max(worst, abs(m.d_min - base.d_min), abs(m.omega - base.omega))
    return worst, 2


THERMAL_GAMMAS = (1.0, 1.5, 3.0, 11.0)


def _thermal_closed_forms(rng, cases):
    worst = 0.0
    for gs in THERMAL_GAMMAS:
        num, ref = minimal_distortion(gs * np.eye(2)), thermal_minimal_distortion(gs)
        worst = max(worst, abs(num.d_min - ref.d_min), abs(num.omega - ref.omega))
    return worst, len(THERMAL_GAMMAS)


def _distortion_floor(rng, cases):
    g = random_cm(rng, 0.0)
    d_min = minimal_distortion(g).d_min
    worst = 0.0
    for _ in range(cases):
        chan = GaussianChannel(random_sl2(rng), random_psd(rng))
        worst = max(worst, d_min - average_distortion(chan, g))
    return worst, cases


def _kappa_degeneracy(rng, cases):
    worst = 0.0
    for _ in range(cases):
        gs = 1.0 + rng.exponential(2.0)
        g = gs * np.eye(2)
        s = math.sqrt(gs * gs - 1) / (2 * gs)
        kappa = rng.uniform(-1.0, 1.0) * math.sqrt(1 + s * s)
        d0 = average_distortion(GaussianChannel(thermal_optimal_map(gs), np.zeros((2, 2))), g)
        dk = average_distortion(GaussianChannel(thermal_optimal_map(gs, kappa), np.zeros((2, 2))), g)
        worst = max(worst, abs(dk - d0))
    return worst, cases


def _canonical_at_optimum(rng, cases):
    g = random_cm(rng, 0.0)
    minimum = minimal_distortion(g)
    worst = 0.0
    for _ in range(cases):
        N = random_psd(rng)
        rep = canonical_distortion(GaussianChannel(minimum.M_star, N), g, minimum)
        worst = max(worst, abs(rep.n_n - 0.25 * np.trace(N)))
    return worst, cases


# -- coherent --------------------------------------------------------------

def _random_noise_params(rng):
    n_s = rng.uniform(0.0, 3.0)
    n_n = rng.uniform(0.0, 3.0)
    delta = rng.uniform(0.0, n_n * n_n)
    gs = 2 * n_s + 1
    omega = 2.0 + (gs * gs - 1) / (gs * gs) + rng.exponential(1.0)
    return NoiseParams(n_s, delta, tau_from_t(n_n, delta, omega, rng.uniform(-1, 1)))


def _d_identity(rng, cases):
    worst = 0.0
    for _ in range(cases):
        p = _random_noise_params(rng)
        d0, d1, d2 = d_values(p)
        lhs = d0 * d0 - 0.5 * (d1 * d1 + d2 * d2)
        worst = max(worst, abs(lhs - (p.n_s * (p.n_s + 1) + 0.5 * p.x)))
    return worst, cases


def _oracle_case(rng):
    """Random source, unit-gain map and noise, with the matching closed-form parameters."""
    g = random_cm(rng)
    S, gs = williamson_one_mode(g)
    M = random_sl2(rng)
    omega = float(np.trace(M.T @ g @ M)) / gs
    n_n = rng.uniform(0.0, 3.0)
    delta = rng.uniform(0.0, n_n * n_n)
    t = rng.uniform(-1.0, 1.0)
    joint = joint_cm(GaussianChannel(M, noise_matrix(n_n, delta, t, M, S)), g)
    return joint, NoiseParams((gs - 1) / 2, delta, tau_from_t(n_n, delta, omega, t))


def _product_identity(rng, cases):
    worst = 0.0
    for _ in range(cases):
        joint, p = _oracle_case(rng)
        x = p.x
        expected = 4.0 * ((x + 0.5) ** 2 - x * x + 4.0 * p.n_s * (p.n_s + 1) * p.delta)
        d0, d1, d2 = d_values(p)
        worst = max(worst, abs(np.linalg.det(joint) - expected) / expected,
                    abs(16 * d1 * d1 * d2 * d2 - expected) / expected)
    return worst, cases


def _oracle_equivalence(rng, cases):
    worst = 0.0
    for _ in range(cases):
        joint, p = _oracle_case(rng)
        worst = max(worst, abs(coherent_info(p) - coherent_info_from_cm(joint)))
    return worst, cases


def _d_values_vs_eigenvalues(rng, cases):
    worst = 0.0
    for _ in range(cases):
        joint, p = _oracle_case(rng)
        d0, d1, d2 = d_values(p)
        nu_out = symplectic_eigenvalues(joint[:2, :2])[0]
        nu = symplectic_eigenvalues(joint, JOINT_FORM)
        worst = max(worst, abs(d0 - nu_out / 2), abs(d1 - nu[0] / 2), abs(d2 - nu[1] / 2))
    return worst, cases


def _delta_monotonicity(rng, cases):
    h = 1e-6
    worst, n = -math.inf, 0
    while n < cases:
        n_s = rng.uniform(0.0, 3.0)
        delta = rng.uniform(2 * h, 2.0)
        tau = 2.0 * math.sqrt(delta + h) + rng.exponential(2.0)
        x = delta + (n_s + 0.5) * tau

        def ic(d):
            return coherent_info(NoiseParams(n_s, d, (x - d) / (n_s + 0.5)))

        if (x - delta - h) / (n_s + 0.5) < 2.0 * math.sqrt(delta + h):
            continue
        worst = max(worst, (ic(delta + h) - ic(delta - h)) / (2 * h))
        n += 1
    return max(worst, 0.0), cases


def _slope_shape(rng, cases):
    a = np.linspace(0.01, 50.0, 5000)
    f = entropy_slope(a)
    inc = float(np.max(np.diff(f)))
    concave = float(np.max(-(f[2:] - 2 * f[1:-1] + f[:-2])))
    return max(inc, concave, 0.0), a.size


# -- ratedist --------------------------------------------------------------

ZERO_NS = (0.0, 0.1, 0.25, 1.0, 5.0)


def _zero_distortion(rng, cases):
    worst = 0.0
    for ns in ZERO_NS:
        worst = max(worst, abs(rate_distortion(thermal_cm(ns), 0.0).r_i - bosonic_entropy(ns)))
    return worst, len(ZERO_NS)


def _curve_monotone(rng, cases):
    worst = 0.0
    n = max(1, min(cases, 20))
    grid = np.linspace(0.0, 4.0, 101)
    for _ in range(n):
        r = np.array([p.r_i for p in rd_curve(thermal_cm(rng.exponential(1.0)), grid)])
        worst = max(worst, float(np.max(np.diff(r))))
    return max(worst, 0.0), n


WEAK_NS = (0.001, 0.005, 0.01)


def _delta_cases(rng, cases):
    out = []
    for i in range(max(3, min(cases, 50))):
        ns = WEAK_NS[i % 5] if i % 5 < 3 else rng.uniform(0.0, 3.0)
        gs = 2 * ns + 1
        if i % 5 == 4:
            z = math.exp(rng.normal(0.0, 0.6))
            g = np.diag([gs * z, gs / z])
        else:
            g = gs * np.eye(2)
        out.append((g, rng.uniform(0.05, 3.0)))
    return out


_DELTA_CACHE: dict = {}


def delta_optimality(rng, cases):
    """Grid minimum vs closed form, and argmin distance in grid steps, per case."""
    key = (repr(rng.bit_generator.state), cases)
    if key in _DELTA_CACHE:
        return _DELTA_CACHE[key]
    rows = []
    for g, n_n in _delta_cases(rng, cases):
        src = analyze_source(g)
        bf = brute_force_rate(g, n_n, GridSpec(), source=src)
        closed = rate_point(src, n_n).i_c
        rows.append((closed - bf.i_min, float(round(abs(bf.delta_star - n_n * n_n) / bf.delta_step))))
    _DELTA_CACHE.clear()
    _DELTA_CACHE[key] = rows
    return rows


def _delta_value(rng, cases):
    rows = delta_optimality(rng, cases)
    return max(0.0, max(r[0] for r in rows)), len(rows)


def _delta_argmin(rng, cases):
    rows = delta_optimality(rng, cases)
    return max(r[1] for r in rows), len(rows)


def _pure_reduction(rng, cases):
    eps = 1e-9
    z = math.exp(rng.normal(0.0, 0.8))
    g = np.diag([(1 + eps) * z, (1 + eps) / z])
    src = analyze_source(g)
    worst = 0.0
    for n_n in np.linspace(0.0, 3.0, 31):
        worst = max(worst, abs(rate_point(src, n_n).r_i - pure_state_rate(src.n_s, n_n)))
    return worst, 31


CLIP_NS = (0.05, 0.25, 1.0)


def _clipping(rng, cases):
    worst = 0.0
    for ns in CLIP_NS:
        gs = 2 * ns + 1
        omega = thermal_minimal_distortion(gs).omega
        worst = max(worst, rate_distortion(thermal_cm(ns), math.sqrt(omega * omega - 4.0)).r_i)
    return worst, len(CLIP_NS)


def _spot_value(rng, cases):
    return abs(rate_distortion(family_cm(3.0, 0.25), 0.1).r_i - SPOT_RATE), 1


PURE_TRACES = (2.0, 3.0, 10.0)


def _pure_collapse(rng, cases):
    worst = 0.0
    grid = np.linspace(0.0, 5.0, 201)
    for tr in PURE_TRACES:
        worst = max(worst, max(p.r_i for p in rd_curve(family_cm(tr, 0.0), grid)))
    return worst, len(PURE_TRACES) * grid.size


def _family_resolution(rng, cases):
    worst = 0.0
    for _ in range(cases):
        ns = rng.uniform(0.0, 3.0)
        tr = 2 * (2 * ns + 1) + rng.exponential(3.0)
        a, b = np.diag(family_cm(tr, ns))
        worst = max(worst, abs(a + b - tr), abs(math.sqrt(a * b) - (2 * ns + 1)))
    return worst, cases


def _figure1(rng, cases):
    worst = 0.0
    curves = figure1_curves()
    for ns, pts in curves.items():
        r = np.array([p.r_i for p in pts])
        worst = max(worst, float(np.max(np.diff(r))), abs(r[0] - bosonic_entropy(ns)))
        if ns == 0.0:
            worst = max(worst, float(np.max(np.abs(r))))
    return max(worst, 0.0), len(FIGURE1_NS)


# (name, tolerance, function[, random stream shared with another check])
Check = tuple

CHECKS: tuple[Check, ...] = (
    ("symcore.uncertainty_implies_nu_ge_1", 1e-9, _uncertainty_implies_nu),
    ("symcore.purification_purity", 1e-9, _purification_purity),
    ("symcore.thermal_entropy", 1e-12, _thermal_entropy),
    ("symcore.williamson_residual", 1e-12, _williamson_residual),
    ("symcore.quadratic_expectation_linearity", 1e-12, _quadratic_linearity),
    ("channel.validity_equivalence", 0.0, _validity_equivalence),
    ("channel.reference_block_exact", 0.0, _reference_block_exact),
    ("channel.output_positivity", 1e-10, _output_positivity),
    ("channel.finite_r_rate", 0.25, _finite_r_rate),
    ("channel.finite_r_r20", 1e-8, _finite_r_r20),
    ("channel.normalize_gain_congruence", 1e-12, _normalize_gain),
    ("distortion.closed_form_vs_expectation", 1e-12, _closed_form_vs_expectation),
    ("distortion.rotation_invariance", 1e-6, _rotation_invariance),
    ("distortion.thermal_closed_forms", 1e-8, _thermal_closed_forms),
    ("distortion.floor", 1e-9, _distortion_floor),
    ("distortion.kappa_degeneracy", 1e-10, _kappa_degeneracy),
    ("distortion.canonical_at_optimum", 1e-10, _canonical_at_optimum),
    ("coherent.d_identity", 1e-12, _d_identity),
    ("coherent.product_identity", 1e-9, _product_identity),
    ("coherent.oracle_equivalence", 1e-9, _oracle_equivalence),
    ("coherent.d_values_vs_eigenvalues", 1e-9, _d_values_vs_eigenvalues),
    ("coherent.delta_monotonicity", 1e-10, _delta_monotonicity),
    ("coherent.slope_decreasing_convex", 0.0, _slope_shape),
    ("ratedist.zero_distortion", 1e-9, _zero_distortion),
    ("ratedist.curve_monotone", 1e-12, _curve_monotone),
    ("ratedist.delta_optimality_value", 1e-9, _delta_value, "ratedist.delta_optimality"),
    ("ratedist.delta_optimality_argmin", 1.0, _delta_argmin, "ratedist.delta_optimality"),
    ("ratedist.pure_reduction", 1e-6, _pure_reduction),
    ("ratedist.clipping_point", 0.0, _clipping),
    ("ratedist.spot_value", 1e-4, _spot_value),
    ("ratedist.pure_collapse", 0.0, _pure_collapse),
    ("cli.family_resolution", 1e-12, _family_resolution),
    ("cli.figure1", 1e-9, _figure1),
)


def run_checks(seed: int = 42, cases: int = 1000, names=None) -> list[CheckResult]:
    results = []
    for name, tol, fn, *stream in CHECKS:
        if names is not None and name not in names:
            continue
        worst, n = fn(generator(seed, stream[0] if stream else name), cases)
        results.append(CheckResult(name, bool(worst <= tol), tol, float(worst), int(n)))
    return results


def report(results: list[CheckResult]) -> list[dict]:
    return [asdict(r) for r in results]
