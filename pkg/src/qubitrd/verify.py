"""Monte Carlo and constructive verification suites.

Each suite samples randomized inputs from an explicitly seeded stream,
checks an inequality or identity on every trial, and returns a
:class:`VerificationReport`. Reports are deterministic given (seed, params);
any violating trial is recorded so a counterexample can be replayed rather
than lost. Curve-dominance suites compare against a monotone cubic
interpolant of the swept rate curve, lowered by its measured interpolation
error, with a violation tolerance of 1e-6; algebraic identities use 1e-9 or
tighter.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import quantum
from .errors import DomainError
from .linalg import haar_unitaries
from .quantum import DensityMatrix, KrausChannel, stinespring_kraus
from .ratedistortion import (
    HALF_PI,
    SourceSpec,
    KrausPair,
    _h2_arr,
    isotropic_s1,
    r1_curve_point,
    solve_alpha,
    sweep_curve,
)
from .records import record_to_text

CURVE_TOL = 1e-6
ALGEBRA_TOL = 1e-9
MAX_RECORDED_FAILURES = 20


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one suite: trial counts, worst excess, and replay data.

    ``worst_violation`` is the largest amount by which the checked
    inequality was exceeded (negative values are margins); the suite passes
    iff no trial exceeded the tolerance.
    """

    suite_name: str
    n_trials: int
    n_violations: int
    worst_violation: float
    seed: int
    params: dict[str, Any]
    passed: bool
    tolerance: float
    failures: tuple[dict[str, Any], ...] = field(default=())

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite_name": self.suite_name,
            "n_trials": self.n_trials,
            "n_violations": self.n_violations,
            "worst_violation": self.worst_violation,
            "seed": self.seed,
            "params": self.params,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "failures": list(self.failures),
        }

    def to_text(self) -> str:
        return record_to_text(list(self.to_dict().items()))


def _report(
    suite_name: str,
    seed: int,
    params: dict[str, Any],
    tolerance: float,
    excesses: np.ndarray,
    failures: list[dict[str, Any]],
) -> VerificationReport:
    excesses = np.asarray(excesses, dtype=float)
    n_violations = int(np.count_nonzero(excesses > tolerance))
    # an empty run passes vacuously; 0.0 keeps the record JSON-serializable
    worst = float(excesses.max()) if excesses.size else 0.0
    return VerificationReport(
        suite_name=suite_name,
        n_trials=int(excesses.size),
        n_violations=n_violations,
        worst_violation=worst,
        seed=seed,
        params=params,
        passed=n_violations == 0 and worst <= tolerance,
        tolerance=tolerance,
        failures=tuple(failures[:MAX_RECORDED_FAILURES]),
    )


class RateCurveInterpolator:
    """Monotone cubic interpolant of R1(d) with a measured error bound.

    The bound is the worst gap between the interpolant and directly computed
    curve points at the midpoints of the construction grid. ``reference``
    returns the interpolant lowered by that bound, which is what dominance
    checks compare against. Beyond d_max the curve is identically zero.
    """

    def __init__(self, src: SourceSpec, n_points: int = 512, tol: float = 1e-12):
        points = sweep_curve(src, n_points, tol)
        self.src = src
        self.d_max = src.d_max
        d = np.array([p.d for p in points])
        rate = np.array([p.R for p in points])
        self._pchip = PchipInterpolator(d, rate, extrapolate=False)
        mid_deltas = 0.5 * (
            np.array([p.delta for p in points[:-1]])
            + np.array([p.delta for p in points[1:]])
        )
        gaps = []
        for delta in mid_deltas:
            point = r1_curve_point(float(delta), src, tol)
            gaps.append(abs(float(self._pchip(point.d)) - point.R))
        self.error_bound = float(max(gaps))

    def __call__(self, d):
        d = np.clip(np.asarray(d, dtype=float), 0.0, self.d_max)
        return self._pchip(d)

    def reference(self, d):
        """Lower confidence curve used by dominance checks."""
        return self(d) - self.error_bound


@functools.lru_cache(maxsize=8)
def rate_curve_interpolator(src: SourceSpec, n_points: int = 512) -> RateCurveInterpolator:
    return RateCurveInterpolator(src, n_points)


def check_lemma1(n_trials: int, dim: int, seed: int) -> VerificationReport:
    """Trace bound |tr(U D V L)| <= tr(D L) for ordered positive diagonals.

    D and L are random positive diagonal matrices with descending entries;
    U, V are independent Haar unitaries.
    """
    if not 2 <= dim <= 8:
        raise DomainError(f"dim must lie in 2..8, got {dim}")
    rng = np.random.default_rng(seed)
    u = haar_unitaries(rng, n_trials, dim)
    v = haar_unitaries(rng, n_trials, dim)
    dvals = np.sort(rng.uniform(0.05, 2.0, (n_trials, dim)), axis=1)[:, ::-1]
    lvals = np.sort(rng.uniform(0.05, 2.0, (n_trials, dim)), axis=1)[:, ::-1]
    lhs = np.abs(np.einsum("nij,nj,nji,ni->n", u, dvals, v, lvals))
    rhs = np.einsum("ni,ni->n", dvals, lvals)
    excess = lhs - rhs
    failures = [
        {"trial": int(i), "lhs": float(lhs[i]), "rhs": float(rhs[i])}
        for i in np.flatnonzero(excess > ALGEBRA_TOL)
    ]
    return _report(
        "lemma1",
        seed,
        {"dim": dim},
        ALGEBRA_TOL,
        excess,
        failures,
    )


def check_lemma2(n_trials: int, dim: int, k: int, seed: int) -> VerificationReport:
    """Sum bound sum_i |tr(Y_i D)|^2 <= tr(D)^2 for complete {Y_i}, positive D."""
    if not 2 <= dim <= 8:
        raise DomainError(f"dim must lie in 2..8, got {dim}")
    if not 1 <= k <= 4:
        raise DomainError(f"k must lie in 1..4, got {k}")
    rng = np.random.default_rng(seed)
    y = stinespring_kraus(rng, n_trials, dim, k)
    g = rng.standard_normal((n_trials, dim, dim)) + 1j * rng.standard_normal(
        (n_trials, dim, dim)
    )
    dmat = g @ g.conj().transpose(0, 2, 1)
    traces = np.einsum("nkij,nji->nk", y, dmat)
    lhs = np.sum(np.abs(traces) ** 2, axis=1)
    rhs = np.einsum("nii->n", dmat).real ** 2
    excess = lhs - rhs
    failures = [
        {"trial": int(i), "lhs": float(lhs[i]), "rhs": float(rhs[i])}
        for i in np.flatnonzero(excess > ALGEBRA_TOL)
    ]
    return _report(
        "lemma2",
        seed,
        {"dim": dim, "k": k},
        ALGEBRA_TOL,
        excess,
        failures,
    )


def check_theorem1(n_trials: int, seed: int, src: SourceSpec) -> VerificationReport:
    """Replacing a 2x2 operation by its ordered positive diagonal part.

    For random complex A, the recipe takes the descending singular values of
    A diag(sqrt(p)) and divides them back by sqrt(p), producing a positive
    diagonal D that commutes with the source. The suite checks that D keeps
    the output entropy (1e-8) and the occurrence probability (1e-9) while
    never increasing the distortion (1e-9); the commutator with the source
    must vanish (1e-10). ``worst_violation`` is the worst excess over each
    condition's own tolerance, so the suite tolerance is 0.
    """
    p0, p1 = src.p0, src.p1
    sq = np.array([math.sqrt(p0), math.sqrt(p1)])
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n_trials, 2, 2)) + 1j * rng.standard_normal(
        (n_trials, 2, 2)
    )
    b = a * sq[np.newaxis, np.newaxis, :]
    svals = np.linalg.svd(b, compute_uv=False)
    dvals = svals / sq[np.newaxis, :]

    out_a = b @ b.conj().transpose(0, 2, 1)
    eigs = np.linalg.eigvalsh(out_a)
    lam_a = eigs.sum(axis=1)
    s_a = _h2_arr(np.clip(eigs[:, 1] / lam_a, 0.0, 1.0))
    lam_d = (svals**2).sum(axis=1)
    s_d = _h2_arr(np.clip(svals[:, 0] ** 2 / lam_d, 0.0, 1.0))

    tr_a = p0 * a[:, 0, 0] + p1 * a[:, 1, 1]
    dist_a = 1.0 - np.abs(tr_a) ** 2 / lam_a
    tr_d = p0 * dvals[:, 0] + p1 * dvals[:, 1]
    dist_d = 1.0 - tr_d**2 / lam_d

    rho = np.diag([p0, p1]).astype(complex)
    d_mats = np.zeros((n_trials, 2, 2), dtype=complex)
    d_mats[:, 0, 0] = dvals[:, 0]
    d_mats[:, 1, 1] = dvals[:, 1]
    comm = d_mats @ rho - rho @ d_mats
    comm_max = np.max(np.abs(comm), axis=(1, 2))

    entropy_excess = np.abs(s_a - s_d) - 1e-8
    weight_excess = np.abs(lam_a - lam_d) - 1e-9
    distortion_excess = (dist_d - dist_a) - 1e-9
    commutator_excess = comm_max - 1e-10
    excess = np.maximum.reduce(
        [entropy_excess, weight_excess, distortion_excess, commutator_excess]
    )
    failures = [
        {
            "trial": int(i),
            "entropy_gap": float(abs(s_a[i] - s_d[i])),
            "weight_gap": float(abs(lam_a[i] - lam_d[i])),
            "distortion_increase": float(dist_d[i] - dist_a[i]),
            "commutator": float(comm_max[i]),
        }
        for i in np.flatnonzero(excess > 0.0)
    ]
    params = {
        "p0": p0,
        "worst_entropy_gap": float(np.abs(s_a - s_d).max()),
        "worst_weight_gap": float(np.abs(lam_a - lam_d).max()),
        "worst_distortion_increase": float((dist_d - dist_a).max()),
        "worst_commutator": float(comm_max.max()),
    }
    return _report("theorem1", seed, params, 0.0, excess, failures)


def _solve_perturbation_mixture(
    cos2: float, sin2: float, k_lin: float, radius: float, lam0: float
) -> tuple[float, float] | None:
    """Solve the two weight constraints for (lam, mu) at one |x|.

    Returns None when the quadratic has no real solution. Of the two roots
    the one continuous with the unperturbed weights is returned.
    """
    a_q = cos2 / sin2
    b_q = -k_lin * cos2 / sin2
    c_q = k_lin**2 / (4.0 * sin2) - radius
    disc = b_q**2 - 4.0 * a_q * c_q
    if disc < 0.0:
        return None
    root = math.sqrt(disc)
    candidates = [(-b_q - root) / (2 * a_q), (-b_q + root) / (2 * a_q)]
    lam = min(candidates, key=lambda x: abs(x - lam0))
    mu = (k_lin - 2.0 * lam * cos2) / (2.0 * sin2)
    return lam, mu


def check_perturbation(
    delta_grid,
    x_magnitudes,
    src: SourceSpec,
    seed: int,
) -> VerificationReport:
    """Off-diagonal perturbations of the optimal pair at fixed distortion.

    Around each solved diagonal optimum, the pair is deformed by a complex
    off-diagonal amplitude x while two weight functions of |x| keep the
    operation trace preserving and the distortion fixed. The suite verifies
    that the average output entropy never drops below the diagonal optimum
    (tolerance 1e-9).

    Scaling data is recorded in the params: entropy growth per
    (delta, |x|, phase) with the growth ratios between two magnitudes, and
    the corresponding weight-function shifts with their ratios. The weight
    shifts scale quadratically in |x| (ratio near 4 for magnitudes 2x
    apart). The entropy growth does not: its quadratic coefficient vanishes
    identically at the optimal angle, so it grows quartically there (ratio
    near 16).
    """
    mags = [float(m) for m in x_magnitudes]
    if any(m < 0 or m > 0.05 for m in mags):
        raise DomainError("perturbation magnitudes must lie in [0, 0.05]")
    p0, p1 = src.p0, src.p1
    rho = src.density()
    phases = [2.0 * math.pi * i / 8 for i in range(8)]

    excesses: list[float] = []
    failures: list[dict[str, Any]] = []
    growths: list[dict[str, Any]] = []
    weight_shifts: list[dict[str, Any]] = []
    infeasible: list[dict[str, Any]] = []
    worst_distortion_drift = 0.0

    for delta in delta_grid:
        delta = float(delta)
        alpha = solve_alpha(delta, src)
        base = KrausPair.from_angles(alpha, delta)
        sbar0 = quantum.average_entropy(base.channel(), rho)
        d_target = 2.0 * p0 * p1 * (1.0 - math.cos(delta))
        f2 = 1.0 - d_target
        f = math.sqrt(f2)
        t1 = p0 * math.cos(alpha) + p1 * math.cos(alpha + delta)
        t2 = p0 * math.sin(alpha) + p1 * math.sin(alpha + delta)
        theta = math.atan2(t2, t1)
        cos_t, sin_t = math.cos(theta), math.sin(theta)
        cos2, sin2 = cos_t**2, sin_t**2
        lam0 = p0 * math.cos(alpha) / t1
        mu0 = p0 * math.sin(alpha) / t2
        k_lin = (p0**2 - p1**2) / f2 + 1.0

        for mag in mags:
            solved = _solve_perturbation_mixture(
                cos2, sin2, k_lin, p0**2 / f2 - mag**2, lam0
            )
            if solved is None:
                infeasible.append({"delta": delta, "magnitude": mag})
                continue
            lam, mu = solved
            weight_shifts.append(
                {
                    "delta": delta,
                    "magnitude": mag,
                    "lambda_shift": lam - lam0,
                    "mu_shift": mu - mu0,
                }
            )
            for phase in phases:
                x = mag * complex(math.cos(phase), math.sin(phase))
                a1 = f * np.array(
                    [
                        [lam * cos_t / p0, x * sin_t / p1],
                        [np.conj(x) * sin_t / p0, (1.0 - lam) * cos_t / p1],
                    ]
                )
                a2 = f * np.array(
                    [
                        [mu * sin_t / p0, -x * cos_t / p1],
                        [-np.conj(x) * cos_t / p0, (1.0 - mu) * sin_t / p1],
                    ]
                )
                channel = KrausChannel((a1, a2), trace_preserving=True)
                sbar_x = quantum.average_entropy(channel, rho)
                growth = sbar_x - sbar0
                excesses.append(-growth)
                growths.append(
                    {
                        "delta": delta,
                        "magnitude": mag,
                        "phase": phase,
                        "growth": growth,
                    }
                )
                drift = abs(quantum.distortion(rho, channel) - d_target)
                worst_distortion_drift = max(worst_distortion_drift, drift)
                if -growth > ALGEBRA_TOL:
                    failures.append(
                        {
                            "delta": delta,
                            "magnitude": mag,
                            "phase": phase,
                            "growth": growth,
                        }
                    )

    ratios: list[dict[str, Any]] = []
    shift_ratios: list[dict[str, Any]] = []
    distinct = sorted({m for m in mags if m > 0})
    if len(distinct) == 2:
        lo, hi = distinct
        by_key = {
            (g["delta"], g["magnitude"], g["phase"]): g["growth"] for g in growths
        }
        for delta in delta_grid:
            for phase in phases:
                g_lo = by_key.get((float(delta), lo, phase))
                g_hi = by_key.get((float(delta), hi, phase))
                if g_lo is not None and g_hi is not None and g_lo > 0:
                    ratios.append(
                        {"delta": float(delta), "phase": phase, "ratio": g_hi / g_lo}
                    )
        shifts_by_key = {(w["delta"], w["magnitude"]): w for w in weight_shifts}
        for delta in delta_grid:
            w_lo = shifts_by_key.get((float(delta), lo))
            w_hi = shifts_by_key.get((float(delta), hi))
            if w_lo is not None and w_hi is not None and w_lo["lambda_shift"] != 0:
                shift_ratios.append(
                    {
                        "delta": float(delta),
                        "lambda_ratio": w_hi["lambda_shift"] / w_lo["lambda_shift"],
                        "mu_ratio": w_hi["mu_shift"] / w_lo["mu_shift"],
                    }
                )

    params = {
        "p0": p0,
        "deltas": [float(d) for d in delta_grid],
        "magnitudes": mags,
        "n_phases": len(phases),
        "growths": growths,
        "growth_ratios": ratios,
        "weight_shifts": weight_shifts,
        "weight_shift_ratios": shift_ratios,
        "infeasible_points": infeasible,
        "worst_distortion_drift": worst_distortion_drift,
    }
    return _report(
        "perturbation", seed, params, ALGEBRA_TOL, np.array(excesses), failures
    )


def random_channel_search(
    src: SourceSpec, n_trials: int, seed: int
) -> VerificationReport:
    """Random two-element channels never beat the swept rate curve.

    Samples trace-preserving k=2 single-qubit channels, computes each
    channel's distortion and average output entropy, and checks the entropy
    against the interpolated curve lowered by its error bound. The worst
    undershoot is reported.
    """
    interp = rate_curve_interpolator(src)
    p0, p1 = src.p0, src.p1
    probs = np.array([p0, p1])
    rng = np.random.default_rng(seed)
    kraus = stinespring_kraus(rng, n_trials, 2, 2)

    tr_elements = p0 * kraus[..., 0, 0] + p1 * kraus[..., 1, 1]
    d = 1.0 - np.sum(np.abs(tr_elements) ** 2, axis=1)
    cond = (kraus * probs[np.newaxis, np.newaxis, np.newaxis, :]) @ kraus.conj(
    ).transpose(0, 1, 3, 2)
    lam = np.einsum("nkii->nk", cond).real
    eigs = np.linalg.eigvalsh(cond)
    q = np.clip(eigs[..., 1] / np.maximum(lam, 1e-300), 0.0, 1.0)
    sbar = np.sum(lam * _h2_arr(q), axis=1)

    excess = np.asarray(interp.reference(d)) - sbar
    failures = [
        {"trial": int(i), "d": float(d[i]), "sbar": float(sbar[i])}
        for i in np.flatnonzero(excess > CURVE_TOL)
    ]
    params = {"p0": p0, "interpolation_error_bound": interp.error_bound}
    return _report("search", seed, params, CURVE_TOL, excess, failures)


def _shannon(weights: np.ndarray) -> float:
    w = weights[weights > 1e-300]
    return float(-np.sum(w * np.log2(w)))


def check_theorem2_blocks(
    src: SourceSpec, n_trials: int, seed: int
) -> VerificationReport:
    """Diagonal two-qubit operations never beat the single-qubit rate curve.

    Each trial draws k <= 4 positive diagonal 4x4 elements, right-normalizes
    them into a trace-preserving set, and compares the per-qubit average
    output entropy against the interpolated curve at the per-qubit block
    distortion.
    """
    interp = rate_curve_interpolator(src)
    p0, p1 = src.p0, src.p1
    probs4 = np.array([p0 * p0, p0 * p1, p1 * p0, p1 * p1])
    rho1 = src.density()
    rng = np.random.default_rng(seed)

    excesses = np.empty(n_trials)
    failures: list[dict[str, Any]] = []
    for trial in range(n_trials):
        k = int(rng.integers(1, 5))
        diags = rng.uniform(0.05, 1.0, (k, 4))
        diags /= np.sqrt((diags**2).sum(axis=0))[np.newaxis, :]
        channel = KrausChannel(
            tuple(np.diag(row).astype(complex) for row in diags),
            trace_preserving=True,
        )
        rate = 0.0
        for row in diags:
            weights = row**2 * probs4
            lam = weights.sum()
            if lam > 1e-14:
                rate += lam * _shannon(weights / lam)
        rate *= 0.5
        d = quantum.block_distortion(channel, rho1)
        excesses[trial] = float(interp.reference(d)) - rate
        if excesses[trial] > CURVE_TOL:
            failures.append(
                {
                    "trial": trial,
                    "k": k,
                    "d": float(d),
                    "rate": float(rate),
                    "diagonals": diags.tolist(),
                }
            )
    params = {"p0": p0, "interpolation_error_bound": interp.error_bound}
    return _report("blocks", seed, params, CURVE_TOL, excesses, failures)


def check_theorem3_isotropic(
    n_qubits: int, n_trials: int, seed: int
) -> VerificationReport:
    """General operations on the unbiased source never beat the closed form.

    Samples fully general trace-preserving channels (k <= 4) on blocks of
    2 or 3 unbiased qubits and checks the per-qubit average output entropy
    against h2(1/2 + sqrt(d (1 - d))) at the per-qubit block distortion.
    """
    if n_qubits not in (2, 3):
        raise DomainError(f"n_qubits must be 2 or 3, got {n_qubits}")
    dim = 2**n_qubits
    rho1 = DensityMatrix(np.eye(2, dtype=complex) / 2)
    rng = np.random.default_rng(seed)

    excesses = np.empty(n_trials)
    failures: list[dict[str, Any]] = []
    for trial in range(n_trials):
        k = int(rng.integers(1, 5))
        kraus = stinespring_kraus(rng, 1, dim, k)[0]
        channel = KrausChannel(tuple(kraus), trace_preserving=True)
        rate = 0.0
        for element in kraus:
            cond = element @ element.conj().T / dim
            lam = float(np.trace(cond).real)
            if lam > 1e-14:
                rate += lam * quantum._entropy_of_psd(cond / lam)
        rate /= n_qubits
        d = quantum.block_distortion(channel, rho1)
        reference = isotropic_s1(d) if d <= 0.5 else 0.0
        excesses[trial] = reference - rate
        if excesses[trial] > CURVE_TOL:
            failures.append(
                {"trial": trial, "k": k, "d": float(d), "rate": float(rate)}
            )
    params = {"n_qubits": n_qubits}
    return _report("isotropic", seed, params, CURVE_TOL, excesses, failures)


SUITE_NAMES = (
    "lemma1",
    "lemma2",
    "theorem1",
    "perturbation",
    "search",
    "blocks",
    "isotropic",
)

DEFAULT_PERTURBATION_DELTAS = tuple(np.linspace(0.15, HALF_PI - 0.15, 10))
DEFAULT_PERTURBATION_MAGNITUDES = (0.01, 0.02)


def run_suite(
    name: str, src: SourceSpec, trials: int, seed: int
) -> list[VerificationReport]:
    """Run one named suite (or ``all``) with its documented default shape."""
    if name == "all":
        reports = []
        for suite in SUITE_NAMES:
            reports.extend(run_suite(suite, src, trials, seed))
        return reports
    if name == "lemma1":
        return [check_lemma1(trials, dim, seed) for dim in (2, 4, 8)]
    if name == "lemma2":
        return [check_lemma2(trials, dim, 4, seed) for dim in (2, 4, 8)]
    if name == "theorem1":
        return [check_theorem1(trials, seed, src)]
    if name == "perturbation":
        return [
            check_perturbation(
                DEFAULT_PERTURBATION_DELTAS,
                DEFAULT_PERTURBATION_MAGNITUDES,
                src,
                seed,
            )
        ]
    if name == "search":
        return [random_channel_search(src, trials, seed)]
    if name == "blocks":
        return [check_theorem2_blocks(src, trials, seed)]
    if name == "isotropic":
        return [check_theorem3_isotropic(2, trials, seed)]
    raise DomainError(f"unknown suite {name!r}")
