"""Acceptance criteria, one test each.

Every test records a single PASS/FAIL line (printed live with ``-s`` and
collected in the terminal summary) before asserting.
"""

import time

import numpy as np

from se3ad.basis import Basis
from se3ad.bench import BenchConfig, generate_problem, run_rows
from se3ad.derivatives import hessian_seeded, rel_frobenius, seeded_hessian_raw, third_order_nested
from se3ad.nll import NLLProblem, PriorSpec
from se3ad.oracles import naive_seeded_hessian
from se3ad.se3 import Pose3
from se3ad.verify import (
    check_basis_identities,
    check_bernoulli,
    check_branch_continuity,
    check_se3,
    check_so3,
)


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def _summary(checks):
    return "; ".join(f"{c.name} {c.error:.1e}" for c in checks)


def test_scalar_identities(acceptance):
    checks, dt = _timed(check_basis_identities)
    ok = all(c.passed for c in checks) and dt < 1.0
    acceptance(1, "scalar identities on 1000-point grid", ok, f"{_summary(checks)}; {dt:.2f}s")
    assert ok


def test_branch_continuity(acceptance):
    checks, dt = _timed(check_branch_continuity)
    ok = all(c.passed for c in checks) and dt < 1.0
    acceptance(2, "branch continuity to second order", ok, f"{_summary(checks)}; {dt:.2f}s")
    assert ok


def test_geometry(acceptance):
    def run():
        rng = np.random.default_rng(2024)
        # the Bernoulli check belongs to criterion 4 but rides along in check_se3
        return check_so3(rng) + check_se3(rng)

    checks, dt = _timed(run)
    failed = [c.name for c in checks if not c.passed]
    ok = not failed and dt < 5.0
    detail = f"{len(checks)} checks, failed: {failed or 'none'}; {dt:.2f}s"
    acceptance(3, "geometry suite", ok, detail)
    assert ok, [c.line() for c in checks if not c.passed]


def test_bernoulli_cross_check(acceptance):
    (check,), dt = _timed(lambda: check_bernoulli(np.random.default_rng(4), n=50, max_norm=0.5))
    ok = check.error < 1e-9 and dt < 1.0
    acceptance(4, "Jr^-1 vs 8-term ad-series", ok, f"max err {check.error:.2e}; {dt:.2f}s")
    assert ok


def test_table_accuracy(acceptance):
    cfg = BenchConfig(seed=42, n_landmarks=5)
    (reports, _), dt = _timed(lambda: run_rows(cfg, rows=(1, 2, 3, 6, 7), timed=False))
    r = {x.row_id: x for x in reports}
    e = {k: v.rel_err_vs_oracle for k, v in r.items()}
    ok = (
        e[7] < 1e-13
        and all(1e-8 <= e[k] <= 1e-4 for k in (2, 3))
        and 1e-5 <= e[1] <= 1e-1
        and r[6].nan_count >= 1
        and dt < 30.0
    )
    detail = (
        f"row1 {e[1]:.2e}, row2 {e[2]:.2e}, row3 {e[3]:.2e}, row7 {e[7]:.2e}, "
        f"row6 NaN entries {r[6].nan_count}; {dt:.2f}s"
    )
    acceptance(5, "Hessian accuracy rows (seed 42, 5 landmarks)", ok, detail)
    assert ok


def test_speed_structure(acceptance):
    cfg = BenchConfig()
    reports, _ = run_rows(cfg, rows=(2, 7), problem=generate_problem(cfg))
    t = {x.row_id: x.median_seconds for x in reports}
    ok = t[7] < t[2]
    detail = f"row2 {t[2] * 1e3:.2f} ms, row7 {t[7] * 1e3:.2f} ms, ratio {t[2] / t[7]:.2f}x"
    acceptance(6, "seeded analytical Hessian faster than FD of AD gradient", ok, detail)
    assert ok


def test_third_order_tensor(acceptance, rng):
    def run():
        prob = generate_problem(BenchConfig())
        t3 = third_order_nested(prob).t3
        h = 1e-5
        worst = 0.0
        for k in range(6):
            e = np.zeros(6)
            e[k] = h
            fd = (hessian_seeded(prob, point=e).hess - hessian_seeded(prob, point=-e).hess) / (2 * h)
            worst = max(worst, rel_frobenius(t3[:, :, k], fd))
        m = rng.normal(size=(6, 6))
        m = m + m.T
        quad = third_order_nested(lambda d: m @ d, point=rng.normal(size=6)).t3
        return worst, bool(np.all(quad == 0.0))

    (worst, zero), dt = _timed(run)
    ok = worst < 1e-5 and zero and dt < 10.0
    detail = f"t3 vs FD rel err {worst:.2e}, quadratic t3 exactly zero: {zero}; {dt:.2f}s"
    acceptance(7, "third-order tensor", ok, detail)
    assert ok


def test_nan_regression_lock(acceptance):
    # T_bar = T_prior puts the prior residual at exactly w = 0
    pose = Pose3.identity()
    prob = NLLProblem(pose, PriorSpec(pose, np.diag([4.0, 3, 2, 1, 2, 3])))
    naive = naive_seeded_hessian(prob)
    _, fused = seeded_hessian_raw(prob, basis=Basis.FUSED)
    fused_finite = bool(np.all(np.isfinite(fused)))
    ok = naive.has_nan and fused_finite
    detail = f"naive NaN entries {naive.nan_count}, fused all finite: {fused_finite}"
    acceptance(8, "NaN regression lock at w = 0", ok, detail)
    assert naive.has_nan
    assert fused_finite
