"""Invariant suites run by ``se3ad verify`` and by the acceptance tests.

Every check returns a :class:`Check` with the worst observed error and the
tolerance it was held to, so failures report how far off they were.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import scalars as sc
from .basis import (
    SMALL_S,
    TAYLOR_A,
    TAYLOR_B,
    TAYLOR_BETA_BAR,
    TAYLOR_BETA_BAR_S,
    TAYLOR_C,
    TAYLOR_D,
    Basis,
    closed_branch,
    eval_basis,
    taylor_branch,
)
from .bench import BenchConfig, generate_problem
from .derivatives import hessian_seeded, rel_frobenius, seeded_hessian_raw
from .nll import NLLProblem, PriorSpec, nll_grad, nll_value
from .oracles import ad_value_hessian, bernoulli_jr_inv_se3, naive_seeded_hessian
from .se3 import (
    Pose3,
    act,
    adjoint,
    compose,
    d_q_tilde_r,
    exp_se3,
    inverse,
    j_act,
    jr_inv_se3,
    jr_se3,
    log_se3,
    q_tilde_r,
)
from .so3 import (
    d_jr_inv_so3,
    exp_so3,
    jr_inv_so3,
    jr_so3,
    log_so3,
    vee,
)

BASIS_FIELDS = ("a", "b", "c", "d", "d_tilde", "beta_bar", "beta_bar_s")
N_SAMPLES = 100
FD_STEP = 1e-5


@dataclass(frozen=True)
class Check:
    name: str
    error: float
    tol: float

    @property
    def passed(self):
        return self.error <= self.tol  # NaN fails

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name}: {self.error:.3e} (tol {self.tol:.1e})"


def _flag(name, ok):
    return Check(name, 0.0 if ok else math.inf, 0.0)


def _maxabs(a):
    return float(np.max(np.abs(np.asarray(a, dtype=float))))


# basis --------------------------------------------------------------------


def identity_grid(n=1000):
    return np.logspace(-16, math.log10(9.0), n)


def check_basis_identities(grid=None):
    grid = identity_grid() if grid is None else grid
    e1 = e2 = e3 = e4 = 0.0
    h = 1e-4
    for s in grid:
        b = eval_basis(float(s))
        e1 = max(e1, abs(b.a + s * b.c - 1.0))
        e2 = max(e2, abs(b.a * b.a - 2.0 * b.b + s * b.b * b.b))
        if s > SMALL_S:
            ref = (1.0 - b.a / (2.0 * b.b)) / s
            e3 = max(e3, abs(b.d - ref) / abs(ref))
        if s > 2 * h and abs(s - SMALL_S) > 2 * h:
            fd = (eval_basis(s + h).d - eval_basis(s - h).d) / (2 * h)
            e4 = max(e4, abs(b.beta_bar - 2.0 * fd))
    return [
        Check("A + s C = 1", e1, 1e-12),
        Check("A^2 - 2B + s B^2 = 0", e2, 1e-12),
        Check("D = (1 - A/(2B))/s above the switch", e3, 1e-12),
        Check("beta_bar = 2 dD/ds (central FD)", e4, 1e-8),
    ]


def straddle_points(n=20, width=0.1):
    return SMALL_S * (1.0 + np.linspace(-width, width, n))


def _payloads(x, order):
    if order == 0:
        return [sc.real(x)]
    if order == 1:
        return [float(g) for g in x.grad]
    return [float(g.grad[j]) for g in x.grad for j in range(sc.WIDTH)]


def _seed_s(s, order):
    # s(delta) = s0 + delta_0 + delta_1^2 so both payload levels are populated
    if order == 0:
        return s
    d = sc.seed_identity(order)
    return s + d[0] + d[1] * d[1]


def check_branch_continuity(points=None):
    points = straddle_points() if points is None else points
    out = []
    for order, tol, label in ((0, 1e-12, "value"), (1, 1e-9, "1st derivative"), (2, 1e-9, "2nd derivative")):
        worst = 0.0
        for s0 in points:
            s = _seed_s(float(s0), order)
            lo, hi = taylor_branch(s), closed_branch(s)
            for f in BASIS_FIELDS:
                a = np.array(_payloads(getattr(lo, f), order))
                b = np.array(_payloads(getattr(hi, f), order))
                worst = max(worst, _maxabs(a - b))
        out.append(Check(f"Taylor vs closed branch, {label}", worst, tol))
    return out


def check_taylor_degree():
    tables = (TAYLOR_A, TAYLOR_B, TAYLOR_C, TAYLOR_D, TAYLOR_BETA_BAR, TAYLOR_BETA_BAR_S)
    ok = all(len(t) >= 5 and t[3] != 0.0 for t in tables)
    return [_flag("Taylor branches keep a nonzero cubic term", ok)]


def suite_basis(rng=None):
    return check_basis_identities() + check_branch_continuity() + check_taylor_degree()


# so3 ----------------------------------------------------------------------


def random_omega(rng, lo=1e-12, hi=math.pi - 0.1, n=N_SAMPLES):
    norms = np.exp(rng.uniform(math.log(lo), math.log(hi), n))
    axes = rng.normal(size=(n, 3))
    axes /= np.linalg.norm(axes, axis=1, keepdims=True)
    return axes * norms[:, None]


def _fd(fn, x, m, h=FD_STEP):
    e = np.zeros(len(x))
    e[m] = h
    return (np.asarray(fn(x + e), float) - np.asarray(fn(x - e), float)) / (2 * h)


def check_so3(rng):
    ws = random_omega(rng)
    rt = max(_maxabs(log_so3(exp_so3(w)) - w) for w in ws)
    small = np.array([3e-10, -6e-10, 2e-10])
    rel_small = float(np.linalg.norm(log_so3(exp_so3(small)) - small) / np.linalg.norm(small))
    moderate = random_omega(rng, 1e-3, 2.5)
    inv = max(_maxabs(jr_so3(w) @ jr_inv_so3(w) - np.eye(3)) for w in moderate)
    jr_fd = 0.0
    for w in moderate:
        r0 = exp_so3(w)
        for m in range(3):
            d = _fd(lambda x: exp_so3(x), w, m)
            col = vee(r0.T @ d)
            jr_fd = max(jr_fd, _maxabs(col - jr_so3(w)[:, m]))
    djr = max(
        _maxabs(_fd(jr_inv_so3, w, m) - d_jr_inv_so3(w, m))
        for w in moderate
        for m in range(3)
    )
    # Dual6 through Exp reproduces the right Jacobian: R^T dR/d eps_m = hat(Jr e_m)
    dual_jr = 0.0
    for w in moderate[:20]:
        seed = sc.seed_identity(1, np.concatenate([w, np.zeros(3)]))
        r = exp_so3(seed[:3])
        r0 = sc.real_array(r)
        jr = jr_so3(w)
        for m in range(3):
            dr = np.vectorize(lambda x: x.grad[m], otypes=[float])(r)
            dual_jr = max(dual_jr, _maxabs(vee(r0.T @ dr) - jr[:, m]))
    return [
        Check("Exp/Log roundtrip on |w| in [1e-12, pi-0.1]", rt, 1e-10),
        Check("Log relative error at |w| ~ 1e-9", rel_small, 1e-6),
        Check("Jr Jr^-1 = I", inv, 1e-12),
        Check("Jr vs FD of Exp", jr_fd, 1e-7),
        Check("dJr^-1/dw_m vs FD", djr, 1e-7),
        Check("Dual6 Exp reproduces Jr columns", dual_jr, 1e-12),
    ] + check_seeded_origin_so3()


def check_seeded_origin_so3():
    out = []
    for order in (1, 2):
        d = sc.seed_identity(order)[:3]
        fused = sc.isfinite_all(jr_inv_so3(d)) and all(
            sc.isfinite_all(d_jr_inv_so3(d, m)) for m in range(3)
        )
        out.append(_flag(f"fused Jr^-1 and its derivative finite at w = 0 (order {order})", fused))
    naive = not sc.isfinite_all(jr_inv_so3(sc.seed_identity(1)[:3], Basis.NAIVE))
    out.append(_flag("naive Jr^-1 produces NaN at w = 0 under Dual6", naive))
    return out


def suite_so3(rng=None):
    rng = np.random.default_rng(0) if rng is None else rng
    return check_so3(rng)


# se3 ----------------------------------------------------------------------


def random_twist(rng, rot_max=2.5, trans_scale=2.0, n=N_SAMPLES):
    ws = random_omega(rng, 1e-3, rot_max, n)
    ts = rng.normal(size=(n, 3)) * trans_scale
    return np.hstack([ws, ts])


def random_pose(rng, rot_max=2.5):
    return exp_se3(random_twist(rng, rot_max, 2.0, 1)[0])


def _pose_err(a, b):
    return max(_maxabs(a.R - b.R), _maxabs(a.p - b.p))


def check_se3(rng):
    xis = random_twist(rng)
    rt = max(_maxabs(log_se3(exp_se3(x)) - x) for x in xis)
    inv = max(_maxabs(jr_se3(x) @ jr_inv_se3(x) - np.eye(6)) for x in xis)
    hom = 0.0
    conj = 0.0
    jact = 0.0
    for _ in range(N_SAMPLES):
        t1, t2 = random_pose(rng), random_pose(rng)
        hom = max(hom, _maxabs(adjoint(compose(t1, t2)) - adjoint(t1) @ adjoint(t2)))
        xi = random_twist(rng, 1.0, 0.5, 1)[0]
        lhs = exp_se3(adjoint(t1) @ xi)
        rhs = compose(compose(t1, exp_se3(xi)), inverse(t1))
        conj = max(conj, _pose_err(lhs, rhs))
        x = rng.normal(size=3) * 3.0
        fd = np.column_stack(
            [_fd(lambda d: act(compose(t1, exp_se3(d)), x), np.zeros(6), m) for m in range(6)]
        )
        jact = max(jact, _maxabs(fd - j_act(t1, x)))
    dq = 0.0
    for x in xis:
        w, t = x[:3], x[3:]
        for m in range(3):
            fd = _fd(lambda v: q_tilde_r(v, t), w, m)
            dq = max(dq, _maxabs(fd - d_q_tilde_r(w, t, m)))
    return [
        Check("Exp/Log roundtrip", rt, 1e-10),
        Check("Jr Jr^-1 = I (6x6)", inv, 1e-12),
        Check("adjoint homomorphism", hom, 1e-12),
        Check("Exp(Ad_T xi) = T Exp(xi) T^-1", conj, 1e-10),
        Check("point-action Jacobian vs FD", jact, 1e-7),
        Check("dQ~r/dw_m vs FD", dq, 1e-7),
    ] + check_bernoulli(rng) + check_seeded_origin_se3()


def check_bernoulli(rng, n=50, max_norm=0.5):
    worst = 0.0
    for _ in range(n):
        xi = rng.normal(size=6)
        xi *= max_norm * rng.uniform() ** (1 / 6) / np.linalg.norm(xi)
        worst = max(worst, _maxabs(jr_inv_se3(xi) - bernoulli_jr_inv_se3(xi, 8)))
    return [Check("Jr^-1 vs 8-term ad-series, |xi| <= 0.5", worst, 1e-9)]


def check_seeded_origin_se3():
    ok = True
    for order in (1, 2):
        d = sc.seed_identity(order)
        pose = exp_se3(d)
        ok &= sc.isfinite_all(pose.R) and sc.isfinite_all(pose.p)
        ok &= sc.isfinite_all(log_se3(pose))
        ok &= sc.isfinite_all(jr_se3(d)) and sc.isfinite_all(jr_inv_se3(d))
        ok &= all(sc.isfinite_all(d_q_tilde_r(d[:3], d[3:], m)) for m in range(3))
    return [_flag("SE(3) primitives finite at xi = 0 under Dual6 and NestedDual6", ok)]


def suite_se3(rng=None):
    rng = np.random.default_rng(1) if rng is None else rng
    return check_se3(rng)


# nll ----------------------------------------------------------------------


def fd_gradient(f, x, h=1e-6):
    return np.array([_fd(lambda d: f(d), x, m, h) for m in range(len(x))])


def check_nll(rng, n_problems=20):
    worst = 0.0
    for k in range(n_problems):
        prob = generate_problem(BenchConfig(seed=1000 + k))
        d = rng.normal(size=6)
        d *= 0.1 * rng.uniform() / np.linalg.norm(d)
        g = nll_grad(prob, d).astype(float)
        fd = fd_gradient(lambda x: float(nll_value(prob, x)), d)
        worst = max(worst, float(np.linalg.norm(g - fd) / np.linalg.norm(fd)))

    prob = generate_problem(BenchConfig())
    d = np.array([0.01, -0.02, 0.015, 0.05, -0.03, 0.02])
    plain = nll_grad(prob, d)
    duals = nll_grad(prob, sc.seed_identity(1, d))
    same = all(float(a) == float(b.val) for a, b in zip(plain, duals))

    res = hessian_seeded(prob)
    _, oracle = ad_value_hessian(prob)
    rel = rel_frobenius(res.hess, oracle)

    prior_only = NLLProblem(
        Pose3.identity(), PriorSpec(Pose3.identity(), np.eye(6)), (), prob.intrinsics
    )
    eye_err = _maxabs(hessian_seeded(prior_only).hess - np.eye(6))

    return [
        Check("analytical gradient vs FD of value (20 problems)", worst, 1e-5),
        _flag("Dual6 value slots bit-identical to float gradient", same),
        Check("seeded Hessian vs nested value Hessian", rel, 5e-15),
        Check("seeded Hessian symmetry defect", res.symmetry_defect, 1e-10),
        Check("prior-only Hessian = I", eye_err, 1e-10),
    ] + check_nan_lock(prob)


def check_nan_lock(prob):
    naive = naive_seeded_hessian(prob)
    _, fused = seeded_hessian_raw(prob)
    return [
        _flag(
            "naive seeded Hessian has NaN, fused is NaN-free (same problem)",
            naive.has_nan and bool(np.all(np.isfinite(fused))),
        )
    ]


def suite_nll(rng=None):
    rng = np.random.default_rng(2) if rng is None else rng
    return check_nll(rng)


SUITES = {
    "basis": suite_basis,
    "so3": suite_so3,
    "se3": suite_se3,
    "nll": suite_nll,
}


def run_suites(names):
    """Run the named suites; returns ``{suite: [Check, ...]}``."""
    if "all" in names:
        names = list(SUITES)
    return {name: SUITES[name]() for name in names}
