"""Synthetic PnP problem and the seven Hessian paths compared on it.

Rows::

    1  finite differences of the value
    2  finite differences of a forward-mode gradient of the value
    3  finite differences of the analytical gradient
    4  nested forward mode on the value, naive basis
    5  nested forward mode on the value, fused basis (reference)
    6  one seeded pass of the analytical gradient, naive basis
    7  one seeded pass of the analytical gradient, fused basis
"""

import csv
import io
import json
import math
import statistics
import time
from dataclasses import asdict, dataclass, fields, replace
from datetime import datetime, timezone
from functools import partial
from typing import Optional, Tuple

import numpy as np

from . import scalars as sc
from .basis import Basis
from .derivatives import hessian_seeded, rel_frobenius
from .nll import (
    DEPTH_MIN,
    Intrinsics,
    NLLProblem,
    Observation,
    PriorSpec,
    nll_grad,
)
from .oracles import (
    ad_traced_gradient,
    ad_value_hessian,
    fd_hessian_of_gradient,
    fd_hessian_of_value,
    naive_seeded_hessian,
)
from .se3 import act, compose, exp_se3, inverse

ALL_ROWS = (1, 2, 3, 4, 5, 6, 7)
ORACLE_ROW = 5
REFERENCE_ROW = 2
ROW_LABELS = {
    1: "FD of value",
    2: "FD of AD-traced gradient",
    3: "FD of analytical gradient (fused)",
    4: "nested AD of value (naive)",
    5: "nested AD of value (fused, oracle)",
    6: "seeded analytical gradient (naive)",
    7: "seeded analytical gradient (fused)",
}
MAX_DRAWS = 1000
# smallest landmark depth accepted at the base pose
DEPTH_FLOOR = 0.5
# Benchmark FD steps. Both are coarser than the round-off optimum so the FD
# rows sit in the truncation-dominated regime of a typical hand-tuned FD
# check; pass the oracle module's FD_*_STEP values for the most accurate FD.
TABLE_FD_VALUE_STEP = 1e-2
TABLE_FD_GRAD_STEP = 1e-4


@dataclass(frozen=True)
class BenchConfig:
    seed: int = 42
    n_landmarks: int = 5
    kappa: float = 1.0
    prior_info_diag: Tuple[float, ...] = (100.0, 100.0, 100.0, 25.0, 25.0, 25.0)
    noise_sigma: float = 1.0
    repeats: int = 7
    warmup: int = 2
    fx: float = 500.0
    fy: float = 500.0
    cx: float = 320.0
    cy: float = 240.0
    pixel_sigma: float = 1.0
    fd_value_step: float = TABLE_FD_VALUE_STEP
    fd_grad_step: float = TABLE_FD_GRAD_STEP
    landmarks: Optional[Tuple[Tuple[float, float, float], ...]] = None
    measurements: Optional[Tuple[Tuple[float, float], ...]] = None

    def __post_init__(self):
        for name in ("prior_info_diag", "landmarks", "measurements"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, _tupleize(v))
        if self.landmarks is not None:
            object.__setattr__(self, "n_landmarks", len(self.landmarks))
        if self.n_landmarks < 1:
            raise ValueError("n_landmarks must be at least 1")
        if self.repeats < 3:
            raise ValueError("repeats must be at least 3")
        if self.warmup < 0:
            raise ValueError("warmup must be nonnegative")
        if not (self.fd_value_step > 0.0 and self.fd_grad_step > 0.0):
            raise ValueError("finite-difference steps must be positive")
        if len(self.prior_info_diag) != 6 or min(self.prior_info_diag) <= 0.0:
            raise ValueError("prior_info_diag needs six positive entries")
        if self.measurements is not None:
            if self.landmarks is None or len(self.measurements) != len(self.landmarks):
                raise ValueError("measurements need a landmark list of the same length")

    @property
    def intrinsics(self):
        return Intrinsics(self.fx, self.fy, self.cx, self.cy)

    def to_dict(self):
        return {
            k: (_listize(v) if isinstance(v, tuple) else v)
            for k, v in asdict(self).items()
        }

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def _tupleize(v):
    if isinstance(v, (list, tuple, np.ndarray)):
        return tuple(_tupleize(x) for x in v)
    return float(v)


def _listize(v):
    if isinstance(v, tuple):
        return [_listize(x) for x in v]
    return v


def load_config(path):
    with open(path) as fh:
        return BenchConfig.from_dict(json.load(fh))


def save_config(config, path):
    with open(path, "w") as fh:
        json.dump(config.to_dict(), fh, indent=2)
        fh.write("\n")


def _bounded_twist(rng, max_rot, max_trans):
    w = rng.normal(size=3)
    t = rng.normal(size=3)
    w *= max_rot * rng.uniform() / np.linalg.norm(w)
    t *= max_trans * rng.uniform() / np.linalg.norm(t)
    return np.concatenate([w, t])


def _frustum_point(rng, config):
    depth = rng.uniform(2.0, 8.0)
    half_w = config.cx / config.fx
    half_h = config.cy / config.fy
    x = rng.uniform(-half_w, half_w) * depth
    y = rng.uniform(-half_h, half_h) * depth
    return np.array([x, y, depth])


def _sample_poses(rng):
    t_prior = exp_se3(_bounded_twist(rng, 0.5, 2.0))
    return t_prior, compose(t_prior, exp_se3(_bounded_twist(rng, 0.2, 0.5)))


def true_pose(config):
    """The pose the measurements of :func:`generate_problem` were taken from."""
    return _sample_poses(np.random.default_rng(config.seed))[1]


def generate_problem(config):
    """Deterministic PnP problem for ``config``.

    The prior mean is a random pose; the true pose differs from it by a twist
    with ``|w| <= 0.2`` and ``|t| <= 0.5``. Landmarks are drawn in the true
    camera's frustum at depth 2 to 8 and redrawn until they also sit in front
    of the base pose. The base pose equals the prior mean.
    """
    rng = np.random.default_rng(config.seed)
    t_prior, t_true = _sample_poses(rng)
    t_bar = t_prior
    intr = config.intrinsics
    to_world = inverse(t_true)

    if config.landmarks is not None:
        points = [np.array(x, float) for x in config.landmarks]
        for x in points:
            if act(t_bar, x)[2] <= DEPTH_MIN:
                raise ValueError(f"landmark {x.tolist()} is behind the base pose")
    else:
        points = []
        for _ in range(MAX_DRAWS):
            x = act(to_world, _frustum_point(rng, config))
            if act(t_bar, x)[2] > DEPTH_FLOOR:
                points.append(x)
                if len(points) == config.n_landmarks:
                    break
        else:
            raise RuntimeError(f"could not place {config.n_landmarks} landmarks")

    if config.measurements is not None:
        zs = [np.array(z, float) for z in config.measurements]
    else:
        zs = [
            intr.project(act(t_true, x)) + config.noise_sigma * rng.normal(size=2)
            for x in points
        ]
    whitening = np.eye(2) / config.pixel_sigma
    obs = tuple(Observation(x, z, whitening, config.kappa) for x, z in zip(points, zs))
    prior = PriorSpec(t_prior, np.diag(config.prior_info_diag))
    return NLLProblem(t_bar, prior, obs, intr)


@dataclass
class RowReport:
    row_id: int
    label: str
    rel_err_vs_oracle: Optional[float] = None
    speed_vs_row2: Optional[float] = None
    nan_count: int = 0
    median_seconds: Optional[float] = None
    error: Optional[str] = None

    def to_dict(self):
        d = asdict(self)
        for k in ("rel_err_vs_oracle", "speed_vs_row2", "median_seconds"):
            if d[k] is not None and not math.isfinite(d[k]):
                d[k] = None
        return d


def row_methods(problem, config, backend=None):
    """Map row id to a zero-argument callable returning a float 6x6 Hessian."""
    seeded = partial(hessian_seeded, backend=backend)
    return {
        1: lambda: fd_hessian_of_value(problem, config.fd_value_step),
        2: lambda: fd_hessian_of_gradient(
            partial(ad_traced_gradient, problem, backend=backend), config.fd_grad_step
        ),
        3: lambda: fd_hessian_of_gradient(
            lambda d: nll_grad(problem, d).astype(float), config.fd_grad_step
        ),
        4: lambda: ad_value_hessian(problem, basis=Basis.NAIVE, backend=backend)[1],
        5: lambda: ad_value_hessian(problem, backend=backend)[1],
        6: lambda: naive_seeded_hessian(problem, backend=backend).hess,
        7: lambda: seeded(problem).hess,
    }


def time_call(fn, repeats, warmup):
    """Result of the last call and the median wall time over ``repeats`` calls."""
    for _ in range(warmup):
        fn()
    times = []
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return out, statistics.median(times)


def run_rows(config, rows=ALL_ROWS, problem=None, backend=None, timed=True):
    """Compute each requested row's Hessian and compare it with the oracle.

    Returns ``(reports, oracle_hessian)``. A row that raises is reported with
    its error message instead of aborting the run.
    """
    rows = tuple(sorted(set(rows)))
    bad = [r for r in rows if r not in ALL_ROWS]
    if bad:
        raise ValueError(f"unknown rows {bad}")
    problem = generate_problem(config) if problem is None else problem
    methods = row_methods(problem, config, backend)
    oracle = methods[ORACLE_ROW]()

    timings = {}
    results = {}
    needed = rows + ((REFERENCE_ROW,) if timed and REFERENCE_ROW not in rows else ())
    for r in needed:
        try:
            if timed:
                results[r], timings[r] = time_call(methods[r], config.repeats, config.warmup)
            else:
                results[r] = methods[r]()
        except Exception as exc:  # reported per row
            results[r] = exc

    ref_time = timings.get(REFERENCE_ROW)
    reports = []
    for r in rows:
        rep = RowReport(r, ROW_LABELS[r])
        res = results[r]
        if isinstance(res, Exception):
            rep.error = f"{type(res).__name__}: {res}"
            reports.append(rep)
            continue
        h = np.asarray(res, float)
        rep.nan_count = int(np.count_nonzero(~np.isfinite(h)))
        rep.rel_err_vs_oracle = rel_frobenius(h, oracle)
        if r in timings:
            rep.median_seconds = timings[r]
            if ref_time is not None and timings[r] > 0.0:
                rep.speed_vs_row2 = ref_time / timings[r]
        reports.append(rep)
    return reports, oracle


def _now():
    return datetime.now(timezone.utc).isoformat()


def build_report(config, rows=ALL_ROWS, backend=None):
    started = _now()
    reports, oracle = run_rows(config, rows, backend=backend)
    return {
        "config": {**config.to_dict(), "backend": backend or sc.BACKEND},
        "rows": [r.to_dict() for r in reports],
        "oracle_hessian": [float(x) for x in np.asarray(oracle).ravel()],
        "timestamps": {"started": started, "finished": _now()},
    }


CSV_FIELDS = [f.name for f in fields(RowReport)]


def format_report(report, fmt):
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in report["rows"]:
            writer.writerow({k: ("" if row[k] is None else row[k]) for k in CSV_FIELDS})
        return buf.getvalue()
    if fmt == "table":
        return _table(report)
    raise ValueError(f"unknown format {fmt!r}")


def _fmt(v, spec):
    return "-" if v is None else format(v, spec)


def _table(report):
    head = f"{'row':>3}  {'method':<36} {'rel err':>10} {'speed':>7} {'NaN':>4} {'median s':>10}"
    lines = [head, "-" * len(head)]
    for r in report["rows"]:
        if r["error"]:
            lines.append(f"{r['row_id']:>3}  {r['label']:<36} error: {r['error']}")
            continue
        rel = "NaN" if r["nan_count"] else _fmt(r["rel_err_vs_oracle"], ".3e")
        lines.append(
            f"{r['row_id']:>3}  {r['label']:<36} {rel:>10} "
            f"{_fmt(r['speed_vs_row2'], '.2f'):>7} {r['nan_count']:>4} "
            f"{_fmt(r['median_seconds'], '.3e'):>10}"
        )
    cfg = report["config"]
    lines.append("")
    lines.append(
        f"seed={cfg['seed']} landmarks={cfg['n_landmarks']} backend={cfg['backend']} "
        f"fd steps: value={cfg['fd_value_step']:g} gradient={cfg['fd_grad_step']:g}"
    )
    return "\n".join(lines) + "\n"


def parse_rows(text):
    """``"all"`` or a comma-separated list such as ``"1,2,7"`` or ``"1-3,7"``."""
    text = text.strip().lower()
    if text == "all":
        return ALL_ROWS
    out = set()
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = (int(x) for x in part.split("-", 1))
            out.update(range(lo, hi + 1))
        elif part:
            out.add(int(part))
    bad = sorted(r for r in out if r not in ALL_ROWS)
    if bad or not out:
        raise ValueError(f"rows must be drawn from 1..7, got {text!r}")
    return tuple(sorted(out))


def with_overrides(config, **kw):
    return replace(config, **{k: v for k, v in kw.items() if v is not None})


def compare_backends(config=None, rows=(5, 7), repeats=None, warmup=None):
    """Median Hessian times per available scalar backend.

    Returns ``{backend: {row_id: seconds}}`` plus the relative difference of
    each backend's Row 7 Hessian from the first backend's, which should be at
    rounding level since both implement the same arithmetic.
    """
    config = BenchConfig() if config is None else config
    repeats = config.repeats if repeats is None else repeats
    warmup = config.warmup if warmup is None else warmup
    problem = generate_problem(config)
    times, hessians = {}, {}
    for name in sc.BACKENDS:
        methods = row_methods(problem, config, backend=name)
        times[name] = {}
        for r in rows:
            h, t = time_call(methods[r], repeats, warmup)
            times[name][r] = t
            hessians.setdefault(name, h)
    first = next(iter(hessians))
    agreement = {n: rel_frobenius(h, hessians[first]) for n, h in hessians.items()}
    return {"times": times, "agreement": agreement}
