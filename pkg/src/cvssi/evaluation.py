"""Agreement between objective metric scores and subjective scores.

SROCC and KROCC measure monotonic agreement on the raw scores. PLCC and
RMSE are computed after mapping the objective scores onto the subjective
scale with the five-parameter logistic

    p(x) = a1 * (1/2 - 1 / (1 + exp(a2 * (x - a3)))) + a4 * x + a5

Correlations are reported signed; a metric where lower means better
correlates negatively with MOS.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import optimize, special, stats

from .errors import RejectedInputError, ShapeError, UndefinedCorrelationError

FIT_MAXITER = 5000
FIT_TOL = 1e-10


@dataclass(frozen=True)
class ScorePairs:
    """Objective scores ``x`` aligned with subjective scores ``s``."""

    objective: np.ndarray
    subjective: np.ndarray
    labels: Optional[tuple] = None

    def __post_init__(self):
        x, s = _pair(self.objective, self.subjective, min_n=4)
        object.__setattr__(self, "objective", x)
        object.__setattr__(self, "subjective", s)
        if self.labels is not None and len(self.labels) != len(x):
            raise ShapeError("labels and scores differ in length")

    @property
    def n(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LogisticParams:
    a1: float
    a2: float
    a3: float
    a4: float
    a5: float
    converged: bool = True

    def __call__(self, x) -> np.ndarray:
        return _logistic(self.as_array(), np.asarray(x, dtype=np.float64))

    def as_array(self) -> np.ndarray:
        return np.array([self.a1, self.a2, self.a3, self.a4, self.a5])


@dataclass(frozen=True)
class CorrelationReport:
    srocc: float
    krocc: float
    plcc: float
    rmse: float
    logistic: Optional[LogisticParams]
    n: int

    def as_dict(self) -> dict:
        d = {"srocc": self.srocc, "krocc": self.krocc, "plcc": self.plcc, "rmse": self.rmse, "n": self.n}
        if self.logistic is not None:
            d.update({k: getattr(self.logistic, k) for k in ("a1", "a2", "a3", "a4", "a5")})
            d["converged"] = self.logistic.converged
        return d


def _pair(x, s, min_n=2):
    x = np.asarray(x, dtype=np.float64).ravel()
    s = np.asarray(s, dtype=np.float64).ravel()
    if x.shape != s.shape:
        raise ShapeError(f"score vectors differ in length: {x.size} vs {s.size}")
    if x.size < min_n:
        raise ShapeError(f"need at least {min_n} score pairs, got {x.size}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(s))):
        raise RejectedInputError("score vectors contain non-finite values")
    return x, s


def _require_variance(*vectors):
    for v in vectors:
        if np.all(v == v[0]):
            raise UndefinedCorrelationError("correlation is undefined for a constant vector")


def _pearson(a, b) -> float:
    a = a - a.mean()
    b = b - b.mean()
    r = float(a @ b / np.sqrt((a @ a) * (b @ b)))
    return max(-1.0, min(1.0, r))


def srocc(x, s) -> float:
    """Spearman rank-order correlation.

    Tied values receive their average rank. Without ties this is
    ``1 - 6 sum(d_i^2) / (n (n^2 - 1))``; with ties it is the Pearson
    correlation of the averaged ranks.
    """
    x, s = _pair(x, s)
    _require_variance(x, s)
    rx = stats.rankdata(x)
    rs = stats.rankdata(s)
    n = x.size
    if np.unique(x).size == n and np.unique(s).size == n:
        d = rx - rs
        return float(1.0 - 6.0 * (d @ d) / (n * (n * n - 1.0)))
    return _pearson(rx, rs)


def krocc(x, s, chunk: int = 1024) -> float:
    """Kendall rank-order correlation ``(n_c - n_d) / (n (n - 1) / 2)``.

    A pair tied in either vector counts as neither concordant nor
    discordant.
    """
    x, s = _pair(x, s)
    _require_variance(x, s)
    n = x.size
    total = 0
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        sx = np.sign(x[start:stop, None] - x[None, :])
        ss = np.sign(s[start:stop, None] - s[None, :])
        total += int(np.sum(sx * ss, dtype=np.int64))
    # every unordered pair was counted twice
    return float(total / 2 / (0.5 * n * (n - 1)))


def _logistic(p, x):
    a1, a2, a3, a4, a5 = p
    with np.errstate(over="ignore"):
        return a1 * (0.5 - special.expit(-a2 * (x - a3))) + a4 * x + a5


def _linear_fit(x, s):
    A = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(A, s, rcond=None)
    return slope, intercept


def _sse(p, x, s) -> float:
    r = s - _logistic(p, x)
    val = float(r @ r)
    return val if np.isfinite(val) else np.inf


def fit_logistic(x, s) -> LogisticParams:
    """Least-squares fit of the five-parameter logistic by Nelder-Mead.

    The search runs in standardized coordinates from two deterministic
    starts: a sigmoid start (amplitude = range of ``s``, unit slope in
    standardized ``x``, centered at the mean) and the pure linear least
    squares solution. The result is never worse than the linear fit.
    """
    x, s = _pair(x, s, min_n=5)
    mx, sx = x.mean(), x.std()
    if sx == 0:
        raise UndefinedCorrelationError("cannot fit a mapping to constant objective scores")
    ms, ss = s.mean(), s.std()
    if ss == 0:
        ss = 1.0
    xn = (x - mx) / sx
    sn = (s - ms) / ss
    sst = float(sn @ sn) or 1.0

    slope_n, icpt_n = _linear_fit(xn, sn)
    starts = [
        np.array([(s.max() - s.min()) / ss, 1.0, 0.0, slope_n, icpt_n]),
        np.array([0.0, 1.0, 0.0, slope_n, icpt_n]),
    ]

    best, best_f, converged = None, np.inf, False
    for p0 in starts:
        res = optimize.minimize(
            lambda p: _sse(p, xn, sn) / sst,
            p0,
            method="Nelder-Mead",
            options={"maxiter": FIT_MAXITER, "maxfev": 2 * FIT_MAXITER, "xatol": FIT_TOL, "fatol": FIT_TOL},
        )
        if res.fun < best_f:
            best, best_f, converged = res.x, res.fun, bool(res.success)

    b1, b2, b3, b4, b5 = best
    mapped = np.array([
        ss * b1,
        b2 / sx,
        mx + sx * b3,
        ss * b4 / sx,
        ss * (b5 - b4 * mx / sx) + ms,
    ])

    # Guard the linear-fit bound in original units, after back-transformation.
    slope, icpt = _linear_fit(x, s)
    linear = np.array([0.0, 1.0 / sx, mx, slope, icpt])
    if _sse(linear, x, s) <= _sse(mapped, x, s):
        mapped = linear
    return LogisticParams(*map(float, mapped), converged=converged)


def plcc(x, s, mapped: bool = True, fit: Optional[LogisticParams] = None) -> float:
    """Pearson linear correlation of ``p`` and ``s``.

    ``p`` is the logistic-mapped ``x`` when ``mapped`` is true, else ``x``.
    """
    x, s = _pair(x, s)
    p = _mapped(x, s, mapped, fit)
    _require_variance(p, s)
    return _pearson(p, s)


def rmse(x, s, mapped: bool = True, fit: Optional[LogisticParams] = None) -> float:
    x, s = _pair(x, s)
    p = _mapped(x, s, mapped, fit)
    r = s - p
    return float(np.sqrt(r @ r / r.size))


def _mapped(x, s, mapped, fit):
    if not mapped:
        return x
    if fit is None:
        fit = fit_logistic(x, s)
    return fit(x)


def linear_rmse(x, s) -> float:
    """RMSE of the closed-form least-squares line; the bound for the mapped RMSE."""
    x, s = _pair(x, s)
    slope, icpt = _linear_fit(x, s)
    r = s - (slope * x + icpt)
    return float(np.sqrt(r @ r / r.size))


def evaluate(x, s) -> CorrelationReport:
    """All four indices for one metric over one dataset."""
    if isinstance(x, ScorePairs):
        x, s = x.objective, x.subjective
    x, s = _pair(x, s, min_n=5)
    fit = fit_logistic(x, s)
    return CorrelationReport(
        srocc=srocc(x, s),
        krocc=krocc(x, s),
        plcc=plcc(x, s, fit=fit),
        rmse=rmse(x, s, fit=fit),
        logistic=fit,
        n=x.size,
    )


def overall_weighted(reports: Sequence) -> CorrelationReport:
    """Size-weighted average of per-dataset reports.

    ``reports`` holds ``(CorrelationReport, dataset_size)`` pairs. The
    aggregate carries no logistic parameters.
    """
    reports = list(reports)
    if not reports:
        raise ShapeError("no reports to aggregate")
    if len(reports) == 1:
        return reports[0][0]
    sizes = np.array([size for _, size in reports], dtype=np.float64)
    if np.any(sizes <= 0):
        raise ShapeError("dataset sizes must be positive")
    w = sizes / sizes.sum()

    def avg(field):
        return float(sum(wi * getattr(r, field) for wi, (r, _) in zip(w, reports)))

    return CorrelationReport(
        srocc=avg("srocc"),
        krocc=avg("krocc"),
        plcc=avg("plcc"),
        rmse=avg("rmse"),
        logistic=None,
        n=int(sizes.sum()),
    )

