"""Lognormal size models, Weibull accumulation curves and fit quality."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateSample, DomainError, EmptySample, NoConvergence, TooFewPoints
from .stats import empirical_cdf, log2_bin_edges

SQRT2 = math.sqrt(2.0)
SQRT2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class LognormalParams:
    mu: float
    sigma: float

    def __post_init__(self) -> None:
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise DomainError(f"sigma must be a positive finite number, got {self.sigma}")
        if not math.isfinite(self.mu):
            raise DomainError(f"mu must be finite, got {self.mu}")


@dataclass(frozen=True)
class WeibullParams:
    gamma: float
    beta: float

    def __post_init__(self) -> None:
        if not (self.gamma > 0 and self.beta > 0):
            raise DomainError(f"gamma and beta must be positive, got {self.gamma}, {self.beta}")


@dataclass(frozen=True)
class FitQuality:
    r_squared: float
    se: float
    n_points: int


@dataclass(frozen=True)
class WeibullFit:
    params: WeibullParams
    quality: FitQuality
    converged: bool
    iterations: int


# --- distributions ---------------------------------------------------------

def normal_cdf(z: float) -> float:
    # erfc keeps full relative precision in the lower tail
    return 0.5 * math.erfc(-z / SQRT2)


def lognormal_pdf(x: float, p: LognormalParams) -> float:
    if not x > 0:
        raise DomainError(f"lognormal density needs x > 0, got {x}")
    z = (math.log(x) - p.mu) / p.sigma
    return math.exp(-0.5 * z * z) / (p.sigma * x * SQRT2PI)


def lognormal_cdf(x: float, p: LognormalParams) -> float:
    if not x > 0:
        raise DomainError(f"lognormal CDF needs x > 0, got {x}")
    if math.isinf(x):
        return 1.0
    return normal_cdf((math.log(x) - p.mu) / p.sigma)


def weibull_cdf(x: float, p: WeibullParams) -> float:
    if not x >= 0:
        raise DomainError(f"Weibull CDF needs x >= 0, got {x}")
    return -math.expm1(-((x / p.gamma) ** p.beta))


# --- goodness of fit -------------------------------------------------------

def _pair(actual: Sequence[float], predicted: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    y = np.asarray(actual, dtype=float)
    yp = np.asarray(predicted, dtype=float)
    if y.shape != yp.shape:
        raise ValueError("actual and predicted differ in length")
    return y, yp


def r_squared(actual: Sequence[float], predicted: Sequence[float]) -> float:
    y, yp = _pair(actual, predicted)
    if y.size == 0:
        raise EmptySample()
    ss_res = float(np.sum((y - yp) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        raise DegenerateSample("R-squared undefined: actual values are all equal")
    return 1.0 - ss_res / ss_tot


def standard_error(actual: Sequence[float], predicted: Sequence[float]) -> float:
    y, yp = _pair(actual, predicted)
    if y.size < 3:
        raise TooFewPoints(f"standard error of estimate needs >= 3 points, got {y.size}")
    return math.sqrt(float(np.sum((y - yp) ** 2)) / (y.size - 2))


def fit_quality(actual: Sequence[float], predicted: Sequence[float]) -> FitQuality:
    return FitQuality(r_squared(actual, predicted), standard_error(actual, predicted), len(actual))


def cdf_grid(sizes: Sequence[float]) -> tuple[list[float], list[float]]:
    """Empirical CDF read off at power-of-two size boundaries from min to max."""
    ecdf = empirical_cdf(sizes)
    xs = log2_bin_edges(min(sizes), max(sizes))
    return xs, [ecdf(x) for x in xs]


def fit_quality_cdf(sizes: Sequence[float], p: LognormalParams) -> FitQuality:
    if len(sizes) == 0:
        raise EmptySample()
    xs, ys = cdf_grid(sizes)
    if len(xs) < 3:
        raise TooFewPoints(f"size range spans only {len(xs)} power-of-two boundaries, need >= 3")
    return fit_quality(ys, [lognormal_cdf(x, p) for x in xs])


# --- lognormal fitting -----------------------------------------------------

def fit_lognormal_mle(sizes: Sequence[float]) -> LognormalParams:
    """Maximum-likelihood lognormal: mean and population std of ln(size)."""
    if len(sizes) == 0:
        raise EmptySample()
    arr = np.asarray(sizes, dtype=float)
    if np.any(arr <= 0):
        raise DomainError("sizes must be positive")
    if np.all(arr == arr[0]):
        raise DegenerateSample("all sizes are equal; sigma would be 0")
    logs = np.log(arr)
    mu = float(logs.mean())
    sigma = float(np.sqrt(np.mean((logs - mu) ** 2)))
    return LognormalParams(mu, sigma)


def fit_lognormal_cdf(sizes: Sequence[float]) -> tuple[LognormalParams, FitQuality]:
    """Least-squares lognormal CDF fit on the power-of-two grid, started from the MLE.

    Kept for comparison with :func:`fit_lognormal_mle`.
    """
    start = fit_lognormal_mle(sizes)
    xs, ys = cdf_grid(sizes)
    if len(xs) < 3:
        raise TooFewPoints(f"size range spans only {len(xs)} power-of-two boundaries, need >= 3")
    logx = np.log(np.asarray(xs))
    y = np.asarray(ys)

    def model(theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        mu, sigma = theta
        z = (logx - mu) / sigma
        f = np.array([normal_cdf(v) for v in z])
        dens = np.exp(-0.5 * z * z) / SQRT2PI
        jac = np.column_stack([-dens / sigma, -dens * z / sigma])
        return f, jac

    theta, _, _ = gauss_newton(model, y, np.array([start.mu, start.sigma]), positive=(False, True))
    params = LognormalParams(float(theta[0]), float(theta[1]))
    return params, fit_quality(ys, [lognormal_cdf(x, params) for x in xs])


# --- Weibull fitting -------------------------------------------------------

def gauss_newton(
    model: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
    y: np.ndarray,
    theta0: np.ndarray,
    positive: Sequence[bool] = (),
    xtol: float = 1e-10,
    max_iter: int = 100,
) -> tuple[np.ndarray, bool, int]:
    """Damped Gauss-Newton for least squares ``min |y - f(theta)|^2``.

    ``model`` returns predictions and their Jacobian. Each step is halved
    until the residual sum of squares drops and every parameter flagged in
    ``positive`` stays > 0. Stops when the applied step is below ``xtol``
    in every coordinate; returns (theta, converged, iterations).
    """
    theta = np.array(theta0, dtype=float)
    mask = np.zeros(theta.size, dtype=bool)
    mask[: len(positive)] = positive
    f, jac = model(theta)
    sse = float(np.sum((y - f) ** 2))
    for it in range(1, max_iter + 1):
        step, *_ = np.linalg.lstsq(jac, y - f, rcond=None)
        if not np.all(np.isfinite(step)):
            return theta, False, it
        scale = 1.0
        accepted = False
        for _ in range(60):
            cand = theta + scale * step
            if not np.any(cand[mask] <= 0):
                f_c, jac_c = model(cand)
                sse_c = float(np.sum((y - f_c) ** 2))
                if np.isfinite(sse_c) and sse_c <= sse:
                    accepted = True
                    break
            scale *= 0.5
        if not accepted:
            # no descent along the Gauss-Newton direction: numerical minimum
            return theta, True, it
        change = np.max(np.abs(cand - theta))
        theta, f, jac, sse = cand, f_c, jac_c, sse_c
        if change < xtol:
            return theta, True, it
    return theta, False, max_iter


def _weibull_model(x: np.ndarray) -> Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]:
    logx = np.log(x)

    def model(theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        gamma, beta = theta
        log_ratio = logx - math.log(gamma)
        u = np.exp(beta * log_ratio)
        surv = np.exp(-u)
        f = -np.expm1(-u)
        d_gamma = -surv * u * beta / gamma
        d_beta = surv * u * log_ratio
        return f, np.column_stack([d_gamma, d_beta])

    return model


def weibull_initial_guess(x: Sequence[float], y: Sequence[float]) -> WeibullParams:
    """Line fit of ln(-ln(1 - y)) on ln x; slope is beta, intercept -beta ln gamma.

    Only points with 0 < y < 1 take part.
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    keep = (ya > 0) & (ya < 1)
    if np.count_nonzero(keep) >= 2 and np.ptp(xa[keep]) > 0:
        lx = np.log(xa[keep])
        ly = np.log(-np.log1p(-ya[keep]))
        slope, intercept = np.polyfit(lx, ly, 1)
        if slope > 0 and np.isfinite(intercept):
            return WeibullParams(float(math.exp(-intercept / slope)), float(slope))
    return WeibullParams(float(np.median(xa)), 1.0)


def fit_weibull(points: Sequence[tuple[float, float]], max_iter: int = 100) -> WeibullFit:
    """Least-squares fit of the Weibull CDF to (x, y) points with x in (0, 1]."""
    if len(points) < 4:
        raise TooFewPoints(f"Weibull fit needs >= 4 points, got {len(points)}")
    x = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    if np.any(x <= 0):
        raise DomainError("x values must be positive")
    if np.any(np.diff(x) <= 0):
        raise ValueError("x values must be strictly increasing")
    if np.any(np.diff(y) < 0):
        raise ValueError("y values must be non-decreasing")

    start = weibull_initial_guess(x, y)
    theta, converged, iterations = gauss_newton(
        _weibull_model(x), y, np.array([start.gamma, start.beta]), positive=(True, True), max_iter=max_iter
    )
    if not converged:
        warnings.warn(
            f"Weibull fit stopped after {iterations} iterations without converging", NoConvergence, stacklevel=2
        )
    params = WeibullParams(float(theta[0]), float(theta[1]))
    predicted, _ = _weibull_model(x)(theta)
    return WeibullFit(params, fit_quality(y, predicted), converged, iterations)
