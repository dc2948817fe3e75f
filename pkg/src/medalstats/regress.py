"""Grouped-binomial logistic regression.

Each row is a nation (or nation-Games) with ``successes`` medals out of
``trials`` medal chances and a covariate vector x.  The model is

    p(x) = exp(b0 + b1 x1 + ... + bp xp) / (1 + exp(b0 + b1 x1 + ... + bp xp))

fitted by maximum likelihood with Newton iterations and step halving.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

SATURATION = 30.0


class RankDeficientError(ValueError):
    pass


class SeparationError(RuntimeError):
    """The likelihood keeps increasing toward fitted probabilities of 0 or 1."""


@dataclass(frozen=True, eq=False)
class RegressionDataset:
    covariates: np.ndarray  # rows x p
    successes: np.ndarray
    trials: np.ndarray
    names: tuple[str, ...] = ()
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        x = np.asarray(self.covariates, dtype=float)
        if x.ndim == 1:
            x = x.reshape(-1, 0) if x.size == 0 else x.reshape(-1, 1)
        y = np.asarray(self.successes, dtype=float)
        n = np.asarray(self.trials, dtype=float)
        if not (len(x) == len(y) == len(n)):
            raise ValueError("covariates, successes and trials differ in length")
        if np.any(n < 1) or np.any(y < 0) or np.any(y > n):
            raise ValueError("need trials >= 1 and 0 <= successes <= trials")
        names = self.names or tuple(f"x{j + 1}" for j in range(x.shape[1]))
        if len(names) != x.shape[1]:
            raise ValueError(f"{len(names)} names for {x.shape[1]} covariates")
        object.__setattr__(self, "covariates", x)
        object.__setattr__(self, "successes", y)
        object.__setattr__(self, "trials", n)
        object.__setattr__(self, "names", tuple(names))

    @classmethod
    def from_rows(
        cls, rows: Sequence[tuple[Sequence[float], int, int]], names: Sequence[str] = ()
    ) -> RegressionDataset:
        dims = {len(r[0]) for r in rows}
        if len(dims) > 1:
            raise ValueError(f"rows have covariate dimensions {sorted(dims)}")
        p = dims.pop() if dims else len(names)
        x = np.array([list(r[0]) for r in rows], dtype=float).reshape(len(rows), p)
        return cls(x, [r[1] for r in rows], [r[2] for r in rows], tuple(names))

    @property
    def design(self) -> np.ndarray:
        return np.column_stack([np.ones(len(self.successes)), self.covariates])

    def __len__(self) -> int:
        return len(self.successes)


@dataclass(frozen=True, eq=False)
class LogisticFit:
    coefficients: np.ndarray
    loglik: float
    iterations: int
    converged: bool
    std_errors: np.ndarray
    gradient: np.ndarray
    names: tuple[str, ...] = ()

    def summary(self) -> str:
        labels = ("(intercept)", *self.names)
        lines = [f"{'term':<14}{'estimate':>14}{'std.err':>14}"]
        for label, b, se in zip(labels, self.coefficients, self.std_errors):
            lines.append(f"{label:<14}{b:>14.6f}{se:>14.6f}")
        lines.append(f"loglik {self.loglik:.6f}  iterations {self.iterations}  converged {self.converged}")
        return "\n".join(lines)


def _softplus(z: np.ndarray) -> np.ndarray:
    # log(1 + exp(z)) without overflow or loss near 0
    return np.maximum(z, 0.0) + np.log1p(np.exp(-np.abs(z)))


def _expit(z: np.ndarray) -> np.ndarray:
    e = np.exp(-np.abs(z))
    return np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def _coefs(fit_or_coefficients) -> np.ndarray:
    if isinstance(fit_or_coefficients, LogisticFit):
        return fit_or_coefficients.coefficients
    return np.asarray(fit_or_coefficients, dtype=float)


def loglik(fit_or_coefficients, data: RegressionDataset) -> float:
    """Binomial log-likelihood without the log C(n, y) constants."""
    if len(data) == 0:
        return 0.0
    eta = data.design @ _coefs(fit_or_coefficients)
    y, n = data.successes, data.trials
    terms = -y * _softplus(-eta) - (n - y) * _softplus(eta)
    return math.fsum(terms.tolist())


def score(fit_or_coefficients, data: RegressionDataset) -> np.ndarray:
    """Gradient of the log-likelihood."""
    eta = data.design @ _coefs(fit_or_coefficients)
    return data.design.T @ (data.successes - data.trials * _expit(eta))


def information(fit_or_coefficients, data: RegressionDataset) -> np.ndarray:
    """Observed (= expected) information X' W X."""
    x = data.design
    p = _expit(x @ _coefs(fit_or_coefficients))
    w = data.trials * p * (1.0 - p)
    return x.T @ (w[:, None] * x)


def fit_logistic(data: RegressionDataset, max_iter: int = 100, tol: float = 1e-8) -> LogisticFit:
    """Maximum likelihood by Newton's method with step halving, from b = 0.

    Stops once the gradient max-norm is below ``tol`` and the Newton step has
    become negligible.  If the linear predictor passes +-30 on some row while
    the steps stay large, the maximum lies at infinity and
    :class:`SeparationError` is raised.
    """
    x = data.design
    k = x.shape[1]
    if len(data) < k:
        raise RankDeficientError(f"{len(data)} rows cannot identify {k} coefficients")
    if np.linalg.matrix_rank(x) < k:
        raise RankDeficientError("design matrix is rank deficient")

    beta = np.zeros(k)
    ll = loglik(beta, data)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        grad = score(beta, data)
        step = np.linalg.lstsq(information(beta, data), grad, rcond=None)[0]
        small_step = np.max(np.abs(step)) <= 1e-6 * (1.0 + np.max(np.abs(beta)))
        if np.max(np.abs(grad)) < tol and small_step:
            converged = True
            break
        t = 1.0
        while True:
            trial = beta + t * step
            trial_ll = loglik(trial, data)
            if trial_ll >= ll:
                break
            t *= 0.5
            if t < 1e-12:
                trial, trial_ll = beta, ll
                break
        if trial is beta:
            # no ascent along the Newton direction; nothing left to gain
            if not small_step and np.max(np.abs(x @ beta)) > SATURATION:
                raise SeparationError("likelihood flat toward fitted probabilities of 0 or 1")
            converged = bool(np.max(np.abs(grad)) < tol)
            break
        beta, ll = trial, trial_ll
        if np.max(np.abs(x @ beta)) > SATURATION and not small_step:
            raise SeparationError(
                f"linear predictor exceeds {SATURATION:g} after {it} iterations;"
                " fitted probabilities are running to 0 or 1"
            )

    grad = score(beta, data)
    converged = converged or bool(np.max(np.abs(grad)) < tol)
    info = information(beta, data)
    try:
        cov = np.linalg.inv(info)
        se = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    except np.linalg.LinAlgError:
        se = np.full(k, np.inf)
    return LogisticFit(beta, ll, it, converged, se, grad, data.names)


def predict(fit: LogisticFit | Sequence[float], covariates: Sequence[float]) -> float:
    """Fitted probability at one covariate vector."""
    beta = _coefs(fit)
    x = np.asarray(covariates, dtype=float).reshape(-1)
    if len(x) != len(beta) - 1:
        raise ValueError(f"expected {len(beta) - 1} covariates, got {len(x)}")
    eta = float(beta[0] + x @ beta[1:])
    if eta >= 0:
        return 1.0 / (1.0 + math.exp(-eta))
    e = math.exp(eta)
    return e / (1.0 + e)


def parse_regression_table(text: str) -> RegressionDataset:
    """TSV with a header row: code, successes, trials, then one column per covariate."""
    header = None
    labels, xs, ys, ns = [], [], [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cells = [c.strip() for c in line.split("\t")]
        if header is None:
            if len(cells) < 3:
                raise ValueError(f"line {lineno}: header needs code, successes, trials")
            header = cells
            continue
        if len(cells) != len(header):
            raise ValueError(f"line {lineno}: expected {len(header)} columns, got {len(cells)}")
        try:
            ys.append(int(cells[1]))
            ns.append(int(cells[2]))
            xs.append([float(c) for c in cells[3:]])
        except ValueError:
            raise ValueError(f"line {lineno}: bad number in {line!r}") from None
        labels.append(cells[0])
    if header is None:
        raise ValueError("empty regression table")
    p = len(header) - 3
    return RegressionDataset(
        np.array(xs, dtype=float).reshape(len(ys), p), ys, ns, tuple(header[3:]), tuple(labels)
    )
