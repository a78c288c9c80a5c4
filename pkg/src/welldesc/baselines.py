"""Two-class reference classifiers: naive Bayes, LDA, and a kernel SVM.

All three train on the full imbalanced two-class sample, unlike the
hypersphere which sees only the minority class. Ties in every decision rule
go to HIGH, the majority class.
"""

from dataclasses import dataclass

import numpy as np

from .dataio import HIGH, LOW, NormStats, normalize_apply
from .errors import (
    DimensionMismatch,
    InvalidConfig,
    NonConvergence,
    SingleClassInput,
    SingularCovariance,
)
from .kernels import KernelSpec, gram, kernel_row

_CLASSES = (LOW, HIGH)
_LOG_2PI = float(np.log(2.0 * np.pi))
_VAR_FLOOR = 1e-9


def _check_two_class(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"X {X.shape} does not match y {y.shape}")
    for cls in _CLASSES:
        if not (y == cls).any():
            raise SingleClassInput(f"class {cls} absent from training labels")
    return X, y


@dataclass
class GnbModel:
    priors: np.ndarray      # (2,), order LOW, HIGH
    means: np.ndarray       # (2, d)
    variances: np.ndarray   # (2, d), floored
    norm_stats: NormStats


def train_gnb(X, y, norm_stats: NormStats | None = None) -> GnbModel:
    """Per-class independent Gaussians by maximum likelihood."""
    X, y = _check_two_class(X, y)
    stats = norm_stats if norm_stats is not None else NormStats.identity(X.shape[1])
    Xn = normalize_apply(stats, X)
    priors, means, variances = [], [], []
    for cls in _CLASSES:
        rows = Xn[y == cls]
        priors.append(rows.shape[0] / Xn.shape[0])
        means.append(rows.mean(axis=0))
        variances.append(np.maximum(rows.var(axis=0), _VAR_FLOOR))
    return GnbModel(np.array(priors), np.array(means), np.array(variances), stats)


def predict_gnb(m: GnbModel, X) -> np.ndarray:
    Xn = normalize_apply(m.norm_stats, np.asarray(X, dtype=float))
    scores = []
    for c, _ in enumerate(_CLASSES):
        mu, var = m.means[c], m.variances[c]
        ll = -0.5 * (_LOG_2PI + np.log(var) + (Xn - mu) ** 2 / var).sum(axis=1)
        scores.append(np.log(m.priors[c]) + ll)
    return np.where(scores[0] > scores[1], LOW, HIGH)


@dataclass
class LdaModel:
    priors: np.ndarray
    means: np.ndarray       # (2, d)
    cov: np.ndarray         # pooled, regularized
    coefs: np.ndarray       # (2, d) precomputed cov^-1 mu_c
    intercepts: np.ndarray  # (2,)
    norm_stats: NormStats


def _lda_discriminant(cov: np.ndarray, means: np.ndarray, priors: np.ndarray):
    try:
        np.linalg.cholesky(cov)
        coefs = np.linalg.solve(cov, means.T).T
    except np.linalg.LinAlgError as exc:
        raise SingularCovariance("pooled covariance not positive definite") from exc
    intercepts = -0.5 * np.sum(coefs * means, axis=1) + np.log(priors)
    return coefs, intercepts


def train_lda(X, y, norm_stats: NormStats | None = None) -> LdaModel:
    """Shared-covariance Gaussian classes; covariance ridged by 1e-6 * trace/d."""
    X, y = _check_two_class(X, y)
    stats = norm_stats if norm_stats is not None else NormStats.identity(X.shape[1])
    Xn = normalize_apply(stats, X)
    n, d = Xn.shape
    priors, means = [], []
    scatter = np.zeros((d, d))
    for cls in _CLASSES:
        rows = Xn[y == cls]
        priors.append(rows.shape[0] / n)
        mu = rows.mean(axis=0)
        means.append(mu)
        centered = rows - mu
        scatter += centered.T @ centered
    cov = scatter / n
    cov = cov + (1e-6 * np.trace(cov) / d) * np.eye(d)
    priors = np.array(priors)
    means = np.array(means)
    coefs, intercepts = _lda_discriminant(cov, means, priors)
    return LdaModel(priors, means, cov, coefs, intercepts, stats)


def predict_lda(m: LdaModel, X) -> np.ndarray:
    Xn = normalize_apply(m.norm_stats, np.asarray(X, dtype=float))
    scores = Xn @ m.coefs.T + m.intercepts
    return np.where(scores[:, 0] > scores[:, 1], LOW, HIGH)


@dataclass
class SvmModel:
    kernel: KernelSpec
    C_svm: float
    betas: np.ndarray       # per support vector
    labels: np.ndarray      # +1 (LOW) / -1 (HIGH)
    X_sv: np.ndarray        # support vectors, normalized
    bias: float
    norm_stats: NormStats


def train_csvm(X, y, kernel: KernelSpec | None = None, C_svm: float = 1.0,
               tol: float = 1e-6, max_iter: int | None = None,
               norm_stats: NormStats | None = None) -> SvmModel:
    """Soft-margin kernel SVM via pairwise ascent on the dual.

    LOW maps to +1, HIGH to -1. Working pairs come from the most violating
    gradient pair; the update is the usual two-variable solution clipped to
    the box, which preserves sum(beta * y).
    """
    X, y = _check_two_class(X, y)
    if kernel is None:
        kernel = KernelSpec()
    if not C_svm > 0:
        raise InvalidConfig(f"C_svm must be positive, got {C_svm}")
    stats = norm_stats if norm_stats is not None else NormStats.identity(X.shape[1])
    Xn = normalize_apply(stats, X)
    n = Xn.shape[0]
    yy = np.where(y == LOW, 1.0, -1.0)
    Q = (yy[:, np.newaxis] * yy[np.newaxis, :]) * gram(kernel, Xn)
    C = float(C_svm)

    beta = np.zeros(n)
    grad = -np.ones(n)  # gradient of 0.5 b'Qb - sum(b)
    if max_iter is None:
        max_iter = 10 * n * n

    gap = np.inf
    for it in range(max_iter):
        vals = -yy * grad
        up_ok = ((yy > 0) & (beta < C)) | ((yy < 0) & (beta > 0))
        low_ok = ((yy > 0) & (beta > 0)) | ((yy < 0) & (beta < C))
        i = int(np.argmax(np.where(up_ok, vals, -np.inf)))
        j = int(np.argmin(np.where(low_ok, vals, np.inf)))
        gap = vals[i] - vals[j]
        if gap <= tol:
            break

        if yy[i] != yy[j]:
            quad = max(Q[i, i] + Q[j, j] + 2.0 * Q[i, j], 1e-12)
            delta = (-grad[i] - grad[j]) / quad
            lo = max(-beta[i], -beta[j])
            hi = min(C - beta[i], C - beta[j])
            delta = min(max(delta, lo), hi)
            bi, bj = beta[i] + delta, beta[j] + delta
        else:
            quad = max(Q[i, i] + Q[j, j] - 2.0 * Q[i, j], 1e-12)
            delta = (grad[i] - grad[j]) / quad
            lo = max(beta[i] - C, -beta[j])
            hi = min(beta[i], C - beta[j])
            delta = min(max(delta, lo), hi)
            bi, bj = beta[i] - delta, beta[j] + delta
        bi = min(max(bi, 0.0), C)
        bj = min(max(bj, 0.0), C)
        grad += Q[:, i] * (bi - beta[i]) + Q[:, j] * (bj - beta[j])
        beta[i], beta[j] = bi, bj
        if (it + 1) % 1024 == 0:
            grad = Q @ beta - 1.0
    else:
        raise NonConvergence(
            f"svm solver still violating KKT by {gap:.3e} after {max_iter} passes",
            kkt_violation=float(gap))

    vals = -yy * grad
    unbounded = (beta > tol) & (beta < C - tol)
    if unbounded.any():
        bias = float(vals[unbounded].mean())
    else:
        up_ok = ((yy > 0) & (beta < C)) | ((yy < 0) & (beta > 0))
        low_ok = ((yy > 0) & (beta > 0)) | ((yy < 0) & (beta < C))
        hi = float(np.max(np.where(up_ok, vals, -np.inf)))
        lo = float(np.min(np.where(low_ok, vals, np.inf)))
        bias = 0.5 * (hi + lo)

    keep = beta > 0.0
    return SvmModel(kernel=kernel, C_svm=C, betas=beta[keep], labels=yy[keep],
                    X_sv=Xn[keep], bias=bias, norm_stats=stats)


def svm_decision(m: SvmModel, x) -> float:
    """Signed margin of one raw-space query point."""
    xn = (np.asarray(x, dtype=float) - m.norm_stats.mean) / m.norm_stats.std
    if m.betas.size == 0:
        return m.bias
    k = kernel_row(m.kernel, xn, m.X_sv)
    return float(np.dot(m.betas * m.labels, k) + m.bias)


def predict_csvm(m: SvmModel, X) -> np.ndarray:
    """LOW where the margin is strictly positive; sign zero goes to HIGH."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d query matrix, got shape {X.shape}")
    return np.array([LOW if svm_decision(m, row) > 0.0 else HIGH for row in X], dtype=int)
