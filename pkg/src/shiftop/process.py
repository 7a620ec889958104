"""Moving-average simulation, innovation recovery, and ergodic diagnostics.

A causal transfer ``f(z) = 1 + a_1 z + ... + a_q z**q`` drives
``X_t = sum_j a_j eps_{t-j}`` with i.i.d. Gaussian innovations.  When every
root of ``f`` lies strictly outside the unit circle the innovations can be
recovered from the observed path by an absolutely summable autoregression;
when a root sits strictly inside, the same formal recursion produces
divergent coefficients and the reconstruction error grows geometrically in
the lag cutoff.  Both regimes are exercised here, along with partial-sum
convergence of l1 filters, sample-mean scaling, and recovery of the
invertible transfer from exact autocovariances.

All randomness flows through numpy's Philox generator keyed directly by the
user seed; distinct seeds give independent streams, and the generator name
and numpy version ride along in the export metadata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import wiener
from .invertibility import (
    NotInvertibleError,
    Verdict,
    classify_roots,
    invert_causal,
)
from .wiener import WienerElement

__all__ = [
    "GENERATOR_NAME",
    "ProcessSample",
    "ReconstructionReport",
    "FilterConvergenceRow",
    "ErgodicRow",
    "WoldEstimate",
    "simulate",
    "reconstruct_innovations",
    "divergence_demo",
    "formal_ar_coefficients",
    "l1_filter_convergence",
    "ergodic_mean_check",
    "ma_autocovariance",
    "wold_estimate",
    "sample_to_csv",
    "metadata_sidecar",
    "reconstruction_csv",
    "divergence_csv",
    "filter_csv",
    "ergodic_csv",
]

GENERATOR_NAME = "numpy.random.Philox"


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


def _real_coefficients(f: WienerElement, what: str) -> np.ndarray:
    a = f.to_array()
    if np.any(a.imag != 0):
        raise ValueError(f"{what} must have real coefficients for real-valued paths")
    return a.real.copy()


@dataclass(frozen=True, eq=False)
class ProcessSample:
    """A simulated path together with everything needed to replay it.

    ``innovations`` includes the warm-up block (one draw per transfer
    coefficient) ahead of the ``t_len`` aligned draws, so
    ``innovations[warmup + t]`` is the innovation entering ``path[t]`` at
    lag 0.  Re-simulating with the stored seed reproduces both arrays bit
    for bit.
    """

    path: np.ndarray
    innovations: np.ndarray
    sigma: float
    transfer: WienerElement
    seed: int

    def __post_init__(self):
        for name in ("path", "innovations"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def warmup(self) -> int:
        return len(self.innovations) - len(self.path)

    @property
    def t_len(self) -> int:
        return len(self.path)

    @property
    def aligned_innovations(self) -> np.ndarray:
        """Innovations ``eps_t`` for ``t = 0 .. t_len-1`` (warm-up dropped)."""
        return self.innovations[self.warmup :]


def simulate(f: WienerElement, sigma: float, t_len: int, seed: int) -> ProcessSample:
    """Draw ``X_t = sum_j a_j eps_{t-j}`` for ``t = 0 .. t_len-1``.

    Requires the Wold normalization ``a_0 = 1`` and a causal, real transfer.
    The warm-up innovations (one per transfer coefficient) are drawn from the
    same stream, never zero-padded, so the path is stationary from ``t = 0``.
    """
    t_len = int(t_len)
    if t_len < 1:
        raise ValueError("t_len must be at least 1")
    sigma = float(sigma)
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    if not f.is_causal:
        raise ValueError("transfer must be causal (offset >= 0)")
    a = _real_coefficients(f, "transfer")
    if f.coeff(0) != 1:
        raise ValueError(
            f"transfer must satisfy a_0 = 1, got a_0 = {f.coeff(0)}; "
            "divide every coefficient by a_0 first"
        )
    warmup = f.support_length
    eps = sigma * _rng(seed).standard_normal(warmup + t_len)
    path = np.convolve(eps, a)[warmup : warmup + t_len]
    return ProcessSample(path, eps, sigma, f, seed)


def _ar_ladder_mse(sample: ProcessSample, b: np.ndarray, max_lag: int) -> list[tuple[int, float]]:
    """MSE of ``eps_hat = X_t - sum_{n<=M} b_n X_{t-n}`` for ``M = 0 .. max_lag``.

    All cutoffs are scored on the common window ``t >= max_lag`` so the
    ladder is comparable row to row.
    """
    t_len = sample.t_len
    if max_lag >= t_len:
        raise ValueError(f"max_lag {max_lag} needs a path longer than {t_len}")
    path = sample.path
    target = sample.aligned_innovations[max_lag:]
    eps_hat = path[max_lag:].copy()
    rows = [(0, float(np.mean((eps_hat - target) ** 2)))]
    for m in range(1, max_lag + 1):
        eps_hat -= b[m] * path[max_lag - m : t_len - m]
        rows.append((m, float(np.mean((eps_hat - target) ** 2))))
    return rows


@dataclass(frozen=True)
class ReconstructionReport:
    """Autoregressive innovation recovery at a ladder of lag cutoffs."""

    ar_coeffs: tuple[float, ...]
    lag_cutoff: int
    mse_per_cutoff: tuple[tuple[int, float], ...]


def reconstruct_innovations(sample: ProcessSample, max_lag: int) -> ReconstructionReport:
    """Recover innovations through ``eps_t = X_t - sum b_n X_{t-n}``.

    The coefficients ``b_n = -g_n`` come from the certified causal inverse of
    the transfer, so the symbol must classify as Invertible.  The report's
    MSE ladder decays to the truncation floor set by the dropped tail.
    """
    max_lag = int(max_lag)
    if max_lag < 1:
        raise ValueError("max_lag must be at least 1")
    classification = classify_roots(sample.transfer)
    if classification.verdict is not Verdict.INVERTIBLE:
        raise NotInvertibleError(
            "innovation recovery needs an Invertible transfer, got "
            f"{classification.verdict.value}",
            classification,
        )
    inv = invert_causal(
        sample.transfer, max_len=max(4 * max_lag + 64, 1024), eps=1e-12
    )
    b = np.zeros(max_lag + 1)
    for n in range(1, max_lag + 1):
        b[n] = -inv.inverse.coeff(n).real
    rows = _ar_ladder_mse(sample, b, max_lag)
    return ReconstructionReport(tuple(b[1:]), max_lag, tuple(rows))


def formal_ar_coefficients(f: WienerElement, max_lag: int) -> np.ndarray:
    """``b_1 .. b_max_lag`` from the formal series inverse, no convergence demanded.

    For symbols with a root inside the circle these diverge geometrically;
    they are exactly what :func:`divergence_demo` feeds back into the
    reconstruction recursion.
    """
    from .invertibility import _series_inverse_prefix

    if not f.is_causal or f.coeff(0) == 0:
        raise ValueError("formal inversion needs a causal symbol with a_0 != 0")
    g = _series_inverse_prefix(f.to_array(), int(max_lag) + 1)
    b = -g.real
    b[0] = 0.0
    return b


def divergence_demo(
    f: WienerElement,
    max_lag: int,
    seed: int,
    sigma: float = 1.0,
    t_len: int = 100_000,
) -> list[tuple[int, float]]:
    """Reconstruction MSE ladder for a non-invertible transfer.

    Applies the formal (divergent) autoregression coefficients to a freshly
    simulated path; the returned ``(M, MSE)`` rows grow geometrically, with
    ratio about ``|1/r|**2`` for the dominant inside root ``r``.
    """
    max_lag = int(max_lag)
    if max_lag < 1:
        raise ValueError("max_lag must be at least 1")
    classification = classify_roots(f)
    if classification.inside == 0:
        raise ValueError(
            "divergence demo needs a root strictly inside the circle; got verdict "
            f"{classification.verdict.value}"
        )
    sample = simulate(f, sigma, t_len, seed)
    b = formal_ar_coefficients(f, max_lag)
    return _ar_ladder_mse(sample, b, max_lag)


@dataclass(frozen=True)
class FilterConvergenceRow:
    cutoff: int
    max_deviation: float
    mse: float


def _apply_filter(filt: WienerElement, path: np.ndarray, t0: int, t1: int, dtype) -> np.ndarray:
    """``sum_n a_n X_{t-n}`` for ``t = t0 .. t1``, accumulated in ascending n."""
    out = np.zeros(t1 - t0 + 1, dtype=dtype)
    if filt.is_zero:
        return out
    for k, c in enumerate(filt.coeffs):
        n = filt.offset + k
        coeff = c if dtype is complex else c.real
        out += coeff * path[t0 - n : t1 + 1 - n]
    return out


def _truncate_filter(filt: WienerElement, cutoff: int) -> WienerElement:
    lo = max(filt.offset, -cutoff)
    hi = min(filt.degree, cutoff)
    if lo > hi:
        return wiener.ZERO
    return WienerElement(filt.coeffs[lo - filt.offset : hi - filt.offset + 1], lo)


def l1_filter_convergence(
    sample: ProcessSample, filt: WienerElement, cutoffs
) -> list[FilterConvergenceRow]:
    """Partial sums ``sum_{|n| <= k} a_n X_{t-n}`` against the full filter.

    Rows are ``(cutoff, max_t |partial - full|, mean |partial - full|**2)``
    over the window where the full filter fits inside the path.  Partial and
    full sums share one accumulation order, so at a cutoff covering the whole
    support the deviation is exactly 0.0.  Every deviation obeys the triangle
    bound ``(sum_{|n| > k} |a_n|) * max_t |X_t|``.
    """
    cutoffs = [int(k) for k in cutoffs]
    if not cutoffs:
        raise ValueError("cutoffs must be nonempty")
    if any(k < 0 for k in cutoffs):
        raise ValueError("cutoffs must be nonnegative")
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ValueError("cutoffs must be strictly increasing")
    t_len = sample.t_len
    t0 = max(filt.degree, 0)
    t1 = t_len - 1 + min(filt.offset, 0)
    if t1 < t0:
        raise ValueError("path too short for the filter support")
    dtype = complex if np.any(filt.to_array().imag != 0) else float
    full = _apply_filter(filt, sample.path, t0, t1, dtype)
    rows = []
    for k in cutoffs:
        partial = _apply_filter(_truncate_filter(filt, k), sample.path, t0, t1, dtype)
        diff = partial - full
        rows.append(
            FilterConvergenceRow(
                k, float(np.max(np.abs(diff))), float(np.mean(np.abs(diff) ** 2))
            )
        )
    return rows


@dataclass(frozen=True)
class ErgodicRow:
    t_len: int
    abs_mean: float
    predicted_std: float


def ergodic_mean_check(f: WienerElement, sigma: float, t_lens, seed: int) -> list[ErgodicRow]:
    """Sample means against the stationary prediction ``|f(1)| sigma / sqrt(T)``.

    One simulation per requested length, seeded ``seed, seed+1, ...`` (Philox
    keys, so the streams are independent).  An overdifferenced transfer with
    ``f(1) = 0`` telescopes and its means shrink faster than ``1/sqrt(T)``.
    """
    t_lens = [int(t) for t in t_lens]
    if not t_lens:
        raise ValueError("t_lens must be nonempty")
    if any(b <= a for a, b in zip(t_lens, t_lens[1:])):
        raise ValueError("t_lens must be strictly increasing")
    scale = abs(wiener.evaluate(f, 1.0)) * float(sigma)
    rows = []
    for i, t_len in enumerate(t_lens):
        sample = simulate(f, sigma, t_len, int(seed) + i)
        rows.append(
            ErgodicRow(t_len, float(abs(sample.path.mean())), scale / math.sqrt(t_len))
        )
    return rows


def ma_autocovariance(f: WienerElement, sigma: float, max_lag: int) -> np.ndarray:
    """Exact autocovariances ``gamma(k) = sigma**2 sum_j a_j a_{j+k}``."""
    a = _real_coefficients(f, "transfer")
    if not f.is_causal:
        raise ValueError("transfer must be causal")
    gamma = np.zeros(int(max_lag) + 1)
    s2 = float(sigma) ** 2
    for k in range(min(len(a), max_lag + 1)):
        gamma[k] = s2 * float(np.dot(a[: len(a) - k], a[k:]))
    return gamma


@dataclass(frozen=True)
class WoldEstimate:
    """Invertible moving-average representative recovered from autocovariances."""

    transfer: WienerElement
    sigma2: float
    n_iterations: int


def wold_estimate(
    autocov,
    order: int,
    tol: float = 1e-10,
    max_iterations: int = 50_000,
) -> WoldEstimate:
    """Recover MA(q) coefficients and innovation variance from ``gamma(0..q)``.

    Runs the innovations algorithm on the autocovariance sequence extended by
    zeros past lag ``q``; the coefficient row converges to the invertible
    representative of the spectral factorization (roots on or outside the
    circle), never the mirrored one, and the prediction variance converges to
    ``sigma**2``.  The leading ``(q+1) x (q+1)`` autocovariance matrix must be
    positive definite.
    """
    order = int(order)
    if order < 0:
        raise ValueError("order must be nonnegative")
    gamma = np.asarray(autocov, dtype=float)
    if gamma.ndim != 1 or len(gamma) < order + 1:
        raise ValueError(f"need gamma(0..{order}), got {len(gamma)} values")
    gamma = gamma[: order + 1]
    from scipy.linalg import toeplitz

    try:
        np.linalg.cholesky(toeplitz(gamma))
    except np.linalg.LinAlgError:
        raise ValueError(
            "autocovariance matrix is not positive definite"
        ) from None
    if order == 0:
        return WoldEstimate(wiener.ONE, float(gamma[0]), 0)

    def gamma_at(h: int) -> float:
        return float(gamma[h]) if h <= order else 0.0

    v = [float(gamma[0])]
    theta_rows: list[np.ndarray] = [np.zeros(0)]
    previous = np.zeros(order)
    for n in range(1, max_iterations + 1):
        row = np.zeros(min(n, order))
        for k in range(max(0, n - order), n):
            lag = n - k
            acc = gamma_at(lag)
            for j in range(max(0, n - order, k - order), k):
                acc -= theta_rows[k][k - j - 1] * row[n - j - 1] * v[j]
            row[lag - 1] = acc / v[k]
        vn = gamma_at(0)
        for j in range(max(0, n - order), n):
            vn -= row[n - j - 1] ** 2 * v[j]
        if vn <= 0:
            raise ValueError(
                "autocovariances do not extend to a valid MA model "
                f"(prediction variance {vn:.3e} at step {n})"
            )
        v.append(vn)
        theta_rows.append(row)
        current = np.zeros(order)
        current[: len(row)] = row
        if n > order and np.max(np.abs(current - previous)) <= tol and abs(v[n] - v[n - 1]) <= tol * max(
            1.0, gamma[0]
        ):
            coeffs = (1.0,) + tuple(current)
            return WoldEstimate(WienerElement(coeffs), float(vn), n)
        previous = current
    raise RuntimeError(
        f"innovations iteration did not converge in {max_iterations} steps; "
        "the autocovariances may sit at the invertibility boundary"
    )


# -- export helpers ---------------------------------------------------------


def sample_to_csv(sample: ProcessSample) -> str:
    """CSV with header ``t,X_t,eps_t`` ('.' decimal separator, %.17g cells)."""
    eps = sample.aligned_innovations
    lines = ["t,X_t,eps_t"]
    for t in range(sample.t_len):
        lines.append(f"{t},{sample.path[t]:.17g},{eps[t]:.17g}")
    return "\n".join(lines) + "\n"


def metadata_sidecar(sample: ProcessSample) -> dict:
    """Seed and generator provenance for a stochastic export."""
    return {
        "seed": sample.seed,
        "generator": GENERATOR_NAME,
        "numpy_version": np.__version__,
        "sigma": sample.sigma,
        "t_len": sample.t_len,
        "warmup": sample.warmup,
        "transfer": wiener.to_json_dict(sample.transfer),
    }


def _two_column_csv(header: str, rows) -> str:
    lines = [header]
    for first, second in rows:
        lines.append(f"{first},{second:.17g}")
    return "\n".join(lines) + "\n"


def reconstruction_csv(report: ReconstructionReport) -> str:
    return _two_column_csv("M,mse", report.mse_per_cutoff)


def divergence_csv(rows) -> str:
    return _two_column_csv("M,mse", rows)


def filter_csv(rows) -> str:
    lines = ["cutoff,max_deviation,mse"]
    for r in rows:
        lines.append(f"{r.cutoff},{r.max_deviation:.17g},{r.mse:.17g}")
    return "\n".join(lines) + "\n"


def ergodic_csv(rows) -> str:
    lines = ["T,abs_mean,predicted_std"]
    for r in rows:
        lines.append(f"{r.t_len},{r.abs_mean:.17g},{r.predicted_std:.17g}")
    return "\n".join(lines) + "\n"
