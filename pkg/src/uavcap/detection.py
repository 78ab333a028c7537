"""Neyman-Pearson detection of a known signal in complex Gaussian noise.

For post-integration SNR s, the log-likelihood ratio is Gaussian with mean
-s under noise-only and +s under target-present, variance 2s under both,
so with threshold gamma:

    PFA = Q(gamma / sqrt(2 s) + sqrt(s / 2))
    PD  = Q(Q^-1(PFA) - sqrt(2 s))

The Gaussian tail Q is computed via erfc. An exponential surrogate
Q(x) ~ exp(-a x^2 - b x - c) on [0, 4] (a=0.3842, b=0.7640, c=0.6964)
feeds the closed-form capacity solver; its expanded form and a fixed
historical coefficient variant are both exposed (they differ, see
log_joint_pd_surrogate).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import ndtri

_SQRT2 = math.sqrt(2.0)

SURROGATE_MODES = ("exact", "expanded", "fixed")


class SurrogateDomainError(ValueError):
    """Raised when the surrogate is evaluated outside its validity regime."""


@dataclass(frozen=True)
class DetectionSpec:
    """Operating constraints: false-alarm cap, joint-PD floor, SNR floor (dB)."""

    pfa: float = 0.05
    pd_threshold: float = 0.95
    snr_threshold_db: float = 13.0

    def __post_init__(self) -> None:
        if not 0.0 < self.pfa < 0.5:
            raise ValueError(f"pfa must be in (0, 0.5), got {self.pfa}")
        if not 0.0 < self.pd_threshold < 1.0:
            raise ValueError(
                f"pd_threshold must be in (0, 1), got {self.pd_threshold}"
            )


@dataclass(frozen=True)
class QApproxCoefficients:
    """Coefficients of the exponential tail surrogate exp(-a x^2 - b x - c)."""

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        if not self.a > 0.0:
            raise ValueError(f"a must be > 0, got {self.a}")


DEFAULT_Q_COEFFS = QApproxCoefficients(a=0.3842, b=0.7640, c=0.6964)

# The surrogate is a good approximation of Q only on |x| <= 4.
SURROGATE_X_MAX = 4.0


def q(x: float) -> float:
    """Gaussian right tail Q(x) = P(N(0,1) > x), via erfc."""
    return 0.5 * math.erfc(x / _SQRT2)


def q_inv(p: float) -> float:
    """Inverse of q on (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    return float(-ndtri(p))


def lrt_threshold(snr: float, pfa: float) -> float:
    """LLR threshold achieving the requested false-alarm rate.

    gamma = sqrt(2 snr) * Q^-1(pfa) - snr; snr is the post-integration
    linear SNR and must be positive.
    """
    if not snr > 0.0:
        raise ValueError(f"snr must be > 0, got {snr}")
    return math.sqrt(2.0 * snr) * q_inv(pfa) - snr


def pd_single(snr: float, pfa: float) -> float:
    """Detection probability of one target: Q(Q^-1(pfa) - sqrt(2 snr))."""
    if snr < 0.0:
        raise ValueError(f"snr must be >= 0, got {snr}")
    return q(q_inv(pfa) - math.sqrt(2.0 * snr))


def joint_pd(mean_snr: float, num_uavs: int, pfa: float) -> float:
    """Probability that all num_uavs targets are detected: pd_single^L.

    Independence across targets holds because each gets disjoint sensing
    symbols. At snr = 0 this degenerates to pfa^L.
    """
    if num_uavs < 1:
        raise ValueError(f"num_uavs must be >= 1, got {num_uavs}")
    return pd_single(mean_snr, pfa) ** num_uavs


def q_exp_approx(
    x: float, coeffs: QApproxCoefficients = DEFAULT_Q_COEFFS
) -> float:
    """Exponential surrogate for Q(x), valid on |x| <= SURROGATE_X_MAX.

    Negative arguments use the reflection 1 - approx(-x), which keeps
    approx(x) + approx(-x) == 1 exact in floating point.
    """
    if abs(x) > SURROGATE_X_MAX:
        raise SurrogateDomainError(
            f"|x| must be <= {SURROGATE_X_MAX}, got {x}"
        )
    if x < 0.0:
        return 1.0 - q_exp_approx(-x, coeffs)
    return math.exp(-coeffs.a * x * x - coeffs.b * x - coeffs.c)


def log_joint_pd_surrogate(
    rho: float,
    xi: float,
    num_uavs: int,
    mode: str = "expanded",
    coeffs: QApproxCoefficients = DEFAULT_Q_COEFFS,
) -> float:
    """Closed-form surrogate for ln(joint PD) as a function of the UAV count.

    rho = 2 * L * SNR_L is the load-invariant SNR budget (L * rho/L is
    constant as symbols are re-split), xi = Q^-1(pfa). Writing
    x = xi - sqrt(rho / L), the exact value is L * ln Q(x); the surrogate
    replaces Q by the exponential tail approximation, giving
    -L * exp(exponent) with

    - mode "expanded": exponent = -a rho/L + (2 a xi - b) sqrt(rho/L)
      - a xi^2 + b xi - c, the symbolic expansion of
      -a x^2 - b x - c (algebraically identical to evaluating the
      surrogate at x).
    - mode "fixed": exponent = -0.3842 rho/L + (0.7684 xi - 0.764)
      sqrt(rho/L) + 0.3798 xi - 0.6964, a fixed coefficient set kept for
      comparison. Its constant term is NOT the expansion of the default
      coefficients (that would be -0.3842 xi^2 + 0.764 xi - 0.6964); the
      two variants differ by the constant factor exp(a xi^2 - 0.3842 xi),
      about 1.503 at pfa = 0.05.

    Valid only where x = xi - sqrt(rho/L) lies in [-SURROGATE_X_MAX, 0];
    outside that window a SurrogateDomainError is raised and callers fall
    back to the exact objective.
    """
    if not rho > 0.0:
        raise ValueError(f"rho must be > 0, got {rho}")
    if num_uavs < 1:
        raise ValueError(f"num_uavs must be >= 1, got {num_uavs}")
    ratio = rho / num_uavs
    root = math.sqrt(ratio)
    x = xi - root
    if not -SURROGATE_X_MAX <= x <= 0.0:
        raise SurrogateDomainError(
            f"xi - sqrt(rho/L) = {x} outside [-{SURROGATE_X_MAX}, 0]"
        )
    if mode == "expanded":
        a, b, c = coeffs.a, coeffs.b, coeffs.c
        exponent = -a * ratio + (2.0 * a * xi - b) * root - a * xi * xi + b * xi - c
    elif mode == "fixed":
        exponent = (
            -0.3842 * ratio + (0.7684 * xi - 0.764) * root + 0.3798 * xi - 0.6964
        )
    else:
        raise ValueError(f"mode must be 'expanded' or 'fixed', got {mode!r}")
    return -num_uavs * math.exp(exponent)
