"""Track-length k estimates, batch statistics and Doppler coefficients."""

from __future__ import annotations

import math
import re
from dataclasses import asdict, dataclass, field

__all__ = [
    "BatchResult",
    "RunResult",
    "batch_keff",
    "mean_std",
    "doppler_coefficient",
    "format_value_sigma",
    "parse_value_sigma",
]


@dataclass
class BatchResult:
    index: int
    active: bool
    k: float
    launched_weight: float
    nu_fission_tracklength: float
    absorbed_weight: float = 0.0
    cutoff_weight: float = 0.0
    fission_sites: int = 0
    bank_digest: str = ""


@dataclass
class RunResult:
    batches: list
    k_mean: float
    k_sigma: float
    throughput: dict
    stage_seconds: dict
    counters: dict
    config: dict
    problem: dict
    metadata: dict = field(default_factory=dict)

    @property
    def k_values(self):
        return [b.k for b in self.batches]

    def summary(self):
        """JSON-ready summary; ``metadata`` holds everything run-dependent."""
        return {
            "k_mean": self.k_mean,
            "k_sigma": self.k_sigma,
            "k": format_value_sigma(self.k_mean, self.k_sigma),
            "throughput": self.throughput,
            "stage_seconds": self.stage_seconds,
            "counters": self.counters,
            "config": self.config,
            "problem": self.problem,
            "metadata": self.metadata,
        }

    def batch_rows(self):
        return [asdict(b) for b in self.batches]


def batch_keff(nu_fission_tracklength, launched_weight):
    """k of one batch: track-length nu-fission score per launched weight."""
    if not launched_weight > 0:
        raise ValueError("launched weight must be positive")
    return nu_fission_tracklength / launched_weight


def mean_std(values):
    """Sample mean and standard deviation of the mean."""
    n = len(values)
    if n < 2:
        raise ValueError(f"need at least 2 active batches, got {n}")
    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / (n * (n - 1))
    return mean, math.sqrt(var)


def doppler_coefficient(k1, sigma1, T1, k2, sigma2, T2):
    """Reactivity change per kelvin between two temperatures, in pcm/K.

    Returns ``(alpha, sigma_alpha)`` with first-order propagation of the
    two independent k uncertainties.
    """
    if not T1 < T2:
        raise ValueError(f"need T1 < T2, got T1={T1}, T2={T2}")
    if not (k1 > 0 and k2 > 0):
        raise ValueError("k values must be positive")
    scale = 1.0e5 / (T2 - T1)
    alpha = (1.0 / k1 - 1.0 / k2) * scale
    sigma = scale * math.sqrt(sigma1**2 / k1**4 + sigma2**2 / k2**4)
    return alpha, sigma


def format_value_sigma(value, sigma, digits=2):
    """Render ``value (sigma)`` with sigma in the last ``digits`` digits.

    >>> format_value_sigma(1.17724, 0.00013)
    '1.17724 (13)'
    """
    if sigma <= 0 or not math.isfinite(sigma):
        return f"{value:.6f} (0)"
    decimals = max(0, digits - 1 - math.floor(math.log10(sigma)))
    unc = round(sigma * 10**decimals)
    if unc >= 10**digits:
        decimals = max(0, decimals - 1)
        unc = round(sigma * 10**decimals)
    return f"{value:.{decimals}f} ({unc})"


_VS = re.compile(r"^\s*([-+]?\d+(?:\.(\d*))?)\s*\((\d+)\)\s*$")


def parse_value_sigma(text):
    """Inverse of :func:`format_value_sigma`."""
    m = _VS.match(re.sub(r"(?<=\d) (?=\d)", "", text))
    if not m:
        raise ValueError(f"cannot parse {text!r} as 'value (sigma)'")
    value = float(m.group(1))
    decimals = len(m.group(2) or "")
    return value, int(m.group(3)) * 10.0**-decimals
