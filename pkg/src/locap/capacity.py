"""Analytic encoding capacity of a linear-optical channel.

The reachable span of Alice's encodings decomposes over photon-number
sectors; each sector contributes g(n_a, m_a) * min(g(n_a, m_a), g(n_b, m_b))
dimensions, and the capacity in bits is the log2 of the summed bound.
Everything is available both as exact big-integer arithmetic and as
log-space floats for photon numbers where the integers become unwieldy.
"""

import math
from dataclasses import dataclass
from enum import Enum

from .exceptions import InvalidModeSplit
from .fock import dim_fock, log2_dim_fock

_LN2 = math.log(2.0)


class Regime(str, Enum):
    """Asymptotic behavior class for a mode split, by Alice/Bob mode ratio."""

    ALICE_DOMINANT = "ALICE_DOMINANT"   # m_a > m_b: span tracks the full dimension
    BALANCED = "BALANCED"               # m_a == m_b: span is one bit short
    BOB_DOMINANT = "BOB_DOMINANT"       # m_a < m_b: span far below full dimension
    BOB_SATURATED = "BOB_SATURATED"     # m_b >= g(n-1, m_a): extra Bob modes are idle


def _check_split(n: int, m: int, m_a: int):
    if n < 1:
        raise ValueError(f"photon number must be >= 1, got {n}")
    if not 1 <= m_a <= m - 1:
        raise InvalidModeSplit(
            f"need 1 <= m_a <= {m - 1} so both parties hold modes, got {m_a}")


def f_term(n_a: int, n: int, m_a: int, m_b: int) -> int:
    """Span contribution of the sector with n_a photons on Alice's side."""
    if not 0 <= n_a <= n:
        raise ValueError(f"need 0 <= n_a <= {n}, got {n_a}")
    g_a = dim_fock(n_a, m_a)
    g_b = dim_fock(n - n_a, m_b)
    return g_a * min(g_a, g_b)


def f_term_log2(n_a: int, n: int, m_a: int, m_b: int) -> float:
    """log2 of :func:`f_term`, in log space throughout."""
    if not 0 <= n_a <= n:
        raise ValueError(f"need 0 <= n_a <= {n}, got {n_a}")
    la = log2_dim_fock(n_a, m_a)
    lb = log2_dim_fock(n - n_a, m_b)
    return la + min(la, lb)


def span_bound(n: int, m: int, m_a: int) -> int:
    """Dimension bound on the span of Alice's reachable encodings (exact)."""
    _check_split(n, m, m_a)
    m_b = m - m_a
    return sum(f_term(n_a, n, m_a, m_b) for n_a in range(n + 1))


def span_bound_log2(n: int, m: int, m_a: int) -> float:
    """log2 of the span bound via log-space terms and log-sum-exp."""
    _check_split(n, m, m_a)
    m_b = m - m_a
    terms = [f_term_log2(n_a, n, m_a, m_b) for n_a in range(n + 1)]
    top = max(terms)
    return top + math.log2(math.fsum(2.0 ** (t - top) for t in terms))


def capacity_bits(n: int, m: int, m_a: int) -> float:
    """Classical encoding capacity in bits per channel use: log2(span bound)."""
    return math.log2(span_bound(n, m, m_a))


def hilbert_capacity_bits(n: int, m: int) -> float:
    """log2 of the full Hilbert dimension; the looser capacity reference."""
    return log2_dim_fock(n, m)


def stirling_log2_dim(n: int, alpha: float) -> float:
    """Stirling estimate of log2 dim for m = alpha * n modes.

    Valid in the many-photon, many-mode limit; at small n it can be off by
    orders of magnitude (e.g. n = 1, alpha = 1 estimates 2 bits where the
    exact value is 0).
    """
    if n < 1:
        raise ValueError(f"photon number must be >= 1, got {n}")
    if alpha <= 0:
        raise ValueError(f"mode ratio must be positive, got {alpha}")
    return n * (math.log2(1.0 + alpha) + alpha * math.log2(1.0 + 1.0 / alpha))


def _log2_g_continuous(x: float, m: int) -> float:
    """Continuous (log-gamma) extension of log2 dim_fock in the photon count."""
    return (math.lgamma(x + m) - math.lgamma(x + 1.0) - math.lgamma(m)) / _LN2


def peak_and_crossover(n: int, m: int, m_a: int, tol: float = 1e-9):
    """Locations shaping the per-sector profile, as reals in [0, n].

    The peak n * m_a / m maximizes the product of the two sector dimensions;
    the crossover is where Alice's sector dimension overtakes Bob's, found by
    bisection on the log-gamma extension.
    """
    _check_split(n, m, m_a)
    m_b = m - m_a
    peak = n * m_a / m

    def h(x):
        return _log2_g_continuous(x, m_a) - _log2_g_continuous(n - x, m_b)

    lo, hi = 0.0, float(n)
    f_lo, f_hi = h(lo), h(hi)
    if f_lo == 0.0:
        return peak, lo
    if f_hi == 0.0:
        return peak, hi
    # h is increasing: g(x, m_a) grows while g(n-x, m_b) shrinks
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = h(mid)
        if f_mid == 0.0:
            return peak, mid
        if f_mid < 0.0:
            lo = mid
        else:
            hi = mid
    return peak, 0.5 * (lo + hi)


def classify_regime(n: int, m: int, m_a: int) -> Regime:
    """Asymptotic regime of the mode split; saturation is checked only on
    the Bob-heavy side, where it takes precedence over BOB_DOMINANT."""
    _check_split(n, m, m_a)
    m_b = m - m_a
    if m_a > m_b:
        return Regime.ALICE_DOMINANT
    if m_a == m_b:
        return Regime.BALANCED
    if m_b >= dim_fock(n - 1, m_a):
        return Regime.BOB_SATURATED
    return Regime.BOB_DOMINANT


@dataclass
class CapacityReport:
    """Everything the capacity formula says about one (n, m, m_a) device."""

    n_photons: int
    n_modes: int
    m_alice: int
    m_bob: int
    dim_hilbert: int
    log2_dim_hilbert: float
    f_terms: list
    span_dim: int
    capacity_bits: float
    regime: Regime
    n_a_peak: float
    n_a_crossover: float

    def to_dict(self) -> dict:
        return {
            "n_photons": self.n_photons,
            "n_modes": self.n_modes,
            "m_alice": self.m_alice,
            "m_bob": self.m_bob,
            "dim_hilbert": self.dim_hilbert,
            "log2_dim_hilbert": self.log2_dim_hilbert,
            "f_terms": self.f_terms,
            "span_dim": self.span_dim,
            "capacity_bits": self.capacity_bits,
            "regime": self.regime.value,
            "n_a_peak": self.n_a_peak,
            "n_a_crossover": self.n_a_crossover,
        }


def capacity_report(n: int, m: int, m_a: int) -> CapacityReport:
    _check_split(n, m, m_a)
    m_b = m - m_a
    terms = [f_term(n_a, n, m_a, m_b) for n_a in range(n + 1)]
    d_s = sum(terms)
    peak, crossover = peak_and_crossover(n, m, m_a)
    return CapacityReport(
        n_photons=n,
        n_modes=m,
        m_alice=m_a,
        m_bob=m_b,
        dim_hilbert=dim_fock(n, m),
        log2_dim_hilbert=log2_dim_fock(n, m),
        f_terms=terms,
        span_dim=d_s,
        capacity_bits=math.log2(d_s),
        regime=classify_regime(n, m, m_a),
        n_a_peak=peak,
        n_a_crossover=crossover,
    )


def mode_split_for_ratio(m: int, ratio: float) -> int:
    """Nearest-integer Alice mode count for a target m_a/m_b ratio."""
    if ratio <= 0 or not math.isfinite(ratio):
        raise InvalidModeSplit(f"mode ratio must be positive and finite, got {ratio}")
    m_a = round(m * ratio / (1.0 + ratio))
    if not 1 <= m_a <= m - 1:
        raise InvalidModeSplit(
            f"ratio {ratio} rounds to m_a={m_a}, leaving one party without modes")
    return m_a


def capacity_scaling_table(n_list, ratio_list):
    """Capacity scaling rows for m = 2n at the given Alice/Bob mode ratios.

    All combinatorics in log space.  Each row records the integer m_a the
    ratio rounded to, plus the dual-rail dense-coding reference of n bits
    for n photons (n/2 shared pairs at 2 bits each; a convention, flagged
    here so downstream plots can label it).
    """
    rows = []
    for ratio in ratio_list:
        for n in n_list:
            m = 2 * n
            m_a = mode_split_for_ratio(m, ratio)
            rows.append({
                "n_photons": n,
                "n_modes": m,
                "m_alice": m_a,
                "log2_span": span_bound_log2(n, m, m_a),
                "log2_dim_hilbert": log2_dim_fock(n, m),
                "dualrail_bits": float(n),
            })
    return rows
