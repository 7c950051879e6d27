"""QPSK over complex baseband and the closed-form BER / power-ratio chain.

The Gray map sends the bit pair (b0, b1) to ((1-2*b0) + 1j*(1-2*b1))/sqrt(2),
one unit-magnitude constellation point per pair, held for an integer number
of samples (rectangular pulse).  Hard-decision demodulation averages each
symbol and slices the real and imaginary signs independently, so it is
invariant under positive amplitude scaling.

Under additive white Gaussian interference the bit error rate is
0.5*erfc(sqrt(Eb/N0)), and with two bits per symbol the attacker-to-victim
power ratio R relates to Eb/N0 as Eb/N0 = 1/(2R).  erfc and its inverse are
implemented here as rational approximations (Cody's minimax fits and
Acklam's normal quantile plus Newton polishing) with relative error far
below 1e-7; the test suite validates them against an independent
high-precision oracle.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from . import ecc
from .iq import IqBuffer

BITS_PER_SYMBOL = 2
# Ring-alert style bursts signal at 25 kilosymbols per second.
DEFAULT_SYMBOL_RATE_HZ = 25_000.0

_SQRT_HALF = math.sqrt(0.5)

# Coefficients of Cody's rational minimax approximations to erf/erfc
# (W. J. Cody, Math. Comp. 23, 1969), accurate to double precision.
_ERF_A = (
    3.16112374387056560e00, 1.13864154151050156e02, 3.77485237685302021e02,
    3.20937758913846947e03, 1.85777706184603153e-1,
)
_ERF_B = (
    2.36012909523441209e01, 2.44024637934444173e02, 1.28261652607737228e03,
    2.84423683343917062e03,
)
_ERFC_C = (
    5.64188496988670089e-1, 8.88314979438837594e00, 6.61191906371416295e01,
    2.98635138197400131e02, 8.81952221241769090e02, 1.71204761263407058e03,
    2.05107837782607147e03, 1.23033935479799725e03, 2.15311535474403846e-8,
)
_ERFC_D = (
    1.57449261107098347e01, 1.17693950891312499e02, 5.37181101862009858e02,
    1.62138957456669019e03, 3.29079923573345963e03, 4.36261909014324716e03,
    3.43936767414372164e03, 1.23033935480374942e03,
)
_ERFC_P = (
    3.05326634961232344e-1, 3.60344899949804439e-1, 1.25781726111229246e-1,
    1.60837851487422766e-2, 6.58749161529837803e-4, 1.63153871373020978e-2,
)
_ERFC_Q = (
    2.56852019228982242e00, 1.87295284992346047e00, 5.27905102951428412e-1,
    6.05183413124413191e-2, 2.33520497626869185e-3,
)
_INV_SQRT_PI = 5.6418958354775628695e-1


def _erf_small(y2):
    num = _ERF_A[4] * y2
    den = y2.copy()
    for a, b in zip(_ERF_A[:3], _ERF_B[:3]):
        num = (num + a) * y2
        den = (den + b) * y2
    return (num + _ERF_A[3]) / (den + _ERF_B[3])


def _exp_split(y):
    # exp(-y^2) split to limit argument-rounding error, per Cody.
    ysq = np.floor(y * 16.0) / 16.0
    return np.exp(-ysq * ysq) * np.exp(-(y - ysq) * (y + ysq))


def _erfc_mid(y):
    num = _ERFC_C[8] * y
    den = y.copy()
    for c, d in zip(_ERFC_C[:7], _ERFC_D[:7]):
        num = (num + c) * y
        den = (den + d) * y
    return _exp_split(y) * (num + _ERFC_C[7]) / (den + _ERFC_D[7])


def _erfc_large(y):
    y2 = 1.0 / (y * y)
    num = _ERFC_P[5] * y2
    den = y2.copy()
    for p, q in zip(_ERFC_P[:4], _ERFC_Q[:4]):
        num = (num + p) * y2
        den = (den + q) * y2
    tail = y2 * (num + _ERFC_P[4]) / (den + _ERFC_Q[4])
    return _exp_split(y) * (_INV_SQRT_PI - tail) / y


def erfc(x):
    """Complementary error function, elementwise over scalars or arrays."""
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    y = np.atleast_1d(np.abs(arr))
    out = np.empty_like(y)
    small = y <= 0.46875
    mid = (y > 0.46875) & (y <= 4.0)
    large = y > 4.0
    if np.any(small):
        ys = y[small]
        out[small] = 1.0 - ys * _erf_small(ys * ys)
    if np.any(mid):
        out[mid] = _erfc_mid(y[mid])
    if np.any(large):
        out[large] = _erfc_large(y[large])
    neg = np.atleast_1d(arr) < 0.0
    out[neg] = 2.0 - out[neg]
    return float(out[0]) if scalar else out.reshape(arr.shape)


# Acklam's rational approximation to the standard normal quantile.
_PPF_A = (
    -3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
    1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00,
)
_PPF_B = (
    -5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
    6.680131188771972e01, -1.328068155288572e01,
)
_PPF_C = (
    -7.784894002430293e-3, -3.223964580411365e-1, -2.400758277161838e00,
    -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00,
)
_PPF_D = (
    7.784695709041462e-3, 3.224671290700398e-1, 2.445134137142996e00,
    3.754408661907416e00,
)


def _norm_ppf(p: float) -> float:
    a, b, c, d = _PPF_A, _PPF_B, _PPF_C, _PPF_D
    plow = 0.02425
    if p < plow:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0
        )
    if p > 1.0 - plow:
        return -_norm_ppf(1.0 - p)
    q = p - 0.5
    r = q * q
    return (
        (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5])
        * q
        / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)
    )


def erfcinv(y: float) -> float:
    """Inverse of erfc on (0, 2), polished to double precision by Newton steps."""
    y = float(y)
    if not 0.0 < y < 2.0:
        raise ValueError(f"erfcinv is defined on (0, 2), got {y}")
    if y == 1.0:
        return 0.0
    x = -_norm_ppf(y / 2.0) / math.sqrt(2.0)
    for _ in range(2):
        # f(x) = erfc(x) - y has derivative -2/sqrt(pi) * exp(-x^2)
        x += (erfc(x) - y) * (math.sqrt(math.pi) / 2.0) * math.exp(min(x * x, 700.0))
    return x


def _require_even_bits(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError("bit sequence must be one-dimensional")
    if np.any(arr > 1):
        raise ValueError("bit sequence contains values other than 0 and 1")
    if len(arr) % BITS_PER_SYMBOL:
        raise ValueError(f"bit count must be even, got {len(arr)}")
    return arr


def qpsk_modulate(bits, samples_per_symbol: int, sample_rate_hz: float | None = None) -> IqBuffer:
    """Map bit pairs onto the Gray QPSK constellation with a rectangular pulse.

    Output RMS is 1 by construction.  sample_rate_hz defaults to the symbol
    rate times samples_per_symbol.
    """
    arr = _require_even_bits(bits)
    if samples_per_symbol < 1:
        raise ValueError("samples_per_symbol must be a positive integer")
    i = 1.0 - 2.0 * arr[0::2].astype(float)
    q = 1.0 - 2.0 * arr[1::2].astype(float)
    symbols = (i + 1j * q) * _SQRT_HALF
    if sample_rate_hz is None:
        sample_rate_hz = DEFAULT_SYMBOL_RATE_HZ * samples_per_symbol
    return IqBuffer(np.repeat(symbols, samples_per_symbol), sample_rate_hz)


def qpsk_demodulate(signal: IqBuffer, samples_per_symbol: int) -> np.ndarray:
    """Average each symbol's samples and slice the I/Q signs into bits."""
    if samples_per_symbol < 1:
        raise ValueError("samples_per_symbol must be a positive integer")
    samples = signal.samples
    if len(samples) == 0 or len(samples) % samples_per_symbol:
        raise ValueError(
            f"sample count {len(samples)} is not a positive multiple of {samples_per_symbol}"
        )
    symbols = samples.reshape(-1, samples_per_symbol).mean(axis=1)
    bits = np.empty(len(symbols) * BITS_PER_SYMBOL, dtype=np.uint8)
    bits[0::2] = symbols.real < 0.0
    bits[1::2] = symbols.imag < 0.0
    return bits


def modulate_message(bits, samples_per_symbol: int, sample_rate_hz: float | None = None) -> IqBuffer:
    """qpsk_modulate with odd-length inputs padded by one trailing zero bit."""
    arr = np.asarray(bits, dtype=np.uint8)
    if len(arr) % BITS_PER_SYMBOL:
        arr = np.append(arr, np.uint8(0))
    return qpsk_modulate(arr, samples_per_symbol, sample_rate_hz)


def demodulate_message(signal: IqBuffer, samples_per_symbol: int, bit_count: int) -> np.ndarray:
    """Demodulate and strip the padding added by modulate_message."""
    bits = qpsk_demodulate(signal, samples_per_symbol)
    if bit_count > len(bits):
        raise ValueError(f"signal holds {len(bits)} bits, {bit_count} requested")
    return bits[:bit_count]


def qpsk_ber_theoretical(eb_n0):
    """Bit error probability 0.5*erfc(sqrt(Eb/N0)) for linear Eb/N0 >= 0."""
    arr = np.asarray(eb_n0, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError("Eb/N0 must be nonnegative")
    return 0.5 * erfc(np.sqrt(arr) if arr.ndim else math.sqrt(arr))


def ebn0_from_power_ratio(ratio_db):
    """Eb/N0 = 1/(2 * R) with R the linear attacker-to-victim power ratio."""
    ratio_db = np.asarray(ratio_db, dtype=float)
    out = 0.5 * 10.0 ** (-ratio_db / 10.0)
    return float(out) if out.ndim == 0 else out


def power_ratio_from_ebn0(eb_n0) -> float:
    """Inverse of ebn0_from_power_ratio, in dB."""
    eb_n0 = float(eb_n0)
    if eb_n0 <= 0.0:
        raise ValueError("Eb/N0 must be positive")
    return 10.0 * math.log10(0.5 / eb_n0)


def ber_for_power_ratio(ratio_db):
    """Bit error probability at a given attacker-to-victim ratio in dB."""
    return qpsk_ber_theoretical(ebn0_from_power_ratio(ratio_db))


def ratio_db_for_ber(p: float, paper_form: bool = False) -> float:
    """Attacker-to-victim ratio (dB) that produces bit error rate p.

    The self-consistent inversion of the BER formula is
    Eb/N0 = erfcinv(2p)^2, the default here.  paper_form=True instead uses
    the unsquared erfcinv historically quoted for this link; near p = 0.08
    both land within 0.03 dB of each other because erfcinv(0.16) is close
    to 1.
    """
    p = float(p)
    if not 0.0 < p < 0.5:
        raise ValueError("BER must lie in (0, 0.5) for a finite jammer power")
    t = erfcinv(2.0 * p)
    ratio_linear = 0.5 / (t if paper_form else t * t)
    return 10.0 * math.log10(ratio_linear)


def required_ratio_for_message_error(target_rate: float, use_ecc: bool = True) -> float:
    """Attacker-to-victim ratio (dB) at which the message error rate hits target.

    Chains the closed-form message error model (inverted by root finding)
    with the BER inversion.  Raises when the target exceeds what a
    hard-decision channel (BER < 0.5) can reach.
    """
    target_rate = float(target_rate)
    if not 0.0 < target_rate < 1.0:
        raise ValueError("target message error rate must lie in (0, 1)")
    model = ecc.p_message_error if use_ecc else ecc.p_message_error_no_ecc
    if target_rate >= model(0.5):
        raise ValueError(f"target rate {target_rate} unreachable at BER < 0.5")
    p = brentq(lambda q: model(q) - target_rate, 1e-12, 0.5, xtol=1e-15, rtol=8.9e-16)
    return ratio_db_for_ber(p)
