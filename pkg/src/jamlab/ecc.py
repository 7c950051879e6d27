"""(31,21) block code layer used by ring-alert style 93-bit frames.

Codewords are GF(2) multiples of the degree-10 generator polynomial

    g(x) = x^10 + x^7 + x^5 + x^4 + x^2 + x + 1

encoding is plain polynomial multiplication and data recovery is exact
polynomial division.  The code has minimum Hamming distance 5, so a hard
decoder repairs up to 2 bit errors per block via a precomputed syndrome
table (1 + 31 + 465 = 497 distinct syndromes).  A frame carries three
codewords interleaved round-robin: frame position k holds bit floor(k/3)
of block (k mod 3).

Bit index k is always the coefficient of x^k.  Blocks and frames are
numpy uint8 bit arrays; `*_words` variants operate on packed integers
for bulk Monte Carlo work and exhaustive checks.
"""

from __future__ import annotations

import math

import numpy as np

DATA_BITS = 21
CODEWORD_BITS = 31
BLOCKS_PER_FRAME = 3
FRAME_BITS = CODEWORD_BITS * BLOCKS_PER_FRAME
PARITY_BITS = CODEWORD_BITS - DATA_BITS

# bits set at exponents {0, 1, 2, 4, 5, 7, 10}
GENERATOR_POLY = 0b10010110111


def bits_to_int(bits) -> int:
    """Pack a bit sequence into an integer, index k -> coefficient of x^k."""
    value = 0
    for k, bit in enumerate(bits):
        if bit not in (0, 1):
            raise ValueError(f"bit values must be 0 or 1, got {bit!r}")
        value |= int(bit) << k
    return value


def int_to_bits(value: int, width: int) -> np.ndarray:
    """Unpack an integer into a uint8 bit array of the given width."""
    if value < 0 or value >> width:
        raise ValueError(f"value {value} does not fit in {width} bits")
    return np.array([(value >> k) & 1 for k in range(width)], dtype=np.uint8)


def gf2_mul(a: int, b: int) -> int:
    """Carry-less (GF(2)) polynomial product of two bit-packed polynomials."""
    product = 0
    while b:
        if b & 1:
            product ^= a
        b >>= 1
        a <<= 1
    return product


def gf2_divmod(numerator: int, denominator: int) -> tuple[int, int]:
    """GF(2) polynomial long division, returning (quotient, remainder)."""
    if denominator == 0:
        raise ZeroDivisionError("GF(2) division by zero polynomial")
    deg_d = denominator.bit_length() - 1
    quotient = 0
    remainder = numerator
    while remainder.bit_length() - 1 >= deg_d and remainder:
        shift = remainder.bit_length() - 1 - deg_d
        quotient |= 1 << shift
        remainder ^= denominator << shift
    return quotient, remainder


def _build_tables():
    """Syndrome tables for all error patterns of weight <= 2.

    Minimum distance 5 guarantees the 497 syndromes are pairwise distinct,
    which is re-asserted here at import time.
    """
    basis = [gf2_divmod(1 << i, GENERATOR_POLY)[1] for i in range(CODEWORD_BITS)]
    err_mask = np.full(1 << PARITY_BITS, -1, dtype=np.int64)
    err_mask[0] = 0
    for i in range(CODEWORD_BITS):
        err_mask[basis[i]] = 1 << i
    for i in range(CODEWORD_BITS):
        for j in range(i + 1, CODEWORD_BITS):
            err_mask[basis[i] ^ basis[j]] = (1 << i) | (1 << j)
    filled = int(np.count_nonzero(err_mask >= 0))
    if filled != 1 + 31 + 465:
        raise AssertionError(f"syndrome table collision: {filled} entries, expected 497")

    # Split lookup tables so a 31-bit word's syndrome is two indexed XORs.
    syn_lo = np.zeros(1 << 16, dtype=np.uint16)
    for i in range(16):
        syn_lo[1 << i : 2 << i] = syn_lo[: 1 << i] ^ np.uint16(basis[i])
    syn_hi = np.zeros(1 << 15, dtype=np.uint16)
    for i in range(15):
        syn_hi[1 << i : 2 << i] = syn_hi[: 1 << i] ^ np.uint16(basis[16 + i])
    return err_mask, syn_lo, syn_hi


_ERR_MASK, _SYN_LO, _SYN_HI = _build_tables()


def _require_bits(bits, width: int, name: str) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1 or len(arr) != width:
        raise ValueError(f"{name} must have exactly {width} bits, got shape {arr.shape}")
    if np.any(arr > 1):
        raise ValueError(f"{name} contains values other than 0 and 1")
    return arr


def bch_encode(data) -> np.ndarray:
    """Encode 21 data bits into the 31-bit codeword data(x) * g(x)."""
    arr = _require_bits(data, DATA_BITS, "data block")
    return int_to_bits(gf2_mul(bits_to_int(arr), GENERATOR_POLY), CODEWORD_BITS)


def bch_decode(received):
    """Hard-decode a 31-bit block; returns the 21 data bits, or None.

    Any pattern within Hamming distance 2 of a valid codeword decodes to
    that codeword's data.  A syndrome matching no weight <= 2 pattern
    returns None (uncorrectable).  Three or more errors may alias onto a
    correctable syndrome and silently yield wrong data; callers comparing
    against ground truth must count that as a failure.
    """
    arr = _require_bits(received, CODEWORD_BITS, "received block")
    word = bits_to_int(arr)
    syndrome = gf2_divmod(word, GENERATOR_POLY)[1]
    mask = int(_ERR_MASK[syndrome])
    if mask < 0:
        return None
    quotient, remainder = gf2_divmod(word ^ mask, GENERATOR_POLY)
    if remainder:
        raise AssertionError("corrected word is not a codeword")
    return int_to_bits(quotient, DATA_BITS)


def interleave(blocks) -> np.ndarray:
    """Merge three 31-bit codewords into a 93-bit frame, round-robin."""
    if len(blocks) != BLOCKS_PER_FRAME:
        raise ValueError(f"expected {BLOCKS_PER_FRAME} blocks, got {len(blocks)}")
    frame = np.empty(FRAME_BITS, dtype=np.uint8)
    for b, block in enumerate(blocks):
        frame[b::BLOCKS_PER_FRAME] = _require_bits(block, CODEWORD_BITS, f"block {b}")
    return frame


def deinterleave(frame) -> list[np.ndarray]:
    """Exact inverse of interleave."""
    arr = _require_bits(frame, FRAME_BITS, "frame")
    return [arr[b::BLOCKS_PER_FRAME].copy() for b in range(BLOCKS_PER_FRAME)]


def encode_frame(data) -> np.ndarray:
    """Encode 63 data bits (three 21-bit blocks) into an interleaved frame."""
    arr = _require_bits(data, DATA_BITS * BLOCKS_PER_FRAME, "frame data")
    blocks = [bch_encode(arr[b * DATA_BITS : (b + 1) * DATA_BITS]) for b in range(BLOCKS_PER_FRAME)]
    return interleave(blocks)


def decode_frame(frame):
    """Decode a 93-bit frame into three 21-bit data blocks, or None.

    None means at least one block was uncorrectable (message error).
    """
    blocks = deinterleave(frame)
    decoded = []
    for block in blocks:
        data = bch_decode(block)
        if data is None:
            return None
        decoded.append(data)
    return decoded


def encode_words(data_words) -> np.ndarray:
    """Vectorized encoder over packed 21-bit integers."""
    words = np.asarray(data_words, dtype=np.uint32)
    if np.any(words >> DATA_BITS):
        raise ValueError("data words must fit in 21 bits")
    codewords = np.zeros_like(words)
    for power in (0, 1, 2, 4, 5, 7, 10):
        codewords ^= words << np.uint32(power)
    return codewords


def syndrome_words(codewords) -> np.ndarray:
    """Vectorized 10-bit syndrome of packed 31-bit words."""
    words = np.asarray(codewords, dtype=np.uint32)
    if np.any(words >> CODEWORD_BITS):
        raise ValueError("received words must fit in 31 bits")
    return (_SYN_LO[words & 0xFFFF] ^ _SYN_HI[words >> 16]).astype(np.uint16)


def decode_words(received_words) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized decoder over packed 31-bit integers.

    Returns (data_words, ok): data is valid only where ok is True.
    """
    words = np.asarray(received_words, dtype=np.uint32)
    if np.any(words >> CODEWORD_BITS):
        raise ValueError("received words must fit in 31 bits")
    masks = _ERR_MASK[syndrome_words(words)]
    ok = masks >= 0
    corrected = words ^ np.where(ok, masks, 0).astype(np.uint32)
    remainder = corrected.copy()
    data = np.zeros_like(remainder)
    for k in range(DATA_BITS - 1, -1, -1):
        bit = (remainder >> np.uint32(k + PARITY_BITS)) & np.uint32(1)
        data |= bit << np.uint32(k)
        remainder ^= bit * np.uint32(GENERATOR_POLY << k)
    return data, ok


def _check_probability(p):
    arr = np.asarray(p, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("bit-error probability must lie in [0, 1]")
    return arr if arr.ndim else float(arr)


def p_block_error(p):
    """Probability a 31-bit block suffers more than 2 bit errors.

    1 - (1-p)^31 - 31 p (1-p)^30 - C(31,2) p^2 (1-p)^29, elementwise over
    arrays.  Out-of-domain p raises; no silent clamping.
    """
    p = _check_probability(p)
    q = 1.0 - p
    survive = q**31 + 31.0 * p * q**30 + math.comb(31, 2) * p**2 * q**29
    return 1.0 - survive


def p_message_error(p):
    """Probability at least one of the three blocks fails: 1 - (1 - P_block)^3."""
    return 1.0 - (1.0 - p_block_error(p)) ** 3


def p_message_error_no_ecc(p):
    """Probability any of the 93 raw bits errors when no code is applied."""
    p = _check_probability(p)
    return 1.0 - (1.0 - p) ** FRAME_BITS
