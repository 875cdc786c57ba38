"""Exact cyclic convolution over Z_p and complex exponential-sum spectra.

Convolution is done with a number-theoretic transform over word-size-friendly
primes.  A single modulus covers indicator counts (values < 2^26); deeper
convolution chains whose values outgrow one modulus escalate automatically to
a two-prime CRT reconstruction and then to a big-integer Kronecker product, so
results are exact at every size and nothing ever wraps silently.

The complex spectrum of prime length p is computed by the chirp-z (Bluestein)
reduction to power-of-two FFTs, since p prime admits no radix splitting.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numtheory import validate_modulus
from .zpsets import ZpSet

# NTT primes q = c * 2^k + 1 with generator g.  All are below 2^31 so products
# of two residues stay inside int64.
_NTT_PRIMES = ((2013265921, 31), (1811939329, 13), (469762049, 3))

# Relative and absolute floors for floating-point spectral comparisons.
REL_TOL = 1e-6
ABS_TOL = 1e-9


def _next_pow2(n: int) -> int:
    return 1 << (n - 1).bit_length()


@lru_cache(maxsize=None)
def _bitrev_perm(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    rev.flags.writeable = False
    return rev


@lru_cache(maxsize=None)
def _twiddles(q: int, g: int, n: int, inverse: bool) -> np.ndarray:
    """Powers w^0 .. w^(n/2-1) of a primitive n-th root of unity mod q."""
    w = pow(g, (q - 1) // n, q)
    if inverse:
        w = pow(w, q - 2, q)
    t = np.ones(1, dtype=np.int64)
    while t.size < n // 2:
        wm = pow(w, t.size, q)
        t = np.concatenate([t, (t * wm) % q])
    t = t[: n // 2]
    t.flags.writeable = False
    return t


def _ntt(a: np.ndarray, q: int, g: int, inverse: bool) -> np.ndarray:
    """In-order iterative radix-2 transform mod q.  Length must be a power of 2."""
    n = a.size
    x = a[_bitrev_perm(n)].copy()
    tw = _twiddles(q, g, n, inverse)
    m = 1
    while m < n:
        x = x.reshape(-1, 2 * m)
        t = tw[:: n // (2 * m)][:m]
        hi = (x[:, m:] * t) % q
        lo = x[:, :m].copy()
        x[:, :m] = (lo + hi) % q
        x[:, m:] = (lo - hi) % q
        x = x.reshape(-1)
        m *= 2
    if inverse:
        x = (x * pow(n, q - 2, q)) % q
    return x


def _ntt_linear_convolve_mod(u: np.ndarray, v: np.ndarray, q: int, g: int, n: int) -> np.ndarray:
    ua = np.zeros(n, dtype=np.int64)
    va = np.zeros(n, dtype=np.int64)
    ua[: u.size] = u % q
    va[: v.size] = v % q
    fu = _ntt(ua, q, g, inverse=False)
    fv = _ntt(va, q, g, inverse=False)
    return _ntt((fu * fv) % q, q, g, inverse=True)


def _fold_cyclic(lin, p: int):
    """Reduce a linear convolution (length >= 2p-1, zero-padded) mod p."""
    lin = lin[: 2 * p - 1]
    out = lin[:p].copy()
    out[: p - 1] += lin[p:]
    return out


def _exact_sum(arr: np.ndarray) -> int:
    if arr.dtype == object:
        return int(sum(arr.tolist()))
    mx = int(arr.max()) if arr.size else 0
    if mx < 1 << 31:
        return int(arr.sum())
    return int(sum(int(x) for x in arr))


def _kronecker_linear(u: np.ndarray, v: np.ndarray, bound: int) -> list[int]:
    """Exact linear convolution by packing into one big integer per operand.

    Each coefficient gets a fixed little-endian byte slot wide enough for the
    a-priori value bound, so no carries cross slots.
    """
    nb = bound.bit_length() // 8 + 1
    def pack(a: np.ndarray) -> int:
        buf = bytearray(len(a) * nb)
        for i, val in enumerate(a.tolist()):
            buf[i * nb : (i + 1) * nb] = int(val).to_bytes(nb, "little")
        return int.from_bytes(bytes(buf), "little")

    prod = pack(u) * pack(v)
    m = len(u) + len(v) - 1
    raw = prod.to_bytes(m * nb + nb, "little")
    return [int.from_bytes(raw[i * nb : (i + 1) * nb], "little") for i in range(m)]


def cyclic_convolution_exact(u, v, p: int) -> np.ndarray:
    """Exact (u * v)(z) = sum_{x+y=z mod p} u[x] v[y] for nonnegative integers.

    The strategy is picked from the a-priori value bound: one NTT modulus,
    two-prime CRT, or Kronecker big-integer multiplication.  The returned
    dtype is int64 when every value provably fits, object otherwise.
    """
    p = validate_modulus(p)
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != (p,) or v.shape != (p,):
        raise ValueError("operands must be vectors of length p")
    if u.dtype != object:
        u = u.astype(np.int64)
    if v.dtype != object:
        v = v.astype(np.int64)
    if (u.dtype != object and (u < 0).any()) or (v.dtype != object and (v < 0).any()):
        raise ValueError("convolution operands must be nonnegative")
    if u.dtype == object and any(int(x) < 0 for x in u.tolist()):
        raise ValueError("convolution operands must be nonnegative")
    if v.dtype == object and any(int(x) < 0 for x in v.tolist()):
        raise ValueError("convolution operands must be nonnegative")

    su, sv = _exact_sum(u), _exact_sum(v)
    if su == 0 or sv == 0:
        return np.zeros(p, dtype=np.int64)
    mu = max(int(x) for x in u.tolist()) if u.dtype == object else int(u.max())
    mv = max(int(x) for x in v.tolist()) if v.dtype == object else int(v.max())
    # every output value is at most min(max(u)*sum(v), max(v)*sum(u))
    bound = min(mu * sv, mv * su)
    n = _next_pow2(2 * p - 1)

    q1, g1 = _NTT_PRIMES[0]
    q2, g2 = _NTT_PRIMES[1]
    if bound < q1 and n <= 1 << 27:
        lin = _ntt_linear_convolve_mod(u, v, q1, g1, n)
        return _fold_cyclic(lin, p)
    if bound < q1 * q2 and n <= 1 << 26:
        l1 = _ntt_linear_convolve_mod(u, v, q1, g1, n)
        l2 = _ntt_linear_convolve_mod(u, v, q2, g2, n)
        inv = pow(q1, -1, q2)
        t = ((l2 - l1) % q2) * inv % q2
        lin = l1 + q1 * t  # < q1*q2 < 2^63
        return _fold_cyclic(lin, p)
    lin_list = _kronecker_linear(u, v, bound)
    lin = np.asarray(lin_list, dtype=(np.int64 if bound < 1 << 63 else object))
    return _fold_cyclic(lin, p)


def naive_cyclic_convolution(u, v, p: int) -> np.ndarray:
    """O(p^2) reference convolution.  Test oracle only; never use in sweeps."""
    p = validate_modulus(p)
    out = [0] * p
    ul = [int(x) for x in u]
    vl = [int(x) for x in v]
    for x in range(p):
        ux = ul[x]
        if ux == 0:
            continue
        for y in range(p):
            if vl[y]:
                out[(x + y) % p] += ux * vl[y]
    return np.asarray(out, dtype=object if max(out) >= 1 << 63 else np.int64)


@dataclass(frozen=True)
class CountProfile:
    """Representation counts (X * Y)(z) for all z, with their total mass."""

    p: int
    counts: np.ndarray
    total: int

    def __post_init__(self) -> None:
        self.counts.flags.writeable = False


def convolve_counts(X: ZpSet, Y: ZpSet) -> CountProfile:
    """Counts of pair representations z = x + y with x in X, y in Y."""
    if X.p != Y.p:
        raise ValueError(f"modulus mismatch: {X.p} vs {Y.p}")
    counts = cyclic_convolution_exact(
        X.bits.astype(np.int64), Y.bits.astype(np.int64), X.p
    )
    return CountProfile(p=X.p, counts=counts, total=X.card * Y.card)


# ---------------------------------------------------------------------------
# complex spectra


@lru_cache(maxsize=8)
def _bluestein_tables(p: int):
    """Chirp tables for length p: (w_pos, fft of the wrapped chirp kernel, n).

    Exponents are reduced mod 2p before hitting the complex exponential, since
    exp(i*pi*m^2/p) has period 2p in m^2.  That keeps arguments small and the
    tables accurate.
    """
    m = np.arange(p, dtype=np.int64)
    sq = (m * m) % (2 * p)
    w_pos = np.exp(1j * np.pi * sq / p)  # e^{+i pi m^2 / p}
    n = _next_pow2(2 * p - 1)
    kernel = np.zeros(n, dtype=np.complex128)
    kernel[:p] = np.conj(w_pos)
    kernel[n - p + 1 :] = np.conj(w_pos[1:][::-1])  # kernel[-m] = kernel[m]
    return w_pos, np.fft.fft(kernel), n


def bluestein_dft(x: np.ndarray) -> np.ndarray:
    """X[k] = sum_n x[n] e^{+2 pi i n k / p} via chirp-z, any length p >= 1."""
    x = np.asarray(x, dtype=np.complex128)
    p = x.size
    if p == 1:
        return x.copy()
    w_pos, kernel_fft, n = _bluestein_tables(p)
    a = np.zeros(n, dtype=np.complex128)
    a[:p] = x * w_pos
    conv = np.fft.ifft(np.fft.fft(a) * kernel_fft)
    return w_pos * conv[:p]


@dataclass(frozen=True)
class Spectrum:
    """|sum_{x in S} e_p(lambda x)| for every frequency lambda.

    phi is the maximum over nonzero lambda; argmax is the first lambda
    attaining it.  mags[0] equals |S| exactly by definition of the DC term.
    """

    p: int
    mags: np.ndarray
    phi: float
    argmax: int

    def __post_init__(self) -> None:
        self.mags.flags.writeable = False


def dft_magnitudes(S: ZpSet) -> Spectrum:
    """Full spectrum of the indicator of S, exponential-sum maximum included."""
    x = S.bits.astype(np.float64)
    mags = np.abs(bluestein_dft(x))
    mags[0] = float(S.card)  # DC term is the cardinality, exactly
    if S.p == 1 or S.card == 0:
        return Spectrum(p=S.p, mags=mags, phi=0.0, argmax=0)
    lam = int(np.argmax(mags[1:])) + 1
    return Spectrum(p=S.p, mags=mags, phi=float(mags[lam]), argmax=lam)


def naive_dft_magnitudes(S: ZpSet) -> np.ndarray:
    """Direct O(p |S|) spectrum evaluation.  Test oracle only."""
    members = S.members()
    lam = np.arange(S.p, dtype=np.int64)
    phases = (lam[:, None] * members[None, :]) % S.p
    sums = np.exp(2j * np.pi * phases / S.p).sum(axis=1)
    return np.abs(sums)


def phi_subgroup(A) -> tuple[float, int]:
    """Exponential-sum maximum of a subgroup via one evaluation per coset.

    The subgroup sum at lambda depends only on the coset of lambda, so p-1
    frequencies collapse to (p-1)/d representative evaluations, O(p) work.
    """
    reps = A.cosets.reps
    phases = (reps[:, None] * A.elements[None, :]) % A.p
    sums = np.exp(2j * np.pi * phases / A.p).sum(axis=1)
    mags = np.abs(sums)
    i = int(np.argmax(mags))
    return float(mags[i]), int(reps[i])
