"""Primes, factorization, primitive roots, and multiplicative subgroups of Z_p*.

Everything here is exact integer arithmetic.  The primality test is
deterministic for all inputs below 2^64, so "prime" never means "probably
prime" anywhere downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

# Largest modulus the dense representations downstream are sized for.
MODULUS_LIMIT = 1 << 26

# Witness set proven sufficient for deterministic Miller-Rabin below 2^64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_LIMIT = 1_000_000


def is_prime(n: int) -> bool:
    """Deterministic primality test, exact for all n < 2^64."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """Return a nontrivial factor of composite, odd, non-prime-power-free n.

    Brent's cycle variant of Pollard rho.  The polynomial increment is swept
    deterministically so repeated runs factor the same way.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = 0
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to factor {n}")


def factorize(n: int) -> list[int]:
    """Prime factorization of n >= 1 with multiplicity, sorted ascending."""
    if n < 1:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    out: list[int] = []
    for q in (2, 3, 5):
        while n % q == 0:
            out.append(q)
            n //= q
    f = 7
    # wheel over residues coprime to 30
    steps = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n and f < _TRIAL_LIMIT:
        while n % f == 0:
            out.append(f)
            n //= f
        f += steps[i]
        i = (i + 1) % 8
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if is_prime(m):
                out.append(m)
                continue
            g = _brent_rho(m)
            stack.append(g)
            stack.append(m // g)
    out.sort()
    return out


def divisors(n: int) -> list[int]:
    """All positive divisors of n, sorted ascending."""
    divs = [1]
    fac = factorize(n)
    i = 0
    while i < len(fac):
        q = fac[i]
        e = 1
        while i + e < len(fac) and fac[i + e] == q:
            e += 1
        divs = [d * q**k for d in divs for k in range(e + 1)]
        i += e
    divs.sort()
    return divs


@lru_cache(maxsize=65536)
def validate_modulus(p: int) -> int:
    """Check that p is an odd prime in the supported range and return it."""
    p = int(p)
    if p < 3 or p > MODULUS_LIMIT:
        raise ValueError(f"modulus must be an odd prime in [3, 2^26], got {p}")
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    return p


@lru_cache(maxsize=65536)
def primitive_root(p: int) -> int:
    """Smallest primitive root modulo the odd prime p."""
    p = validate_modulus(p)
    prime_factors = sorted(set(factorize(p - 1)))
    g = 2
    while True:
        if all(pow(g, (p - 1) // q, p) != 1 for q in prime_factors):
            return g
        g += 1


@dataclass(eq=False)
class Subgroup:
    """The unique multiplicative subgroup of Z_p* of order d.

    elements is sorted ascending; gen has multiplicative order exactly d.
    """

    p: int
    d: int
    gen: int
    elements: np.ndarray

    def __post_init__(self) -> None:
        self.elements.flags.writeable = False

    def __eq__(self, other: object) -> bool:
        # one subgroup per (p, d), so the pair is the identity
        return isinstance(other, Subgroup) and (self.p, self.d) == (other.p, other.d)

    def __hash__(self) -> int:
        return hash((self.p, self.d))

    def __repr__(self) -> str:
        return f"Subgroup(p={self.p}, d={self.d})"

    @cached_property
    def indicator(self):
        from .zpsets import ZpSet

        return ZpSet.from_elements(self.p, self.elements)

    @cached_property
    def cosets(self) -> "CosetDecomposition":
        return coset_reps(self)


def subgroup(p: int, d: int) -> Subgroup:
    """Construct the order-d subgroup of Z_p*.  Requires d | p - 1."""
    p = validate_modulus(p)
    if d < 1 or (p - 1) % d != 0:
        raise ValueError(f"order {d} does not divide p - 1 = {p - 1}")
    g = primitive_root(p)
    h = pow(g, (p - 1) // d, p)
    elements = np.empty(d, dtype=np.int64)
    x = 1
    for i in range(d):
        elements[i] = x
        x = x * h % p
    elements.sort()
    return Subgroup(p=p, d=d, gen=h, elements=elements)


@dataclass(eq=False)
class CosetDecomposition:
    """Cosets of a subgroup in Z_p*, keyed by their minimal representatives."""

    subgroup: Subgroup
    reps: np.ndarray  # sorted ascending, one per coset, (p-1)/d of them

    def __post_init__(self) -> None:
        self.reps.flags.writeable = False

    @cached_property
    def coset_index(self) -> np.ndarray:
        """Array mapping z in Z_p to the index of its coset in reps (-1 at 0)."""
        A = self.subgroup
        idx = np.full(A.p, -1, dtype=np.int64)
        members = (self.reps[:, None] * A.elements[None, :]) % A.p
        idx[members.ravel()] = np.repeat(np.arange(len(self.reps)), A.d)
        return idx

    def coset_of(self, rep: int) -> np.ndarray:
        """Elements of the coset rep * A, sorted ascending."""
        A = self.subgroup
        out = (rep * A.elements) % A.p
        out.sort()
        return out


def coset_reps(A: Subgroup) -> CosetDecomposition:
    """Decompose Z_p* into cosets of A, choosing the minimal residue of each.

    The scan is O(p), which is fine at desk scale; avoid at the 2^26 limit.
    """
    covered = np.zeros(A.p, dtype=bool)
    covered[0] = True
    reps = []
    for z in range(1, A.p):
        if not covered[z]:
            reps.append(z)
            covered[(z * A.elements) % A.p] = True
    return CosetDecomposition(subgroup=A, reps=np.asarray(reps, dtype=np.int64))
