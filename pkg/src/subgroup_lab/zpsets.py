"""Dense subsets of Z_p with additive and multiplicative set arithmetic.

A ZpSet is an immutable boolean indicator vector of length p.  Sumsets switch
between two exact strategies: shifted ORs driven by the smaller operand, and
integer convolution thresholded at >= 1 once both operands are large.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numtheory import Subgroup, validate_modulus

# Crossover between the shifted-OR sumset and the convolution sumset.
SHIFT_OR_THRESHOLD = 512


class ZpSet:
    """Immutable subset of Z_p backed by a dense boolean vector."""

    __slots__ = ("p", "bits", "card")

    def __init__(self, p: int, bits: np.ndarray):
        self.p = validate_modulus(p)
        arr = np.array(bits, dtype=bool, copy=True)
        if arr.shape != (self.p,):
            raise ValueError(f"indicator must have length p={self.p}")
        arr.flags.writeable = False
        self.bits = arr
        self.card = int(arr.sum())

    @classmethod
    def from_elements(cls, p: int, elements) -> "ZpSet":
        p = validate_modulus(p)
        bits = np.zeros(p, dtype=bool)
        idx = np.asarray(list(elements), dtype=np.int64) % p
        bits[idx] = True
        return cls(p, bits)

    @classmethod
    def empty(cls, p: int) -> "ZpSet":
        return cls(p, np.zeros(validate_modulus(p), dtype=bool))

    def members(self) -> np.ndarray:
        """Elements in ascending order."""
        return np.flatnonzero(self.bits).astype(np.int64)

    def covers_nonzero(self) -> bool:
        """True iff the set contains every nonzero residue."""
        return bool(self.bits[1:].all())

    def is_subset_of(self, other: "ZpSet") -> bool:
        if self.p != other.p:
            raise ValueError("modulus mismatch")
        return not bool((self.bits & ~other.bits).any())

    def __contains__(self, x: int) -> bool:
        return bool(self.bits[x % self.p])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ZpSet):
            return NotImplemented
        return self.p == other.p and bool((self.bits == other.bits).all())

    def __hash__(self) -> int:
        return hash((self.p, self.bits.tobytes()))

    def __len__(self) -> int:
        return self.card

    def __repr__(self) -> str:
        return f"ZpSet(p={self.p}, card={self.card})"

    def to_text(self) -> str:
        """Serialize as 'p:{e1,e2,...}' with ascending elements."""
        inner = ",".join(str(int(e)) for e in self.members())
        return f"{self.p}:{{{inner}}}"

    @classmethod
    def from_text(cls, text: str) -> "ZpSet":
        head, _, body = text.partition(":")
        body = body.strip()
        if not body.startswith("{") or not body.endswith("}"):
            raise ValueError(f"malformed set literal: {text!r}")
        inner = body[1:-1].strip()
        elems = [int(tok) for tok in inner.split(",")] if inner else []
        return cls.from_elements(int(head), elems)


def _require_same_modulus(X: ZpSet, Y: ZpSet) -> int:
    if X.p != Y.p:
        raise ValueError(f"modulus mismatch: {X.p} vs {Y.p}")
    return X.p


def translate(C: ZpSet, z: int) -> ZpSet:
    """The shifted set C + z."""
    return ZpSet(C.p, np.roll(C.bits, z % C.p))


def sumset(X: ZpSet, Y: ZpSet) -> ZpSet:
    """X + Y = {x + y mod p}.  Exact by construction on either strategy."""
    p = _require_same_modulus(X, Y)
    small, big = (X, Y) if X.card <= Y.card else (Y, X)
    if small.card == 0:
        return ZpSet.empty(p)
    if small.card <= SHIFT_OR_THRESHOLD:
        out = np.zeros(p, dtype=bool)
        bb = big.bits
        for x in small.members():
            x = int(x)
            if x == 0:
                out |= bb
            else:
                out[x:] |= bb[: p - x]
                out[:x] |= bb[p - x :]
        return ZpSet(p, out)
    from .spectral import cyclic_convolution_exact

    counts = cyclic_convolution_exact(
        X.bits.astype(np.int64), Y.bits.astype(np.int64), p
    )
    return ZpSet(p, counts > 0)


def fold_sumset(A: ZpSet, k: int) -> ZpSet:
    """The k-fold sumset kA = A + ... + A, computed by iterated sumset."""
    if k < 1:
        raise ValueError(f"fold count must be >= 1, got {k}")
    out = A
    for _ in range(k - 1):
        out = sumset(out, A)
    return out


def shift_intersect(C: ZpSet, z: int) -> ZpSet:
    """C intersected with its translate, C ∩ (C + z)."""
    rolled = np.roll(C.bits, z % C.p)
    return ZpSet(C.p, C.bits & rolled)


def dilate(X: ZpSet, a: int) -> ZpSet:
    """The dilate a·X = {a x mod p}.  Requires a nonzero mod p."""
    a = a % X.p
    if a == 0:
        raise ValueError("dilation factor must be nonzero mod p")
    bits = np.zeros(X.p, dtype=bool)
    bits[(a * X.members()) % X.p] = True
    return ZpSet(X.p, bits)


@dataclass(frozen=True)
class InvariantSet:
    """A union of cosets of a subgroup, optionally including 0.

    Dilation by any subgroup element permutes each coset onto itself, so these
    are exactly the sets fixed by the subgroup action away from zero.
    """

    base: ZpSet
    subgroup: Subgroup
    reps: tuple[int, ...]
    includes_zero: bool

    def members(self) -> np.ndarray:
        return self.base.members()


def invariant_set(A: Subgroup, reps, includes_zero: bool = False) -> InvariantSet:
    """Build the union of the cosets rep*A over reps, plus 0 if asked.

    Reps must be nonzero and lie in pairwise distinct cosets.
    """
    reps = [int(r) % A.p for r in reps]
    bits = np.zeros(A.p, dtype=bool)
    for r in reps:
        if r == 0:
            raise ValueError("coset representative must be nonzero")
        bits[(r * A.elements) % A.p] = True
    if int(bits.sum()) != A.d * len(reps):
        raise ValueError("representatives fall in overlapping cosets")
    if includes_zero:
        bits[0] = True
    return InvariantSet(
        base=ZpSet(A.p, bits),
        subgroup=A,
        reps=tuple(sorted(reps)),
        includes_zero=includes_zero,
    )


def is_invariant(S: ZpSet, A: Subgroup) -> bool:
    """True iff S \\ {0} is fixed by dilation under A.

    Checking the generator suffices since it generates the whole subgroup.
    """
    if S.p != A.p:
        raise ValueError(f"modulus mismatch: {S.p} vs {A.p}")
    nz = np.array(S.bits, copy=True)
    nz[0] = False
    stripped = ZpSet(S.p, nz)
    if stripped.card == 0:
        return True
    return dilate(stripped, A.gen) == stripped
