"""Constant-free verification of subgroup growth and energy inequalities.

Every catalog entry compares a measured quantity against the shape of a
proved bound with all absolute constants set to 1, reporting the ratio
lhs / rhs and whether the bound's hypothesis range holds at constant 1
(tunable).  Ratios are diagnostics, not pass/fail tests: a bound with an
implicit constant C is consistent as long as ratios stay bounded.

Logs are natural.  Checks require |A| >= 3 so every log factor is positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .energetics import (
    coset_profile,
    restricted_moment,
    shift_sizes,
    ssc_ratio_sum,
    sumset_ratio_sum,
    threshold_invariant_set,
    SUMSET_RATIO_DEFAULT_LIMIT,
)
from .numtheory import Subgroup, subgroup
from .spectral import convolve_counts, cyclic_convolution_exact, phi_subgroup
from .zpsets import ZpSet, fold_sumset, sumset

# Exponent from the six-fold covering criterion: subgroups with
# |A|^23 >= p^11 are the ones the covering statement targets.
COVER_THRESHOLD_NUM = 11
COVER_THRESHOLD_DEN = 23

HEAVY_LIMIT = SUMSET_RATIO_DEFAULT_LIMIT


@dataclass(frozen=True)
class BoundCheck:
    """One measured-vs-bound comparison for a single subgroup."""

    name: str
    p: int
    d: int
    lhs: float
    rhs_expr: float
    ratio: float
    hypothesis_ok: bool


@dataclass(frozen=True)
class FitResult:
    """Least-squares slope of log y against log x."""

    slope: float
    intercept: float
    n_points: int
    residual: float


class CheckContext:
    """Lazily computed per-subgroup quantities shared across catalog checks."""

    def __init__(
        self,
        A: Subgroup,
        *,
        hypothesis_constant: float = 1.0,
        l3_moment_order: float = 2.0,
        l3_threshold: float = 2.0,
        allow_heavy: bool = False,
    ):
        if A.d < 3:
            raise ValueError(f"catalog checks need |A| >= 3, got {A.d}")
        if hypothesis_constant <= 0:
            raise ValueError("hypothesis constant must be positive")
        self.A = A
        self.p = A.p
        self.d = A.d
        self.c = float(hypothesis_constant)
        self.l3_moment_order = float(l3_moment_order)
        self.l3_threshold = float(l3_threshold)
        self.allow_heavy = allow_heavy

    @cached_property
    def lnd(self) -> float:
        return math.log(self.d)

    @cached_property
    def aset(self) -> ZpSet:
        return self.A.indicator

    @cached_property
    def two_a(self) -> ZpSet:
        return fold_sumset(self.aset, 2)

    @cached_property
    def twoA_size(self) -> int:
        return self.two_a.card

    @cached_property
    def profile(self) -> np.ndarray:
        return shift_sizes(self.aset)

    @cached_property
    def energy(self) -> int:
        nz = self.profile[self.profile > 0].astype(np.int64)
        if self.p <= 1 << 20:
            return int(np.dot(nz, nz))
        return int(sum(int(x) * int(x) for x in nz))

    @cached_property
    def energy3(self) -> int:
        nz = self.profile[self.profile > 0].astype(np.int64)
        if self.p <= 1 << 13:
            return int(np.dot(nz * nz, nz))
        return int(sum(int(x) ** 3 for x in nz))

    @cached_property
    def energy32(self) -> float:
        nz = self.profile[self.profile > 0].astype(np.float64)
        return float(np.sum(nz**1.5))

    @cached_property
    def phi(self) -> float:
        return phi_subgroup(self.A)[0]

    @cached_property
    def ssc(self) -> float:
        return ssc_ratio_sum(self.A)

    @cached_property
    def sumset_ratio(self) -> float:
        if self.p > HEAVY_LIMIT and not self.allow_heavy:
            raise ValueError(
                f"ssc_lemma3 needs the heavy shifted-sumset sum; p={self.p} is gated"
            )
        return sumset_ratio_sum(self.A, allow_large=True)

    @cached_property
    def li_pairs(self):
        return coset_profile(self.A).pairs

    @cached_property
    def conv_aa(self):
        return convolve_counts(self.aset, self.aset)

    # hypothesis-range comparators with the tunable constant
    def _ll(self, a: float, b: float) -> bool:
        return a <= self.c * b

    def _gg(self, a: float, b: float) -> bool:
        return a * self.c >= b


def _chk_hk_energy(ctx: CheckContext):
    lhs = float(ctx.energy)
    rhs = ctx.d**2.5
    return lhs, rhs, ctx._ll(ctx.d, ctx.p ** (2 / 3))


def _chk_e3(ctx: CheckContext):
    lhs = float(ctx.energy3)
    rhs = ctx.d**3 * ctx.lnd
    return lhs, rhs, ctx._ll(ctx.d, ctx.p ** (2 / 3))


def _chk_ssc2(ctx: CheckContext):
    lhs = ctx.ssc
    rhs = ctx.d * ctx.lnd
    return lhs, rhs, ctx._ll(ctx.d, ctx.p ** (2 / 3))


def _chk_ssc_lemma3(ctx: CheckContext):
    # unconditional in any abelian group
    lhs = ctx.sumset_ratio
    rhs = float(ctx.energy3) / ctx.d**2
    return lhs, rhs, True


def _chk_energy1_shkredov(ctx: CheckContext):
    lhs = float(ctx.energy)
    rhs = ctx.d ** (4 / 3) * ctx.twoA_size ** (2 / 3) * ctx.lnd
    hyp = ctx._ll(ctx.d, ctx.p ** (2 / 3)) and ctx._ll(
        float(ctx.energy), ctx.d**1.5 * math.sqrt(ctx.p) * ctx.lnd
    )
    return lhs, rhs, hyp


def _chk_energy2_shkredov(ctx: CheckContext):
    lhs = float(ctx.energy)
    rhs = max(
        ctx.d ** (22 / 9) * ctx.lnd,
        ctx.d**3 * ctx.p ** (-1 / 3) * ctx.lnd ** (4 / 3),
    )
    return lhs, rhs, ctx._ll(ctx.d, ctx.p ** (2 / 3))


def _chk_energy_extension(ctx: CheckContext):
    lhs = float(ctx.energy)
    rhs = max(
        ctx.d ** (4 / 3) * ctx.twoA_size ** (2 / 3) * math.sqrt(ctx.lnd),
        ctx.d * ctx.twoA_size**2 / ctx.p * ctx.lnd,
    )
    return lhs, rhs, ctx._ll(ctx.d, ctx.p ** (2 / 3))


def _chk_sumset_growth(ctx: CheckContext):
    # lower bound on |2A|; the ratio is inverted so small still means consistent
    if ctx._ll(ctx.d, ctx.p ** (5 / 9) * ctx.lnd ** (-1 / 18)):
        bound = ctx.d ** (8 / 5) * ctx.lnd ** (-3 / 10)
    else:
        bound = ctx.d * ctx.p ** (1 / 3) * ctx.lnd ** (-1 / 3)
    return float(ctx.twoA_size), bound, ctx._ll(ctx.d, ctx.p ** (2 / 3))


def _chk_phi_hk(ctx: CheckContext):
    e4 = float(ctx.energy) ** 0.25
    if ctx._gg(ctx.d, ctx.p ** (2 / 3)):
        rhs = math.sqrt(ctx.p)
        hyp = True
    elif ctx._gg(ctx.d, math.sqrt(ctx.p)):
        rhs = ctx.p**0.25 * ctx.d**-0.25 * e4
        hyp = True
    else:
        rhs = ctx.p**0.125 * e4
        hyp = ctx._gg(ctx.d, ctx.p ** (1 / 3))
    return ctx.phi, rhs, hyp


def _chk_phi_shparlinski(ctx: CheckContext):
    lhs = ctx.phi
    rhs = ctx.d ** (7 / 12) * ctx.p ** (1 / 6)
    hyp = ctx._gg(ctx.d, ctx.p ** (2 / 5)) and ctx._ll(ctx.d, ctx.p ** (4 / 7))
    return lhs, rhs, hyp


def _chk_e32(ctx: CheckContext):
    lhs = ctx.energy32
    rhs = math.sqrt(ctx.d) * ctx.twoA_size * ctx.lnd ** (7 / 4)
    return lhs, rhs, ctx._ll(ctx.d, math.sqrt(ctx.p))


def _chk_phi_expA(ctx: CheckContext):
    # two equivalent-strength forms are both claimed; compare with the tighter
    form1 = (
        ctx.p**0.125
        * ctx.d**-0.125
        * ctx.twoA_size**0.25
        * float(ctx.energy) ** 0.125
        * ctx.lnd ** (7 / 16)
    )
    form2 = ctx.p**0.125 * ctx.d ** (1 / 24) * ctx.twoA_size ** (1 / 3) * ctx.lnd ** (5 / 8)
    return ctx.phi, min(form1, form2), ctx._ll(ctx.d, math.sqrt(ctx.p))


def _chk_sv_convolution(ctx: CheckContext):
    # instantiated with S1 = S2 = S3 = A, the subgroup as an invariant set
    counts = ctx.conv_aa.counts
    lhs = float(counts[ctx.A.elements].sum())
    rhs = ctx.d ** (-1 / 3) * (ctx.d**3) ** (2 / 3)
    hyp = ctx._ll(ctx.d**3, min(float(ctx.d) ** 5, ctx.p**3 / ctx.d))
    return lhs, rhs, hyp


def _chk_l3_moment(ctx: CheckContext):
    r = ctx.l3_moment_order
    k = ctx.l3_threshold
    prof = ctx.conv_aa
    M = threshold_invariant_set(prof, ctx.A, k)
    lhs = restricted_moment(prof, M, r)
    s1 = s2 = float(ctx.d)
    base = s1**2 * s2**2 / ctx.d
    if r == 3.0:
        arg = s1**2 * s2**2 / (ctx.d**2 * k**3)
        rhs = base * max(math.log(arg), 1.0) if arg > 0 else base
    else:
        rhs = base * k ** (r - 3)
    m_size = float(len(M.members()))
    hyp = ctx._gg(k, 1.0) and ctx._ll(
        s1 * s2 * m_size * ctx.d, min(float(ctx.d) ** 6, float(ctx.p) ** 3)
    )
    return lhs, rhs, hyp


def _chk_li_decay(ctx: CheckContext):
    best = 0.0
    for i, (_, l) in enumerate(ctx.li_pairs, start=1):
        if l == 0:
            break
        best = max(best, l * i ** (2 / 3))
    rhs = ctx.twoA_size ** (2 / 3) * ctx.d ** (-1 / 3) * math.sqrt(ctx.lnd)
    return best, rhs, ctx._ll(ctx.d, math.sqrt(ctx.p))


_CATALOG = {
    "hk_energy": _chk_hk_energy,
    "e3": _chk_e3,
    "ssc2": _chk_ssc2,
    "ssc_lemma3": _chk_ssc_lemma3,
    "energy1_shkredov": _chk_energy1_shkredov,
    "energy2_shkredov": _chk_energy2_shkredov,
    "energy_extension": _chk_energy_extension,
    "sumset_growth": _chk_sumset_growth,
    "phi_hk": _chk_phi_hk,
    "phi_shparlinski": _chk_phi_shparlinski,
    "e32": _chk_e32,
    "phi_expA": _chk_phi_expA,
    "sv_convolution": _chk_sv_convolution,
    "l3_moment": _chk_l3_moment,
    "li_decay": _chk_li_decay,
}

ALL_CHECKS: tuple[str, ...] = tuple(_CATALOG)

# checks whose context requires operations gated above HEAVY_LIMIT
HEAVY_CHECKS = frozenset({"ssc_lemma3"})

# lower-bound checks report rhs/lhs so that small always reads as consistent
_INVERTED = frozenset({"sumset_growth"})


def check_bound(
    name: str,
    A: Subgroup,
    context: CheckContext | None = None,
    **knobs,
) -> BoundCheck:
    """Evaluate one named bound on a subgroup.  Unknown names raise ValueError."""
    if name not in _CATALOG:
        raise ValueError(f"unknown check name: {name!r} (have {', '.join(ALL_CHECKS)})")
    ctx = context if context is not None else CheckContext(A, **knobs)
    lhs, rhs, hyp = _CATALOG[name](ctx)
    if name in _INVERTED:
        ratio = rhs / lhs if lhs > 0 else float("inf")
    else:
        ratio = lhs / rhs
    return BoundCheck(
        name=name,
        p=ctx.p,
        d=ctx.d,
        lhs=float(lhs),
        rhs_expr=float(rhs),
        ratio=float(ratio),
        hypothesis_ok=bool(hyp),
    )


def covering_index(S: ZpSet, kmax: int):
    """Smallest k <= kmax with kS containing all of Z_p*, or None."""
    if kmax < 1:
        raise ValueError(f"kmax must be >= 1, got {kmax}")
    cur = S
    for k in range(1, kmax + 1):
        if cur.covers_nonzero():
            return k
        if k < kmax:
            cur = sumset(cur, S)
    return None


def check_six_fold(A: Subgroup) -> bool:
    """True iff the six-fold sumset 6A covers every nonzero residue.

    Computed through the chain 2A, 3A, 3A + 3A, a different route from
    covering_index's one-step folds.
    """
    aset = A.indicator
    two = sumset(aset, aset)
    three = sumset(two, aset)
    six = sumset(three, three)
    return six.covers_nonzero()


def clears_cover_threshold(p: int, d: int) -> bool:
    """Exact integer test of |A| >= p^(11/23)."""
    return d**COVER_THRESHOLD_DEN >= p**COVER_THRESHOLD_NUM


@lru_cache(maxsize=8)
def _solution_table(p: int, d: int) -> np.ndarray:
    """(2A * 2A * A * A)(z) for all z, exact."""
    A = subgroup(p, d)
    aset = A.indicator
    ind_a = aset.bits.astype(np.int64)
    ind_2a = fold_sumset(aset, 2).bits.astype(np.int64)
    c = cyclic_convolution_exact(ind_2a, ind_2a, p)
    c = cyclic_convolution_exact(c, ind_a, p)
    c = cyclic_convolution_exact(c, ind_a, p)
    return c


def count_solutions_N(A: Subgroup, a: int, *, allow_large: bool = False) -> int:
    """Number of solutions of x1 + x2 + y1 + y2 = a*y3, x in 2A, y in A."""
    if A.p > HEAVY_LIMIT and not allow_large:
        raise ValueError(
            f"count_solutions_N is heavy; p={A.p} exceeds {HEAVY_LIMIT}"
            " (pass allow_large=True to force)"
        )
    a = a % A.p
    if a == 0:
        raise ValueError("the dilation parameter a must be nonzero mod p")
    table = _solution_table(A.p, A.d)
    idx = (a * A.elements) % A.p
    return int(table[idx].sum())


def positivity_condition(A: Subgroup) -> bool:
    """True iff |2A| |A|^3 > p * phi^3, which forces N > 0 for every a != 0."""
    two_size = fold_sumset(A.indicator, 2).card
    phi, _ = phi_subgroup(A)
    return two_size * A.d**3 > A.p * phi**3


def exponent_fit(points, *, envelope: bool = False) -> FitResult:
    """Fit log y = slope * log x + intercept by least squares.

    With envelope=True only the maximal y per dyadic x bucket is kept, which
    estimates the growth rate of the upper envelope rather than the bulk.
    Points with nonpositive x or y are dropped.
    """
    xs, ys = [], []
    for x, y in points:
        if x > 0 and y > 0:
            xs.append(float(x))
            ys.append(float(y))
    if envelope:
        buckets: dict[int, tuple[float, float]] = {}
        for x, y in zip(xs, ys):
            j = int(math.floor(math.log2(x)))
            if j not in buckets or y > buckets[j][1]:
                buckets[j] = (x, y)
        pts = [buckets[j] for j in sorted(buckets)]
        xs = [x for x, _ in pts]
        ys = [y for _, y in pts]
    if len(xs) < 2 or len(set(xs)) < 2:
        raise ValueError("exponent fit needs at least two points with distinct x")
    lx = np.log(np.asarray(xs))
    ly = np.log(np.asarray(ys))
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return FitResult(
        slope=float(slope),
        intercept=float(intercept),
        n_points=len(xs),
        residual=float(np.sqrt(np.mean(resid**2))),
    )
