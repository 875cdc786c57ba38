"""Sweep driver, reporting, and the command-line entry point.

Subcommands:
  sweep    compute per-subgroup records over a prime range and write csv/jsonl
  verify   run the internal property suite, exit nonzero on any violation
  report   rebuild summary (and optional SVG scatters) from a records file

Records are emitted in (p, d) order with fixed column order and fixed float
formatting, so output bytes do not depend on the thread count.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import random
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import energetics, numtheory, spectral
from .energetics import shift_sizes, ssc_ratio_sum, sumset_ratio_sum
from .numtheory import divisors, subgroup
from .spectral import convolve_counts, dft_magnitudes, naive_dft_magnitudes, phi_subgroup
from .verifier import (
    ALL_CHECKS,
    HEAVY_CHECKS,
    HEAVY_LIMIT,
    CheckContext,
    check_bound,
    check_six_fold,
    clears_cover_threshold,
    count_solutions_N,
    covering_index,
    exponent_fit,
    positivity_condition,
)
from .zpsets import ZpSet, fold_sumset, shift_intersect, sumset

CSV_BASE_COLUMNS = (
    "p",
    "d",
    "A_size",
    "twoA_size",
    "sixA_covers",
    "covering_k",
    "E",
    "E3",
    "E32",
    "phi",
    "ssc_ratio",
    "sumset_ratio",
)

_INT_FIELDS = {"p_min", "p_max", "min_size", "kmax", "threads"}
_FLOAT_FIELDS = {"alpha_lo", "alpha_hi", "hypothesis_constant"}
_BOOL_FIELDS = {"heavy_ops"}


@dataclass
class SweepConfig:
    p_min: int = 3
    p_max: int = 101
    min_size: int = 1
    max_size: int | None = None
    alpha_lo: float = 0.0
    alpha_hi: float = 1.0
    checks: tuple[str, ...] = ALL_CHECKS
    kmax: int = 8
    threads: int = 1
    out_path: str = "records.csv"
    format: str = "csv"
    svg_dir: str | None = None
    hypothesis_constant: float = 1.0
    heavy_ops: bool = False

    def validate(self) -> "SweepConfig":
        if not 3 <= self.p_min <= self.p_max <= numtheory.MODULUS_LIMIT:
            raise ValueError(
                f"need 3 <= p_min <= p_max <= 2^26, got [{self.p_min}, {self.p_max}]"
            )
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.kmax < 1:
            raise ValueError("kmax must be >= 1")
        if self.format not in ("csv", "jsonl"):
            raise ValueError(f"format must be csv or jsonl, got {self.format!r}")
        unknown = [c for c in self.checks if c not in ALL_CHECKS]
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(unknown)}")
        if self.hypothesis_constant <= 0:
            raise ValueError("hypothesis constant must be positive")
        return self


@dataclass
class SweepRecord:
    p: int
    d: int
    twoA_size: int
    sixA_covers: bool
    covering_k: int | None
    E: int
    E3: int
    E32: float
    phi: float
    ssc_ratio: float
    sumset_ratio: float | None
    clears_threshold: bool
    checks: dict


def parse_config_file(path: str) -> dict:
    """Flat key = value lines; '#' starts a comment; keys match SweepConfig."""
    known = {f.name for f in fields(SweepConfig)}
    out: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = _coerce_config_value(key, val)
    return out


def _coerce_config_value(key: str, val: str):
    if key in _INT_FIELDS:
        return int(val)
    if key in _FLOAT_FIELDS:
        return float(val)
    if key in _BOOL_FIELDS:
        low = val.lower()
        if low in ("true", "1", "yes", "on"):
            return True
        if low in ("false", "0", "no", "off"):
            return False
        raise ValueError(f"bad boolean for {key}: {val!r}")
    if key == "max_size":
        return None if val.lower() in ("", "none") else int(val)
    if key == "checks":
        return _parse_checks(val)
    if key == "svg_dir":
        return val or None
    return val


def _parse_checks(text: str) -> tuple[str, ...]:
    text = text.strip()
    if text == "all":
        return ALL_CHECKS
    names = tuple(tok.strip() for tok in text.split(",") if tok.strip())
    return names


def primes_between(lo: int, hi: int) -> list[int]:
    """Odd primes in [lo, hi], ascending (2 is never a working modulus)."""
    lo = max(lo, 3)
    if hi < lo:
        return []
    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, int(math.isqrt(hi)) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    return [int(q) for q in np.flatnonzero(sieve) if q >= lo and q % 2 == 1]


def _qualifying_orders(p: int, cfg: SweepConfig) -> list[int]:
    out = []
    lnp = math.log(p)
    for d in divisors(p - 1):
        if d < cfg.min_size:
            continue
        if cfg.max_size is not None and d > cfg.max_size:
            continue
        alpha = math.log(d) / lnp
        if alpha < cfg.alpha_lo or alpha > cfg.alpha_hi:
            continue
        out.append(d)
    return out


def _record_for(args) -> SweepRecord:
    p, d, cfg = args
    A = subgroup(p, d)
    heavy_ok = cfg.heavy_ops or p <= HEAVY_LIMIT
    checks: dict = {}
    if d >= 3:
        ctx = CheckContext(
            A, hypothesis_constant=cfg.hypothesis_constant, allow_heavy=heavy_ok
        )
        aset = ctx.aset
        e2, e3, e32 = ctx.energy, ctx.energy3, ctx.energy32
        two_size = ctx.twoA_size
        phi = ctx.phi
        ssc = ctx.ssc
        s_ratio = ctx.sumset_ratio if heavy_ok else None
        for name in cfg.checks:
            if name in HEAVY_CHECKS and not heavy_ok:
                continue
            checks[name] = check_bound(name, A, ctx)
    else:
        aset = A.indicator
        prof = shift_sizes(aset)
        nz = prof[prof > 0].astype(np.int64)
        e2 = int(np.dot(nz, nz))
        e3 = int(np.dot(nz * nz, nz))
        e32 = float(np.sum(nz.astype(np.float64) ** 1.5))
        two_size = fold_sumset(aset, 2).card
        phi = phi_subgroup(A)[0]
        ssc = ssc_ratio_sum(A)
        s_ratio = sumset_ratio_sum(A, allow_large=True) if heavy_ok else None
    return SweepRecord(
        p=p,
        d=d,
        twoA_size=two_size,
        sixA_covers=check_six_fold(A),
        covering_k=covering_index(aset, cfg.kmax),
        E=e2,
        E3=e3,
        E32=e32,
        phi=phi,
        ssc_ratio=ssc,
        sumset_ratio=s_ratio,
        clears_threshold=clears_cover_threshold(p, d),
        checks=checks,
    )


def run_sweep(cfg: SweepConfig) -> list[SweepRecord]:
    """Compute one record per qualifying (p, d).  Output order is (p, d)."""
    cfg.validate()
    tasks = [
        (p, d, cfg)
        for p in primes_between(cfg.p_min, cfg.p_max)
        for d in _qualifying_orders(p, cfg)
    ]
    if cfg.threads <= 1 or len(tasks) <= 1:
        records = [_record_for(t) for t in tasks]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            records = list(pool.map(_record_for, tasks))
    records.sort(key=lambda r: (r.p, r.d))
    return records


# ---------------------------------------------------------------------------
# emission


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def record_row(rec: SweepRecord, check_names) -> dict:
    """Flatten a record into the fixed column mapping used by csv and jsonl."""
    row = {
        "p": rec.p,
        "d": rec.d,
        "A_size": rec.d,
        "twoA_size": rec.twoA_size,
        "sixA_covers": rec.sixA_covers,
        "covering_k": rec.covering_k,
        "E": rec.E,
        "E3": rec.E3,
        "E32": rec.E32,
        "phi": rec.phi,
        "ssc_ratio": rec.ssc_ratio,
        "sumset_ratio": rec.sumset_ratio,
    }
    for name in check_names:
        chk = rec.checks.get(name)
        if chk is None:
            row[f"{name}:lhs"] = None
            row[f"{name}:rhs"] = None
            row[f"{name}:ratio"] = None
            row[f"{name}:hyp"] = None
        else:
            row[f"{name}:lhs"] = chk.lhs
            row[f"{name}:rhs"] = chk.rhs_expr
            row[f"{name}:ratio"] = chk.ratio
            row[f"{name}:hyp"] = chk.hypothesis_ok
    return row


def format_csv(records, check_names) -> str:
    cols = list(CSV_BASE_COLUMNS)
    for name in check_names:
        cols += [f"{name}:lhs", f"{name}:rhs", f"{name}:ratio", f"{name}:hyp"]
    lines = [",".join(cols)]
    for rec in records:
        row = record_row(rec, check_names)
        lines.append(",".join(_fmt_cell(row[c]) for c in cols))
    return "\n".join(lines) + "\n"


def format_jsonl(records, check_names) -> str:
    lines = []
    for rec in records:
        row = record_row(rec, check_names)
        clean = {
            k: (int(v) if isinstance(v, np.integer) else v) for k, v in row.items()
        }
        lines.append(json.dumps(clean, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def summary_text(rows: list[dict], check_names) -> str:
    """Human-readable sweep digest with envelope exponent fits per check."""
    out = []
    n = len(rows)
    out.append(f"records: {n}")
    if n:
        ps = sorted({r["p"] for r in rows})
        out.append(f"primes: {ps[0]}..{ps[-1]} ({len(ps)} of them)")
        covered = sum(1 for r in rows if r["sixA_covers"])
        out.append(f"six-fold coverage: {covered}/{n} records cover Z_p*")
        above = [r for r in rows if _above_threshold(r)]
        bad = [r for r in rows if _above_threshold(r) and not r["sixA_covers"]]
        out.append(
            f"six-fold coverage at |A| >= p^(11/23): {len(above) - len(bad)}/{len(above)}"
            f" (failures: {len(bad)})"
        )
    for name in check_names:
        pts, ratios, hyp_n, hyp_ok = [], [], 0, 0
        for r in rows:
            lhs = r.get(f"{name}:lhs")
            ratio = r.get(f"{name}:ratio")
            if lhs is None or ratio is None:
                continue
            pts.append((r["A_size"], lhs))
            ratios.append(ratio)
            hyp_n += 1
            hyp_ok += bool(r.get(f"{name}:hyp"))
        if not ratios:
            out.append(f"check {name}: no records")
            continue
        line = (
            f"check {name}: n={len(ratios)} max_ratio={max(ratios):.6g}"
            f" hyp_ok={hyp_ok}/{hyp_n}"
        )
        try:
            fit = exponent_fit(pts, envelope=True)
            line += (
                f" envelope_slope={fit.slope:.6g} intercept={fit.intercept:.6g}"
                f" residual={fit.residual:.6g}"
            )
        except ValueError:
            line += " envelope_fit=insufficient-data"
        out.append(line)
    return "\n".join(out) + "\n"


def _above_threshold(row: dict) -> bool:
    return clears_cover_threshold(int(row["p"]), int(row["d"]))


def write_svg_scatter(path: str, points, title: str, fit=None) -> None:
    """Self-contained log-log scatter plot, no plotting dependency."""
    pts = [(math.log(x), math.log(y)) for x, y in points if x > 0 and y > 0]
    w, h, m = 640, 480, 50
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
        f'<text x="{w//2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
    ]
    if pts:
        xs = [x for x, _ in pts]
        ys = [y for _, y in pts]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        xr = (x1 - x0) or 1.0
        yr = (y1 - y0) or 1.0

        def sx(x):
            return m + (x - x0) / xr * (w - 2 * m)

        def sy(y):
            return h - m - (y - y0) / yr * (h - 2 * m)

        parts.append(
            f'<line x1="{m}" y1="{h-m}" x2="{w-m}" y2="{h-m}" stroke="black"/>'
        )
        parts.append(f'<line x1="{m}" y1="{h-m}" x2="{m}" y2="{m}" stroke="black"/>')
        parts.append(
            f'<text x="{w//2}" y="{h-12}" text-anchor="middle" font-size="12">ln |A|</text>'
        )
        parts.append(
            f'<text x="14" y="{h//2}" font-size="12" '
            f'transform="rotate(-90 14 {h//2})" text-anchor="middle">ln lhs</text>'
        )
        for lbl, val, xpix, ypix, anchor in (
            (f"{x0:.2f}", x0, sx(x0), h - m + 16, "middle"),
            (f"{x1:.2f}", x1, sx(x1), h - m + 16, "middle"),
        ):
            parts.append(
                f'<text x="{xpix:.1f}" y="{ypix}" text-anchor="{anchor}" '
                f'font-size="10">{lbl}</text>'
            )
        parts.append(
            f'<text x="{m-6}" y="{sy(y0):.1f}" text-anchor="end" font-size="10">{y0:.2f}</text>'
        )
        parts.append(
            f'<text x="{m-6}" y="{sy(y1):.1f}" text-anchor="end" font-size="10">{y1:.2f}</text>'
        )
        if fit is not None:
            fy0 = fit.slope * x0 + fit.intercept
            fy1 = fit.slope * x1 + fit.intercept
            parts.append(
                f'<line x1="{sx(x0):.2f}" y1="{sy(fy0):.2f}" x2="{sx(x1):.2f}" '
                f'y2="{sy(fy1):.2f}" stroke="#c33" stroke-width="1.2"/>'
            )
        for x, y in pts:
            parts.append(
                f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2.4" '
                f'fill="#228" fill-opacity="0.6"/>'
            )
    else:
        parts.append(
            f'<text x="{w//2}" y="{h//2}" text-anchor="middle" font-size="12">'
            "no positive data</text>"
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(parts) + "\n")


def emit_report(records: list[SweepRecord], cfg: SweepConfig) -> dict:
    """Write the records file, its summary, and optional SVG scatters."""
    check_names = list(cfg.checks)
    text = (
        format_csv(records, check_names)
        if cfg.format == "csv"
        else format_jsonl(records, check_names)
    )
    paths = {"records": cfg.out_path}
    with open(cfg.out_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    rows = [record_row(r, check_names) for r in records]
    summary_path = cfg.out_path + ".summary.txt"
    with open(summary_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(summary_text(rows, check_names))
    paths["summary"] = summary_path
    if cfg.svg_dir:
        os.makedirs(cfg.svg_dir, exist_ok=True)
        paths["svg"] = []
        for name in check_names:
            pts = [
                (row["A_size"], row[f"{name}:lhs"])
                for row in rows
                if row.get(f"{name}:lhs")
            ]
            fit = None
            try:
                fit = exponent_fit(pts, envelope=True)
            except ValueError:
                pass
            svg_path = os.path.join(cfg.svg_dir, f"{name}.svg")
            write_svg_scatter(svg_path, pts, f"{name}: lhs vs |A| (log-log)", fit)
            paths["svg"].append(svg_path)
    return paths


def read_rows(path: str) -> tuple[list[dict], list[str]]:
    """Load a records file written by emit_report.  Returns (rows, check names)."""
    rows: list[dict] = []
    if path.endswith(".jsonl"):
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    rows.append(json.loads(line))
        cols = list(rows[0].keys()) if rows else []
    else:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
        if not lines:
            return [], []
        cols = lines[0].split(",")
        for ln in lines[1:]:
            vals = ln.split(",")
            row = {}
            for c, v in zip(cols, vals):
                row[c] = _parse_cell(v)
            rows.append(row)
    checks = [c[: -len(":ratio")] for c in cols if c.endswith(":ratio")]
    return rows, checks


def _parse_cell(v: str):
    if v == "":
        return None
    if v == "true":
        return True
    if v == "false":
        return False
    try:
        return int(v)
    except ValueError:
        return float(v)


# ---------------------------------------------------------------------------
# property suite


def _rand_set(p: int, rng: random.Random, max_card: int = 512) -> ZpSet:
    card = rng.randint(1, min(p - 1, max_card))
    return ZpSet.from_elements(p, rng.sample(range(p), card))


def _enumeration_convolution(X: ZpSet, Y: ZpSet) -> np.ndarray:
    """Pair-enumeration representation counts, independent of the NTT path."""
    xs = X.members()
    ys = Y.members()
    if xs.size == 0 or ys.size == 0:
        return np.zeros(X.p, dtype=np.int64)
    sums = (xs[:, None] + ys[None, :]) % X.p
    return np.bincount(sums.ravel(), minlength=X.p).astype(np.int64)


def verify_all(p_max: int, *, echo=print) -> int:
    """Run the full property suite over p <= p_max; 0 iff no violation.

    Families with quadratic-cost oracles are capped internally (convolution,
    energy, and the frequency identity at 1024, dense spectra at 521, solution
    counts at 2000); raising p_max past a cap extends only the cheaper
    families.
    """
    primes = primes_between(3, p_max)

    def subgroups(limit):
        for p in primes:
            if p > limit:
                break
            for d in divisors(p - 1):
                yield p, d

    # convolution against pair enumeration, subgroup x random set
    cases = 0
    for p in primes:
        if p > 1024:
            break
        rng = random.Random(911 * p)
        for d in divisors(p - 1):
            X = subgroup(p, d).indicator
            Y = _rand_set(p, rng)
            got = convolve_counts(X, Y).counts
            want = _enumeration_convolution(X, Y)
            if not np.array_equal(got, want):
                z = int(np.flatnonzero(got != want)[0])
                echo(f"FAIL convolution p={p} d={d} z={z}: {got[z]} != {want[z]}")
                return 1
            cases += 1
    echo(f"ok convolution ({cases} cases)")

    # energy definitions: pair counts, shift profile, difference profile, spectrum
    cases = 0
    for p, d in subgroups(1024):
        A = subgroup(p, d).indicator
        counts = convolve_counts(A, A).counts
        e_conv = int(np.dot(counts, counts))
        prof = shift_sizes(A)
        e_prof = int(np.dot(prof, prof))
        rolled = np.array([int((A.bits & np.roll(A.bits, s)).sum()) for s in range(p)])
        e_roll = int(np.dot(rolled, rolled))
        e_spec = energetics.additive_energy_spectral(A, A)
        if not (e_conv == e_prof == e_roll):
            echo(f"FAIL energy-definitions p={p} d={d}: {e_conv}/{e_prof}/{e_roll}")
            return 1
        if abs(e_spec - e_conv) > max(spectral.ABS_TOL, spectral.REL_TOL * e_conv):
            echo(f"FAIL energy-spectral p={p} d={d}: {e_spec} vs {e_conv}")
            return 1
        cases += 1
    echo(f"ok energy-definitions ({cases} cases)")

    # containment: A + A_s inside (2A)_s, every shift for small p, reps above
    cases = 0
    for p, d in subgroups(p_max):
        A = subgroup(p, d)
        aset = A.indicator
        two = fold_sumset(aset, 2)
        shifts = range(p) if p <= 200 else [0, *map(int, A.cosets.reps)]
        for s in shifts:
            a_s = shift_intersect(aset, s)
            if a_s.card == 0:
                continue
            lhs = sumset(aset, a_s)
            rhs = shift_intersect(two, s)
            if not lhs.is_subset_of(rhs):
                echo(f"FAIL containment p={p} d={d} s={s}")
                return 1
            cases += 1
    echo(f"ok containment ({cases} cases)")

    # shift profile constant on cosets; subgroup phi equals the dense spectrum
    cases = 0
    for p, d in subgroups(p_max):
        A = subgroup(p, d)
        prof = shift_sizes(A.indicator)
        for rep in A.cosets.reps:
            coset = (int(rep) * A.elements) % p
            if not (prof[coset] == prof[int(rep)]).all():
                echo(f"FAIL coset-constancy p={p} d={d} rep={int(rep)}")
                return 1
        phi_fast, _ = phi_subgroup(A)
        if p <= 521:
            spec = dft_magnitudes(A.indicator)
            if abs(phi_fast - spec.phi) > 1e-9 * max(phi_fast, spec.phi, 1.0):
                echo(f"FAIL phi p={p} d={d}: {phi_fast} vs {spec.phi}")
                return 1
        cases += 1
    echo(f"ok coset-profile ({cases} cases)")

    # |A| |Â(lam)|^2 equals sum_s |A_s| Re(sum_{y in A} e_p(lam y s))
    cases = 0
    for p, d in subgroups(min(p_max, 1024)):
        A = subgroup(p, d)
        prof = shift_sizes(A.indicator).astype(np.float64)
        mags = naive_dft_magnitudes(A.indicator) if p <= 101 else None
        lams = range(1, p) if p <= 101 else range(1, p, max(1, p // 32))
        svec = np.arange(p, dtype=np.int64)
        for lam in lams:
            re_part = np.zeros(p)
            for y in A.elements:
                re_part += np.cos(2 * np.pi * ((int(y) * lam * svec) % p) / p)
            rhs = float(np.dot(prof, re_part))
            if mags is not None:
                lhs = d * float(mags[lam]) ** 2
            else:
                z = np.exp(2j * np.pi * ((lam * A.elements) % p) / p).sum()
                lhs = d * abs(z) ** 2
            if abs(lhs - rhs) > max(spectral.ABS_TOL, spectral.REL_TOL * abs(lhs)):
                echo(f"FAIL spectral-identity p={p} d={d} lam={lam}: {lhs} vs {rhs}")
                return 1
            cases += 1
    echo(f"ok spectral-identity ({cases} cases)")

    # coverage: the six-fold check agrees with the covering index; positivity
    # forces positive counts for every dilation parameter
    cases = 0
    for p, d in subgroups(p_max):
        A = subgroup(p, d)
        six = check_six_fold(A)
        k = covering_index(A.indicator, 6)
        if six != (k is not None):
            echo(f"FAIL coverage-agreement p={p} d={d}: six={six} k={k}")
            return 1
        if p <= 2000 and positivity_condition(A):
            rng = random.Random(p * 7919 + d)
            for a in rng.sample(range(1, p), min(3, p - 1)):
                if count_solutions_N(A, a) <= 0:
                    echo(f"FAIL positivity p={p} d={d} a={a}")
                    return 1
                if not six:
                    echo(f"FAIL positivity-coverage p={p} d={d}")
                    return 1
        cases += 1
    echo(f"ok coverage ({cases} cases)")

    return 0


# ---------------------------------------------------------------------------
# argument handling


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subgroup-lab",
        description="sumset, energy, and exponential-sum sweeps over subgroups of Z_p*",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("sweep", help="compute records over a prime range")
    ps.add_argument("--config", help="flat key = value config file")
    ps.add_argument("--pmin", type=int, help="smallest prime (default 3)")
    ps.add_argument("--pmax", type=int, help="largest prime (default 101)")
    ps.add_argument("--alpha-lo", type=float, help="lower bound on log_p |A|")
    ps.add_argument("--alpha-hi", type=float, help="upper bound on log_p |A|")
    ps.add_argument("--checks", help="comma-separated catalog names, or 'all'")
    ps.add_argument("--kmax", type=int, help="covering search cap (default 8)")
    ps.add_argument("--threads", type=int, help="worker threads (default $SUBGROUP_LAB_THREADS or 1)")
    ps.add_argument("--out", help="records path (default records.csv)")
    ps.add_argument("--format", choices=("csv", "jsonl"), help="records format")
    ps.add_argument("--svg-dir", help="directory for per-check scatter plots")
    ps.add_argument(
        "--hypothesis-constant",
        type=float,
        help="constant used when testing hypothesis ranges (default 1.0)",
    )
    ps.add_argument(
        "--heavy",
        action="store_true",
        default=None,
        help="enable heavy operations above p = 4096",
    )

    pv = sub.add_parser("verify", help="run the internal property suite")
    pv.add_argument("--pmax", type=int, default=101, help="largest prime (default 101)")

    pr = sub.add_parser("report", help="summarize an existing records file")
    pr.add_argument("records", help="csv or jsonl written by sweep")
    pr.add_argument("--out", help="summary path (default: stdout)")
    pr.add_argument("--svg-dir", help="directory for per-check scatter plots")
    return parser


def _config_from_args(args) -> SweepConfig:
    cfg_kwargs: dict = {}
    if args.config:
        cfg_kwargs.update(parse_config_file(args.config))
    flag_map = {
        "pmin": "p_min",
        "pmax": "p_max",
        "alpha_lo": "alpha_lo",
        "alpha_hi": "alpha_hi",
        "kmax": "kmax",
        "threads": "threads",
        "out": "out_path",
        "format": "format",
        "svg_dir": "svg_dir",
        "hypothesis_constant": "hypothesis_constant",
        "heavy": "heavy_ops",
    }
    for attr, field in flag_map.items():
        val = getattr(args, attr, None)
        if val is not None:
            cfg_kwargs[field] = val
    if getattr(args, "checks", None) is not None:
        cfg_kwargs["checks"] = _parse_checks(args.checks)
    if "threads" not in cfg_kwargs:
        env = os.environ.get("SUBGROUP_LAB_THREADS")
        if env:
            cfg_kwargs["threads"] = int(env)
    return SweepConfig(**cfg_kwargs).validate()


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "sweep":
        try:
            cfg = _config_from_args(args)
        except (ValueError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        records = run_sweep(cfg)
        try:
            paths = emit_report(records, cfg)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(f"wrote {len(records)} records to {paths['records']}")
        print(f"summary: {paths['summary']}")
        return 0
    if args.command == "verify":
        # A bound below the first odd prime is an empty run, not an error.
        if args.pmax > numtheory.MODULUS_LIMIT:
            print(f"error: --pmax must be <= {numtheory.MODULUS_LIMIT}", file=sys.stderr)
            return 2
        return verify_all(args.pmax)
    if args.command == "report":
        try:
            rows, checks = read_rows(args.records)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        text = summary_text(rows, checks)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            print(text, end="")
        if args.svg_dir:
            os.makedirs(args.svg_dir, exist_ok=True)
            for name in checks:
                pts = [
                    (row["A_size"], row.get(f"{name}:lhs"))
                    for row in rows
                    if row.get(f"{name}:lhs")
                ]
                fit = None
                try:
                    fit = exponent_fit(pts, envelope=True)
                except ValueError:
                    pass
                write_svg_scatter(
                    os.path.join(args.svg_dir, f"{name}.svg"),
                    pts,
                    f"{name}: lhs vs |A| (log-log)",
                    fit,
                )
        return 0
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
