"""Exhaustive verification engines over finite pair ranges.

Every sweep here is exact: the scalar engine uses Python integers and
fractions end to end, and the vectorized engine (numpy int64) only runs
after a proof, computed in exact integers, that no intermediate can leave
the int64 range for the requested bounds. Reports over disjoint ranges
merge associatively and commutatively, so partitioned runs reproduce the
single-run report bit for bit.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .arith import format_rational
from .collatz import DEFAULT_CAP, accel_T
from .framework import (
    BRANCH_FIRST,
    BRANCH_MIRRORED,
    ConditionId,
    ConditionParams,
    LambdaSpec,
    check_condition,
    lhs,
    symmetrize,
    weighted_lhs,
)
from .weights import (
    CASE_ORDER,
    ParityCase,
    bound_for_key,
    case_bound,
    classify,
    simplified_lhs,
    tally_key,
    weight_vector,
)

try:
    import numpy as _np
except ImportError:  # pragma: no cover - numpy is a declared dependency
    _np = None

INT64_HEADROOM = 2**62
DEFAULT_MAX_VIOLATIONS = 10_000
PROGRESS_STRIDE = 10**6

CHECK_LHS = "lhs"
CHECK_BOUNDS = "bounds"
CHECK_SIMPLIFIED = "simplified"
CHECK_CROSS = "cross"
CHECK_MBOUND = "mbound"

QUANTITY_LABELS = {
    CHECK_LHS: "lhs>0",
    CHECK_BOUNDS: "bound-exceeded",
    CHECK_SIMPLIFIED: "simplified>0",
    CHECK_CROSS: "cross-mismatch",
    CHECK_MBOUND: "weight-above-M",
}


@dataclass(frozen=True)
class RangeSpec:
    """Inclusive pair range [x_min, x_max] x [y_min, y_max] with an optional
    parity-case filter."""

    x_min: int
    x_max: int
    y_min: int
    y_max: int
    cases: Optional[frozenset] = None

    def __post_init__(self) -> None:
        if self.x_min < 1 or self.y_min < 1:
            raise ValueError("range bounds must be positive integers")
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError("range must satisfy min <= max on both axes")
        if self.cases is not None:
            object.__setattr__(self, "cases", frozenset(self.cases))

    @classmethod
    def square(cls, n: int, lo: int = 1,
               cases: Optional[Iterable[ParityCase]] = None) -> "RangeSpec":
        return cls(lo, n, lo, n, frozenset(cases) if cases else None)

    @property
    def is_square(self) -> bool:
        return self.x_min == self.y_min and self.x_max == self.y_max

    def admits(self, case: ParityCase) -> bool:
        return self.cases is None or case in self.cases

    def grid_count(self) -> int:
        return (self.x_max - self.x_min + 1) * (self.y_max - self.y_min + 1)

    def label(self) -> str:
        base = f"x:[{self.x_min},{self.x_max}] y:[{self.y_min},{self.y_max}]"
        if self.cases:
            names = ",".join(sorted(c.label for c in self.cases))
            return f"{base} cases:{names}"
        return base


@dataclass(frozen=True)
class Violation:
    """One failed comparison, with the exact offending value. Triple sweeps
    record the witness midpoint in z."""

    x: int
    y: int
    case: str
    quantity: str
    value: object
    z: Optional[int] = None

    def sort_key(self) -> tuple:
        return (self.x, self.y, self.quantity, self.z if self.z is not None else 0)


@dataclass
class CaseTally:
    pairs: int = 0
    max_lhs: Optional[int] = None
    bound: Optional[int] = None

    def absorb_value(self, value: int) -> None:
        if self.max_lhs is None or value > self.max_lhs:
            self.max_lhs = value


@dataclass
class VerificationReport:
    """Aggregated sweep outcome; merge() sums tallies and re-sorts violations."""

    op: str
    rng: RangeSpec
    pairs_checked: int
    per_case: dict
    violations: tuple
    violations_total: int
    elapsed_ms: int
    engine: str
    params: dict = field(default_factory=dict)
    max_violations: int = DEFAULT_MAX_VIOLATIONS

    @property
    def ok(self) -> bool:
        return self.violations_total == 0


def merge_reports(a: VerificationReport, b: VerificationReport) -> VerificationReport:
    """Combine reports over disjoint ranges of the same sweep."""
    if a.op != b.op:
        raise ValueError(f"cannot merge {a.op!r} with {b.op!r}")
    per_case: dict[str, CaseTally] = {}
    for src in (a.per_case, b.per_case):
        for key, tal in src.items():
            cur = per_case.get(key)
            if cur is None:
                per_case[key] = CaseTally(tal.pairs, tal.max_lhs, tal.bound)
                continue
            if cur.bound != tal.bound:
                raise ValueError(f"conflicting bounds for cell {key!r}")
            cur.pairs += tal.pairs
            if tal.max_lhs is not None:
                cur.absorb_value(tal.max_lhs)
    cap = max(a.max_violations, b.max_violations)
    violations = tuple(sorted(a.violations + b.violations,
                              key=Violation.sort_key))[:cap]
    rng = RangeSpec(min(a.rng.x_min, b.rng.x_min), max(a.rng.x_max, b.rng.x_max),
                    min(a.rng.y_min, b.rng.y_min), max(a.rng.y_max, b.rng.y_max),
                    a.rng.cases)
    return VerificationReport(
        op=a.op, rng=rng, pairs_checked=a.pairs_checked + b.pairs_checked,
        per_case=_sorted_cells(per_case), violations=violations,
        violations_total=a.violations_total + b.violations_total,
        elapsed_ms=a.elapsed_ms + b.elapsed_ms, engine=a.engine,
        params=dict(a.params), max_violations=cap)


def _int64_safe_pairs(rng: RangeSpec) -> bool:
    """Exact-integer proof that every intermediate of the pair sweep fits
    int64 for this range: all six weights lie in [-2, 2] and distances are
    bounded by the largest map image."""
    n = max(rng.x_max, rng.y_max)
    top = (3 * n + 1) // 2
    dist = max(n, top)
    return 12 * dist * dist < INT64_HEADROOM


def _sorted_cells(per_case: dict) -> dict:
    return {k: per_case[k] for k in sorted(per_case)}


# --- scalar pair sweep ----------------------------------------------------

def _sweep_scalar(rng: RangeSpec, checks: Sequence[str], m_cap: Fraction,
                  max_violations: int,
                  progress: Optional[Callable[[int], None]]) -> tuple:
    """Pure-Python exact sweep; the reference the vector engine must match."""
    do_lhs = CHECK_LHS in checks or CHECK_BOUNDS in checks or CHECK_CROSS in checks
    do_simp = CHECK_SIMPLIFIED in checks or CHECK_CROSS in checks
    do_bounds = CHECK_BOUNDS in checks
    do_cross = CHECK_CROSS in checks
    do_m = CHECK_MBOUND in checks
    m_num, m_den = m_cap.numerator, m_cap.denominator

    per_case: dict[str, CaseTally] = {}
    violations: list[Violation] = []
    total_viol = 0
    pairs = 0
    done = 0

    def add_violation(x: int, y: int, key: str, check: str, value) -> None:
        nonlocal total_viol
        total_viol += 1
        if len(violations) < max_violations:
            violations.append(Violation(x, y, key, QUANTITY_LABELS[check], value))

    for x in range(rng.x_min, rng.x_max + 1):
        for y in range(rng.y_min, rng.y_max + 1):
            done += 1
            if progress is not None and done % PROGRESS_STRIDE == 0:
                progress(done)
            pc = classify(x, y)
            if not rng.admits(pc.case):
                continue
            pairs += 1
            key = tally_key(x, y)
            tal = per_case.get(key)
            if tal is None:
                tal = per_case[key] = CaseTally(bound=bound_for_key(key))
            tal.pairs += 1

            direct = lhs(weight_vector, accel_T, x, y) if do_lhs else None
            simp = simplified_lhs(x, y) if do_simp else None
            value = direct if direct is not None else simp
            if value is not None:
                tal.absorb_value(value)

            if CHECK_LHS in checks and direct > 0:
                add_violation(x, y, key, CHECK_LHS, direct)
            if do_bounds and direct > tal.bound:
                add_violation(x, y, key, CHECK_BOUNDS, direct)
            if CHECK_SIMPLIFIED in checks and simp > 0:
                add_violation(x, y, key, CHECK_SIMPLIFIED, simp)
            if do_cross and direct != simp:
                add_violation(x, y, key, CHECK_CROSS, simp - direct)
            if do_m:
                worst = weight_vector(x, y).max_abs()
                if worst * m_den > m_num:
                    add_violation(x, y, key, CHECK_MBOUND, worst)

    return pairs, per_case, violations, total_viol


# --- vectorized pair sweep -------------------------------------------------

_ALPHA_T = (1, 1, 0, 1, 1, 0, 1, 0, 2)
_BETA_T = (0, 0, 0, 0, 0, 0, 0, -2, 0)
_GAMMA_T = (0, 0, 0, 1, -1, -2, -1, 0, 0)
_DELTA_T = (0, -1, -2, -1, 0, 1, -1, 1, 0)
_EPS_T = (-1, 0, 1, 0, -1, -2, 0, 2, 0)
_ZETA_T = (1, 1, 2, 1, 1, 2, 1, -2, 0)
_BOUND_T = (0, 0, 0, -1, -1, -1, -4, -1, 0)


def _axis_parts(lo: int, hi: int):
    v = _np.arange(lo, hi + 1, dtype=_np.int64)
    is1 = v == 1
    even = (v & 1) == 0
    odd3 = (~is1) & (~even)
    red = _np.where(even, v >> 1, (v - 1) >> 1)
    t = _np.where(is1, 1, _np.where(even, v >> 1, (3 * v + 1) >> 1))
    ci = _np.where(is1, 0, _np.where(even, 1, 2))
    return v, red, t, ci


def _sweep_vector(rng: RangeSpec, checks: Sequence[str], m_cap: Fraction,
                  max_violations: int,
                  progress: Optional[Callable[[int], None]]) -> tuple:
    """numpy int64 sweep over row blocks; exact given _int64_safe_pairs."""
    do_lhs = CHECK_LHS in checks or CHECK_BOUNDS in checks or CHECK_CROSS in checks
    do_simp = CHECK_SIMPLIFIED in checks or CHECK_CROSS in checks
    do_m = CHECK_MBOUND in checks
    m_num, m_den = m_cap.numerator, m_cap.denominator

    y, ly, ty, cy = _axis_parts(rng.y_min, rng.y_max)
    y = y[None, :]
    ly = ly[None, :]
    ty = ty[None, :]
    cy = cy[None, :]
    ncols = y.shape[1]
    block = max(1, (1 << 21) // ncols)

    case_sel = None
    if rng.cases is not None:
        case_sel = [CASE_ORDER.index(c) for c in rng.cases]

    per_case: dict[str, CaseTally] = {}
    violations: list[Violation] = []
    total_viol = 0
    pairs = 0
    done = 0

    tab = lambda t: _np.asarray(t, dtype=_np.int64)

    def add_mask_violations(mask, x0, check, values) -> None:
        nonlocal total_viol
        count = int(mask.sum())
        if count == 0:
            return
        total_viol += count
        room = max_violations - len(violations)
        if room <= 0:
            return
        idx = _np.argwhere(mask)[:room]
        for i, j in idx:
            x = int(x0 + i)
            yy = int(rng.y_min + j)
            violations.append(Violation(x, yy, tally_key(x, yy),
                                        QUANTITY_LABELS[check],
                                        int(values[i, j])))

    for x0 in range(rng.x_min, rng.x_max + 1, block):
        x1 = min(x0 + block - 1, rng.x_max)
        x, kx, tx, cx = _axis_parts(x0, x1)
        x = x[:, None]
        kx = kx[:, None]
        tx = tx[:, None]
        cx = cx[:, None]

        ci = 3 * cx + cy
        oo = ci == 8
        dk = kx - ly
        gate_low = (dk <= -2) & (11 * kx - 10 * ly + 1 <= 0)
        gate_high = (dk >= 2) & (-10 * kx + 11 * ly + 1 <= 0)

        if rng.cases is None:
            sel = None
        else:
            sel = _np.isin(ci, case_sel)

        b0 = _np.clip(dk, -2, 2)
        d0 = _np.where(gate_low | gate_high, -2, -1)
        e0 = _np.where(gate_low, 2, 0)
        z0 = _np.where(gate_high, 2, 0)

        al = tab(_ALPHA_T)[ci]
        be = _np.where(oo, b0, tab(_BETA_T)[ci])
        ga = _np.where(oo, -b0, tab(_GAMMA_T)[ci])
        de = _np.where(oo, d0, tab(_DELTA_T)[ci])
        ep = _np.where(oo, e0, tab(_EPS_T)[ci])
        ze = _np.where(oo, z0, tab(_ZETA_T)[ci])

        direct = None
        if do_lhs:
            direct = (al * (tx - ty) ** 2 + be * (x - ty) ** 2
                      + ga * (tx - y) ** 2 + de * (x - y) ** 2
                      + ep * (x - tx) ** 2 + ze * (y - ty) ** 2)

        simp = None
        if do_simp:
            conds = [
                ci == 0, ci == 1, ci == 2, ci == 3, ci == 4, ci == 5,
                ci == 6, ci == 7,
                oo & gate_low,
                oo & (dk <= -2) & ~gate_low,
                oo & gate_high,
                oo & (dk >= 2) & ~gate_high,
            ]
            zero = _np.zeros_like(dk)
            vals = [
                zero,
                -2 * ly * ly + 2 * ly,
                -6 * ly * ly + 4 * ly + 2,
                -2 * kx * kx + 1,
                -kx * kx + 2 * kx * ly - 2 * ly * ly,
                -2 * ly * ly + 1,
                -4 * kx * kx,
                -2 * kx * kx + 1,
                2 * (kx + 1) * (11 * kx - 10 * ly + 1),
                4 * dk * (6 * kx - ly + 5),
                2 * (ly + 1) * (-10 * kx + 11 * ly + 1),
                4 * dk * (kx - 6 * ly - 5),
            ]
            simp = _np.select(conds, [_np.broadcast_to(v, dk.shape) for v in vals],
                              default=0)
            diag = oo & (_np.abs(dk) <= 1)
            simp = _np.where(diag, dk * dk * (4 - 5 * (kx + ly)), simp)

        values = direct if direct is not None else simp

        subcells = [
            (oo & gate_low, "odd-odd:low-deep"),
            (oo & (dk <= -2) & ~gate_low, "odd-odd:low-band"),
            (oo & (_np.abs(dk) <= 1), "odd-odd:diagonal"),
            (oo & (dk >= 2) & ~gate_high, "odd-odd:high-band"),
            (oo & gate_high, "odd-odd:high-deep"),
        ]
        cells = [(ci == n, CASE_ORDER[n].label) for n in range(8)] + subcells

        bound = tab(_BOUND_T)[ci]
        for mask, key in subcells:
            bound = _np.where(mask, bound_for_key(key), bound)

        for mask, key in cells:
            if sel is not None:
                mask = mask & sel
            cnt = int(mask.sum())
            if cnt == 0:
                continue
            tal = per_case.get(key)
            if tal is None:
                tal = per_case[key] = CaseTally(bound=bound_for_key(key))
            tal.pairs += cnt
            pairs += cnt
            if values is not None:
                tal.absorb_value(int(values[mask].max()))

        vmask_base = sel if sel is not None else _np.ones_like(oo, dtype=bool)
        if CHECK_LHS in checks:
            add_mask_violations((direct > 0) & vmask_base, x0, CHECK_LHS, direct)
        if CHECK_BOUNDS in checks:
            add_mask_violations((direct > bound) & vmask_base, x0,
                                CHECK_BOUNDS, direct)
        if CHECK_SIMPLIFIED in checks:
            add_mask_violations((simp > 0) & vmask_base, x0, CHECK_SIMPLIFIED, simp)
        if CHECK_CROSS in checks:
            add_mask_violations((direct != simp) & vmask_base, x0,
                                CHECK_CROSS, simp - direct)
        if do_m:
            worst = _np.maximum(_np.abs(al), _np.abs(be))
            for w in (ga, de, ep, ze):
                worst = _np.maximum(worst, _np.abs(w))
            add_mask_violations((worst * m_den > m_num) & vmask_base, x0,
                                CHECK_MBOUND, worst)

        done += (x1 - x0 + 1) * ncols
        if progress is not None:
            progress(done)

    return pairs, per_case, violations, total_viol


def _run_pair_sweep(op: str, rng: RangeSpec, checks: Sequence[str],
                    m_cap: Fraction = Fraction(2), engine: str = "auto",
                    max_violations: int = DEFAULT_MAX_VIOLATIONS,
                    jobs: int = 1,
                    progress: Optional[Callable[[int], None]] = None
                    ) -> VerificationReport:
    started = time.monotonic()
    if jobs > 1:
        report = _parallel_pair_sweep(op, rng, checks, m_cap, engine,
                                      max_violations, jobs, progress)
        return replace(report,
                       elapsed_ms=int((time.monotonic() - started) * 1000))
    use_vector = engine == "vector" or (
        engine == "auto" and _np is not None and _int64_safe_pairs(rng))
    if engine == "vector":
        if _np is None:
            raise RuntimeError("vector engine requires numpy")
        if not _int64_safe_pairs(rng):
            raise ValueError("range too large for the int64 vector engine")
    kernel = _sweep_vector if use_vector else _sweep_scalar
    pairs, per_case, violations, total = kernel(rng, checks, m_cap,
                                                max_violations, progress)
    violations = tuple(sorted(violations, key=Violation.sort_key))
    return VerificationReport(
        op=op, rng=rng, pairs_checked=pairs, per_case=_sorted_cells(per_case),
        violations=violations, violations_total=total,
        elapsed_ms=int((time.monotonic() - started) * 1000),
        engine="vector" if use_vector else "scalar",
        params={"checks": "+".join(checks), "M": format_rational(m_cap)},
        max_violations=max_violations)


def _pair_sweep_worker(args) -> VerificationReport:
    op, rng, checks, m_cap, engine, max_violations = args
    return _run_pair_sweep(op, rng, checks, m_cap, engine, max_violations)


def _parallel_pair_sweep(op, rng, checks, m_cap, engine, max_violations,
                         jobs, progress) -> VerificationReport:
    import multiprocessing

    rows = rng.x_max - rng.x_min + 1
    jobs = max(1, min(jobs, rows))
    step = (rows + jobs - 1) // jobs
    blocks = []
    for x0 in range(rng.x_min, rng.x_max + 1, step):
        x1 = min(x0 + step - 1, rng.x_max)
        blocks.append((op, RangeSpec(x0, x1, rng.y_min, rng.y_max, rng.cases),
                       tuple(checks), m_cap, engine, max_violations))
    with multiprocessing.Pool(jobs) as pool:
        parts = pool.map(_pair_sweep_worker, blocks)
    merged = parts[0]
    if progress is not None:
        progress(merged.pairs_checked)
    for part in parts[1:]:
        merged = merge_reports(merged, part)
        if progress is not None:
            progress(merged.pairs_checked)
    # The partition covers the full requested range exactly.
    return replace(merged, rng=rng)


def verify_pseudocontraction(rng: RangeSpec, *, bounds: bool = True,
                             engine: str = "auto",
                             max_violations: int = DEFAULT_MAX_VIOLATIONS,
                             jobs: int = 1,
                             progress: Optional[Callable[[int], None]] = None
                             ) -> VerificationReport:
    """Check the contraction inequality lhs <= 0 (and, by default, the
    sharpened per-case bounds) for every pair in range."""
    checks = (CHECK_LHS, CHECK_BOUNDS) if bounds else (CHECK_LHS,)
    return _run_pair_sweep("verify", rng, checks, engine=engine,
                           max_violations=max_violations, jobs=jobs,
                           progress=progress)


def verify_simplified(rng: RangeSpec, *, engine: str = "auto",
                      max_violations: int = DEFAULT_MAX_VIOLATIONS,
                      jobs: int = 1,
                      progress: Optional[Callable[[int], None]] = None
                      ) -> VerificationReport:
    """Check the per-case closed forms are <= 0 for every pair in range."""
    return _run_pair_sweep("verify-simplified", rng, (CHECK_SIMPLIFIED,),
                           engine=engine, max_violations=max_violations,
                           jobs=jobs, progress=progress)


def cross_check_simplified(rng: RangeSpec, *, engine: str = "auto",
                           max_violations: int = DEFAULT_MAX_VIOLATIONS,
                           jobs: int = 1,
                           progress: Optional[Callable[[int], None]] = None
                           ) -> VerificationReport:
    """Assert the closed forms equal the direct six-term evaluation on every
    pair (zero tolerance)."""
    return _run_pair_sweep("cross-check", rng, (CHECK_CROSS,), engine=engine,
                           max_violations=max_violations, jobs=jobs,
                           progress=progress)


def m_bound_sweep(rng: RangeSpec, m_cap: Fraction = Fraction(2), *,
                  engine: str = "auto",
                  max_violations: int = DEFAULT_MAX_VIOLATIONS,
                  jobs: int = 1,
                  progress: Optional[Callable[[int], None]] = None
                  ) -> VerificationReport:
    """Check |w| <= M for all six raw weights over every pair in range."""
    return _run_pair_sweep("m-bound", rng, (CHECK_MBOUND,), m_cap=m_cap,
                           engine=engine, max_violations=max_violations,
                           jobs=jobs, progress=progress)


# --- lemma sweeps -----------------------------------------------------------

def _as_lambda_specs(lambdas: Iterable) -> list[LambdaSpec]:
    out = []
    for item in lambdas:
        if isinstance(item, LambdaSpec):
            out.append(item)
        else:
            out.append(LambdaSpec.const(item))
    return out


def _int64_safe_lemma2(rng: RangeSpec, max_den: int) -> bool:
    n = max(rng.x_max, rng.y_max)
    top = (3 * n + 1) // 2
    dist = max(n, top)
    # blended weight numerators are bounded by 2*max_den
    return 12 * max_den * dist * dist < INT64_HEADROOM


def verify_lemmas(rng: RangeSpec, thetas: Sequence, lambdas: Sequence, *,
                  engine: str = "auto",
                  max_violations: int = DEFAULT_MAX_VIOLATIONS,
                  progress: Optional[Callable[[int], None]] = None
                  ) -> VerificationReport:
    """Sweep the two supporting lemmas over finite ranges.

    Triangle-gap lemma: for each theta and every triple (x, y, z) drawn from
    [x_min, x_max]^3, the gap theta*d(x,y)^2 - 2*min(theta,0)*(d(x,z)^2 +
    d(z,y)^2) must be >= 0. Rational theta is checked through its numerator
    (scaling by the positive denominator cannot change the sign); for
    theta >= 0 the gap does not involve z, so one check per (x, y) settles
    all z at once.

    Blend lemma: for each lambda and every pair in range, the six-term form
    evaluated with the blended weights must equal (1-lambda)*lhs(x, y) +
    lambda*lhs(y, x) exactly, and must be <= 0 (with the tabulated weights).
    """
    started = time.monotonic()
    specs = _as_lambda_specs(lambdas)
    per_case: dict[str, CaseTally] = {}
    violations: list[Violation] = []
    total_viol = 0
    checks_done = 0

    lo, hi = rng.x_min, rng.x_max
    n_axis = hi - lo + 1
    use_vector = _np is not None and engine != "scalar" and _int64_safe_pairs(rng)
    if engine == "vector" and _np is None:
        raise RuntimeError("vector engine requires numpy")

    def note(key: str, count: int) -> None:
        nonlocal checks_done
        tal = per_case.get(key)
        if tal is None:
            tal = per_case[key] = CaseTally()
        tal.pairs += count
        checks_done += count

    def add_violation(v: Violation) -> None:
        nonlocal total_viol
        total_viol += 1
        if len(violations) < max_violations:
            violations.append(v)

    # Triangle-gap lemma over triples.
    triples = n_axis ** 3
    for theta in thetas:
        th = Fraction(theta)
        p = th.numerator
        key = f"lemma1:theta={format_rational(th)}"
        note(key, triples)
        if p >= 0:
            # gap = theta*d(x,y)^2 >= 0 holds identically; z plays no part.
            continue
        if use_vector:
            v = _np.arange(lo, hi + 1, dtype=_np.int64)
            d2 = (v[:, None] - v[None, :]) ** 2
            # gap/|theta| scaled: negative theta flips to d(x,y)^2 <= 2*(sum)
            for i in range(n_axis):
                lhs_row = d2[i][None, :]            # d(x,y)^2 over y
                s = d2[i][:, None] + d2             # d(x,z)^2 + d(z,y)^2, [z, y]
                bad = lhs_row > 2 * s
                if bad.any():
                    for zi, yi in _np.argwhere(bad):
                        gap = Fraction(p * int(lhs_row[0, yi])
                                       - 2 * p * int(s[zi, yi]), th.denominator)
                        add_violation(Violation(lo + i, lo + int(yi), key,
                                                "lemma1-gap<0", gap,
                                                z=lo + int(zi)))
        else:
            for x in range(lo, hi + 1):
                for y in range(lo, hi + 1):
                    dxy = (x - y) ** 2
                    for z in range(lo, hi + 1):
                        if dxy > 2 * ((x - z) ** 2 + (z - y) ** 2):
                            gap = Fraction(
                                p * dxy - 2 * p * ((x - z) ** 2 + (z - y) ** 2),
                                th.denominator)
                            add_violation(Violation(x, y, key, "lemma1-gap<0",
                                                    gap, z=z))
        if progress is not None:
            progress(checks_done)

    # Blend lemma over pairs.
    max_den = max((s.constant.denominator for s in specs
                   if s.constant is not None), default=1)
    vector_ok = (use_vector and rng.is_square
                 and all(s.constant is not None for s in specs)
                 and n_axis <= 1500 and _int64_safe_lemma2(rng, max_den))
    if vector_ok and specs:
        grids = _lemma2_grids(lo, hi)
        for spec in specs:
            lam = spec.constant
            p, q = lam.numerator, lam.denominator
            ikey = f"lemma2-identity:lambda={spec.label}"
            nkey = f"lemma2-nonpositive:lambda={spec.label}"
            note(ikey, n_axis * n_axis)
            note(nkey, n_axis * n_axis)
            total_viol_, viols = _lemma2_vector(grids, p, q, lo, ikey, nkey,
                                                max_violations - len(violations))
            total_viol += total_viol_
            violations.extend(viols)
            if progress is not None:
                progress(checks_done)
    else:
        for spec in specs:
            ikey = f"lemma2-identity:lambda={spec.label}"
            nkey = f"lemma2-nonpositive:lambda={spec.label}"
            note(ikey, rng.grid_count())
            note(nkey, rng.grid_count())
            for x in range(rng.x_min, rng.x_max + 1):
                for y in range(rng.y_min, rng.y_max + 1):
                    lam_v = spec(x, y)
                    blended = symmetrize(weight_vector, spec, x, y)
                    left = weighted_lhs(blended, accel_T, x, y)
                    right = ((1 - lam_v) * lhs(weight_vector, accel_T, x, y)
                             + lam_v * lhs(weight_vector, accel_T, y, x))
                    if left != right:
                        add_violation(Violation(x, y, ikey, "lemma2-identity",
                                                left - right))
                    if left > 0:
                        add_violation(Violation(x, y, nkey, "lemma2-positive",
                                                left))
            if progress is not None:
                progress(checks_done)

    violations_t = tuple(sorted(violations, key=Violation.sort_key))
    return VerificationReport(
        op="lemmas", rng=rng, pairs_checked=checks_done,
        per_case=_sorted_cells(per_case), violations=violations_t,
        violations_total=total_viol,
        elapsed_ms=int((time.monotonic() - started) * 1000),
        engine="vector" if use_vector else "scalar",
        params={"thetas": ",".join(format_rational(Fraction(t)) for t in thetas),
                "lambdas": ";".join(s.label for s in specs)},
        max_violations=max_violations)


def _lemma2_grids(lo: int, hi: int) -> dict:
    """Weight, distance and direct-form grids over the square [lo, hi]^2."""
    x, kx, tx, cx = _axis_parts(lo, hi)
    x = x[:, None]
    kx = kx[:, None]
    tx = tx[:, None]
    cx = cx[:, None]
    y, ly, ty, cy = _axis_parts(lo, hi)
    y = y[None, :]
    ly = ly[None, :]
    ty = ty[None, :]
    cy = cy[None, :]

    ci = 3 * cx + cy
    oo = ci == 8
    dk = kx - ly
    gate_low = (dk <= -2) & (11 * kx - 10 * ly + 1 <= 0)
    gate_high = (dk >= 2) & (-10 * kx + 11 * ly + 1 <= 0)
    b0 = _np.clip(dk, -2, 2)

    tab = lambda t: _np.asarray(t, dtype=_np.int64)
    w = {
        "al": tab(_ALPHA_T)[ci],
        "be": _np.where(oo, b0, tab(_BETA_T)[ci]),
        "ga": _np.where(oo, -b0, tab(_GAMMA_T)[ci]),
        "de": _np.where(oo, _np.where(gate_low | gate_high, -2, -1),
                        tab(_DELTA_T)[ci]),
        "ep": _np.where(oo, _np.where(gate_low, 2, 0), tab(_EPS_T)[ci]),
        "ze": _np.where(oo, _np.where(gate_high, 2, 0), tab(_ZETA_T)[ci]),
    }
    shape = ((hi - lo + 1), (hi - lo + 1))
    d = {
        "tt": (tx - ty) ** 2,
        "xty": (x - ty) ** 2,
        "txy": (tx - y) ** 2,
        "xy": (x - y) ** 2,
        "xtx": _np.broadcast_to((x - tx) ** 2, shape),
        "yty": _np.broadcast_to((y - ty) ** 2, shape),
    }
    direct = (w["al"] * d["tt"] + w["be"] * d["xty"] + w["ga"] * d["txy"]
              + w["de"] * d["xy"] + w["ep"] * d["xtx"] + w["ze"] * d["yty"])
    return {"w": w, "d": d, "direct": direct}


def _lemma2_vector(grids: dict, p: int, q: int, lo: int, ikey: str, nkey: str,
                   room: int) -> tuple:
    """Exact int64 check of the blend identity for lambda = p/q (scaled by q)."""
    w, d, direct = grids["w"], grids["d"], grids["direct"]
    co = q - p
    left = (co * w["al"] + p * w["al"].T) * d["tt"]
    left = left + (co * w["be"] + p * w["ga"].T) * d["xty"]
    left = left + (co * w["ga"] + p * w["be"].T) * d["txy"]
    left = left + (co * w["de"] + p * w["de"].T) * d["xy"]
    left = left + (co * w["ep"] + p * w["ze"].T) * d["xtx"]
    left = left + (co * w["ze"] + p * w["ep"].T) * d["yty"]
    right = co * direct + p * direct.T

    violations = []
    total = 0
    bad_id = left != right
    bad_np = left > 0
    for mask, key, quantity, values in (
            (bad_id, ikey, "lemma2-identity", left - right),
            (bad_np, nkey, "lemma2-positive", left)):
        cnt = int(mask.sum())
        total += cnt
        if cnt and room > 0:
            for i, j in _np.argwhere(mask)[:room]:
                violations.append(Violation(lo + int(i), lo + int(j), key,
                                            quantity,
                                            Fraction(int(values[i, j]), q)))
                room -= 1
    return total, violations


# --- condition coverage ------------------------------------------------------

COVERAGE_KEYS = tuple(
    [c.label for c in CASE_ORDER if c is not ParityCase.ODD_ODD]
    + ["odd-odd:x>=y", "odd-odd:x<y"]
)

_WITNESS_SET_CAP = 64


@dataclass
class CoverageCell:
    """Per-cell tally of condition outcomes with exemplars and the exact
    quantities observed on the successful branch."""

    pairs: int = 0
    holds_first: int = 0
    holds_mirrored: int = 0
    fails: int = 0
    example_hold: Optional[tuple] = None
    example_fail: Optional[tuple] = None
    weight_tuples: set = field(default_factory=set)
    ratios: set = field(default_factory=set)
    b_sums: set = field(default_factory=set)
    truncated: bool = False

    def _note_set(self, target: set, value) -> None:
        if value is None:
            return
        if len(target) >= _WITNESS_SET_CAP and value not in target:
            self.truncated = True
            return
        target.add(value)


@dataclass
class ConditionCoverageReport:
    """Where a condition system holds or fails over a range, cell by cell."""

    kind: ConditionId
    rng: RangeSpec
    lam_label: str
    A: Fraction
    B: Optional[Fraction]
    M: Optional[Fraction]
    corrected_c4: bool
    m_lambda: bool
    pairs_checked: int
    cells: dict
    holds_total: int
    fails_total: int
    m_violations: Optional[int]
    m_lambda_violations: Optional[int]
    elapsed_ms: int


def coverage_cell_key(x: int, y: int) -> str:
    pc = classify(x, y)
    if pc.case is ParityCase.ODD_ODD:
        return "odd-odd:x>=y" if x >= y else "odd-odd:x<y"
    return pc.case.label


def _pair_lambda(lam: LambdaSpec, x: int, y: int) -> tuple[Fraction, Fraction]:
    return lam(x, y), lam(y, x)


def condition_coverage(rng: RangeSpec, params: ConditionParams,
                       kind: ConditionId, *, corrected_c4: bool = False,
                       m_lambda: bool = False,
                       progress: Optional[Callable[[int], None]] = None
                       ) -> ConditionCoverageReport:
    """Evaluate one condition at every pair in range and tally per cell.

    The odd-odd case is split by x >= y versus x < y because the two sides
    behave differently under the explicit weight system. Outcomes are
    memoized on the exact quantities they depend on (the two raw weight
    tuples and the two lambda values), so repeated weight patterns cost one
    evaluation.
    """
    started = time.monotonic()
    cells = {key: CoverageCell() for key in COVERAGE_KEYS}
    memo: dict = {}
    pairs = 0
    holds_total = fails_total = 0
    m_viol = 0 if kind.theorem == 3 and kind.number == 5 else None
    ml_viol = 0 if m_lambda and kind.theorem == 3 and kind.number == 5 else None
    track_sets = kind.number == 5

    for x in range(rng.x_min, rng.x_max + 1):
        for y in range(rng.y_min, rng.y_max + 1):
            pc = classify(x, y)
            if not rng.admits(pc.case):
                continue
            pairs += 1
            if progress is not None and pairs % PROGRESS_STRIDE == 0:
                progress(pairs)
            wxy = weight_vector(x, y)
            wyx = weight_vector(y, x)
            lxy, lyx = _pair_lambda(params.lam, x, y)
            key = (wxy.as_tuple(), wyx.as_tuple(), lxy, lyx)
            summary = memo.get(key)
            if summary is None:
                outcome = check_condition(kind, weight_vector, params, x, y,
                                          corrected_c4=corrected_c4,
                                          m_lambda=m_lambda)
                wit = outcome.witnesses
                if kind.number == 5:
                    if outcome.branch == BRANCH_FIRST:
                        ratio = wit.get("first_ratio")
                        b_sum = wit.get("first_b_sum")
                    elif outcome.branch == BRANCH_MIRRORED:
                        ratio = wit.get("mirror_ratio")
                        b_sum = wit.get("mirror_b_sum")
                    else:
                        ratio = b_sum = None
                    summary = (outcome.holds, outcome.branch, ratio, b_sum,
                               wit.get("m_ok", True), wit.get("m_lambda_ok", True))
                else:
                    summary = (outcome.holds, outcome.branch, None, None,
                               True, True)
                memo[key] = summary
            holds, branch, ratio, b_sum, m_ok, ml_ok = summary

            cell = cells[coverage_cell_key(x, y)]
            cell.pairs += 1
            if holds:
                holds_total += 1
                if branch == BRANCH_MIRRORED:
                    cell.holds_mirrored += 1
                else:
                    cell.holds_first += 1
                if cell.example_hold is None:
                    cell.example_hold = (x, y)
                if track_sets:
                    cell._note_set(cell.weight_tuples, wxy.as_tuple())
                    cell._note_set(cell.ratios, ratio)
                    cell._note_set(cell.b_sums, b_sum)
            else:
                fails_total += 1
                cell.fails += 1
                if cell.example_fail is None:
                    cell.example_fail = (x, y)
            if m_viol is not None and not m_ok:
                m_viol += 1
            if ml_viol is not None and not ml_ok:
                ml_viol += 1

    cells = {k: v for k, v in cells.items() if v.pairs > 0}
    return ConditionCoverageReport(
        kind=kind, rng=rng, lam_label=params.lam.label, A=params.A,
        B=params.B, M=params.M, corrected_c4=corrected_c4, m_lambda=m_lambda,
        pairs_checked=pairs, cells=cells, holds_total=holds_total,
        fails_total=fails_total, m_violations=m_viol,
        m_lambda_violations=ml_viol,
        elapsed_ms=int((time.monotonic() - started) * 1000))


# --- lambda grid search ------------------------------------------------------

_SEARCH_GROUPS = (
    (ParityCase.ONE_ONE,),
    (ParityCase.ONE_EVEN, ParityCase.EVEN_ONE),
    (ParityCase.ONE_ODD, ParityCase.ODD_ONE),
    (ParityCase.EVEN_EVEN,),
    (ParityCase.EVEN_ODD, ParityCase.ODD_EVEN),
    (ParityCase.ODD_ODD,),
)

DEFAULT_SEARCH_BUDGET = 100_000


@dataclass
class LambdaSearchResult:
    """Best per-case lambda assignment found on a finite grid."""

    q: int
    a_grid: tuple
    kind: ConditionId
    rng: RangeSpec
    budget: int
    assignments_scored: int
    budget_exhausted: bool
    best_lambda: dict
    best_a: Fraction
    covered: int
    total: int
    cell_coverage: dict
    irreducible_cells: tuple
    elapsed_ms: int

    @property
    def coverage(self) -> Fraction:
        if self.total == 0:
            return Fraction(0)
        return Fraction(self.covered, self.total)


def _pairwise_lambda_spec(x: int, y: int, v_xy: Fraction,
                          v_yx: Fraction) -> LambdaSpec:
    def fn(u: int, w: int) -> Fraction:
        if (u, w) == (x, y):
            return v_xy
        if (u, w) == (y, x):
            return v_yx
        raise AssertionError("lambda queried off the pair under test")
    return LambdaSpec(fn, f"pair({x},{y})")


def search_lambda(rng: RangeSpec, q: int, a_grid: Sequence, kind: ConditionId,
                  *, B: Optional[Fraction] = None, M: Optional[Fraction] = None,
                  budget: int = DEFAULT_SEARCH_BUDGET,
                  corrected_c4: bool = False,
                  progress: Optional[Callable[[int], None]] = None
                  ) -> LambdaSearchResult:
    """Search per-case lambda values from {0, 1/q, ..., 1} (q = 0 forces 0)
    maximizing the number of pairs satisfying the condition.

    A pair only sees lambda through its own case and the transposed case, so
    outcomes are tabulated per case against the (value, transposed value, A)
    triple; scoring an assignment is then nine table lookups. When the full
    product grid exceeds the budget, each coupled case group is pre-ranked
    independently and only the top combinations enter the product (the
    result is marked budget_exhausted). Ties break to the lexicographically
    smallest (lambda vector, A).
    """
    started = time.monotonic()
    if q < 0:
        raise ValueError(f"grid denominator must be >= 0, got {q}")
    if kind.theorem == 3 and kind.number == 5 and (B is None or M is None):
        raise ValueError("family-3 condition 5 requires both B and M")
    a_values = sorted({Fraction(a) for a in a_grid})
    if not a_values:
        raise ValueError("A grid must not be empty")
    for a in a_values:
        if not 0 < a < 1:
            raise ValueError(f"A must lie in (0, 1), got {format_rational(a)}")
    values = [Fraction(i, q) for i in range(q + 1)] if q >= 1 else [Fraction(0)]

    # sat[case][(v_xy, v_yx, A)] = pairs of that case satisfied under those
    # lambda values; total[case] = pairs of that case in range.
    sat: dict = {c: {} for c in CASE_ORDER}
    total: dict = {c: 0 for c in CASE_ORDER}
    memo: dict = {}
    pairs = 0
    for x in range(rng.x_min, rng.x_max + 1):
        for y in range(rng.y_min, rng.y_max + 1):
            case = classify(x, y).case
            if not rng.admits(case):
                continue
            pairs += 1
            total[case] += 1
            wxy = weight_vector(x, y).as_tuple()
            wyx = weight_vector(y, x).as_tuple()
            for v1 in values:
                for v2 in values:
                    for a in a_values:
                        mkey = (wxy, wyx, v1, v2, a)
                        holds = memo.get(mkey)
                        if holds is None:
                            params = ConditionParams(
                                _pairwise_lambda_spec(x, y, v1, v2), a, B, M)
                            holds = check_condition(
                                kind, weight_vector, params, x, y,
                                corrected_c4=corrected_c4).holds
                            memo[mkey] = holds
                        if holds:
                            skey = (v1, v2, a)
                            sat[case][skey] = sat[case].get(skey, 0) + 1
            if progress is not None and pairs % PROGRESS_STRIDE == 0:
                progress(pairs)

    present = [c for c in CASE_ORDER if total[c] > 0]

    def assignment_score(assign: dict, a: Fraction) -> int:
        score = 0
        for c in present:
            score += sat[c].get((assign[c], assign[c.transpose], a), 0)
        return score

    # Candidate value combinations per coupled group.
    full_product = (len(values) ** 9) * len(a_values)
    budget_exhausted = full_product > budget
    group_candidates: dict = {}
    for a in a_values:
        per_group = []
        for group in _SEARCH_GROUPS:
            if len(group) == 1:
                c = group[0]
                combos = [((v,), sat[c].get((v, v, a), 0)) for v in values]
            else:
                c, tc = group
                combos = [((v1, v2),
                           sat[c].get((v1, v2, a), 0) + sat[tc].get((v2, v1, a), 0))
                          for v1 in values for v2 in values]
            if budget_exhausted:
                per_a_budget = max(1, budget // len(a_values))
                keep = max(1, int(per_a_budget ** (1.0 / len(_SEARCH_GROUPS))))
                combos.sort(key=lambda cv: (-cv[1], cv[0]))
                combos = combos[:keep]
                combos.sort(key=lambda cv: cv[0])
            per_group.append([vals for vals, _ in combos])
        group_candidates[a] = per_group

    import itertools

    best_key = None
    best_cov = -1
    best_assign = None
    best_a = None
    scored = 0
    for a in a_values:
        for pick in itertools.product(*group_candidates[a]):
            assign = {}
            for group, vals in zip(_SEARCH_GROUPS, pick):
                if len(group) == 1:
                    assign[group[0]] = vals[0]
                else:
                    assign[group[0]] = vals[0]
                    assign[group[1]] = vals[1]
            scored += 1
            cov = assignment_score(assign, a)
            lex = (tuple(assign[c] for c in CASE_ORDER), a)
            if cov > best_cov or (cov == best_cov and lex < best_key):
                best_cov = cov
                best_key = lex
                best_assign = assign
                best_a = a

    cell_coverage = {}
    for c in present:
        got = sat[c].get((best_assign[c], best_assign[c.transpose], best_a), 0)
        cell_coverage[c.label] = (got, total[c])
    irreducible = tuple(
        c.label for c in present
        if (max(sat[c].values(), default=0)) < total[c])

    return LambdaSearchResult(
        q=q, a_grid=tuple(a_values), kind=kind, rng=rng, budget=budget,
        assignments_scored=scored, budget_exhausted=budget_exhausted,
        best_lambda={c.label: best_assign[c] for c in CASE_ORDER},
        best_a=best_a, covered=best_cov, total=pairs,
        cell_coverage=cell_coverage, irreducible_cells=irreducible,
        elapsed_ms=int((time.monotonic() - started) * 1000))


# --- orbit decay sweep -------------------------------------------------------

def orbit_decay_sweep(seed_min: int, seed_max: int, params: ConditionParams, *,
                      W=weight_vector, dedup: bool = True,
                      telescoped: bool = True, cap: int = DEFAULT_CAP,
                      max_violations: int = DEFAULT_MAX_VIOLATIONS,
                      progress: Optional[Callable[[int], None]] = None
                      ) -> VerificationReport:
    """Check geometric decay of squared step distances along T-orbits.

    For every seed in [seed_min, seed_max], each orbit step whose pair
    satisfies condition (5) (either branch) must shrink: step_sq <= A *
    prev_sq, exactly. With dedup=True (the default) each orbit is walked
    only until it first drops below its seed; the tail coincides with the
    orbit of a smaller seed, so the union over ascending seeds still covers
    every step of every full orbit. Counts are over (seed, step) visits.

    The cumulative bound step_sq(n) <= A^n * step_sq(0) is checked on the
    longest orbit prefix whose premise holds at every step (in dedup mode,
    within the truncated walk).
    """
    started = time.monotonic()
    if seed_min < 1 or seed_min > seed_max:
        raise ValueError("need 1 <= seed_min <= seed_max")
    kind = ConditionId(1, 5)
    a_num, a_den = params.A.numerator, params.A.denominator
    memo: dict = {}
    per_case = {
        "decay-steps": CaseTally(),
        "premise-held": CaseTally(),
        "premise-failed": CaseTally(),
        "telescoped-steps": CaseTally(),
    }
    violations: list[Violation] = []
    total_viol = 0

    def premise(px: int, py: int) -> bool:
        wxy = W(px, py)
        wyx = W(py, px)
        lxy, lyx = _pair_lambda(params.lam, px, py)
        key = (wxy.as_tuple(), wyx.as_tuple(), lxy, lyx)
        holds = memo.get(key)
        if holds is None:
            holds = check_condition(kind, W, params, px, py).holds
            memo[key] = holds
        return holds

    def add_violation(v: Violation) -> None:
        nonlocal total_viol
        total_viol += 1
        if len(violations) < max_violations:
            violations.append(v)

    steps_done = 0
    for seed in range(seed_min, seed_max + 1):
        prev = seed
        cur = accel_T(seed)
        prev_sq = (cur - prev) ** 2
        first_sq = prev_sq
        prefix_intact = True
        pw_num, pw_den = 1, 1
        n = 0
        while n < cap:
            if cur == prev:
                break  # fixed point: no recorded step to bound
            nxt = accel_T(cur)
            step_sq = (nxt - cur) ** 2
            n += 1
            steps_done += 1
            per_case["decay-steps"].pairs += 1
            if premise(prev, cur):
                per_case["premise-held"].pairs += 1
                if a_den * step_sq > a_num * prev_sq:
                    add_violation(Violation(
                        prev, cur, tally_key(prev, cur), "decay",
                        Fraction(a_den * step_sq - a_num * prev_sq, a_den)))
                if telescoped and prefix_intact:
                    pw_num *= a_num
                    pw_den *= a_den
                    per_case["telescoped-steps"].pairs += 1
                    if pw_den * step_sq > pw_num * first_sq:
                        add_violation(Violation(
                            prev, cur, tally_key(prev, cur), "telescoped",
                            Fraction(pw_den * step_sq - pw_num * first_sq,
                                     pw_den)))
            else:
                per_case["premise-failed"].pairs += 1
                prefix_intact = False
            if dedup and cur < seed:
                break  # the tail is the orbit of a smaller, already-swept seed
            prev, cur, prev_sq = cur, nxt, step_sq
        if progress is not None and seed % 10_000 == 0:
            progress(steps_done)

    violations_t = tuple(sorted(violations, key=Violation.sort_key))
    return VerificationReport(
        op="orbit-decay", rng=RangeSpec(seed_min, seed_max, 1, 1),
        pairs_checked=steps_done, per_case=_sorted_cells(per_case),
        violations=violations_t, violations_total=total_viol,
        elapsed_ms=int((time.monotonic() - started) * 1000),
        engine="dedup" if dedup else "full",
        params={"A": format_rational(params.A), "lambda": params.lam.label,
                "telescoped": str(telescoped)},
        max_violations=max_violations)
