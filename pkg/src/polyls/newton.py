"""Exact parametric line search: discrete Newton, bisection, ladder utilities.

The intersection lambda* = min{f(S)/d(S) : d(S) > 0} is found exactly in
rational arithmetic.  Every envelope evaluation goes through an integral
rescaled oracle, so the submodular minimizer stays in integers no matter how
ugly the rational iterate is.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BadStart, GroundSetTooLarge, InvariantViolation
from .oracles import TABLE_N_CAP, Direction, SubmodularOracle, newton_scale
from .sfm import membership, minimize
from .subsets import SubsetMask


@dataclass
class NewtonTrace:
    """Visited iterates (lambda_i, envelope minimizer S_i, g(lambda_i))."""

    iterates: list[tuple[Fraction, SubsetMask, Fraction]] = field(default_factory=list)
    sfm_calls: int = 0

    @property
    def iterations(self) -> int:
        return max(0, len(self.iterates) - 1)


@dataclass
class LineSearchResult:
    lambda_star: Fraction
    tight_set: SubsetMask
    dual_optimum: tuple[Fraction, ...]
    method: str
    newton_iterations: int = 0
    engine_iterations: int = 0
    oracle_calls: int = 0
    sfm_calls: int = 0
    trace: object = None


@dataclass
class BinarySearchResult:
    value: Fraction
    membership_calls: int
    lo: Fraction
    hi: Fraction


def dual_point(tight_set: SubsetMask, d: Direction) -> tuple[Fraction, ...]:
    """Scaled indicator 1_S / d(S): a hyperplane-feasible point whose
    extension value equals f(S)/d(S)."""
    den = d.of(tight_set)
    if den == 0:
        raise InvariantViolation("tight set with d(S) = 0 has no dual witness")
    return tuple(Fraction(1, den) if i in tight_set else Fraction(0)
                 for i in range(d.n))


def _result(f, d, lam, tight, method, **kw) -> LineSearchResult:
    if f.eval(tight) != lam * d.of(tight):
        raise InvariantViolation("tight set does not satisfy f(S) = lambda d(S)")
    return LineSearchResult(lam, tight, dual_point(tight, d), method, **kw)


def upper_bound(f: SubmodularOracle, d: Direction) -> Fraction:
    """min over singletons e with d_e > 0 of f({e})/d_e; always >= lambda*."""
    best = None
    for e, de in enumerate(d.d):
        if de > 0:
            r = Fraction(f.eval(1 << e), de)
            if best is None or r < best:
                best = r
    return best


def ladder_spacing(d: Direction) -> Fraction:
    """Minimum gap between distinct finite ratios f(S)/d(S): 1/||d||_1^2."""
    return Fraction(1, d.norm1 ** 2)


def envelope(f: SubmodularOracle, d: Direction, lam: Fraction,
             sfm_method: str = "auto",
             sfm_tol: float | None = None) -> tuple[Fraction, SubsetMask]:
    """g(lambda) = min_S f(S) - lambda d(S), with a minimizing set."""
    lam = Fraction(lam)
    scaled = newton_scale(f, d, lam)
    res = minimize(scaled, sfm_method, sfm_tol)
    return Fraction(res.min_value, lam.denominator), res.minimal_minimizer


def bruteforce_linesearch(f: SubmodularOracle, d: Direction) -> LineSearchResult:
    """Reference solver: enumerate all ratios f(S)/d(S) with d(S) > 0 (n <= 20)."""
    if f.n > TABLE_N_CAP:
        raise GroundSetTooLarge(f"brute-force line search capped at n={TABLE_N_CAP}")
    before = f.calls
    table = f.dense_table()
    dsums = d.sums_table()
    best_num = best_den = None
    best_mask = 0
    for m in range(1, 1 << f.n):
        den = dsums[m]
        if den <= 0:
            continue
        num = table[m]
        if best_num is None or num * best_den < best_num * den:
            best_num, best_den, best_mask = num, den, m
    lam = Fraction(best_num, best_den)
    return _result(f, d, lam, SubsetMask(best_mask, f.n), "bruteforce",
                   oracle_calls=f.calls - before)


def discrete_newton(f: SubmodularOracle, d: Direction,
                    lambda0: Fraction | None = None,
                    sfm_method: str = "auto",
                    sfm_tol: float | None = None) -> LineSearchResult:
    """Exact intersection by Newton steps lambda <- f(S)/d(S) on the envelope.

    Requires lambda0 >= lambda* (defaults to the singleton upper bound).  A
    start below the intersection raises BadStart.
    """
    before = f.calls
    if lambda0 is None:
        lambda0 = upper_bound(f, d)
    lam = Fraction(lambda0)
    trace = NewtonTrace()
    spacing = ladder_spacing(d)

    g, s = envelope(f, d, lam, sfm_method, sfm_tol)
    trace.sfm_calls += 1
    if g > 0:
        raise BadStart(f"envelope positive at start: lambda0={lam} < lambda*")
    if g == 0:
        # already feasible; confirm lambda0 is the intersection by stepping
        # just past it, where any envelope minimizer must be a tight set
        g_up, s_up = envelope(f, d, lam + spacing, sfm_method, sfm_tol)
        trace.sfm_calls += 1
        if g_up == 0:
            raise BadStart(f"still feasible above lambda0={lam}: started below lambda*")
        if d.of(s_up) <= 0:
            raise InvariantViolation("negative envelope with d(S) <= 0: f >= 0 broken")
        lam_cand = Fraction(f.eval(s_up), d.of(s_up))
        if lam_cand != lam:
            raise BadStart(
                f"lambda0={lam} is feasible but lambda*={lam_cand}: started below lambda*")
        trace.iterates.append((lam, s_up, Fraction(0)))
        return _result(f, d, lam, s_up, "newton",
                       newton_iterations=0, oracle_calls=f.calls - before,
                       sfm_calls=trace.sfm_calls, trace=trace)

    cap = (1 << min(f.n, 21)) + 50
    tight = None
    while True:
        trace.iterates.append((lam, s, g))
        if g == 0:
            break
        if d.of(s) <= 0:
            raise InvariantViolation("negative envelope with d(S) <= 0: f >= 0 broken")
        nxt = Fraction(f.eval(s), d.of(s))
        if not nxt < lam:
            raise InvariantViolation("Newton iterate failed to decrease")
        tight = s
        lam = nxt
        g, s = envelope(f, d, lam, sfm_method, sfm_tol)
        trace.sfm_calls += 1
        if len(trace.iterates) > cap:
            raise InvariantViolation("Newton exceeded the ladder size: oracle broken")

    return _result(f, d, lam, tight, "newton",
                   newton_iterations=trace.iterations,
                   oracle_calls=f.calls - before,
                   sfm_calls=trace.sfm_calls, trace=trace)


def binary_search(f: SubmodularOracle, d: Direction,
                  lo: Fraction | None = None, hi: Fraction | None = None,
                  eps: Fraction = Fraction(1, 100),
                  sfm_method: str = "auto",
                  sfm_tol: float | None = None) -> BinarySearchResult:
    """Feasibility bisection: returns lam with lam <= lambda* <= lam + eps.

    Runs exactly ceil(log2((hi - lo)/eps)) membership tests.  The right end
    is closed: when lambda* sits exactly on the initial upper bound and the
    range is a power-of-two multiple of eps, lambda* = lam + eps is attained.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    lo = Fraction(0) if lo is None else Fraction(lo)
    hi = upper_bound(f, d) if hi is None else Fraction(hi)
    if hi < lo:
        raise ValueError("empty bracket")

    ratio = (hi - lo) / eps
    steps = 0
    while (1 << steps) * ratio.denominator < ratio.numerator:
        steps += 1

    calls = 0
    for _ in range(steps):
        mid = (lo + hi) / 2
        calls += 1
        if membership(f, [mid * di for di in d.d], sfm_method, sfm_tol).inside:
            lo = mid
        else:
            hi = mid
    return BinarySearchResult(lo, calls, lo, hi)
