"""The multi-degree B-spline basis, three ways.

Production path: coefficient-wise differences of transition functions.
Oracle path: the integral recurrence, carried out level by level in exact
piecewise-Bernstein arithmetic (used as ground truth by the tests).
Fast path: a Cox-de-Boor-style recurrence with explicit linear blending
functions, valid for spaces whose different-degree joins are C^0 or C^1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bernstein import BernsteinPiece, PiecewisePoly, constant_piece
from .kernels import PiecewiseTable
from .space import ExtendedPartitions, SplineSpace, extended_partitions
from .transitions import TransitionSet, solve_all


class UnsupportedSpaceError(ValueError):
    """The space does not qualify for the fast recurrence path."""


class RecurrenceError(RuntimeError):
    """Internal inconsistency detected while running the integral recurrence."""


@dataclass(frozen=True)
class BSplineBasis:
    """All dimension-many basis functions as piecewise Bernstein tables.

    Function i is supported on [starts[i], ends[i]]; outside it is identically
    zero.  The functions are positive inside their supports and sum to one on
    the whole domain.
    """

    space: SplineSpace
    partitions: ExtendedPartitions
    functions: tuple[PiecewisePoly, ...]

    @property
    def dimension(self) -> int:
        return len(self.functions)

    def _table(self) -> PiecewiseTable:
        return PiecewiseTable.from_polys(self.space.all_breaks, self.functions)

    def sample(self, xs) -> np.ndarray:
        """Basis values at many points, shape (len(xs), K)."""
        return self._table().evaluate(xs)

    def first_active(self, interval: int) -> int:
        """Largest function index whose start knot is <= the interval's left end.

        The d_j+1 functions ending at this index are exactly the ones that can
        be nonzero on the interval.
        """
        return self.partitions.locate_start(self.space.all_breaks[interval])

    def eval_at(self, x: float) -> tuple[int, np.ndarray]:
        """(last active index l, values of functions l-d_j..l at x)."""
        j = self.space.interval_of(x)
        ell = self.first_active(j)
        d = int(self.space.degrees[j])
        vals = np.empty(d + 1)
        for offset, i in enumerate(range(ell - d, ell + 1)):
            piece = self.functions[i].piece_on(j)
            vals[offset] = piece if isinstance(piece, float) else piece(x)
        return ell, vals

    def derivative_functions(self, order: int) -> tuple[PiecewisePoly, ...]:
        """Coefficient-level derivatives of every basis function."""
        return tuple(f.derivative(order) for f in self.functions)

    def sample_derivative(self, xs, order: int) -> np.ndarray:
        table = PiecewiseTable.from_polys(
            self.space.all_breaks, self.derivative_functions(order)
        )
        return table.evaluate(xs)


def basis_from_transitions(ts: TransitionSet) -> BSplineBasis:
    """Production path: N_i = f_i - f_{i+1}, with f_{K+1} treated as zero."""
    space, partitions = ts.space, ts.partitions
    breaks = space.all_breaks
    K = space.dimension
    functions = []
    for i in range(K):
        j0, j1 = int(partitions.start_break[i]), int(partitions.end_break[i])
        pieces = []
        for j in range(j0, j1):
            d = int(space.degrees[j])
            a = ts.piece_on(i, j)
            if isinstance(a, float):
                a = constant_piece(breaks[j], breaks[j + 1], a, d)
            if i + 1 < K:
                b = ts.piece_on(i + 1, j)
                if isinstance(b, float):
                    b = constant_piece(breaks[j], breaks[j + 1], b, d)
            else:
                b = constant_piece(breaks[j], breaks[j + 1], 0.0, d)
            pieces.append(a.elevate_to(d).minus(b.elevate_to(d)))
        functions.append(PiecewisePoly(j0, tuple(pieces)))
    return BSplineBasis(space, partitions, tuple(functions))


def build_basis(space: SplineSpace) -> tuple[TransitionSet, BSplineBasis]:
    """Convenience: partitions, transitions and basis for a validated space."""
    ts = solve_all(space)
    return ts, basis_from_transitions(ts)


# ---------------------------------------------------------------------------
# integral recurrence oracle
# ---------------------------------------------------------------------------


class _CDF:
    """Normalized running integral of one level function.

    Either a genuine piecewise CDF (0 before the support, polynomial inside,
    1 after) or, for a mass-less function, a unit step at a knot.  step=None
    encodes "step before the domain" (identically 1), step=inf "no step"
    (identically 0).
    """

    def __init__(self, pieces: dict[int, BernsteinPiece] | None, step: float | None):
        self.pieces = pieces
        self.step = step

    @classmethod
    def step_at(cls, position: float | None) -> "_CDF":
        return cls(None, position)

    def restrict(self, interval: int, lo: float, hi: float) -> BernsteinPiece | float:
        if self.pieces is not None:
            if interval in self.pieces:
                return self.pieces[interval]
            any_piece = next(iter(self.pieces))
            return 0.0 if interval < any_piece else 1.0
        if self.step is None:
            return 1.0
        if self.step == np.inf:
            return 0.0
        # step positions are knots, never interior to a break interval
        return 1.0 if self.step <= lo else 0.0


@dataclass(frozen=True)
class OracleLevels:
    """Every level function of the integral recurrence, for tests and blending extraction.

    levels[n][i] is the level-n function of (0-based) index i; missing entries
    are identically zero.
    """

    space: SplineSpace
    partitions: ExtendedPartitions
    levels: tuple[dict[int, PiecewisePoly], ...]

    @property
    def max_degree(self) -> int:
        return self.space.max_degree

    def function(self, i: int, n: int) -> PiecewisePoly | None:
        return self.levels[n].get(i)

    def value(self, i: int, n: int, x: float) -> float:
        f = self.function(i, n)
        return f.value(x) if f is not None else 0.0

    def final_basis(self) -> BSplineBasis:
        m = self.max_degree
        functions = tuple(self.levels[m][i] for i in range(self.space.dimension))
        return BSplineBasis(self.space, self.partitions, functions)


def integral_recurrence_oracle(
    space: SplineSpace, partitions: ExtendedPartitions | None = None
) -> OracleLevels:
    """Run the integral recurrence in exact Bernstein arithmetic.

    Level n covers functions i = m-n..K-1 (0-based) with supports
    [starts[i], ends[i-m+n]].  On a break interval of degree d_j a function is
    the constant 1 at level n = m-d_j, the difference of the two lower-level
    running integrals for n > m-d_j, and 0 before that.  All integrals are the
    exact h/(d+1) coefficient sums; no quadrature.
    """
    if partitions is None:
        partitions = extended_partitions(space)
    starts, ends = partitions.starts, partitions.ends
    breaks = space.all_breaks
    m, K = space.max_degree, space.dimension

    def synthetic_cdf(i: int, n: int) -> _CDF:
        """CDF of an out-of-range or mass-less function: a step at its end knot."""
        e = i - m + n
        if e < 0:
            return _CDF.step_at(None)  # ends before the domain: identically 1
        if e >= K:
            return _CDF.step_at(np.inf)
        return _CDF.step_at(float(ends[e]))

    levels: list[dict[int, PiecewisePoly]] = []
    cdfs: dict[int, _CDF] = {}
    for n in range(m + 1):
        level: dict[int, PiecewisePoly] = {}
        new_cdfs: dict[int, _CDF] = {}
        for i in range(max(0, m - n), K):
            e = i - m + n
            if e < 0 or not starts[i] < ends[e]:
                new_cdfs[i] = synthetic_cdf(i, n)
                continue
            j0, j1 = int(partitions.start_break[i]), int(partitions.end_break[e])
            ga = cdfs.get(i, synthetic_cdf(i, n - 1)) if n else None
            gb = cdfs.get(i + 1, synthetic_cdf(i + 1, n - 1)) if n else None
            pieces = []
            for j in range(j0, j1):
                lo, hi = breaks[j], breaks[j + 1]
                d = int(space.degrees[j])
                if n == m - d:
                    pieces.append(constant_piece(lo, hi, 1.0))
                elif n > m - d:
                    target = n - (m - d)
                    a = ga.restrict(j, lo, hi)
                    b = gb.restrict(j, lo, hi)
                    if isinstance(a, float):
                        a = constant_piece(lo, hi, a)
                    if isinstance(b, float):
                        b = constant_piece(lo, hi, b)
                    pieces.append(a.elevate_to(target).minus(b.elevate_to(target)))
                else:
                    pieces.append(constant_piece(lo, hi, 0.0))
            poly = PiecewisePoly(j0, tuple(pieces))
            level[i] = poly
            mass = sum(p.integral() for p in pieces)
            if mass <= 0.0:
                if mass < -1e-12:
                    raise RecurrenceError(
                        f"negative mass {mass} for level-{n} function {i}"
                    )
                new_cdfs[i] = synthetic_cdf(i, n)
            else:
                delta = 1.0 / mass
                acc = 0.0
                gpieces = {}
                for j, p in zip(range(j0, j1), pieces):
                    g = p.scaled(delta).antiderivative(acc)
                    gpieces[j] = g
                    acc = float(g.coeffs[-1])
                new_cdfs[i] = _CDF(gpieces, None)
        levels.append(level)
        cdfs = new_cdfs

    oracle = OracleLevels(space, partitions, tuple(levels))
    if len(oracle.levels[m]) != K:
        raise RecurrenceError(
            f"final level has {len(oracle.levels[m])} functions, expected {K}"
        )
    return oracle


def extract_blending(oracle: OracleLevels, i: int, n: int):
    """Sampler for the blending function phi_i^{n-1} implied by adjacent levels.

    Derived successively from the recurrence template: the first one at a
    level is 1 - N_{m-n,n}/N_{m+1-n,n-1} (0-based), and each later one peels
    the already-known predecessor off.  Returns NaN where the level-(n-1)
    denominator vanishes; callers skip such samples.
    """
    m = oracle.max_degree
    base = m + 1 - n

    def phi(x: float, i=i) -> float:
        denom = oracle.value(i, n - 1, x)
        if abs(denom) < 1e-13:
            return np.nan
        if i == base:
            return 1.0 - oracle.value(i - 1, n, x) / denom
        num = oracle.value(i - 1, n, x)
        prev_weight = oracle.value(i - 1, n - 1, x)
        if abs(prev_weight) >= 1e-13:  # 0*(0/0)=0 convention: drop the vanished term
            prev = extract_blending(oracle, i - 1, n)(x)
            if np.isnan(prev):
                return np.nan
            num -= prev * prev_weight
        return 1.0 - num / denom

    return phi


# ---------------------------------------------------------------------------
# fast recurrence path (explicit blending functions)
# ---------------------------------------------------------------------------


def fast_path_qualifies(space: SplineSpace) -> bool:
    """The explicit-blending recurrence covers C^0/C^1 joins of unequal degrees."""
    d, k = space.degrees, space.continuities
    for i in range(len(k)):
        if d[i] != d[i + 1] and k[i] > 1:
            return False
    return True


def _linear_ramp(lo, hi, x0, x1) -> BernsteinPiece:
    """Restriction of the global linear ramp (x-x0)/(x1-x0) to [lo, hi]."""
    return BernsteinPiece(lo, hi, [(lo - x0) / (x1 - x0), (hi - x0) / (x1 - x0)])


def _blending_tables(space: SplineSpace, partitions: ExtendedPartitions):
    """Blending functions per level as degree-1 pieces over each break interval.

    Levels 1..m-1 use the linear ramp between the support knots.  At the last
    level a support of 2 or 3 intervals with unequal degrees gets the
    piecewise-linear ramp whose slope on interval j is 1/(delta*d_j) with
    delta the degree-weighted support width; all other cases keep the ramp.
    """
    starts, ends = partitions.starts, partitions.ends
    breaks = space.all_breaks
    m, K = space.max_degree, space.dimension
    tables: list[dict[int, dict[int, BernsteinPiece]]] = [{} for _ in range(m + 1)]
    for n in range(1, m + 1):
        for i in range(max(0, m - n) + 1, K):
            e = i - m + n - 1  # end-knot index of the level-(n-1) support
            if e < 0 or not starts[i] < ends[e]:
                continue
            j0, j1 = int(partitions.start_break[i]), int(partitions.end_break[e])
            degs = space.degrees[j0:j1]
            table = {}
            if n == m and 2 <= j1 - j0 <= 3 and np.unique(degs).size > 1:
                delta = sum(
                    (breaks[j + 1] - breaks[j]) / space.degrees[j] for j in range(j0, j1)
                )
                acc = 0.0
                for j in range(j0, j1):
                    lo, hi = breaks[j], breaks[j + 1]
                    step = (hi - lo) / space.degrees[j]
                    table[j] = BernsteinPiece(lo, hi, [acc / delta, (acc + step) / delta])
                    acc += step
            else:
                x0, x1 = float(starts[i]), float(ends[e])
                for j in range(j0, j1):
                    table[j] = _linear_ramp(breaks[j], breaks[j + 1], x0, x1)
            tables[n][i] = table
    return tables


def fast_recurrence_blendings(space: SplineSpace, partitions: ExtendedPartitions | None = None):
    """Blending-function tables for qualifying spaces (explicit, no solve)."""
    if not fast_path_qualifies(space):
        raise UnsupportedSpaceError(
            "fast recurrence path needs C^0 or C^1 joins between unequal degrees"
        )
    if partitions is None:
        partitions = extended_partitions(space)
    return _blending_tables(space, partitions)


def fast_recurrence_basis(
    space: SplineSpace, partitions: ExtendedPartitions | None = None
) -> BSplineBasis:
    """Assemble the basis through the recurrence template with explicit blendings."""
    if partitions is None:
        partitions = extended_partitions(space)
    phis = fast_recurrence_blendings(space, partitions)
    starts, ends = partitions.starts, partitions.ends
    breaks = space.all_breaks
    m, K = space.max_degree, space.dimension

    prev: dict[int, PiecewisePoly] = {}
    level: dict[int, PiecewisePoly] = {}
    for n in range(m + 1):
        level = {}
        for i in range(max(0, m - n), K):
            e = i - m + n
            if e < 0 or not starts[i] < ends[e]:
                continue
            j0, j1 = int(partitions.start_break[i]), int(partitions.end_break[e])
            pieces = []
            for j in range(j0, j1):
                lo, hi = breaks[j], breaks[j + 1]
                d = int(space.degrees[j])
                if n == m - d:
                    pieces.append(constant_piece(lo, hi, 1.0))
                    continue
                if n < m - d:
                    pieces.append(constant_piece(lo, hi, 0.0))
                    continue
                target = n - (m - d)
                acc = constant_piece(lo, hi, 0.0, target)
                fa = prev.get(i)
                if fa is not None and not isinstance(fa.piece_on(j), float):
                    acc = acc.plus(phis[n][i][j].multiply(fa.piece_on(j)).elevate_to(target))
                fb = prev.get(i + 1)
                if fb is not None and not isinstance(fb.piece_on(j), float):
                    one_minus = constant_piece(lo, hi, 1.0, 1).minus(phis[n][i + 1][j])
                    acc = acc.plus(one_minus.multiply(fb.piece_on(j)).elevate_to(target))
                pieces.append(acc)
            level[i] = PiecewisePoly(j0, tuple(pieces))
        prev = level
    functions = tuple(level[i] for i in range(K))
    return BSplineBasis(space, partitions, functions)
