"""Transition functions: the computational primitive behind the B-spline basis.

Transition function i is 0 up to starts[i], 1 from ends[i-1] onward, and in
between is the unique spline element fixed by vanishing conditions at both
ends plus the continuity (or connection-matrix) conditions at the interior
break-points.  Its Bernstein coefficients come from one small dense Hermite
system per function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .bernstein import BernsteinPiece, PiecewisePoly
from .kernels import PiecewiseTable
from .space import ExtendedPartitions, SplineSpace


class SingularSystemError(RuntimeError):
    """The Hermite system for a transition function was numerically singular.

    Must not happen for a valid space; indicates an internal inconsistency or a
    degenerate connection-matrix choice.
    """


def endpoint_orders(space: SplineSpace, partitions: ExtendedPartitions, i: int) -> tuple[int, int]:
    """Vanishing-order data (k_i^s, k_i^t) of basis function i, 0-based.

    The function vanishes exactly k_i^s + 1 times at starts[i] and its
    complement 1 - f vanishes k_i^t + 1 times at ends[i]; both equal the
    interval degree minus the knot run length.  The value -1 (only at the
    clamped domain ends) means no vanishing at all.
    """
    if not 0 <= i < partitions.dimension:
        raise IndexError(f"function index {i} outside 0..{partitions.dimension - 1}")
    k_s = int(space.degrees[partitions.start_break[i]]) - partitions.start_run(i) - 1
    k_t = int(space.degrees[partitions.end_break[i] - 1]) - partitions.end_run(i) - 1
    return k_s, k_t


def _deriv_row(degree: int, width: float, order: int, side: str) -> np.ndarray:
    """Row of D^order at a piece endpoint as a linear form on its coefficients."""
    row = np.zeros(degree + 1)
    factor = (math.factorial(degree) // math.factorial(degree - order)) / width**order
    base = 0 if side == "left" else degree - order
    for u in range(order + 1):
        row[base + u] = factor * (-1) ** (order - u) * math.comb(order, u)
    return row


@dataclass(frozen=True)
class TransitionFunction:
    """Piecewise Bernstein representation of one transition function."""

    index: int
    poly: PiecewisePoly  # fills: 0 on the left, 1 on the right
    start_order: int  # k_i^s of its own index
    end_order: int  # k_{i-1}^t, the order datum at its terminating knot

    @property
    def is_constant_one(self) -> bool:
        return not self.poly.pieces

    def value(self, x: float) -> float:
        return self.poly.value(x)

    def start_derivative(self, order: int) -> float:
        """D_+^order at the left end of the nontrivial range (1 for order 0 if constant)."""
        if self.is_constant_one:
            return 1.0 if order == 0 else 0.0
        return self.poly.pieces[0].endpoint_derivative("left", order)

    def end_derivative(self, order: int) -> float:
        if self.is_constant_one:
            return 1.0 if order == 0 else 0.0
        return self.poly.pieces[-1].endpoint_derivative("right", order)


def solve_transition(
    space: SplineSpace, partitions: ExtendedPartitions, i: int
) -> TransitionFunction:
    """Solve the Hermite system for transition function i.

    Pins the first k_i^s+1 coefficients of the first piece to 0 and the last
    k_{i-1}^t+1 coefficients of the last piece to 1, then solves the interior
    continuity rows for the remaining coefficients.  Interior rows of order r
    are scaled by h_min^r to equilibrate the matrix.
    """
    if i == 0:
        k_s, _ = endpoint_orders(space, partitions, 0)
        return TransitionFunction(0, PiecewisePoly(0, (), 1.0, 1.0), k_s, -1)

    j0 = int(partitions.start_break[i])
    j1 = int(partitions.end_break[i - 1])
    if not j0 < j1:
        raise SingularSystemError(f"transition {i} has empty nontrivial range")
    breaks = space.all_breaks
    degs = [int(space.degrees[j]) for j in range(j0, j1)]
    sizes = [d + 1 for d in degs]
    offs = np.concatenate(([0], np.cumsum(sizes)))
    ncoef = int(offs[-1])

    k_s, _ = endpoint_orders(space, partitions, i)
    _, k_t = endpoint_orders(space, partitions, i - 1)
    assert k_s >= 0 and k_t >= 0
    assert k_s + 1 <= sizes[0] and k_t + 1 <= sizes[-1]
    if len(sizes) == 1 and k_s + k_t + 2 != sizes[0]:
        raise SingularSystemError(f"transition {i}: pin count mismatch on single interval")

    pinned = np.zeros(ncoef, dtype=bool)
    values = np.zeros(ncoef)
    pinned[: k_s + 1] = True
    values[offs[-2] + sizes[-1] - 1 - k_t : ncoef] = 1.0
    pinned[offs[-2] + sizes[-1] - 1 - k_t : ncoef] = True

    rows = []
    for jj in range(j0 + 1, j1):
        pL, pR = jj - 1 - j0, jj - j0
        wL = breaks[jj] - breaks[jj - 1]
        wR = breaks[jj + 1] - breaks[jj]
        h_min = min(wL, wR)
        k_here = int(space.continuities[jj - 1])
        conn = space.connection_at(jj)
        left_rows = [_deriv_row(degs[pL], wL, r, "right") for r in range(k_here + 1)]
        for r in range(k_here + 1):
            row = np.zeros(ncoef)
            if conn is None:
                row[offs[pL] : offs[pL + 1]] = left_rows[r]
            else:
                for c in range(r + 1):
                    row[offs[pL] : offs[pL + 1]] += conn.entries[r, c] * left_rows[c]
            row[offs[pR] : offs[pR + 1]] -= _deriv_row(degs[pR], wR, r, "left")
            rows.append(row * h_min**r)

    free = ~pinned
    nfree = int(free.sum())
    if len(rows) != nfree:
        raise SingularSystemError(
            f"transition {i}: {len(rows)} conditions for {nfree} unknowns; "
            "square-system identity violated"
        )
    if nfree:
        A = np.array(rows)
        rhs = -A[:, pinned] @ values[pinned]
        A_free = A[:, free]
        # diagonal equilibration: disparate interval widths and derivative
        # orders make the raw system arbitrarily badly scaled, but not
        # intrinsically ill-conditioned
        row_scale = np.linalg.norm(A_free, axis=1)
        row_scale[row_scale == 0.0] = 1.0
        A_eq = A_free / row_scale[:, None]
        col_scale = np.linalg.norm(A_eq, axis=0)
        col_scale[col_scale == 0.0] = 1.0
        A_eq = A_eq / col_scale
        lu, piv = lu_factor(A_eq)
        diag = np.abs(np.diag(lu))
        if diag.min() < 1e-12 * diag.max():
            raise SingularSystemError(
                f"transition {i}: singular Hermite system "
                f"(condition estimate {np.linalg.cond(A_eq):.3e})"
            )
        values[free] = lu_solve((lu, piv), rhs / row_scale) / col_scale

    pieces = tuple(
        BernsteinPiece(breaks[j0 + p], breaks[j0 + p + 1], values[offs[p] : offs[p + 1]])
        for p in range(len(degs))
    )
    return TransitionFunction(i, PiecewisePoly(j0, pieces, 0.0, 1.0), k_s, k_t)


@dataclass(frozen=True)
class TransitionSet:
    """All transition functions of a space, index 0 being the constant one."""

    space: SplineSpace
    partitions: ExtendedPartitions
    functions: tuple[TransitionFunction, ...]

    def __len__(self):
        return len(self.functions)

    def __getitem__(self, i) -> TransitionFunction:
        return self.functions[i]

    def piece_on(self, i: int, interval: int) -> BernsteinPiece | float:
        """Bernstein piece of function i on a break interval (0.0/1.0 outside)."""
        return self.functions[i].poly.piece_on(interval)

    def sample(self, xs) -> np.ndarray:
        table = PiecewiseTable.from_polys(self.space.all_breaks, [f.poly for f in self.functions])
        return table.evaluate(xs)


def solve_all(space: SplineSpace, partitions: ExtendedPartitions | None = None) -> TransitionSet:
    """Compute all dimension-many transition functions of a space.

    Functions nontrivial on a single interval are fully pinned and need no
    solve; the rest go through solve_transition.
    """
    from .space import extended_partitions

    if partitions is None:
        partitions = extended_partitions(space)
    funcs = tuple(solve_transition(space, partitions, i) for i in range(space.dimension))
    return TransitionSet(space, partitions, funcs)
