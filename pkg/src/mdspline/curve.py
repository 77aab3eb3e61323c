"""Parametric multi-degree spline curves and the refinement operators.

Knot insertion and local degree elevation both express the old transition
functions as two-term convex combinations of the refined ones; the combination
coefficients come from one-sided derivative ratios at the start knots and give
the corner-cutting rules for the control points.  All operations return new
immutable curves.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .basis import BSplineBasis, basis_from_transitions
from .space import ConnectionMatrix, ExtendedPartitions, SplineSpace, extended_partitions
from .transitions import TransitionSet, endpoint_orders, solve_all


class OperatorError(ValueError):
    """An operator precondition failed (bad location, continuity underflow, ...)."""


@dataclass(frozen=True)
class MDCurve:
    space: SplineSpace
    partitions: ExtendedPartitions
    transitions: TransitionSet
    basis: BSplineBasis
    control_points: np.ndarray  # (K, dim)

    @property
    def dim(self) -> int:
        return self.control_points.shape[1]

    def evaluate(self, x: float) -> np.ndarray:
        ell, vals = self.basis.eval_at(x)
        d = int(self.space.degrees[self.space.interval_of(x)])
        return vals @ self.control_points[ell - d : ell + 1]

    def sample(self, xs) -> np.ndarray:
        return self.basis.sample(xs) @ self.control_points

    def with_control_points(self, points) -> "MDCurve":
        return replace(self, control_points=_check_points(points, self.space.dimension))


def _check_points(points, expected: int) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] != expected:
        raise OperatorError(f"need {expected} control points, got {pts.shape[0]}")
    if pts.shape[1] not in (1, 2, 3):
        raise OperatorError("control points must be 1-, 2- or 3-dimensional")
    pts = pts.copy()
    pts.setflags(write=False)
    return pts


def make_curve(space: SplineSpace, control_points) -> MDCurve:
    ts = solve_all(space)
    return MDCurve(
        space,
        ts.partitions,
        ts,
        basis_from_transitions(ts),
        _check_points(control_points, space.dimension),
    )


@dataclass(frozen=True)
class RefinementData:
    """One refinement step plus everything the property tests want to see."""

    curve: MDCurve  # the refined curve
    alphas: np.ndarray  # length K+1, alphas[K] == 0
    betas: np.ndarray  # independent computation; alphas + betas == 1
    ell: int  # last start-knot index at the refinement site
    interval_degree: int


def _combination_coefficients(
    old: MDCurve, new_ts: TransitionSet, ell: int, d_j: int, zero_from: int
) -> tuple[np.ndarray, np.ndarray]:
    """Two-term coefficients alpha_i (and the independent beta_i) for a refinement.

    alpha_i is 1 up to index ell-d_j, then the ratio of the one-sided
    derivatives of old and refined transition i at its start knot (order
    k_i^s+1 of the old space), then 0 from zero_from on.
    """
    space, partitions = old.space, old.partitions
    K = space.dimension
    alphas = np.zeros(K + 1)
    betas = np.ones(K + 1)
    alphas[: max(ell - d_j + 1, 0)] = 1.0
    betas[: max(ell - d_j + 1, 0)] = 0.0
    for i in range(max(ell - d_j + 1, 0), min(zero_from, K)):
        k_s, _ = endpoint_orders(space, partitions, i)
        num = old.transitions[i].start_derivative(k_s + 1)
        den = new_ts[i].start_derivative(k_s + 1)
        if den == 0.0:
            raise OperatorError(f"vanishing refined derivative for function {i}")
        alphas[i] = num / den
        if i >= 1:
            _, k_t = endpoint_orders(space, partitions, i - 1)
            bnum = old.transitions[i].end_derivative(k_t + 1)
            bden = new_ts[i + 1].end_derivative(k_t + 1)
            if bden == 0.0:
                raise OperatorError(f"vanishing refined end derivative for function {i}")
            betas[i] = bnum / bden
        else:
            betas[i] = 1.0 - alphas[i]
    return alphas, betas


def _refined_points(old_points: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    K = old_points.shape[0]
    assert alphas[0] == 1.0 and alphas[K] == 0.0
    pts = np.empty((K + 1, old_points.shape[1]))
    pts[0] = old_points[0]
    for i in range(1, K):
        pts[i] = alphas[i] * old_points[i] + (1.0 - alphas[i]) * old_points[i - 1]
    pts[K] = old_points[K - 1]
    return pts


def _space_with_inserted_break(space: SplineSpace, x_new: float) -> SplineSpace:
    a, b = space.domain
    if not a < x_new < b:
        raise OperatorError(f"insertion point {x_new} outside open domain ({a}, {b})")
    hits = np.nonzero(space.breakpoints == x_new)[0]
    d, k = space.degrees, space.continuities
    if hits.size:
        p = int(hits[0])
        if k[p] == 0:
            raise OperatorError(
                f"continuity at {x_new} is already C^0; cannot insert another knot"
            )
        k_new = k.copy()
        k_new[p] -= 1
        conns = None
        if space.connections is not None:
            conns = list(space.connections)
            conns[p] = ConnectionMatrix(conns[p].entries[: k_new[p] + 1, : k_new[p] + 1])
        return SplineSpace(space.domain, space.breakpoints, d, k_new, conns)
    j = space.interval_of(x_new)
    d_new = np.insert(d, j, d[j])
    k_new = np.insert(k, j, d[j] - 1)
    x = np.sort(np.append(space.breakpoints, x_new))
    conns = None
    if space.connections is not None:
        conns = list(space.connections)
        conns.insert(j, ConnectionMatrix.identity(int(d[j])))
    return SplineSpace(space.domain, x, d_new, k_new, conns)


def insertion_data(curve: MDCurve, x_new: float) -> RefinementData:
    """Insert one knot at x_new; a new interior point splits its interval with
    continuity d_j-1, an existing break-point loses one continuity order."""
    refined = _space_with_inserted_break(curve.space, float(x_new))
    new_parts = extended_partitions(refined)
    new_ts = solve_all(refined, new_parts)
    ell = curve.partitions.locate_start(x_new)
    d_j = int(curve.space.degrees[curve.space.interval_of(x_new)])
    r = int(np.count_nonzero(new_parts.starts == x_new))
    alphas, betas = _combination_coefficients(curve, new_ts, ell, d_j, ell - r + 2)
    new_curve = MDCurve(
        refined,
        new_parts,
        new_ts,
        basis_from_transitions(new_ts),
        _refined_points(curve.control_points, alphas),
    )
    return RefinementData(new_curve, alphas, betas, ell, d_j)


def insert_knot(curve: MDCurve, x_new: float) -> MDCurve:
    return insertion_data(curve, x_new).curve


def elevation_data(curve: MDCurve, interval: int) -> RefinementData:
    """Raise the degree of one break interval by one, keeping all continuities."""
    space = curve.space
    if not 0 <= interval < space.num_intervals:
        raise OperatorError(f"interval index {interval} outside 0..{space.num_intervals - 1}")
    d_new = space.degrees.copy()
    d_new[interval] += 1
    refined = SplineSpace(
        space.domain, space.breakpoints, d_new, space.continuities, space.connections
    )
    new_parts = extended_partitions(refined)
    new_ts = solve_all(refined, new_parts)
    ell = curve.partitions.locate_start(space.all_breaks[interval])
    d_j = int(space.degrees[interval])
    alphas, betas = _combination_coefficients(curve, new_ts, ell, d_j, ell + 1)
    new_curve = MDCurve(
        refined,
        new_parts,
        new_ts,
        basis_from_transitions(new_ts),
        _refined_points(curve.control_points, alphas),
    )
    return RefinementData(new_curve, alphas, betas, ell, d_j)


def elevate_degree(curve: MDCurve, interval: int, times: int = 1) -> MDCurve:
    if times < 0:
        raise OperatorError("elevation count must be >= 0")
    for _ in range(times):
        curve = elevation_data(curve, interval).curve
    return curve


def to_conventional(curve: MDCurve) -> MDCurve:
    """Elevate every interval (left to right, one step at a time) up to the
    maximum degree, turning the curve into a conventional uniform-degree spline."""
    target = curve.space.max_degree
    for j in range(curve.space.num_intervals):
        while curve.space.degrees[j] < target:
            curve = elevate_degree(curve, j)
    return curve


@dataclass(frozen=True)
class BezierSegment:
    lo: float
    hi: float
    degree: int
    points: np.ndarray  # (degree+1, dim)


def to_bezier(curve: MDCurve) -> list[BezierSegment]:
    """Per-interval Bernstein control polygons of the curve.

    Segment j's points are the control-point combinations weighted by the
    basis functions' local Bernstein coefficient rows.
    """
    space, basis = curve.space, curve.basis
    segments = []
    for j in range(space.num_intervals):
        d = int(space.degrees[j])
        ell = basis.first_active(j)
        pts = np.zeros((d + 1, curve.dim))
        for i in range(ell - d, ell + 1):
            piece = basis.functions[i].piece_on(j)
            coeffs = piece if isinstance(piece, float) else piece.coeffs
            pts += np.multiply.outer(np.broadcast_to(coeffs, d + 1), curve.control_points[i])
        segments.append(
            BezierSegment(float(space.all_breaks[j]), float(space.all_breaks[j + 1]), d, pts)
        )
    return segments
