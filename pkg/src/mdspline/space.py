"""Multi-degree spline spaces, their validation and extended knot partitions.

A space is a partition of [a, b] into intervals carrying individual polynomial
degrees, a continuity order at every interior break-point, and optionally one
lower-triangular connection matrix per break-point for geometric continuity.
Indexing is 0-based throughout: break-points live in all_breaks[0..q+1] with
all_breaks[0]=a and all_breaks[q+1]=b, intervals and degrees are 0..q.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import locate_intervals


class InvalidSpaceError(ValueError):
    """A candidate space violates a structural constraint."""


class ConnectionMatrix:
    """Lower-triangular matrix tying left and right derivative vectors at a break-point.

    Must have strictly positive diagonal and first row and column (1, 0, ..., 0),
    which preserves value continuity and keeps constants in the space.
    """

    def __init__(self, entries):
        m = np.asarray(entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidSpaceError(f"connection matrix must be square, got shape {m.shape}")
        n = m.shape[0]
        if np.any(np.triu(m, 1) != 0.0):
            raise InvalidSpaceError("connection matrix must be lower triangular")
        if np.any(np.diag(m) <= 0.0):
            raise InvalidSpaceError("connection matrix needs strictly positive diagonal")
        if m[0, 0] != 1.0 or (n > 1 and (np.any(m[0, 1:] != 0.0) or np.any(m[1:, 0] != 0.0))):
            raise InvalidSpaceError("connection matrix first row and column must be (1, 0, ..., 0)")
        m = m.copy()
        m.setflags(write=False)
        self.entries = m

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, order: int) -> "ConnectionMatrix":
        return cls(np.eye(order))

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.entries, np.eye(self.order)))

    def __eq__(self, other):
        return isinstance(other, ConnectionMatrix) and np.array_equal(self.entries, other.entries)


class SplineSpace:
    """A validated multi-degree spline space; immutable after construction.

    Raises InvalidSpaceError for non-increasing break-points, degrees < 1,
    continuities outside the admissible range, or connection matrices of the
    wrong order.
    """

    def __init__(self, domain, breakpoints, degrees, continuities, connections=None):
        a, b = (float(domain[0]), float(domain[1]))
        x = np.asarray(breakpoints, dtype=float)
        d = np.asarray(degrees, dtype=int)
        k = np.asarray(continuities, dtype=int)
        if not np.all(np.isfinite([a, b])) or not np.all(np.isfinite(x)):
            raise InvalidSpaceError("domain and break-points must be finite")
        if not a < b:
            raise InvalidSpaceError(f"empty domain [{a}, {b}]")
        q = x.size
        if d.size != q + 1:
            raise InvalidSpaceError(f"{q} break-points require {q + 1} degrees, got {d.size}")
        if k.size != q:
            raise InvalidSpaceError(f"{q} break-points require {q} continuities, got {k.size}")
        all_breaks = np.concatenate(([a], x, [b]))
        if np.any(np.diff(all_breaks) <= 0.0):
            raise InvalidSpaceError("break-points must be strictly increasing inside (a, b)")
        if np.any(d < 1):
            raise InvalidSpaceError("every interval degree must be >= 1")
        for i in range(q):
            kmax = d[i + 1] - 1 if d[i] == d[i + 1] else min(d[i], d[i + 1])
            if not 0 <= k[i] <= kmax:
                raise InvalidSpaceError(
                    f"continuity {k[i]} at break-point x_{i + 1}={x[i]} outside 0..{kmax} "
                    f"for degrees ({d[i]}, {d[i + 1]})"
                )
        if connections is not None:
            connections = tuple(
                m if isinstance(m, ConnectionMatrix) else ConnectionMatrix(m) for m in connections
            )
            if len(connections) != q:
                raise InvalidSpaceError(f"need {q} connection matrices, got {len(connections)}")
            for i, m in enumerate(connections):
                if m.order != k[i] + 1:
                    raise InvalidSpaceError(
                        f"connection matrix at x_{i + 1} has order {m.order}, expected {k[i] + 1}"
                    )

        dim_left = int(d[0] + 1 + np.sum(d[1:] - k))
        dim_right = int(d[-1] + 1 + np.sum(d[:-1] - k))
        assert dim_left == dim_right
        for arr in (x, d, k, all_breaks):
            arr.setflags(write=False)

        self.domain = (a, b)
        self.breakpoints = x
        self.degrees = d
        self.continuities = k
        self.connections = connections
        self.all_breaks = all_breaks
        self.dimension = dim_left
        self.max_degree = int(d.max())

    @property
    def num_intervals(self) -> int:
        return len(self.degrees)

    def interval_of(self, x: float) -> int:
        """Break interval index containing x; half-open, final interval closed at b."""
        a, b = self.domain
        if not a <= x <= b:
            raise ValueError(f"{x} outside domain [{a}, {b}]")
        return int(locate_intervals(self.all_breaks, np.array([x]))[0])

    def connection_at(self, bp_index: int) -> ConnectionMatrix | None:
        """Connection matrix at interior break-point bp_index (1..q), None if parametric."""
        if self.connections is None:
            return None
        m = self.connections[bp_index - 1]
        return None if m.is_identity() else m

    def zero_bound(self, p: int, r: int) -> int:
        """Largest possible zero count of a nonzero spline on [x_p, x_r]."""
        if not 0 <= p < r <= self.num_intervals:
            raise ValueError(f"break-point index range ({p}, {r}) invalid")
        d, k = self.degrees, self.continuities
        return int(d[p] + np.sum(d[p + 1 : r] - k[p : r - 1]))

    def with_connections(self, connections) -> "SplineSpace":
        return SplineSpace(
            self.domain, self.breakpoints, self.degrees, self.continuities, connections
        )

    def __repr__(self):
        return (
            f"SplineSpace(domain={self.domain}, breakpoints={self.breakpoints.tolist()}, "
            f"degrees={self.degrees.tolist()}, continuities={self.continuities.tolist()}, "
            f"K={self.dimension})"
        )


# alias documenting that construction is the validation entry point
validate_space = SplineSpace


@dataclass(frozen=True)
class ExtendedPartitions:
    """Left/right extended knot partitions of a space.

    starts[i] is where basis function i begins, ends[i] where it terminates;
    start_break/end_break map each knot to its break-point index in all_breaks.
    Both sequences are clamped: starts opens with d_0+1 copies of a, ends
    closes with d_q+1 copies of b.
    """

    starts: np.ndarray
    ends: np.ndarray
    start_break: np.ndarray
    end_break: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.starts)

    def start_run(self, i: int) -> int:
        """max j >= 0 with starts[i+j] == starts[i]."""
        j = 0
        while i + j + 1 < len(self.starts) and self.starts[i + j + 1] == self.starts[i]:
            j += 1
        return j

    def end_run(self, i: int) -> int:
        """max j >= 0 with ends[i-j] == ends[i]."""
        j = 0
        while i - j - 1 >= 0 and self.ends[i - j - 1] == self.ends[i]:
            j += 1
        return j

    def locate_start(self, x: float) -> int:
        """Largest index l with starts[l] <= x (callers guarantee x >= a)."""
        return int(np.searchsorted(self.starts, x, side="right")) - 1


def extended_partitions(space: SplineSpace) -> ExtendedPartitions:
    """Build the clamped left/right extended partitions of a validated space.

    Interior multiplicities: break-point x_i contributes d_i - k_i start knots
    and d_{i-1} - k_i end knots; a zero multiplicity contributes no knot.
    """
    d, k, q = space.degrees, space.continuities, len(space.breakpoints)
    starts, sb = [space.domain[0]] * (d[0] + 1), [0] * (d[0] + 1)
    ends, eb = [], []
    for i in range(1, q + 1):
        starts += [space.breakpoints[i - 1]] * (d[i] - k[i - 1])
        sb += [i] * (d[i] - k[i - 1])
        ends += [space.breakpoints[i - 1]] * (d[i - 1] - k[i - 1])
        eb += [i] * (d[i - 1] - k[i - 1])
    ends += [space.domain[1]] * (d[q] + 1)
    eb += [q + 1] * (d[q] + 1)
    assert len(starts) == len(ends) == space.dimension
    return ExtendedPartitions(
        starts=np.array(starts),
        ends=np.array(ends),
        start_break=np.array(sb, dtype=int),
        end_break=np.array(eb, dtype=int),
    )
