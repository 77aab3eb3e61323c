"""Bernstein-basis arithmetic on single intervals and piecewise tables built from it.

Every polynomial piece in this package is stored as Bernstein coefficients over
its own break-point interval; there is no monomial form anywhere.  All
operations are pure and return new objects.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np


def _as_coeffs(values) -> np.ndarray:
    c = np.asarray(values, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("coefficients must be a nonempty 1-d sequence")
    c = c.copy()
    c.setflags(write=False)
    return c


@dataclass(frozen=True)
class BernsteinPiece:
    """One polynomial piece: degree-d Bernstein coefficients over [lo, hi]."""

    lo: float
    hi: float
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))
        if not self.hi > self.lo:
            raise ValueError(f"interval [{self.lo}, {self.hi}] has nonpositive width")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __call__(self, x: float) -> float:
        """Evaluate at x in [lo, hi] by the de Casteljau scheme."""
        if not (self.lo <= x <= self.hi):
            raise ValueError(f"{x} outside piece interval [{self.lo}, {self.hi}]")
        t = (x - self.lo) / self.width
        b = np.array(self.coeffs)
        for _ in range(self.degree):
            b = (1.0 - t) * b[:-1] + t * b[1:]
        return float(b[0])

    def derivative(self) -> "BernsteinPiece":
        """Differentiate; the degree drops by one (degree 0 maps to the zero piece)."""
        d = self.degree
        if d == 0:
            return BernsteinPiece(self.lo, self.hi, [0.0])
        c = (d / self.width) * np.diff(self.coeffs)
        return BernsteinPiece(self.lo, self.hi, c)

    def antiderivative(self, lower_value: float = 0.0) -> "BernsteinPiece":
        """Running-sum antiderivative with value lower_value at lo; degree rises by one."""
        d = self.degree
        c = np.empty(d + 2)
        c[0] = lower_value
        np.cumsum(self.coeffs * (self.width / (d + 1)), out=c[1:])
        c[1:] += lower_value
        return BernsteinPiece(self.lo, self.hi, c)

    def integral(self) -> float:
        """Exact integral over [lo, hi]: h/(d+1) times the coefficient sum."""
        return self.width / (self.degree + 1) * float(np.sum(self.coeffs))

    def endpoint_derivative(self, side: str, order: int) -> float:
        """One-sided derivative of the given order at lo ('left') or hi ('right').

        Uses the forward-difference formula on the coefficient row; order must
        not exceed the degree.
        """
        d, r = self.degree, order
        if not 0 <= r <= d:
            raise ValueError(f"derivative order {r} outside 0..{d}")
        factor = (math.factorial(d) // math.factorial(d - r)) / self.width**r
        diffs = np.diff(self.coeffs, r) if r else np.array(self.coeffs)
        if side == "left":
            return factor * float(diffs[0])
        if side == "right":
            return factor * float(diffs[-1])
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")

    def elevate_once(self) -> "BernsteinPiece":
        """Rewrite the same polynomial with degree d+1 coefficients."""
        d = self.degree
        c = np.empty(d + 2)
        w = np.arange(1, d + 1) / (d + 1)
        c[0] = self.coeffs[0]
        c[-1] = self.coeffs[-1]
        c[1:-1] = w * self.coeffs[:-1] + (1.0 - w) * self.coeffs[1:]
        return BernsteinPiece(self.lo, self.hi, c)

    def elevate_to(self, degree: int) -> "BernsteinPiece":
        piece = self
        while piece.degree < degree:
            piece = piece.elevate_once()
        if piece.degree != degree:
            raise ValueError(f"cannot lower degree {self.degree} to {degree}")
        return piece

    def multiply(self, other: "BernsteinPiece") -> "BernsteinPiece":
        """Exact product of two pieces over the same interval (degrees add)."""
        if (self.lo, self.hi) != (other.lo, other.hi):
            raise ValueError("pieces live on different intervals")
        p, q = self.degree, other.degree
        out = np.zeros(p + q + 1)
        for h in range(p + 1):
            wh = math.comb(p, h) * self.coeffs[h]
            for k in range(q + 1):
                out[h + k] += wh * math.comb(q, k) * other.coeffs[k]
        out /= [math.comb(p + q, c) for c in range(p + q + 1)]
        return BernsteinPiece(self.lo, self.hi, out)

    def plus(self, other: "BernsteinPiece") -> "BernsteinPiece":
        d = max(self.degree, other.degree)
        return BernsteinPiece(
            self.lo, self.hi, self.elevate_to(d).coeffs + other.elevate_to(d).coeffs
        )

    def minus(self, other: "BernsteinPiece") -> "BernsteinPiece":
        d = max(self.degree, other.degree)
        return BernsteinPiece(
            self.lo, self.hi, self.elevate_to(d).coeffs - other.elevate_to(d).coeffs
        )

    def scaled(self, a: float) -> "BernsteinPiece":
        return BernsteinPiece(self.lo, self.hi, a * self.coeffs)


def constant_piece(lo: float, hi: float, value: float, degree: int = 0) -> BernsteinPiece:
    return BernsteinPiece(lo, hi, np.full(degree + 1, float(value)))


@dataclass(frozen=True)
class PiecewisePoly:
    """A function given by Bernstein pieces on consecutive break-point intervals.

    Left of the first piece the function has the constant value left_value,
    right of the last piece right_value; pieces are half-open [lo, hi) except
    that the final piece is closed at its right end, so sampling the domain
    endpoint lands on a piece.
    """

    first_interval: int
    pieces: tuple[BernsteinPiece, ...]
    left_value: float = 0.0
    right_value: float = 0.0

    @property
    def last_interval(self) -> int:
        return self.first_interval + len(self.pieces) - 1

    def piece_on(self, interval: int) -> BernsteinPiece | float:
        """The piece on a global break interval, or the constant fill value."""
        k = interval - self.first_interval
        if k < 0:
            return self.left_value
        if k >= len(self.pieces):
            return self.right_value
        return self.pieces[k]

    def value(self, x: float) -> float:
        if not self.pieces:
            return self.right_value
        lows = [p.lo for p in self.pieces]
        if x < lows[0]:
            return self.left_value
        if x >= self.pieces[-1].hi:
            return self.pieces[-1](x) if x == self.pieces[-1].hi else self.right_value
        return self.pieces[bisect_right(lows, x) - 1](x)

    def derivative(self, order: int = 1) -> "PiecewisePoly":
        pieces = self.pieces
        for _ in range(order):
            pieces = tuple(p.derivative() for p in pieces)
        fills = (0.0, 0.0) if order else (self.left_value, self.right_value)
        return PiecewisePoly(self.first_interval, pieces, *fills)
