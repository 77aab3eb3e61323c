"""Batch evaluation kernels for piecewise-Bernstein function tables.

Sampling many functions at many points (basis plots, curve polylines, CSV
dumps) is the hot loop of this package.  The compiled path uses numba; setting
MDSPLINE_PURE_NUMPY=1 selects a vectorized pure-numpy fallback that performs
the identical de Casteljau arithmetic.  benchmarks/bench_eval.py compares the
two.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency, but stay importable
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap


def use_numba() -> bool:
    if not HAVE_NUMBA:
        return False
    return os.environ.get("MDSPLINE_PURE_NUMPY", "0").lower() not in ("1", "true", "yes")


def locate_intervals(breaks: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Half-open interval indices for each x; the final interval is closed at b."""
    j = np.searchsorted(breaks, xs, side="right") - 1
    return np.clip(j, 0, len(breaks) - 2)


@njit(cache=True)
def _eval_numba(breaks, first, counts, pstart, piece_off, coeffs, left_fill, right_fill, xs, out):
    nfun = first.shape[0]
    nint = breaks.shape[0] - 1
    maxlen = 1
    for p in range(piece_off.shape[0] - 1):
        if piece_off[p + 1] - piece_off[p] > maxlen:
            maxlen = piece_off[p + 1] - piece_off[p]
    buf = np.empty(maxlen)
    for n in range(xs.shape[0]):
        x = xs[n]
        j = np.searchsorted(breaks, x, side="right") - 1
        if j < 0:
            j = 0
        elif j > nint - 1:
            j = nint - 1
        t = (x - breaks[j]) / (breaks[j + 1] - breaks[j])
        for f in range(nfun):
            pj = j - first[f]
            if pj < 0:
                out[n, f] = left_fill[f]
            elif pj >= counts[f]:
                out[n, f] = right_fill[f]
            else:
                c0 = piece_off[pstart[f] + pj]
                c1 = piece_off[pstart[f] + pj + 1]
                d = c1 - c0 - 1
                for h in range(d + 1):
                    buf[h] = coeffs[c0 + h]
                for r in range(d):
                    for h in range(d - r):
                        buf[h] = (1.0 - t) * buf[h] + t * buf[h + 1]
                out[n, f] = buf[0]


def _eval_numpy(breaks, first, counts, pstart, piece_off, coeffs, left_fill, right_fill, xs, out):
    j = locate_intervals(breaks, xs)
    t = (xs - breaks[j]) / (breaks[j + 1] - breaks[j])
    for f in range(first.shape[0]):
        pj = j - first[f]
        out[:, f] = np.where(pj < 0, left_fill[f], right_fill[f])
        for p in range(counts[f]):
            mask = pj == p
            if not mask.any():
                continue
            c0, c1 = piece_off[pstart[f] + p], piece_off[pstart[f] + p + 1]
            tm = t[mask]
            b = np.repeat(coeffs[c0:c1, None], tm.size, axis=1)
            for _ in range(c1 - c0 - 1):
                b = (1.0 - tm) * b[:-1] + tm * b[1:]
            out[mask, f] = b[0]


@dataclass
class PiecewiseTable:
    """Flattened coefficient table for a family of piecewise functions.

    All functions share the global break sequence; function f owns counts[f]
    consecutive pieces starting at break interval first[f], with constant
    fill values outside.
    """

    breaks: np.ndarray
    first: np.ndarray
    counts: np.ndarray
    pstart: np.ndarray
    piece_off: np.ndarray
    coeffs: np.ndarray
    left_fill: np.ndarray
    right_fill: np.ndarray

    @classmethod
    def from_polys(cls, breaks, polys) -> "PiecewiseTable":
        first = np.array([p.first_interval for p in polys], dtype=np.int64)
        counts = np.array([len(p.pieces) for p in polys], dtype=np.int64)
        pstart = np.concatenate(([0], np.cumsum(counts)))
        sizes = [len(piece.coeffs) for p in polys for piece in p.pieces]
        piece_off = np.concatenate(([0], np.cumsum(np.array(sizes, dtype=np.int64))))
        coeffs = (
            np.concatenate([piece.coeffs for p in polys for piece in p.pieces])
            if sizes
            else np.empty(0)
        )
        return cls(
            breaks=np.asarray(breaks, dtype=float),
            first=first,
            counts=counts,
            pstart=pstart,
            piece_off=piece_off,
            coeffs=coeffs,
            left_fill=np.array([p.left_value for p in polys], dtype=float),
            right_fill=np.array([p.right_value for p in polys], dtype=float),
        )

    def evaluate(self, xs, jit: bool | None = None) -> np.ndarray:
        """Values of every function at every x, shape (len(xs), nfun)."""
        xs = np.ascontiguousarray(xs, dtype=float)
        out = np.empty((xs.size, self.first.size))
        impl = _eval_numba if (use_numba() if jit is None else jit) else _eval_numpy
        impl(
            self.breaks,
            self.first,
            self.counts,
            self.pstart,
            self.piece_off,
            self.coeffs,
            self.left_fill,
            self.right_fill,
            xs,
            out,
        )
        return out
