"""Discrete-time Skorokhod problem on an interval and on a box.

Given a sampled input path w, the maps below produce the decomposition
xi = w + phi where xi stays in the closed domain and the regulator phi
moves only while xi sits on the boundary, pushing inward.  On the
half-line the map has the running-minimum closed form
xi(t) = w(t) - min(0, min_{s<=t} w(s)); on a box the projection scheme
clamps each free step to the box and books the clamp displacement into
the regulator, which is the exact discrete realization of normal
reflection on a convex box (at a corner both coordinates clamp
independently, so the booked direction lies in the normal cone).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import DomainBox

__all__ = [
    "SampledPath",
    "ReflectedPair",
    "skorokhod_map_1d",
    "skorokhod_map_box",
    "check_complementarity",
    "regulator_total_variation",
]


@dataclass(frozen=True)
class SampledPath:
    """A path on a strictly increasing time grid starting at 0.

    values holds one scalar per time point (shape (T,)) or one d-vector
    per time point (shape (T, d)).
    """

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or times.shape[0] == 0:
            raise ValueError("times must be a nonempty 1-D grid")
        if times[0] != 0.0:
            raise ValueError("time grid must start at 0")
        if times.shape[0] > 1 and not np.all(np.diff(times) > 0):
            raise ValueError("time grid must be strictly increasing")
        if values.ndim not in (1, 2) or values.shape[0] != times.shape[0]:
            raise ValueError("values must supply one entry per time point")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def is_scalar(self) -> bool:
        return self.values.ndim == 1

    @property
    def dim(self) -> int:
        return 1 if self.is_scalar else self.values.shape[1]


@dataclass(frozen=True)
class ReflectedPair:
    """Reflected path, its regulator on the same grid, and the regulator's
    per-coordinate total variation (tv >= |final regulator value|)."""

    reflected: SampledPath
    regulator: SampledPath
    tv: np.ndarray

    def __post_init__(self):
        if not np.array_equal(self.reflected.times, self.regulator.times):
            raise ValueError("reflected and regulator must share one grid")
        reg0 = np.atleast_1d(self.regulator.values[0])
        if np.any(reg0 != 0.0):
            raise ValueError("regulator must start at zero")
        tv = np.atleast_1d(np.asarray(self.tv, dtype=float))
        final = np.abs(np.atleast_1d(self.regulator.values[-1]))
        # slack covers float summation of the increments only
        if np.any(tv < final * (1.0 - 1e-12) - 1e-300):
            raise ValueError("total variation cannot be below |final regulator value|")
        tv.setflags(write=False)
        object.__setattr__(self, "tv", tv)


def skorokhod_map_1d(w: SampledPath) -> ReflectedPair:
    """Reflect a scalar path at 0 via the running-minimum closed form.

    regulator(t) = -min(0, min_{s<=t} w(s)) is nondecreasing, and
    reflected = w + regulator is nonnegative on the whole grid.
    Requires w(0) >= 0.
    """
    if not w.is_scalar:
        raise ValueError("the interval map takes a scalar path")
    if w.values[0] < 0.0:
        raise ValueError("w(0) must be nonnegative (inside the domain)")
    regulator = -np.minimum(0.0, np.minimum.accumulate(w.values))
    reflected = w.values + regulator
    return ReflectedPair(
        reflected=SampledPath(w.times, reflected),
        regulator=SampledPath(w.times, regulator),
        tv=regulator_total_variation(SampledPath(w.times, regulator)),
    )


def skorokhod_map_box(w: SampledPath, box: DomainBox) -> ReflectedPair:
    """Reflect a vector path into a box by per-step projection.

    Each step applies the free increment of w to the current reflected
    point (carried as w_k plus accumulated regulator), clamps the result
    to the box, and books the displacement of the clamp into the
    regulator.  Increments are nonzero only in coordinates whose clamp
    was active and always point inward.  Requires w(0) in the closed box.
    """
    vals = w.values if not w.is_scalar else w.values[:, None]
    if vals.shape[1] != box.dim:
        raise ValueError(f"path dimension {vals.shape[1]} != box dimension {box.dim}")
    if not box.contains(vals[0]):
        raise ValueError("w(0) must lie in the closed box")
    n = vals.shape[0]
    lo, hi = box.lower, box.upper
    xi = np.empty_like(vals)
    reg = np.empty_like(vals)
    xi[0] = vals[0]
    reg[0] = 0.0
    acc = np.zeros(box.dim)
    for k in range(1, n):
        free = vals[k] + acc
        clamped = np.minimum(np.maximum(free, lo), hi)
        acc = acc + (clamped - free)
        xi[k] = clamped
        reg[k] = acc
    if w.is_scalar:
        xi = xi[:, 0]
        reg = reg[:, 0]
    regulator = SampledPath(w.times, reg)
    return ReflectedPair(
        reflected=SampledPath(w.times, xi),
        regulator=regulator,
        tv=np.atleast_1d(regulator_total_variation(regulator)),
    )


def check_complementarity(pair: ReflectedPair, box: DomainBox, boundary_tol: float = 1e-12) -> bool:
    """True iff the regulator moves only at the boundary, pushing inward.

    Every step with a nonzero regulator increment in coordinate k must
    leave the post-step reflected value within boundary_tol of the face
    the push came from: a positive increment belongs to the lower face,
    a negative one to the upper face.
    """
    if not np.array_equal(pair.reflected.times, pair.regulator.times):
        raise ValueError("reflected and regulator grids differ")
    xi = np.atleast_2d(pair.reflected.values.T).T
    reg = np.atleast_2d(pair.regulator.values.T).T
    if xi.shape != reg.shape:
        raise ValueError("reflected and regulator shapes differ")
    inc = np.diff(reg, axis=0)
    post = xi[1:]
    up = inc > 0.0
    down = inc < 0.0
    ok_up = np.abs(post - box.lower) <= boundary_tol
    ok_down = np.abs(box.upper - post) <= boundary_tol
    return bool(np.all(ok_up[up]) and np.all(ok_down[down]))


def regulator_total_variation(regulator: SampledPath):
    """Total variation of the regulator over its grid, per coordinate.

    Sum of absolute increments; equals |final - initial| for a monotone
    regulator.  Scalar paths yield a float, vector paths a (d,) array.
    """
    v = regulator.values
    if v.shape[0] < 2:
        return 0.0 if regulator.is_scalar else np.zeros(regulator.dim)
    tv = np.sum(np.abs(np.diff(v, axis=0)), axis=0)
    return float(tv) if regulator.is_scalar else tv
