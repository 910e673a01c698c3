"""Decreasing-shape vector transforms.

Two primitives used by every constrained estimator in the package:

* :func:`isotonic_decreasing` computes the least-squares projection of a
  vector onto the cone of nonincreasing vectors with the stack-based
  pool-adjacent-violators scan, returning both the fitted vector and its
  partition into constant blocks.
* :func:`rearrange_decreasing` sorts a vector into nonincreasing order.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInputError


@dataclass(frozen=True, eq=False)
class BlockPartition:
    """Constant regions of a nonincreasing fit.

    ``boundaries[r]`` is the last index of block ``r`` (the final entry is
    ``len(v) - 1``); ``levels[r]`` is the fitted value shared by block ``r``.
    Levels are strictly decreasing across blocks, and each level equals the
    mean of the input over its block.
    """

    boundaries: np.ndarray
    levels: np.ndarray

    def __len__(self) -> int:
        return len(self.boundaries)


def isotonic_decreasing(v) -> tuple[np.ndarray, BlockPartition]:
    """Project ``v`` onto the cone of nonincreasing vectors (least squares).

    Parameters
    ----------
    v : array-like of shape (D,)
        Finite real entries.

    Returns
    -------
    fitted : ndarray of shape (D,)
        The unique minimizer of ``sum((v - f)**2)`` over nonincreasing ``f``.
        Constant at the block mean on each block; preserves ``sum(v)`` and
        stays within ``[min(v), max(v)]``.
    blocks : BlockPartition
        The maximal constant regions of the fit.
    """
    v = np.ascontiguousarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError("input must be one-dimensional")
    if v.size == 0:
        raise EmptyInputError("cannot project an empty vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("entries must be finite")

    # Stack of blocks as (start index, sum, count). A new element opens a
    # block; adjacent blocks pool while the later mean is >= the earlier one
    # (merging on ties keeps levels strictly decreasing).
    starts = []
    sums = []
    counts = []
    for j in range(v.size):
        starts.append(j)
        sums.append(float(v[j]))
        counts.append(1)
        while len(sums) > 1 and sums[-1] * counts[-2] >= sums[-2] * counts[-1]:
            s = sums.pop()
            c = counts.pop()
            starts.pop()
            sums[-1] += s
            counts[-1] += c

    start_idx = np.asarray(starts, dtype=np.intp)
    widths = np.diff(np.append(start_idx, v.size))
    # Recompute block means with pairwise summation; the running sums above
    # only decide the partition.
    levels = np.add.reduceat(v, start_idx) / widths
    fitted = np.repeat(levels, widths)
    boundaries = np.append(start_idx[1:], v.size) - 1
    return fitted, BlockPartition(boundaries=boundaries, levels=levels)


def rearrange_decreasing(v) -> np.ndarray:
    """Return the values of ``v`` sorted into nonincreasing order.

    Ties keep the lower original index first; since equal values are
    indistinguishable in the output this only fixes the implied permutation.
    """
    v = np.ascontiguousarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError("input must be one-dimensional")
    if v.size == 0:
        raise EmptyInputError("cannot rearrange an empty vector")
    return np.sort(v)[::-1].copy()
