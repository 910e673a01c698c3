"""Point estimators of a discrete probability mass function.

Five estimators of the underlying pmf from frequency data: the empirical
relative frequencies, their decreasing rearrangement, their isotonic
projection (the monotone MLE), the fixed-shrinkage minimax combination
with the uniform vector, and the stacked estimator

    estimate = beta * shape + (1 - beta) * empirical

whose mixture weight ``beta`` minimizes a leave-one-out least-squares
cross-validation criterion and is available in closed form from two
scalars ``a_n`` and ``b_n`` (see :func:`cv_beta`).

The leave-one-out machinery has a definitional implementation
(:func:`loo_vectors`, one full refit per observed support point) and a
fast one (:func:`loo_vectors_fast`) that produces identical values in
O(D log D) instead of O(D^2).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientSampleError
from .models import FrequencyData, Pmf
from .shape import isotonic_decreasing, rearrange_decreasing

REARRANGEMENT = "rearrangement"
GRENANDER = "grenander"
KINDS = (REARRANGEMENT, GRENANDER)

#: Below this, the squared distance between shape and base is treated as zero
#: and the mixture weight defaults to 0 (the estimate is unchanged either way).
A_N_TOL = 1e-15


def _check_kind(kind: str) -> str:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    return kind


def _shape_transform(kind: str, v: np.ndarray) -> np.ndarray:
    if kind == GRENANDER:
        return isotonic_decreasing(v)[0]
    return rearrange_decreasing(v)


@dataclass(frozen=True, eq=False)
class LooVectors:
    """Per-index leave-one-out values.

    ``pi[j]`` is the empirical leave-one-out estimate ``(x_j - 1)/(n - 1)``
    and ``shape_loo[j]`` the j-th coordinate of the shape transform applied
    to the full modified vector ``(x - e_j)/(n - 1)``, both for ``x_j > 0``;
    indices with ``x_j = 0`` hold exact zeros.
    """

    pi: np.ndarray
    shape_loo: np.ndarray
    kind: str


@dataclass(frozen=True, eq=False)
class StackedFit:
    """A stacked estimate together with its ingredients.

    ``estimate = beta_hat * shape + (1 - beta_hat) * base`` coordinatewise,
    where ``base`` is the empirical estimator and ``shape`` the rearranged or
    isotonic one. ``a_n`` and ``b_n`` are the quadratic-form coefficients the
    mixture weight was derived from (``b_n`` is None when ``n = 1`` leaves
    the criterion undefined).
    """

    beta_hat: float
    a_n: float
    b_n: float | None
    base: Pmf
    shape: Pmf
    estimate: Pmf
    kind: str
    diagnostics: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Plain estimators


def empirical(x: FrequencyData) -> Pmf:
    """Relative frequencies ``x_j / n``."""
    return Pmf(x.counts / x.n)


def rearrangement(x: FrequencyData) -> Pmf:
    """Empirical estimator sorted into nonincreasing order."""
    return Pmf(rearrange_decreasing(x.counts / x.n))


def grenander(x: FrequencyData) -> Pmf:
    """Isotonic (nonincreasing) projection of the empirical estimator."""
    fitted, _ = isotonic_decreasing(x.counts / x.n)
    return Pmf(fitted)


def minimax(x: FrequencyData) -> Pmf:
    """Shrink the empirical estimator toward the uniform vector on the
    observed range with weight ``sqrt(n) / (n + sqrt(n))``."""
    n = x.n
    alpha = math.sqrt(n) / (n + math.sqrt(n))
    uniform = np.full(x.counts.size, 1.0 / x.counts.size)
    return Pmf(alpha * uniform + (1.0 - alpha) * (x.counts / n))


# ---------------------------------------------------------------------------
# Leave-one-out vectors


def loo_vectors(x: FrequencyData, kind: str) -> LooVectors:
    """Reference leave-one-out computation: one full refit per support point."""
    _check_kind(kind)
    if x.n < 2:
        raise InsufficientSampleError("leave-one-out needs at least 2 observations")
    counts = x.counts
    n = x.n
    d = counts.size
    pi = np.zeros(d)
    shape_loo = np.zeros(d)
    for j in range(d):
        if counts[j] == 0:
            continue
        modified = counts.astype(float)
        modified[j] -= 1.0
        modified /= n - 1
        pi[j] = (counts[j] - 1) / (n - 1)
        shape_loo[j] = _shape_transform(kind, modified)[j]
    return LooVectors(pi=pi, shape_loo=shape_loo, kind=kind)


def _loo_rearrangement_fast(counts: np.ndarray, n: int) -> np.ndarray:
    """Coordinate j of sorting ``counts - e_j`` descending, for all j at once.

    Removing one copy of the value ``v = x_j`` from the sorted order and
    inserting ``v - 1`` shifts the segment between the two positions by one
    slot; the value at any fixed position follows from two binary searches.
    """
    d = counts.size
    desc = np.sort(counts)[::-1]
    asc = desc[::-1]
    js = np.flatnonzero(counts > 0)
    v = counts[js]
    # first sorted position holding value v = number of entries > v
    i1 = d - np.searchsorted(asc, v, side="right")
    # insertion position of v - 1 = number of entries >= v - 1
    j2 = d - np.searchsorted(asc, v - 1, side="left")
    shifted = desc[np.minimum(js + 1, d - 1)]
    vals = np.where(
        js < i1,
        desc[js],
        np.where(js <= j2 - 2, shifted, np.where(js == j2 - 1, v - 1, desc[js])),
    )
    out = np.zeros(d)
    out[js] = vals / (n - 1)
    return out


class _SuffixHulls:
    """Persistent upper hulls of the cumulative-sum points ``(i, C_i)``.

    Built right to left; ``next_vertex(i)`` walks the hull of the points
    ``P_i, ..., P_D`` as it existed when ``P_i`` was inserted, which later
    insertions never invalidate. Binary-lifting tables give logarithmic
    tangent searches along those chains.
    """

    def __init__(self, cum: list[int]):
        d1 = len(cum)  # number of points, indices 0 .. D
        self.cum = cum
        nxt = [-1] * d1
        stack = [d1 - 1]
        for i in range(d1 - 2, -1, -1):
            while len(stack) >= 2:
                a = stack[-1]
                b = stack[-2]
                # pop a unless the turn i -> a -> b is strictly concave
                if (cum[a] - cum[i]) * (b - a) <= (cum[b] - cum[a]) * (a - i):
                    stack.pop()
                else:
                    break
            nxt[i] = stack[-1]
            stack.append(i)
        levels = [nxt]
        span = 1
        while span < d1:
            prev = levels[-1]
            levels.append([-1 if w < 0 else prev[w] for w in prev])
            span *= 2
        self.levels = levels

    def max_slope_vertex(self, u: int, start: int) -> int:
        """Vertex w of the hull of ``P_start..P_D`` maximizing the slope
        ``(C_w - 1 - C_u) / (w - u)`` (ties resolved to the left)."""
        cum = self.cum
        base = cum[u] + 1
        nxt = self.levels[0]

        def improves(w: int) -> bool:
            w2 = nxt[w]
            if w2 < 0:
                return False
            return (cum[w2] - base) * (w - u) > (cum[w] - base) * (w2 - u)

        w = start
        for table in reversed(self.levels):
            w2 = table[w]
            if w2 >= 0 and improves(w2):
                w = w2
        if improves(w):
            w = nxt[w]
        return w


def _loo_grenander_fast(counts: np.ndarray, n: int) -> np.ndarray:
    """Coordinate j of the isotonic fit of ``counts - e_j``, for all j.

    Works on the cumulative-sum diagram: decrementing index q lowers every
    point right of q by one, and the fitted value at q is the slope of the
    bridge of the least concave majorant across the gap between the intact
    prefix points and the lowered suffix points,

        value(q) = min over u <= q of max over w > q of (C_w - 1 - C_u)/(w - u).

    The inner maxima live on persistent suffix hulls, the outer minima on an
    incrementally grown prefix hull, and the bridge is found by alternating
    tangent searches.
    """
    d = counts.size
    cum = [0] * (d + 1)
    acc = 0
    for i, c in enumerate(counts.tolist()):
        acc += c
        cum[i + 1] = acc
    suffix = _SuffixHulls(cum)

    def left_tangent(hull: list[int], w: int) -> int:
        # vertex u on the prefix hull minimizing (C_w - 1 - C_u)/(w - u)
        top = cum[w] - 1

        def better(u2: int, u1: int) -> bool:
            # slope from u2 strictly smaller than from u1
            return (top - cum[u2]) * (w - u1) < (top - cum[u1]) * (w - u2)

        lo, hi = 0, len(hull) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if better(hull[mid + 1], hull[mid]):
                lo = mid + 1
            else:
                hi = mid
        return hull[lo]

    out = np.zeros(d)
    hull: list[int] = []
    for q in range(d):
        # grow the prefix hull with P_q
        while len(hull) >= 2:
            a = hull[-1]
            b = hull[-2]
            if (cum[q] - cum[a]) * (a - b) >= (cum[a] - cum[b]) * (q - a):
                hull.pop()
            else:
                break
        hull.append(q)
        if counts[q] == 0:
            continue
        u = hull[-1]
        w = suffix.max_slope_vertex(u, q + 1)
        for _ in range(64):
            u2 = left_tangent(hull, w)
            if u2 == u:
                break
            u = u2
            w2 = suffix.max_slope_vertex(u, q + 1)
            if w2 == w:
                break
            w = w2
        else:
            # safety net: exhaustive minimum over prefix hull vertices
            best = None
            for u2 in hull:
                w2 = suffix.max_slope_vertex(u2, q + 1)
                s = (cum[w2] - 1 - cum[u2]) / (w2 - u2)
                if best is None or s < best:
                    best = s
                    u, w = u2, w2
        out[q] = (cum[w] - 1 - cum[u]) / ((w - u) * (n - 1))
    return out


def loo_vectors_fast(x: FrequencyData, kind: str) -> LooVectors:
    """Same output as :func:`loo_vectors` without refitting per index.

    The rearrangement variant maintains one sorted order and relocates each
    decremented value by binary search; the isotonic variant reuses the
    partition left of the perturbed point through hulls of the cumulative
    sums. Both run in O(D log D) overall.
    """
    _check_kind(kind)
    if x.n < 2:
        raise InsufficientSampleError("leave-one-out needs at least 2 observations")
    counts = x.counts
    n = x.n
    pi = np.zeros(counts.size)
    pos = counts > 0
    pi[pos] = (counts[pos] - 1) / (n - 1)
    if kind == REARRANGEMENT:
        shape_loo = _loo_rearrangement_fast(counts, n)
    else:
        shape_loo = _loo_grenander_fast(counts, n)
    return LooVectors(pi=pi, shape_loo=shape_loo, kind=kind)


# ---------------------------------------------------------------------------
# Cross-validated mixture weight and the stacked estimator


def cv_beta(x: FrequencyData, kind: str, fast: bool = True) -> tuple[float, float, float]:
    """Closed-form leave-one-out least-squares mixture weight.

    Returns ``(beta_hat, a_n, b_n)`` where

        a_n = sum_j (shape_j - base_j)^2,
        b_n = sum_j base_j * (shape_loo_j - pi_j) - sum_j base_j * (shape_j - base_j),

    and ``beta_hat`` is ``b_n / a_n`` clipped to the cases: ``b/a`` when
    ``0 <= b <= a`` with ``a`` nonzero, ``1`` when ``0 < a <= b``, else ``0``
    (including ``a = 0``, when base and shape coincide).
    """
    _check_kind(kind)
    if x.n < 2:
        raise InsufficientSampleError("the cross-validation criterion needs at least 2 observations")
    base = x.counts / x.n
    shape = _shape_transform(kind, base)
    a_n = float(np.sum((shape - base) ** 2))
    loo = loo_vectors_fast(x, kind) if fast else loo_vectors(x, kind)
    b_n = float(np.sum(base * (loo.shape_loo - loo.pi)) - np.sum(base * (shape - base)))
    if a_n <= A_N_TOL:
        beta = 0.0
    elif 0.0 <= b_n <= a_n:
        beta = b_n / a_n
    elif b_n >= a_n:
        beta = 1.0
    else:
        beta = 0.0
    return beta, a_n, b_n


def stacked(x: FrequencyData, kind: str) -> StackedFit:
    """Convex combination of the shape estimator and the empirical one with
    the cross-validated weight.

    A single observation leaves the criterion undefined; in that case the
    fit degrades to the empirical estimator with ``beta_hat = 0`` and a
    diagnostics note instead of raising.
    """
    _check_kind(kind)
    base = empirical(x)
    shape = Pmf(_shape_transform(kind, base.probs))
    diagnostics: dict = {}
    if x.n < 2:
        beta, b_n = 0.0, None
        a_n = float(np.sum((shape.probs - base.probs) ** 2))
        diagnostics["degenerate"] = "n = 1: cross-validation undefined, returned the empirical estimator"
    else:
        beta, a_n, b_n = cv_beta(x, kind)
    estimate = Pmf(beta * shape.probs + (1.0 - beta) * base.probs)
    return StackedFit(
        beta_hat=beta,
        a_n=a_n,
        b_n=b_n,
        base=base,
        shape=shape,
        estimate=estimate,
        kind=kind,
        diagnostics=diagnostics,
    )


# ---------------------------------------------------------------------------
# Distances


def lk_distance(u, v, k) -> float:
    """l_k distance between two vectors, the shorter zero-padded.

    ``k`` is 1, 2, any integer >= 1, or ``math.inf``.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    size = max(u.size, v.size)
    diff = np.zeros(size)
    diff[: u.size] = u
    diff[: v.size] -= v
    np.abs(diff, out=diff)
    if k == math.inf:
        return float(diff.max())
    if k == 1:
        return float(diff.sum())
    if k == 2:
        return float(math.sqrt(np.sum(diff * diff)))
    return float(np.sum(diff**k) ** (1.0 / k))
