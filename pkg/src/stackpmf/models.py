"""Discrete distribution families, truncation and seeded sampling.

The seven benchmark distributions are uniform ranges, mixtures of uniform
ranges, a geometric, an increasing triangular, a negative binomial and a
Poisson mixture. Each is described declaratively by a small frozen
dataclass; evaluation, truncation to a finite vector and reproducible
sampling are free functions of the description.

Conventions fixed here:

* ``TriangularDecreasing(s)`` has ``p_j`` proportional to ``s + 1 - j`` and
  ``TriangularIncreasing(s)`` proportional to ``j + 1`` on ``{0, ..., s}``.
* ``NegativeBinomial(r, theta)`` counts successes before the r-th failure:
  ``p_j = C(j + r - 1, j) * theta**j * (1 - theta)**r``.
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np
import scipy.stats

from .errors import EmptyInputError, InvalidPmfError, ParameterError
from .rng import substream

#: Tail mass discarded when an infinite support is materialized for sampling.
SAMPLING_TRUNCATION = 1e-12

_MIXTURE_WEIGHT_TOL = 1e-12


# ---------------------------------------------------------------------------
# Model descriptions


@dataclass(frozen=True)
class UniformRange:
    """Uniform distribution on ``{0, ..., s}``."""

    s: int

    def __post_init__(self):
        if int(self.s) != self.s or self.s < 0:
            raise ParameterError(f"uniform range needs an integer s >= 0, got {self.s!r}")
        object.__setattr__(self, "s", int(self.s))


@dataclass(frozen=True)
class Geometric:
    """``p_j = (1 - theta) * theta**j`` on the nonnegative integers."""

    theta: float

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise ParameterError(f"geometric theta must lie in (0, 1), got {self.theta!r}")


@dataclass(frozen=True)
class TriangularDecreasing:
    """Strictly decreasing ramp ``p_j`` proportional to ``s + 1 - j`` on ``{0, ..., s}``."""

    s: int

    def __post_init__(self):
        if int(self.s) != self.s or self.s < 0:
            raise ParameterError(f"triangular range needs an integer s >= 0, got {self.s!r}")
        object.__setattr__(self, "s", int(self.s))


@dataclass(frozen=True)
class TriangularIncreasing:
    """Strictly increasing ramp ``p_j`` proportional to ``j + 1`` on ``{0, ..., s}``."""

    s: int

    def __post_init__(self):
        if int(self.s) != self.s or self.s < 0:
            raise ParameterError(f"triangular range needs an integer s >= 0, got {self.s!r}")
        object.__setattr__(self, "s", int(self.s))


@dataclass(frozen=True)
class NegativeBinomial:
    """Number of successes before the r-th failure, success probability theta."""

    r: int
    theta: float

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1:
            raise ParameterError(f"negative binomial needs an integer r >= 1, got {self.r!r}")
        if not 0.0 < self.theta < 1.0:
            raise ParameterError(f"negative binomial theta must lie in (0, 1), got {self.theta!r}")
        object.__setattr__(self, "r", int(self.r))


@dataclass(frozen=True)
class Poisson:
    """Poisson distribution with rate ``lam``."""

    lam: float

    def __post_init__(self):
        if not self.lam > 0.0:
            raise ParameterError(f"poisson rate must be positive, got {self.lam!r}")


@dataclass(frozen=True)
class Mixture:
    """Finite mixture ``sum_i w_i * component_i``; weights positive, summing to 1."""

    components: tuple

    def __post_init__(self):
        comps = tuple((float(w), m) for w, m in self.components)
        if not comps:
            raise ParameterError("mixture needs at least one component")
        for w, _ in comps:
            if not w > 0.0:
                raise ParameterError(f"mixture weights must be positive, got {w!r}")
        total = math.fsum(w for w, _ in comps)
        if abs(total - 1.0) > _MIXTURE_WEIGHT_TOL:
            raise ParameterError(f"mixture weights must sum to 1, got {total!r}")
        object.__setattr__(self, "components", comps)


ModelSpec = Union[
    UniformRange,
    Geometric,
    TriangularDecreasing,
    TriangularIncreasing,
    NegativeBinomial,
    Poisson,
    Mixture,
]


# ---------------------------------------------------------------------------
# Core containers


@dataclass(frozen=True, eq=False)
class Pmf:
    """A finite probability vector plus the mass lost to truncation.

    ``probs[j]`` is the probability of ``j`` for ``j = 0, ..., D - 1`` and
    ``tail_mass`` is the probability beyond ``D - 1`` (zero for a finite
    support). Entries are nonnegative and ``sum(probs) + tail_mass`` is 1
    up to 1e-9.
    """

    probs: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        probs = np.ascontiguousarray(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise InvalidPmfError("probability vector must be nonempty and one-dimensional")
        if np.any(probs < 0.0) or not np.all(np.isfinite(probs)):
            raise InvalidPmfError("probabilities must be finite and nonnegative")
        if self.tail_mass < 0.0:
            raise InvalidPmfError("tail mass must be nonnegative")
        total = float(np.sum(probs)) + float(self.tail_mass)
        if abs(total - 1.0) > 1e-9:
            raise InvalidPmfError(f"probabilities plus tail must sum to 1, got {total!r}")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "tail_mass", float(self.tail_mass))

    def __len__(self) -> int:
        return self.probs.size


@dataclass(frozen=True, eq=False)
class FrequencyData:
    """Observed counts ``x_0, ..., x_t`` with ``x_t > 0`` and their total ``n``.

    Leading zeros are allowed; a trailing zero is not, because the vector
    length encodes the largest observed value.
    """

    counts: np.ndarray
    n: int = 0

    def __post_init__(self):
        counts = np.ascontiguousarray(self.counts)
        if counts.ndim != 1 or counts.size == 0:
            raise EmptyInputError("counts must be a nonempty one-dimensional vector")
        if not np.issubdtype(counts.dtype, np.integer):
            as_int = np.ascontiguousarray(counts, dtype=np.int64)
            if np.any(as_int != counts):
                raise ValueError("counts must be integers")
            counts = as_int
        else:
            counts = np.ascontiguousarray(counts, dtype=np.int64)
        if np.any(counts < 0):
            raise ValueError("counts must be nonnegative")
        if counts[-1] == 0:
            raise ValueError("last count must be positive (trailing zeros are not part of the support)")
        n = int(counts.sum())
        if n < 1:
            raise EmptyInputError("total count must be at least 1")
        if self.n not in (0, n):
            raise ValueError(f"declared n={self.n} does not match sum of counts {n}")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "n", n)

    @property
    def t_n(self) -> int:
        """Largest observed value (final index of the counts vector)."""
        return self.counts.size - 1

    def __len__(self) -> int:
        return self.counts.size


# ---------------------------------------------------------------------------
# Evaluation


def pmf_eval(model: ModelSpec, j: int) -> float:
    """Probability of the single point ``j`` under ``model``."""
    if j < 0:
        raise ValueError(f"support point must be nonnegative, got {j}")
    return float(pmf_values(model, j + 1)[j])


def pmf_values(model: ModelSpec, length: int) -> np.ndarray:
    """Vector of ``p_0, ..., p_{length-1}`` under ``model``."""
    j = np.arange(length)
    if isinstance(model, UniformRange):
        return np.where(j <= model.s, 1.0 / (model.s + 1), 0.0)
    if isinstance(model, Geometric):
        return (1.0 - model.theta) * model.theta ** j
    if isinstance(model, TriangularDecreasing):
        total = (model.s + 1) * (model.s + 2) / 2.0
        return np.where(j <= model.s, (model.s + 1 - j) / total, 0.0)
    if isinstance(model, TriangularIncreasing):
        total = (model.s + 1) * (model.s + 2) / 2.0
        return np.where(j <= model.s, (j + 1) / total, 0.0)
    if isinstance(model, NegativeBinomial):
        return scipy.stats.nbinom.pmf(j, model.r, 1.0 - model.theta)
    if isinstance(model, Poisson):
        return scipy.stats.poisson.pmf(j, model.lam)
    if isinstance(model, Mixture):
        out = np.zeros(length)
        for w, comp in model.components:
            out += w * pmf_values(comp, length)
        return out
    raise TypeError(f"not a model: {model!r}")


def _tail_mass(model: ModelSpec, length: int) -> float:
    """Probability of values ``>= length`` under ``model``."""
    if isinstance(model, UniformRange):
        return max(model.s + 1 - length, 0) / (model.s + 1)
    if isinstance(model, Geometric):
        return float(model.theta ** length)
    if isinstance(model, TriangularDecreasing):
        if length > model.s:
            return 0.0
        total = (model.s + 1) * (model.s + 2) / 2.0
        m = model.s + 1 - length
        return m * (m + 1) / 2.0 / total
    if isinstance(model, TriangularIncreasing):
        if length > model.s:
            return 0.0
        total = (model.s + 1) * (model.s + 2) / 2.0
        return (total - length * (length + 1) / 2.0) / total
    if isinstance(model, NegativeBinomial):
        return float(scipy.stats.nbinom.sf(length - 1, model.r, 1.0 - model.theta))
    if isinstance(model, Poisson):
        return float(scipy.stats.poisson.sf(length - 1, model.lam))
    if isinstance(model, Mixture):
        return float(sum(w * _tail_mass(comp, length) for w, comp in model.components))
    raise TypeError(f"not a model: {model!r}")


def support_size(model: ModelSpec):
    """Size of the support when finite, else ``None``."""
    if isinstance(model, (UniformRange, TriangularDecreasing, TriangularIncreasing)):
        return model.s + 1
    if isinstance(model, Mixture):
        sizes = [support_size(comp) for _, comp in model.components]
        if any(s is None for s in sizes):
            return None
        return max(sizes)
    return None


def pmf_truncate(model: ModelSpec, epsilon: float) -> Pmf:
    """Shortest probability vector whose discarded tail is at most ``epsilon``.

    Finite-support models are returned exactly, with zero tail mass.
    """
    if not 0.0 < epsilon < 1.0:
        raise ParameterError(f"truncation epsilon must lie in (0, 1), got {epsilon!r}")
    finite = support_size(model)
    if finite is not None:
        return Pmf(pmf_values(model, finite), tail_mass=0.0)

    hi = 1
    while _tail_mass(model, hi) > epsilon:
        hi *= 2
    lo = max(1, hi // 2)
    while lo < hi:
        mid = (lo + hi) // 2
        if _tail_mass(model, mid) <= epsilon:
            hi = mid
        else:
            lo = mid + 1
    return Pmf(pmf_values(model, hi), tail_mass=_tail_mass(model, hi))


# ---------------------------------------------------------------------------
# Sampling


def sample(model: ModelSpec, n: int, seed: int) -> FrequencyData:
    """Draw ``n`` i.i.d. values from ``model`` and return their counts.

    Inversion sampling on the cumulative sums of the truncated probability
    vector; a uniform draw landing in the discarded tail (probability at
    most ``SAMPLING_TRUNCATION``) maps to the last retained point. The
    output has length ``max drawn value + 1`` and is a bit-identical
    function of ``(model, n, seed)``.
    """
    if n < 1:
        raise ValueError(f"sample size must be at least 1, got {n}")
    pmf = pmf_truncate(model, SAMPLING_TRUNCATION)
    cum = np.cumsum(pmf.probs)
    rng = substream(seed)
    u = rng.random(int(n))
    idx = np.searchsorted(cum, u, side="right")
    idx = np.minimum(idx, pmf.probs.size - 1)
    counts = np.bincount(idx)
    return FrequencyData(counts)


# ---------------------------------------------------------------------------
# Named benchmark models and the textual model grammar


def builtin_models() -> dict[str, ModelSpec]:
    """The seven named benchmark distributions M1 through M7."""
    return {
        "M1": UniformRange(11),
        "M2": Mixture(((0.15, UniformRange(3)), (0.1, UniformRange(7)), (0.75, UniformRange(11)))),
        "M3": Mixture(
            ((0.25, UniformRange(1)), (0.2, UniformRange(3)), (0.15, UniformRange(5)), (0.4, UniformRange(7)))
        ),
        "M4": Geometric(0.25),
        "M5": TriangularIncreasing(11),
        "M6": NegativeBinomial(7, 0.4),
        "M7": Mixture(((Fraction(3, 8), Poisson(2)), (Fraction(5, 8), Poisson(15)))),
    }


_BUILTIN_RE = re.compile(r"^M[1-7]$")


def _parse_number(text: str) -> float:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return float(Fraction(int(num), int(den)))
    return float(text)


def parse_model(text: str) -> ModelSpec:
    """Parse a model string.

    Accepted forms: ``M1`` .. ``M7``, ``uniform:s``, ``geom:theta``,
    ``tri-dec:s``, ``tri-inc:s``, ``nbin:r,theta``, ``pois:lambda`` and
    ``mix:w1*spec1+w2*spec2+...`` where each spec is any of the non-mixture
    forms and weights may be decimals or simple fractions like ``3/8``.
    """
    text = text.strip()
    if _BUILTIN_RE.match(text):
        return builtin_models()[text]
    head, sep, rest = text.partition(":")
    if not sep:
        raise ValueError(f"unknown model string {text!r}")
    head = head.strip().lower()
    try:
        if head == "uniform":
            return UniformRange(int(rest))
        if head == "geom":
            return Geometric(_parse_number(rest))
        if head == "tri-dec":
            return TriangularDecreasing(int(rest))
        if head == "tri-inc":
            return TriangularIncreasing(int(rest))
        if head == "nbin":
            r, theta = rest.split(",")
            return NegativeBinomial(int(r), _parse_number(theta))
        if head == "pois":
            return Poisson(_parse_number(rest))
        if head == "mix":
            components = []
            for part in rest.split("+"):
                w, _, spec = part.partition("*")
                if not spec:
                    raise ValueError(f"mixture component {part!r} must look like weight*spec")
                components.append((_parse_number(w), parse_model(spec)))
            return Mixture(tuple(components))
    except ParameterError:
        raise
    except ValueError as exc:
        raise ValueError(f"cannot parse model string {text!r}: {exc}") from exc
    raise ValueError(f"unknown model string {text!r}")
