"""
Closed forms of the potential reliability law.

Divergences k_L / k_U, the intensity bounds built on them, the reliability and
relevance transforms, and the product-reliability sandwich. Everything here is a
pure function of its arguments.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

from common.exceptions import DomainError
from config.constants import PROBABILITY_CEILING

DEFAULT_SERIES_THRESHOLD = 1e-4
_LN2 = math.log(2.0)


class Marker(str, Enum):
    NOT_GROWING = 'NOT_GROWING'
    NO_SOLUTION = 'NO_SOLUTION'


NOT_GROWING = Marker.NOT_GROWING
NO_SOLUTION = Marker.NO_SOLUTION

Intensity = Union[float, Marker]


def _check_open_probability(value: float, name: str) -> float:
    if not (isinstance(value, (int, float)) and 0.0 < value < 1.0):
        raise DomainError(f'{name} must lie strictly between 0 and 1, got {value!r}')
    return float(value)


def _check_closed_probability(value: float, name: str) -> float:
    if not (isinstance(value, (int, float)) and 0.0 <= value <= 1.0):
        raise DomainError(f'{name} must lie in [0, 1], got {value!r}')
    return float(value)


def _check_count(n, name: str = 'n') -> float:
    # n may arrive as a huge int or as a real when the count exceeds int range
    if isinstance(n, bool) or not isinstance(n, (int, float)) or not n >= 1 or math.isinf(n):
        raise DomainError(f'{name} must be a positive count, got {n!r}')
    return n


@dataclass(frozen=True)
class ElementProbabilities:
    values: tuple[float, ...]

    def __post_init__(self):
        if not self.values:
            raise DomainError('element probabilities must not be empty')
        object.__setattr__(self, 'values', tuple(float(v) for v in self.values))
        for index, value in enumerate(self.values):
            if not 0.0 < value < 1.0:
                raise DomainError(f'values[{index}] must lie strictly between 0 and 1, got {value!r}')

    @property
    def length(self) -> int:
        return len(self.values)

    @property
    def p_lower(self) -> float:
        return min(self.values)

    @property
    def p_upper(self) -> float:
        return max(self.values)

    @property
    def p_mid(self) -> float:
        return p_mid(self.p_lower, self.p_upper)

    @property
    def mean(self) -> float:
        return math.fsum(self.values) / len(self.values)


@dataclass(frozen=True)
class SymmetricSystemSpec:
    total_elements: int
    operating_degree: int

    def __post_init__(self):
        if self.total_elements < 1:
            raise DomainError(f'total_elements must be positive, got {self.total_elements}')
        if not 0 <= self.operating_degree < self.total_elements:
            raise DomainError(
                f'operating_degree must satisfy 0 <= s < n, got s={self.operating_degree}, n={self.total_elements}'
            )

    @property
    def coverage(self) -> float:
        return self.operating_degree / self.total_elements


@dataclass(frozen=True)
class DivergenceInputs:
    coverage: float
    reference: float

    def __post_init__(self):
        _check_open_probability(self.coverage, 'coverage')
        _check_open_probability(self.reference, 'reference')


@dataclass(frozen=True)
class BoundsReport:
    lambda_min: float
    lambda_max: float

    def __post_init__(self):
        if not 0.0 <= self.lambda_min <= self.lambda_max:
            raise DomainError(
                f'bounds out of order: lambda_min={self.lambda_min!r}, lambda_max={self.lambda_max!r}'
            )

    @property
    def reliability_min(self) -> float:
        return reliability_from_lambda(self.lambda_max)

    @property
    def reliability_max(self) -> float:
        return reliability_from_lambda(self.lambda_min)


def _binary_divergence(c: float, p: float, series_threshold: float) -> float:
    """KL(Bernoulli(c) || Bernoulli(p)) for 0 <= c <= 1, 0 < p < 1."""
    if c == 0.0:
        return -math.log1p(-p)
    if c == 1.0:
        return -math.log(p)
    delta = c - p
    if delta == 0.0:
        return 0.0
    q = 1.0 - p
    if abs(delta) < series_threshold * p:
        # both log terms are O(delta) and cancel to O(delta^2)
        return delta * delta / (2.0 * p * q) - delta ** 3 * (1.0 - 2.0 * p) / (6.0 * p * p * q * q)
    divergence = c * math.log1p(delta / p) + (1.0 - c) * math.log1p(-delta / q)
    return max(divergence, 0.0)


def k_upper(c: float, p_s: float, *, series_threshold: float = DEFAULT_SERIES_THRESHOLD) -> float:
    inputs = DivergenceInputs(c, p_s)
    return _binary_divergence(inputs.coverage, inputs.reference, series_threshold)


def k_lower(c: float, p_m: float, *, series_threshold: float = DEFAULT_SERIES_THRESHOLD) -> float:
    inputs = DivergenceInputs(c, p_m)
    return _binary_divergence(inputs.coverage, inputs.reference, series_threshold)


def p_mid(p_l: float, p_u: float) -> float:
    _check_open_probability(p_l, 'p_l')
    _check_open_probability(p_u, 'p_u')
    if p_u >= PROBABILITY_CEILING:
        raise DomainError(f'p_u must stay below {PROBABILITY_CEILING}, got {p_u!r}')
    if p_l > p_u:
        raise DomainError(f'p_l must not exceed p_u, got p_l={p_l!r}, p_u={p_u!r}')
    return p_l / (1.0 + p_l - p_u)


def p_mean(probs: Union[ElementProbabilities, Sequence[float]], divisor: int) -> float:
    if not isinstance(probs, ElementProbabilities):
        probs = ElementProbabilities(tuple(probs))
    if divisor < 1:
        raise DomainError(f'divisor must be at least 1, got {divisor}')
    mean = math.fsum(probs.values) / divisor
    if not 0.0 < mean < 1.0:
        raise DomainError(f'mean probability {mean!r} falls outside (0, 1)')
    return mean


def _intensity_from_exponent(exponent: float) -> float:
    # -ln(1 - exp(-x)): expm1 below ln 2, where exp(-x) would round to 1, log1p above it
    if exponent < _LN2:
        return -math.log(-math.expm1(-exponent))
    return -math.log1p(-math.exp(-exponent))


def lambda_max(n, c: float, p_s: float, *, series_threshold: float = DEFAULT_SERIES_THRESHOLD) -> Intensity:
    n = _check_count(n)
    c = _check_closed_probability(c, 'c')
    p_s = _check_open_probability(p_s, 'p_s')
    if c <= p_s:
        return NOT_GROWING
    exponent = _binary_divergence(c, p_s, series_threshold) * n
    if exponent == 0.0:
        return NOT_GROWING
    return _intensity_from_exponent(exponent)


def lambda_min(
    n,
    c: float,
    p_m: float,
    o_constant: float = 0.0,
    *,
    series_threshold: float = DEFAULT_SERIES_THRESHOLD,
) -> float:
    n = _check_count(n)
    c = _check_closed_probability(c, 'c')
    p_m = _check_open_probability(p_m, 'p_m')
    if o_constant < 0:
        raise DomainError(f'o_constant must be non-negative, got {o_constant!r}')
    exponent = _binary_divergence(c, p_m, series_threshold) * n
    if o_constant == 0.0:
        if exponent == 0.0:
            raise DomainError('lower bound is undefined where k_L vanishes (c equals p_m)')
        return _intensity_from_exponent(exponent)
    argument = -math.expm1(-exponent) + o_constant
    if not 0.0 < argument <= 1.0:
        raise DomainError(f'lower bound logarithm argument {argument!r} falls outside (0, 1]')
    return -math.log(argument)


def bounds(
    n,
    c: float,
    p_s: float,
    p_m: Optional[float] = None,
    o_constant: float = 0.0,
    *,
    series_threshold: float = DEFAULT_SERIES_THRESHOLD,
) -> Union[BoundsReport, Marker]:
    upper = lambda_max(n, c, p_s, series_threshold=series_threshold)
    if upper is NOT_GROWING:
        return NOT_GROWING
    lower = lambda_min(
        n, c, p_s if p_m is None else p_m, o_constant, series_threshold=series_threshold
    )
    return BoundsReport(lambda_min=lower, lambda_max=upper)


def reliability_from_lambda(intensity: float) -> float:
    if intensity < 0:
        raise DomainError(f'failure intensity must be non-negative, got {intensity!r}')
    return math.exp(-intensity)


def relevance(n, c: float, p_s: float, *, series_threshold: float = DEFAULT_SERIES_THRESHOLD) -> float:
    n = _check_count(n)
    c = _check_closed_probability(c, 'c')
    p_s = _check_open_probability(p_s, 'p_s')
    return -math.expm1(-_binary_divergence(c, p_s, series_threshold) * n)


def _check_instants(instant_probs: Sequence[float]) -> list[float]:
    return [_check_closed_probability(p, f'instant_probs[{i}]') for i, p in enumerate(instant_probs)]


def lifetime_reliability(instant_probs: Sequence[float]) -> float:
    return math.prod(_check_instants(instant_probs))


def lifetime_bounds(instant_probs: Sequence[float]) -> tuple[float, float]:
    deficit = math.fsum(1.0 - p for p in _check_instants(instant_probs))
    return 1.0 - deficit, math.exp(-deficit)
