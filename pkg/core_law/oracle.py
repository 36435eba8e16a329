"""
Exact operating probability of a symmetric system (Poisson-binomial upper tail).

Two independent paths: a coefficient-convolution DP over the generating function
prod(1 - p_v + p_v * x), and a brute-force pass over all 2**n element states.
"""

import logging
import math
from typing import Sequence, Union

import numpy as np

from common.exceptions import DomainError

from .law import ElementProbabilities, SymmetricSystemSpec

logger = logging.getLogger('quantify')

ENUMERATION_MAX_N = 20
DP_MAX_N = 10_000

METHOD_AUTO = 'auto'
METHOD_DP = 'dp'
METHOD_ENUMERATION = 'enumeration'


def _as_probabilities(probs: Union[ElementProbabilities, Sequence[float]]) -> np.ndarray:
    if not isinstance(probs, ElementProbabilities):
        probs = ElementProbabilities(tuple(probs))
    return np.asarray(probs.values, dtype=float)


def operating_count_pmf(probs: Union[ElementProbabilities, Sequence[float]]) -> np.ndarray:
    p = _as_probabilities(probs)
    pmf = np.ones(1)
    for p_v in p:
        step = np.zeros(pmf.size + 1)
        step[:-1] = pmf * (1.0 - p_v)
        step[1:] += pmf * p_v
        pmf = step
    return pmf


def _tail_by_dp(p: np.ndarray, degree: int) -> float:
    pmf = operating_count_pmf(p)
    return math.fsum(pmf[degree + 1:])


def _tail_by_enumeration(p: np.ndarray, degree: int) -> float:
    # state probabilities and operating counts expanded in the same bit order
    state_probs = np.ones(1)
    operating = np.zeros(1, dtype=np.int64)
    for p_v in p:
        state_probs = np.kron(state_probs, np.array([1.0 - p_v, p_v]))
        operating = np.add.outer(operating, np.array([0, 1])).ravel()
    return math.fsum(state_probs[operating > degree])


def exact_operating_probability(
    probs: Union[ElementProbabilities, Sequence[float]],
    degree: int,
    method: str = METHOD_AUTO,
    *,
    enumeration_max_n: int = ENUMERATION_MAX_N,
    dp_max_n: int = DP_MAX_N,
) -> float:
    p = _as_probabilities(probs)
    n = p.size
    if not 0 <= degree < n:
        raise DomainError(f'degree must satisfy 0 <= degree < n, got degree={degree}, n={n}')

    if method == METHOD_AUTO:
        method = METHOD_DP

    if method == METHOD_ENUMERATION:
        if n > enumeration_max_n:
            raise DomainError(f'enumeration is limited to n <= {enumeration_max_n}, got n={n}')
        result = _tail_by_enumeration(p, degree)
    elif method == METHOD_DP:
        if n > dp_max_n:
            raise DomainError(f'exact evaluation is limited to n <= {dp_max_n}, got n={n}')
        result = _tail_by_dp(p, degree)
    else:
        raise DomainError(f'unknown method {method!r}')

    logger.debug(f'operating probability n={n} degree={degree} method={method}: {result!r}')
    return min(max(result, 0.0), 1.0)


def symmetric_system_operating_probability(system: SymmetricSystemSpec, p: float, **kwargs) -> float:
    values = [p] * system.total_elements
    return exact_operating_probability(values, system.operating_degree, **kwargs)
