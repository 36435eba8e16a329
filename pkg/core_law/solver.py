import logging
import math

from common.exceptions import DomainError, NoSolutionError

from .law import DEFAULT_SERIES_THRESHOLD, NOT_GROWING, lambda_max

logger = logging.getLogger('quantify')


def meets_target(n: int, tested: int, p_s: float, lambda_target: float, **kwargs) -> bool:
    intensity = lambda_max(n, tested / n, p_s, **kwargs)
    return intensity is not NOT_GROWING and intensity <= lambda_target


def required_coverage(
    n: int,
    p_s: float,
    lambda_target: float,
    *,
    series_threshold: float = DEFAULT_SERIES_THRESHOLD,
) -> int:
    """
    Smallest tested-site count s with lambda_max(n, s/n, p_s) <= lambda_target.

    lambda_max is NOT_GROWING up to c = p_s and strictly decreasing after it, so the
    predicate is monotone in s and a bisection over integers is exact.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f'n must be a positive integer, got {n!r}')
    if not lambda_target > 0:
        raise DomainError(f'lambda_target must be positive, got {lambda_target!r}')

    def meets(tested: int) -> bool:
        return meets_target(n, tested, p_s, lambda_target, series_threshold=series_threshold)

    if not meets(n):
        raise NoSolutionError(
            f'target intensity {lambda_target!r} is unreachable even at full coverage (n={n}, p_s={p_s!r})'
        )

    low = min(math.floor(n * p_s), n - 1)
    while low > 0 and meets(low):
        low -= 1
    high = n
    steps = 0
    while high - low > 1:
        middle = (low + high) // 2
        if meets(middle):
            high = middle
        else:
            low = middle
        steps += 1

    logger.debug(f'required coverage n={n} p_s={p_s!r} target={lambda_target!r}: {high} tests after {steps} steps')
    return high
