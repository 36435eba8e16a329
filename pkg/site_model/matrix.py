import math
from dataclasses import dataclass, field
from typing import Optional

from common.exceptions import DomainError, UnboundedCountError
from config.constants import PROBABILITY_CEILING
from core_law.law import p_mean, p_mid

MAX_SITE_COUNT = 2 ** 63 - 1


@dataclass(frozen=True)
class SemanticType:
    name: str
    value_count: int

    def __post_init__(self):
        if self.value_count < 1:
            raise DomainError(f'semantic type {self.name!r} needs at least one value, got {self.value_count}')


@dataclass(frozen=True)
class SiteParameter:
    name: str
    types: tuple[SemanticType, ...]

    def __post_init__(self):
        object.__setattr__(self, 'types', tuple(self.types))
        if not self.types:
            raise DomainError(f'parameter {self.name!r} needs at least one semantic type')

    @property
    def value_count(self) -> int:
        return sum(t.value_count for t in self.types)

    @property
    def type_count(self) -> int:
        return len(self.types)


@dataclass(frozen=True)
class SiteProbabilityProfile:
    probabilities: tuple[float, ...]
    total_sites: int

    def __post_init__(self):
        object.__setattr__(self, 'probabilities', tuple(float(p) for p in self.probabilities))
        if not self.probabilities:
            raise DomainError('site probability profile must not be empty')
        if self.total_sites < 1:
            raise DomainError(f'total_sites must be positive, got {self.total_sites}')
        for index, p in enumerate(self.probabilities):
            if not 0.0 < p < 1.0:
                raise DomainError(f'site_probabilities.{index}: {p!r} must lie strictly between 0 and 1')

    @property
    def sensitive_sites(self) -> int:
        return len(self.probabilities)

    @property
    def semantic_mean(self) -> float:
        return p_mean(self.probabilities, self.sensitive_sites)

    @property
    def mid_probability(self) -> float:
        return p_mid(min(self.probabilities), max(self.probabilities))


@dataclass(frozen=True)
class SiteMatrix:
    parameters: tuple[SiteParameter, ...]
    override_total_sites: Optional[int] = None
    site_probabilities: tuple[float, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, 'parameters', tuple(self.parameters))
        object.__setattr__(self, 'site_probabilities', tuple(self.site_probabilities))
        if not self.parameters:
            raise DomainError('site matrix needs at least one parameter')
        if self.override_total_sites is not None and self.override_total_sites < sensitive_sites(self):
            raise DomainError(
                f'override_total_sites={self.override_total_sites} is below the sensitive site count'
            )
        if self.site_probabilities and len(self.site_probabilities) != sensitive_sites(self):
            raise DomainError(
                f'site_probabilities lists {len(self.site_probabilities)} entries '
                f'for {sensitive_sites(self)} sensitive sites'
            )

    @property
    def profile(self) -> Optional[SiteProbabilityProfile]:
        if not self.site_probabilities:
            return None
        return SiteProbabilityProfile(self.site_probabilities, effective_total_sites(self))


def _bounded_product(factors) -> int:
    product = math.prod(factors)
    if product > MAX_SITE_COUNT:
        raise UnboundedCountError(f'site count {product} exceeds the representable range')
    return product


def total_sites(matrix: SiteMatrix) -> int:
    return _bounded_product(p.value_count for p in matrix.parameters)


def sensitive_sites(matrix: SiteMatrix) -> int:
    return _bounded_product(p.type_count for p in matrix.parameters)


def effective_total_sites(matrix: SiteMatrix) -> int:
    if matrix.override_total_sites is not None:
        return matrix.override_total_sites
    return total_sites(matrix)


def initial_semantic_mean(matrix: SiteMatrix) -> float:
    s0 = sensitive_sites(matrix)
    mean = 1.0 / s0
    if mean >= PROBABILITY_CEILING:
        raise DomainError(f'{s0} sensitive sites give a semantic mean of {mean}, which must stay below 0.5')
    return mean


def blackbox_sensitive_sites(n: int) -> int:
    """s0 = sqrt(n), rounded half up, when the sensitive sites are unknown."""
    if n < 4:
        raise DomainError(f'black-box estimation needs n >= 4, got {n}')
    root = math.isqrt(n)
    # sqrt(n) >= root + 0.5  <=>  n - root**2 > root for integers
    return root + 1 if n - root * root > root else root


def tau_unit(n) -> float:
    if not n >= 1:
        raise DomainError(f'n must be a positive count, got {n!r}')
    return 1.0 / n


def extrapolated_coverage(profile: SiteProbabilityProfile) -> float:
    floor = 1.0 / profile.total_sites
    for index, p in enumerate(profile.probabilities):
        if p < floor:
            raise DomainError(f'site_probabilities.{index}: {p!r} is below 1/n = {floor!r}')
    coverage = math.fsum(profile.probabilities) - profile.sensitive_sites * floor
    if not 0.0 < coverage < 1.0:
        raise DomainError(f'extrapolated coverage {coverage!r} falls outside (0, 1)')
    return coverage


def blackbox_tests(required: int, whitebox_sites: int) -> int:
    # white-box branches are each sensitized by one test; the rest goes to the black box
    if not 0 <= whitebox_sites <= required:
        raise DomainError(f'whitebox_sites must lie in [0, {required}], got {whitebox_sites}')
    return required - whitebox_sites
