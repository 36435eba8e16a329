import logging
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Iterable, Optional, Union

from django.utils import timezone

from common.exceptions import DomainError, NoSolutionError, QuantificationError, SessionCompleteError
from config.constants import FOUR_SIGMA_LAMBDA, PROBABILITY_CEILING, SIX_SIGMA_LAMBDA
from core_law.law import NO_SOLUTION, NOT_GROWING, BoundsReport, Marker, bounds
from core_law.solver import required_coverage
from site_model.matrix import SiteProbabilityProfile

logger = logging.getLogger('quantify')


class SigmaKind(str, Enum):
    FOUR_SIGMA = 'four'
    SIX_SIGMA = 'six'
    ENOUGH_SIGMA = 'enough'
    CUSTOM = 'custom'


@dataclass(frozen=True)
class SigmaTarget:
    kind: SigmaKind
    custom_lambda: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, 'kind', SigmaKind(self.kind))
        if self.kind is SigmaKind.CUSTOM:
            if self.custom_lambda is None or not self.custom_lambda > 0:
                raise DomainError(f'a custom target needs a positive lambda_rq, got {self.custom_lambda!r}')
        elif self.custom_lambda is not None:
            raise DomainError(f'lambda_rq is fixed for the {self.kind.value} sigma target')

    @classmethod
    def four_sigma(cls) -> 'SigmaTarget':
        return cls(SigmaKind.FOUR_SIGMA)

    @classmethod
    def six_sigma(cls) -> 'SigmaTarget':
        return cls(SigmaKind.SIX_SIGMA)

    @classmethod
    def enough_sigma(cls) -> 'SigmaTarget':
        return cls(SigmaKind.ENOUGH_SIGMA)

    @classmethod
    def custom(cls, lambda_rq: float) -> 'SigmaTarget':
        return cls(SigmaKind.CUSTOM, float(lambda_rq))

    def lambda_rq(self, total_sites) -> float:
        if self.kind is SigmaKind.FOUR_SIGMA:
            return FOUR_SIGMA_LAMBDA
        if self.kind is SigmaKind.SIX_SIGMA:
            return SIX_SIGMA_LAMBDA
        if self.kind is SigmaKind.ENOUGH_SIGMA:
            return 1.0 / total_sites
        return self.custom_lambda


class EventKind(str, Enum):
    PASS = 'pass'
    FAULT = 'fault'


@dataclass(frozen=True)
class TestEvent:
    kind: EventKind
    delta_total_sites: int = 0
    timestamp: Optional[datetime] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'kind', EventKind(self.kind))
        if self.kind is EventKind.PASS and self.delta_total_sites:
            raise DomainError('a pass event carries no site-count delta')


@dataclass
class MonitorSession:
    """Single-writer test-progress state; events are applied in order and appended to event_log."""

    total_sites: int
    sensitive_sites: int
    target: SigmaTarget
    initial_semantic_mean: float
    initial_total_sites: int
    initial_sensitive_sites: int
    tested_sites: int = 0
    profile: Optional[SiteProbabilityProfile] = None
    event_log: list[TestEvent] = field(default_factory=list)

    @property
    def coverage(self) -> float:
        return self.tested_sites / self.total_sites

    @property
    def tau(self) -> float:
        # equals tested_sites * tau_unit(total_sites) whatever n went through
        return self.tested_sites / self.total_sites

    @property
    def current_semantic_mean(self) -> float:
        return 1.0 / self.sensitive_sites

    @property
    def semantic_shift(self) -> float:
        return self.initial_semantic_mean - self.current_semantic_mean

    @property
    def lambda_rq(self) -> float:
        return self.target.lambda_rq(self.total_sites)

    @property
    def is_complete(self) -> bool:
        return self.tested_sites >= self.total_sites


@dataclass(frozen=True)
class StatusReport:
    coverage: float
    tau: float
    bounds: Union[BoundsReport, Marker]
    semantic_shift: float
    target_met: bool
    tests_remaining_to_target: Union[int, Marker]
    lambda_rq: float
    total_sites: int
    tested_sites: int
    sensitive_sites: int


@dataclass(frozen=True)
class PlanRow:
    target: SigmaTarget
    lambda_rq: float
    required_tests: Union[int, Marker]
    coverage: Optional[float]


@dataclass(frozen=True)
class PlanTable:
    total_sites: int
    sensitive_sites: int
    semantic_mean: float
    rows: tuple[PlanRow, ...]

    def row(self, kind: SigmaKind) -> PlanRow:
        return next(r for r in self.rows if r.target.kind is SigmaKind(kind))

    def ratio(self, numerator: SigmaKind, denominator: SigmaKind) -> Optional[float]:
        top = self.row(numerator).required_tests
        bottom = self.row(denominator).required_tests
        if top is NO_SOLUTION or bottom is NO_SOLUTION:
            return None
        return top / bottom

    @property
    def ratios(self) -> dict[str, Optional[float]]:
        return {
            'six/four': self.ratio(SigmaKind.SIX_SIGMA, SigmaKind.FOUR_SIGMA),
            'enough/four': self.ratio(SigmaKind.ENOUGH_SIGMA, SigmaKind.FOUR_SIGMA),
            'enough/six': self.ratio(SigmaKind.ENOUGH_SIGMA, SigmaKind.SIX_SIGMA),
        }


def _check_counts(n: int, s0: int, tested: int = 0) -> None:
    if n < 1:
        raise DomainError(f'total sites must be positive, got {n}')
    if s0 < 2:
        raise DomainError(f'sensitive sites must be at least 2, got {s0}')
    if s0 > n:
        raise DomainError(f'sensitive sites ({s0}) exceed total sites ({n})')
    if tested > n:
        raise DomainError(f'tested sites ({tested}) exceed total sites ({n})')


def _semantic_mean(s0: int) -> float:
    mean = 1.0 / s0
    if mean >= PROBABILITY_CEILING:
        raise DomainError(f'{s0} sensitive sites give a semantic mean of {mean}, which must stay below 0.5')
    return mean


def new_session(
    n: int,
    s0: int,
    target: SigmaTarget,
    profile: Optional[SiteProbabilityProfile] = None,
) -> MonitorSession:
    _check_counts(n, s0)
    return MonitorSession(
        total_sites=n,
        sensitive_sites=s0,
        target=target,
        initial_semantic_mean=_semantic_mean(s0),
        initial_total_sites=n,
        initial_sensitive_sites=s0,
        profile=profile,
    )


def record_pass(session: MonitorSession, timestamp: Optional[datetime] = None) -> MonitorSession:
    if session.is_complete:
        raise SessionCompleteError(f'all {session.total_sites} sites are already tested')
    session.tested_sites += 1
    session.event_log.append(TestEvent(EventKind.PASS, timestamp=timestamp or timezone.now()))
    logger.debug(f'pass: s={session.tested_sites} n={session.total_sites} tau={session.tau!r}')
    return session


def record_fault(
    session: MonitorSession,
    delta_total_sites: int = 0,
    timestamp: Optional[datetime] = None,
) -> MonitorSession:
    n = session.total_sites + delta_total_sites
    s0 = session.sensitive_sites + 1
    _check_counts(n, s0, session.tested_sites)
    session.total_sites = n
    session.sensitive_sites = s0
    session.event_log.append(
        TestEvent(EventKind.FAULT, delta_total_sites, timestamp=timestamp or timezone.now())
    )
    logger.debug(f'fault: s0={s0} n={n} shift={session.semantic_shift!r}')
    return session


def apply_event(session: MonitorSession, event: TestEvent) -> MonitorSession:
    if event.kind is EventKind.PASS:
        return record_pass(session, event.timestamp)
    return record_fault(session, event.delta_total_sites, event.timestamp)


def _lower_reference(session: MonitorSession) -> Optional[float]:
    if session.profile is None:
        return None
    p_m = session.profile.mid_probability
    if p_m > session.initial_semantic_mean:
        logger.warning(
            f'profile p_M={p_m!r} exceeds the semantic mean {session.initial_semantic_mean!r}; '
            'the lower bound falls back to the semantic mean'
        )
        return None
    return p_m


def status(session: MonitorSession, o_constant: float = 0.0) -> StatusReport:
    n = session.total_sites
    p_s = session.initial_semantic_mean
    lambda_rq = session.lambda_rq
    report_bounds = bounds(n, session.coverage, p_s, _lower_reference(session), o_constant)
    target_met = report_bounds is not NOT_GROWING and report_bounds.lambda_max <= lambda_rq

    try:
        remaining = max(0, required_coverage(n, p_s, lambda_rq) - session.tested_sites)
    except NoSolutionError:
        remaining = NO_SOLUTION

    return StatusReport(
        coverage=session.coverage,
        tau=session.tau,
        bounds=report_bounds,
        semantic_shift=session.semantic_shift,
        target_met=target_met,
        tests_remaining_to_target=remaining,
        lambda_rq=lambda_rq,
        total_sites=n,
        tested_sites=session.tested_sites,
        sensitive_sites=session.sensitive_sites,
    )


def plan(n: int, s0: int, extra_targets: Iterable[SigmaTarget] = ()) -> PlanTable:
    _check_counts(n, s0)
    p_s = _semantic_mean(s0)
    targets = [SigmaTarget.four_sigma(), SigmaTarget.six_sigma(), SigmaTarget.enough_sigma(), *extra_targets]

    rows = []
    for target in targets:
        lambda_rq = target.lambda_rq(n)
        try:
            required = required_coverage(n, p_s, lambda_rq)
        except NoSolutionError:
            logger.warning(f'{target.kind.value} sigma target {lambda_rq!r} is unreachable for n={n}')
            required = NO_SOLUTION
        coverage = None if required is NO_SOLUTION else required / n
        rows.append(PlanRow(target=target, lambda_rq=lambda_rq, required_tests=required, coverage=coverage))

    return PlanTable(total_sites=n, sensitive_sites=s0, semantic_mean=p_s, rows=tuple(rows))


def replay(
    events: Iterable[TestEvent],
    n: int,
    s0: int,
    target: SigmaTarget,
    profile: Optional[SiteProbabilityProfile] = None,
) -> MonitorSession:
    session = new_session(n, s0, target, profile)
    for index, event in enumerate(events, start=1):
        try:
            apply_event(session, event)
        except QuantificationError as e:
            raise type(e)(f'event {index}: {e}') from e
    return session
