"""
c -> (lambda_max, reliability, relevance) curve data.

The default grid spans (p_s, 1) and skips the singular point c = p_s by one step;
the full-range grid spans (0, 1) and also shows the discovery side of relevance.
"""

import csv
from dataclasses import dataclass
from typing import Iterator, Optional, TextIO

import numpy as np

from common.exceptions import DomainError
from core_law.law import NOT_GROWING, lambda_max, relevance, reliability_from_lambda

CURVE_HEADER = ('c', 'lambda_max', 'reliability', 'relevance')


@dataclass(frozen=True)
class CurveRequest:
    n: int
    semantic_mean: float
    resolution: int
    full_range: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f'n must be a positive count, got {self.n}')
        if not 0.0 < self.semantic_mean < 1.0:
            raise DomainError(f'semantic mean must lie strictly between 0 and 1, got {self.semantic_mean!r}')
        if self.resolution < 2:
            raise DomainError(f'resolution must be at least 2, got {self.resolution}')

    def grid(self) -> np.ndarray:
        start = 0.0 if self.full_range else self.semantic_mean
        # resolution interior points of resolution + 1 equal steps
        return np.linspace(start, 1.0, self.resolution + 2)[1:-1]


@dataclass(frozen=True)
class CurveRow:
    c: float
    lambda_max: Optional[float]
    reliability: Optional[float]
    relevance: float


def curve_rows(request: CurveRequest) -> Iterator[CurveRow]:
    for c in request.grid():
        c = float(c)
        intensity = lambda_max(request.n, c, request.semantic_mean)
        if intensity is NOT_GROWING:
            intensity, reliability = None, None
        else:
            reliability = reliability_from_lambda(intensity)
        yield CurveRow(
            c=c,
            lambda_max=intensity,
            reliability=reliability,
            relevance=relevance(request.n, c, request.semantic_mean),
        )


def write_curve_csv(request: CurveRequest, stream: TextIO) -> int:
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(CURVE_HEADER)
    count = 0
    for row in curve_rows(request):
        writer.writerow([
            repr(row.c),
            '' if row.lambda_max is None else repr(row.lambda_max),
            '' if row.reliability is None else repr(row.reliability),
            repr(row.relevance),
        ])
        count += 1
    return count
