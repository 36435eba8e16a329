from enum import Enum
from typing import Optional

from django.conf import settings


def fmt(value, digits: Optional[int] = None) -> str:
    if digits is None:
        digits = settings.QUANTIFY_REPORT_DIGITS
    if value is None:
        return '-'
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, int):
        return str(value)
    return f'{value:.{digits}g}'
