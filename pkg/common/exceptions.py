from typing import Optional


class QuantificationError(Exception):
    pass


class DomainError(QuantificationError, ValueError):
    pass


class UnboundedCountError(DomainError, OverflowError):
    pass


class NoSolutionError(QuantificationError):
    pass


class SessionCompleteError(QuantificationError):
    pass


class EventLogError(QuantificationError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f'line {line}: {message}'
        super().__init__(message)


class SchemaError(QuantificationError):
    def __init__(self, message: str, path: str = ''):
        self.path = path
        if path:
            message = f'{path}: {message}'
        super().__init__(message)


def flatten_errors(detail, prefix: str = '') -> list[tuple[str, str]]:
    """DRF ValidationError.detail 트리를 (dotted path, message) 목록으로 펼친다."""
    if isinstance(detail, dict):
        flat = []
        for key, value in detail.items():
            if key == 'non_field_errors':
                flat.extend(flatten_errors(value, prefix))
            else:
                flat.extend(flatten_errors(value, f'{prefix}.{key}' if prefix else str(key)))
        return flat
    if isinstance(detail, list):
        if all(not isinstance(item, (dict, list)) for item in detail):
            return [(prefix, str(item)) for item in detail]
        flat = []
        for index, item in enumerate(detail):
            if item:
                flat.extend(flatten_errors(item, f'{prefix}.{index}' if prefix else str(index)))
        return flat
    return [(prefix, str(detail))]


def schema_error_from(detail, root: str = '') -> SchemaError:
    errors = flatten_errors(detail, root)
    path, message = errors[0] if errors else (root, 'invalid document')
    if len(errors) > 1:
        message = f'{message} (+{len(errors) - 1} more)'
    return SchemaError(message, path)
