"""
JSON Lines codec for monitor sessions.

The first line is a session header ({"n", "s0", "target", "lambda_rq"}); every other
non-blank line is one event ({"event": "pass"} or {"event": "fault", "delta_total_sites": k}).
"""

import json
import logging
from dataclasses import dataclass
from typing import Iterable, Optional, TextIO, Union

from common.exceptions import EventLogError, flatten_errors

from .serializers import SessionHeaderSerializer, TestEventSerializer
from .session import EventKind, MonitorSession, SigmaKind, SigmaTarget, TestEvent

logger = logging.getLogger('quantify')


@dataclass(frozen=True)
class SessionHeader:
    target: SigmaTarget
    n: Optional[int] = None
    s0: Optional[int] = None


def _first_error(errors) -> str:
    flat = flatten_errors(errors)
    if not flat:
        return 'invalid record'
    path, message = flat[0]
    return f'{path}: {message}' if path else message


def _decode(line: str, number: int) -> dict:
    try:
        payload = json.loads(line)
    except json.JSONDecodeError as e:
        raise EventLogError(f'invalid JSON ({e.msg})', number) from e
    if not isinstance(payload, dict):
        raise EventLogError('each line must be a JSON object', number)
    return payload


def parse_header(payload: dict, number: int = 1) -> SessionHeader:
    serializer = SessionHeaderSerializer(data=payload)
    if not serializer.is_valid():
        raise EventLogError(_first_error(serializer.errors), number)
    data = serializer.validated_data
    return SessionHeader(target=serializer.get_target(), n=data.get('n'), s0=data.get('s0'))


def parse_event(payload: dict, number: int) -> TestEvent:
    serializer = TestEventSerializer(data=payload)
    if not serializer.is_valid():
        raise EventLogError(_first_error(serializer.errors), number)
    data = serializer.validated_data
    return TestEvent(
        kind=EventKind(data['event']),
        delta_total_sites=data.get('delta_total_sites', 0),
        timestamp=data.get('at'),
    )


def read_event_log(stream: Iterable[Union[str, bytes]]) -> tuple[Optional[SessionHeader], list[TestEvent]]:
    header = None
    events = []
    seen_record = False
    for number, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode('utf-8')
            except UnicodeDecodeError as e:
                raise EventLogError(f'not valid UTF-8 (byte {e.start})', number) from e
        line = raw.strip()
        if not line:
            continue
        payload = _decode(line, number)
        if not seen_record and 'event' not in payload:
            header = parse_header(payload, number)
        else:
            events.append(parse_event(payload, number))
        seen_record = True
    logger.debug(f'read {len(events)} events (header: {header is not None})')
    return header, events


def header_payload(session: MonitorSession) -> dict:
    payload = {
        'n': session.initial_total_sites,
        's0': session.initial_sensitive_sites,
        'target': session.target.kind.value,
    }
    if session.target.kind is SigmaKind.CUSTOM:
        payload['lambda_rq'] = session.target.custom_lambda
    return payload


def event_payload(event: TestEvent) -> dict:
    payload = {'event': event.kind.value}
    if event.kind is EventKind.FAULT:
        payload['delta_total_sites'] = event.delta_total_sites
    if event.timestamp is not None:
        payload['at'] = event.timestamp.isoformat()
    return payload


def write_event_log(session: MonitorSession, stream: TextIO) -> None:
    stream.write(json.dumps(header_payload(session)) + '\n')
    for event in session.event_log:
        stream.write(json.dumps(event_payload(event)) + '\n')
