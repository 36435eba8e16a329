import io
import math
from datetime import datetime, timezone

from django.test import SimpleTestCase

from common.exceptions import DomainError, EventLogError, SessionCompleteError
from config.constants import FOUR_SIGMA_LAMBDA, SIX_SIGMA_LAMBDA
from core_law.law import NO_SOLUTION, NOT_GROWING, lambda_max
from site_model.matrix import SiteProbabilityProfile

from .events import read_event_log, write_event_log
from .response_serializers import PlanTableSerializer, StatusReportSerializer
from .session import (
    EventKind,
    SigmaKind,
    SigmaTarget,
    TestEvent,
    new_session,
    plan,
    record_fault,
    record_pass,
    replay,
    status,
)

ENOUGH = SigmaTarget.enough_sigma()


def passed(session, count):
    for _ in range(count):
        record_pass(session)
    return session


class SigmaTargetTests(SimpleTestCase):
    def test_fixed_intensities(self):
        self.assertEqual(SigmaTarget.four_sigma().lambda_rq(20), FOUR_SIGMA_LAMBDA)
        self.assertEqual(SigmaTarget.six_sigma().lambda_rq(20), SIX_SIGMA_LAMBDA)
        self.assertEqual(ENOUGH.lambda_rq(20), 0.05)
        self.assertEqual(SigmaTarget.custom(0.1).lambda_rq(20), 0.1)

    def test_custom_needs_a_positive_intensity(self):
        with self.assertRaises(DomainError):
            SigmaTarget(SigmaKind.CUSTOM)
        with self.assertRaises(DomainError):
            SigmaTarget.custom(0)
        with self.assertRaises(DomainError):
            SigmaTarget(SigmaKind.FOUR_SIGMA, 0.1)


class SessionTests(SimpleTestCase):
    def test_new_session(self):
        session = new_session(20, 4, ENOUGH)
        self.assertEqual(session.initial_semantic_mean, 0.25)
        self.assertEqual(session.lambda_rq, 0.05)
        self.assertEqual(session.tested_sites, 0)
        self.assertEqual(session.tau, 0.0)

    def test_big_session(self):
        session = new_session(10 ** 12, 10 ** 6, SigmaTarget.four_sigma())
        self.assertEqual(session.initial_semantic_mean, 1e-6)
        self.assertEqual(session.lambda_rq, 0.00621)

    def test_new_session_rejects_half_mean(self):
        with self.assertRaises(DomainError):
            new_session(10, 2, SigmaTarget.custom(0.1))
        with self.assertRaises(DomainError):
            new_session(3, 4, ENOUGH)

    def test_record_pass(self):
        session = passed(new_session(20, 4, ENOUGH), 10)
        record_pass(session)
        self.assertEqual(session.tested_sites, 11)
        self.assertAlmostEqual(session.tau, 0.55)
        self.assertEqual(session.event_log[-1].kind, EventKind.PASS)
        self.assertIsNotNone(session.event_log[-1].timestamp)

    def test_record_pass_to_completion(self):
        session = passed(new_session(20, 4, ENOUGH), 20)
        self.assertEqual(session.tau, 1.0)
        with self.assertRaises(SessionCompleteError):
            record_pass(session)

    def test_record_fault_shifts_the_semantic_mean(self):
        session = record_fault(new_session(20, 4, ENOUGH), 0)
        self.assertEqual(session.sensitive_sites, 5)
        self.assertAlmostEqual(session.current_semantic_mean, 0.2)
        self.assertAlmostEqual(session.semantic_shift, 0.05)
        self.assertEqual(session.tested_sites, 0)

    def test_record_fault_recomputes_tau(self):
        session = passed(new_session(20, 4, ENOUGH), 10)
        self.assertAlmostEqual(session.tau, 0.5)
        record_fault(session, 5)
        self.assertEqual(session.total_sites, 25)
        self.assertAlmostEqual(session.tau, 0.4)

    def test_record_fault_count_violations(self):
        with self.assertRaises(DomainError):
            record_fault(new_session(5, 5, ENOUGH), 0)
        session = passed(new_session(20, 4, ENOUGH), 10)
        with self.assertRaises(DomainError):
            record_fault(session, -11)

    def test_pass_event_carries_no_delta(self):
        with self.assertRaises(DomainError):
            TestEvent(EventKind.PASS, 3)


class StatusTests(SimpleTestCase):
    def test_enough_sigma_met_after_eleven_tests(self):
        report = status(passed(new_session(20, 4, ENOUGH), 11))
        self.assertTrue(report.target_met)
        self.assertAlmostEqual(report.bounds.lambda_max, 0.01713, delta=1e-4)
        self.assertEqual(report.tests_remaining_to_target, 0)

    def test_not_growing_at_the_threshold(self):
        report = status(passed(new_session(20, 4, ENOUGH), 5))
        self.assertIs(report.bounds, NOT_GROWING)
        self.assertFalse(report.target_met)

    def test_fresh_session(self):
        report = status(new_session(20, 4, ENOUGH))
        self.assertEqual(report.tests_remaining_to_target, 11)
        self.assertEqual(report.coverage, 0.0)

    def test_unreachable_target(self):
        report = status(new_session(20, 4, SigmaTarget.custom(1e-30)))
        self.assertIs(report.tests_remaining_to_target, NO_SOLUTION)

    def test_threshold_and_monotone_progress(self):
        session = new_session(200, 8, ENOUGH)
        previous = None
        for _ in range(200):
            record_pass(session)
            report = status(session)
            if session.tested_sites <= math.ceil(200 * session.initial_semantic_mean):
                self.assertIs(report.bounds, NOT_GROWING)
                continue
            self.assertIsNot(report.bounds, NOT_GROWING)
            if previous is not None and report.bounds.lambda_max > 0:
                self.assertLess(report.bounds.lambda_max, previous)
            previous = report.bounds.lambda_max

    def test_target_met_matches_bounds(self):
        session = new_session(50, 5, SigmaTarget.custom(0.01))
        for _ in range(50):
            record_pass(session)
            report = status(session)
            expected = report.bounds is not NOT_GROWING and report.bounds.lambda_max <= 0.01
            self.assertEqual(report.target_met, expected)

    def test_profile_mid_probability_lowers_lambda_min(self):
        profile = SiteProbabilityProfile((0.2, 0.2, 0.05, 0.45), 20)
        session = passed(new_session(20, 4, ENOUGH, profile), 11)
        report = status(session)
        self.assertLess(report.bounds.lambda_min, report.bounds.lambda_max)
        self.assertAlmostEqual(report.bounds.lambda_max, lambda_max(20, 0.55, 0.25))

    def test_profile_above_the_semantic_mean_is_ignored(self):
        profile = SiteProbabilityProfile((0.3, 0.3, 0.3, 0.3), 20)
        session = passed(new_session(20, 4, ENOUGH, profile), 11)
        with self.assertLogs('quantify', level='WARNING'):
            report = status(session)
        self.assertAlmostEqual(report.bounds.lambda_min, report.bounds.lambda_max)

    def test_status_serializer(self):
        data = StatusReportSerializer(status(passed(new_session(20, 4, ENOUGH), 3))).data
        self.assertEqual(data['bounds'], 'NOT_GROWING')
        self.assertEqual(data['tests_remaining_to_target'], 8)
        self.assertFalse(data['target_met'])


class PlanTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.big = plan(10 ** 12, 10 ** 6)

    def test_four_sigma_row(self):
        self.assertAlmostEqual(self.big.row(SigmaKind.FOUR_SIGMA).required_tests, 1_003_200, delta=100)

    def test_effort_ratios(self):
        self.assertAlmostEqual(self.big.ratios['six/four'], 1.003, delta=5e-4)
        self.assertAlmostEqual(self.big.ratios['enough/four'], 1.0042, delta=5e-4)

    def test_plan_agrees_with_a_fresh_status(self):
        table = plan(20, 4)
        for target in (SigmaTarget.four_sigma(), SigmaTarget.six_sigma(), ENOUGH):
            report = status(new_session(20, 4, target))
            self.assertEqual(report.tests_remaining_to_target, table.row(target.kind).required_tests)

    def test_unreachable_custom_row(self):
        table = plan(20, 4, [SigmaTarget.custom(1e-30)])
        self.assertIs(table.row(SigmaKind.CUSTOM).required_tests, NO_SOLUTION)
        self.assertEqual(table.row(SigmaKind.ENOUGH_SIGMA).required_tests, 11)

    def test_plan_serializer(self):
        data = PlanTableSerializer(plan(20, 4, [SigmaTarget.custom(1e-30)])).data
        self.assertEqual([row['target'] for row in data['rows']], ['four', 'six', 'enough', 'custom'])
        self.assertEqual(data['rows'][3]['required_tests'], 'NO_SOLUTION')
        self.assertIsNone(data['rows'][3]['coverage'])
        self.assertEqual(data['rows'][2]['required_tests'], 11)


class EventLogTests(SimpleTestCase):
    def test_eleven_passes(self):
        header, events = read_event_log(io.StringIO(
            '{"n": 20, "s0": 4, "target": "enough"}\n' + '{"event": "pass"}\n' * 11
        ))
        self.assertEqual(header.target, ENOUGH)
        self.assertEqual((header.n, header.s0), (20, 4))
        session = replay(events, header.n, header.s0, header.target)
        self.assertTrue(status(session).target_met)

    def test_empty_log(self):
        header, events = read_event_log(io.StringIO(''))
        self.assertIsNone(header)
        session = replay(events, 20, 4, ENOUGH)
        self.assertEqual(session.tested_sites, 0)

    def test_fault_then_pass(self):
        _, events = read_event_log(io.StringIO('{"event": "fault", "delta_total_sites": 0}\n{"event": "pass"}\n'))
        session = replay(events, 20, 4, ENOUGH)
        self.assertEqual((session.sensitive_sites, session.tested_sites), (5, 1))

    def test_custom_header(self):
        header, _ = read_event_log(io.StringIO('{"target": "custom", "lambda_rq": 0.01}\n'))
        self.assertEqual(header.target, SigmaTarget.custom(0.01))
        self.assertIsNone(header.n)

    def test_malformed_line_is_named(self):
        stream = io.StringIO('{"n": 20, "s0": 4, "target": "enough"}\n{"event": "pass"}\n{"event": \n')
        with self.assertRaises(EventLogError) as ctx:
            read_event_log(stream)
        self.assertEqual(ctx.exception.line, 3)
        self.assertIn('line 3', str(ctx.exception))

    def test_invalid_event_is_named(self):
        stream = io.StringIO('{"event": "pass"}\n\n{"event": "skip"}\n')
        with self.assertRaises(EventLogError) as ctx:
            read_event_log(stream)
        self.assertEqual(ctx.exception.line, 3)

    def test_pass_with_delta_is_rejected(self):
        with self.assertRaises(EventLogError):
            read_event_log(io.StringIO('{"event": "pass", "delta_total_sites": 2}\n'))

    def test_custom_header_without_intensity(self):
        with self.assertRaises(EventLogError):
            read_event_log(io.StringIO('{"target": "custom"}\n'))

    def test_replay_names_the_failing_event(self):
        events = [TestEvent(EventKind.PASS)] * 3 + [TestEvent(EventKind.FAULT, -30)]
        with self.assertRaisesMessage(DomainError, 'event 4'):
            replay(events, 20, 4, ENOUGH)

    def test_replay_is_deterministic_and_idempotent(self):
        at = datetime(2024, 1, 1, tzinfo=timezone.utc)
        session = new_session(30, 4, SigmaTarget.custom(0.02))
        for step in range(25):
            if step % 7 == 3:
                record_fault(session, 1, at)
            else:
                record_pass(session, at)

        stream = io.StringIO()
        write_event_log(session, stream)
        stream.seek(0)
        header, events = read_event_log(stream)
        restored = replay(events, header.n, header.s0, header.target)

        self.assertEqual(restored, session)
        self.assertEqual(status(restored), status(session))

    def test_replay_overrun_keeps_the_event_index(self):
        events = [TestEvent(EventKind.PASS)] * 7
        with self.assertRaisesMessage(SessionCompleteError, 'event 7'):
            replay(events, 6, 3, ENOUGH)

    def test_byte_lines_must_be_utf8(self):
        header, events = read_event_log([b'{"n": 20, "s0": 4, "target": "enough"}\n', b'{"event": "pass"}\n'])
        self.assertEqual((header.n, len(events)), (20, 1))
        with self.assertRaises(EventLogError) as ctx:
            read_event_log([b'{"event": "pass"}\n', b'{"event": "\xff"}\n'])
        self.assertEqual(ctx.exception.line, 2)
