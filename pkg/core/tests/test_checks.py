from unittest import mock

import pytest
from django.test import SimpleTestCase, override_settings

from core import checks
from core.tasks import dispatch_checks, run_verification_check, summarize
from core.verification import rate_report


class StubCheck(checks.VerificationCheck):
    name = 'stub'
    fast = {'fail': False}
    full = {'fail': True}

    def evaluate(self, suite):
        report = rate_report('stub rate', [10, 20], [0.1, 0.05])
        return [report], {'x': 1.5}, [('flag', not self.params(suite)['fail'])]


class BrokenCheck(checks.VerificationCheck):
    name = 'broken'

    def evaluate(self, suite):
        raise ZeroDivisionError('boom')


class VerificationCheckTests(SimpleTestCase):
    def test_passing_and_failing_runs(self):
        passed = StubCheck().run('fast')
        self.assertEqual(passed['status'], 'passed')
        self.assertEqual(passed['values']['assertions'], {'flag': True})
        failed = StubCheck().run('full')
        self.assertEqual(failed['status'], 'failed')
        self.assertFalse(failed['success'])

    def test_exceptions_become_error_results(self):
        result = BrokenCheck().run()
        self.assertEqual(result['status'], 'error')
        self.assertEqual(result['error'], 'ZeroDivisionError: boom')

    def test_suites(self):
        fast = checks.suite_checks('fast')
        full = checks.suite_checks('full')
        self.assertTrue(set(fast) < set(full))
        self.assertIn('marchenko_pastur', full)
        self.assertNotIn('marchenko_pastur', fast)
        with self.assertRaises(ValueError):
            checks.suite_checks('nightly')
        with self.assertRaises(ValueError):
            checks.run_check('nope')

    def test_fast_suite_checks_pass(self):
        names = (
            'exactness', 'free_convolution', 'sigma_maximisers', 'lambert_w', 'mod_phi_rate',
            'local_limit', 'large_deviations', 'density_totals', 'contour', 'mod_poisson',
        )
        for name in names:
            with self.subTest(check=name):
                result = checks.run_check(name, 'fast')
                self.assertEqual(result['status'], 'passed', result)

    @pytest.mark.slow
    def test_zero_checks_pass(self):
        for name in ('touchard_zeros', 'family3_zeros', 'moment_growth'):
            with self.subTest(check=name):
                result = checks.run_check(name, 'fast')
                self.assertEqual(result['status'], 'passed', result)


@override_settings(STIRLING_USE_CELERY=False, STIRLING_WORKERS=2)
class DispatchTests(SimpleTestCase):
    def test_results_follow_requested_order(self):
        fake = {'exactness': StubCheck(), 'contour': BrokenCheck()}
        with mock.patch.dict(checks.CHECKS, fake):
            results = dispatch_checks(['contour', 'exactness'])
        self.assertEqual([r['status'] for r in results], ['error', 'passed'])
        self.assertEqual(results[1]['reports'][0]['label'], 'stub rate')
        summary = summarize(results)
        self.assertEqual(summary, {'total': 2, 'passed': 1, 'failed': 0, 'error': 1, 'passed_all': False})

    def test_empty_dispatch(self):
        self.assertEqual(dispatch_checks([]), [])
        self.assertTrue(summarize([])['passed_all'])

    def test_task_returns_serialized_result(self):
        with mock.patch.dict(checks.CHECKS, {'exactness': StubCheck()}):
            data = run_verification_check('exactness')
        self.assertEqual(data['name'], 'stub')
        self.assertEqual(data['values']['x'], 1.5)
