import csv
import io
import json
import os
import tempfile
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from core import checks
from core.tests.test_checks import BrokenCheck, StubCheck


def run(*args):
    out, err = io.StringIO(), io.StringIO()
    call_command(*args, stdout=out, stderr=err)
    return out.getvalue(), err.getvalue()


def csv_rows(text):
    lines = text.splitlines()
    return lines[0], list(csv.reader(lines[1:]))


class TableCommandTests(SimpleTestCase):
    def test_second_kind_rows(self):
        out, _ = run('stirling_table', '--kind', 'second', '--n-max', '4')
        comment, rows = csv_rows(out)
        self.assertIn(' table kind=second n_max=4', comment)
        self.assertEqual(rows[0], ['n', 'k', 'value'])
        self.assertEqual(rows[-4:], [['4', '1', '1'], ['4', '2', '7'], ['4', '3', '6'], ['4', '4', '1']])
        self.assertEqual(len(rows), 1 + 10)

    def test_output_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'first.csv')
            out, _ = run('stirling_table', '--kind', 'first', '--n-max', '3', '--out', path)
            self.assertEqual(out, '')
            with open(path, encoding='utf-8') as handle:
                _, rows = csv_rows(handle.read())
            self.assertEqual(rows[-3:], [['3', '1', '2'], ['3', '2', '3'], ['3', '3', '1']])


class DataCommandTests(SimpleTestCase):
    def test_llt(self):
        out, _ = run('stirling_llt', '--family', '2', '--n', '20', '--theta-list', '1/2,1')
        _, rows = csv_rows(out)
        self.assertEqual(rows[0], ['theta', 'k', 'pmf', 'gaussian'])
        self.assertEqual(len(rows), 1 + 2 * 20)
        self.assertEqual(rows[1][1], '1')
        self.assertEqual({r[0] for r in rows[1:]}, {'1/2', '1'})
        total = sum(float(r[2]) for r in rows[1:] if r[0] == '1')
        self.assertAlmostEqual(total, 1.0, places=12)

    def test_zeros(self):
        out, _ = run('stirling_zeros', '--family', '1', '--n', '10', '--theta', '1', '--grid', '5')
        _, rows = csv_rows(out)
        points = [r for r in rows[1:] if r[0] == 'point']
        density = [r for r in rows[1:] if r[0] == 'density']
        self.assertEqual(len(points), 10)
        self.assertEqual(len(density), 5)
        self.assertTrue(all(float(r[2]) == 0.1 for r in points))
        self.assertTrue(all(float(r[2]) == 1.0 for r in density))

    def test_curves(self):
        out, _ = run('stirling_curves', '--kind', 'mu-sigma', '--family', '1', '--grid', '4')
        _, rows = csv_rows(out)
        self.assertEqual(rows[0], ['family', 'theta', 'mu', 'sigma2', 'sigma'])
        self.assertEqual(len(rows), 5)
        out, _ = run('stirling_curves', '--kind', 'rate', '--grid', '4')
        _, rows = csv_rows(out)
        self.assertEqual({r[0] for r in rows[1:]}, {'1', '2', '3'})

    def test_curves_at_chosen_points(self):
        out, _ = run('stirling_curves', '--kind', 'mod-phi', '--family', '2', '--z', '0,0.1+0.1j')
        _, rows = csv_rows(out)
        self.assertEqual(rows[0][:3], ['family', 'z_re', 'z_im'])
        self.assertEqual(len(rows), 3)
        self.assertAlmostEqual(float(rows[1][3]), 0.0, places=12)
        self.assertAlmostEqual(float(rows[1][5]), 1.0, places=12)
        out, _ = run('stirling_curves', '--kind', 'rate', '--family', '1', '--t', '0,0.5')
        _, rows = csv_rows(out)
        self.assertEqual([float(r[1]) for r in rows[1:]], [0.0, 0.5])

    def test_usage_errors(self):
        for args in (
            ('stirling_zeros', '--family', '3', '--n', '10', '--theta', '-2'),
            ('stirling_llt', '--family', '3', '--n', '10', '--theta-list', '1/3'),
            ('stirling_table', '--kind', 'second', '--n-max', '-1'),
        ):
            with self.assertRaises(CommandError) as caught:
                run(*args)
            self.assertEqual(caught.exception.returncode, 2, args)


@override_settings(STIRLING_USE_CELERY=False, STIRLING_WORKERS=2)
class VerifyCommandTests(SimpleTestCase):
    def test_all_passed(self):
        with mock.patch.dict(checks.CHECKS, {'exactness': StubCheck()}):
            out, err = run('stirling_verify', '--checks', 'exactness', '--format', 'json')
        document = json.loads(out)
        self.assertTrue(document['result']['summary']['passed_all'])
        self.assertEqual(document['config']['checks'], 'exactness')
        self.assertIn('All 1 checks passed', err)

    def test_failure_exit_code(self):
        with mock.patch.dict(checks.CHECKS, {'exactness': StubCheck(), 'contour': BrokenCheck()}):
            with self.assertRaises(CommandError) as caught:
                run('stirling_verify', '--checks', 'exactness,contour')
        self.assertEqual(caught.exception.returncode, 1)

    def test_missing_output_directory_is_a_usage_error(self):
        with mock.patch('core.management.commands.stirling_verify.dispatch_checks') as dispatch:
            with self.assertRaises(CommandError) as caught:
                run('stirling_verify', '--checks', 'exactness', '--out', '/nonexistent-stirling-dir/report.json')
        self.assertEqual(caught.exception.returncode, 2)
        dispatch.assert_not_called()

    def test_write_failure_is_a_usage_error(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'report.json')
            with mock.patch.dict(checks.CHECKS, {'exactness': StubCheck()}), \
                    mock.patch('core.management.base.write_output', side_effect=PermissionError('denied')):
                with self.assertRaises(CommandError) as caught:
                    run('stirling_verify', '--checks', 'exactness', '--out', path)
        self.assertEqual(caught.exception.returncode, 2)
        self.assertIn('denied', str(caught.exception))

    def test_unknown_check(self):
        with self.assertRaises(CommandError) as caught:
            run('stirling_verify', '--checks', 'nope')
        self.assertEqual(caught.exception.returncode, 2)
