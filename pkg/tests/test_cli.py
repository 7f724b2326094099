import io
import json
import os
import tempfile
import unittest
from unittest import mock

from gjsd.cli import load_problem, main, parse_density
from gjsd.exceptions import SpecParseError
from gjsd.expfam import MvnDensity
from gjsd.structures import Categorical, Exponential


def _run(argv):
    with mock.patch('sys.stdout', new_callable=io.StringIO) as stdout, \
            mock.patch('sys.stderr', new_callable=io.StringIO) as stderr:
        code = main(argv)
    return code, stdout.getvalue(), stderr.getvalue()


class TestParseDensity(unittest.TestCase):

    def test_grammar(self):
        self.assertIsInstance(parse_density('exponential:2'), Exponential)
        self.assertIsInstance(parse_density('normal:0,1'), MvnDensity)
        self.assertIsInstance(parse_density('categorical:0.2,0.8'), Categorical)
        cauchy = parse_density('cauchy:1,0.3')
        self.assertEqual((cauchy.location, cauchy.gamma), (1.0, 0.3))
        self.assertEqual(parse_density('cauchy:0.3').location, 0.0)

    def test_json(self):
        self.assertIsInstance(parse_density('{"family": "exponential", "rate": 2.0}'), Exponential)
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'mvn.json')
            with open(path, 'w') as stream:
                json.dump({'chart': 'ordinary', 'mu': [0.0, 1.0], 'sigma': [[1.0, 0.0], [0.0, 2.0]]}, stream)
            self.assertIsInstance(parse_density('mvn:@' + path), MvnDensity)
            self.assertIsInstance(parse_density(path), MvnDensity)

    def test_errors(self):
        for text in ('normal', 'normal:0', 'normal:a,b', 'exponential:-1', 'weibull:1,2',
                     '{"family": "poisson"}', '{broken'):
            self.assertRaises(SpecParseError, parse_density, text)


class TestDiv(unittest.TestCase):

    def test_kl_normals(self):
        code, stdout, _ = _run(['div', '--d', 'kl', 'normal:0,1', 'normal:1,1'])
        self.assertEqual(code, 0)
        report = json.loads(stdout)
        self.assertEqual(sorted(report), ['divergence', 'method', 'tolerance', 'value'])
        self.assertAlmostEqual(report['value'], 0.5, delta=1e-12)
        self.assertEqual(report['method'], 'closed_form')

    def test_harmonic_cauchy(self):
        code, stdout, _ = _run(['div', '--d', 'js', '--m', 'harmonic', 'cauchy:0.1', 'cauchy:0.5'])
        self.assertEqual(code, 0)
        self.assertAlmostEqual(json.loads(stdout)['value'], 0.15771, delta=1e-4)

    def test_text_output_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'report.txt')
            code, stdout, _ = _run(['div', '--d', 'jsd', '--format', 'text', '--output', path,
                                    'categorical:1,0', 'categorical:0,1'])
            self.assertEqual(code, 0)
            self.assertEqual(stdout, '')
            with open(path, 'r') as stream:
                lines = stream.read().splitlines()
        self.assertIn('divergence : jsd', lines)
        self.assertIn('value      : 0.6931471806', lines)


class TestErrors(unittest.TestCase):

    def test_parse_errors(self):
        for argv in (['div', 'normal:0,1'], ['div', 'normal', 'normal:0,1'], ['unknown'],
                     ['div', '--alpha', '2', 'normal:0,1', 'normal:1,1'], ['verify', 'gjs-mvn', '--cases', '0']):
            code, stdout, stderr = _run(argv)
            self.assertEqual(code, 2, argv)
            self.assertEqual(stdout, '')
            self.assertEqual(json.loads(stderr)['error'], 'SpecParseError')

    def test_numerical_error(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'problem.json')
            with open(path, 'w') as stream:
                json.dump({'family': 'raw', 'points': [[0.0], [1.0]], 'k': 3}, stream)
            code, _, stderr = _run(['cluster', path])
        self.assertEqual(code, 3)
        self.assertEqual(json.loads(stderr)['error'], 'DomainError')


class TestCommands(unittest.TestCase):

    def test_chernoff(self):
        code, stdout, _ = _run(['chernoff', 'normal:0,1', 'normal:1,1'])
        self.assertEqual(code, 0)
        report = json.loads(stdout)
        self.assertAlmostEqual(report['alpha_star'], 0.5, delta=1e-5)
        self.assertAlmostEqual(report['value'], 0.125, delta=1e-7)

    def test_verify_bhattacharyya_jensen_suite(self):
        code, stdout, _ = _run(['verify', 'bhat-jensen', '--cases', '2'])
        report = json.loads(stdout)
        self.assertEqual(code, 0)
        self.assertTrue(report['pass'])
        self.assertEqual(len(report['cases']), 4)
        self.assertTrue(all(case['suite'] == 'bhat-jensen' for case in report['cases']))

    def test_paper_table(self):
        code, stdout, _ = _run(['paper-table'])
        report = json.loads(stdout)
        self.assertEqual(code, 0)
        self.assertTrue(report['pass'], [row for row in report['rows'] if not row['pass']])
        self.assertEqual(len(report['rows']), 16)

    def test_cluster_csv(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'rates.csv')
            with open(path, 'w') as stream:
                stream.write('family=poisson,chart=ordinary\n1.0\n1.5\n2.0\n20.0\n25.0\n30.0\n')
            problem = load_problem(path)
            code, stdout, _ = _run(['cluster', path, '--k', '2', '--seed', '3'])
        self.assertEqual(problem['family'], 'poisson')
        self.assertEqual(problem['chart'], 'ordinary')
        self.assertEqual(len(problem['points']), 6)
        self.assertEqual(code, 0)
        report = json.loads(stdout)
        self.assertEqual((report['family'], report['divergence']), ('poisson', 'bregman'))
        assignment = report['assignment']
        self.assertEqual(len(set(assignment[:3])), 1)
        self.assertEqual(len(set(assignment[3:])), 1)
        self.assertNotEqual(assignment[0], assignment[3])

    def test_cluster_json_gaussians(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'gaussians.json')
            with open(path, 'w') as stream:
                json.dump({'family': 'gaussian', 'chart': 'ordinary', 'k': 2, 'divergence': 'jensen',
                           'points': [[0.0, 1.0], [0.3, 1.2], [9.0, 1.0], [9.4, 0.9]]}, stream)
            code, stdout, _ = _run(['cluster', path])
        self.assertEqual(code, 0)
        report = json.loads(stdout)
        self.assertEqual(report['divergence'], 'jensen')
        self.assertEqual(report['assignment'][0], report['assignment'][1])
        self.assertNotEqual(report['assignment'][0], report['assignment'][2])

    def test_bad_csv_header(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'bad.csv')
            with open(path, 'w') as stream:
                stream.write('poisson\n1.0\n')
            code, _, _ = _run(['cluster', path, '--k', '1'])
        self.assertEqual(code, 2)
