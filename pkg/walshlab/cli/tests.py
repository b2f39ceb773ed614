import json
import tempfile
from pathlib import Path
from unittest import TestCase, mock

import numpy as np
import pandas as pd
from numpy.testing import assert_array_equal

from walshlab.cli.corpus import default_corpus, generate, generate_text
from walshlab.cli.exceptions import SpecGenerationError, SpecParseError
from walshlab.cli.main import run
from walshlab.cli.specs import ConstSpec, StepSpec, WalshSpec, format_spec, parse_spec
from walshlab.config import settings
from walshlab.dyadic.models import DyadicPoint
from walshlab.dyadic.services.norms import llogl_functional
from walshlab.dyadic.services.walsh import walsh_value


class ParseSpecTests(TestCase):
    def test_examples(self):
        self.assertEqual(parse_spec('const:1'), ConstSpec(value=1.0))
        self.assertEqual(parse_spec('walsh:2,1'), WalshSpec(i=2, j=1))
        self.assertEqual(parse_spec(' step:4:12345 '), StepSpec(level=4, seed=12345))

    def test_round_trip(self):
        for text in ('const:-0.5', 'const:3', 'walsh:0,7', 'rect:1,2,0,1', 'step:3:99',
                     'singular:0.25', 'singular:0.4'):
            self.assertEqual(format_spec(parse_spec(text)), text)
            spec = parse_spec(text)
            self.assertEqual(parse_spec(format_spec(spec)), spec)

    def test_error_positions(self):
        cases = {
            'pow:1': 0,
            'const': 5,
            'walsh:1': 6,
            'walsh:1,x': 8,
            'walsh:1, -2': 9,
            'step:4': 5,
            'singular:1.5': 9,
            'rect:4,2,0,1': 5,
            'const:nan': 6,
        }
        for text, position in cases.items():
            with self.assertRaises(SpecParseError, msg=text) as context:
                parse_spec(text)
            self.assertEqual(context.exception.position, position, text)


class GenerateTests(TestCase):
    def test_constant(self):
        assert_array_equal(generate_text('const:1', 2).values, np.ones((4, 4)))

    def test_walsh_product(self):
        f = generate_text('walsh:2,1', 2)
        self.assertEqual(np.linalg.matrix_rank(f.values), 1)
        self.assertEqual(f.integral(), 0.0)
        for x in range(4):
            for y in range(4):
                expected = walsh_value(2, DyadicPoint(x, 2)) * walsh_value(1, DyadicPoint(y, 2))
                self.assertEqual(f.values[x, y], expected)

    def test_rectangle(self):
        f = generate_text('rect:1,1,0,2', 2)
        expected = np.zeros((4, 4))
        expected[2:, 0] = 1.0
        assert_array_equal(f.values, expected)

    def test_step_is_deterministic(self):
        first = generate_text('step:4:12345', 6)
        second = generate_text('step:4:12345', 6)
        self.assertEqual(first.values.tobytes(), second.values.tobytes())
        self.assertEqual(len(np.unique(first.values)), 256)
        self.assertTrue(np.all(np.abs(first.values) <= 1.0))

    def test_singular(self):
        f = generate_text('singular:0.25', 4)
        self.assertTrue(np.all(np.isfinite(f.values)) and np.all(f.values > 0))
        self.assertTrue(np.isfinite(llogl_functional(f)))
        self.assertAlmostEqual(f.values[0, 0], (0.5 / 16) ** -0.5, places=12)

    def test_errors(self):
        for text in ('step:5:1', 'walsh:4,0', 'rect:0,3,0,1'):
            with self.assertRaises(SpecGenerationError, msg=text):
                generate(parse_spec(text), 2)

    def test_default_corpus(self):
        corpus = default_corpus(2, seed=3)
        self.assertNotIn('walsh:3,5', corpus)
        self.assertNotIn('step:4:3', corpus)
        self.assertIn('step:2:3', corpus)
        self.assertIn('singular:0.4', default_corpus(6))
        self.assertEqual(len(default_corpus(6)), 10)


class RunTests(TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)
        self.outdir = Path(self._tmp.name)

    def run_command(self, *argv: str, outdir: Path | None = None) -> int:
        return run([*argv, '--outdir', str(outdir or self.outdir)])

    def test_identities(self):
        with self.assertLogs('experiments', 'INFO') as logs:
            self.assertEqual(self.run_command('identities', '--n-max', '6'), 0)
        report = json.loads((self.outdir / 'identities.json').read_text())
        self.assertTrue({'checked', 'passed', 'first_failure'} <= set(report))
        self.assertTrue(report['ok'])
        self.assertEqual(report['passed'], report['checked'])
        self.assertIsNone(report['first_failure'])
        self.assertEqual([row['name'] for row in report['checks']], ['schipp', 'dyadic_dirichlet'])
        self.assertEqual(logs.records[0].command, 'identities')
        self.assertEqual(logs.records[0].exit_code, 0)

    def test_strong_means(self):
        code = self.run_command('strong-means', '--p', '2', '--function', 'step:4:1',
                                '--n', '16,64,256', '--resolution', '8', '--output', 'csv')
        self.assertEqual(code, 0)
        table = pd.read_csv(self.outdir / 'strong_means.csv')
        self.assertEqual(list(table['n']), [16, 64, 256])
        self.assertTrue(table['sup_error'].is_monotonic_decreasing)
        self.assertFalse((self.outdir / 'strong_means.json').exists())

    def test_phi_means(self):
        code = self.run_command('strong-means', '--function', 'step:2:1', '--n', '4,8',
                                '--resolution', '3', '--phi', 'exp:1')
        self.assertEqual(code, 0)
        self.assertEqual(len(pd.read_csv(self.outdir / 'phi_means.csv')), 2)

    def test_phi_overflow_is_a_check_failure(self):
        code = self.run_command('strong-means', '--function', 'const:1000', '--n', '4',
                                '--resolution', '3', '--phi', 'exp:1')
        self.assertEqual(code, 1)
        self.assertEqual(list(self.outdir.iterdir()), [])

    def test_global_flags_at_any_level(self):
        self.assertEqual(run(['--resolution', '3', '--seed', '2', 'transform',
                              '--outdir', str(self.outdir)]), 0)
        report = json.loads((self.outdir / 'transform.json').read_text())
        self.assertEqual(report['provenance']['resolution'], 3)
        self.assertEqual(report['provenance']['seed'], 2)
        self.assertEqual(report['config']['function'], 'step:3:2')

        self.assertEqual(run(['--resolution', '2', 'transform', '--resolution', '3',
                              '--outdir', str(self.outdir)]), 0)
        report = json.loads((self.outdir / 'transform.json').read_text())
        self.assertEqual(report['provenance']['resolution'], 3)

        self.assertEqual(run(['lab', '--resolution', '3', '--output', 'json', 'decompose',
                              '--samples', '2', '--outdir', str(self.outdir)]), 0)
        report = json.loads((self.outdir / 'decomposition.json').read_text())
        self.assertEqual(report['provenance']['resolution'], 3)
        self.assertFalse((self.outdir / 'decomposition.csv').exists())

    def test_usage_errors(self):
        self.assertEqual(self.run_command('identities', '--bogus'), 2)
        self.assertEqual(self.run_command('transform', '--function', 'foo:1'), 2)
        self.assertEqual(self.run_command('transform', '--function', 'step:5:1',
                                          '--resolution', '3'), 2)
        self.assertEqual(self.run_command('identities', '--n-max', '13'), 2)
        self.assertEqual(self.run_command('lab', 'duality', '--resolution', '3', '--x', '1'), 2)
        self.assertEqual(run(['nonsense']), 2)

    def test_transform(self):
        self.assertEqual(self.run_command('transform', '--resolution', '4'), 0)
        self.assertTrue((self.outdir / 'transform_spectrum.csv').exists())
        report = json.loads((self.outdir / 'transform.json').read_text())
        self.assertTrue(report['ok'])

    def test_grid_outputs(self):
        self.assertEqual(self.run_command('maximal', '--op', 'A', '--resolution', '3'), 0)
        self.assertTrue((self.outdir / 'maximal_a.csv').exists())
        self.assertEqual(self.run_command('vop', '--axis', '2', '--n', '2', '--resolution', '3'), 0)
        self.assertEqual(len(pd.read_csv(self.outdir / 'vop.csv')), settings.LAMBDA_GRID_POINTS)

    def test_lab_actions(self):
        for argv in (
            ('lab', 'decompose', '--resolution', '4', '--n', '3', '--samples', '3'),
            ('lab', 'decompose', '--resolution', '3', '--exact', '--samples', '2'),
            ('lab', 'mainest', '--resolution', '4'),
            ('lab', 'duality', '--resolution', '3'),
            ('lab', 'duality', '--resolution', '3', '--x', '2', '--y', '5'),
            ('lab', 'maximal-bounds', '--resolution', '3'),
            ('lab', 'weak-type', '--resolution', '3', '--operator', 'v',
             '--function', 'const:1', '--function', 'step:2:1'),
        ):
            self.assertEqual(self.run_command(*argv), 0, argv)
        report = json.loads((self.outdir / 'weak_type.json').read_text())
        self.assertTrue({'operator', 'resolution', 'per_function', 'corpus_max'} <= set(report))
        self.assertNotIn('rows', report)
        self.assertEqual([row['spec'] for row in report['per_function']], ['const:1', 'step:2:1'])
        self.assertEqual(list(report['per_function'][0]), ['spec', 'sup_constant', 'argmax_lambda'])
        self.assertEqual(report['operator'], 'v')
        self.assertEqual(report['resolution'], 3)
        self.assertEqual(report['corpus_max'],
                         max(row['sup_constant'] for row in report['per_function']))

    def test_output_is_byte_identical_across_thread_counts(self):
        outputs = []
        for threads, name in ((1, 'serial'), (4, 'threaded')):
            outdir = self.outdir / name
            with mock.patch.object(settings, 'THREADS', threads):
                self.assertEqual(
                    self.run_command('lab', 'weak-type', '--resolution', '4', '--seed', '5',
                                     outdir=outdir),
                    0,
                )
            outputs.append(
                [(outdir / f"weak_type.{ext}").read_bytes() for ext in ('csv', 'json')]
            )
        self.assertEqual(outputs[0], outputs[1])
