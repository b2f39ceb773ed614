import json
import tempfile
from pathlib import Path
from unittest import TestCase

import pandas as pd
from pydantic import ValidationError

from walshlab.reports.renderers import CsvReportRenderer, JsonReportRenderer, write_report
from walshlab.reports.schemes import ExperimentReport, Provenance


def sample_report(**kwargs) -> ExperimentReport:
    return ExperimentReport(
        experiment='sample',
        config={'p': 2},
        rows=[
            {'n': 1, 'error': 0.1, 'slope': None},
            {'n': 2, 'error': 1 / 3, 'slope': -1.25},
        ],
        summary={'slope': -1.25},
        provenance=Provenance(resolution=3),
        **kwargs,
    )


class ExperimentReportTests(TestCase):
    def test_rows_share_columns(self):
        with self.assertRaises(ValidationError):
            ExperimentReport(
                experiment='broken',
                rows=[{'n': 1}, {'m': 2}],
                provenance=Provenance(resolution=1),
            )
        self.assertEqual(sample_report().columns, ['n', 'error', 'slope'])

    def test_summary_cannot_shadow_payload_keys(self):
        for summary, rows_key in (({'config': 1}, 'rows'), ({'rows': 1}, 'rows'),
                                  ({'checks': 1}, 'checks'), ({}, 'provenance')):
            with self.assertRaises(ValidationError, msg=(summary, rows_key)):
                ExperimentReport(experiment='broken', summary=summary, rows_key=rows_key,
                                 provenance=Provenance(resolution=1))

    def test_provenance(self):
        with self.assertRaises(ValidationError):
            Provenance(resolution=31)
        stamped = sample_report().with_provenance(seed=9, stamp=True)
        self.assertEqual(stamped.provenance.seed, 9)
        self.assertIsNotNone(stamped.provenance.timestamp)
        self.assertIsNone(sample_report().with_provenance(seed=9, stamp=False).provenance.timestamp)


class RendererTests(TestCase):
    def test_csv_keeps_seventeen_digits(self):
        text = CsvReportRenderer().render(sample_report())
        lines = text.split('\n')
        self.assertEqual(lines[0], 'n,error,slope')
        self.assertEqual(lines[2], '2,0.33333333333333331,-1.25')
        self.assertTrue(text.endswith('\n'))

    def test_json_round_trip(self):
        report = sample_report()
        payload = json.loads(JsonReportRenderer().render(report))
        self.assertEqual(list(payload), ['experiment', 'slope', 'rows', 'config', 'provenance'])
        restored = ExperimentReport.from_payload(payload)
        self.assertEqual(restored, report)
        self.assertEqual(restored.rows[1]['error'], 1 / 3)

    def test_named_rows_key(self):
        report = sample_report(rows_key='per_function')
        payload = json.loads(JsonReportRenderer().render(report))
        self.assertNotIn('rows', payload)
        self.assertEqual(payload['per_function'][0]['n'], 1)
        self.assertEqual(ExperimentReport.from_payload(payload, 'per_function'), report)
        self.assertEqual(CsvReportRenderer().render(report).split('\n')[0], 'n,error,slope')

    def test_write_report(self):
        with tempfile.TemporaryDirectory() as tmp:
            outdir = Path(tmp) / 'nested'
            paths = write_report(sample_report(), outdir, 'both')
            self.assertEqual([path.name for path in paths], ['sample.csv', 'sample.json'])
            table = pd.read_csv(paths[0], float_precision='round_trip')
            self.assertEqual(table['error'].iloc[1], 1 / 3)
            self.assertEqual(json.loads(paths[1].read_text())['slope'], -1.25)
            self.assertEqual(len(write_report(sample_report(), outdir, 'json')), 1)
