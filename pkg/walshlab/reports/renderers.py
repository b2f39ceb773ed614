from pathlib import Path

import pandas as pd

from walshlab.config import settings
from walshlab.reports.schemes import ExperimentReport, OutputFormat


class ReportRenderer:
    extension: str

    def render(self, report: ExperimentReport) -> str:
        raise NotImplementedError

    def write(self, report: ExperimentReport, outdir: Path) -> Path:
        outdir.mkdir(parents=True, exist_ok=True)
        path = outdir / f"{report.experiment}.{self.extension}"
        path.write_text(self.render(report), encoding='utf-8', newline='\n')
        return path


class CsvReportRenderer(ReportRenderer):
    """Tabular rows only; floats at 17 significant digits."""
    extension = 'csv'

    def render(self, report: ExperimentReport) -> str:
        frame = pd.DataFrame(report.rows, columns=report.columns)
        return frame.to_csv(index=False, float_format=settings.FLOAT_FORMAT, lineterminator='\n')


class JsonReportRenderer(ReportRenderer):
    """Summary at the top level plus the rows; shortest round-trip float repr keeps it lossless."""
    extension = 'json'
    indent = 2

    def render(self, report: ExperimentReport) -> str:
        return report.dump_payload(indent=self.indent) + '\n'


RENDERERS: dict[str, tuple[ReportRenderer, ...]] = {
    'csv': (CsvReportRenderer(),),
    'json': (JsonReportRenderer(),),
    'both': (CsvReportRenderer(), JsonReportRenderer()),
}


def write_report(report: ExperimentReport, outdir: Path | str | None = None,
                 output: OutputFormat = 'both') -> list[Path]:
    outdir = Path(outdir) if outdir is not None else settings.OUTDIR
    return [renderer.write(report, outdir) for renderer in RENDERERS[output]]
