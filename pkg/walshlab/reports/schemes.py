from datetime import datetime, timezone
from typing import Any, Literal, Mapping, Optional, TypeAlias

from pydantic import BaseModel, Field, TypeAdapter, model_validator

from walshlab.config import settings

Scalar: TypeAlias = int | float | str | bool | None
OutputFormat: TypeAlias = Literal['csv', 'json', 'both']

# Top-level keys of the JSON payload that summaries must not shadow.
ENVELOPE_KEYS = frozenset({'experiment', 'config', 'provenance'})
_PAYLOAD_ADAPTER = TypeAdapter(dict[str, Any])


class Provenance(BaseModel):
    seed: Optional[int] = None
    resolution: int = Field(ge=0, le=settings.MAX_RESOLUTION)
    timestamp: Optional[datetime] = None


class ExperimentReport(BaseModel):
    experiment: str = Field(min_length=1, max_length=64)
    config: dict[str, Any] = Field(default_factory=dict)
    rows: list[dict[str, Scalar]] = Field(default_factory=list)
    summary: dict[str, Any] = Field(default_factory=dict)
    provenance: Provenance
    rows_key: str = Field(default='rows', min_length=1, exclude=True)

    @model_validator(mode="after")
    def validate_rows_share_columns(self):
        if self.rows:
            columns = list(self.rows[0])
            for index, row in enumerate(self.rows):
                if list(row) != columns:
                    raise ValueError(f"Row {index} columns {list(row)} differ from {columns}")
        return self

    @model_validator(mode="after")
    def validate_payload_keys(self):
        reserved = ENVELOPE_KEYS | {self.rows_key}
        if self.rows_key in ENVELOPE_KEYS or reserved & set(self.summary):
            raise ValueError(f"Summary keys {sorted(self.summary)} clash with {sorted(reserved)}")
        return self

    @property
    def columns(self) -> list[str]:
        return list(self.rows[0]) if self.rows else []

    def to_payload(self) -> dict[str, Any]:
        """JSON document: summary fields at the top level, rows under ``rows_key``."""
        data = self.model_dump(mode='json')
        return {
            'experiment': data['experiment'],
            **data['summary'],
            self.rows_key: data['rows'],
            'config': data['config'],
            'provenance': data['provenance'],
        }

    def dump_payload(self, indent: int | None = None) -> str:
        return _PAYLOAD_ADAPTER.dump_json(self.to_payload(), indent=indent).decode('utf-8')

    @classmethod
    def from_payload(cls, payload: Mapping[str, Any], rows_key: str = 'rows') -> 'ExperimentReport':
        summary = dict(payload)
        return cls(
            experiment=summary.pop('experiment'),
            config=summary.pop('config', {}),
            provenance=summary.pop('provenance'),
            rows=summary.pop(rows_key, []),
            summary=summary,
            rows_key=rows_key,
        )

    def with_provenance(self, seed: Optional[int] = None,
                        stamp: bool = settings.STAMP_REPORTS) -> 'ExperimentReport':
        provenance = self.provenance.model_copy(update={
            'seed': seed,
            'timestamp': datetime.now(timezone.utc) if stamp else None,
        })
        return self.model_copy(update={'provenance': provenance})
