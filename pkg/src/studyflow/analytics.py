"""Presentation datasets derived from simulation results.

Four tables feed the result views: the per-student completion table
(``dropout``), per-cohort outcome counts (``graduation_rate``), mean time to
graduation (``study_duration``) and per-course enrollment over time
(``occupancy``). Builders return typed rows in a fixed, documented order and
``export`` turns them into canonical CSV or JSON bytes, so identical results
always serialize to identical bytes.

Row order: dropout by (entry semester, student id); graduation_rate by
(cohort, group, outcome); study_duration by (cohort, group); occupancy by
(semester, course). Means carry two decimal places in exports.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .model import ExitReason, SimulationResults
from .semesters import SemesterIndex

DATASET_NAMES = ("dropout", "graduation_rate", "study_duration", "occupancy")

# Vocabulary of the graduation-rate view; censored is kept as its own
# labeled series instead of being folded into one of the three outcomes.
OUTCOME_LABELS = {
    ExitReason.GRADUATED: "graduated",
    ExitReason.EXCEEDED_MAX_ATTEMPTS: "failed",
    ExitReason.RANDOM_DROPOUT: "left",
    ExitReason.CENSORED: "censored",
}

CSV_MEDIA_TYPE = "text/csv; charset=utf-8"
JSON_MEDIA_TYPE = "application/json"


@dataclass(frozen=True, slots=True)
class DropoutRow:
    student_id: str
    group_id: int
    start: str
    end: str
    completion: str  # raw exit reason vocabulary


@dataclass(frozen=True, slots=True)
class GraduationRateRow:
    cohort: str
    group_id: int
    outcome: str  # graduated | failed | left | censored
    count: int


@dataclass(frozen=True, slots=True)
class StudyDurationRow:
    cohort: str
    group_id: int
    mean_semesters: float
    n: int


@dataclass(frozen=True, slots=True)
class OccupancyRow:
    course_id: str
    semester: str
    enrolled: int


def dropout_dataset(results: SimulationResults) -> list[DropoutRow]:
    """One row per completion record, raw reason vocabulary."""
    records = sorted(results.records, key=lambda r: (r.entry_index.index, r.student_id))
    return [
        DropoutRow(
            student_id=r.student_id,
            group_id=r.group_id,
            start=r.entry_index.display,
            end=r.exit_index.display,
            completion=r.reason.value,
        )
        for r in records
    ]


def graduation_rate(results: SimulationResults) -> list[GraduationRateRow]:
    """Outcome counts per (entry cohort, group); zero cells are omitted."""
    counts: dict[tuple[int, int, str], int] = {}
    epoch = results.params.epoch
    for r in results.records:
        key = (r.entry_index.index, r.group_id, OUTCOME_LABELS[r.reason])
        counts[key] = counts.get(key, 0) + 1
    return [
        GraduationRateRow(
            cohort=SemesterIndex(cohort_idx, epoch).display,
            group_id=group_id,
            outcome=outcome,
            count=count,
        )
        for (cohort_idx, group_id, outcome), count in sorted(counts.items())
    ]


def study_duration(results: SimulationResults) -> list[StudyDurationRow]:
    """Mean semesters to graduation per (cohort, group); graduates only.

    Cells without a single graduate are omitted rather than zero-filled.
    """
    cells: dict[tuple[int, int], list[int]] = {}
    epoch = results.params.epoch
    for r in results.records:
        if r.reason is not ExitReason.GRADUATED:
            continue
        cells.setdefault((r.entry_index.index, r.group_id), []).append(r.semesters_studied)
    return [
        StudyDurationRow(
            cohort=SemesterIndex(cohort_idx, epoch).display,
            group_id=group_id,
            mean_semesters=sum(values) / len(values),
            n=len(values),
        )
        for (cohort_idx, group_id), values in sorted(cells.items())
    ]


def course_occupancy(results: SimulationResults) -> list[OccupancyRow]:
    """Students graded per (course, semester), straight from the seize log."""
    epoch = results.params.epoch
    return [
        OccupancyRow(
            course_id=course_id,
            semester=SemesterIndex(sem_idx, epoch).display,
            enrolled=count,
        )
        for (sem_idx, course_id), count in sorted(
            ((sem, course), n)
            for (course, sem), n in results.occupancy.items()
        )
    ]


def build_all(results: SimulationResults) -> dict:
    return {
        "dropout": dropout_dataset(results),
        "graduation_rate": graduation_rate(results),
        "study_duration": study_duration(results),
        "occupancy": course_occupancy(results),
    }


# -- serialization -----------------------------------------------------------

def _mean_out(value: float) -> float:
    return round(value, 2)


_SCHEMAS: dict[str, tuple] = {
    # name -> (row type, column names, to JSON-ready values, from parsed strings)
    "dropout": (
        DropoutRow,
        ("student_id", "group_id", "start", "end", "completion"),
        lambda r: (r.student_id, r.group_id, r.start, r.end, r.completion),
        lambda v: DropoutRow(str(v[0]), int(v[1]), str(v[2]), str(v[3]), str(v[4])),
    ),
    "graduation_rate": (
        GraduationRateRow,
        ("cohort", "group_id", "outcome", "count"),
        lambda r: (r.cohort, r.group_id, r.outcome, r.count),
        lambda v: GraduationRateRow(str(v[0]), int(v[1]), str(v[2]), int(v[3])),
    ),
    "study_duration": (
        StudyDurationRow,
        ("cohort", "group_id", "mean_semesters", "n"),
        lambda r: (r.cohort, r.group_id, _mean_out(r.mean_semesters), r.n),
        lambda v: StudyDurationRow(str(v[0]), int(v[1]), float(v[2]), int(v[3])),
    ),
    "occupancy": (
        OccupancyRow,
        ("course_id", "semester", "enrolled"),
        lambda r: (r.course_id, r.semester, r.enrolled),
        lambda v: OccupancyRow(str(v[0]), str(v[1]), int(v[2])),
    ),
}


def dataset_columns(name: str) -> tuple:
    return _SCHEMAS[name][1]


def export(name: str, rows: Sequence, fmt: str) -> bytes:
    """Canonical bytes for a dataset; same rows always give the same bytes."""
    if name not in _SCHEMAS:
        raise KeyError(f"unknown dataset {name!r}")
    _, columns, to_values, _ = _SCHEMAS[name]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            values = to_values(row)
            writer.writerow([f"{v:.2f}" if isinstance(v, float) else v for v in values])
        return buf.getvalue().encode("utf-8")
    if fmt == "json":
        payload = [dict(zip(columns, to_values(row))) for row in rows]
        return json.dumps(payload, separators=(",", ":")).encode("utf-8")
    raise ValueError(f"unknown export format {fmt!r}")


def parse_export(name: str, fmt: str, data: bytes) -> list:
    """Inverse of :func:`export` up to mean rounding; used for round-trips."""
    if name not in _SCHEMAS:
        raise KeyError(f"unknown dataset {name!r}")
    _, columns, _, from_values = _SCHEMAS[name]
    text = data.decode("utf-8")
    if fmt == "csv":
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if tuple(header or ()) != columns:
            raise ValueError(f"unexpected header for {name}: {header!r}")
        return [from_values(row) for row in reader if row]
    if fmt == "json":
        payload = json.loads(text)
        return [from_values([obj[c] for c in columns]) for obj in payload]
    raise ValueError(f"unknown export format {fmt!r}")


def export_all(datasets: Mapping) -> dict:
    """Both serializations of every dataset: name -> {csv: ..., json: ...}."""
    return {
        name: {
            "csv": export(name, rows, "csv"),
            "json": export(name, rows, "json"),
        }
        for name, rows in datasets.items()
    }


def media_type(fmt: str) -> str:
    return CSV_MEDIA_TYPE if fmt == "csv" else JSON_MEDIA_TYPE
