"""The full run pipeline shared by the CLI and the HTTP service.

Load both CSVs, group and window the students, simulate, build all four
datasets and serialize them. Everything downstream of the raw bytes is a
pure function of (params, students bytes, curriculum bytes), which is what
makes run outputs reproducible and auditable by digest.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Optional, Union

from .analytics import build_all, export_all
from .etl import (
    CurriculumCsvDialect,
    GERMAN_CURRICULUM,
    GERMAN_STUDENTS,
    StudentCsvDialect,
    assign_groups,
    filter_cohorts,
    load_curriculum,
    load_students,
)
from .model import SimulationResults, run_cohorts
from .params import SimulationParams

Source = Union[bytes, str]


@dataclass(frozen=True)
class RunArtifacts:
    results: SimulationResults
    datasets: Mapping  # name -> typed rows
    exports: Mapping  # name -> {"csv": bytes, "json": bytes}


def perform_run(
    params: SimulationParams,
    students_source: Source,
    curriculum_source: Source,
    students_dialect: Optional[StudentCsvDialect] = None,
    curriculum_dialect: Optional[CurriculumCsvDialect] = None,
) -> RunArtifacts:
    """Run one simulation end to end. Raises EtlError subclasses on bad input."""
    s_dialect = replace(students_dialect or GERMAN_STUDENTS, epoch=params.epoch)
    c_dialect = curriculum_dialect or GERMAN_CURRICULUM

    students = load_students(students_source, s_dialect, imputation_seed=params.seed)
    curriculum = load_curriculum(curriculum_source, c_dialect)
    students, _groups = assign_groups(students)
    students = filter_cohorts(students, (params.window_start, params.window_end))

    results = run_cohorts(students, curriculum, params)
    datasets = build_all(results)
    return RunArtifacts(results=results, datasets=datasets, exports=export_all(datasets))
