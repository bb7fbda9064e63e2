"""Discrete-event simulation of student flow through a modular study program."""

from .analytics import (
    DATASET_NAMES,
    build_all,
    course_occupancy,
    dropout_dataset,
    export,
    export_all,
    graduation_rate,
    parse_export,
    study_duration,
)
from .etl import (
    Curriculum,
    CourseSpec,
    EtlError,
    GERMAN_CURRICULUM,
    GERMAN_STUDENTS,
    PLAIN_CURRICULUM,
    PLAIN_STUDENTS,
    StudentRecord,
    StudentTable,
    assign_groups,
    attach_semester_counter,
    filter_cohorts,
    group_of,
    load_curriculum,
    load_students,
)
from .kernel import Engine, MonitorLog, Process, create_engine
from .model import (
    CompletionRecord,
    ExitReason,
    SimulationResults,
    StudentState,
    advance_semester,
    check_prerequisites,
    course_selection,
    grade_attempt,
    run_cohorts,
)
from .params import (
    FieldError,
    SelectionWeights,
    SimulationParams,
    default_params,
    params_from_flat,
    params_to_flat,
    validate_params,
)
from .runner import RunArtifacts, perform_run
from .semesters import SemesterIndex, SemesterParseError
from .store import RunDescriptor, RunStore

__version__ = "0.1.0"

__all__ = [
    "DATASET_NAMES",
    "build_all",
    "course_occupancy",
    "dropout_dataset",
    "export",
    "export_all",
    "graduation_rate",
    "parse_export",
    "study_duration",
    "Curriculum",
    "CourseSpec",
    "EtlError",
    "GERMAN_CURRICULUM",
    "GERMAN_STUDENTS",
    "PLAIN_CURRICULUM",
    "PLAIN_STUDENTS",
    "StudentRecord",
    "StudentTable",
    "assign_groups",
    "attach_semester_counter",
    "filter_cohorts",
    "group_of",
    "load_curriculum",
    "load_students",
    "Engine",
    "MonitorLog",
    "Process",
    "create_engine",
    "CompletionRecord",
    "ExitReason",
    "SimulationResults",
    "StudentState",
    "advance_semester",
    "check_prerequisites",
    "course_selection",
    "grade_attempt",
    "run_cohorts",
    "FieldError",
    "SelectionWeights",
    "SimulationParams",
    "default_params",
    "params_from_flat",
    "params_to_flat",
    "validate_params",
    "RunArtifacts",
    "perform_run",
    "SemesterIndex",
    "SemesterParseError",
    "RunDescriptor",
    "RunStore",
    "__version__",
]
