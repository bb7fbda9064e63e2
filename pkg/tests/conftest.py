import pytest
from hypothesis import settings

from studyflow.etl import (
    Curriculum,
    CourseSpec,
    StudentRecord,
    StudentTable,
    assign_groups,
)
from studyflow.params import SimulationParams, params_from_flat
from studyflow.semesters import SemesterIndex
from studyflow.synth import curriculum_csv, students_csv

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")


def make_params(**overrides) -> SimulationParams:
    """Flat-schema params with test-friendly defaults (dropout off)."""
    flat = {"dropout_chance": 0.0, "seed": 1}
    flat.update(overrides)
    params, errors = params_from_flat(flat)
    assert not errors, errors
    return params


def make_course(course_id, g1=1.0, g2=1.0, g3=1.0, likelihood=1.0,
                prerequisites=(), semester=1, offered="both") -> CourseSpec:
    return CourseSpec(
        course_id=course_id,
        name=course_id,
        pass_probs=(g1, g2, g3),
        base_likelihood=likelihood,
        prerequisites=tuple(prerequisites),
        intended_semester=semester,
        offered_in=offered,
    )


def make_curriculum(*courses) -> Curriculum:
    return Curriculum(tuple(courses))


def make_students(count, entry="WS15", grade=1.5, id_prefix="st") -> StudentTable:
    """Uniform table with groups already assigned."""
    index = SemesterIndex.parse(entry)
    records = tuple(
        StudentRecord(
            student_id=f"{id_prefix}{i:05d}",
            gender="f" if i % 2 else "m",
            mean_grade=grade,
            start_semester=index.season,
            start_year=index.year,
            entry_index=index,
        )
        for i in range(count)
    )
    table, _ = assign_groups(StudentTable(records, index.epoch))
    return table


@pytest.fixture(scope="session")
def corpus_students() -> bytes:
    return students_csv()


@pytest.fixture(scope="session")
def corpus_curriculum() -> bytes:
    return curriculum_csv()


@pytest.fixture(scope="session")
def corpus_allpass() -> bytes:
    return curriculum_csv(allpass=True)
