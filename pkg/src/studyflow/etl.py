"""Ingestion and validation of the student and curriculum CSV exports.

The default dialect mirrors the campus-management export this tool was built
around: semicolon-separated, decimal comma, German column names
(``studentid``, ``geschlecht``, ``note``, ``startsemester``, ``studiumstart``
for students; ``modulname``, ``bestehen_g1..g3``, ``auswahl``,
``voraussetzung``, ``semester`` for the curriculum). All loaders accept either
raw bytes (request bodies) or a file path.

Students whose grade cell is empty receive a grade drawn uniformly from
[1.0, 4.0], keyed by (seed, student id) so imputation is reproducible and
independent of row order; such rows are flagged ``grade_imputed``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import random
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Union

from .semesters import DEFAULT_EPOCH, SUMMER, WINTER, SemesterIndex

Source = Union[bytes, bytearray, str, os.PathLike]

GRADE_MIN = 1.0
GRADE_MAX = 4.0

# Ability bands by mean grade; groups 1 and 2 are half-open, group 3 is
# closed at 4.0 so the three bands partition [1.0, 4.0] exactly.
GROUP_BANDS = ((1.0, 2.0), (2.0, 3.0), (3.0, 4.0))

_GENDER_MAP = {
    "f": "f", "w": "f", "weiblich": "f", "female": "f",
    "m": "m", "maennlich": "m", "männlich": "m", "male": "m",
}
_SEASON_MAP = {
    "ws": WINTER, "winter": WINTER, "wintersemester": WINTER, "w": WINTER,
    "ss": SUMMER, "sommer": SUMMER, "sommersemester": SUMMER, "summer": SUMMER, "s": SUMMER,
}
_OFFERED_MAP = {
    "": "both", "beide": "both", "both": "both", "alle": "both",
    "ws": WINTER, "winter": WINTER, "ss": SUMMER, "sommer": SUMMER, "summer": SUMMER,
}
_TRUTHY = {"1", "true", "ja", "yes", "x"}


class EtlError(Exception):
    """Base class for ingestion failures."""


class MalformedCsv(EtlError):
    """Structural problem: undecodable bytes, missing headers, ragged rows."""


class EmptyInput(EtlError):
    """The file parsed but contains no data rows."""


class InvertedWindow(EtlError):
    pass


class AsOfBeforeEntry(EtlError):
    pass


class UnknownPrerequisite(EtlError):
    pass


class PrerequisiteCycle(EtlError):
    def __init__(self, cycle: list[str]):
        super().__init__("prerequisite cycle: " + " -> ".join(cycle))
        self.cycle = cycle


@dataclass(frozen=True)
class RowError:
    row: int  # 1-based line number in the source file (header is line 1)
    field: str
    message: str

    def __str__(self) -> str:
        return f"row {self.row}, field {self.field!r}: {self.message}"


class RowValidation(EtlError):
    """One or more rows failed validation; carries every diagnostic."""

    def __init__(self, errors: list[RowError]):
        super().__init__("; ".join(str(e) for e in errors))
        self.errors = errors


@dataclass(frozen=True)
class StudentCsvDialect:
    separator: str = ";"
    decimal_comma: bool = True
    encoding: str = "utf-8"
    id_column: str = "studentid"
    gender_column: str = "geschlecht"
    grade_column: str = "note"
    season_column: str = "startsemester"
    year_column: str = "studiumstart"
    status_column: str = "studium_beendet"  # optional: nonzero marks a finished degree
    epoch: int = DEFAULT_EPOCH

    @property
    def required_columns(self) -> tuple[str, ...]:
        return (
            self.id_column,
            self.gender_column,
            self.grade_column,
            self.season_column,
            self.year_column,
        )


@dataclass(frozen=True)
class CurriculumCsvDialect:
    separator: str = ";"
    decimal_comma: bool = True
    encoding: str = "utf-8"
    name_column: str = "modulname"
    pass_columns: tuple[str, str, str] = ("bestehen_g1", "bestehen_g2", "bestehen_g3")
    likelihood_column: str = "auswahl"
    prerequisite_column: str = "voraussetzung"
    semester_column: str = "semester"
    offered_column: str = "angebot"  # optional: winter / sommer / beide
    # Multi-prerequisite extension: off by default, a delimiter in the
    # prerequisite cell is then a validation error rather than a list.
    multi_prerequisites: bool = False
    prerequisite_delimiter: str = "|"

    @property
    def required_columns(self) -> tuple[str, ...]:
        return (
            self.name_column,
            *self.pass_columns,
            self.likelihood_column,
            self.prerequisite_column,
            self.semester_column,
        )


GERMAN_STUDENTS = StudentCsvDialect()
GERMAN_CURRICULUM = CurriculumCsvDialect()
PLAIN_STUDENTS = StudentCsvDialect(separator=",", decimal_comma=False)
PLAIN_CURRICULUM = CurriculumCsvDialect(separator=",", decimal_comma=False)


@dataclass(frozen=True)
class StudentRecord:
    student_id: str
    gender: str  # "f", "m" or "other"
    mean_grade: float
    start_semester: str  # "winter" or "summer"
    start_year: int
    entry_index: SemesterIndex
    semester_count: Optional[int] = None
    group_id: Optional[int] = None
    grade_imputed: bool = False
    finished: bool = False


@dataclass(frozen=True)
class GroupSummary:
    group_id: int
    grade_band: tuple[float, float]
    member_count: int
    finished_count: int
    active_count: int

    @property
    def dropped_count(self) -> int:
        return self.member_count - self.finished_count - self.active_count


@dataclass(frozen=True)
class StudentTable:
    records: tuple[StudentRecord, ...]
    epoch: int = DEFAULT_EPOCH

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def to_json(self) -> str:
        rows = []
        for r in self.records:
            rows.append({
                "student_id": r.student_id,
                "gender": r.gender,
                "mean_grade": r.mean_grade,
                "start_semester": r.start_semester,
                "start_year": r.start_year,
                "entry": r.entry_index.display,
                "semester_count": r.semester_count,
                "group_id": r.group_id,
                "grade_imputed": r.grade_imputed,
                "finished": r.finished,
            })
        return json.dumps({"epoch": self.epoch, "students": rows}, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "StudentTable":
        payload = json.loads(text)
        epoch = payload["epoch"]
        records = []
        for row in payload["students"]:
            records.append(StudentRecord(
                student_id=row["student_id"],
                gender=row["gender"],
                mean_grade=row["mean_grade"],
                start_semester=row["start_semester"],
                start_year=row["start_year"],
                entry_index=SemesterIndex.parse(row["entry"], epoch),
                semester_count=row["semester_count"],
                group_id=row["group_id"],
                grade_imputed=row["grade_imputed"],
                finished=row["finished"],
            ))
        return cls(tuple(records), epoch)


@dataclass(frozen=True)
class CourseSpec:
    course_id: str
    name: str
    pass_probs: tuple[float, float, float]  # per group 1..3
    base_likelihood: float
    prerequisites: tuple[str, ...]
    intended_semester: int
    offered_in: str = "both"  # "winter", "summer" or "both"

    @property
    def prerequisite(self) -> Optional[str]:
        return self.prerequisites[0] if self.prerequisites else None

    def pass_prob(self, group_id: int) -> float:
        return self.pass_probs[group_id - 1]


@dataclass(frozen=True)
class Curriculum:
    courses: tuple[CourseSpec, ...]
    by_id: Mapping[str, CourseSpec] = field(repr=False, default=None)
    dependents: Mapping[str, tuple[str, ...]] = field(repr=False, default=None)
    order: Mapping[str, int] = field(repr=False, default=None)
    # Flat (id, likelihood, intended, first prereq, further prereqs,
    # dependents, offered) tuples; the selection inner loop runs millions of
    # times, attribute access and set algebra are too slow there. The first
    # prerequisite is split out because almost every course has at most one.
    selection_rows: tuple = field(repr=False, default=None)

    def __post_init__(self):
        by_id = {c.course_id: c for c in self.courses}
        dependents: dict[str, list[str]] = {c.course_id: [] for c in self.courses}
        for c in self.courses:
            for p in c.prerequisites:
                dependents[p].append(c.course_id)
        dependents_t = {k: tuple(v) for k, v in dependents.items()}
        object.__setattr__(self, "by_id", by_id)
        object.__setattr__(self, "dependents", dependents_t)
        object.__setattr__(self, "order", {c.course_id: i for i, c in enumerate(self.courses)})
        object.__setattr__(self, "selection_rows", tuple(
            (c.course_id, c.base_likelihood, c.intended_semester,
             c.prerequisites[0] if c.prerequisites else None,
             c.prerequisites[1:],
             dependents_t[c.course_id], c.offered_in)
            for c in self.courses
        ))

    @property
    def count(self) -> int:
        return len(self.courses)

    def __iter__(self):
        return iter(self.courses)

    def to_json(self) -> str:
        rows = []
        for c in self.courses:
            rows.append({
                "course_id": c.course_id,
                "name": c.name,
                "pass_probs": list(c.pass_probs),
                "base_likelihood": c.base_likelihood,
                "prerequisites": list(c.prerequisites),
                "intended_semester": c.intended_semester,
                "offered_in": c.offered_in,
            })
        return json.dumps({"courses": rows}, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Curriculum":
        payload = json.loads(text)
        courses = tuple(
            CourseSpec(
                course_id=row["course_id"],
                name=row["name"],
                pass_probs=tuple(row["pass_probs"]),
                base_likelihood=row["base_likelihood"],
                prerequisites=tuple(row["prerequisites"]),
                intended_semester=row["intended_semester"],
                offered_in=row["offered_in"],
            )
            for row in payload["courses"]
        )
        return cls(courses)


# -- parsing helpers ---------------------------------------------------------


def _read_rows(source: Source, separator: str, encoding: str) -> list[list[str]]:
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    else:
        with open(source, "rb") as fh:
            data = fh.read()
    try:
        text = data.decode(encoding)
    except UnicodeDecodeError as exc:
        raise MalformedCsv(f"undecodable input: {exc}") from exc
    reader = csv.reader(io.StringIO(text), delimiter=separator)
    return [row for row in reader if row and any(cell.strip() for cell in row)]


def _header_map(header: list[str], required: Iterable[str], optional: Iterable[str] = ()) -> dict[str, int]:
    positions = {name.strip().lower(): i for i, name in enumerate(header)}
    mapping = {}
    missing = []
    for col in required:
        if col.lower() in positions:
            mapping[col] = positions[col.lower()]
        else:
            missing.append(col)
    if missing:
        raise MalformedCsv(f"missing required column(s): {', '.join(missing)}")
    for col in optional:
        if col.lower() in positions:
            mapping[col] = positions[col.lower()]
    return mapping


def _parse_decimal(cell: str, decimal_comma: bool) -> float:
    text = cell.strip()
    if decimal_comma:
        text = text.replace(",", ".")
    return float(text)


def _imputed_grade(seed: int, student_id: str) -> float:
    digest = hashlib.sha256(f"impute:{seed}:{student_id}".encode("utf-8")).digest()
    rng = random.Random(int.from_bytes(digest[:16], "big"))
    return GRADE_MIN + (GRADE_MAX - GRADE_MIN) * rng.random()


# -- the five preparation steps ----------------------------------------------


def load_students(
    source: Source,
    dialect: StudentCsvDialect = GERMAN_STUDENTS,
    imputation_seed: int = 0,
) -> StudentTable:
    """Step 1: read and validate the student export.

    Raises :class:`MalformedCsv` for structural problems, :class:`EmptyInput`
    for a header-only file and :class:`RowValidation` with one diagnostic per
    offending (row, field) otherwise.
    """
    rows = _read_rows(source, dialect.separator, dialect.encoding)
    if not rows:
        raise MalformedCsv("input has no header row")
    columns = _header_map(rows[0], dialect.required_columns, (dialect.status_column,))
    if len(rows) == 1:
        raise EmptyInput("no student rows after the header")

    errors: list[RowError] = []
    records: list[StudentRecord] = []
    seen_ids: set[str] = set()
    width = max(columns.values()) + 1
    for i, row in enumerate(rows[1:]):
        line = i + 2
        if len(row) < width:
            errors.append(RowError(line, "-", f"expected at least {width} cells, got {len(row)}"))
            continue

        def cell(col: str) -> str:
            return row[columns[col]].strip()

        student_id = cell(dialect.id_column)
        if not student_id:
            errors.append(RowError(line, dialect.id_column, "empty student id"))
            continue
        if student_id in seen_ids:
            errors.append(RowError(line, dialect.id_column, f"duplicate student id {student_id!r}"))
            continue

        gender = _GENDER_MAP.get(cell(dialect.gender_column).lower(), "other")

        grade_cell = cell(dialect.grade_column)
        imputed = False
        if grade_cell == "":
            grade = _imputed_grade(imputation_seed, student_id)
            imputed = True
        else:
            try:
                grade = _parse_decimal(grade_cell, dialect.decimal_comma)
            except ValueError:
                errors.append(RowError(line, dialect.grade_column, f"not a number: {grade_cell!r}"))
                continue
            if not (GRADE_MIN <= grade <= GRADE_MAX):
                errors.append(RowError(
                    line, dialect.grade_column,
                    f"mean grade {grade} outside [{GRADE_MIN}, {GRADE_MAX}]",
                ))
                continue

        season_cell = cell(dialect.season_column)
        season = _SEASON_MAP.get(season_cell.lower())
        if season is None:
            errors.append(RowError(line, dialect.season_column, f"unknown semester {season_cell!r}"))
            continue

        year_cell = cell(dialect.year_column)
        try:
            year = int(year_cell)
        except ValueError:
            errors.append(RowError(line, dialect.year_column, f"not a year: {year_cell!r}"))
            continue
        if year < dialect.epoch or year > dialect.epoch + 99:
            errors.append(RowError(
                line, dialect.year_column,
                f"year {year} outside [{dialect.epoch}, {dialect.epoch + 99}]",
            ))
            continue

        finished = False
        if dialect.status_column in columns:
            finished = cell(dialect.status_column).lower() in _TRUTHY

        seen_ids.add(student_id)
        records.append(StudentRecord(
            student_id=student_id,
            gender=gender,
            mean_grade=grade,
            start_semester=season,
            start_year=year,
            entry_index=SemesterIndex.from_parts(season, year, dialect.epoch),
            grade_imputed=imputed,
            finished=finished,
        ))

    if errors:
        raise RowValidation(errors)
    return StudentTable(tuple(records), dialect.epoch)


def group_of(grade: float) -> int:
    """Ability group for a mean grade; bands are [1,2), [2,3) and [3,4]."""
    if not (GRADE_MIN <= grade <= GRADE_MAX):
        raise ValueError(f"grade {grade} outside [{GRADE_MIN}, {GRADE_MAX}]")
    if grade < 2.0:
        return 1
    if grade < 3.0:
        return 2
    return 3


def assign_groups(students: StudentTable) -> tuple[StudentTable, tuple[GroupSummary, GroupSummary, GroupSummary]]:
    """Step 2: attach the ability group and summarize the three bands."""
    records = tuple(replace(r, group_id=group_of(r.mean_grade)) for r in students)
    summaries = []
    for gid, band in zip((1, 2, 3), GROUP_BANDS):
        members = [r for r in records if r.group_id == gid]
        finished = sum(1 for r in members if r.finished)
        summaries.append(GroupSummary(
            group_id=gid,
            grade_band=band,
            member_count=len(members),
            finished_count=finished,
            active_count=len(members) - finished,
        ))
    return StudentTable(records, students.epoch), tuple(summaries)


def find_cycle(edges: Mapping[str, Iterable[str]]) -> Optional[list[str]]:
    """Return one cycle in the directed graph, or None if it is acyclic.

    Iterative three-color depth-first search; nodes are visited in sorted
    order so the reported cycle is stable.
    """
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {node: WHITE for node in edges}
    parent: dict[str, str] = {}
    for start in sorted(edges):
        if color[start] != WHITE:
            continue
        stack = [(start, iter(sorted(edges[start])))]
        color[start] = GRAY
        while stack:
            node, children = stack[-1]
            advanced = False
            for child in children:
                if child not in color:
                    continue
                if color[child] == GRAY:
                    cycle = [child, node]
                    cursor = node
                    while cursor != child:
                        cursor = parent[cursor]
                        cycle.append(cursor)
                    cycle.reverse()
                    return cycle
                if color[child] == WHITE:
                    color[child] = GRAY
                    parent[child] = node
                    stack.append((child, iter(sorted(edges[child]))))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()
    return None


def load_curriculum(
    source: Source,
    dialect: CurriculumCsvDialect = GERMAN_CURRICULUM,
) -> Curriculum:
    """Step 3: read the curriculum, resolve prerequisites, verify acyclicity."""
    rows = _read_rows(source, dialect.separator, dialect.encoding)
    if not rows:
        raise MalformedCsv("input has no header row")
    columns = _header_map(rows[0], dialect.required_columns, (dialect.offered_column,))
    if len(rows) == 1:
        raise EmptyInput("no course rows after the header")

    errors: list[RowError] = []
    courses: list[CourseSpec] = []
    seen: set[str] = set()
    width = max(columns.values()) + 1
    for i, row in enumerate(rows[1:]):
        line = i + 2
        if len(row) < width:
            errors.append(RowError(line, "-", f"expected at least {width} cells, got {len(row)}"))
            continue

        def cell(col: str) -> str:
            return row[columns[col]].strip()

        name = cell(dialect.name_column)
        if not name:
            errors.append(RowError(line, dialect.name_column, "empty module name"))
            continue
        if name in seen:
            errors.append(RowError(line, dialect.name_column, f"duplicate module {name!r}"))
            continue

        probs = []
        bad = False
        for col in dialect.pass_columns:
            try:
                p = _parse_decimal(cell(col), dialect.decimal_comma)
            except ValueError:
                errors.append(RowError(line, col, f"not a number: {cell(col)!r}"))
                bad = True
                break
            if not (0.0 <= p <= 1.0):
                errors.append(RowError(line, col, f"probability {p} outside [0, 1]"))
                bad = True
                break
            probs.append(p)
        if bad:
            continue

        try:
            likelihood = _parse_decimal(cell(dialect.likelihood_column), dialect.decimal_comma)
        except ValueError:
            errors.append(RowError(line, dialect.likelihood_column, f"not a number: {cell(dialect.likelihood_column)!r}"))
            continue
        if likelihood < 0:
            errors.append(RowError(line, dialect.likelihood_column, f"selection likelihood {likelihood} is negative"))
            continue

        try:
            semester = int(cell(dialect.semester_column))
        except ValueError:
            errors.append(RowError(line, dialect.semester_column, f"not an integer: {cell(dialect.semester_column)!r}"))
            continue
        if semester < 1:
            errors.append(RowError(line, dialect.semester_column, f"intended semester {semester} must be >= 1"))
            continue

        prereq_cell = cell(dialect.prerequisite_column)
        if prereq_cell in ("", "-"):
            prerequisites: tuple[str, ...] = ()
        elif dialect.prerequisite_delimiter in prereq_cell:
            if not dialect.multi_prerequisites:
                errors.append(RowError(
                    line, dialect.prerequisite_column,
                    "multiple prerequisites are not enabled in this dialect",
                ))
                continue
            prerequisites = tuple(p.strip() for p in prereq_cell.split(dialect.prerequisite_delimiter) if p.strip())
        else:
            prerequisites = (prereq_cell,)

        offered = "both"
        if dialect.offered_column in columns:
            offered_cell = cell(dialect.offered_column).lower()
            if offered_cell not in _OFFERED_MAP:
                errors.append(RowError(line, dialect.offered_column, f"unknown offering {offered_cell!r}"))
                continue
            offered = _OFFERED_MAP[offered_cell]

        seen.add(name)
        courses.append(CourseSpec(
            course_id=name,
            name=name,
            pass_probs=tuple(probs),
            base_likelihood=likelihood,
            prerequisites=prerequisites,
            intended_semester=semester,
            offered_in=offered,
        ))

    if errors:
        raise RowValidation(errors)

    known = {c.course_id for c in courses}
    for c in courses:
        for p in c.prerequisites:
            if p not in known:
                raise UnknownPrerequisite(f"course {c.course_id!r} requires unknown course {p!r}")
    cycle = find_cycle({c.course_id: c.prerequisites for c in courses})
    if cycle is not None:
        raise PrerequisiteCycle(cycle)
    return Curriculum(tuple(courses))


def filter_cohorts(students: StudentTable, window: tuple[SemesterIndex, SemesterIndex]) -> StudentTable:
    """Step 4: keep only students whose entry lies inside the closed window."""
    start, end = window
    if start > end:
        raise InvertedWindow(f"window start {start.display} after end {end.display}")
    kept = tuple(r for r in students if start <= r.entry_index <= end)
    return StudentTable(kept, students.epoch)


def attach_semester_counter(students: StudentTable, as_of: SemesterIndex) -> StudentTable:
    """Step 5: count semesters studied so far, inclusive of entry and as_of."""
    late = [r for r in students if r.entry_index > as_of]
    if late:
        raise AsOfBeforeEntry(
            f"as_of {as_of.display} precedes entry of {len(late)} student(s), "
            f"e.g. {late[0].student_id!r} ({late[0].entry_index.display})"
        )
    records = tuple(replace(r, semester_count=as_of - r.entry_index + 1) for r in students)
    return StudentTable(records, students.epoch)
