"""Synthetic demo corpus: 1408 students and a 28-course curriculum.

No institutional records ship with this project, so the demo inputs are
generated. Cohorts run WS15 through WS20 with summer intakes roughly a tenth
the size of winter ones. The course table is a plausible six-semester
computer-science-flavored program with prerequisite chains.

``curriculum_rows(allpass=True)`` yields a variant where every pass
probability is 1 and no course has prerequisites; with five courses per
semester everyone graduates in exactly ceil(28/5) = 6 semesters, which makes
whole-pipeline outputs checkable by hand. In the allpass table the base
likelihoods step down by at least 1.6 between intended semesters while the
selection adjustments can move a score by at most 0.7, so the selection
order is forced: all semester-1 courses first, then semester-2, and so on,
in file order within a semester.

Generated grades are always present; grade imputation is exercised by unit
fixtures, not by this corpus.
"""

from __future__ import annotations

import random
from pathlib import Path
from typing import Optional

from .etl import CurriculumCsvDialect, GERMAN_CURRICULUM, GERMAN_STUDENTS, StudentCsvDialect

CORPUS_SEED = 20150
TOTAL_STUDENTS = 1408

# (cohort display, size): winter intakes dwarf summer ones, sizes sum to 1408.
COHORT_SIZES = (
    ("WS15", 217), ("SS16", 22), ("WS16", 217), ("SS17", 22),
    ("WS17", 216), ("SS18", 22), ("WS18", 216), ("SS19", 22),
    ("WS19", 216), ("SS20", 22), ("WS20", 216),
)

# name, pass prob group 1..3, base likelihood, prerequisite, intended semester
COURSES = (
    ("MA_1", 0.90, 0.75, 0.55, 1.40, "", 1),
    ("PROG_1", 0.95, 0.85, 0.65, 1.30, "", 1),
    ("TI_1", 0.90, 0.80, 0.60, 1.20, "", 1),
    ("BWL_1", 0.95, 0.90, 0.80, 1.10, "", 1),
    ("ENG_1", 0.95, 0.90, 0.85, 1.00, "", 1),
    ("MA_2", 0.85, 0.70, 0.50, 1.35, "MA_1", 2),
    ("PROG_2", 0.90, 0.80, 0.60, 1.25, "PROG_1", 2),
    ("TI_2", 0.90, 0.80, 0.60, 1.15, "TI_1", 2),
    ("STAT_1", 0.90, 0.75, 0.55, 1.05, "", 2),
    ("ENG_2", 0.95, 0.90, 0.85, 0.95, "ENG_1", 2),
    ("ALG_DAT", 0.85, 0.70, 0.50, 1.30, "PROG_2", 3),
    ("DB_1", 0.90, 0.80, 0.65, 1.20, "PROG_1", 3),
    ("SWE_1", 0.90, 0.80, 0.65, 1.10, "PROG_2", 3),
    ("MA_3", 0.85, 0.70, 0.50, 1.00, "MA_2", 3),
    ("RECHT", 0.95, 0.90, 0.85, 0.90, "", 3),
    ("BS", 0.85, 0.75, 0.55, 1.25, "TI_2", 4),
    ("DB_2", 0.90, 0.80, 0.60, 1.15, "DB_1", 4),
    ("SWE_2", 0.90, 0.80, 0.60, 1.05, "SWE_1", 4),
    ("STAT_2", 0.85, 0.70, 0.50, 0.95, "STAT_1", 4),
    ("PROJ_1", 0.95, 0.90, 0.80, 0.85, "SWE_1", 4),
    ("NETZE", 0.90, 0.80, 0.60, 1.20, "BS", 5),
    ("SEC", 0.85, 0.75, 0.55, 1.10, "NETZE", 6),
    ("KI", 0.85, 0.70, 0.50, 1.00, "STAT_2", 5),
    ("SEM_1", 0.95, 0.90, 0.85, 0.90, "", 5),
    ("WAHL_1", 0.90, 0.85, 0.75, 0.80, "", 5),
    ("PROJ_2", 0.95, 0.90, 0.80, 1.05, "PROJ_1", 6),
    ("WAHL_2", 0.90, 0.85, 0.75, 0.95, "", 6),
    ("BA", 0.95, 0.90, 0.85, 0.85, "SEM_1", 6),
)

_SEMESTER_SIZES = (5, 5, 5, 5, 4, 4)


def student_rows(seed: int = CORPUS_SEED, cohorts=COHORT_SIZES) -> list[tuple]:
    """(student_id, gender, grade, season, year) tuples, ids corpus-wide unique."""
    rng = random.Random(seed)
    rows = []
    counter = 0
    for display, size in cohorts:
        season = "WS" if display.startswith("WS") else "SS"
        year = 2000 + int(display[2:])
        for _ in range(size):
            counter += 1
            gender = rng.choices(["w", "m", "d"], weights=[46, 50, 4])[0]
            grade = min(4.0, max(1.0, rng.gauss(2.3, 0.65)))
            rows.append((f"s{counter:04d}", gender, round(grade, 1), season, year))
    return rows


def _decimal(value: float, dialect_comma: bool) -> str:
    text = f"{value:.1f}"
    return text.replace(".", ",") if dialect_comma else text


def students_csv(
    dialect: StudentCsvDialect = GERMAN_STUDENTS,
    seed: int = CORPUS_SEED,
    cohorts=COHORT_SIZES,
) -> bytes:
    d = dialect
    lines = [d.separator.join(
        [d.id_column, d.gender_column, d.grade_column, d.season_column, d.year_column])]
    for student_id, gender, grade, season, year in student_rows(seed, cohorts):
        lines.append(d.separator.join(
            [student_id, gender, _decimal(grade, d.decimal_comma), season, str(year)]))
    return ("\n".join(lines) + "\n").encode(d.encoding)


def curriculum_rows(allpass: bool = False) -> list[tuple]:
    """(name, g1, g2, g3, likelihood, prerequisite, semester) tuples."""
    if not allpass:
        return [tuple(c) for c in COURSES]
    rows = []
    position_in_semester: dict[int, int] = {}
    for name, _g1, _g2, _g3, _lik, _pre, semester in COURSES:
        j = position_in_semester.get(semester, 0)
        position_in_semester[semester] = j + 1
        # Tier bases 2 apart, file-order steps of 0.1 inside a tier; see module docstring.
        likelihood = 20.0 - 2.0 * semester - 0.1 * j
        rows.append((name, 1.0, 1.0, 1.0, round(likelihood, 1), "", semester))
    return rows


def curriculum_csv(
    dialect: CurriculumCsvDialect = GERMAN_CURRICULUM,
    allpass: bool = False,
) -> bytes:
    d = dialect
    lines = [d.separator.join([
        d.name_column, *d.pass_columns, d.likelihood_column,
        d.prerequisite_column, d.semester_column,
    ])]
    for name, g1, g2, g3, likelihood, prereq, semester in curriculum_rows(allpass):
        probs = [_probability(p, d.decimal_comma) for p in (g1, g2, g3)]
        lines.append(d.separator.join(
            [name, *probs, _probability(likelihood, d.decimal_comma), prereq, str(semester)]))
    return ("\n".join(lines) + "\n").encode(d.encoding)


def _probability(value: float, dialect_comma: bool) -> str:
    text = f"{value:g}"
    if "." not in text:
        text += ".0"
    return text.replace(".", ",") if dialect_comma else text


def allpass_schedule() -> list[list[str]]:
    """Course ids taken in each of the six semesters under the allpass table."""
    by_semester: dict[int, list[str]] = {}
    for name, *_rest, semester in COURSES:
        by_semester.setdefault(semester, []).append(name)
    ordered = [by_semester[s] for s in sorted(by_semester)]
    # Five picks per semester: semester 5 borrows the best semester-6 course.
    flat = [c for tier in ordered for c in tier]
    return [flat[i * 5:(i + 1) * 5] for i in range(6)]


def write_corpus(data_dir, seed: int = CORPUS_SEED) -> list[Path]:
    out = Path(data_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "students.csv": students_csv(seed=seed),
        "curriculum.csv": curriculum_csv(),
        "curriculum_allpass.csv": curriculum_csv(allpass=True),
    }
    paths = []
    for name, data in files.items():
        path = out / name
        path.write_bytes(data)
        paths.append(path)
    return paths
