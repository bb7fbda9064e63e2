#!/usr/bin/env python3
"""Regenerate the golden dataset files in tests/golden/.

The golden scenario is the all-pass corpus: every pass probability is 1, no
prerequisites, no drop-out, five courses per semester. Under those inputs the
whole simulation collapses into arithmetic this script performs on its own:

* every student graduates in exactly ceil(28 / 5) = 6 semesters,
* the course order is forced by the likelihood tiers (see studyflow.synth),
  so each semester's five picks are known without running anything,
* occupancy, outcome counts and durations all follow by counting.

Nothing here imports the simulator, the analytics builders or the CSV loader;
this file IS the independent derivation the test suite compares the real
pipeline against, byte for byte. If the two disagree, one of them is wrong;
do not regenerate the goldens to make a red test green without understanding
which one.
"""

import csv
import hashlib
import io
import json
import sys
from pathlib import Path

from studyflow.synth import curriculum_csv, students_csv

GOLDEN_PARAMS = {
    "start_semester": "winter",
    "start_year": 2015,
    "end_semester": "summer",
    "end_year": 2023,
    "courses_per_semester": 5,
    "max_attempts": 3,
    "dropout_chance": 0.0,
    "seed": 42,
}
COURSES_PER_SEMESTER = 5


def semester_index(season: str, year: int) -> int:
    return 2 * (year - 2000) + (1 if season.upper() in ("WS", "WINTER") else 0)


def display(index: int) -> str:
    season = "WS" if index % 2 else "SS"
    return f"{season}{(index // 2) % 100:02d}"


def group_of(grade: float) -> int:
    if grade < 2.0:
        return 1
    if grade < 3.0:
        return 2
    return 3


def parse_students(data: bytes) -> list[tuple[str, int, int]]:
    """(student_id, group, entry index) straight from the CSV bytes."""
    rows = list(csv.reader(io.StringIO(data.decode("utf-8")), delimiter=";"))
    pos = {name: i for i, name in enumerate(rows[0])}
    students = []
    for row in rows[1:]:
        if not row:
            continue
        grade = float(row[pos["note"]].replace(",", "."))
        entry = semester_index(row[pos["startsemester"]], int(row[pos["studiumstart"]]))
        students.append((row[pos["studentid"]], group_of(grade), entry))
    return students


def parse_schedule(data: bytes) -> list[list[str]]:
    """Forced pick order: tiers by intended semester, file order within."""
    rows = list(csv.reader(io.StringIO(data.decode("utf-8")), delimiter=";"))
    pos = {name: i for i, name in enumerate(rows[0])}
    ordered: list[str] = []
    for semester in range(1, 7):
        for row in rows[1:]:
            if row and int(row[pos["semester"]]) == semester:
                ordered.append(row[pos["modulname"]])
    n = COURSES_PER_SEMESTER
    chunks = [ordered[i:i + n] for i in range(0, len(ordered), n)]
    return chunks


def emit_csv(columns, rows) -> bytes:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(str(v) for v in row))
    return ("\n".join(lines) + "\n").encode("utf-8")


def emit_json(columns, rows) -> bytes:
    payload = [dict(zip(columns, row)) for row in rows]
    return json.dumps(payload, separators=(",", ":")).encode("utf-8")


def build_datasets(students, schedule) -> dict:
    duration = len(schedule)  # 6 semesters for everyone

    dropout_rows = [
        (sid, group, display(entry), display(entry + duration - 1), "graduated")
        for sid, group, entry in sorted(students, key=lambda s: (s[2], s[0]))
    ]

    cohort_group: dict[tuple[int, int], int] = {}
    for _sid, group, entry in students:
        cohort_group[(entry, group)] = cohort_group.get((entry, group), 0) + 1

    rate_rows = [
        (display(entry), group, "graduated", count)
        for (entry, group), count in sorted(cohort_group.items())
    ]

    duration_rows_csv = [
        (display(entry), group, f"{float(duration):.2f}", count)
        for (entry, group), count in sorted(cohort_group.items())
    ]
    duration_rows_json = [
        (display(entry), group, round(float(duration), 2), count)
        for (entry, group), count in sorted(cohort_group.items())
    ]

    occupancy: dict[tuple[int, str], int] = {}
    for _sid, _group, entry in students:
        for k, courses in enumerate(schedule, start=1):
            for course in courses:
                key = (entry + k - 1, course)
                occupancy[key] = occupancy.get(key, 0) + 1
    occupancy_rows = [
        (course, display(sem), count)
        for (sem, course), count in sorted(occupancy.items())
    ]

    return {
        "dropout": {
            "columns": ("student_id", "group_id", "start", "end", "completion"),
            "csv": dropout_rows, "json": dropout_rows,
        },
        "graduation_rate": {
            "columns": ("cohort", "group_id", "outcome", "count"),
            "csv": rate_rows, "json": rate_rows,
        },
        "study_duration": {
            "columns": ("cohort", "group_id", "mean_semesters", "n"),
            "csv": duration_rows_csv, "json": duration_rows_json,
        },
        "occupancy": {
            "columns": ("course_id", "semester", "enrolled"),
            "csv": occupancy_rows, "json": occupancy_rows,
        },
    }


def main() -> int:
    out_dir = Path(__file__).resolve().parent.parent / "tests" / "golden"
    out_dir.mkdir(parents=True, exist_ok=True)

    students_bytes = students_csv()
    curriculum_bytes = curriculum_csv(allpass=True)
    students = parse_students(students_bytes)
    schedule = parse_schedule(curriculum_bytes)
    assert len(students) == 1408, len(students)
    assert sum(len(c) for c in schedule) == 28, schedule

    datasets = build_datasets(students, schedule)
    file_digests = {}
    for name, spec in datasets.items():
        for fmt, emit in (("csv", emit_csv), ("json", emit_json)):
            data = emit(spec["columns"], spec[fmt])
            path = out_dir / f"{name}.{fmt}"
            path.write_bytes(data)
            file_digests[f"{name}.{fmt}"] = hashlib.sha256(data).hexdigest()
            print(path)

    manifest = {
        "params": GOLDEN_PARAMS,
        "inputs": {
            "students": hashlib.sha256(students_bytes).hexdigest(),
            "curriculum_allpass": hashlib.sha256(curriculum_bytes).hexdigest(),
        },
        "files": file_digests,
    }
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                             encoding="utf-8")
    print(manifest_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
