"""Student trajectories through a modular study program.

Each enrolled student becomes one process on the event kernel. A semester of
study is: pick up to ``courses_per_semester`` courses one by one (each pick
sees the seats taken by earlier picks), take the exam for each immediately,
then hold the seats for one time unit. At the semester boundary the student
releases everything and leaves the system when one of the exit conditions
holds, in this fixed order:

1. every course of the curriculum is passed           -> graduated
2. some course has been failed ``max_attempts`` times -> exceeded_max_attempts
3. a Bernoulli(dropout_chance) draw comes up true     -> random_dropout

otherwise the next semester starts, unless it would lie past the observation
window, in which case the student is recorded as censored.

Exam outcomes and drop-out draws come from a per-student random substream, so
a student's fate depends only on the seed and their id, never on how many
other students the run contains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping, NamedTuple, Optional, Sequence

from .etl import Curriculum, CourseSpec, StudentRecord, StudentTable
from .kernel import Engine, MonitorLog, Process, create_engine
from .params import SelectionWeights, SimulationParams
from .semesters import SemesterIndex

PASS_INCREMENT = 1.0
FAIL_INCREMENT = 0.1


class ExitReason(str, Enum):
    GRADUATED = "graduated"
    EXCEEDED_MAX_ATTEMPTS = "exceeded_max_attempts"
    RANDOM_DROPOUT = "random_dropout"
    CENSORED = "censored"


@dataclass(slots=True)
class StudentState:
    """Mutable per-student progress, owned by that student's process."""

    student_id: str
    group_id: int
    entry_index: int  # absolute semester index of the first study semester
    semester: int = 1  # 1-based count of the semester currently being studied
    passed: set = field(default_factory=set)
    fails: dict = field(default_factory=dict)
    selected_this_semester: set = field(default_factory=set)
    alive: bool = True

    def current_index(self) -> int:
        return self.entry_index + self.semester - 1

    def fail_count(self, course_id: str) -> int:
        return self.fails.get(course_id, 0)

    def legacy_value(self, course_id: str) -> float:
        """Progress folded into one number: +1 per pass, +0.1 per fail."""
        passed = PASS_INCREMENT if course_id in self.passed else 0.0
        return passed + FAIL_INCREMENT * self.fails.get(course_id, 0)


@dataclass(frozen=True, slots=True)
class CompletionRecord:
    student_id: str
    group_id: int
    entry_index: SemesterIndex
    exit_index: SemesterIndex
    semesters_studied: int
    reason: ExitReason


class GradeEvent(NamedTuple):
    """One exam attempt; seq shares the kernel's counter with seize/release."""

    seq: int
    time: int  # kernel clock, semesters after window start
    student_id: str
    course_id: str
    attempt: int
    passed: bool


def check_prerequisites(state: StudentState, course: CourseSpec) -> bool:
    return all(p in state.passed for p in course.prerequisites)


def course_selection(
    state: StudentState,
    curriculum: Curriculum,
    weights: SelectionWeights,
    max_attempts: int,
    remaining: Optional[Mapping[str, int]] = None,
    rng=None,
    jitter: float = 0.0,
) -> Optional[str]:
    """Pick the course with the highest adjusted likelihood, or None.

    ``remaining`` maps capacity-limited course ids to their free seats;
    courses absent from it are unbounded. Ties go to the lower intended
    semester, then to curriculum file order.
    """
    passed = state.passed
    fails = state.fails
    taken = state.selected_this_semester
    sem = state.semester
    winter_now = state.current_index() % 2 == 1
    exclude_unmet = weights.exclusion_mode_for_sm5
    w1, w2, w3, w4, w5 = weights.w1, weights.w2, weights.w3, weights.w4, weights.w5
    noisy = jitter > 0.0 and rng is not None

    best_id: Optional[str] = None
    best_score = 0.0
    best_intended = 0
    for cid, base, intended, prereq, more_prereqs, dependents, offered in curriculum.selection_rows:
        if cid in passed or cid in taken:
            continue
        if fails and fails.get(cid, 0) >= max_attempts:
            continue
        if remaining is not None and remaining.get(cid, 1) <= 0:
            continue
        if offered != "both" and (offered == "winter") != winter_now:
            continue
        unmet = prereq is not None and (
            prereq not in passed
            or (bool(more_prereqs) and not passed.issuperset(more_prereqs))
        )
        if unmet and exclude_unmet:
            continue

        score = base
        if sem == intended:
            score += w1
        elif sem > intended:
            score += w2
        if sem <= intended - 2:
            score += w3
        for dependent in dependents:
            if dependent not in passed:
                score += w4
                break
        if unmet:
            score += w5
        if noisy:
            score += (rng.random() * 2.0 - 1.0) * jitter

        # Strictly-greater comparison on (score, -intended), unrolled to
        # avoid a tuple allocation per row; ties keep the earlier file order.
        if best_id is None or score > best_score or (
                score == best_score and intended < best_intended):
            best_score = score
            best_intended = intended
            best_id = cid
    return best_id


def grade_attempt(state: StudentState, course: CourseSpec, rng,
                  attempt: Optional[int] = None) -> bool:
    """One exam draw against the student's group pass probability.

    ``attempt`` (1-based) is accepted so an attempt-dependent probability
    curve can slot in later; the current model keeps the probability constant
    across retakes.
    """
    p = course.pass_prob(state.group_id)
    passed = rng.random() < p
    if passed:
        state.passed.add(course.course_id)
    else:
        state.fails[course.course_id] = state.fails.get(course.course_id, 0) + 1
    return passed


def advance_semester(
    state: StudentState,
    curriculum: Curriculum,
    params: SimulationParams,
    rng,
) -> Optional[ExitReason]:
    """Semester-boundary exit checks, in their fixed order.

    Returns the exit reason, or None after moving the student into the next
    semester. The drop-out draw happens on every call that reaches it, so a
    student's stream advances identically whatever dropout_chance is.
    """
    if len(state.passed) == curriculum.count:
        return ExitReason.GRADUATED
    for count in state.fails.values():
        if count >= params.max_attempts:
            return ExitReason.EXCEEDED_MAX_ATTEMPTS
    if rng.random() < params.dropout_chance:
        return ExitReason.RANDOM_DROPOUT
    state.semester += 1
    return None


@dataclass(frozen=True)
class SimulationResults:
    params: SimulationParams
    records: tuple
    monitor_log: MonitorLog
    occupancy: Mapping  # (course_id, absolute semester index) -> students graded
    grade_events: tuple
    final_progress: Mapping  # student_id -> course_id -> (passed, fail_count)
    final_attributes: Mapping  # student_id -> attribute name -> value
    enrolled: int

    def records_by_reason(self, reason: ExitReason) -> list:
        return [r for r in self.records if r.reason is reason]


class _RowView:
    """Duck-typed stand-in for Curriculum in the selection hot loop.

    Selection only reads ``selection_rows``; dropping a course's row once it
    is passed keeps later scans short without changing the outcome, because
    passed courses are excluded anyway.
    """

    __slots__ = ("selection_rows",)

    def __init__(self, rows: list):
        self.selection_rows = rows


def _student_process(
    student: StudentRecord,
    curriculum: Curriculum,
    params: SimulationParams,
    engine: Engine,
    limited: Optional[dict],
    records_out: list,
    events_out: list,
    progress_out: dict,
):
    window_end = params.window_end.index
    epoch = params.window_start.epoch
    weights = params.sm_weights
    jitter = params.selection_jitter
    max_attempts = params.max_attempts
    per_semester = params.courses_per_semester

    def remaining_seats() -> Optional[Mapping[str, int]]:
        return {name: res.remaining for name, res in limited.items()}

    def finish(state: StudentState, reason: ExitReason, semesters: int) -> None:
        state.alive = False
        exit_abs = state.entry_index + semesters - 1
        records_out.append(CompletionRecord(
            student_id=state.student_id,
            group_id=state.group_id,
            entry_index=SemesterIndex(state.entry_index, epoch),
            exit_index=SemesterIndex(exit_abs, epoch),
            semesters_studied=semesters,
            reason=reason,
        ))
        progress_out[state.student_id] = {
            c.course_id: (c.course_id in state.passed, state.fails.get(c.course_id, 0))
            for c in curriculum.courses
        }

    def process(proc: Process) -> Iterator[int]:
        state = StudentState(
            student_id=student.student_id,
            group_id=student.group_id,
            entry_index=student.entry_index.index,
        )
        rng = proc.rng
        view = _RowView(list(curriculum.selection_rows))
        attrs = proc.attributes  # plain dict; setter indirection costs in the pick loop
        for course in curriculum.courses:
            attrs[course.course_id] = 0.0
        while True:
            attrs["semester"] = float(state.semester)
            state.selected_this_semester = set()
            for _ in range(per_semester):
                chosen = course_selection(
                    state, view, weights, max_attempts,
                    remaining=remaining_seats() if limited else None,
                    rng=rng, jitter=jitter,
                )
                if chosen is None:
                    break
                state.selected_this_semester.add(chosen)
                proc.seize(chosen)
                attempt = state.fails.get(chosen, 0) + 1
                passed = grade_attempt(state, curriculum.by_id[chosen], rng, attempt)
                if passed:
                    view.selection_rows = [r for r in view.selection_rows if r[0] != chosen]
                events_out.append(GradeEvent(
                    seq=engine.next_seq(),
                    time=proc.now,
                    student_id=state.student_id,
                    course_id=chosen,
                    attempt=attempt,
                    passed=passed,
                ))
                attrs[chosen] += PASS_INCREMENT if passed else FAIL_INCREMENT
            yield 1
            proc.release_all()
            reason = advance_semester(state, curriculum, params, rng)
            if reason is not None:
                finish(state, reason, state.semester)
                proc.exit(reason.value)
            if state.current_index() > window_end:
                finish(state, ExitReason.CENSORED, state.semester - 1)
                proc.exit(ExitReason.CENSORED.value)

    return process


def run_cohorts(
    students: StudentTable,
    curriculum: Curriculum,
    params: SimulationParams,
) -> SimulationResults:
    """Simulate every student in the table over the observation window.

    Students must already carry a group id and must enter inside the window;
    use ``assign_groups`` and ``filter_cohorts`` first.
    """
    start = params.window_start.index
    end = params.window_end.index
    if params.capacity is not None:
        unknown = sorted(set(params.capacity) - set(curriculum.by_id))
        if unknown:
            raise ValueError(f"capacity limits name unknown courses: {', '.join(unknown)}")

    engine = create_engine(params.seed)
    limited: dict = {}
    for course in curriculum.courses:
        limit = None if params.capacity is None else params.capacity.get(course.course_id)
        res = engine.add_resource(course.course_id, capacity=limit)
        if limit is not None:
            limited[course.course_id] = res

    records: list = []
    events: list = []
    progress: dict = {}
    for student in students:
        if student.group_id is None:
            raise ValueError(f"student {student.student_id!r} has no group assigned")
        offset = student.entry_index.index - start
        if offset < 0 or student.entry_index.index > end:
            raise ValueError(
                f"student {student.student_id!r} enters in "
                f"{student.entry_index.display}, outside the window"
            )
        engine.spawn_at(
            _student_process(student, curriculum, params, engine, limited,
                             records, events, progress),
            arrival=offset,
            entity_id=student.student_id,
        )

    log = engine.run_until(end - start + 2)

    occupancy = {
        (course_id, start + t): n
        for (course_id, t), n in log.seize_counts().items()
    }
    attributes = {
        student.student_id: dict(engine.entity(student.student_id).attributes)
        for student in students
    }
    return SimulationResults(
        params=params,
        records=tuple(records),
        monitor_log=log,
        occupancy=occupancy,
        grade_events=tuple(events),
        final_progress=progress,
        final_attributes=attributes,
        enrolled=len(students),
    )
