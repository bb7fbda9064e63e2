"""User-facing simulation parameters and their validation.

The seven interactive parameters (window start/end as season + year, courses
per semester, maximum failing attempts, drop-out probability) plus the seed
and the selection-adjustment weights travel as one flat key-value mapping.
The CLI, the config file and the HTTP API all share that schema, and
:func:`validate_params` collects every violation instead of stopping at the
first so a form can highlight all offending fields at once.

The five selection adjustments and their default weights are synthetic: no
institutional data backs them, they exist to be tuned. The defaults below
are starting points, nothing more.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

from .semesters import DEFAULT_EPOCH, SUMMER, WINTER, SemesterIndex

_SEASONS = {
    "winter": WINTER, "ws": WINTER, "w": WINTER,
    "summer": SUMMER, "ss": SUMMER, "s": SUMMER, "sommer": SUMMER,
}

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class FieldError:
    field: str
    code: str
    message: str

    def to_dict(self) -> dict:
        return {"field": self.field, "code": self.code, "message": self.message}


@dataclass(frozen=True)
class SelectionWeights:
    """Additive adjustments for the five course-selection conditions.

    w1: student's semester equals the course's intended semester.
    w2: student's semester is greater than the intended semester.
    w3: student's semester is at least two less than the intended semester.
    w4: course is a prerequisite for another, not yet passed course.
    w5: the course's own prerequisites are not fulfilled; only applied when
        ``exclusion_mode_for_sm5`` is off, otherwise such courses are
        excluded outright instead of penalized.
    """

    w1: float = 0.30
    w2: float = 0.20
    w3: float = -0.40
    w4: float = 0.10
    w5: float = -1.00
    exclusion_mode_for_sm5: bool = True


@dataclass(frozen=True)
class SimulationParams:
    window_start: SemesterIndex = SemesterIndex.parse("WS15")
    window_end: SemesterIndex = SemesterIndex.parse("SS23")
    courses_per_semester: int = 5
    max_attempts: int = 3
    dropout_chance: float = 0.05
    seed: int = 0
    sm_weights: SelectionWeights = field(default_factory=SelectionWeights)
    selection_jitter: float = 0.0
    capacity: Optional[Mapping[str, int]] = None  # None: every course unbounded

    @property
    def epoch(self) -> int:
        return self.window_start.epoch


def default_params() -> SimulationParams:
    return SimulationParams()


def params_to_flat(params: SimulationParams) -> dict:
    w = params.sm_weights
    return {
        "start_semester": params.window_start.season,
        "start_year": params.window_start.year,
        "end_semester": params.window_end.season,
        "end_year": params.window_end.year,
        "courses_per_semester": params.courses_per_semester,
        "max_attempts": params.max_attempts,
        "dropout_chance": params.dropout_chance,
        "seed": params.seed,
        "sm_w1": w.w1,
        "sm_w2": w.w2,
        "sm_w3": w.w3,
        "sm_w4": w.w4,
        "sm_w5": w.w5,
        "sm5_exclusion": w.exclusion_mode_for_sm5,
        "selection_jitter": params.selection_jitter,
        "epoch": params.epoch,
        "capacity": dict(params.capacity) if params.capacity is not None else None,
    }


def _coerce_int(flat, key, errors, default):
    value = flat.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        try:
            if isinstance(value, bool):
                raise ValueError
            coerced = int(str(value))
        except (TypeError, ValueError):
            errors.append(FieldError(key, "wrong_type", f"{key} must be an integer, got {value!r}"))
            return default
        return coerced
    return value


def _coerce_float(flat, key, errors, default):
    value = flat.get(key, default)
    if isinstance(value, bool):
        errors.append(FieldError(key, "wrong_type", f"{key} must be a number, got {value!r}"))
        return default
    if isinstance(value, (int, float)):
        return float(value)
    try:
        return float(str(value))
    except (TypeError, ValueError):
        errors.append(FieldError(key, "wrong_type", f"{key} must be a number, got {value!r}"))
        return default


def _coerce_bool(flat, key, errors, default):
    value = flat.get(key, default)
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ("true", "false"):
        return value.lower() == "true"
    errors.append(FieldError(key, "wrong_type", f"{key} must be a boolean, got {value!r}"))
    return default


def _coerce_season(flat, key, errors, default):
    value = str(flat.get(key, default)).lower()
    if value not in _SEASONS:
        errors.append(FieldError(key, "invalid_choice", f"{key} must be winter or summer, got {flat.get(key)!r}"))
        return default
    return _SEASONS[value]


KNOWN_KEYS = frozenset({
    "start_semester", "start_year", "end_semester", "end_year",
    "courses_per_semester", "max_attempts", "dropout_chance", "seed",
    "sm_w1", "sm_w2", "sm_w3", "sm_w4", "sm_w5", "sm5_exclusion",
    "selection_jitter", "epoch", "capacity",
})


def params_from_flat(flat: Mapping) -> tuple[Optional[SimulationParams], list[FieldError]]:
    """Decode the flat schema; returns the params or every field error found."""
    errors: list[FieldError] = []
    defaults = default_params()
    base = params_to_flat(defaults)

    for key in flat:
        if key not in KNOWN_KEYS:
            errors.append(FieldError(key, "unknown_field", f"unknown parameter {key!r}"))

    epoch = _coerce_int(flat, "epoch", errors, base["epoch"])
    start_season = _coerce_season(flat, "start_semester", errors, base["start_semester"])
    start_year = _coerce_int(flat, "start_year", errors, base["start_year"])
    end_season = _coerce_season(flat, "end_semester", errors, base["end_semester"])
    end_year = _coerce_int(flat, "end_year", errors, base["end_year"])

    window_start = defaults.window_start
    window_end = defaults.window_end
    if not errors:
        try:
            window_start = SemesterIndex.from_parts(start_season, start_year, epoch)
        except ValueError as exc:
            errors.append(FieldError("start_year", "out_of_range", str(exc)))
        try:
            window_end = SemesterIndex.from_parts(end_season, end_year, epoch)
        except ValueError as exc:
            errors.append(FieldError("end_year", "out_of_range", str(exc)))

    capacity = flat.get("capacity", base["capacity"])
    if capacity is not None:
        if not isinstance(capacity, Mapping):
            errors.append(FieldError("capacity", "wrong_type", "capacity must be a course -> limit mapping or null"))
            capacity = None
        else:
            capacity = dict(capacity)

    params = SimulationParams(
        window_start=window_start,
        window_end=window_end,
        courses_per_semester=_coerce_int(flat, "courses_per_semester", errors, base["courses_per_semester"]),
        max_attempts=_coerce_int(flat, "max_attempts", errors, base["max_attempts"]),
        dropout_chance=_coerce_float(flat, "dropout_chance", errors, base["dropout_chance"]),
        seed=_coerce_int(flat, "seed", errors, base["seed"]),
        sm_weights=SelectionWeights(
            w1=_coerce_float(flat, "sm_w1", errors, base["sm_w1"]),
            w2=_coerce_float(flat, "sm_w2", errors, base["sm_w2"]),
            w3=_coerce_float(flat, "sm_w3", errors, base["sm_w3"]),
            w4=_coerce_float(flat, "sm_w4", errors, base["sm_w4"]),
            w5=_coerce_float(flat, "sm_w5", errors, base["sm_w5"]),
            exclusion_mode_for_sm5=_coerce_bool(flat, "sm5_exclusion", errors, base["sm5_exclusion"]),
        ),
        selection_jitter=_coerce_float(flat, "selection_jitter", errors, base["selection_jitter"]),
        capacity=capacity,
    )
    if errors:
        return None, errors
    errors = validate_params(params)
    if errors:
        return None, errors
    return params, []


def validate_params(params: SimulationParams) -> list[FieldError]:
    """Check every invariant; the returned list is empty iff params are usable."""
    errors: list[FieldError] = []
    if params.courses_per_semester < 1:
        errors.append(FieldError(
            "courses_per_semester", "too_small",
            f"courses_per_semester must be >= 1, got {params.courses_per_semester}",
        ))
    if params.max_attempts < 1:
        errors.append(FieldError(
            "max_attempts", "too_small",
            f"max_attempts must be >= 1, got {params.max_attempts}",
        ))
    if math.isnan(params.dropout_chance) or not (0.0 <= params.dropout_chance <= 1.0):
        errors.append(FieldError(
            "dropout_chance", "out_of_range",
            f"dropout_chance must lie in [0, 1], got {params.dropout_chance}",
        ))
    if not (0 <= params.seed <= MAX_SEED):
        errors.append(FieldError("seed", "out_of_range", "seed must be an unsigned 64-bit integer"))
    if params.window_start.epoch != params.window_end.epoch:
        errors.append(FieldError("window", "invalid_choice", "window endpoints use different epochs"))
    elif params.window_start > params.window_end:
        errors.append(FieldError(
            "window", "window_inverted",
            f"window end {params.window_end.display} precedes start {params.window_start.display}",
        ))
    w = params.sm_weights
    for name, value in (("sm_w1", w.w1), ("sm_w2", w.w2), ("sm_w3", w.w3), ("sm_w4", w.w4)):
        if not math.isfinite(value):
            errors.append(FieldError(name, "out_of_range", f"{name} must be finite, got {value}"))
    if math.isnan(w.w5) or w.w5 == math.inf:
        errors.append(FieldError("sm_w5", "out_of_range", f"sm_w5 must not be {w.w5}"))
    elif w.w5 == -math.inf and w.exclusion_mode_for_sm5:
        # Exclusion mode replaces the -inf penalty; both at once is a smell.
        errors.append(FieldError("sm_w5", "out_of_range", "sm_w5 must be finite when sm5_exclusion is on"))
    if not math.isfinite(params.selection_jitter) or params.selection_jitter < 0:
        errors.append(FieldError(
            "selection_jitter", "out_of_range",
            f"selection_jitter must be a non-negative number, got {params.selection_jitter}",
        ))
    if params.capacity is not None:
        for course, limit in params.capacity.items():
            if not course or not isinstance(course, str):
                errors.append(FieldError("capacity", "wrong_type", f"capacity key {course!r} is not a course id"))
            elif isinstance(limit, bool) or not isinstance(limit, int) or limit < 1:
                errors.append(FieldError(
                    "capacity", "too_small",
                    f"capacity for {course!r} must be a positive integer, got {limit!r}",
                ))
    return errors


def with_window(params: SimulationParams, start: str, end: str) -> SimulationParams:
    """Convenience for tests and the CLI: window endpoints in display form."""
    epoch = params.epoch
    return replace(
        params,
        window_start=SemesterIndex.parse(start, epoch),
        window_end=SemesterIndex.parse(end, epoch),
    )
