#!/usr/bin/env python3
"""Regenerate tests/fixtures/validation_cases.json.

Each case is a flat parameter mapping plus the (field, code) pairs the
validator reports for it. The Python tests assert the validator still
produces exactly these errors; the web UI's client-side validator is tested
against the cases marked ``client`` so both sides reject the same inputs
with the same codes.

The inputs are hand-picked here; the expected errors are computed from the
current validator. Regenerating after a deliberate validation change is
fine, regenerating to silence a failing test is not.
"""

import json
import sys
from pathlib import Path

from studyflow.params import params_from_flat

# (name, client-side relevant, flat params)
CASES = [
    ("defaults", True, {}),
    ("explicit_defaults", True, {
        "start_semester": "winter", "start_year": 2015,
        "end_semester": "summer", "end_year": 2023,
        "courses_per_semester": 5, "max_attempts": 3,
        "dropout_chance": 0.05, "seed": 0,
    }),
    ("dropout_too_high", True, {"dropout_chance": 1.5}),
    ("dropout_negative", True, {"dropout_chance": -0.1}),
    ("dropout_boundaries_ok", True, {"dropout_chance": 1.0}),
    ("dropout_zero_ok", True, {"dropout_chance": 0.0}),
    ("two_errors_together", True, {"courses_per_semester": 0, "dropout_chance": -0.1}),
    ("window_inverted", True, {
        "start_semester": "winter", "start_year": 2020,
        "end_semester": "winter", "end_year": 2015,
    }),
    ("window_same_semester_ok", True, {
        "start_semester": "summer", "start_year": 2018,
        "end_semester": "summer", "end_year": 2018,
    }),
    ("max_attempts_zero", True, {"max_attempts": 0}),
    ("courses_negative", True, {"courses_per_semester": -3}),
    ("seed_negative", True, {"seed": -1}),
    ("seed_too_large", True, {"seed": 2**64}),
    ("seed_max_ok", True, {"seed": 2**64 - 1}),
    ("year_before_epoch", True, {"start_year": 1999}),
    ("year_past_epoch_range", True, {"end_year": 3015}),
    ("season_misspelled", True, {"start_semester": "wintr"}),
    ("unknown_field", False, {"dropout": 0.1}),
    ("courses_wrong_type", True, {"courses_per_semester": "five"}),
    ("jitter_negative", False, {"selection_jitter": -0.5}),
    ("weight_string", False, {"sm_w2": "heavy"}),
    ("sm5_exclusion_string", False, {"sm5_exclusion": "maybe"}),
    ("capacity_zero", False, {"capacity": {"MA_1": 0}}),
    ("capacity_ok", False, {"capacity": {"MA_1": 30, "PROG_1": 25}}),
    ("full_valid_custom", True, {
        "start_semester": "summer", "start_year": 2016,
        "end_semester": "winter", "end_year": 2024,
        "courses_per_semester": 4, "max_attempts": 5,
        "dropout_chance": 0.12, "seed": 99,
        "sm_w1": 0.5, "sm_w2": 0.1, "sm_w3": -0.2, "sm_w4": 0.05, "sm_w5": -2.0,
        "sm5_exclusion": False, "selection_jitter": 0.05,
    }),
]


def main() -> int:
    cases_out = []
    for name, client, flat in CASES:
        _params, errors = params_from_flat(flat)
        cases_out.append({
            "name": name,
            "client": client,
            "params": flat,
            "errors": sorted(
                ({"field": e.field, "code": e.code} for e in errors),
                key=lambda e: (e["field"], e["code"]),
            ),
        })
    out_path = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "validation_cases.json"
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(json.dumps(cases_out, indent=2) + "\n", encoding="utf-8")
    print(out_path)
    for case in cases_out:
        codes = ", ".join(f"{e['field']}:{e['code']}" for e in case["errors"]) or "ok"
        print(f"  {case['name']}: {codes}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
