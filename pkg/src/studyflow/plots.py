"""Static PNG renderings of the three result views, for headless use.

The interactive charts live in the web UI; these exist so a CLI run can drop
reviewable images next to the datasets. matplotlib is imported lazily to keep
it out of the service and CLI fast paths.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

OUTCOME_ORDER = ("graduated", "failed", "left", "censored")
OUTCOME_COLORS = {
    "graduated": "#2a9d8f",
    "failed": "#e76f51",
    "left": "#e9c46a",
    "censored": "#8d99ae",
}
GROUP_LABELS = {1: "very good", 2: "satisfactory", 3: "sufficient"}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_graduation_rate(rows: Sequence, path) -> Path:
    """Stacked outcome bars per cohort, one panel per grade group."""
    plt = _pyplot()
    cohorts = list(dict.fromkeys(r.cohort for r in rows))
    groups = sorted({r.group_id for r in rows}) or [1]
    counts = {(r.cohort, r.group_id, r.outcome): r.count for r in rows}

    fig, axes = plt.subplots(1, max(len(groups), 1), figsize=(4 * max(len(groups), 1), 4),
                             sharey=True, squeeze=False)
    for ax, group in zip(axes[0], groups):
        bottoms = [0] * len(cohorts)
        for outcome in OUTCOME_ORDER:
            values = [counts.get((c, group, outcome), 0) for c in cohorts]
            ax.bar(range(len(cohorts)), values, bottom=bottoms,
                   color=OUTCOME_COLORS[outcome], label=outcome)
            bottoms = [b + v for b, v in zip(bottoms, values)]
        ax.set_title(f"group {group} ({GROUP_LABELS.get(group, '?')})")
        ax.set_xticks(range(len(cohorts)))
        ax.set_xticklabels(cohorts, rotation=45, ha="right")
    axes[0][0].set_ylabel("students")
    if len(groups):
        axes[0][-1].legend(fontsize=8)
    fig.suptitle("Graduation rate by cohort and group")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def plot_study_duration(rows: Sequence, path) -> Path:
    """Grouped bars of mean semesters to graduation per cohort."""
    plt = _pyplot()
    cohorts = list(dict.fromkeys(r.cohort for r in rows))
    groups = sorted({r.group_id for r in rows}) or [1]
    means = {(r.cohort, r.group_id): r.mean_semesters for r in rows}

    fig, ax = plt.subplots(figsize=(max(6, 1.2 * len(cohorts)), 4))
    width = 0.8 / max(len(groups), 1)
    for i, group in enumerate(groups):
        xs = [j + i * width for j in range(len(cohorts))]
        ys = [means.get((c, group), 0.0) for c in cohorts]
        ax.bar(xs, ys, width=width, label=f"group {group} ({GROUP_LABELS.get(group, '?')})")
    ax.set_xticks([j + 0.4 - width / 2 for j in range(len(cohorts))])
    ax.set_xticklabels(cohorts, rotation=45, ha="right")
    ax.set_ylabel("mean semesters")
    ax.set_title("Mean study duration of graduates")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def plot_occupancy(rows: Sequence, path) -> Path:
    """One line per course: students graded in each semester."""
    plt = _pyplot()
    semesters = list(dict.fromkeys(r.semester for r in rows))
    courses = sorted({r.course_id for r in rows})
    enrolled = {(r.course_id, r.semester): r.enrolled for r in rows}

    fig, ax = plt.subplots(figsize=(max(6, 0.9 * len(semesters)), 4.5))
    for course in courses:
        ys = [enrolled.get((course, s), 0) for s in semesters]
        ax.plot(range(len(semesters)), ys, linewidth=1.0, alpha=0.8, label=course)
    ax.set_xticks(range(len(semesters)))
    ax.set_xticklabels(semesters, rotation=45, ha="right")
    ax.set_ylabel("students enrolled")
    ax.set_title("Course occupancy per semester")
    if 0 < len(courses) <= 10:
        ax.legend(fontsize=7)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def render_all(datasets: Mapping, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return [
        plot_graduation_rate(datasets["graduation_rate"], out / "graduation_rate.png"),
        plot_study_duration(datasets["study_duration"], out / "study_duration.png"),
        plot_occupancy(datasets["occupancy"], out / "occupancy.png"),
    ]
