// SVG chart builders, one per result tab. Pure DOM construction from the
// dataset rows as fetched, no aggregation here: what the server exported is
// exactly what a bar or point carries in its data-value attribute, which is
// also what the tests compare against.

import { DurationRow, GraduationRow, OccupancyRow } from './types.js';
import { displayOrd } from './semesters.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

export const OUTCOME_ORDER = [
  'graduated', 'exceeded_max_attempts', 'random_dropout', 'censored',
] as const;

export const OUTCOME_COLORS: Record<string, string> = {
  graduated: '#2f9e44',
  exceeded_max_attempts: '#e8590c',
  random_dropout: '#c92a2a',
  censored: '#868e96',
};

// Grade bands behind the three ability groups.
export const GROUP_LABELS: Record<number, string> = {
  1: 'very good',
  2: 'satisfactory',
  3: 'sufficient',
};

const PLOT_HEIGHT = 180;
const TOP_PAD = 12;
const LEFT_PAD = 44;

function svgel(tag: string, attrs: Record<string, string | number>): SVGElement {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

function svgRoot(width: number): SVGElement {
  return svgel('svg', {
    viewBox: `0 0 ${width} ${PLOT_HEIGHT + TOP_PAD + 28}`,
    width,
    height: PLOT_HEIGHT + TOP_PAD + 28,
    role: 'img',
  });
}

function emptyState(): HTMLElement {
  const div = document.createElement('div');
  div.className = 'empty-state';
  div.textContent = 'no data for this run';
  return div;
}

function axisLabel(svg: SVGElement, x: number, text: string): void {
  const label = svgel('text', {
    x, y: PLOT_HEIGHT + TOP_PAD + 16, 'text-anchor': 'middle', 'font-size': 10,
  });
  label.textContent = text;
  svg.appendChild(label);
}

function yMaxLabel(svg: SVGElement, value: number | string): void {
  const label = svgel('text', {
    x: LEFT_PAD - 6, y: TOP_PAD + 8, 'text-anchor': 'end', 'font-size': 10,
  });
  label.textContent = String(value);
  svg.appendChild(label);
}

function groupLegend(groups: number[]): HTMLElement {
  const legend = document.createElement('div');
  legend.className = 'legend';
  for (const group of groups) {
    const entry = document.createElement('span');
    entry.className = 'legend-entry';
    entry.dataset.group = String(group);
    entry.textContent = `group ${group} (${GROUP_LABELS[group] ?? 'unknown band'})`;
    legend.appendChild(entry);
  }
  return legend;
}

function sortedCohorts(rows: { cohort: string }[]): string[] {
  return [...new Set(rows.map((r) => r.cohort))].sort((a, b) => displayOrd(a) - displayOrd(b));
}

function sortedGroups(rows: { group_id: number }[]): number[] {
  return [...new Set(rows.map((r) => r.group_id))].sort((a, b) => a - b);
}

export function renderGraduationRate(rows: GraduationRow[]): HTMLElement {
  const container = document.createElement('div');
  container.className = 'chart graduation-rate';
  if (rows.length === 0) {
    container.appendChild(emptyState());
    return container;
  }

  const cohorts = sortedCohorts(rows);
  const groups = sortedGroups(rows);
  const outcomes = OUTCOME_ORDER.filter((o) => rows.some((r) => r.outcome === o));
  const byKey = new Map(rows.map((r) => [`${r.cohort}|${r.group_id}|${r.outcome}`, r.count]));
  const maxCount = Math.max(...rows.map((r) => r.count));

  const barWidth = 9;
  const clusterWidth = outcomes.length * barWidth + 8;
  const cohortBand = groups.length * clusterWidth + 16;
  const svg = svgRoot(LEFT_PAD + cohorts.length * cohortBand + 10);

  cohorts.forEach((cohort, ci) => {
    const cohortX = LEFT_PAD + ci * cohortBand;
    groups.forEach((group, gi) => {
      outcomes.forEach((outcome, oi) => {
        const count = byKey.get(`${cohort}|${group}|${outcome}`);
        if (count === undefined) return; // zero cells are omitted upstream
        const height = (count / maxCount) * PLOT_HEIGHT;
        const bar = svgel('rect', {
          class: 'bar',
          x: cohortX + gi * clusterWidth + oi * barWidth,
          y: TOP_PAD + PLOT_HEIGHT - height,
          width: barWidth - 1,
          height,
          fill: OUTCOME_COLORS[outcome] ?? '#444',
        });
        bar.setAttribute('data-cohort', cohort);
        bar.setAttribute('data-group', String(group));
        bar.setAttribute('data-outcome', outcome);
        bar.setAttribute('data-value', String(count));
        const title = svgel('title', {});
        title.textContent = `${cohort} group ${group} ${outcome}: ${count}`;
        bar.appendChild(title);
        svg.appendChild(bar);
      });
    });
    axisLabel(svg, cohortX + (cohortBand - 16) / 2, cohort);
  });
  yMaxLabel(svg, maxCount);

  container.appendChild(svg);
  container.appendChild(groupLegend(groups));
  const key = document.createElement('div');
  key.className = 'outcome-key';
  for (const outcome of outcomes) {
    const swatch = document.createElement('span');
    swatch.className = 'outcome-swatch';
    swatch.dataset.outcome = outcome;
    swatch.style.borderColor = OUTCOME_COLORS[outcome] ?? '#444';
    swatch.textContent = outcome.replace(/_/g, ' ');
    key.appendChild(swatch);
  }
  container.appendChild(key);
  return container;
}

export function renderStudyDuration(rows: DurationRow[]): HTMLElement {
  const container = document.createElement('div');
  container.className = 'chart study-duration';
  if (rows.length === 0) {
    container.appendChild(emptyState());
    return container;
  }

  const cohorts = sortedCohorts(rows);
  const groups = sortedGroups(rows);
  const byKey = new Map(rows.map((r) => [`${r.cohort}|${r.group_id}`, r]));
  const maxMean = Math.max(...rows.map((r) => r.mean_semesters));

  const barWidth = 16;
  const cohortBand = groups.length * (barWidth + 3) + 18;
  const svg = svgRoot(LEFT_PAD + cohorts.length * cohortBand + 10);

  cohorts.forEach((cohort, ci) => {
    const cohortX = LEFT_PAD + ci * cohortBand;
    groups.forEach((group, gi) => {
      const row = byKey.get(`${cohort}|${group}`);
      if (row === undefined) return;
      const height = (row.mean_semesters / maxMean) * PLOT_HEIGHT;
      const bar = svgel('rect', {
        class: 'bar',
        x: cohortX + gi * (barWidth + 3),
        y: TOP_PAD + PLOT_HEIGHT - height,
        width: barWidth,
        height,
        fill: `hsl(${205 + gi * 25} 55% 45%)`,
      });
      bar.setAttribute('data-cohort', cohort);
      bar.setAttribute('data-group', String(group));
      bar.setAttribute('data-value', String(row.mean_semesters));
      const title = svgel('title', {});
      title.textContent = `${cohort} group ${group}: mean ${row.mean_semesters} semesters (n=${row.n})`;
      bar.appendChild(title);
      svg.appendChild(bar);
    });
    axisLabel(svg, cohortX + (cohortBand - 18) / 2, cohort);
  });
  yMaxLabel(svg, maxMean);

  container.appendChild(svg);
  container.appendChild(groupLegend(groups));
  return container;
}

export function renderOccupancy(rows: OccupancyRow[]): HTMLElement {
  const container = document.createElement('div');
  container.className = 'chart occupancy';
  if (rows.length === 0) {
    container.appendChild(emptyState());
    return container;
  }

  const semesters = [...new Set(rows.map((r) => r.semester))]
    .sort((a, b) => displayOrd(a) - displayOrd(b));
  const courses = [...new Set(rows.map((r) => r.course_id))].sort();
  const slot = new Map(semesters.map((s, i) => [s, i]));
  const byKey = new Map(rows.map((r) => [`${r.course_id}|${r.semester}`, r.enrolled]));
  const maxEnrolled = Math.max(...rows.map((r) => r.enrolled));

  const step = Math.max(34, 380 / semesters.length);
  const svg = svgRoot(LEFT_PAD + (semesters.length - 1) * step + 30);
  const x = (semester: string) => LEFT_PAD + (slot.get(semester) ?? 0) * step;
  const y = (enrolled: number) => TOP_PAD + PLOT_HEIGHT - (enrolled / maxEnrolled) * PLOT_HEIGHT;

  courses.forEach((course, ci) => {
    const color = `hsl(${(ci * 137) % 360} 60% 42%)`;
    const points: string[] = [];
    for (const semester of semesters) {
      const enrolled = byKey.get(`${course}|${semester}`);
      if (enrolled === undefined) continue; // course not offered or nobody enrolled
      points.push(`${x(semester)},${y(enrolled)}`);
      const point = svgel('circle', {
        class: 'point', cx: x(semester), cy: y(enrolled), r: 2.5, fill: color,
      });
      point.setAttribute('data-course', course);
      point.setAttribute('data-semester', semester);
      point.setAttribute('data-value', String(enrolled));
      const title = svgel('title', {});
      title.textContent = `${course} ${semester}: ${enrolled}`;
      point.appendChild(title);
      svg.appendChild(point);
    }
    const line = svgel('polyline', {
      class: 'series',
      points: points.join(' '),
      fill: 'none',
      stroke: color,
      'stroke-width': 1.5,
    });
    line.setAttribute('data-course', course);
    svg.appendChild(line);
  });
  semesters.forEach((semester) => axisLabel(svg, x(semester), semester));
  yMaxLabel(svg, maxEnrolled);

  container.appendChild(svg);
  return container;
}
