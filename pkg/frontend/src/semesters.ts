// Semester arithmetic mirroring the server: winter semesters are odd
// indices, summer ones even, and a two-digit display year is anchored to a
// century epoch.

export type Season = 'winter' | 'summer';

export const SEASON_ALIASES: Record<string, Season> = {
  winter: 'winter',
  ws: 'winter',
  w: 'winter',
  summer: 'summer',
  ss: 'summer',
  s: 'summer',
  sommer: 'summer',
};

export function semesterIndex(season: Season, year: number, epoch: number): number {
  return 2 * (year - epoch) + (season === 'winter' ? 1 : 0);
}

export function semesterDisplay(index: number, epoch: number): string {
  const year = epoch + Math.floor(index / 2);
  const tag = index % 2 === 1 ? 'WS' : 'SS';
  return `${tag}${String(year % 100).padStart(2, '0')}`;
}

const DISPLAY_RE = /^(WS|SS)(\d{2})$/;

// Chronological sort key for display strings like WS15 or SS16; lexicographic
// order would put every SS before every WS.
export function displayOrd(display: string): number {
  const m = DISPLAY_RE.exec(display.trim());
  if (!m) {
    throw new Error(`not a semester like WS15: '${display}'`);
  }
  return 2 * Number(m[2]) + (m[1] === 'WS' ? 1 : 0);
}
