// Client-side mirror of the server's parameter validation: same flat keys,
// same field/code pairs, same two phases (type coercion first, then range
// checks only if every field coerced). The contract test runs both sides
// against one fixture file.

import { FieldError, FlatParams } from './types.js';
import { SEASON_ALIASES, Season, semesterDisplay, semesterIndex } from './semesters.js';

export const MAX_SEED = (1n << 64n) - 1n;

export const KNOWN_KEYS = new Set([
  'start_semester', 'start_year', 'end_semester', 'end_year',
  'courses_per_semester', 'max_attempts', 'dropout_chance', 'seed',
  'sm_w1', 'sm_w2', 'sm_w3', 'sm_w4', 'sm_w5', 'sm5_exclusion',
  'selection_jitter', 'epoch', 'capacity',
]);

export const DEFAULT_FLAT: FlatParams = {
  start_semester: 'winter',
  start_year: 2015,
  end_semester: 'summer',
  end_year: 2023,
  courses_per_semester: 5,
  max_attempts: 3,
  dropout_chance: 0.05,
  seed: 0,
  sm_w1: 0.3,
  sm_w2: 0.2,
  sm_w3: -0.4,
  sm_w4: 0.1,
  sm_w5: -1.0,
  sm5_exclusion: true,
  selection_jitter: 0.0,
  epoch: 2000,
  capacity: null,
};

const INT_RE = /^[+-]?\d+$/;
const FLOAT_RE = /^[+-]?(\d+(\.\d*)?|\.\d+)(e[+-]?\d+)?$/i;

function show(value: unknown): string {
  if (typeof value === 'string') return `'${value}'`;
  return String(value);
}

// Integers arrive as JSON numbers or as raw input strings; the server
// accepts both. BigInt because seeds span the full unsigned 64-bit range,
// which Number cannot hold exactly.
function intLike(value: unknown): bigint | null {
  if (typeof value === 'boolean') return null;
  if (typeof value === 'number') {
    return Number.isInteger(value) ? BigInt(value) : null;
  }
  if (typeof value === 'string') {
    const text = value.trim();
    return INT_RE.test(text) ? BigInt(text) : null;
  }
  return null;
}

function floatLike(value: unknown): number | null {
  if (typeof value === 'boolean') return null;
  if (typeof value === 'number') return value;
  if (typeof value === 'string') {
    const text = value.trim().toLowerCase();
    if (/^[+-]?(infinity|inf)$/.test(text)) {
      return text.startsWith('-') ? -Infinity : Infinity;
    }
    if (/^[+-]?nan$/.test(text)) return NaN;
    return FLOAT_RE.test(text) ? Number(text) : null;
  }
  return null;
}

function boolLike(value: unknown): boolean | null {
  if (typeof value === 'boolean') return value;
  if (typeof value === 'string') {
    const text = value.toLowerCase();
    if (text === 'true') return true;
    if (text === 'false') return false;
  }
  return null;
}

export function validateFlat(flat: FlatParams): FieldError[] {
  const errors: FieldError[] = [];
  const fail = (field: string, code: string, message: string) => {
    errors.push({ field, code, message });
  };

  for (const key of Object.keys(flat)) {
    if (!KNOWN_KEYS.has(key)) fail(key, 'unknown_field', `unknown parameter ${show(key)}`);
  }

  const readInt = (key: string): bigint => {
    const raw = key in flat ? flat[key] : DEFAULT_FLAT[key];
    const value = intLike(raw);
    if (value === null) {
      fail(key, 'wrong_type', `${key} must be an integer, got ${show(raw)}`);
      return intLike(DEFAULT_FLAT[key])!;
    }
    return value;
  };
  const readFloat = (key: string): number => {
    const raw = key in flat ? flat[key] : DEFAULT_FLAT[key];
    const value = floatLike(raw);
    if (value === null) {
      fail(key, 'wrong_type', `${key} must be a number, got ${show(raw)}`);
      return floatLike(DEFAULT_FLAT[key])!;
    }
    return value;
  };
  const readSeason = (key: string): Season => {
    const raw = key in flat ? flat[key] : DEFAULT_FLAT[key];
    const season = SEASON_ALIASES[String(raw).toLowerCase()];
    if (season === undefined) {
      fail(key, 'invalid_choice', `${key} must be winter or summer, got ${show(raw)}`);
      return SEASON_ALIASES[String(DEFAULT_FLAT[key])];
    }
    return season;
  };

  const epoch = Number(readInt('epoch'));
  const startSeason = readSeason('start_semester');
  const startYear = Number(readInt('start_year'));
  const endSeason = readSeason('end_semester');
  const endYear = Number(readInt('end_year'));

  let startIndex = 0;
  let endIndex = 0;
  if (errors.length === 0) {
    // Two-digit display years limit one epoch to a century.
    if (startYear < epoch || startYear >= epoch + 100) {
      fail('start_year', 'out_of_range', `year ${startYear} outside [${epoch}, ${epoch + 99}]`);
    } else {
      startIndex = semesterIndex(startSeason, startYear, epoch);
    }
    if (endYear < epoch || endYear >= epoch + 100) {
      fail('end_year', 'out_of_range', `year ${endYear} outside [${epoch}, ${epoch + 99}]`);
    } else {
      endIndex = semesterIndex(endSeason, endYear, epoch);
    }
  }

  const courses = readInt('courses_per_semester');
  const maxAttempts = readInt('max_attempts');
  const dropout = readFloat('dropout_chance');
  const seed = readInt('seed');
  const weights = [
    readFloat('sm_w1'), readFloat('sm_w2'), readFloat('sm_w3'), readFloat('sm_w4'),
  ];
  const w5 = readFloat('sm_w5');
  const exclusionRaw = 'sm5_exclusion' in flat ? flat['sm5_exclusion'] : DEFAULT_FLAT['sm5_exclusion'];
  let exclusion = boolLike(exclusionRaw);
  if (exclusion === null) {
    fail('sm5_exclusion', 'wrong_type', `sm5_exclusion must be a boolean, got ${show(exclusionRaw)}`);
    exclusion = true;
  }
  const jitter = readFloat('selection_jitter');

  let capacity: Record<string, unknown> | null = null;
  const capacityRaw = 'capacity' in flat ? flat['capacity'] : null;
  if (capacityRaw !== null && capacityRaw !== undefined) {
    if (typeof capacityRaw !== 'object' || Array.isArray(capacityRaw)) {
      fail('capacity', 'wrong_type', 'capacity must be a course -> limit mapping or null');
    } else {
      capacity = capacityRaw as Record<string, unknown>;
    }
  }

  if (errors.length > 0) return errors;

  if (courses < 1n) {
    fail('courses_per_semester', 'too_small', `courses_per_semester must be >= 1, got ${courses}`);
  }
  if (maxAttempts < 1n) {
    fail('max_attempts', 'too_small', `max_attempts must be >= 1, got ${maxAttempts}`);
  }
  if (Number.isNaN(dropout) || dropout < 0 || dropout > 1) {
    fail('dropout_chance', 'out_of_range', `dropout_chance must lie in [0, 1], got ${dropout}`);
  }
  if (seed < 0n || seed > MAX_SEED) {
    fail('seed', 'out_of_range', 'seed must be an unsigned 64-bit integer');
  }
  if (startIndex > endIndex) {
    fail('window', 'window_inverted',
      `window end ${semesterDisplay(endIndex, epoch)} precedes start ${semesterDisplay(startIndex, epoch)}`);
  }
  weights.forEach((value, i) => {
    if (!Number.isFinite(value)) {
      fail(`sm_w${i + 1}`, 'out_of_range', `sm_w${i + 1} must be finite, got ${value}`);
    }
  });
  if (Number.isNaN(w5) || w5 === Infinity) {
    fail('sm_w5', 'out_of_range', `sm_w5 must not be ${w5}`);
  } else if (w5 === -Infinity && exclusion) {
    // Exclusion mode replaces the -inf penalty; both at once is a smell.
    fail('sm_w5', 'out_of_range', 'sm_w5 must be finite when sm5_exclusion is on');
  }
  if (!Number.isFinite(jitter) || jitter < 0) {
    fail('selection_jitter', 'out_of_range',
      `selection_jitter must be a non-negative number, got ${jitter}`);
  }
  if (capacity !== null) {
    for (const [course, limit] of Object.entries(capacity)) {
      if (!course) {
        fail('capacity', 'wrong_type', `capacity key ${show(course)} is not a course id`);
      } else if (typeof limit === 'boolean' || typeof limit !== 'number'
          || !Number.isInteger(limit) || limit < 1) {
        fail('capacity', 'too_small', `capacity for ${show(course)} must be a positive integer, got ${show(limit)}`);
      }
    }
  }
  return errors;
}
