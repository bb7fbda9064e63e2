import { describe, expect, it } from 'vitest';

import { MAX_SEED, validateFlat } from '../src/validation.js';
import { displayOrd, semesterDisplay, semesterIndex } from '../src/semesters.js';
import { loadValidationCases } from './fixtures.js';

const pairs = (errors: { field: string; code: string }[]) =>
  errors.map((e) => `${e.field}/${e.code}`).sort();

describe('shared fixture contract', () => {
  const cases = loadValidationCases();

  it('covers the client-flagged cases', () => {
    expect(cases.filter((c) => c.client).length).toBeGreaterThanOrEqual(15);
  });

  for (const kase of cases.filter((c) => c.client)) {
    it(kase.name, () => {
      expect(pairs(validateFlat(kase.params))).toEqual(pairs(kase.errors));
    });
  }
});

describe('validateFlat details', () => {
  it('accepts an empty object as all defaults', () => {
    expect(validateFlat({})).toEqual([]);
  });

  it('reports range and value in the dropout message', () => {
    const [error] = validateFlat({ dropout_chance: 1.5 });
    expect(error.field).toBe('dropout_chance');
    expect(error.message).toContain('1.5');
    expect(error.message).toContain('[0, 1]');
  });

  it('accepts the maximum seed as a string', () => {
    expect(validateFlat({ seed: MAX_SEED.toString() })).toEqual([]);
    expect(validateFlat({ seed: (MAX_SEED + 1n).toString() })).toEqual([
      expect.objectContaining({ field: 'seed', code: 'out_of_range' }),
    ]);
  });

  it('accepts numeric strings the way a form produces them', () => {
    expect(validateFlat({
      start_year: '2016', end_year: '2020', courses_per_semester: '4',
      max_attempts: '2', dropout_chance: '0.25', seed: '7',
    })).toEqual([]);
  });

  it('names both ends of an inverted window', () => {
    const errors = validateFlat({
      start_semester: 'winter', start_year: 2020,
      end_semester: 'winter', end_year: 2015,
    });
    expect(errors).toHaveLength(1);
    expect(errors[0].field).toBe('window');
    expect(errors[0].message).toContain('WS15');
    expect(errors[0].message).toContain('WS20');
  });

  it('reports unknown keys before any range checks run', () => {
    const errors = validateFlat({ dropout: 0.1, dropout_chance: 2.0 });
    expect(pairs(errors)).toEqual(['dropout/unknown_field']);
  });

  it('stops at coercion errors before range checks', () => {
    const errors = validateFlat({ max_attempts: 'three', dropout_chance: 9.0 });
    expect(pairs(errors)).toEqual(['max_attempts/wrong_type']);
  });

  it('rejects booleans posing as integers', () => {
    expect(pairs(validateFlat({ courses_per_semester: true }))).toEqual([
      'courses_per_semester/wrong_type',
    ]);
  });

  it('keeps the exclusion and -inf penalty mutually exclusive', () => {
    expect(validateFlat({ sm_w5: '-inf', sm5_exclusion: false })).toEqual([]);
    expect(pairs(validateFlat({ sm_w5: '-inf', sm5_exclusion: true }))).toEqual([
      'sm_w5/out_of_range',
    ]);
  });

  it('checks capacity entries individually', () => {
    const errors = validateFlat({ capacity: { MA_1: 20, PROG_1: 0 } });
    expect(pairs(errors)).toEqual(['capacity/too_small']);
    expect(validateFlat({ capacity: { MA_1: 20 } })).toEqual([]);
    expect(pairs(validateFlat({ capacity: [10] }))).toEqual(['capacity/wrong_type']);
  });
});

describe('semester arithmetic', () => {
  it('round-trips index and display form', () => {
    const index = semesterIndex('winter', 2015, 2000);
    expect(index).toBe(31);
    expect(semesterDisplay(index, 2000)).toBe('WS15');
    expect(displayOrd('WS15')).toBe(index);
  });

  it('orders display strings chronologically', () => {
    const shuffled = ['SS18', 'WS15', 'SS16', 'WS17'];
    const sorted = [...shuffled].sort((a, b) => displayOrd(a) - displayOrd(b));
    expect(sorted).toEqual(['WS15', 'SS16', 'WS17', 'SS18']);
  });

  it('rejects strings that are not semesters', () => {
    expect(() => displayOrd('2015W')).toThrow(/WS15/);
  });
});
