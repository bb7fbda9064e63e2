// Loads the validation fixture shared with the server test suite.
// Imported ?raw: JSON.parse collapses 2^64 and 2^64 - 1 to the same float,
// so digit runs long enough to lose precision are quoted before parsing.
// The validator accepts numeric strings just like the server does.
import rawCases from '../../tests/fixtures/validation_cases.json?raw';

export interface FixtureCase {
  name: string;
  client: boolean;
  params: Record<string, unknown>;
  errors: { field: string; code: string }[];
}

export function loadValidationCases(): FixtureCase[] {
  const safe = rawCases.replace(/(:\s*)(\d{16,})(\s*[,\}\]])/g, '$1"$2"$3');
  return JSON.parse(safe);
}
