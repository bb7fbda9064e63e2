// Single-page wiring: a parameter sidebar, two CSV uploads, and three result
// tabs. Submitting uploads the inputs (once per file content), posts a run,
// polls it with backoff, then fetches all three datasets and renders every
// tab, so switching tabs afterwards is pure DOM visibility with zero
// network traffic. A newer submission bumps a generation counter; anything
// still in flight for the old run checks it after every await and drops out.

import { Api, ApiError, FetchLike } from './api.js';
import { renderGraduationRate, renderOccupancy, renderStudyDuration } from './charts.js';
import {
  DurationRow, FieldError, FlatParams, GraduationRow, OccupancyRow, TabData, TabName, TABS,
} from './types.js';
import { validateFlat } from './validation.js';

const PARAM_FIELDS = [
  'start_semester', 'start_year', 'end_semester', 'end_year',
  'courses_per_semester', 'max_attempts', 'dropout_chance', 'seed',
] as const;

const TAB_TITLES: Record<TabName, string> = {
  graduation_rate: 'graduation rate',
  study_duration: 'study duration',
  occupancy: 'course occupancy',
};

type InputKind = 'students' | 'curriculum';

export interface MountOptions {
  baseUrl?: string;
  fetchFn?: FetchLike;
  pollDelayMs?: number;
  pollMaxDelayMs?: number;
  sleep?: (ms: number) => Promise<void>;
}

export interface AppHandle {
  root: HTMLElement;
  ready: Promise<void>;
  lastRun: Promise<void> | null;
}

function seasonSelect(name: string): string {
  return `<select name="${name}">
    <option value="winter">winter</option>
    <option value="summer">summer</option>
  </select>`;
}

function textField(name: string, label: string): string {
  return `<label class="field">${label}
    <input name="${name}" inputmode="numeric" autocomplete="off">
    <span class="field-error" data-field="${name}" hidden></span>
  </label>`;
}

const TEMPLATE = `
<div class="layout">
  <aside class="sidebar">
    <h1>studyflow</h1>
    <form id="param-form" novalidate>
      <fieldset>
        <legend>observation window</legend>
        <label class="field">from ${seasonSelect('start_semester')}
          <input name="start_year" inputmode="numeric" autocomplete="off">
          <span class="field-error" data-field="start_year" hidden></span>
          <span class="field-error" data-field="start_semester" hidden></span>
        </label>
        <label class="field">to ${seasonSelect('end_semester')}
          <input name="end_year" inputmode="numeric" autocomplete="off">
          <span class="field-error" data-field="end_year" hidden></span>
          <span class="field-error" data-field="end_semester" hidden></span>
        </label>
        <span class="field-error" data-field="window" hidden></span>
      </fieldset>
      ${textField('courses_per_semester', 'courses per semester')}
      ${textField('max_attempts', 'max attempts')}
      ${textField('dropout_chance', 'drop-out chance')}
      ${textField('seed', 'seed')}
      <label class="field">students CSV
        <input type="file" name="students" accept=".csv,text/csv">
      </label>
      <label class="field">curriculum CSV
        <input type="file" name="curriculum" accept=".csv,text/csv">
      </label>
      <div id="form-errors"></div>
      <button type="submit" id="submit" disabled>simulate</button>
    </form>
    <p id="status" class="status" data-state="idle"></p>
  </aside>
  <main class="results">
    <div id="banner" class="banner" hidden>
      <span id="banner-text"></span>
      <button type="button" id="retry">retry</button>
    </div>
    <nav class="tabs">
      ${TABS.map((tab, i) =>
        `<button type="button" class="tab${i === 0 ? ' active' : ''}" data-tab="${tab}">${TAB_TITLES[tab]}</button>`
      ).join('\n      ')}
    </nav>
    <section class="panels">
      ${TABS.map((tab, i) =>
        `<div class="panel" data-panel="${tab}"${i === 0 ? '' : ' hidden'}></div>`
      ).join('\n      ')}
    </section>
  </main>
</div>`;

export function mount(root: HTMLElement, options: MountOptions = {}): AppHandle {
  const api = new Api(options.baseUrl ?? '', options.fetchFn);
  const pollDelay = options.pollDelayMs ?? 300;
  const pollMaxDelay = options.pollMaxDelayMs ?? 3000;
  const sleep = options.sleep ?? ((ms: number) => new Promise<void>((r) => setTimeout(r, ms)));

  root.innerHTML = TEMPLATE;
  const form = root.querySelector('#param-form') as HTMLFormElement;
  const submitButton = root.querySelector('#submit') as HTMLButtonElement;
  const statusLine = root.querySelector('#status') as HTMLElement;
  const banner = root.querySelector('#banner') as HTMLElement;
  const bannerText = root.querySelector('#banner-text') as HTMLElement;
  const retryButton = root.querySelector('#retry') as HTMLButtonElement;
  const formErrors = root.querySelector('#form-errors') as HTMLElement;
  const panel = (tab: TabName) =>
    root.querySelector(`[data-panel="${tab}"]`) as HTMLElement;

  const state = {
    files: { students: null as string | null, curriculum: null as string | null },
    digests: { students: null as string | null, curriculum: null as string | null },
    generation: 0,
    runId: null as string | null,
    data: null as TabData | null,
    activeTab: TABS[0] as TabName,
  };
  let retryAction: (() => void) | null = null;

  function setStatus(text: string, stage = 'busy'): void {
    statusLine.textContent = text;
    statusLine.dataset.state = stage;
  }

  function showBanner(text: string, retry: (() => void) | null): void {
    bannerText.textContent = text;
    retryAction = retry;
    retryButton.hidden = retry === null;
    banner.hidden = false;
  }

  function clearBanner(): void {
    banner.hidden = true;
    retryAction = null;
  }

  function fieldInput(name: string): HTMLInputElement | HTMLSelectElement {
    return form.elements.namedItem(name) as HTMLInputElement | HTMLSelectElement;
  }

  // Empty fields are simply left out, so the server's defaults apply.
  function readForm(): FlatParams {
    const flat: FlatParams = {};
    for (const name of PARAM_FIELDS) {
      const value = fieldInput(name).value.trim();
      if (value !== '') flat[name] = value;
    }
    return flat;
  }

  function paintErrors(errors: FieldError[]): void {
    for (const span of root.querySelectorAll<HTMLElement>('.field-error')) {
      span.hidden = true;
      span.textContent = '';
      delete span.dataset.code;
    }
    formErrors.textContent = '';
    for (const error of errors) {
      const span = root.querySelector<HTMLElement>(`.field-error[data-field="${error.field}"]`);
      if (span) {
        span.textContent = error.message;
        span.dataset.code = error.code;
        span.hidden = false;
      } else {
        const line = document.createElement('p');
        line.className = 'field-error';
        line.dataset.code = error.code;
        line.textContent = `${error.field}: ${error.message}`;
        formErrors.appendChild(line);
      }
    }
  }

  function refreshValidation(): FieldError[] {
    const errors = validateFlat(readForm());
    paintErrors(errors);
    const filesMissing = !state.files.students || !state.files.curriculum;
    submitButton.disabled = errors.length > 0 || filesMissing;
    if (errors.length === 0 && filesMissing && statusLine.dataset.state === 'idle') {
      statusLine.textContent = 'choose both CSV files to simulate';
    }
    return errors;
  }

  async function onFileChange(kind: InputKind, input: HTMLInputElement): Promise<void> {
    const file = input.files && input.files[0];
    if (!file) return;
    state.files[kind] = await file.text();
    state.digests[kind] = null; // new content, the old upload no longer applies
    refreshValidation();
  }

  async function ensureDigest(kind: InputKind): Promise<string> {
    const cached = state.digests[kind];
    if (cached) return cached;
    const digest = await api.uploadInput(kind, state.files[kind]!);
    state.digests[kind] = digest;
    return digest;
  }

  function renderPanels(data: TabData): void {
    panel('graduation_rate').replaceChildren(renderGraduationRate(data.graduation_rate));
    panel('study_duration').replaceChildren(renderStudyDuration(data.study_duration));
    panel('occupancy').replaceChildren(renderOccupancy(data.occupancy));
  }

  function selectTab(tab: TabName): void {
    // Visibility toggles only: a loaded run never triggers another fetch.
    state.activeTab = tab;
    for (const button of root.querySelectorAll<HTMLElement>('.tab')) {
      button.classList.toggle('active', button.dataset.tab === tab);
    }
    for (const name of TABS) {
      panel(name).hidden = name !== tab;
    }
  }

  async function doSubmit(): Promise<void> {
    const flat = readForm();
    const errors = refreshValidation();
    if (errors.length > 0 || !state.files.students || !state.files.curriculum) {
      setStatus('fix the highlighted fields', 'invalid');
      return;
    }
    const generation = ++state.generation;
    clearBanner();
    try {
      setStatus('uploading inputs');
      const students = await ensureDigest('students');
      if (generation !== state.generation) return;
      const curriculum = await ensureDigest('curriculum');
      if (generation !== state.generation) return;

      setStatus('submitting run');
      const runId = await api.submitRun(flat, students, curriculum);
      if (generation !== state.generation) return;
      state.runId = runId;

      let delay = pollDelay;
      for (;;) {
        setStatus(`run ${runId} pending`);
        await sleep(delay);
        if (generation !== state.generation) return;
        const desc = await api.runStatus(runId);
        if (generation !== state.generation) return;
        if (desc.status === 'done') break;
        if (desc.status === 'failed') {
          showBanner(`run failed: ${desc.error ?? 'unknown error'}`, () => void submit());
          setStatus(`run ${runId} failed`, 'failed');
          return;
        }
        setStatus(`run ${runId} ${desc.status}`);
        delay = Math.min(delay * 1.6, pollMaxDelay);
      }

      setStatus('loading datasets');
      const [graduation, duration, occupancy] = await Promise.all([
        api.dataset<GraduationRow>(runId, 'graduation_rate'),
        api.dataset<DurationRow>(runId, 'study_duration'),
        api.dataset<OccupancyRow>(runId, 'occupancy'),
      ]);
      if (generation !== state.generation) return;
      state.data = { graduation_rate: graduation, study_duration: duration, occupancy };
      renderPanels(state.data);
      selectTab(state.activeTab);
      setStatus(`run ${runId} done`, 'done');
    } catch (error) {
      if (generation !== state.generation) return;
      if (error instanceof ApiError && error.status === 400 && error.errors.length > 0) {
        paintErrors(error.errors);
        setStatus('the server rejected the submission', 'invalid');
      } else {
        showBanner(`network failure: ${String(error)}`, () => void submit());
        setStatus('request failed', 'failed');
      }
    }
  }

  function submit(): Promise<void> {
    const run = doSubmit();
    handle.lastRun = run;
    return run;
  }

  form.addEventListener('submit', (event) => {
    event.preventDefault();
    void submit();
  });
  form.addEventListener('input', (event) => {
    const target = event.target as HTMLInputElement;
    if (target.type === 'file') {
      void onFileChange(target.name as InputKind, target);
    } else {
      refreshValidation();
    }
  });
  form.addEventListener('change', (event) => {
    const target = event.target as HTMLInputElement;
    if (target.type === 'file') void onFileChange(target.name as InputKind, target);
  });
  retryButton.addEventListener('click', () => {
    const action = retryAction; // clearBanner resets it, so grab it first
    clearBanner();
    action?.();
  });
  for (const button of root.querySelectorAll<HTMLElement>('.tab')) {
    button.addEventListener('click', () => selectTab(button.dataset.tab as TabName));
  }

  async function loadDefaults(): Promise<void> {
    try {
      const defaults = await api.defaults();
      for (const name of PARAM_FIELDS) {
        const value = defaults.params[name];
        if (value !== undefined && value !== null) {
          fieldInput(name).value = String(value);
        }
      }
      clearBanner();
      setStatus('choose both CSV files to simulate', 'idle');
      refreshValidation();
    } catch (error) {
      showBanner(`could not load defaults: ${String(error)}`, () => {
        handle.ready = loadDefaults();
      });
      setStatus('defaults unavailable', 'failed');
    }
  }

  const handle: AppHandle = { root, ready: Promise.resolve(), lastRun: null };
  handle.ready = loadDefaults();
  return handle;
}
