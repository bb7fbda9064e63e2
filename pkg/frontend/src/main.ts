import { mount } from './app.js';

const root = document.getElementById('app');
if (root) {
  // Served by the simulation service itself when STUDYFLOW_STATIC is set,
  // so same-origin relative URLs are the default.
  mount(root, { baseUrl: '' });
}
