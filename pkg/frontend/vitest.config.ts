import { defineConfig } from 'vitest/config';

export default defineConfig({
  server: {
    fs: {
      // the validation fixture is shared with the server suite one level up
      allow: ['..'],
    },
  },
  test: {
    environment: 'jsdom',
    include: ['test/**/*.test.ts'],
  },
});
