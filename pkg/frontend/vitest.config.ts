import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    // the integration test boots the real HTTP service
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
});
