import { defineConfig } from "vitest/config";

export default defineConfig({
  build: {
    outDir: "dist",
    sourcemap: true,
  },
  server: {
    // dev convenience: forward API calls to a locally running server
    proxy: {
      "/api": "http://127.0.0.1:8080",
    },
  },
  test: {
    include: ["tests/**/*.test.ts"],
  },
});
