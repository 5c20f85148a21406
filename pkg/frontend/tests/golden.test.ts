/** Golden replay against the real screening service.
 *
 * Trains a small synthetic bundle, starts `inkscreen serve`, replays the
 * committed pointer-event fixture through the capture pipeline, and checks
 * that the service accepts the session (201), that the rendered report
 * carries all three outputs, and that the client-side speed summary agrees
 * with the service's authoritative features within 5%.
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { buildSession } from "../src/capture.js";
import { median, speedSeries } from "../src/kinematics.js";
import { renderReport } from "../src/report.js";
import { TASKS, type FeaturesPayload, type ScreeningReport } from "../src/schema.js";
import { loadFixture, replayFixture } from "./replay.js";

const PYTHON = process.env.INKSCREEN_PYTHON ?? "python3";

let proc: ChildProcess | null = null;
let base = "";

async function startService(): Promise<void> {
  const work = mkdtempSync(join(tmpdir(), "inkscreen-web-"));
  const bundlePath = join(work, "bundle.json");
  const trained = spawnSync(
    PYTHON, [join(__dirname, "..", "scripts", "make_test_bundle.py"), bundlePath],
    { stdio: "pipe", timeout: 180_000 },
  );
  if (trained.status !== 0) {
    throw new Error(`bundle training failed: ${trained.stderr}`);
  }
  proc = spawn(PYTHON, [
    "-m", "inkscreen.cli", "serve",
    "--addr", "127.0.0.1:0",
    "--store-dir", join(work, "store"),
    "--bundle", bundlePath,
  ], { env: { ...process.env, PYTHONUNBUFFERED: "1" } });
  base = await new Promise<string>((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("service did not start")), 60_000);
    let out = "";
    proc!.stdout!.on("data", (chunk: Buffer) => {
      out += chunk.toString();
      const m = out.match(/http:\/\/127\.0\.0\.1:(\d+)/);
      if (m) {
        clearTimeout(timer);
        resolve(`http://127.0.0.1:${m[1]}`);
      }
    });
    proc!.on("exit", (code) => reject(new Error(`service exited early: ${code}`)));
  });
}

beforeAll(async () => {
  await startService();
}, 240_000);

afterAll(() => {
  proc?.kill();
});

describe("golden replay through the live service", () => {
  const fixture = loadFixture();
  const captures = replayFixture(fixture);
  const body = buildSession("golden-replay", captures, fixture.mm_per_px);
  let sessionId = "";

  it("POST /api/v1/sessions accepts the captured session with 201", async () => {
    const resp = await fetch(`${base}/api/v1/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    expect(resp.status).toBe(201);
    const payload = (await resp.json()) as { id: string };
    expect(payload.id).toMatch(/^[0-9a-f]{16}$/);
    sessionId = payload.id;
  });

  it("client speed summaries agree with the service within 5%", async () => {
    const resp = await fetch(`${base}/api/v1/sessions/${sessionId}/features`);
    expect(resp.status).toBe(200);
    const feats = (await resp.json()) as FeaturesPayload;
    for (const task of TASKS) {
      const col = feats.columns.indexOf(`${task}.speed_median`);
      const serverMedian = feats.values[col];
      const entry = body.tasks.find((t) => t.task === task)!;
      const clientMedian = median(speedSeries(entry.samples));
      expect(serverMedian).not.toBeNull();
      expect(clientMedian).not.toBeNull();
      const rel = Math.abs(clientMedian! - serverMedian!) / serverMedian!;
      expect(rel).toBeLessThan(0.05);
    }
  });

  it("the screening report renders all three outputs", async () => {
    const resp = await fetch(`${base}/api/v1/sessions/${sessionId}/screening`);
    expect(resp.status).toBe(200);
    const report = (await resp.json()) as ScreeningReport;
    const html = renderReport(report);
    expect(report.probabilities).not.toBeNull();
    expect(Math.abs(Object.values(report.probabilities!).reduce((a, b) => a + b) - 1))
      .toBeLessThan(1e-9);
    expect(report.mmse).toBeGreaterThanOrEqual(0);
    expect(report.mmse).toBeLessThanOrEqual(30);
    expect(typeof report.mtl_atrophy_z).toBe("number");
    expect(html).toContain("gauge-row active");
    expect(html).toContain("Estimated MMSE");
    expect(html).toContain("Estimated MTL atrophy");
    expect(html).toContain("research demonstration");
  });

  it("layout endpoint feeds the TMT task screens", async () => {
    const resp = await fetch(`${base}/api/v1/tasks`);
    expect(resp.status).toBe(200);
    const payload = (await resp.json()) as { tasks: { name: string; targets?: unknown[] }[] };
    const tmtA = payload.tasks.find((t) => t.name === "TMT_A")!;
    expect(tmtA.targets).toHaveLength(25);
  });
});
