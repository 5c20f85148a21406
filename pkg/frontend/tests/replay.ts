/** Shared fixture loading for the capture tests. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { TaskCapture, type PointerLike } from "../src/capture.js";
import { TASKS, type TaskName } from "../src/schema.js";

const here = dirname(fileURLToPath(import.meta.url));

export interface Fixture {
  mm_per_px: number;
  events: Record<TaskName, PointerLike[]>;
}

export function loadFixture(): Fixture {
  return JSON.parse(readFileSync(join(here, "..", "fixtures", "pointer_replay.json"), "utf-8"));
}

export function replayFixture(fixture: Fixture): TaskCapture[] {
  const captures: TaskCapture[] = [];
  for (const task of TASKS) {
    const cap = new TaskCapture(task, fixture.mm_per_px);
    for (const ev of fixture.events[task]) {
      cap.handle(ev);
    }
    captures.push(cap);
  }
  return captures;
}
