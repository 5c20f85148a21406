/** Capture-and-report single-page app.
 *
 * Walks the user through the five drawing tasks on a stylus canvas, streams
 * pointer samples (coalesced where available), shows live speed/pressure
 * traces with a running pause count, submits the session to the screening
 * service, and renders the report. Offline, capture still works and the
 * session can be exported as a file.
 */

import { getScreening, getTasks, postSession } from "./api.js";
import {
  DEFAULT_MM_PER_PX,
  TaskCapture,
  buildSession,
  expandCoalesced,
  type PointerLike,
} from "./capture.js";
import { segmentStrokes, strokeSpeed } from "./kinematics.js";
import { renderError, renderNoModel, renderReport } from "./report.js";
import { TASKS, type PenSample, type TaskDefinition, type TaskName, type TasksPayload } from "./schema.js";

const FALLBACK_TASKS: TasksPayload = {
  schema_version: 1,
  canvas_mm: [260, 170],
  tasks: TASKS.map((name) => ({
    name,
    instruction: {
      SENTENCE: "Write a complete sentence of your choosing.",
      PENTAGON: "Copy the figure of two intersecting pentagons.",
      TMT_A: "Draw lines connecting the numbered circles in ascending order.",
      TMT_B: "Draw lines connecting the circles, alternating numbers and letters (1, A, 2, B, ...).",
      CDT: "Draw an analog clock face showing 10 o'clock.",
    }[name],
  })),
};

const serviceBase = (window as { INKSCREEN_SERVICE?: string }).INKSCREEN_SERVICE ?? "";

class App {
  private canvas = document.getElementById("ink") as HTMLCanvasElement;
  private ctx = this.canvas.getContext("2d")!;
  private strip = document.getElementById("strip") as HTMLCanvasElement;
  private stripCtx = this.strip.getContext("2d")!;
  private instruction = document.getElementById("instruction")!;
  private taskLabel = document.getElementById("task-label")!;
  private pauseLabel = document.getElementById("pause-count")!;
  private main = document.getElementById("main")!;
  private captureView = document.getElementById("capture-view")!;
  private calibration = document.getElementById("mm-per-px") as HTMLInputElement;

  private defs: TasksPayload = FALLBACK_TASKS;
  private online = false;
  private taskIndex = 0;
  private captures = new Map<TaskName, TaskCapture>();
  private speeds: number[] = [];
  private pressures: number[] = [];

  async start(): Promise<void> {
    this.calibration.value = String(DEFAULT_MM_PER_PX);
    try {
      this.defs = await getTasks(serviceBase);
      this.online = true;
    } catch {
      this.online = false; // capture + export still work
      document.getElementById("offline-note")!.hidden = false;
    }
    this.bindCanvas();
    document.getElementById("done-btn")!.addEventListener("click", () => this.nextTask());
    document.getElementById("redo-btn")!.addEventListener("click", () => this.redoTask());
    document.getElementById("export-btn")!.addEventListener("click", () => this.exportFile());
    this.showTask();
  }

  private mmPerPx(): number {
    const v = parseFloat(this.calibration.value);
    return Number.isFinite(v) && v > 0 ? v : DEFAULT_MM_PER_PX;
  }

  private currentTask(): TaskName {
    return TASKS[this.taskIndex];
  }

  private currentDef(): TaskDefinition {
    return this.defs.tasks.find((t) => t.name === this.currentTask())!;
  }

  private capture(): TaskCapture {
    const task = this.currentTask();
    let cap = this.captures.get(task);
    if (!cap || cap.mmPerPx !== this.mmPerPx()) {
      cap = new TaskCapture(task, this.mmPerPx());
      this.captures.set(task, cap);
    }
    return cap;
  }

  private bindCanvas(): void {
    const feed = (raw: PointerEvent) => {
      raw.preventDefault();
      const cap = this.capture();
      for (const ev of expandCoalesced(raw as unknown as PointerLike & {
        getCoalescedEvents?: () => PointerLike[];
      })) {
        const sample = cap.handle(ev);
        if (sample) {
          this.afterSample(sample, cap);
        }
      }
    };
    this.canvas.addEventListener("pointerdown", (e) => {
      this.canvas.setPointerCapture(e.pointerId);
      feed(e);
    });
    this.canvas.addEventListener("pointermove", feed);
    this.canvas.addEventListener("pointerup", feed);
    this.canvas.addEventListener("pointercancel", feed);
  }

  private afterSample(sample: PenSample, cap: TaskCapture): void {
    this.pauseLabel.textContent = String(cap.pauseCount);
    if (sample.d) {
      this.drawInk(cap);
      const strokes = segmentStrokes(cap.samples);
      const last = strokes[strokes.length - 1];
      const speeds = last && last.length >= 3 ? strokeSpeed(last) : [0];
      const speed = speeds[speeds.length - 1];
      this.pushStrip(speed, sample.p);
    } else {
      this.pushStrip(0, 0);
    }
  }

  private drawInk(cap: TaskCapture): void {
    const scale = 1 / cap.mmPerPx;
    const samples = cap.samples;
    if (samples.length < 2) {
      return;
    }
    const a = samples[samples.length - 2];
    const b = samples[samples.length - 1];
    if (!a.d || !b.d) {
      return;
    }
    this.ctx.strokeStyle = "#1d3557";
    this.ctx.lineWidth = 1 + 2 * b.p;
    this.ctx.lineCap = "round";
    this.ctx.beginPath();
    this.ctx.moveTo(a.x * scale, a.y * scale);
    this.ctx.lineTo(b.x * scale, b.y * scale);
    this.ctx.stroke();
  }

  private pushStrip(speed: number, pressure: number): void {
    this.speeds.push(speed);
    this.pressures.push(pressure);
    const w = this.strip.width;
    const h = this.strip.height;
    if (this.speeds.length > w) {
      this.speeds = this.speeds.slice(-w);
      this.pressures = this.pressures.slice(-w);
    }
    const ctx = this.stripCtx;
    ctx.clearRect(0, 0, w, h);
    const vmax = Math.max(60, ...this.speeds);
    ctx.strokeStyle = "#e63946";
    ctx.beginPath();
    this.speeds.forEach((v, i) => {
      const y = h - (v / vmax) * (h - 4) - 2;
      i === 0 ? ctx.moveTo(i, y) : ctx.lineTo(i, y);
    });
    ctx.stroke();
    ctx.strokeStyle = "#457b9d";
    ctx.beginPath();
    this.pressures.forEach((v, i) => {
      const y = h - v * (h - 4) - 2;
      i === 0 ? ctx.moveTo(i, y) : ctx.lineTo(i, y);
    });
    ctx.stroke();
  }

  private showTask(): void {
    const def = this.currentDef();
    this.taskLabel.textContent = `Task ${this.taskIndex + 1} of ${TASKS.length}: ${def.name}`;
    this.instruction.textContent = def.instruction;
    this.pauseLabel.textContent = "0";
    this.speeds = [];
    this.pressures = [];
    this.redrawBackground(def);
  }

  private redrawBackground(def: TaskDefinition): void {
    this.ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    if (!def.targets) {
      return;
    }
    const scale = 1 / this.mmPerPx();
    const r = (def.target_radius_mm ?? 7) * scale;
    this.ctx.font = `${Math.round(r)}px sans-serif`;
    this.ctx.textAlign = "center";
    this.ctx.textBaseline = "middle";
    for (const target of def.targets) {
      const cx = target.x * scale;
      const cy = target.y * scale;
      this.ctx.strokeStyle = "#8d99ae";
      this.ctx.beginPath();
      this.ctx.arc(cx, cy, r, 0, 2 * Math.PI);
      this.ctx.stroke();
      this.ctx.fillStyle = "#2b2d42";
      this.ctx.fillText(target.label, cx, cy);
    }
  }

  private redoTask(): void {
    this.captures.get(this.currentTask())?.reset();
    this.showTask();
  }

  private async nextTask(): Promise<void> {
    if (!this.capture().hasInk()) {
      this.instruction.textContent = "Draw something before moving on (or redo).";
      return;
    }
    if (this.taskIndex + 1 < TASKS.length) {
      this.taskIndex += 1;
      this.showTask();
      return;
    }
    await this.submit();
  }

  private sessionBody() {
    const captures = TASKS.map((t) => this.captures.get(t)).filter(
      (c): c is TaskCapture => !!c,
    );
    const id = `web-${Date.now().toString(36)}-${Math.floor(Math.random() * 1e6).toString(36)}`;
    return buildSession(id, captures, this.mmPerPx());
  }

  private exportFile(): void {
    const body = this.sessionBody();
    const blob = new Blob([JSON.stringify(body)], { type: "application/json" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = `${body.session_id}.json`;
    link.click();
    URL.revokeObjectURL(link.href);
  }

  private async submit(): Promise<void> {
    if (!this.online) {
      this.instruction.textContent =
        "Service unreachable: use “Export session file” to save the capture.";
      return;
    }
    this.captureView.hidden = true;
    this.main.innerHTML = "<p>Scoring…</p>";
    try {
      const id = await postSession(serviceBase, this.sessionBody());
      const report = await getScreening(serviceBase, id);
      this.main.innerHTML = renderReport(report);
    } catch (err) {
      const status = (err as { status?: number }).status;
      this.main.innerHTML = status === 503 ? renderNoModel() : renderError(String(err));
      document.getElementById("recapture-link")?.addEventListener("click", (e) => {
        e.preventDefault();
        window.location.reload();
      });
    }
  }
}

new App().start();
