/** Pointer-event capture: maps browser pointer streams to pen samples.
 *
 * Pure logic, DOM-free: the app feeds it event-shaped records (including
 * coalesced events), tests replay recorded fixtures through it. Positions
 * are canvas-relative CSS pixels scaled by a calibration constant; the
 * default assumes 96 dpi (0.2646 mm per CSS px) and is user-adjustable.
 * Devices without real pressure (anything but a pen pointer) get synthetic
 * pressure 0.5 while in contact, flagged in the session metadata; pen-up
 * samples always carry zero pressure.
 */

import type { PenSample, SessionBody, TaskEntry, TaskName } from "./schema.js";

export const DEFAULT_MM_PER_PX = 0.2646;

/** The subset of PointerEvent the capture pipeline consumes. */
export interface PointerLike {
  type: "pointerdown" | "pointermove" | "pointerup" | "pointercancel";
  timeStamp: number;
  offsetX: number;
  offsetY: number;
  pressure: number;
  tiltX: number;
  tiltY: number;
  buttons: number;
  pointerType: string;
}

export interface CaptureCapabilities {
  pressure: boolean;
  tilt: boolean;
}

export class TaskCapture {
  readonly task: TaskName;
  readonly mmPerPx: number;
  samples: PenSample[] = [];
  pauseCount = 0;
  capabilities: CaptureCapabilities = { pressure: false, tilt: false };
  private t0: number | null = null;
  private lastT = Number.NEGATIVE_INFINITY;
  private wasDown = false;
  private hadStroke = false;

  constructor(task: TaskName, mmPerPx: number = DEFAULT_MM_PER_PX) {
    this.task = task;
    this.mmPerPx = mmPerPx;
  }

  /** Feed one pointer record; returns the appended sample, if any. */
  handle(ev: PointerLike): PenSample | null {
    if (ev.type === "pointercancel") {
      this.wasDown = false;
      return null;
    }
    if (this.t0 === null) {
      this.t0 = ev.timeStamp;
    }
    const t = ev.timeStamp - this.t0;
    if (!(t > this.lastT)) {
      return null; // duplicated or reordered event (some styluses double-fire)
    }
    const down = (ev.buttons & 1) !== 0 && ev.type !== "pointerup";
    const isPen = ev.pointerType === "pen";
    if (isPen && down) {
      this.capabilities.pressure = true;
      if (ev.tiltX !== 0 || ev.tiltY !== 0) {
        this.capabilities.tilt = true;
      }
    }
    let p = 0;
    if (down) {
      p = isPen ? clamp(ev.pressure, 0, 1) : 0.5;
      if (p === 0) {
        p = 0.5; // contact reported without a pressure value
      }
    }
    const sample: PenSample = {
      t,
      x: ev.offsetX * this.mmPerPx,
      y: ev.offsetY * this.mmPerPx,
      p,
      tx: isPen ? clamp(ev.tiltX, -90, 90) : 0,
      ty: isPen ? clamp(ev.tiltY, -90, 90) : 0,
      d: down,
    };
    this.samples.push(sample);
    this.lastT = t;
    if (down) {
      this.hadStroke = true;
    } else if (this.wasDown && this.hadStroke) {
      this.pauseCount += 1; // pen lift ends a stroke
    }
    this.wasDown = down;
    return sample;
  }

  /** Discard everything captured for this task (the "redo" control). */
  reset(): void {
    this.samples = [];
    this.pauseCount = 0;
    this.t0 = null;
    this.lastT = Number.NEGATIVE_INFINITY;
    this.wasDown = false;
    this.hadStroke = false;
  }

  hasInk(): boolean {
    return this.samples.some((s) => s.d);
  }
}

function clamp(v: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, v));
}

export function buildSession(
  sessionId: string,
  captures: TaskCapture[],
  mmPerPx: number = DEFAULT_MM_PER_PX,
): SessionBody {
  const tasks: TaskEntry[] = [];
  let anyPressure = false;
  let anyTilt = false;
  for (const cap of captures) {
    if (cap.samples.length === 0) {
      continue;
    }
    tasks.push({ task: cap.task, samples: cap.samples });
    anyPressure = anyPressure || cap.capabilities.pressure;
    anyTilt = anyTilt || cap.capabilities.tilt;
  }
  return {
    session_id: sessionId,
    subject: null,
    tasks,
    capture: {
      pressure_synthetic: !anyPressure,
      tilt_supported: anyTilt,
      mm_per_px: mmPerPx,
    },
  };
}

/** Flatten a pointer event plus its coalesced buddies, oldest first. */
export function expandCoalesced(
  ev: PointerLike & { getCoalescedEvents?: () => PointerLike[] },
): PointerLike[] {
  if (ev.type === "pointermove" && typeof ev.getCoalescedEvents === "function") {
    const coalesced = ev.getCoalescedEvents();
    if (coalesced.length > 0) {
      return coalesced;
    }
  }
  return [ev];
}
