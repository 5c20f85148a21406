/** Screening report rendering (pure HTML string builders, unit-testable). */

import { TASKS, type ScreeningReport } from "./schema.js";

const CLASS_LABELS: Record<string, string> = {
  CN: "Cognitively normal",
  MCI: "Mild cognitive impairment",
  DEMENTIA: "Dementia",
};

function esc(text: string): string {
  return text.replace(/[&<>"]/g, (c) =>
    ({ "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;" })[c] as string,
  );
}

function fmt(v: number | null, digits: number): string {
  return v === null ? "&mdash;" : v.toFixed(digits);
}

export function renderReport(report: ScreeningReport): string {
  const parts: string[] = ['<div class="report">'];
  parts.push(`<h2>Screening report</h2>`);
  parts.push(`<p class="session-id">Session ${esc(report.session_id)}</p>`);

  if (report.probabilities) {
    const entries = Object.entries(report.probabilities);
    const top = entries.reduce((a, b) => (b[1] > a[1] ? b : a))[0];
    parts.push('<div class="gauge">');
    for (const [name, prob] of entries) {
      const active = name === top ? " active" : "";
      parts.push(
        `<div class="gauge-row${active}" data-class="${name}">` +
          `<span class="gauge-label">${esc(CLASS_LABELS[name] ?? name)}</span>` +
          `<span class="gauge-bar"><span style="width:${(prob * 100).toFixed(1)}%"></span></span>` +
          `<span class="gauge-value">${(prob * 100).toFixed(1)}%</span></div>`,
      );
    }
    parts.push("</div>");
  }

  parts.push('<div class="estimates">');
  parts.push(
    `<div class="estimate"><span class="estimate-name">Estimated MMSE</span>` +
      `<span class="estimate-value" id="mmse-value">${fmt(report.mmse, 1)}</span>` +
      `<span class="estimate-range">0&ndash;30, higher is better</span></div>`,
  );
  parts.push(
    `<div class="estimate"><span class="estimate-name">Estimated MTL atrophy</span>` +
      `<span class="estimate-value" id="mtl-value">${fmt(report.mtl_atrophy_z, 2)}</span>` +
      `<span class="estimate-range">Z-score vs. healthy controls</span></div>`,
  );
  parts.push("</div>");

  parts.push('<table class="highlights"><thead><tr><th>Task</th>' +
    "<th>Median speed (mm/s)</th><th>Mean pause (s)</th><th>Median pressure</th></tr></thead><tbody>");
  for (const task of TASKS) {
    const h = report.task_highlights[task];
    parts.push(
      `<tr><td>${task}</td><td>${h ? fmt(h.speed_median, 1) : "&mdash;"}</td>` +
        `<td>${h ? fmt(h.pause_mean, 2) : "&mdash;"}</td>` +
        `<td>${h ? fmt(h.pressure_median, 2) : "&mdash;"}</td></tr>`,
    );
  }
  parts.push("</tbody></table>");

  parts.push(`<p class="disclaimer">${esc(report.disclaimer)}</p>`);
  parts.push("</div>");
  return parts.join("\n");
}

export function renderNoModel(): string {
  return (
    '<div class="report report-error"><h2>No model loaded</h2>' +
    "<p>The service is running without a trained bundle; capture and feature " +
    "extraction still work, but screening estimates are unavailable.</p></div>"
  );
}

export function renderError(message: string): string {
  return (
    `<div class="report report-error"><h2>Something went wrong</h2>` +
    `<p>${esc(message)}</p>` +
    `<p><a href="#" id="recapture-link">Start a new capture</a></p></div>`
  );
}
