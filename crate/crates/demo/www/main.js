import init, { semicircleHistogram, analyticCurve, monteCarloCurve } from "./pkg/levelcorr_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const state = { analytic: null, mc: null };
const POINTS = 16;

function rows(flat, width) {
  const out = [];
  for (let i = 0; i < flat.length; i += width) out.push(Array.from(flat.slice(i, i + width)));
  return out;
}

function draw(canvas, series) {
  const ctx = canvas.getContext("2d");
  const { width, height } = canvas;
  const m = 40;
  ctx.clearRect(0, 0, width, height);
  const pts = series.flatMap((s) => s.points);
  if (pts.length === 0) return;
  let [x0, x1, y0, y1] = [Infinity, -Infinity, Infinity, -Infinity];
  for (const [x, y] of pts) {
    x0 = Math.min(x0, x); x1 = Math.max(x1, x);
    y0 = Math.min(y0, y); y1 = Math.max(y1, y);
  }
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  const pad = 0.05 * (y1 - y0);
  y0 -= pad; y1 += pad;
  const sx = (x) => m + ((x - x0) / (x1 - x0)) * (width - 2 * m);
  const sy = (y) => height - m - ((y - y0) / (y1 - y0)) * (height - 2 * m);

  ctx.strokeStyle = "#999";
  ctx.setLineDash([]);
  ctx.strokeRect(m, m, width - 2 * m, height - 2 * m);
  if (y0 < 0 && y1 > 0) {
    ctx.beginPath(); ctx.moveTo(m, sy(0)); ctx.lineTo(width - m, sy(0)); ctx.stroke();
  }
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  for (let i = 0; i <= 4; i++) {
    const fx = x0 + ((x1 - x0) * i) / 4;
    const fy = y0 + ((y1 - y0) * i) / 4;
    ctx.fillText(fx.toFixed(2), sx(fx) - 10, height - m + 14);
    ctx.fillText(fy.toFixed(3), 2, sy(fy) + 4);
  }
  series.forEach((s, i) => {
    ctx.strokeStyle = s.colour;
    ctx.fillStyle = s.colour;
    ctx.setLineDash(s.dashed ? [5, 3] : []);
    ctx.beginPath();
    s.points.forEach(([x, y], j) => (j ? ctx.lineTo(sx(x), sy(y)) : ctx.moveTo(sx(x), sy(y))));
    ctx.stroke();
    if (s.bars) {
      for (const [x, y, e] of s.bars) {
        ctx.beginPath(); ctx.moveTo(sx(x), sy(y - e)); ctx.lineTo(sx(x), sy(y + e)); ctx.stroke();
      }
    }
    ctx.fillText(s.label, width - m - 150, m + 14 + 14 * i);
  });
}

function timed(statusId, f) {
  $(statusId).textContent = "running…";
  setTimeout(() => {
    const t = performance.now();
    try {
      f();
      $(statusId).textContent = `${((performance.now() - t) / 1000).toFixed(2)} s`;
    } catch (e) {
      $(statusId).textContent = `error: ${e.message ?? e}`;
    }
  }, 10);
}

function sampleHistogram() {
  timed("h-status", () => {
    const flat = semicircleHistogram($("h-class").value, num("h-n"), num("h-samples"), BigInt(num("h-seed")), 48);
    const bins = rows(flat, 3);
    draw($("h-plot"), [
      { label: "sampled", colour: "#1f77b4", points: bins.map((b) => [b[0], b[1]]) },
      { label: "semicircle", colour: "#d62728", dashed: true, points: bins.map((b) => [b[0], b[2]]) },
    ]);
  });
}

function redrawCorrelator() {
  const series = [];
  let scale = 1;
  if (state.mc && state.analytic && state.mc.length === state.analytic.length) {
    let num = 0, den = 0;
    state.mc.forEach((p, i) => {
      const a = state.analytic[i];
      num += a[1] * p[1] + a[2] * p[2];
      den += a[1] * a[1] + a[2] * a[2];
    });
    if (den > 0) scale = num / den;
  }
  if (state.mc) {
    series.push({ label: "MC Re", colour: "#1f77b4", points: state.mc.map((p) => [p[0], p[1]]), bars: state.mc.map((p) => [p[0], p[1], p[3]]) });
    series.push({ label: "MC Im", colour: "#1f77b4", dashed: true, points: state.mc.map((p) => [p[0], p[2]]) });
  }
  if (state.analytic) {
    const tag = state.mc ? `C·analytic (C = ${scale.toFixed(3)})` : "analytic";
    series.push({ label: `${tag} Re`, colour: "#d62728", points: state.analytic.map((p) => [p[0], scale * p[1]]) });
    series.push({ label: `${tag} Im`, colour: "#d62728", dashed: true, points: state.analytic.map((p) => [p[0], scale * p[2]]) });
  }
  draw($("k-plot"), series);
}

function runAnalytic() {
  timed("k-status", () => {
    state.analytic = rows(analyticCurve(num("k-gamma"), num("k-eta"), $("k-mapped").checked, num("k-rmax"), POINTS, 1e-2), 4);
    redrawCorrelator();
  });
}

function runMonteCarlo() {
  timed("k-status", () => {
    state.mc = rows(monteCarloCurve(num("k-n"), num("k-samples"), BigInt(num("k-seed")), num("k-gamma"), num("k-eta"), num("k-rmax"), POINTS), 4);
    redrawCorrelator();
  });
}

await init();
$("h-run").onclick = sampleHistogram;
$("k-analytic").onclick = runAnalytic;
$("k-mc").onclick = runMonteCarlo;
for (const id of ["k-gamma", "k-eta", "k-rmax"]) $(id).onchange = () => { state.analytic = null; state.mc = null; redrawCorrelator(); };
sampleHistogram();
