import init, { localize, binauralCues, lossCurves } from "./pkg/seld3d_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => parseFloat($(id).value);
const COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"];

// Draws each series in `ys` against `xs` with fixed or fitted y limits.
function plot(canvas, xs, ys, colors, { ymin, ymax, xlabel = "", ylabel = "", dots = false } = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  ctx.clearRect(0, 0, w, h);
  const all = ys.flat().filter(Number.isFinite);
  const lo = ymin ?? Math.min(...all);
  const hi = ymax ?? Math.max(...all);
  const x0 = xs[0], x1 = xs[xs.length - 1];
  const px = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 2 * pad);
  const py = (y) => h - pad / 2 - ((y - lo) / (hi - lo || 1)) * (h - pad);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad / 2, w - 2 * pad, h - pad);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(hi.toFixed(2), 2, pad / 2 + 8);
  ctx.fillText(lo.toFixed(2), 2, h - pad / 2);
  ctx.fillText(`${x0.toFixed(1)}`, pad, h - 4);
  ctx.fillText(`${x1.toFixed(1)} ${xlabel}`, w - pad - 60, h - 4);
  ctx.fillText(ylabel, pad + 4, pad / 2 + 12);
  ys.forEach((series, i) => {
    ctx.strokeStyle = ctx.fillStyle = colors[i];
    ctx.beginPath();
    series.forEach((y, j) => {
      const X = px(xs[j]), Y = py(Math.min(hi, Math.max(lo, y)));
      if (dots) ctx.fillRect(X - 1, Y - 1, 2, 2);
      else j ? ctx.lineTo(X, Y) : ctx.moveTo(X, Y);
    });
    if (!dots) ctx.stroke();
  });
}

function blocks(arr, n) {
  const out = [];
  for (let i = 0; i < arr.length; i += n) out.push(Array.from(arr.subarray(i, i + n)));
  return out;
}

function showValues() {
  document.querySelectorAll("output").forEach((o) => (o.textContent = $(o.htmlFor.value).value));
}

// error vs SNR for the chosen direction, one point per SNR step
function updateDoa() {
  const [az, el, dist, snr] = ["az", "el", "dist", "snr"].map(num);
  const r = localize(az, el, dist, snr >= 60 ? Infinity : snr, 1n);
  $("doa-result").textContent =
    `estimate: azimuth ${r[0].toFixed(1)}°, elevation ${r[1].toFixed(1)}°, error ${r[2].toFixed(2)}°`;
  const snrs = [-10, -5, 0, 5, 10, 20, 30, 40];
  const errs = snrs.map((s) => localize(az, el, dist, s, 1n)[2]);
  plot($("doa-plot"), snrs, [errs], [COLORS[0]], { ymin: 0, xlabel: "SNR dB", ylabel: "DOA error (deg)" });
}

function updateCues() {
  const out = binauralCues(num("baz"), num("bel"), 2n);
  const [f, ipd, ipdModel, ild, ildModel] = blocks(out, out.length / 5);
  const keep = f.findIndex((x) => x > 3000);
  const cut = (a) => a.slice(0, keep);
  plot($("ipd-plot"), cut(f), [cut(ipd), cut(ipdModel)], [COLORS[0], COLORS[3]], {
    ymin: -Math.PI, ymax: Math.PI, xlabel: "Hz", ylabel: "IPD (rad)", dots: true,
  });
  plot($("ild-plot"), f, [ild, ildModel], [COLORS[0], COLORS[3]], { ymin: -8, ymax: 8, xlabel: "Hz", ylabel: "ILD (dB)" });
}

function updateLoss() {
  const n = 200;
  const [p, ...curves] = blocks(lossCurves(num("target"), 0.1, 6, n), n);
  plot($("loss-plot"), p, curves, COLORS, { ymin: 0, ymax: 4, xlabel: "predicted m", ylabel: "loss" });
}

await init();
$("status").textContent = "";
const groups = [
  [["az", "el", "dist", "snr"], updateDoa],
  [["baz", "bel"], updateCues],
  [["target"], updateLoss],
];
for (const [ids, fn] of groups) {
  // each estimate renders a 5 s clip, so recompute on release only
  ids.forEach((id) => {
    $(id).addEventListener("input", showValues);
    $(id).addEventListener("change", fn);
  });
  fn();
}
showValues();
