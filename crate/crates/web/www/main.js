import init, { pad_signal, roundtrip, kernel_spectrum_of, default_samples } from "./pkg/iconv_web.js";

const $ = (id) => document.getElementById(id);

// Axes box with a zero line; returns a mapper from (index, value) to pixels.
function frame(canvas, n, lo, hi, title) {
  const g = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 28;
  g.clearRect(0, 0, w, h);
  if (hi - lo < 1e-12) { hi = lo + 1; }
  const span = hi - lo;
  lo -= 0.05 * span;
  hi += 0.05 * span;
  const px = (i) => pad + (i / Math.max(n - 1, 1)) * (w - 2 * pad);
  const py = (v) => h - pad - ((v - lo) / (hi - lo)) * (h - 2 * pad);
  g.strokeStyle = "#bbb";
  g.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  if (lo < 0 && hi > 0) {
    g.beginPath(); g.moveTo(pad, py(0)); g.lineTo(w - pad, py(0)); g.stroke();
  }
  g.fillStyle = "#444";
  g.font = "12px system-ui";
  g.fillText(title, pad, pad - 8);
  g.fillText(hi.toPrecision(3), 2, pad + 4);
  g.fillText(lo.toPrecision(3), 2, h - pad);
  return { g, px, py };
}

function line(f, ys, color) {
  f.g.strokeStyle = color;
  f.g.lineWidth = 1.5;
  f.g.beginPath();
  ys.forEach((v, i) => (i ? f.g.lineTo : f.g.moveTo).call(f.g, f.px(i), f.py(v)));
  f.g.stroke();
}

function stems(f, ys, colorOf) {
  ys.forEach((v, i) => {
    f.g.strokeStyle = colorOf(i);
    f.g.lineWidth = 2;
    f.g.beginPath(); f.g.moveTo(f.px(i), f.py(0)); f.g.lineTo(f.px(i), f.py(v)); f.g.stroke();
  });
}

function dots(f, idx, ys, color) {
  f.g.fillStyle = color;
  idx.forEach((i) => { f.g.beginPath(); f.g.arc(f.px(i), f.py(ys[i]), 3.5, 0, 2 * Math.PI); f.g.fill(); });
}

const range = (...arrays) => {
  const all = arrays.flat();
  return [Math.min(0, ...all), Math.max(0, ...all)];
};

function guarded(outId, body) {
  const out = $(outId);
  try {
    out.classList.remove("err");
    body(out);
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e);
  }
}

function drawPadding() {
  guarded("pad-out", (out) => {
    const r = JSON.parse(pad_signal($("pad-samples").value, $("pad-mode").value));
    const m = r.period;
    const f = frame($("pad-signal"), m, ...range(r.padded), `one period, ${r.mode}, length ${m}`);
    stems(f, r.padded, (i) => (i < r.base_length ? "#1f5fbf" : "#999"));
    const s = frame($("pad-spectrum"), m, ...range(r.magnitude), "|DFT| of the period");
    stems(s, r.magnitude, () => "#555");
    dots(s, r.prior_zeros, r.magnitude, "#c33");
    out.textContent = `forced zeros at k = ${r.prior_zeros.join(", ") || "none"}`;
  });
}

function drawRoundtrip() {
  guarded("rt-out", (out) => {
    const r = JSON.parse(roundtrip($("rt-x").value, $("rt-w").value,
      +$("rt-n").value, +$("rt-c").value, +$("rt-seed").value));
    const f = frame($("rt-plot"), r.x.length, ...range(r.x, r.y, r.x_recovered), "channel 0");
    line(f, r.x, "#1f5fbf");
    line(f, r.y, "#2a9d3a");
    line(f, r.x_recovered, "#d2691e");
    const how = r.invertible ? "exact inverse" : "forced inverse (pair is not invertible)";
    out.textContent = `row ${r.row}: ${r.x_mode} * ${r.w_mode} -> ${r.y_mode}, period ${r.period}\n` +
      `${how}, max |x - x_rec| = ${r.max_abs_error.toExponential(2)}`;
  });
}

function drawSpectrum() {
  guarded("ks-out", (out) => {
    const r = JSON.parse(kernel_spectrum_of($("ks-taps").value, $("ks-w").value,
      $("ks-x").value, +$("ks-m").value));
    const m = r.period;
    const f = frame($("ks-plot"), m, ...range(r.real, r.imag, r.gain), `kernel spectrum, period ${m}`);
    line(f, r.real, "#1f5fbf");
    line(f, r.imag, "#d2691e");
    line(f, r.gain, "#2a9d3a");
    dots(f, r.skip, r.gain, "#c33");
    const live = r.gain.filter((_, k) => !r.skip.includes(k));
    const min = live.length ? Math.min(...live) : NaN;
    out.textContent = `kernel zeros at k = ${r.structural_zeros.join(", ") || "none"}; ` +
      `${r.invertible_with} input skips k = ${r.skip.join(", ") || "none"}\n` +
      `smallest relative gain outside the skip set: ${min.toExponential(2)}; ` +
      `the pair is ${r.invertible ? "" : "not "}invertible`;
  });
}

await init();
$("pad-samples").value = default_samples(12);
for (const [ids, draw] of [
  [["pad-samples", "pad-mode"], drawPadding],
  [["rt-x", "rt-w", "rt-n", "rt-c", "rt-seed"], drawRoundtrip],
  [["ks-taps", "ks-w", "ks-x", "ks-m"], drawSpectrum],
]) {
  ids.forEach((id) => $(id).addEventListener("input", draw));
  draw();
}
