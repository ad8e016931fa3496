import init, { mzi_fringe, eraser_fringes, chsh } from "./pkg/qeraser_web.js";

const POINTS = 181;
const $ = (id) => document.getElementById(id);
const val = (id) => parseFloat($(id).value);

function bindLabels(ids) {
  for (const id of ids) $(id + "-v").textContent = val(id).toFixed(2);
}

function plot(canvas, series) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 24;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#ccc";
  ctx.strokeRect(pad, pad / 2, w - 2 * pad, h - 1.5 * pad);
  ctx.fillStyle = "#666";
  ctx.fillText("1", 6, pad / 2 + 4);
  ctx.fillText("0", 6, h - pad);
  ctx.fillText("phase 0 .. 2pi", w / 2 - 30, h - 4);
  for (const { data, color } of series) {
    ctx.strokeStyle = color;
    ctx.lineWidth = 2;
    ctx.beginPath();
    data.forEach((y, k) => {
      const px = pad + (k / (data.length - 1)) * (w - 2 * pad);
      const py = pad / 2 + (1 - y) * (h - 1.5 * pad);
      k === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
    });
    ctx.stroke();
  }
}

function show(f) {
  try {
    f();
    $("error").textContent = "";
  } catch (e) {
    $("error").textContent = String(e);
  }
}

function drawMzi() {
  bindLabels(["mzi-theta", "mzi-vt", "mzi-vp"]);
  show(() => {
    const p = mzi_fringe(val("mzi-theta"), val("mzi-vt"), val("mzi-vp"), POINTS);
    plot($("mzi-plot"), [{ data: Array.from(p), color: "#c33" }]);
  });
}

function drawEraser() {
  bindLabels(["er-t1", "er-t2", "er-p2", "er-mu", "er-delta"]);
  show(() => {
    const v = eraser_fringes(val("er-t1"), val("er-t2"), val("er-p2"), val("er-mu"), val("er-delta"), POINTS);
    const pick = (j) => Array.from({ length: POINTS }, (_, k) => v[3 * k + j]);
    plot($("er-plot"), [
      { data: pick(2), color: "#888" },
      { data: pick(0), color: "#c33" },
      { data: pick(1), color: "#36c" },
    ]);
    const n = 3 * POINTS;
    $("er-d").textContent = v[n].toFixed(4);
    $("er-v").textContent = v[n + 1].toFixed(4);
    $("er-sum").textContent = v[n + 2].toFixed(4);
  });
}

function drawChsh() {
  bindLabels(["ch-a", "ch-a2", "ch-b", "ch-b2"]);
  show(() => {
    const v = chsh(val("ch-a"), val("ch-a2"), val("ch-b"), val("ch-b2"));
    for (let k = 0; k < 4; k++) $("ch-e" + k).textContent = v[k].toFixed(4);
    $("ch-s").textContent = v[4].toFixed(4);
    $("ch-s").style.color = Math.abs(v[4]) > 2 ? "#b00" : "";
  });
}

await init();
for (const [prefix, draw] of [["mzi", drawMzi], ["er", drawEraser], ["ch", drawChsh]]) {
  document.querySelectorAll(`input[id^="${prefix}-"]`).forEach((el) => el.addEventListener("input", draw));
  draw();
}
