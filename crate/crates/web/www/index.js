import init, { spectrum, eigenfunction, momentum } from "./pkg/twopiece_web.js";

const BENCHMARK_V0 = { triangular: 5, convexp: 15, divexp: 5 };
const COLOURS = ["#222", "#1f77b4", "#2ca02c", "#d62728"];
const $ = (id) => document.getElementById(id);

function params() {
  return { well: $("well").value, v0: Number($("v0").value), a: Number($("a").value) };
}

function call(fn, ...args) {
  try {
    $("status").textContent = "";
    return JSON.parse(fn(...args));
  } catch (err) {
    $("status").textContent = String(err);
    return null;
  }
}

// Axes with linear or log10 scaling, returning a point mapper.
function frame(ctx, xs, ys, logScale) {
  const { width: w, height: h } = ctx.canvas;
  const pad = 40;
  const tx = logScale ? Math.log10 : (v) => v;
  const finite = (v) => Number.isFinite(v);
  const xv = xs.map(tx).filter(finite);
  const yv = ys.map(tx).filter(finite);
  const [x0, x1] = [Math.min(...xv), Math.max(...xv)];
  let [y0, y1] = [Math.min(...yv), Math.max(...yv)];
  if (logScale) y0 = Math.max(y0, y1 - 16);
  if (y0 === y1) { y0 -= 1; y1 += 1; }
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, 10, w - pad - 10, h - pad - 10);
  ctx.fillStyle = "#555";
  ctx.fillText(logScale ? `log10 ${x0.toFixed(1)} .. ${x1.toFixed(1)}` : `${x0.toFixed(2)} .. ${x1.toFixed(2)}`, pad, h - 12);
  ctx.fillText(y1.toPrecision(3), 2, 20);
  ctx.fillText(y0.toPrecision(3), 2, h - pad);
  return (x, y) => [
    pad + ((tx(x) - x0) / (x1 - x0)) * (w - pad - 10),
    10 + (1 - (Math.max(tx(y), y0) - y0) / (y1 - y0)) * (h - pad - 10),
  ];
}

function line(ctx, map, xs, ys, colour) {
  ctx.strokeStyle = colour;
  ctx.beginPath();
  let started = false;
  xs.forEach((x, i) => {
    const y = ys[i];
    if (!(y > 0) && ctx.logScale) { started = false; return; }
    const [px, py] = map(x, y);
    if (started) ctx.lineTo(px, py); else ctx.moveTo(px, py);
    started = true;
  });
  ctx.stroke();
}

function showState(n) {
  const { well, v0, a } = params();
  const curve = call(eigenfunction, well, v0, a, n, 600);
  if (curve) {
    const ctx = $("psi").getContext("2d");
    ctx.logScale = false;
    const scale = Math.max(...curve.psi.map(Math.abs)) / Math.max(...curve.potential.map(Math.abs));
    const pot = curve.potential.map((v) => v * scale);
    const map = frame(ctx, curve.x, curve.psi.concat(pot), false);
    line(ctx, map, curve.x, pot, "#bbb");
    line(ctx, map, curve.x, curve.psi, "#1f77b4");
  }
  const pmax = Number($("pmax").value);
  const mom = call(momentum, well, v0, a, n, pmax, 300);
  if (mom) {
    const ctx = $("mom").getContext("2d");
    ctx.logScale = true;
    const map = frame(ctx, mom.p, mom.curves.flat().filter((v) => v > 0), true);
    mom.curves.forEach((c, j) => line(ctx, map, mom.p, c, COLOURS[j]));
    const fit = mom.tail_fit;
    const windows = fit.windows.map((w) => `[${w.p_lo.toFixed(1)}, ${w.p_hi.toFixed(1)}]: ${w.exponent.toFixed(3)}`).join(", ");
    $("tail").textContent =
      `n = ${n} (${mom.parity}), E = ${mom.energy.toFixed(6)}. ` +
      `Curves j = 0..3 in black, blue, green, red. ` +
      `Tail fit I(p) ~ p^-s: s = ${fit.exponent.toFixed(3)}, stability ${fit.stability.toFixed(3)}; windows ${windows}.`;
  }
}

function solve() {
  const { well, v0, a } = params();
  const levels = call(spectrum, well, v0, a, Number($("count").value));
  const body = $("levels").querySelector("tbody");
  body.replaceChildren();
  if (!levels) return;
  for (const s of levels) {
    const row = body.insertRow();
    row.insertCell().textContent = s.n;
    row.insertCell().textContent = s.parity;
    row.insertCell().textContent = s.energy.toFixed(6);
    const button = document.createElement("button");
    button.textContent = "show";
    button.onclick = () => showState(s.n);
    row.insertCell().append(button);
  }
  if (levels.length) showState(0);
}

await init();
$("well").onchange = () => { $("v0").value = BENCHMARK_V0[$("well").value]; solve(); };
$("solve").onclick = solve;
solve();
