import init, { Setup, propagate, gamma_curve, friction_curve } from "./pkg/impurity_thermometry_web.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"];

// Draws one or more series on a canvas with linear or log axes.
function plot(canvas, series, { logX = false, logY = false, xLabel = "", yLabel = "" } = {}) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height;
  const pad = { l: 64, r: 16, t: 12, b: 40 };
  ctx.clearRect(0, 0, W, H);
  const fx = logX ? Math.log10 : (v) => v;
  const fy = logY ? Math.log10 : (v) => v;
  let x0 = Infinity, x1 = -Infinity, y0 = Infinity, y1 = -Infinity;
  for (const s of series) {
    for (let i = 0; i < s.x.length; i++) {
      const x = fx(s.x[i]), y = fy(s.y[i]);
      if (!Number.isFinite(x) || !Number.isFinite(y)) continue;
      x0 = Math.min(x0, x); x1 = Math.max(x1, x);
      y0 = Math.min(y0, y); y1 = Math.max(y1, y);
    }
  }
  if (!(x1 > x0)) { x1 = x0 + 1; }
  if (!(y1 > y0)) { y1 = y0 + 1; }
  const margin = 0.05 * (y1 - y0);
  y0 -= margin; y1 += margin;
  const px = (x) => pad.l + (fx(x) - x0) / (x1 - x0) * (W - pad.l - pad.r);
  const py = (y) => H - pad.b - (fy(y) - y0) / (y1 - y0) * (H - pad.t - pad.b);

  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#333";
  ctx.font = "11px system-ui, sans-serif";
  ctx.strokeRect(pad.l, pad.t, W - pad.l - pad.r, H - pad.t - pad.b);
  for (let k = 0; k <= 4; k++) {
    const xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    const xs = pad.l + k / 4 * (W - pad.l - pad.r), ys = H - pad.b - k / 4 * (H - pad.t - pad.b);
    ctx.textAlign = "center";
    ctx.fillText(fmt(logX ? 10 ** xv : xv), xs, H - pad.b + 14);
    ctx.textAlign = "right";
    ctx.fillText(fmt(logY ? 10 ** yv : yv), pad.l - 4, ys + 4);
  }
  ctx.textAlign = "center";
  ctx.fillText(xLabel, (W + pad.l) / 2, H - 6);
  ctx.save();
  ctx.translate(12, (H - pad.b) / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(yLabel, 0, 0);
  ctx.restore();

  series.forEach((s, j) => {
    ctx.strokeStyle = s.color ?? COLORS[j % COLORS.length];
    ctx.setLineDash(s.dash ?? []);
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    let started = false;
    for (let i = 0; i < s.x.length; i++) {
      const X = px(s.x[i]), Y = py(s.y[i]);
      if (!Number.isFinite(X) || !Number.isFinite(Y)) { started = false; continue; }
      if (started) ctx.lineTo(X, Y); else { ctx.moveTo(X, Y); started = true; }
    }
    ctx.stroke();
    if (s.label) {
      ctx.fillStyle = ctx.strokeStyle;
      ctx.textAlign = "right";
      ctx.fillText(s.label, W - pad.r - 6, pad.t + 14 + 14 * j);
    }
  });
  ctx.setLineDash([]);
}

function fmt(v) {
  if (v === 0) return "0";
  const a = Math.abs(v);
  return a >= 1e4 || a < 1e-2 ? v.toExponential(1) : Number(v.toPrecision(3)).toString();
}

function values(form) {
  return Object.fromEntries(new FormData(form).entries());
}

// Re-runs `update` whenever an input in the section changes and reports errors in place.
function wire(id, update) {
  const section = document.getElementById(id);
  const form = section.querySelector("form");
  const canvas = section.querySelector("canvas");
  const status = section.querySelector(".status");
  const run = () => {
    const start = performance.now();
    try {
      const note = update(values(form), canvas);
      status.className = "status";
      status.textContent = `${note} (${(performance.now() - start).toFixed(1)} ms)`;
    } catch (e) {
      status.className = "status error";
      status.textContent = String(e.message ?? e);
    }
  };
  form.addEventListener("input", run);
  form.addEventListener("submit", (e) => e.preventDefault());
  run();
}

function densityView(v, canvas) {
  const setup = new Setup(+v.mass, 1, +v.exponent, +v.p0, +v.width);
  const d = propagate(setup, +v.temperature, +v.exposure, v.method, 512);
  plot(canvas, [{ x: d.momenta, y: d.values, label: v.method }], { xLabel: "P", yLabel: "f(P)" });
  return `mean ${d.mean.toPrecision(6)}, variance ${d.variance.toPrecision(6)}`;
}

function gammaView(v, canvas) {
  const temps = v.temperatures.split(",").map(Number).filter((t) => t > 0);
  const span = +v.span, points = 400;
  const t = Array.from({ length: points }, (_, i) => span * (i + 1) / points);
  const setup = new Setup(1, 1, +v.exponent, +v.p0, +v.width);
  const maxima = [];
  const series = temps.map((temp) => {
    const g = gamma_curve(setup, temp, span, points);
    maxima.push(`T=${temp}: max ${Math.max(...g).toFixed(4)}`);
    return { x: t, y: g, label: `T = ${temp}` };
  });
  plot(canvas, series, { xLabel: "t / τ", yLabel: "F_T(t) / F_T(τ)" });
  return maxima.join(", ");
}

function frictionView(v, canvas) {
  const c = friction_curve(+v.mass, +v.coupling, v.regime, +v.lo, +v.hi, 24);
  plot(
    canvas,
    [
      { x: c.reduced, y: c.integral, label: "scattering integral" },
      { x: c.reduced, y: c.asymptotic, label: "power law", dash: [5, 4] },
    ],
    { logX: true, logY: true, xLabel: "k_B T / m v²", yLabel: "−F / P" },
  );
  const last = c.integral.length - 1;
  return `ratio integral / power law: ${(c.integral[0] / c.asymptotic[0]).toFixed(4)} at the lowest T, `
    + `${(c.integral[last] / c.asymptotic[last]).toFixed(4)} at the highest`;
}

await init();
wire("density", densityView);
wire("gamma", gammaView);
wire("friction", frictionView);
