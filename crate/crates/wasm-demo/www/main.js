import init, { workedExample, detectCsv, freProfile } from "./pkg/frod_wasm_demo.js";

const $ = (id) => document.getElementById(id);

function optionalNumber(input) {
  return input.value.trim() === "" ? undefined : Number(input.value);
}

function showError(target, err) {
  target.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = String(err);
  target.appendChild(p);
}

function table(headers, rows, rowClass) {
  const t = document.createElement("table");
  const head = t.insertRow();
  for (const h of headers) {
    const th = document.createElement("th");
    th.textContent = h;
    head.appendChild(th);
  }
  rows.forEach((row, i) => {
    const tr = t.insertRow();
    if (rowClass) tr.className = rowClass(i);
    for (const cell of row) tr.insertCell().textContent = cell;
  });
  return t;
}

function renderDetection(target, report) {
  target.innerHTML = "";
  const summary = document.createElement("p");
  const flagged = report.objects.filter((o) => o.outlier).map((o) => o.id);
  summary.textContent = `threshold ${report.threshold.toFixed(4)}; outliers: ${flagged.length ? flagged.join(", ") : "none"}`;
  target.appendChild(summary);
  target.appendChild(table(
    ["attribute", "weight"],
    report.attributes.map((a) => [a.name, a.gamma.toFixed(4)]),
  ));
  target.appendChild(table(
    ["object", "outlier degree", "prediction"],
    report.objects.map((o) => [o.id, o.score.toFixed(4), o.outlier ? "outlier" : "normal"]),
    (i) => (report.objects[i].outlier ? "outlier" : ""),
  ));
}

function runExample() {
  const out = $("ex-out");
  try {
    const report = JSON.parse(workedExample(
      Number($("ex-delta").value),
      Number($("ex-beta").value),
      optionalNumber($("ex-threshold")),
    ));
    renderDetection(out, report.detection);
    if (report.checks.length) {
      const failed = report.checks.filter((c) => !c.passed);
      const p = document.createElement("p");
      p.textContent = failed.length
        ? `${failed.length} reference values differ: ${failed.map((c) => c.name).join(", ")}`
        : `all ${report.checks.length} reference values reproduced`;
      out.appendChild(p);
    }
  } catch (err) {
    showError(out, err);
  }
}

function runCsv() {
  const out = $("csv-out");
  try {
    renderDetection(out, JSON.parse(detectCsv(
      $("csv-text").value,
      $("csv-label").value,
      Number($("csv-delta").value),
      Number($("csv-beta").value),
      optionalNumber($("csv-threshold")),
    )));
  } catch (err) {
    showError(out, err);
  }
}

function parseValues() {
  return $("pf-values").value.split(/[\s,]+/).filter((s) => s !== "").map(Number);
}

function drawProfile(profile) {
  const canvas = $("pf-canvas");
  const ctx = canvas.getContext("2d");
  const pad = 30;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, pad + h);
  ctx.lineTo(pad + w, pad + h);
  ctx.stroke();

  const maxOf = Math.max(...profile.points.map((p) => p.outlier_factor), 1e-9);
  const x = (p) => pad + p.normalized * w;
  ctx.fillStyle = "rgba(70, 130, 180, 0.15)";
  for (const p of profile.points) {
    ctx.fillRect(x(p) - profile.radius * w, pad + h - 4, 2 * profile.radius * w, 4);
  }
  const minOf = Math.min(...profile.points.map((p) => p.outlier_factor));
  for (const p of profile.points) {
    const bar = (p.outlier_factor / maxOf) * h;
    ctx.fillStyle = p.outlier_factor === minOf ? "#c0392b" : "#2c3e50";
    ctx.fillRect(x(p) - 3, pad + h - bar, 6, bar);
  }
  ctx.fillStyle = "#555";
  ctx.fillText("outlier factor (lower is more outlying)", pad, pad - 10);
  ctx.fillText(`radius ${profile.radius.toFixed(3)}`, pad + w - 90, pad - 10);
}

function runProfile() {
  const out = $("pf-out");
  const delta = Number($("pf-delta").value);
  $("pf-delta-label").textContent = delta.toFixed(1);
  try {
    const profile = JSON.parse(freProfile(new Float64Array(parseValues()), delta));
    drawProfile(profile);
    out.innerHTML = "";
    out.appendChild(table(
      ["value", "cardinality", "relative entropy", "outlier factor"],
      profile.points.map((p) => [
        p.value, p.cardinality.toFixed(3), p.relative_entropy.toFixed(4), p.outlier_factor.toFixed(4),
      ]),
    ));
  } catch (err) {
    showError(out, err);
  }
}

function addPointFromClick(event) {
  const values = parseValues();
  if (values.length < 2) return;
  const canvas = $("pf-canvas");
  const pad = 30;
  const rect = canvas.getBoundingClientRect();
  const t = (event.clientX - rect.left - pad) / (canvas.width - 2 * pad);
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const v = lo + Math.min(Math.max(t, 0), 1) * (hi - lo);
  values.push(Number(v.toFixed(3)));
  $("pf-values").value = values.join(", ");
  runProfile();
}

await init();
const example = JSON.parse(workedExample(1, 1, 0.6));
$("csv-text").value = example.csv;
$("ex-run").addEventListener("click", runExample);
$("csv-run").addEventListener("click", runCsv);
$("pf-delta").addEventListener("input", runProfile);
$("pf-values").addEventListener("change", runProfile);
$("pf-canvas").addEventListener("click", addPointFromClick);
runExample();
runProfile();
