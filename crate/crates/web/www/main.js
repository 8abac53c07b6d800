import init, { amv_sweep, spokes, atomic } from "./pkg/amvlab_web.js";

const $ = (id) => document.getElementById(id);
const fmt = (v) => (v === null || v === undefined ? "-" : Number(v).toPrecision(10));
const nums = (s) => s.split(",").map((t) => Number(t.trim()));

function table(head, rows) {
  const th = head.map((h) => `<th>${h}</th>`).join("");
  const body = rows.map((r) => `<tr>${r.map((c) => `<td>${c}</td>`).join("")}</tr>`).join("");
  return `<table><tr>${th}</tr>${body}</table>`;
}

function guarded(out, f) {
  try {
    out.innerHTML = f();
  } catch (e) {
    out.innerHTML = `<p class="err">${e.message ?? e}</p>`;
  }
}

function runSweep() {
  guarded($("sweep-out"), () => {
    const req = {
      weight: JSON.parse($("sweep-weight").value),
      field: { kind: "polynomial", n: 2, coefficients: JSON.parse($("sweep-field").value) },
      x: nums($("sweep-x").value),
      samv: $("sweep-op").value === "samv",
      r0: Number($("sweep-r0").value),
      count: Number($("sweep-count").value),
    };
    const res = JSON.parse(amv_sweep(JSON.stringify(req)));
    const v = res.verdict;
    let text = `${v.status}`;
    if (v.status === "converged") text += `: ${fmt(v.limit)} &plusmn; ${Number(v.uncertainty).toExponential(2)}`;
    if (res.prediction) text += `; closed form ${fmt(res.prediction.value)} (${res.prediction.citation})`;
    const rows = res.rows.map((r) => [fmt(r.r), fmt(r.value), Number(r.error_bound).toExponential(2)]);
    return `<p class="verdict">${text}</p>` + table(["r", "value", "error bound"], rows);
  });
}

function runSpokes() {
  guarded($("spokes-out"), () => {
    const n = Number($("spokes-n").value);
    // just above the spoke length, where the hub ball first swallows every spoke
    const radii = [1.5 / n, 1.1 / n, 2 / n, 0.5, 1.0];
    const rows = JSON.parse(spokes(n, $("spokes-circle").checked, JSON.stringify(radii)));
    return table(
      ["r", "&mu;(hub)", "&mu;(spoke end)", "sup ratio"],
      rows.map((r) => [fmt(r.r), fmt(r.hub), fmt(r.spoke_end), fmt(r.ratio)]),
    );
  });
}

function runAtomic() {
  guarded($("atomic-out"), () => {
    const res = JSON.parse(atomic(JSON.stringify(nums($("atomic-m").value)), Number($("atomic-r").value)));
    const mat = (m) => m.map((row, i) => [`x${i}`, ...row.map(fmt)]);
    return (
      `<p>ball measures: ${res.ball.map(fmt).join(", ")}</p>` +
      `<p>AMV</p>` + table(["", "0", "1", "2"], mat(res.amv)) +
      `<p>SAMV</p>` + table(["", "0", "1", "2"], mat(res.samv))
    );
  });
}

await init();
$("sweep-run").onclick = runSweep;
$("spokes-run").onclick = runSpokes;
$("atomic-run").onclick = runAtomic;
runSweep();
runSpokes();
runAtomic();
