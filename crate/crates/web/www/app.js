import init, { estimateMatching, estimateEmd, knapsack } from "./pkg/submatch_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function show(out, f) {
  try {
    const r = JSON.parse(f());
    out.textContent = JSON.stringify(r, (k, v) => (k === "costs" || k === "pairs" ? undefined : v), 2);
    return r;
  } catch (e) {
    out.textContent = "error: " + e;
    return null;
  }
}

function draw(r) {
  const canvas = $("m-canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (!r || !r.costs) {
    ctx.fillText("matrix shown for n <= 60", 10, 20);
    return;
  }
  const n = r.n;
  const s = canvas.width / n;
  const max = Math.max(...r.costs) || 1;
  r.costs.forEach((c, i) => {
    const g = Math.round(255 * (1 - c / max));
    ctx.fillStyle = `rgb(${g},${g},255)`;
    ctx.fillRect((i % n) * s, Math.floor(i / n) * s, s, s);
  });
  ctx.fillStyle = "#d22";
  for (const [u, v] of r.pairs) ctx.fillRect(v * s + s / 4, u * s + s / 4, s / 2, s / 2);
}

await init();

$("m-run").onclick = () =>
  draw(show($("m-out"), () =>
    estimateMatching($("m-gen").value, num("m-n"), num("m-alpha"), num("m-beta"), num("m-gamma"),
      num("m-t"), num("m-k"), num("m-seed"))));

$("e-run").onclick = () =>
  show($("e-out"), () => estimateEmd($("e-mu").value, $("e-nu").value, $("e-metric").value,
    num("e-gamma"), num("e-seed")));

$("k-run").onclick = () =>
  show($("k-out"), () => knapsack($("k-gen").value, num("k-n"), num("k-frac"), num("k-gamma"), num("k-seed")));
