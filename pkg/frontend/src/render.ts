// Drawing. The canvas shows the museum map and live poses; the side
// panel (plain DOM) shows the ghost card, transcript, and banners.
// Viewport math is exported on its own so tests can pin it down.

import type { Point, Rect, ScenarioInfo } from "./protocol.js";
import type { Mood, TranscriptEntry, ViewModel } from "./viewmodel.js";
import { TRANSCRIPT_LIMIT } from "./viewmodel.js";

export interface Viewport {
  scale: number;
  x0: number;
  y1: number;
  left: number;
  top: number;
}

/** Fit world bounds into a canvas, preserving aspect, y up. */
export function fitViewport(
  bounds: Rect,
  width: number,
  height: number,
  pad = 24,
): Viewport {
  const [x0, y0, x1, y1] = bounds;
  const worldW = x1 - x0;
  const worldH = y1 - y0;
  const scale = Math.min((width - 2 * pad) / worldW, (height - 2 * pad) / worldH);
  return {
    scale,
    x0,
    y1,
    left: (width - worldW * scale) / 2,
    top: (height - worldH * scale) / 2,
  };
}

export function toScreen(vp: Viewport, p: Point): [number, number] {
  return [vp.left + (p[0] - vp.x0) * vp.scale, vp.top + (vp.y1 - p[1]) * vp.scale];
}

const ZONE_COLOR: Record<string, string> = {
  near: "#2e9e44",
  mid: "#caa327",
  far: "#c9652a",
  lost: "#b8342e",
};

const MOOD_COLOR: Record<Mood, string> = {
  happy: "#2e9e44",
  neutral: "#8b93a3",
  angry: "#b8342e",
};

const TREND_ARROW: Record<string, string> = {
  warmer: "↗",
  colder: "↘",
  steady: "→",
  unknown: "?",
};

function drawPoly(ctx: CanvasRenderingContext2D, vp: Viewport, pts: Point[]): void {
  ctx.beginPath();
  pts.forEach((p, i) => {
    const [sx, sy] = toScreen(vp, p);
    if (i === 0) ctx.moveTo(sx, sy);
    else ctx.lineTo(sx, sy);
  });
  ctx.closePath();
}

function drawMap(ctx: CanvasRenderingContext2D, vp: Viewport, info: ScenarioInfo): void {
  const [bx0, by0] = toScreen(vp, [info.bounds[0], info.bounds[3]]);
  const w = (info.bounds[2] - info.bounds[0]) * vp.scale;
  const h = (info.bounds[3] - info.bounds[1]) * vp.scale;
  ctx.fillStyle = "#f6f3ec";
  ctx.fillRect(bx0, by0, w, h);
  ctx.strokeStyle = "#444";
  ctx.lineWidth = 2;
  ctx.strokeRect(bx0, by0, w, h);

  ctx.font = "11px sans-serif";
  for (const g of info.galleries) {
    const [gx, gy] = toScreen(vp, [g.rect[0], g.rect[3]]);
    const gw = (g.rect[2] - g.rect[0]) * vp.scale;
    const gh = (g.rect[3] - g.rect[1]) * vp.scale;
    ctx.strokeStyle = "#b9b2a0";
    ctx.setLineDash([6, 4]);
    ctx.strokeRect(gx, gy, gw, gh);
    ctx.setLineDash([]);
    ctx.fillStyle = "#8a8472";
    ctx.fillText(g.gallery_id, gx + 5, gy + 13);
  }

  for (const ob of info.obstacles) {
    drawPoly(ctx, vp, ob.polygon);
    ctx.fillStyle = "#d8d2c2";
    ctx.fill();
    ctx.strokeStyle = "#9a937f";
    ctx.lineWidth = 1;
    ctx.stroke();
  }

  ctx.strokeStyle = "#3a3a3a";
  ctx.lineWidth = 3;
  for (const wall of info.walls) {
    ctx.beginPath();
    const [ax, ay] = toScreen(vp, wall.a);
    const [bx, by] = toScreen(vp, wall.b);
    ctx.moveTo(ax, ay);
    ctx.lineTo(bx, by);
    ctx.stroke();
  }

  for (const art of info.artifacts) {
    const [ax, ay] = toScreen(vp, art.position);
    ctx.beginPath();
    ctx.moveTo(ax, ay - 6);
    ctx.lineTo(ax + 6, ay);
    ctx.lineTo(ax, ay + 6);
    ctx.lineTo(ax - 6, ay);
    ctx.closePath();
    ctx.fillStyle = "#7a5ea8";
    ctx.fill();
    ctx.fillStyle = "#5d5d5d";
    ctx.fillText(art.artifact_id, ax + 8, ay + 4);
  }

  for (const b of info.beacons) {
    const [bx, by] = toScreen(vp, b.position);
    ctx.beginPath();
    ctx.arc(bx, by, 3, 0, Math.PI * 2);
    ctx.fillStyle = b.enabled ? "#2b6cb0" : "#aaa";
    ctx.fill();
  }
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  vm: ViewModel,
): void {
  ctx.clearRect(0, 0, width, height);
  if (!vm.info) {
    ctx.fillStyle = "#777";
    ctx.font = "14px sans-serif";
    ctx.fillText("waiting for scenario…", 20, 30);
    return;
  }
  const vp = fitViewport(vm.info.bounds, width, height);
  drawMap(ctx, vp, vm.info);

  // debug overlay: a zone-colored ring and dBm label per beacon
  if (vm.debug) {
    const byId = new Map(vm.info.beacons.map((b) => [b.beacon_id, b.position]));
    ctx.font = "11px monospace";
    for (const d of vm.debug) {
      const pos = byId.get(d.beacon_id);
      if (!pos) continue;
      const [bx, by] = toScreen(vp, pos);
      ctx.beginPath();
      ctx.arc(bx, by, 0.6 * vp.scale, 0, Math.PI * 2);
      ctx.strokeStyle = ZONE_COLOR[d.zone] ?? "#888";
      ctx.lineWidth = 2;
      ctx.stroke();
      const dbm = d.smoothed === null ? "lost" : `${d.smoothed.toFixed(1)} dBm`;
      const arrow = TREND_ARROW[d.trend] ?? "";
      ctx.fillStyle = ZONE_COLOR[d.zone] ?? "#555";
      ctx.fillText(`${d.beacon_id} ${dbm} ${arrow}`, bx + 10, by - 10);
    }
  }

  const st = vm.state;
  if (!st) return;

  ctx.fillStyle = "rgba(90, 95, 110, 0.45)";
  for (const [cx, cy, cr] of st.crowd) {
    const [sx, sy] = toScreen(vp, [cx, cy]);
    ctx.beginPath();
    ctx.arc(sx, sy, Math.max(2, cr * vp.scale), 0, Math.PI * 2);
    ctx.fill();
  }

  const [vx, vy] = toScreen(vp, st.visitor.position);
  const [fx, fy] = st.visitor.facing;
  const r = Math.max(4, 0.3 * vp.scale);
  // facing wedge first so the body sits on top of its base
  ctx.beginPath();
  ctx.moveTo(vx + fx * r * 2.4, vy - fy * r * 2.4);
  ctx.lineTo(vx - fy * r * 0.9, vy - fx * r * 0.9);
  ctx.lineTo(vx + fy * r * 0.9, vy + fx * r * 0.9);
  ctx.closePath();
  ctx.fillStyle = "#e07b39";
  ctx.fill();
  ctx.beginPath();
  ctx.arc(vx, vy, r, 0, Math.PI * 2);
  ctx.fillStyle = st.visitor.raised ? "#f2b134" : "#d95f02";
  ctx.fill();
  ctx.strokeStyle = "#713910";
  ctx.lineWidth = 1.5;
  ctx.stroke();
  if (st.visitor.raised) {
    ctx.beginPath();
    ctx.arc(vx, vy, r + 4, 0, Math.PI * 2);
    ctx.strokeStyle = "#f2b134";
    ctx.stroke();
  }
}

/** The DOM elements the panel renderer keeps in sync. */
export interface PanelDom {
  status: HTMLElement;
  ghostName: HTMLElement;
  ghostMeta: HTMLElement;
  zoneChip: HTMLElement;
  transcript: HTMLElement;
  connBanner: HTMLElement;
  errorLine: HTMLElement;
  overlay: HTMLElement;
  achievementText: HTMLElement;
  finalGhostText: HTMLElement;
  shareButton: HTMLElement;
}

export class PanelRenderer {
  private rendered = 0;

  constructor(private dom: PanelDom) {}

  private appendEntry(e: TranscriptEntry): void {
    const li = document.createElement("li");
    li.textContent = `[${e.t.toFixed(1)}s] ${e.text}`;
    li.style.color = MOOD_COLOR[e.mood];
    li.className = `mood-${e.mood}`;
    this.dom.transcript.appendChild(li);
    while (this.dom.transcript.children.length > TRANSCRIPT_LIMIT) {
      this.dom.transcript.removeChild(this.dom.transcript.firstChild!);
    }
    this.dom.transcript.scrollTop = this.dom.transcript.scrollHeight;
  }

  sync(vm: ViewModel): void {
    const d = this.dom;
    const name = vm.info ? vm.info.name : "…";
    d.status.textContent = `${name}  t=${vm.t.toFixed(1)}s  (${vm.connection})`;

    const st = vm.state;
    if (st && st.active_ghost) {
      d.ghostName.textContent = st.active_ghost;
      const total = vm.info ? vm.info.quests.length : 0;
      d.ghostMeta.textContent =
        `quest ${st.quest_index + 1}/${total}` +
        (st.gallery ? ` · in ${st.gallery}` : "") +
        (st.visitor.raised ? " · phone raised" : "");
    } else {
      d.ghostName.textContent = "No ghost nearby";
      d.ghostMeta.textContent = st && st.visitor.raised ? "phone raised" : "";
    }
    if (st && st.zone) {
      d.zoneChip.textContent = st.zone;
      d.zoneChip.style.background = ZONE_COLOR[st.zone] ?? "#888";
      d.zoneChip.style.visibility = "visible";
    } else {
      d.zoneChip.style.visibility = "hidden";
    }

    if (vm.transcript.length < this.rendered) {
      // capped transcript shifted under us: redraw from scratch
      d.transcript.textContent = "";
      this.rendered = 0;
    }
    for (let i = this.rendered; i < vm.transcript.length; i++) {
      this.appendEntry(vm.transcript[i]!);
    }
    this.rendered = vm.transcript.length;

    d.connBanner.style.display = vm.connection === "open" ? "none" : "block";
    d.connBanner.textContent =
      vm.connection === "connecting" ? "connecting…" : "connection lost, retrying…";
    d.errorLine.textContent = vm.lastError ? `protocol error: ${vm.lastError}` : "";

    if (vm.screen === "achievement") {
      d.overlay.style.display = "flex";
      d.achievementText.textContent = vm.achievementText ?? "";
      d.finalGhostText.textContent = vm.finalGhost
        ? `${vm.finalGhost.text} (visiting from ${vm.finalGhost.museum})`
        : "";
      d.shareButton.style.display = vm.shareText ? "inline-block" : "none";
    } else {
      d.overlay.style.display = "none";
    }
  }
}
