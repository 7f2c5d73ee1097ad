// Entry point: connect, pump keyboard input once per animation frame,
// draw. Server address comes from ?server=ws://host:port/session, else
// the page's host on port 8000.

import { Keyboard, messagesForFrame } from "./input.js";
import { connect } from "./net.js";
import { parseServerMessage } from "./protocol.js";
import { PanelRenderer, drawScene } from "./render.js";
import { applyConnection, applyServer, createViewModel } from "./viewmodel.js";

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function serverUrl(): string {
  const param = new URLSearchParams(location.search).get("server");
  if (param) return param;
  const host = location.hostname || "localhost";
  return `ws://${host}:8000/session`;
}

function main(): void {
  const canvas = el("map") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("canvas 2d context unavailable");

  const vm = createViewModel();
  const panels = new PanelRenderer({
    status: el("status"),
    ghostName: el("ghost-name"),
    ghostMeta: el("ghost-meta"),
    zoneChip: el("zone-chip"),
    transcript: el("transcript"),
    connBanner: el("conn-banner"),
    errorLine: el("error-line"),
    overlay: el("overlay"),
    achievementText: el("achievement-text"),
    finalGhostText: el("final-ghost-text"),
    shareButton: el("share-btn"),
  });

  const net = connect(serverUrl(), {
    onMessage(text) {
      const msg = parseServerMessage(text);
      if (msg) applyServer(vm, msg);
    },
    onStatus(status) {
      applyConnection(vm, status);
    },
  });

  el("share-btn").addEventListener("click", () => {
    if (!vm.shareText) return;
    void navigator.clipboard?.writeText(vm.shareText);
    el("share-btn").textContent = "copied!";
  });

  const keyboard = new Keyboard();
  keyboard.attach(window);

  const frame = () => {
    const input = keyboard.frame();
    const raised = vm.state ? vm.state.visitor.raised : false;
    for (const line of messagesForFrame(input, raised).lines) {
      net.send(line);
    }
    const width = canvas.clientWidth;
    const height = canvas.clientHeight;
    if (canvas.width !== width || canvas.height !== height) {
      canvas.width = width;
      canvas.height = height;
    }
    drawScene(ctx, width, height, vm);
    panels.sync(vm);
    requestAnimationFrame(frame);
  };
  requestAnimationFrame(frame);
}

main();
