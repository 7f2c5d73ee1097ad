// Accumulates ServerMessages into everything the renderer needs. This
// is the whole client-side "state": geometry from scenario_info, the
// latest tick state, a scrolling transcript, and the banners.

import type {
  BeaconDebug,
  GameEvent,
  ScenarioInfo,
  ServerMessage,
  StatePayload,
} from "./protocol.js";

export type Mood = "happy" | "neutral" | "angry";
export type Screen = "map" | "achievement";
export type Connection = "connecting" | "open" | "closed";

export interface TranscriptEntry {
  t: number;
  event: string;
  text: string;
  mood: Mood;
  ghost: string | null;
}

/** One game event as observed on the wire, order preserved. */
export interface TimedEvent {
  t: number;
  event: string;
  data: Record<string, unknown>;
}

export interface ViewModel {
  info: ScenarioInfo | null;
  state: StatePayload | null;
  t: number;
  transcript: TranscriptEntry[];
  events: TimedEvent[];
  debug: BeaconDebug[] | null;
  screen: Screen;
  achievementText: string | null;
  shareText: string | null;
  finalGhost: { ghost: string; museum: string; text: string } | null;
  connection: Connection;
  lastError: string | null;
  lastPong: number | null;
}

export const TRANSCRIPT_LIMIT = 200;

export function createViewModel(): ViewModel {
  return {
    info: null,
    state: null,
    t: 0,
    transcript: [],
    events: [],
    debug: null,
    screen: "map",
    achievementText: null,
    shareText: null,
    finalGhost: null,
    connection: "connecting",
    lastError: null,
    lastPong: null,
  };
}

function str(v: unknown): string | null {
  return typeof v === "string" ? v : null;
}

function moodOf(ev: GameEvent): Mood {
  const m = ev.data["mood"];
  if (m === "happy" || m === "neutral" || m === "angry") return m;
  if (ev.event === "quest_completed" || ev.event === "achievement_unlocked") {
    return "happy";
  }
  return "neutral";
}

function textOf(ev: GameEvent): string {
  const t = str(ev.data["text"]);
  if (t !== null) return t;
  // events that carry no server text still deserve a transcript line
  if (ev.event === "quest_completed") {
    return `${str(ev.data["ghost_id"]) ?? "The ghost"} is home!`;
  }
  if (ev.event === "game_completed") return "Tour complete.";
  return ev.event;
}

function applyEvent(vm: ViewModel, t: number, ev: GameEvent): void {
  vm.events.push({ t, event: ev.event, data: ev.data });
  vm.transcript.push({
    t,
    event: ev.event,
    text: textOf(ev),
    mood: moodOf(ev),
    ghost: str(ev.data["ghost_id"]),
  });
  if (vm.transcript.length > TRANSCRIPT_LIMIT) {
    vm.transcript.splice(0, vm.transcript.length - TRANSCRIPT_LIMIT);
  }
  switch (ev.event) {
    case "achievement_unlocked":
      vm.screen = "achievement";
      vm.achievementText = str(ev.data["text"]);
      break;
    case "share_offered":
      vm.shareText = str(ev.data["text"]);
      break;
    case "final_ghost_appeared":
      vm.finalGhost = {
        ghost: str(ev.data["ghost_id"]) ?? "?",
        museum: str(ev.data["museum_id"]) ?? "?",
        text: textOf(ev),
      };
      break;
  }
}

export function applyServer(vm: ViewModel, msg: ServerMessage): void {
  switch (msg.kind) {
    case "scenario_info":
      vm.info = msg.payload;
      break;
    case "state":
      vm.state = msg.payload;
      vm.t = msg.t;
      if (msg.payload.pong !== undefined) vm.lastPong = msg.payload.pong;
      break;
    case "feedback":
      applyEvent(vm, msg.t, msg.payload);
      break;
    case "rssi_debug":
      vm.debug = msg.payload.beacons;
      break;
    case "error":
      vm.lastError = msg.payload.message;
      break;
  }
}

export function applyConnection(vm: ViewModel, status: Connection): void {
  vm.connection = status;
}
