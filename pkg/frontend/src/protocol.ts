// Wire types for the session protocol (v1), mirrored from PROTOCOL.md
// in the repository root. The UI only ever renders what arrives in
// ServerMessages; nothing here computes signal or game state.

export const PROTOCOL_VERSION = 1;

export type Point = [number, number];
export type Rect = [number, number, number, number];

export interface WallInfo {
  a: Point;
  b: Point;
  attenuation_db: number;
}

export interface ObstacleInfo {
  label: string;
  polygon: Point[];
  attenuation_db: number;
}

export interface GalleryInfo {
  gallery_id: string;
  rect: Rect;
}

export interface ArtifactInfo {
  artifact_id: string;
  position: Point;
  gallery_id: string;
}

export interface BeaconInfo {
  beacon_id: string;
  artifact_id: string;
  position: Point;
  enabled: boolean;
}

export interface QuestInfo {
  ghost_id: string;
  artifact_id: string;
}

export interface ScenarioInfo {
  name: string;
  bounds: Rect;
  walls: WallInfo[];
  obstacles: ObstacleInfo[];
  galleries: GalleryInfo[];
  artifacts: ArtifactInfo[];
  beacons: BeaconInfo[];
  quests: QuestInfo[];
  tick: number;
  duration: number;
  debug_rssi: boolean;
}

export interface VisitorPose {
  position: Point;
  facing: Point;
  raised: boolean;
}

export interface StatePayload {
  visitor: VisitorPose;
  crowd: [number, number, number][]; // x, y, radius
  phase: string;
  quest_index: number;
  active_ghost: string | null;
  zone: string | null;
  gallery: string | null;
  pong?: number;
}

export interface GameEvent {
  event: string;
  data: Record<string, unknown>;
}

export interface BeaconDebug {
  beacon_id: string;
  smoothed: number | null;
  zone: string;
  trend: string;
}

export type ServerMessage =
  | { v: 1; kind: "scenario_info"; t: number; payload: ScenarioInfo }
  | { v: 1; kind: "state"; t: number; payload: StatePayload }
  | { v: 1; kind: "feedback"; t: number; payload: GameEvent }
  | { v: 1; kind: "rssi_debug"; t: number; payload: { beacons: BeaconDebug[] } }
  | { v: 1; kind: "error"; t: number; payload: { message: string } };

const SERVER_KINDS = new Set([
  "scenario_info",
  "state",
  "feedback",
  "rssi_debug",
  "error",
]);

/** Parse one server line; null for anything we cannot render. */
export function parseServerMessage(text: string): ServerMessage | null {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    return null;
  }
  const msg = raw as { v?: unknown; kind?: unknown; t?: unknown; payload?: unknown };
  if (msg.v !== PROTOCOL_VERSION) return null;
  if (typeof msg.kind !== "string" || !SERVER_KINDS.has(msg.kind)) return null;
  if (typeof msg.t !== "number") return null;
  if (typeof msg.payload !== "object" || msg.payload === null) return null;
  return msg as ServerMessage;
}

// Client message builders. Angles are radians, +x toward the right of
// the map, +y toward the top.

export function walkMessage(direction: number): string {
  return JSON.stringify({ v: PROTOCOL_VERSION, kind: "walk", direction });
}

export function turnMessage(facing: number): string {
  return JSON.stringify({ v: PROTOCOL_VERSION, kind: "turn", facing });
}

export function raiseMessage(raised: boolean): string {
  return JSON.stringify({ v: PROTOCOL_VERSION, kind: "raise", raised });
}

export function pingMessage(tClient: number): string {
  return JSON.stringify({ v: PROTOCOL_VERSION, kind: "ping", t_client: tClient });
}
