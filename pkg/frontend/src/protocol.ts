// Wire schema shared with the steering service. Units on the wire are
// kPa, mm and degrees; the session tick increases by exactly one per
// applied command.

export type JamWireState = "jammed" | "released";

export interface SegmentWire {
  left: JamWireState;
  right: JamWireState;
  strain: number;
  R_mm: number | null;
  theta_deg: number;
  length_mm?: number;
}

export interface EventWire {
  tick: number;
  event: string;
  detail: string;
}

export interface StateMessage {
  type: "state";
  session: string;
  tick: number;
  seq: number;
  backbone: [number, number][];
  pressure_kpa: number;
  everted_mm: number;
  tip_mm: { x: number; y: number; heading_deg: number };
  segments: SegmentWire[];
  tip_force_n: number;
  events: EventWire[];
}

export interface RejectionMessage {
  type: "rejection";
  session: string;
  expected_seq: number;
  got: number | null;
}

export interface ErrorMessage {
  type: "error";
  session?: string;
  detail: string;
  expected_seq?: number;
}

export interface GoneMessage {
  type: "gone";
  session: string;
}

export type ServerMessage = StateMessage | RejectionMessage | ErrorMessage | GoneMessage;

export type Command =
  | { type: "set_pressure"; kpa: number }
  | { type: "set_jam"; segment: number; side: "left" | "right"; state: "jam" | "release" }
  | { type: "grow"; mm: number }
  | { type: "retract"; mm: number }
  | { type: "reset" }
  | { type: "load_scenario"; name: string };

export interface CommandMessage {
  session: string;
  seq: number;
  cmd: Command;
}

export interface EnvironmentWire {
  obstacles: [number, number][][];
  gaps: { p1_mm: [number, number]; p2_mm: [number, number]; width_mm: number }[];
  masses: { position_mm: [number, number]; mass_g: number; friction_coeff: number }[];
  targets: [number, number][];
}

export interface SessionCreated {
  session: string;
  scenario: string;
  environment: EnvironmentWire;
  state: StateMessage;
}

export interface PlanResponse {
  no_plan: boolean;
  assignment?: string[];
  pressure_kpa?: number;
  cost_mm?: number;
  predicted_tip_mm?: { x: number; y: number; heading_deg: number };
  ghost_backbone_mm?: [number, number][];
}

export function parseServerMessage(raw: string): ServerMessage {
  const data = JSON.parse(raw) as Partial<ServerMessage>;
  if (
    data &&
    (data.type === "state" || data.type === "rejection" || data.type === "error" || data.type === "gone")
  ) {
    return data as ServerMessage;
  }
  throw new Error(`malformed server message: ${raw.slice(0, 120)}`);
}
