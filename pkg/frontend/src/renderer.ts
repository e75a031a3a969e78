// Scene rendering. All physics lives server-side: the backbone drawn here
// is exactly the snapshot's polyline mapped through the viewport, never a
// client-side re-simulation.

import { EnvironmentWire, SegmentWire, StateMessage } from "./protocol.js";
import { Viewport, expandBounds } from "./viewport.js";

export interface Scene {
  snapshot: StateMessage | null;
  environment: EnvironmentWire | null;
  robotDiameterMm: number;
  ghost: [number, number][] | null; // plan overlay backbone, world mm
}

// The one source of truth for where backbone vertices land on screen.
export function backboneScreenVertices(
  backbone: [number, number][],
  viewport: Viewport,
): [number, number][] {
  return backbone.map((p) => viewport.worldToScreen(p));
}

// Split the backbone polyline into per-segment runs by arclength, using
// the segment lengths reported in the snapshot (everted prefix only).
export function segmentRuns(
  backbone: [number, number][],
  segments: SegmentWire[],
): [number, number][][] {
  const runs: [number, number][][] = [];
  if (backbone.length === 0) {
    return runs;
  }
  let segIdx = 0;
  let budget = segments.length > 0 ? segments[0].length_mm ?? Infinity : Infinity;
  let run: [number, number][] = [backbone[0]];
  for (let i = 1; i < backbone.length; i++) {
    const [ax, ay] = backbone[i - 1];
    const [bx, by] = backbone[i];
    let pieceLen = Math.hypot(bx - ax, by - ay);
    budget -= pieceLen;
    run.push(backbone[i]);
    while (budget <= 1e-9 && segIdx < segments.length - 1) {
      runs.push(run);
      run = [backbone[i]];
      segIdx += 1;
      budget += segments[segIdx].length_mm ?? Infinity;
    }
  }
  runs.push(run);
  return runs;
}

export function sceneBounds(scene: Scene): { minX: number; minY: number; maxX: number; maxY: number } {
  let bounds = expandBounds([[0, 0]]);
  if (scene.environment) {
    for (const poly of scene.environment.obstacles) {
      bounds = expandBounds(poly, bounds);
    }
    bounds = expandBounds(scene.environment.targets, bounds);
    bounds = expandBounds(
      scene.environment.masses.map((m) => m.position_mm),
      bounds,
    );
  }
  if (scene.snapshot) {
    bounds = expandBounds(scene.snapshot.backbone, bounds);
  }
  // Room for the robot body and some growth.
  bounds.minX -= 60;
  bounds.minY -= 60;
  bounds.maxX += 60;
  bounds.maxY += 60;
  return bounds;
}

const SEGMENT_COLORS = { both: "#8a4bd0", left: "#d0571f", right: "#1f6fd0", none: "#2e8b57" };

function runColor(seg: SegmentWire | undefined): string {
  if (!seg) return SEGMENT_COLORS.none;
  const left = seg.left === "jammed";
  const right = seg.right === "jammed";
  if (left && right) return SEGMENT_COLORS.both;
  if (left) return SEGMENT_COLORS.left;
  if (right) return SEGMENT_COLORS.right;
  return SEGMENT_COLORS.none;
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  scene: Scene,
  viewport: Viewport,
): void {
  ctx.clearRect(0, 0, viewport.width, viewport.height);
  ctx.fillStyle = "#fafafa";
  ctx.fillRect(0, 0, viewport.width, viewport.height);

  if (scene.environment) {
    drawEnvironment(ctx, scene.environment, viewport);
  }
  if (scene.ghost && scene.ghost.length > 1) {
    drawPolyline(ctx, backboneScreenVertices(scene.ghost, viewport), {
      stroke: "rgba(46, 139, 87, 0.35)",
      width: scene.robotDiameterMm * viewport.scale,
    });
  }
  const snap = scene.snapshot;
  if (snap && snap.backbone.length > 1) {
    const runs = segmentRuns(snap.backbone, snap.segments);
    runs.forEach((run, i) => {
      drawPolyline(ctx, backboneScreenVertices(run, viewport), {
        stroke: runColor(snap.segments[i]),
        width: scene.robotDiameterMm * viewport.scale,
      });
    });
  }
  if (snap) {
    const [tx, ty] = viewport.worldToScreen([snap.tip_mm.x, snap.tip_mm.y]);
    ctx.beginPath();
    ctx.arc(tx, ty, Math.max(3, (scene.robotDiameterMm / 2) * viewport.scale), 0, 2 * Math.PI);
    ctx.fillStyle = "#222";
    ctx.fill();
  }
}

interface StrokeStyle {
  stroke: string;
  width: number;
}

function drawPolyline(
  ctx: CanvasRenderingContext2D,
  pts: [number, number][],
  style: StrokeStyle,
): void {
  if (pts.length < 2) return;
  ctx.beginPath();
  ctx.moveTo(pts[0][0], pts[0][1]);
  for (let i = 1; i < pts.length; i++) {
    ctx.lineTo(pts[i][0], pts[i][1]);
  }
  ctx.lineCap = "round";
  ctx.lineJoin = "round";
  ctx.strokeStyle = style.stroke;
  ctx.lineWidth = Math.max(1, style.width);
  ctx.stroke();
}

function drawEnvironment(
  ctx: CanvasRenderingContext2D,
  env: EnvironmentWire,
  viewport: Viewport,
): void {
  ctx.fillStyle = "#555";
  for (const poly of env.obstacles) {
    const pts = poly.map((p) => viewport.worldToScreen(p));
    ctx.beginPath();
    ctx.moveTo(pts[0][0], pts[0][1]);
    for (let i = 1; i < pts.length; i++) {
      ctx.lineTo(pts[i][0], pts[i][1]);
    }
    ctx.closePath();
    ctx.fill();
  }
  ctx.strokeStyle = "#c9a800";
  ctx.setLineDash([6, 4]);
  ctx.lineWidth = 2;
  for (const gap of env.gaps) {
    const a = viewport.worldToScreen(gap.p1_mm);
    const b = viewport.worldToScreen(gap.p2_mm);
    ctx.beginPath();
    ctx.moveTo(a[0], a[1]);
    ctx.lineTo(b[0], b[1]);
    ctx.stroke();
  }
  ctx.setLineDash([]);
  for (const mass of env.masses) {
    const [x, y] = viewport.worldToScreen(mass.position_mm);
    ctx.beginPath();
    ctx.arc(x, y, 8, 0, 2 * Math.PI);
    ctx.fillStyle = "#b04a4a";
    ctx.fill();
    ctx.fillStyle = "#fff";
    ctx.font = "9px sans-serif";
    ctx.textAlign = "center";
    ctx.fillText(`${mass.mass_g.toFixed(0)}g`, x, y + 3);
  }
  ctx.strokeStyle = "#1fa05a";
  ctx.lineWidth = 2;
  for (const target of env.targets) {
    const [x, y] = viewport.worldToScreen(target);
    ctx.beginPath();
    ctx.arc(x, y, 10, 0, 2 * Math.PI);
    ctx.stroke();
    ctx.beginPath();
    ctx.moveTo(x - 14, y);
    ctx.lineTo(x + 14, y);
    ctx.moveTo(x, y - 14);
    ctx.lineTo(x, y + 14);
    ctx.stroke();
  }
}
