import { describe, expect, it } from "vitest";

import { SegmentWire, StateMessage } from "../src/protocol.js";
import { backboneScreenVertices, sceneBounds, segmentRuns } from "../src/renderer.js";
import { Viewport } from "../src/viewport.js";

function snapshot(backbone: [number, number][]): StateMessage {
  return {
    type: "state",
    session: "s",
    tick: 1,
    seq: 1,
    backbone,
    pressure_kpa: 40,
    everted_mm: 100,
    tip_mm: { x: backbone[backbone.length - 1][0], y: backbone[backbone.length - 1][1], heading_deg: 0 },
    segments: [],
    tip_force_n: 0,
    events: [],
  };
}

describe("backbone vertices under the viewport transform", () => {
  it("equals the snapshot polyline mapped point by point", () => {
    const backbone: [number, number][] = [
      [0, 0],
      [25.5, 3.25],
      [51.75, 13.125],
      [80.0, 31.5],
    ];
    const vp = new Viewport(800, 600);
    vp.fitTo(sceneBounds({ snapshot: snapshot(backbone), environment: null, robotDiameterMm: 32, ghost: null }));
    const rendered = backboneScreenVertices(backbone, vp);
    expect(rendered.length).toBe(backbone.length);
    backbone.forEach((p, i) => {
      expect(rendered[i][0]).toBe(vp.offsetX + p[0] * vp.scale);
      expect(rendered[i][1]).toBe(vp.offsetY - p[1] * vp.scale);
    });
  });
});

describe("segment runs for jam highlighting", () => {
  const seg = (leftJam: boolean, length: number): SegmentWire => ({
    left: leftJam ? "jammed" : "released",
    right: "released",
    strain: 0,
    R_mm: null,
    theta_deg: 0,
    length_mm: length,
  });

  it("splits the polyline at segment-length boundaries", () => {
    const backbone: [number, number][] = [
      [0, 0],
      [50, 0],
      [100, 0],
      [150, 0],
      [200, 0],
    ];
    const runs = segmentRuns(backbone, [seg(true, 100), seg(false, 100)]);
    expect(runs.length).toBe(2);
    expect(runs[0][0]).toEqual([0, 0]);
    expect(runs[0][runs[0].length - 1]).toEqual([100, 0]);
    expect(runs[1][0]).toEqual([100, 0]);
    expect(runs[1][runs[1].length - 1]).toEqual([200, 0]);
  });

  it("keeps everything in one run when only one segment is everted", () => {
    const backbone: [number, number][] = [
      [0, 0],
      [30, 0],
      [60, 0],
    ];
    const runs = segmentRuns(backbone, [seg(false, 100), seg(false, 100)]);
    expect(runs.length).toBe(1);
    expect(runs[0].length).toBe(3);
  });

  it("handles an empty backbone", () => {
    expect(segmentRuns([], [seg(false, 100)])).toEqual([]);
  });
});
