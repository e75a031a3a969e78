// World (mm, y up) to screen (px, y down) mapping with fixed aspect ratio.

export interface Bounds {
  minX: number;
  minY: number;
  maxX: number;
  maxY: number;
}

export class Viewport {
  scale = 1; // px per mm
  offsetX = 0; // screen x of world (0, 0)
  offsetY = 0; // screen y of world (0, 0)

  constructor(public width: number, public height: number) {}

  worldToScreen(p: [number, number]): [number, number] {
    return [this.offsetX + p[0] * this.scale, this.offsetY - p[1] * this.scale];
  }

  screenToWorld(p: [number, number]): [number, number] {
    return [(p[0] - this.offsetX) / this.scale, (this.offsetY - p[1]) / this.scale];
  }

  // Zoom so the bounds fill the canvas with padding, preserving aspect.
  fitTo(bounds: Bounds, paddingPx = 24): void {
    const spanX = Math.max(bounds.maxX - bounds.minX, 1);
    const spanY = Math.max(bounds.maxY - bounds.minY, 1);
    this.scale = Math.min(
      (this.width - 2 * paddingPx) / spanX,
      (this.height - 2 * paddingPx) / spanY,
    );
    const centerX = (bounds.minX + bounds.maxX) / 2;
    const centerY = (bounds.minY + bounds.maxY) / 2;
    this.offsetX = this.width / 2 - centerX * this.scale;
    this.offsetY = this.height / 2 + centerY * this.scale;
  }
}

export function expandBounds(points: [number, number][], bounds?: Bounds): Bounds {
  const b = bounds ?? { minX: Infinity, minY: Infinity, maxX: -Infinity, maxY: -Infinity };
  for (const [x, y] of points) {
    b.minX = Math.min(b.minX, x);
    b.minY = Math.min(b.minY, y);
    b.maxX = Math.max(b.maxX, x);
    b.maxY = Math.max(b.maxY, y);
  }
  return b;
}
