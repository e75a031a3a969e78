// Operator control panel: pressure slider, per-segment brake toggles,
// grow/retract, scenario picker, plan overlay. Controls follow the
// lockstep contract: everything that issues commands is disabled while
// one is in flight and re-enabled when its snapshot arrives.

import { Command, SegmentWire, StateMessage } from "./protocol.js";

export interface ControlCallbacks {
  sendCommand(cmd: Command): void;
  requestPlan(targetMm: [number, number]): void;
  loadScenario(name: string): void;
}

export class ControlPanel {
  private pressureSlider: HTMLInputElement;
  private pressureLabel: HTMLElement;
  private segmentsBox: HTMLElement;
  private statusLine: HTMLElement;
  private toasts: HTMLElement;
  private scenarioSelect: HTMLSelectElement;
  private growHeld = false;

  constructor(private root: HTMLElement, private callbacks: ControlCallbacks) {
    this.pressureSlider = root.querySelector("#pressure")!;
    this.pressureLabel = root.querySelector("#pressure-value")!;
    this.segmentsBox = root.querySelector("#segments")!;
    this.statusLine = root.querySelector("#status")!;
    this.toasts = root.querySelector("#toasts")!;
    this.scenarioSelect = root.querySelector("#scenario")!;

    this.pressureSlider.addEventListener("change", () => {
      this.callbacks.sendCommand({ type: "set_pressure", kpa: Number(this.pressureSlider.value) });
    });
    this.pressureSlider.addEventListener("input", () => {
      this.pressureLabel.textContent = `${this.pressureSlider.value} kPa`;
    });

    const grow = root.querySelector("#grow")!;
    const retract = root.querySelector("#retract")!;
    grow.addEventListener("mousedown", () => (this.growHeld = true));
    window.addEventListener("mouseup", () => (this.growHeld = false));
    grow.addEventListener("click", () => this.callbacks.sendCommand({ type: "grow", mm: 5 }));
    retract.addEventListener("click", () => this.callbacks.sendCommand({ type: "retract", mm: 5 }));

    root.querySelector("#reset")!.addEventListener("click", () => {
      this.callbacks.sendCommand({ type: "reset" });
    });
    this.scenarioSelect.addEventListener("change", () => {
      this.callbacks.loadScenario(this.scenarioSelect.value);
    });
    root.querySelector("#plan-button")!.addEventListener("click", () => {
      const x = Number((root.querySelector("#plan-x") as HTMLInputElement).value);
      const y = Number((root.querySelector("#plan-y") as HTMLInputElement).value);
      if (Number.isFinite(x) && Number.isFinite(y)) {
        this.callbacks.requestPlan([x, y]);
      }
    });
  }

  setScenarios(names: string[], current: string): void {
    this.scenarioSelect.innerHTML = "";
    for (const name of names) {
      const opt = document.createElement("option");
      opt.value = name;
      opt.textContent = name;
      opt.selected = name === current;
      this.scenarioSelect.appendChild(opt);
    }
  }

  setBusy(busy: boolean): void {
    this.root.querySelectorAll("button, input, select").forEach((el) => {
      (el as HTMLButtonElement).disabled = busy;
    });
    this.statusLine.textContent = busy ? "applying..." : "ready";
  }

  setStatus(text: string): void {
    this.statusLine.textContent = text;
  }

  // Hold-to-grow: one follow-up command per acknowledged snapshot.
  onAcknowledged(): void {
    if (this.growHeld) {
      this.callbacks.sendCommand({ type: "grow", mm: 5 });
    }
  }

  update(snapshot: StateMessage): void {
    this.pressureSlider.value = String(Math.round(snapshot.pressure_kpa));
    this.pressureLabel.textContent = `${snapshot.pressure_kpa.toFixed(0)} kPa`;
    this.renderSegments(snapshot.segments);
    for (const event of snapshot.events) {
      this.toast(`${event.event}: ${event.detail}`);
    }
  }

  private renderSegments(segments: SegmentWire[]): void {
    this.segmentsBox.innerHTML = "";
    segments.forEach((seg, i) => {
      const row = document.createElement("div");
      row.className = "segment-row";
      const label = document.createElement("span");
      label.textContent = `seg ${i}`;
      row.appendChild(label);
      for (const side of ["left", "right"] as const) {
        const btn = document.createElement("button");
        const jammed = seg[side] === "jammed";
        btn.textContent = side === "left" ? "L" : "R";
        btn.className = jammed ? "brake jammed" : "brake released";
        btn.title = `${side} brake: ${seg[side]}`;
        btn.addEventListener("click", () => {
          this.callbacks.sendCommand({
            type: "set_jam",
            segment: i,
            side,
            state: jammed ? "release" : "jam",
          });
        });
        row.appendChild(btn);
      }
      const info = document.createElement("span");
      info.className = "segment-info";
      info.textContent =
        seg.R_mm === null ? `straight e=${seg.strain.toFixed(2)}` : `R=${seg.R_mm.toFixed(0)}mm`;
      row.appendChild(info);
      this.segmentsBox.appendChild(row);
    });
  }

  toast(text: string): void {
    const el = document.createElement("div");
    el.className = "toast";
    el.textContent = text;
    this.toasts.appendChild(el);
    setTimeout(() => el.remove(), 4000);
  }
}
