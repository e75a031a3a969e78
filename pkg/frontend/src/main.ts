// Entry point: create a session, open the command channel, wire the
// canvas renderer and control panel together.

import { ControlPanel } from "./controls.js";
import { EnvironmentWire, PlanResponse, SessionCreated, StateMessage } from "./protocol.js";
import { Scene, drawScene, sceneBounds } from "./renderer.js";
import { SessionClient, Transport } from "./session.js";
import { Viewport } from "./viewport.js";

function webSocketTransport(url: string): Transport {
  const ws = new WebSocket(url);
  const transport: Transport = {
    send: (data) => ws.send(data),
    close: () => ws.close(),
    onmessage: null,
    onclose: null,
  };
  ws.onmessage = (ev) => transport.onmessage?.(String(ev.data));
  ws.onclose = () => transport.onclose?.();
  return transport;
}

async function boot(): Promise<void> {
  const canvas = document.getElementById("scene") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d")!;
  const viewport = new Viewport(canvas.width, canvas.height);
  const scene: Scene = { snapshot: null, environment: null, robotDiameterMm: 32, ghost: null };

  const scenariosResp = await fetch("/scenarios");
  const scenarioNames: string[] = (await scenariosResp.json()).scenarios;
  const initial = scenarioNames[0] ?? "gap";

  const created: SessionCreated = await (
    await fetch("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ scenario: initial }),
    })
  ).json();

  scene.environment = created.environment;
  const wsProto = location.protocol === "https:" ? "wss" : "ws";
  const client = new SessionClient(created.session, () =>
    webSocketTransport(`${wsProto}://${location.host}/sessions/${created.session}/ws`),
  );

  const panel = new ControlPanel(document.getElementById("panel")!, {
    sendCommand: (cmd) => {
      client.send(cmd);
      panel.setBusy(client.busy);
    },
    requestPlan: async (target) => {
      const resp = await fetch(`/sessions/${created.session}/plan`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ target_mm: target }),
      });
      const plan: PlanResponse = await resp.json();
      if (plan.no_plan || !plan.ghost_backbone_mm) {
        scene.ghost = null;
        panel.toast("no plan reaches that target");
      } else {
        scene.ghost = plan.ghost_backbone_mm;
        panel.toast(
          `plan: ${plan.assignment!.join(",")} @ ${plan.pressure_kpa!.toFixed(1)} kPa ` +
            `(cost ${plan.cost_mm!.toFixed(1)} mm)`,
        );
      }
      redraw();
    },
    loadScenario: async (name) => {
      client.send({ type: "load_scenario", name });
      panel.setBusy(client.busy);
      const envResp = await fetch(`/sessions/${created.session}/environment`);
      const data: { environment: EnvironmentWire } = await envResp.json();
      scene.environment = data.environment;
      scene.ghost = null;
      fitAndRedraw();
    },
  });
  panel.setScenarios(scenarioNames, initial);

  function redraw(): void {
    drawScene(ctx, scene, viewport);
  }

  function fitAndRedraw(): void {
    viewport.fitTo(sceneBounds(scene));
    redraw();
  }

  client.onSnapshot = (snapshot: StateMessage) => {
    scene.snapshot = snapshot;
    panel.update(snapshot);
    panel.setBusy(client.busy);
    redraw();
    panel.onAcknowledged();
  };
  client.onStatus = (text) => panel.setStatus(text);
  client.onGone = () => panel.setStatus("session expired");

  document.getElementById("reconnect")!.addEventListener("click", () => {
    client.reconnect();
    panel.setStatus("reconnecting...");
  });

  client.connect();
  scene.snapshot = created.state;
  fitAndRedraw();
}

boot().catch((err) => {
  const status = document.getElementById("status");
  if (status) {
    status.textContent = `failed to start: ${err}`;
  }
});
