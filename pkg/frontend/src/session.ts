// Lockstep session client.
//
// Exactly one command is ever in flight: the next queued command goes out
// only after the snapshot acknowledging the previous one arrives. Every
// StateMessage carries the server's last applied seq, so a reconnecting
// client can tell from the subscribe snapshot whether its in-flight
// command landed (seq caught up: drop it) or died with the old socket
// (seq one behind: resend), keeping application exactly-once.

import {
  Command,
  CommandMessage,
  ServerMessage,
  StateMessage,
  parseServerMessage,
} from "./protocol.js";

export interface Transport {
  send(data: string): void;
  close(): void;
  onmessage: ((data: string) => void) | null;
  onclose: (() => void) | null;
}

export type TransportFactory = () => Transport;

interface Pending {
  seq: number;
  cmd: Command;
}

export class SessionClient {
  seq = 0; // last seq the server has applied, as far as we know
  pending: Pending | null = null;
  queue: Command[] = [];
  lastSnapshot: StateMessage | null = null;
  sentFrames: CommandMessage[] = []; // every frame written to any transport

  onSnapshot: ((msg: StateMessage) => void) | null = null;
  onStatus: ((text: string) => void) | null = null;
  onGone: (() => void) | null = null;

  private transport: Transport | null = null;
  private awaitingSubscribeSnapshot = false;

  constructor(public sessionId: string, private makeTransport: TransportFactory) {}

  connect(): void {
    this.transport = this.makeTransport();
    this.awaitingSubscribeSnapshot = true;
    this.transport.onmessage = (data) => {
      let msg: ServerMessage;
      try {
        msg = parseServerMessage(data);
      } catch (err) {
        // Keep the last good snapshot on screen; just surface the problem.
        this.onStatus?.(`malformed message ignored: ${err}`);
        return;
      }
      this.handleMessage(msg);
    };
    this.transport.onclose = () => {
      this.transport = null;
      this.onStatus?.("disconnected");
    };
  }

  get connected(): boolean {
    return this.transport !== null;
  }

  get busy(): boolean {
    return this.pending !== null;
  }

  disconnect(): void {
    const t = this.transport;
    this.transport = null;
    if (t) {
      t.onclose = null;
      t.close();
    }
  }

  reconnect(): void {
    this.disconnect();
    this.connect();
  }

  // Queue a command; it goes out as soon as the line is idle.
  send(cmd: Command): void {
    this.queue.push(cmd);
    this.pump();
  }

  private pump(): void {
    if (!this.transport || this.awaitingSubscribeSnapshot || this.pending) {
      return;
    }
    const cmd = this.queue.shift();
    if (!cmd) {
      return;
    }
    this.pending = { seq: this.seq + 1, cmd };
    this.writePending();
  }

  private writePending(): void {
    if (!this.transport || !this.pending) {
      return;
    }
    const frame: CommandMessage = {
      session: this.sessionId,
      seq: this.pending.seq,
      cmd: this.pending.cmd,
    };
    this.sentFrames.push(frame);
    this.transport.send(JSON.stringify(frame));
  }

  private handleMessage(msg: ServerMessage): void {
    const isSubscribeSnapshot = this.awaitingSubscribeSnapshot && msg.type === "state";
    this.awaitingSubscribeSnapshot = false;
    switch (msg.type) {
      case "state": {
        this.lastSnapshot = msg;
        this.seq = msg.seq;
        if (this.pending) {
          if (msg.seq >= this.pending.seq) {
            this.pending = null; // applied (possibly just before a disconnect)
          } else if (isSubscribeSnapshot && msg.seq === this.pending.seq - 1) {
            // The frame died with the old socket: safe to resend, it was
            // never applied.
            this.writePending();
          }
        }
        this.onSnapshot?.(msg);
        this.pump();
        break;
      }
      case "rejection": {
        this.seq = msg.expected_seq - 1;
        this.pending = null; // drop; the server's view is authoritative
        this.onStatus?.(`command rejected; resynced to seq ${this.seq}`);
        this.pump();
        break;
      }
      case "error": {
        if (typeof msg.expected_seq === "number") {
          this.seq = msg.expected_seq - 1;
        }
        this.pending = null;
        this.onStatus?.(`command failed: ${msg.detail}`);
        this.pump();
        break;
      }
      case "gone": {
        this.disconnect();
        this.onGone?.();
        break;
      }
    }
  }
}
