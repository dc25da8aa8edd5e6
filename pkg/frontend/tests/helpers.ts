// A controllable in-memory socket standing in for the WebSocket.

import { SocketLike } from "../src/client";

export type ServerScript = (command: Record<string, unknown>, socket: FakeSocket) => void;

export class FakeSocket implements SocketLike {
  sent: string[] = [];
  onmessage: ((event: { data: string }) => void) | null = null;
  onopen: (() => void) | null = null;
  onclose: (() => void) | null = null;

  constructor(private script?: ServerScript) {}

  send(data: string): void {
    this.sent.push(data);
    this.script?.(JSON.parse(data), this);
  }

  close(): void {
    this.onclose?.();
  }

  open(): void {
    this.onopen?.();
  }

  push(message: object): void {
    this.onmessage?.({ data: JSON.stringify(message) });
  }

  sentCommands(): Record<string, unknown>[] {
    return this.sent.map((frame) => JSON.parse(frame));
  }
}

export function connectedClientWith(
  script?: ServerScript,
  options: Record<string, unknown> = {},
) {
  const socket = new FakeSocket(script);
  // the factory hands the prepared socket to the client under test
  const makeClient = async () => {
    const { ConsoleClient } = await import("../src/client");
    const client = new ConsoleClient("ws://test/ws", () => socket, options);
    client.connect();
    socket.open();
    return { client, socket };
  };
  return makeClient();
}
