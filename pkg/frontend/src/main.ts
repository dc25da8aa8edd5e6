// Browser entry point: connect to the console service next door.

import { ConsoleClient, SocketLike } from "./client.js";
import { ConsoleView } from "./dom.js";

function websocketFactory(url: string): SocketLike {
  return new WebSocket(url) as unknown as SocketLike;
}

const scheme = location.protocol === "https:" ? "wss" : "ws";
const url = `${scheme}://${location.host}/ws`;

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app container");
}

let view: ConsoleView;
const client = new ConsoleClient(url, websocketFactory, {
  reconnectDelayMs: 1000,
  onChange: (state) => view.update(state),
  onReply: (reply) => {
    if (reply.type === "error") {
      const banner = document.getElementById("errors");
      if (banner) {
        banner.textContent = reply.message ?? "command rejected";
        setTimeout(() => (banner.textContent = ""), 4000);
      }
      client.unlockAfterRejection();
    }
  },
});
view = new ConsoleView(root, client);
client.connect();
