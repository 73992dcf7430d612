import { PanelConnection } from "./connection.js";
import { PanelDom } from "./panel.js";
import { toView } from "./viewmodel.js";

const params = new URLSearchParams(window.location.search);
const serverUrl =
  params.get("server") ?? `ws://${window.location.hostname || "localhost"}:7701`;

let connection: PanelConnection;

const panel = new PanelDom({
  onKeyDown: (key) => connection.pressKey(key),
  onKeyUp: (key) => connection.releaseKey(key),
  onAdminReset: () => connection.adminReset(),
});

connection = new PanelConnection(
  serverUrl,
  {
    onSnapshot: (snap) => panel.render(toView(snap)),
    onStatus: (status, detail) => {
      panel.setConnected(status === "open");
      panel.setStatus(detail, status === "open" ? "ok" : "err");
    },
    onServerError: (msg) => panel.setStatus(msg, "err"),
  },
  (url) => new WebSocket(url),
);

document.getElementById("panel-root")!.append(panel.root);
panel.setConnected(false);
panel.setStatus(`connecting to ${serverUrl}`, "err");
connection.connect();
