/** Browser bootstrap: API base from <meta name="api-base">, else same origin. */

import { App } from "./app.js";

const meta = document.querySelector('meta[name="api-base"]');
const apiBase = meta?.getAttribute("content") || "";

const root = document.getElementById("app");
if (root) {
  const app = new App(root, { apiBase });
  void app.boot();
}
