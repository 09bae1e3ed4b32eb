/** Browser entry point. The service base URL defaults to the page origin
 * and can be overridden with `window.TRIMODAL_API` or `?api=<url>`. */

import { ApiClient } from "./api.js";
import { App } from "./app.js";

declare global {
  interface Window {
    TRIMODAL_API?: string;
    trimodalApp?: App;
  }
}

function baseUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return fromQuery ?? window.TRIMODAL_API ?? window.location.origin;
}

const root = document.getElementById("app");
if (root) {
  window.trimodalApp = new App(root, new ApiClient(baseUrl()));
}
