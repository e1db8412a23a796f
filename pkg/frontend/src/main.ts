import { ApiClient } from "./api.js";
import { sessionFromHash } from "./state.js";
import { mount } from "./ui.js";

const root = document.querySelector<HTMLElement>("#app");
if (root) {
  const app = mount(root, new ApiClient(""));
  const existing = sessionFromHash(window.location.hash);
  if (existing) {
    app.restore(existing).catch(() => {
      window.location.hash = "";
      app.render();
    });
  } else {
    app.render();
  }
}
