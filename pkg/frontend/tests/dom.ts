// Shared jsdom wiring: the UI code only needs document/window globals, and
// installing them explicitly keeps the tests in the plain node environment
// (so node's real fetch stays available for the end-to-end run).

import { JSDOM } from "jsdom";

export function installDom(): HTMLElement {
  const dom = new JSDOM('<!DOCTYPE html><main id="app"></main>', {
    url: "http://localhost/",
  });
  const g = globalThis as Record<string, unknown>;
  g.document = dom.window.document;
  g.window = dom.window;
  g.HTMLElement = dom.window.HTMLElement;
  g.MouseEvent = dom.window.MouseEvent;
  return dom.window.document.querySelector("#app") as HTMLElement;
}

export async function waitFor(cond: () => boolean, ms = 8000): Promise<void> {
  const deadline = Date.now() + ms;
  while (Date.now() < deadline) {
    if (cond()) return;
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
  throw new Error("timed out waiting for condition");
}

export function click(element: Element | null): void {
  if (!element) throw new Error("click target missing");
  (element as HTMLElement).click();
}
