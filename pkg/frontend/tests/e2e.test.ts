// Scripted session against a real server process (acceptance criterion for
// the UI): paste the classic sentence, click its segment, select option 0,
// accept, and download the document and TMX.  The gray-segment custom-text
// path runs with an unknown-word sentence.  No translation strings are
// hard-coded here beyond the expected server outputs.

import { ChildProcess, spawn } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/ui.js";
import { click, installDom, waitFor } from "./dom.js";

let server: ChildProcess;
let base: string;

async function serverReady(url: string): Promise<void> {
  const deadline = Date.now() + 30000;
  while (Date.now() < deadline) {
    try {
      await fetch(url + "/api/session/none/document");
      return;
    } catch {
      await new Promise((resolve) => setTimeout(resolve, 150));
    }
  }
  throw new Error("server did not come up");
}

beforeAll(async () => {
  const port = 8700 + Math.floor(Math.random() * 500);
  base = `http://127.0.0.1:${port}`;
  const dir = mkdtempSync(join(tmpdir(), "segcat-ui-"));
  server = spawn(
    "python3",
    ["-m", "segcat.cli", "serve", "--port", String(port),
     "--memory", join(dir, "memory.tmj"),
     "--sessions", join(dir, "sessions.jsonl"),
     "--ui", join(import.meta.dirname ?? __dirname, "..", "dist")],
    { stdio: "ignore" },
  );
  await serverReady(base);
}, 40000);

afterAll(() => {
  server?.kill("SIGKILL");
});

describe("scripted translator session", () => {
  it("paste, click segment, pick option 0, accept, download", async () => {
    const root = installDom();
    const app = new App(new ApiClient(base), root);
    app.render();

    const textarea = root.querySelector<HTMLTextAreaElement>("#source-text")!;
    textarea.value = "se burla del presidente";
    click(root.querySelector("#start"));
    await waitFor(() => root.querySelector(".segment") !== null);

    click(root.querySelector('[data-segment="0"]'));
    await waitFor(() => root.querySelector("#options .option") !== null);
    click(root.querySelector('#options .option[data-option="0"]'));
    await waitFor(() => {
      const accept = root.querySelector("#accept");
      return accept !== null && !accept.hasAttribute("disabled");
    });
    click(root.querySelector("#accept"));
    await waitFor(() =>
      (root.querySelector("#document-text")?.textContent ?? "").length > 0,
    );
    expect(root.querySelector("#document-text")!.textContent).toContain(
      "Oñembohory mburuvicha rehe",
    );

    // the download links stream the server's document and TMX
    const docHref = root.querySelector("#download-document")!.getAttribute("href")!;
    const docText = await (await fetch(docHref)).text();
    expect(docText).toContain("Oñembohory mburuvicha rehe");

    const tmxHref = root.querySelector("#download-tmx")!.getAttribute("href")!;
    const tmxText = await (await fetch(tmxHref)).text();
    const units = tmxText.match(/<tu[\s>]/g) ?? [];
    expect(units.length).toBe(1);
    expect(tmxText).toContain("Oñembohory mburuvicha rehe");
  }, 30000);

  it("gray segment takes custom text verbatim", async () => {
    const root = installDom();
    const app = new App(new ApiClient(base), root);
    app.render();

    const textarea = root.querySelector<HTMLTextAreaElement>("#source-text")!;
    textarea.value = "xyzzy plugh";
    click(root.querySelector("#start"));
    await waitFor(() => root.querySelector(".segment") !== null);

    click(root.querySelector('[data-segment="0"]'));
    await waitFor(() => root.querySelector("#custom-text") !== null);
    expect(root.querySelectorAll("#options .option").length).toBe(0);
    const input = root.querySelector<HTMLInputElement>("#custom-text")!;
    input.value = "mi propia traducción";
    click(root.querySelector("#custom-submit"));
    await waitFor(() => {
      const accept = root.querySelector("#accept");
      return accept !== null && !accept.hasAttribute("disabled");
    });
    click(root.querySelector("#accept"));
    await waitFor(() =>
      (root.querySelector("#document-text")?.textContent ?? "").includes("propia"),
    );

    const docHref = root.querySelector("#download-document")!.getAttribute("href")!;
    const docText = await (await fetch(docHref)).text();
    expect(docText).toContain("Mi propia traducción");
  }, 30000);

  it("serves the built UI bundle at /", async () => {
    const page = await (await fetch(base + "/")).text();
    expect(page).toContain('<main id="app">');
    expect(page).toContain("main.js");
  });

  it("refresh restores accepted sentences from the session id", async () => {
    const root = installDom();
    const app = new App(new ApiClient(base), root);
    await app.start("por eso");
    const sid = app.state.sessionId!;
    click(root.querySelector('[data-segment="0"]'));
    await waitFor(() => root.querySelector("#options .option") !== null);
    click(root.querySelector('#options .option[data-option="0"]'));
    await waitFor(() => !root.querySelector("#accept")!.hasAttribute("disabled"));
    click(root.querySelector("#accept"));
    await waitFor(() =>
      (root.querySelector("#document-text")?.textContent ?? "").length > 0,
    );
    const pane = root.querySelector("#document-text")!.textContent;

    const fresh = installDom();
    const restored = new App(new ApiClient(base), fresh);
    await restored.restore(sid);
    expect(fresh.querySelector("#document-text")!.textContent).toBe(pane);
  }, 30000);
});
