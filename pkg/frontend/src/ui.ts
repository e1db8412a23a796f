// DOM layer: the paste view and the three-pane translation view
// ("Actual oración" / "Frase" / "Documento").  All mutations go through the
// API client; the panes re-render from state mirrored off server responses.

import { ApiClient, ApiError, Segment } from "./api.js";
import {
  ViewState,
  allChosen,
  choiceFor,
  chosenLabel,
  documentText,
  hashForSession,
  initialState,
  segmentColor,
} from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

export class App {
  state: ViewState = initialState();
  root: HTMLElement;

  constructor(
    private api: ApiClient,
    root: HTMLElement,
    private onSession: (sessionId: string) => void = () => {},
  ) {
    this.root = root;
  }

  // ---- session lifecycle ---------------------------------------------------

  async start(text: string): Promise<void> {
    const created = await this.api.createSession(text);
    this.state = initialState();
    this.state.sessionId = created.sessionId;
    this.state.sentenceCount = created.sentences;
    this.onSession(created.sessionId);
    await this.showSentence(0);
  }

  async restore(sessionId: string): Promise<void> {
    const info = await this.api.sessionInfo(sessionId);
    this.state = initialState();
    this.state.sessionId = sessionId;
    this.state.sentenceCount = info.sentences;
    for (const n of info.accepted) {
      const payload = await this.api.getSentence(sessionId, n);
      if (payload.target) this.state.document.set(n, payload.target);
    }
    await this.showSentence(info.sentences ? 0 : -1);
  }

  async showSentence(n: number): Promise<void> {
    if (this.state.sessionId === null) return;
    if (n < 0 || n >= this.state.sentenceCount) {
      this.render();
      return;
    }
    this.state.current = n;
    this.state.sentence = await this.api.getSentence(this.state.sessionId, n);
    this.state.selectedSegment = null;
    this.render();
  }

  // ---- mutations (one in flight at a time) ----------------------------------

  private async mutate(action: () => Promise<void>): Promise<void> {
    if (this.state.busy) return;
    this.state.busy = true;
    this.render();
    try {
      await action();
      this.state.error = null;
    } catch (error) {
      this.state.error = error instanceof ApiError ? error.detail : String(error);
    } finally {
      this.state.busy = false;
      this.render();
    }
  }

  choose(segmentIndex: number, option: number | string): Promise<void> {
    return this.mutate(async () => {
      const { sessionId, current } = this.state;
      await this.api.postChoice(sessionId!, current, segmentIndex, option);
      this.state.sentence = await this.api.getSentence(sessionId!, current);
      this.state.selectedSegment = segmentIndex;
    });
  }

  accept(): Promise<void> {
    return this.mutate(async () => {
      const { sessionId, current } = this.state;
      const response = await this.api.acceptSentence(sessionId!, current);
      this.state.document.set(current, response.targetSentence);
      this.state.sentence = await this.api.getSentence(sessionId!, current);
    });
  }

  // ---- rendering ---------------------------------------------------------------

  render(): void {
    this.root.replaceChildren();
    const banner = el("div", {
      id: "error-banner",
      class: "error-banner",
      style: this.state.error ? "" : "display:none",
      title: "clic para descartar",
    }, this.state.error ?? "");
    banner.addEventListener("click", () => {
      this.state.error = null;
      this.render();
    });
    this.root.append(banner);
    if (this.state.sessionId === null || this.state.sentence === null) {
      this.renderPasteView();
    } else {
      this.renderWorkbench();
    }
  }

  private renderPasteView(): void {
    const textarea = el("textarea", {
      id: "source-text",
      rows: "8",
      placeholder: "Escriba o pegue aquí el texto para traducir…",
    });
    const button = el("button", { id: "start" }, "Traducir");
    button.addEventListener("click", () => {
      void this.mutate(() => this.start(textarea.value));
    });
    this.root.append(
      el("section", { class: "paste" },
        el("h1", {}, "segcat"),
        el("p", {}, "Traducción asistida por segmentos."),
        textarea,
        button,
      ),
    );
  }

  private renderWorkbench(): void {
    const sentence = this.state.sentence!;
    this.root.append(
      el("section", { class: "pane", id: "pane-sentence" },
        el("h2", {}, "Actual oración"),
        this.renderNav(),
        this.renderSegmentStrip(),
        this.renderFuzzy(),
      ),
      el("section", { class: "pane", id: "pane-phrase" },
        el("h2", {}, "Frase"),
        this.renderPhrasePane(),
      ),
      el("section", { class: "pane", id: "pane-document" },
        el("h2", {}, "Documento"),
        this.renderDocumentPane(),
      ),
    );
    if (sentence.accepted) {
      const strip = this.root.querySelector("#segment-strip");
      strip?.classList.add("accepted");
    }
  }

  private renderNav(): HTMLElement {
    const { current, sentenceCount } = this.state;
    const prev = el("button", { id: "prev" }, "◀");
    const next = el("button", { id: "next" }, "▶");
    if (current === 0) prev.setAttribute("disabled", "");
    if (current >= sentenceCount - 1) next.setAttribute("disabled", "");
    prev.addEventListener("click", () => void this.showSentence(current - 1));
    next.addEventListener("click", () => void this.showSentence(current + 1));
    return el("div", { class: "nav" },
      prev,
      el("span", { class: "nav-label" }, ` oración ${current + 1} / ${sentenceCount} `),
      next,
    );
  }

  private renderSegmentStrip(): HTMLElement {
    const sentence = this.state.sentence!;
    const strip = el("div", { id: "segment-strip", class: "strip" });
    sentence.segments.forEach((segment, i) => {
      const block = el("span", {
        class: "segment" + (this.state.selectedSegment === i ? " selected" : ""),
        "data-segment": String(i),
        style: `background:${segmentColor(segment, i)}`,
        title: segment.segmentId ?? "sin traducción",
      }, segment.text);
      const choice = choiceFor(sentence, i);
      if (choice) {
        block.append(el("span", { class: "chosen" }, ` → ${chosenLabel(segment, choice)}`));
      }
      block.addEventListener("click", () => {
        this.state.selectedSegment = i;
        this.render();
        if (segment.kind === "gray") {
          const input = this.root.querySelector<HTMLInputElement>("#custom-text");
          input?.focus();
        }
      });
      strip.append(block);
    });
    return strip;
  }

  private renderFuzzy(): HTMLElement {
    const matches = this.state.sentence!.fuzzyMatches;
    if (!matches.length) return el("div", { id: "fuzzy", class: "fuzzy empty" });
    return el("div", { id: "fuzzy", class: "fuzzy" },
      el("h3", {}, "Memoria de traducción"),
      ...matches.map((m) =>
        el("div", { class: "fuzzy-match" },
          el("span", { class: "score" }, m.score.toFixed(2)),
          el("span", { class: "src" }, ` ${m.source} `),
          el("span", { class: "tgt" }, `→ ${m.target}`),
        ),
      ),
    );
  }

  private renderPhrasePane(): HTMLElement {
    const sentence = this.state.sentence!;
    const index = this.state.selectedSegment;
    if (index === null) {
      return el("p", { class: "hint" }, "Haga clic en un segmento de la oración.");
    }
    const segment: Segment = sentence.segments[index];
    const pane = el("div", { id: "options" });
    segment.options.forEach((option, k) => {
      const button = el("button", {
        class: "option",
        "data-option": String(k),
      }, option);
      if (this.state.busy || sentence.accepted) button.setAttribute("disabled", "");
      button.addEventListener("click", () => void this.choose(index, k));
      pane.append(button);
    });
    if (!segment.options.length) {
      pane.append(el("p", { class: "hint" }, "Sin opciones: segmento no traducido."));
    }
    const input = el("input", {
      id: "custom-text",
      type: "text",
      placeholder: "…o escriba su propia traducción",
    });
    const submit = el("button", { id: "custom-submit" }, "Usar este texto");
    if (this.state.busy || sentence.accepted) submit.setAttribute("disabled", "");
    submit.addEventListener("click", () => {
      if (input.value.trim()) void this.choose(index, input.value);
    });
    pane.append(el("div", { class: "custom" }, input, submit));
    return pane;
  }

  private renderDocumentPane(): HTMLElement {
    const sentence = this.state.sentence!;
    const acceptButton = el("button", { id: "accept" }, "Aceptar oración");
    if (!allChosen(sentence) || sentence.accepted || this.state.busy) {
      acceptButton.setAttribute("disabled", "");
    }
    acceptButton.addEventListener("click", () => void this.accept());
    const downloadDoc = el("a", {
      id: "download-document",
      href: this.api.documentUrl(this.state.sessionId!),
      download: "documento.txt",
    }, "Descargar documento");
    const downloadTmx = el("a", {
      id: "download-tmx",
      href: this.api.tmxUrl(this.state.sessionId!),
      download: "memoria.tmx",
    }, "Descargar TMX");
    return el("div", {},
      el("pre", { id: "document-text" }, documentText(this.state)),
      el("div", { class: "doc-actions" }, acceptButton, downloadDoc, downloadTmx),
    );
  }
}

export function mount(root: HTMLElement, api: ApiClient): App {
  const app = new App(api, root, (sessionId) => {
    window.location.hash = hashForSession(sessionId);
  });
  return app;
}
