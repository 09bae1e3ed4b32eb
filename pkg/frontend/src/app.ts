/** Application shell: wires the editor, chart, tree, and audio panel to the
 * session API and keeps the three views showing the same selection.
 *
 * All service calls are asynchronous with monotone request ordering:
 * responses that arrive after a newer request has been issued are
 * discarded, so rapid navigation always settles on the last request.
 */

import { ApiClient, ApiError, Ticketing } from "./api.js";
import { AudioPanel } from "./audiopanel.js";
import { ChartView } from "./chart.js";
import { parseRows, type Row } from "./data.js";
import { Editor } from "./editor.js";
import { Player, type PlayerOptions } from "./playback.js";
import { describe } from "./predicate.js";
import { TableDialog } from "./table.js";
import { TreeView } from "./tree.js";
import type {
  EditAction,
  Predicate,
  Schedule,
  SelectionResponse,
  SessionState,
  TreeNode,
  VisualDoc,
} from "./types.js";
import { TRUE } from "./types.js";

const TYPING_TAGS = new Set(["INPUT", "TEXTAREA", "SELECT"]);

export class App {
  readonly editor: Editor;
  readonly tree: TreeView;
  readonly chart: ChartView;
  readonly player: Player;
  readonly audioPanel: AudioPanel;
  readonly table: TableDialog;

  session: string | null = null;
  version = 0;
  state: SessionState | null = null;
  selection: Predicate = TRUE;
  localRows: Row[] = [];

  private readonly status: HTMLElement;
  private readonly viewer: HTMLElement;
  private readonly selectionTickets = new Ticketing();
  private readonly artifactTickets = new Ticketing();
  private pendingCount = 0;
  private idleWaiters: (() => void)[] = [];

  constructor(
    root: HTMLElement,
    private readonly api: ApiClient,
    playerOptions: PlayerOptions = {},
  ) {
    const header = document.createElement("header");
    const h1 = document.createElement("h1");
    h1.textContent = "Multimodal data viewer";
    const help = document.createElement("p");
    help.textContent =
      "Shortcuts: e editor, v viewer, o textual structure, p play or pause, " +
      "t table of the current scope. Arrow keys navigate the structure.";
    header.append(h1, help);

    this.status = document.createElement("div");
    this.status.setAttribute("role", "status");
    this.status.setAttribute("aria-live", "polite");

    const main = document.createElement("main");
    const editorHost = document.createElement("div");
    this.viewer = document.createElement("section");
    this.viewer.setAttribute("aria-label", "Viewer");
    main.append(editorHost, this.viewer);
    root.append(header, this.status, main);

    this.editor = new Editor(editorHost, (a) => this.handleAction(a));
    this.chart = new ChartView(this.viewer);
    this.player = new Player({
      ...playerOptions,
      onStateChange: () => {
        this.audioPanel.refresh();
        playerOptions.onStateChange?.();
      },
    });
    this.audioPanel = new AudioPanel(this.viewer, this.player, {
      onPositionPredicate: (pred) => void this.emitSelection("audio", pred),
    });
    const treeHost = document.createElement("div");
    this.viewer.appendChild(treeHost);
    this.tree = new TreeView(treeHost, (node) => void this.onTreeFocus(node));
    this.table = new TableDialog(root);

    this.shortcutHandler = (e: KeyboardEvent) => this.onShortcut(e);
    this.doc = root.ownerDocument;
    this.doc.addEventListener("keydown", this.shortcutHandler);
  }

  private readonly shortcutHandler: (e: KeyboardEvent) => void;
  private readonly doc: Document;

  /** Detach global listeners and stop playback. */
  destroy(): void {
    this.doc.removeEventListener("keydown", this.shortcutHandler);
    this.player.stop();
  }

  /** Resolves when no service calls are in flight (tests use this to settle).
   * After the count reaches zero, yields a macrotask and re-checks so the
   * continuations that consume the last response (and any follow-up calls
   * they start) are included before resolving. */
  async whenIdle(): Promise<void> {
    for (;;) {
      if (this.pendingCount > 0) {
        await new Promise<void>((resolve) => this.idleWaiters.push(resolve));
      }
      await new Promise((resolve) => setTimeout(resolve, 0));
      if (this.pendingCount === 0) return;
    }
  }

  private track<T>(p: Promise<T>): Promise<T> {
    this.pendingCount++;
    const done = () => {
      this.pendingCount--;
      if (this.pendingCount === 0) {
        const waiters = this.idleWaiters;
        this.idleWaiters = [];
        waiters.forEach((w) => w());
      }
    };
    return p.then(
      (v) => {
        done();
        return v;
      },
      (err) => {
        done();
        throw err;
      },
    );
  }

  async load(data: string, format = "csv"): Promise<void> {
    const res = await this.track(this.api.createSession(data, format));
    this.session = res.session;
    this.version = res.version;
    this.state = res.state;
    this.selection = TRUE;
    this.localRows = parseRows(data, format);
    this.editor.render(res.state);
    await this.refreshArtifacts();
    this.announce(`Loaded ${res.state.dataset?.rowCount ?? 0} rows.`);
  }

  /** Apply one edit action (the editor's controls all route through here). */
  dispatch(action: EditAction): Promise<void> {
    return this.handleAction(action);
  }

  private async handleAction(action: EditAction): Promise<void> {
    if (!this.session) {
      if (action.type === "LoadDataset") {
        await this.load(action.data, action.format ?? "csv");
      }
      return;
    }
    try {
      const res = await this.track(this.api.postAction(this.session, action));
      this.version = res.version;
      this.state = res.state;
      if (action.type === "LoadDataset") {
        this.localRows = parseRows(action.data, action.format ?? "csv");
        this.selection = TRUE;
      }
      // Any spec edit stops playback: the schedule it was playing is stale.
      if (action.type !== "SwitchTab") this.player.stop();
      this.editor.render(res.state);
      if (action.type !== "SwitchTab") await this.refreshArtifacts();
    } catch (err) {
      if (err instanceof ApiError) {
        const details = err.violations.map((v) => `${v.code}: ${v.message}`).join("; ");
        this.announce(details ? `Edit rejected — ${details}` : `Edit rejected (${err.status}).`);
        return;
      }
      throw err;
    }
  }

  async refreshArtifacts(): Promise<void> {
    if (!this.session || !this.state) return;
    const ticket = this.artifactTickets.issue();
    const session = this.session;
    const hasVisual = this.state.spec.visual.units.length > 0;
    const [visual, text, audio] = await this.track(
      Promise.all([
        hasVisual ? this.api.getVisual(session) : Promise.resolve(null),
        this.api.getText(session),
        this.api.getAudio(session),
      ]),
    );
    if (!this.artifactTickets.isCurrent(ticket)) return;
    this.chart.setDoc(visual ? visual.artifact : null);
    this.tree.render(text.artifact);
    this.applySchedules(audio.artifact);
  }

  private applySchedules(schedules: Schedule[]): void {
    const composition = this.state?.spec.audio.composition === "layer" ? "layer" : "concat";
    this.player.setSchedules(schedules, composition);
    const traversal = this.state?.spec.audio.units[0]?.traversal ?? [];
    this.audioPanel.setSchedules(schedules, traversal);
  }

  private async onTreeFocus(node: TreeNode): Promise<void> {
    await this.emitSelection("text", node.predicate);
  }

  /** Send a selection to the service and apply the returned effects. */
  async emitSelection(source: "visual" | "text" | "audio", predicate: Predicate): Promise<void> {
    if (!this.session) return;
    const ticket = this.selectionTickets.issue();
    let res: SelectionResponse;
    try {
      res = await this.track(this.api.postSelection(this.session, this.version, source, predicate));
    } catch (err) {
      if (err instanceof ApiError && err.status === 409 && err.currentVersion !== null) {
        // Our version lagged an applied edit; adopt it and retry once.
        this.version = err.currentVersion;
        if (!this.selectionTickets.isCurrent(ticket)) return;
        res = await this.track(
          this.api.postSelection(this.session, this.version, source, predicate),
        );
      } else {
        throw err;
      }
    }
    if (!this.selectionTickets.isCurrent(ticket)) return; // stale response: discard
    this.selection = res.predicate;
    if (res.effects.visual) this.chart.setDoc(res.effects.visual.payload);
    if (res.effects.audio) this.applySchedules(res.effects.audio.payload);
    if (res.effects.text && source !== "text") this.tree.render(res.effects.text.payload);
    if (source === "audio" && this.session) {
      // The source modality gets no effect back; re-request its schedule
      // (the service applies the stored selection to artifact reads).
      const audio = await this.track(this.api.getAudio(this.session));
      if (this.selectionTickets.isCurrent(ticket)) this.applySchedules(audio.artifact);
    }
    this.announce(`Selection: ${describe(res.predicate)}.`);
  }

  private onShortcut(e: KeyboardEvent): void {
    const target = e.target as Element | null;
    if (target && TYPING_TAGS.has(target.tagName)) return;
    if (e.altKey || e.ctrlKey || e.metaKey) return;
    switch (e.key) {
      case "e":
        this.editor.focus();
        break;
      case "v":
        this.chart.focus();
        break;
      case "o":
        this.tree.focus();
        break;
      case "p":
        this.player.toggle();
        break;
      case "t":
        this.openTable();
        break;
      default:
        return; // unbound keys pass through
    }
    e.preventDefault();
  }

  openTable(): void {
    if (!this.state?.dataset) return;
    const scope = this.tree.currentNode?.predicate ?? this.selection;
    const columns = this.state.dataset.columns.map((c) => c.name);
    this.table.open(columns, this.localRows, scope);
  }

  get currentVisualDoc(): VisualDoc | null {
    return this.chart.currentDoc;
  }

  private announce(message: string): void {
    this.status.textContent = message;
  }
}
