import { ApiError, ReviewClient } from "./api.js";
import type { ReviewTask, Selection } from "./types.js";

const PAGE_SIZE = 10;

/**
 * The curation workbench: shows the oldest open task, lets the reviewer pick
 * one of the top candidates or reject them all, submits, and advances.
 *
 * Keyboard: 1-5 select candidate, R reject-all, Enter submit.
 */
export class App {
  tasks: ReviewTask[] = [];
  totalOpen = 0;
  selection: Selection = null;
  reviewer = "";
  toast = "";
  error = "";

  constructor(
    private readonly root: HTMLElement,
    private readonly client: ReviewClient,
    private readonly doc: Document = document,
  ) {}

  get currentTask(): ReviewTask | null {
    return this.tasks[0] ?? null;
  }

  get canSubmit(): boolean {
    return this.selection !== null && this.currentTask !== null;
  }

  async start(): Promise<void> {
    this.root.addEventListener("keydown", (ev) => this.onKey(ev as KeyboardEvent));
    await this.refresh();
  }

  async refresh(): Promise<void> {
    try {
      const page = await this.client.listPending(PAGE_SIZE, 0);
      this.tasks = page.tasks;
      this.totalOpen = page.total_open;
      this.selection = null;
      this.error = "";
    } catch (err) {
      this.error = `queue fetch failed: ${(err as Error).message}`;
    }
    this.render();
  }

  selectCandidate(index: number): void {
    const task = this.currentTask;
    if (!task || index < 0 || index >= task.candidates.length) return;
    this.selection = { kind: "candidate", mcid: task.candidates[index].mcid };
    this.render();
  }

  selectRejectAll(): void {
    if (!this.currentTask) return;
    this.selection = { kind: "reject_all" };
    this.render();
  }

  async submit(): Promise<void> {
    const task = this.currentTask;
    if (!task || !this.selection) return;
    try {
      const result =
        this.selection.kind === "candidate"
          ? await this.client.submitDecision(
              task.pending_id,
              "choose",
              this.reviewer || "anonymous",
              this.selection.mcid,
            )
          : await this.client.submitDecision(
              task.pending_id,
              "reject_all",
              this.reviewer || "anonymous",
            );
      this.toast =
        result.outcome === "merged_into"
          ? `merged into ${result.mcid}`
          : `new concept ${result.mcid}`;
      await this.refresh();
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // another reviewer resolved it; silently pick up the next task
        await this.refresh();
        return;
      }
      this.error = `submit failed: ${(err as Error).message}`;
      this.render();
    }
  }

  private onKey(ev: KeyboardEvent): void {
    if (ev.key >= "1" && ev.key <= "5") {
      this.selectCandidate(Number(ev.key) - 1);
    } else if (ev.key === "r" || ev.key === "R") {
      this.selectRejectAll();
    } else if (ev.key === "Enter" && this.canSubmit) {
      void this.submit();
    }
  }

  // -- rendering ------------------------------------------------------------

  render(): void {
    this.root.textContent = "";
    if (this.error) this.root.appendChild(this.renderBanner());
    if (this.toast) this.root.appendChild(this.renderToast());

    const task = this.currentTask;
    if (!task) {
      const done = this.el("p", "queue-drained", "queue drained — nothing to review");
      this.root.appendChild(done);
      return;
    }

    this.root.appendChild(this.el("p", "queue-count", `${this.totalOpen} open task(s)`));
    this.root.appendChild(this.renderReviewerField());
    this.root.appendChild(this.renderSource(task));
    this.root.appendChild(this.renderCandidates(task));
    this.root.appendChild(this.renderSubmit());
  }

  private renderBanner(): HTMLElement {
    const banner = this.el("div", "error-banner", this.error);
    const retry = this.el("button", "retry", "retry");
    retry.addEventListener("click", () => void this.refresh());
    banner.appendChild(retry);
    return banner;
  }

  private renderToast(): HTMLElement {
    return this.el("div", "toast", this.toast);
  }

  private renderReviewerField(): HTMLElement {
    const wrap = this.el("div", "reviewer");
    const input = this.doc.createElement("input");
    input.className = "reviewer-name";
    input.placeholder = "reviewer name";
    input.value = this.reviewer;
    input.addEventListener("input", () => {
      this.reviewer = input.value;
    });
    wrap.appendChild(input);
    return wrap;
  }

  private renderSource(task: ReviewTask): HTMLElement {
    const sc = task.source_concept;
    const box = this.el("div", "source-concept");
    box.appendChild(
      this.el("h2", "source-head", `${sc.source_abbr} ${sc.code_in_source}`),
    );
    const list = this.el("ul", "source-terms");
    for (const term of sc.terms) {
      list.appendChild(this.el("li", "source-term", `${term.term_string} [${term.tty}]`));
    }
    box.appendChild(list);
    return box;
  }

  private renderCandidates(task: ReviewTask): HTMLElement {
    const box = this.el("div", "candidates");
    task.candidates.forEach((candidate, i) => {
      const row = this.el("div", "candidate");
      const selected =
        this.selection?.kind === "candidate" && this.selection.mcid === candidate.mcid;
      if (selected) row.classList.add("selected");
      const types = candidate.top_types.length
        ? ` — ${candidate.top_types.join(", ")}`
        : "";
      row.textContent = `${i + 1}. ${candidate.preferred_term} (${candidate.mcid}, ${candidate.score.toFixed(2)})${types}`;
      row.addEventListener("click", () => this.selectCandidate(i));
      box.appendChild(row);
    });
    const reject = this.el("div", "candidate reject-all", "R. reject all (new concept)");
    if (this.selection?.kind === "reject_all") reject.classList.add("selected");
    reject.addEventListener("click", () => this.selectRejectAll());
    box.appendChild(reject);
    return box;
  }

  private renderSubmit(): HTMLElement {
    const button = this.doc.createElement("button");
    button.className = "submit";
    button.textContent = "submit decision";
    button.disabled = !this.canSubmit;
    button.addEventListener("click", () => void this.submit());
    return button;
  }

  private el(tag: string, className: string, text?: string): HTMLElement {
    const node = this.doc.createElement(tag);
    node.className = className;
    if (text !== undefined) node.textContent = text;
    return node;
  }
}
