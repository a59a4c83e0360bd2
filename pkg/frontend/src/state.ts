/**
 * Survey UI state machine, kept free of DOM concerns so the whole
 * participant flow is scriptable in tests.
 *
 * Rules enforced here rather than in the view:
 *  - submission is impossible without an explicit selection;
 *  - the decision timer starts only once both images are preloaded and
 *    displayed, so duration_ms measures decision time, not network time;
 *  - a selection can be replaced freely until Next is pressed;
 *  - a failed submission keeps the comparison and selection for a
 *    non-destructive retry;
 *  - after the checkpoint-th submission (the server says 10) the
 *    participant is asked to continue or exit.
 */

import { ApiError, ComparisonPayload, Demographics, Outcome, SurveyApi } from "./api.js";

export type Phase =
  | "demographics"
  | "loading"
  | "comparing"
  | "continue_prompt"
  | "done"
  | "image_error"
  | "submit_error";

export type Selection = Outcome | "none";

export interface MachineDeps {
  api: SurveyApi;
  /** Millisecond clock; injectable for tests. */
  now?: () => number;
  /** Resolves when both images are fetched and ready to show. */
  preload?: (urls: string[]) => Promise<void>;
}

type Listener = () => void;

export class SurveyMachine {
  phase: Phase = "demographics";
  selection: Selection = "none";
  current: ComparisonPayload | null = null;
  completed = 0;
  lastError = "";

  private sessionId = "";
  private displayedAt = 0;
  private readonly api: SurveyApi;
  private readonly now: () => number;
  private readonly preload: (urls: string[]) => Promise<void>;
  private readonly listeners: Listener[] = [];

  constructor(deps: MachineDeps) {
    this.api = deps.api;
    this.now = deps.now ?? (() => Date.now());
    this.preload = deps.preload ?? (() => Promise.resolve());
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private changed(): void {
    for (const listener of this.listeners) listener();
  }

  get nextEnabled(): boolean {
    return this.phase === "comparing" && this.selection !== "none";
  }

  async start(demographics: Demographics): Promise<void> {
    this.sessionId = await this.api.createSession(demographics);
    await this.fetchNext();
  }

  private async fetchNext(): Promise<void> {
    this.phase = "loading";
    this.selection = "none";
    this.changed();
    this.current = await this.api.nextComparison(this.sessionId);
    this.completed = this.current.completed;
    await this.showCurrent();
  }

  /** Preload both images, then start the decision timer. */
  private async showCurrent(): Promise<void> {
    const payload = this.current;
    if (payload === null) throw new Error("no comparison to show");
    try {
      await this.preload([payload.left_url, payload.right_url]);
    } catch (err) {
      this.phase = "image_error";
      this.lastError = String(err);
      this.changed();
      return;
    }
    this.phase = "comparing";
    this.selection = "none";
    this.displayedAt = this.now();
    this.changed();
  }

  /** Retry control for a failed image fetch: same pair, fresh attempt. */
  async retryImages(): Promise<void> {
    if (this.phase !== "image_error") return;
    await this.showCurrent();
  }

  select(selection: Outcome): void {
    if (this.phase !== "comparing") return;
    this.selection = selection; // replacing an earlier pick is allowed
    this.changed();
  }

  async submitAndAdvance(): Promise<void> {
    if (!this.nextEnabled && this.phase !== "submit_error") return;
    const payload = this.current;
    if (payload === null || this.selection === "none") return;
    const duration = Math.max(1, this.now() - this.displayedAt);
    try {
      await this.api.submitChoice(payload.comparison_id, this.selection, duration);
    } catch (err) {
      // non-destructive: keep comparison_id and selection for retry
      this.phase = "submit_error";
      this.lastError = err instanceof ApiError ? err.message : String(err);
      this.changed();
      return;
    }
    this.completed += 1;
    if (this.completed === payload.continue_checkpoint) {
      this.phase = "continue_prompt";
      this.selection = "none";
      this.changed();
      return;
    }
    await this.fetchNext();
  }

  async retrySubmit(): Promise<void> {
    if (this.phase !== "submit_error") return;
    await this.submitAndAdvance();
  }

  async continueSurvey(): Promise<void> {
    if (this.phase !== "continue_prompt") return;
    await this.fetchNext();
  }

  exit(): void {
    this.phase = "done";
    this.changed();
  }
}
