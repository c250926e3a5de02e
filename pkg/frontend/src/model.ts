/** Board view-model: committed rows mirror the session history, a draft row
 * collects the next guess and its tapped colors, and the suggestion panel
 * re-renders whatever the service last said.  Pure state + async actions;
 * no DOM here so it runs under vitest as-is. */

import {
  ApiError,
  AssistantApi,
  SessionConfig,
  SessionView,
  Suggestion,
} from "./api.js";

export type TileColor = "B" | "Y" | "G" | null;

export interface CommittedRow {
  letters: string;
  colors: string;
}

export type BoardError =
  | { kind: "local"; message: string }
  | { kind: "conflict"; message: string }
  | { kind: "network"; message: string }
  | { kind: "rejected"; message: string };

export interface BoardConfig {
  mode: string;
  length: number;
  policy: string;
  shortlistSize: number;
  opener?: string;
}

const COLOR_CYCLE: Record<string, TileColor> = { B: "Y", Y: "G", G: "B" };

export class BoardModel {
  sessionId: string | null = null;
  config: BoardConfig;
  rows: CommittedRow[] = [];
  draftLetters = "";
  draftColors: TileColor[] = [];
  suggestions: Suggestion[] = [];
  eligibleCount = 0;
  solved = false;
  error: BoardError | null = null;
  busy = false;
  detailsExpanded = false;

  constructor(
    private api: AssistantApi,
    config?: Partial<BoardConfig>,
  ) {
    this.config = {
      mode: "easy",
      length: 5,
      policy: "rollout-mig",
      shortlistSize: 10,
      ...config,
    };
  }

  /** Start a fresh session; the previous board is discarded only after the
   * server answers, so a failed request preserves the current game. */
  async newGame(patch: Partial<BoardConfig> = {}): Promise<void> {
    const next = { ...this.config, ...patch };
    const request: SessionConfig = {
      mode: next.mode,
      length: next.length,
      policy: next.policy,
      shortlist_size: next.shortlistSize,
    };
    if (next.opener) request.opener = next.opener;
    await this.guarded(async () => {
      const view = await this.api.createSession(request);
      this.config = next;
      this.applyView(view);
    });
  }

  typeLetter(ch: string): void {
    if (this.solved || this.busy) return;
    const letter = ch.toLowerCase();
    if (!/^[a-z]$/.test(letter)) return;
    if (this.draftLetters.length >= this.config.length) return;
    this.draftLetters += letter;
    this.draftColors.push(null);
    this.error = null;
  }

  backspace(): void {
    if (this.busy) return;
    this.draftLetters = this.draftLetters.slice(0, -1);
    this.draftColors.pop();
    this.error = null;
  }

  /** Tap a tile: gray -> yellow -> green -> gray; first tap marks gray. */
  cycleTile(index: number): void {
    if (this.busy || index >= this.draftLetters.length) return;
    const current = this.draftColors[index];
    this.draftColors[index] = current === null ? "B" : COLOR_CYCLE[current];
  }

  setDraft(letters: string, colors: string): void {
    this.draftLetters = letters.toLowerCase();
    this.draftColors = colors.toUpperCase().split("") as TileColor[];
  }

  draftComplete(): boolean {
    return (
      this.draftLetters.length === this.config.length &&
      this.draftColors.length === this.config.length &&
      this.draftColors.every((c) => c !== null)
    );
  }

  /** Submit the draft row.  Local validation failures never reach the
   * network; a 409 keeps the session intact and asks for corrected colors. */
  async submit(): Promise<void> {
    if (this.solved || this.sessionId === null) return;
    if (this.draftLetters.length !== this.config.length) {
      this.error = {
        kind: "local",
        message: `need a ${this.config.length}-letter word`,
      };
      return;
    }
    if (!this.draftComplete()) {
      this.error = { kind: "local", message: "color every tile before submitting" };
      return;
    }
    const pattern = this.draftColors.join("");
    await this.guarded(async () => {
      const view = await this.api.submitFeedback(
        this.sessionId as string,
        this.draftLetters,
        pattern,
      );
      this.applyView(view);
    });
  }

  async undo(): Promise<void> {
    if (this.sessionId === null || this.busy) return;
    await this.guarded(async () => {
      const view = await this.api.undo(this.sessionId as string);
      this.applyView(view);
    });
  }

  /** Mode and length changes restart the game (the caller confirms first). */
  async toggleMode(): Promise<void> {
    await this.newGame({ mode: this.config.mode === "easy" ? "hard" : "easy" });
  }

  async toggleLength(): Promise<void> {
    await this.newGame({ length: this.config.length === 5 ? 6 : 5 });
  }

  toggleDetails(): void {
    this.detailsExpanded = !this.detailsExpanded;
  }

  /** Suggestion lines exactly as the service sent them. */
  suggestionLines(): string[] {
    return this.suggestions.map((s) => s.display);
  }

  bestSuggestion(): Suggestion | null {
    return this.suggestions.length ? this.suggestions[0] : null;
  }

  private applyView(view: SessionView): void {
    this.sessionId = view.session_id;
    this.rows = view.history.map((h) => ({ letters: h.guess, colors: h.pattern }));
    this.suggestions = view.suggestions;
    this.eligibleCount = view.eligible_count;
    this.solved = view.solved;
    this.draftLetters = "";
    this.draftColors = [];
    this.error = null;
  }

  private async guarded(action: () => Promise<void>): Promise<void> {
    this.busy = true;
    try {
      await action();
    } catch (err) {
      if (err instanceof ApiError) {
        this.error =
          err.status === 409
            ? { kind: "conflict", message: err.detail }
            : { kind: "rejected", message: err.detail };
      } else {
        this.error = {
          kind: "network",
          message: "request failed; check the service and retry",
        };
      }
    } finally {
      this.busy = false;
    }
  }
}
