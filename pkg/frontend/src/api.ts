/** Typed client for the assistant service. The UI holds no game logic:
 * every count, ranking and display string comes verbatim from these
 * responses. */

export interface Suggestion {
  word: string;
  score: number | null;
  qhat: number | null;
  display: string;
}

export interface HistoryRow {
  guess: string;
  pattern: string; // B/Y/G string, position 0 leftmost
}

export interface SessionView {
  session_id: string;
  mode: string;
  length: number;
  policy: string;
  shortlist_size: number;
  opener: string;
  history: HistoryRow[];
  eligible_count: number;
  solved: boolean;
  suggestions: Suggestion[];
}

export interface SessionConfig {
  mode?: string;
  length?: number;
  policy?: string;
  shortlist_size?: number;
  opener?: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(detail);
  }
}

async function parseOrThrow(response: Response): Promise<any> {
  if (response.ok) {
    return response.status === 204 ? null : response.json();
  }
  let detail = `${response.status}`;
  try {
    const body = await response.json();
    if (typeof body.detail === "string") detail = body.detail;
    else detail = JSON.stringify(body.detail ?? body);
  } catch {
    /* non-JSON error body; keep the status text */
  }
  throw new ApiError(response.status, detail);
}

export class AssistantApi {
  constructor(private baseUrl: string = "") {}

  async createSession(config: SessionConfig): Promise<SessionView> {
    const response = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(config),
    });
    return parseOrThrow(response);
  }

  async getState(sessionId: string): Promise<SessionView> {
    return parseOrThrow(await fetch(`${this.baseUrl}/sessions/${sessionId}`));
  }

  async submitFeedback(
    sessionId: string,
    guess: string,
    pattern: string,
  ): Promise<SessionView> {
    const response = await fetch(`${this.baseUrl}/sessions/${sessionId}/feedback`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ guess, pattern }),
    });
    return parseOrThrow(response);
  }

  async undo(sessionId: string): Promise<SessionView> {
    const response = await fetch(`${this.baseUrl}/sessions/${sessionId}/undo`, {
      method: "POST",
    });
    return parseOrThrow(response);
  }

  async deleteSession(sessionId: string): Promise<void> {
    await parseOrThrow(
      await fetch(`${this.baseUrl}/sessions/${sessionId}`, { method: "DELETE" }),
    );
  }
}
