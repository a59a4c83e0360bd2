/** Typed client for the survey backend's HTTP+JSON API. */

export type Prompt = "aesthetic" | "complexity";
export type Outcome = "left" | "right" | "tie";

export interface Demographics {
  age_range: string;
  gender: string;
  expertise: string;
}

export interface ComparisonPayload {
  comparison_id: string;
  dataset: string;
  left_url: string;
  right_url: string;
  prompt: Prompt;
  prompt_text: string;
  completed: number;
  continue_checkpoint: number;
}

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number | null = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class SurveyApi {
  private readonly fetchFn: FetchLike;

  constructor(
    private readonly base: string = "",
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.base + path, init);
    } catch (err) {
      throw new ApiError(`network failure: ${String(err)}`);
    }
    if (!response.ok) {
      throw new ApiError(`${path} failed with ${response.status}`, response.status);
    }
    return (await response.json()) as T;
  }

  async createSession(demographics: Demographics): Promise<string> {
    const body = await this.request<{ session_id: string }>("/api/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(demographics),
    });
    return body.session_id;
  }

  async nextComparison(sessionId: string): Promise<ComparisonPayload> {
    return this.request<ComparisonPayload>(`/api/sessions/${sessionId}/next`);
  }

  async submitChoice(comparisonId: string, outcome: Outcome, durationMs: number): Promise<void> {
    await this.request<{ ok: boolean }>(`/api/comparisons/${comparisonId}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ outcome, duration_ms: durationMs }),
    });
  }
}
