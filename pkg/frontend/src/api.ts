/** Typed client for the game service. All correctness verdicts come from
 * the server; the pack payload this client consumes carries no answers. */

export interface PoiView {
  id: string;
  name: string;
  lat: number;
  lon: number;
  trigger_radius_m: number;
  topic: string;
}

export interface ParkingView {
  id: string;
  lat: number;
  lon: number;
}

export interface PackView {
  pois: PoiView[];
  parking: ParkingView[];
  topics: string[];
  languages: string[];
}

export interface QuizQuestionView {
  text: string;
  options: string[];
}

export interface QuizView {
  questionnaire: string;
  poi_id: string;
  poi_name: string;
  /** Server-side answer cursor at the time the view was produced. */
  question_index: number;
  question_count: number;
  questions: QuizQuestionView[];
}

export interface ResultView {
  questionnaire: string;
  correct_count: number;
  total_count: number;
  score: number;
  end_message: string;
  topic_points: Record<string, number>;
}

export interface TriggerView {
  poi_id: string;
  distance: number;
}

export interface PositionResponse {
  triggers: TriggerView[];
  active_quiz: QuizView | null;
}

export interface AnswerResponse {
  correct: boolean;
  done: boolean;
  result?: ResultView;
}

export interface ResultRow {
  questionnaire: string;
  score: number | null;
}

export interface LeaderboardRow {
  username: string;
  points: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly field?: string,
    readonly body?: Record<string, unknown>,
  ) {
    super(message);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  token: string | null = null;
  private pending = 0;
  private waiters: (() => void)[] = [];

  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  /** Resolves once no request is in flight and follow-up microtasks ran;
   * lets scripted tests wait for the UI to reach a stable state. */
  async settled(): Promise<void> {
    do {
      while (this.pending > 0) {
        await new Promise<void>((resolve) => this.waiters.push(resolve));
      }
      for (let i = 0; i < 25; i++) await Promise.resolve();
    } while (this.pending > 0);
  }

  private async request<T>(
    method: string, path: string, body?: unknown, authed = true,
  ): Promise<T> {
    this.pending += 1;
    try {
      const headers: Record<string, string> = { "Content-Type": "application/json" };
      if (authed && this.token) headers["Authorization"] = `Bearer ${this.token}`;
      const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
      const data = (await response.json().catch(() => ({}))) as Record<string, unknown>;
      if (!response.ok) {
        throw new ApiError(
          response.status,
          typeof data.code === "string" ? data.code : "io",
          typeof data.message === "string" ? data.message : response.statusText,
          typeof data.field === "string" ? data.field : undefined,
          data,
        );
      }
      return data as T;
    } finally {
      this.pending -= 1;
      if (this.pending === 0) {
        const waiters = this.waiters;
        this.waiters = [];
        for (const waiter of waiters) waiter();
      }
    }
  }

  async register(email: string, username: string, password: string): Promise<string> {
    const data = await this.request<{ user_id: string }>(
      "POST", "/api/register", { email, username, password }, false);
    return data.user_id;
  }

  async login(identifier: string, password: string): Promise<void> {
    const data = await this.request<{ token: string }>(
      "POST", "/api/login", { identifier, password }, false);
    this.token = data.token;
  }

  async logout(): Promise<void> {
    await this.request("POST", "/api/logout", {});
    this.token = null;
  }

  pack(): Promise<PackView> {
    return this.request<PackView>("GET", "/api/pack", undefined, false);
  }

  async openSession(
    difficulty: string, vehicleId: string, language: string,
  ): Promise<string> {
    const data = await this.request<{ session_id: string }>(
      "POST", "/api/session",
      { difficulty, vehicle_id: vehicleId, language });
    return data.session_id;
  }

  postPosition(
    sessionId: string, lat: number, lon: number, t: number,
  ): Promise<PositionResponse> {
    return this.request<PositionResponse>(
      "POST", `/api/session/${sessionId}/position`, { lat, lon, t });
  }

  answer(
    sessionId: string, questionnaire: string,
    questionIndex: number, choiceIndex: number,
  ): Promise<AnswerResponse> {
    return this.request<AnswerResponse>(
      "POST", `/api/session/${sessionId}/quiz/${questionnaire}/answer`,
      { question_index: questionIndex, choice_index: choiceIndex });
  }

  async saveResult(questionnaire: string, overwrite: boolean): Promise<"stored" | "rejected_exists"> {
    try {
      await this.request("POST", `/api/results/${questionnaire}`, { overwrite });
      return "stored";
    } catch (error) {
      if (error instanceof ApiError && error.body?.status === "rejected_exists") {
        return "rejected_exists";
      }
      throw error;
    }
  }

  async results(): Promise<ResultRow[]> {
    const data = await this.request<{ results: ResultRow[] }>("GET", "/api/results");
    return data.results;
  }

  async leaderboard(n = 10): Promise<LeaderboardRow[]> {
    const data = await this.request<{ leaderboard: LeaderboardRow[] }>(
      "GET", `/api/leaderboard?n=${n}`);
    return data.leaderboard;
  }
}
