/** Application shell: auth, map page with live position, quiz wiring,
 * results and leaderboard pages.
 *
 * Positions flow one way: browser geolocation (or the manual fallback)
 * updates `lastPosition`; a single poll loop posts it to the session at
 * a fixed cadence, skipping while the quiz modal is open or while a
 * previous post is still in flight (skip, never queue).
 */

import { ApiClient, ApiError, PackView, PoiView, PositionResponse } from "./api.js";
import { compassPoint, formatDistance, haversineMeters, initialBearingDeg } from "./geo.js";
import { MapView } from "./map.js";
import { QuizModal } from "./quiz.js";
import { renderLeaderboard, renderResults } from "./results.js";
import { t, topicLabel } from "./strings.js";

export interface AppConfig {
  apiBase: string;
  pollMs?: number;
  fetchImpl?: typeof fetch;
}

const VEHICLES = ["elv", "bicycle", "bus", "other"] as const;

export class App {
  readonly client: ApiClient;
  pack: PackView | null = null;
  lang = "en";
  sessionId: string | null = null;
  lastPosition: { lat: number; lon: number } | null = null;
  positionInFlight = false;
  private positionDirty = false;
  private lastT = 0;
  private pollTimer: ReturnType<typeof setInterval> | null = null;
  private readonly pollMs: number;
  private tab: "map" | "topics" | "results" | "leaderboard" = "map";

  map: MapView | null = null;
  quiz: QuizModal | null = null;

  private readonly authView: HTMLElement;
  private readonly gameView: HTMLElement;
  private readonly pageView: HTMLElement;
  private readonly banner: HTMLElement;

  constructor(private readonly root: HTMLElement, private readonly config: AppConfig) {
    this.client = new ApiClient(config.apiBase, config.fetchImpl);
    this.pollMs = config.pollMs ?? 3000;
    this.root.classList.add("geoquest-app");
    this.authView = document.createElement("div");
    this.authView.className = "auth-view";
    this.gameView = document.createElement("div");
    this.gameView.className = "game-view";
    this.gameView.hidden = true;
    this.banner = document.createElement("div");
    this.banner.className = "geo-banner";
    this.banner.hidden = true;
    this.pageView = document.createElement("div");
    this.pageView.className = "page-view";
    this.root.append(this.authView, this.gameView);
  }

  /** Resolves when every request the UI started has settled. */
  settled(): Promise<void> {
    return this.client.settled();
  }

  async boot(): Promise<void> {
    this.pack = await this.client.pack();
    this.lang = this.pack.languages[0] ?? "en";
    this.renderAuth();
  }

  // -- auth -----------------------------------------------------------------

  private field(form: HTMLElement, name: string, type: string, label: string): HTMLInputElement {
    const wrap = document.createElement("label");
    wrap.textContent = label;
    const input = document.createElement("input");
    input.name = name;
    input.type = type;
    wrap.appendChild(input);
    form.appendChild(wrap);
    return input;
  }

  private select(form: HTMLElement, name: string, label: string,
                 options: { value: string; label: string }[]): HTMLSelectElement {
    const wrap = document.createElement("label");
    wrap.textContent = label;
    const select = document.createElement("select");
    select.name = name;
    for (const option of options) {
      const element = document.createElement("option");
      element.value = option.value;
      element.textContent = option.label;
      select.appendChild(element);
    }
    wrap.appendChild(select);
    form.appendChild(wrap);
    return select;
  }

  private renderAuth(): void {
    const pack = this.pack;
    if (!pack) return;
    this.authView.replaceChildren();

    const title = document.createElement("h1");
    title.textContent = t("app_title", this.lang);
    this.authView.appendChild(title);

    const error = document.createElement("p");
    error.className = "auth-error";

    const registerForm = document.createElement("form");
    registerForm.className = "register-form";
    const regEmail = this.field(registerForm, "email", "email", t("email", this.lang));
    const regUser = this.field(registerForm, "username", "text", t("username", this.lang));
    const regPass = this.field(registerForm, "password", "password", t("password", this.lang));
    const regButton = document.createElement("button");
    regButton.type = "submit";
    regButton.textContent = t("register", this.lang);
    registerForm.appendChild(regButton);

    const loginForm = document.createElement("form");
    loginForm.className = "login-form";
    const logId = this.field(loginForm, "identifier", "text", t("identifier", this.lang));
    const logPass = this.field(loginForm, "password", "password", t("password", this.lang));
    const language = this.select(loginForm, "language", t("language", this.lang),
      pack.languages.map((code) => ({ value: code, label: code })));
    const difficulty = this.select(loginForm, "difficulty", t("difficulty", this.lang), [
      { value: "easy", label: t("easy", this.lang) },
      { value: "hard", label: t("hard", this.lang) },
    ]);
    const vehicle = this.select(loginForm, "vehicle", t("vehicle", this.lang),
      VEHICLES.map((id) => ({ value: id, label: t(`vehicle_${id}`, this.lang) })));
    const logButton = document.createElement("button");
    logButton.type = "submit";
    logButton.textContent = t("login", this.lang);
    loginForm.appendChild(logButton);

    registerForm.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.client.register(regEmail.value, regUser.value, regPass.value)
        .then(() => { error.textContent = `${t("login", this.lang)} →`; })
        .catch((failure) => { error.textContent = describe(failure); });
    });
    loginForm.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.login(
        logId.value, logPass.value,
        language.value, difficulty.value, vehicle.value,
      ).catch((failure) => { error.textContent = describe(failure); });
    });

    this.authView.append(registerForm, loginForm, error);
  }

  async login(identifier: string, password: string, language?: string,
              difficulty = "easy", vehicleId = "elv"): Promise<void> {
    await this.client.login(identifier, password);
    this.lang = language ?? this.lang;
    this.sessionId = await this.client.openSession(difficulty, vehicleId, this.lang);
    this.renderGame();
  }

  // -- game -----------------------------------------------------------------

  private renderGame(): void {
    const pack = this.pack;
    if (!pack) return;
    this.authView.hidden = true;
    this.gameView.hidden = false;
    this.gameView.replaceChildren();

    const nav = document.createElement("nav");
    nav.className = "tabs";
    for (const tab of ["map", "topics", "results", "leaderboard"] as const) {
      const button = document.createElement("button");
      button.type = "button";
      button.className = `tab tab-${tab}`;
      button.textContent = t(`${tab}_tab`, this.lang);
      button.addEventListener("click", () => { void this.show(tab); });
      nav.appendChild(button);
    }
    const logout = document.createElement("button");
    logout.type = "button";
    logout.className = "logout";
    logout.textContent = t("logout", this.lang);
    logout.addEventListener("click", () => { void this.doLogout(); });
    nav.appendChild(logout);

    this.gameView.append(nav, this.banner, this.pageView);

    const mapPage = document.createElement("div");
    mapPage.className = "map-page";
    const mapContainer = document.createElement("div");
    mapContainer.className = "map-container";
    const poiInfo = document.createElement("p");
    poiInfo.className = "poi-info";
    mapPage.append(mapContainer, this.manualPositionForm(), poiInfo);
    this.pageView.replaceChildren(mapPage);

    this.map = new MapView(mapContainer);
    this.map.setPack(pack);
    this.map.onSelect((lat, lon) => { void this.setManualPosition(lat, lon); });
    this.map.onPoiClick((poi) => this.showPoiInfo(poi, poiInfo));

    this.quiz = new QuizModal(
      this.gameView, this.client,
      () => this.lang,
      () => this.resyncQuiz(),
      () => { void this.afterQuizClosed(); },
    );

    this.startGeolocation();
    this.startPolling();
  }

  private async doLogout(): Promise<void> {
    this.stopPolling();
    await this.client.logout().catch(() => undefined);
    this.sessionId = null;
    this.gameView.hidden = true;
    this.authView.hidden = false;
  }

  private manualPositionForm(): HTMLElement {
    const form = document.createElement("form");
    form.className = "manual-position";
    const lat = document.createElement("input");
    lat.name = "lat";
    lat.placeholder = "lat";
    const lon = document.createElement("input");
    lon.name = "lon";
    lon.placeholder = "lon";
    const submit = document.createElement("button");
    submit.type = "submit";
    submit.textContent = t("manual_position", this.lang);
    form.append(lat, lon, submit);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const latValue = Number(lat.value);
      const lonValue = Number(lon.value);
      if (Number.isFinite(latValue) && Number.isFinite(lonValue)) {
        void this.setManualPosition(latValue, lonValue);
      }
    });
    return form;
  }

  private showPoiInfo(poi: PoiView, target: HTMLElement): void {
    if (!this.lastPosition) {
      target.textContent = poi.name;
      return;
    }
    const { lat, lon } = this.lastPosition;
    const distance = haversineMeters(lat, lon, poi.lat, poi.lon);
    const bearing = initialBearingDeg(lat, lon, poi.lat, poi.lon);
    target.textContent = `${poi.name}: ${formatDistance(distance)} ` +
      `${compassPoint(bearing)} (${t("distance_to", this.lang)})`;
  }

  private startGeolocation(): void {
    const geolocation = typeof navigator !== "undefined" ? navigator.geolocation : undefined;
    if (!geolocation) {
      this.showGeoBanner();
      return;
    }
    geolocation.watchPosition(
      (update) => {
        this.banner.hidden = true;
        this.notePosition(update.coords.latitude, update.coords.longitude);
      },
      () => this.showGeoBanner(),
      { enableHighAccuracy: true },
    );
  }

  private showGeoBanner(): void {
    this.banner.hidden = false;
    this.banner.textContent = t("geo_denied", this.lang);
  }

  private notePosition(lat: number, lon: number): void {
    this.lastPosition = { lat, lon };
    this.positionDirty = true;
    this.map?.updateUser(lat, lon);
  }

  /** Manual fallback: map click or the coordinate form; posts immediately. */
  async setManualPosition(lat: number, lon: number): Promise<void> {
    this.notePosition(lat, lon);
    await this.postPosition();
  }

  private startPolling(): void {
    this.stopPolling();
    this.pollTimer = setInterval(() => {
      if (this.tab !== "map") return;            // only the map page tracks
      if (this.quiz?.isOpen) return;             // no polling during a quiz
      if (this.positionInFlight) return;         // skip, never queue
      if (!this.positionDirty || !this.lastPosition) return;
      void this.postPosition();
    }, this.pollMs);
  }

  private stopPolling(): void {
    if (this.pollTimer !== null) clearInterval(this.pollTimer);
    this.pollTimer = null;
  }

  private nextT(): number {
    this.lastT = Math.max(this.lastT + 0.001, Date.now() / 1000);
    return this.lastT;
  }

  private async postPosition(): Promise<void> {
    const position = this.lastPosition;
    if (!position || !this.sessionId || this.positionInFlight) return;
    this.positionInFlight = true;
    try {
      const response = await this.client.postPosition(
        this.sessionId, position.lat, position.lon, this.nextT());
      this.positionDirty = false;
      this.handlePositionResponse(response);
    } catch (error) {
      if (!(error instanceof ApiError)) throw error;
    } finally {
      this.positionInFlight = false;
    }
  }

  private handlePositionResponse(response: PositionResponse): void {
    const quiz = this.quiz;
    if (!quiz || !this.sessionId) return;
    if (response.active_quiz) {
      if (quiz.isOpen) quiz.sync(response.active_quiz, this.sessionId);
      else quiz.open(response.active_quiz, this.sessionId);
    } else if (quiz.isOpen) {
      quiz.sync(null, this.sessionId);
    }
  }

  private async resyncQuiz(): Promise<void> {
    await this.postPosition();
  }

  private async afterQuizClosed(): Promise<void> {
    // pick up the next queued quiz for multi-POI entries
    await this.postPosition();
  }

  // -- pages ------------------------------------------------------------------

  async show(tab: "map" | "topics" | "results" | "leaderboard"): Promise<void> {
    this.tab = tab;
    if (tab === "map") {
      this.renderGame();
      return;
    }
    const page = document.createElement("div");
    page.className = `page page-${tab}`;
    if (tab === "topics") {
      this.renderTopics(page);
    } else if (tab === "results") {
      renderResults(page, await this.client.results(), this.lang);
    } else {
      renderLeaderboard(page, await this.client.leaderboard(), this.lang);
    }
    this.pageView.replaceChildren(page);
  }

  private renderTopics(page: HTMLElement): void {
    const pack = this.pack;
    const map = this.map;
    if (!pack) return;
    const heading = document.createElement("h2");
    heading.textContent = t("topics_tab", this.lang);
    page.appendChild(heading);
    for (const topic of pack.topics) {
      const section = document.createElement("section");
      section.className = "topic-section";
      const chip = document.createElement("span");
      chip.className = "topic-chip";
      if (map) chip.style.background = map.colorFor(topic);
      const name = document.createElement("h3");
      name.append(chip, document.createTextNode(` ${topicLabel(topic, this.lang)}`));
      const list = document.createElement("ul");
      for (const poi of pack.pois.filter((p) => p.topic === topic)) {
        const item = document.createElement("li");
        item.textContent = poi.name;
        list.appendChild(item);
      }
      section.append(name, list);
      page.appendChild(section);
    }
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) {
    return error.field ? `${error.field}: ${error.message}` : error.message;
  }
  return String(error);
}
