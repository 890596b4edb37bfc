/** Quiz modal: one question at a time, then the score screen.
 *
 * The modal never sees correct answers; every verdict comes back from
 * the server. The view carries all question texts, so stepping between
 * questions needs no network. An out-of-order answer (409) triggers a
 * resync callback that re-fetches the server-side cursor.
 */

import { ApiClient, ApiError, QuizView, ResultView } from "./api.js";
import { t } from "./strings.js";

export class QuizModal {
  readonly element: HTMLElement;
  private view: QuizView | null = null;
  private cursor = 0;
  private sessionId = "";
  private saved = false;

  constructor(
    root: HTMLElement,
    private readonly client: ApiClient,
    private readonly lang: () => string,
    private readonly onResync: () => Promise<void>,
    private readonly onClosed: (saved: boolean) => void,
  ) {
    this.element = document.createElement("div");
    this.element.className = "quiz-modal";
    this.element.hidden = true;
    root.appendChild(this.element);
  }

  get isOpen(): boolean {
    return !this.element.hidden;
  }

  open(view: QuizView, sessionId: string): void {
    this.view = view;
    this.cursor = view.question_index;
    this.sessionId = sessionId;
    this.saved = false;
    this.element.hidden = false;
    this.renderQuestion("");
  }

  close(): void {
    const wasOpen = this.isOpen;
    this.element.hidden = true;
    this.element.replaceChildren();
    this.view = null;
    if (wasOpen) this.onClosed(this.saved);
  }

  /** Adopt the server's current quiz view (resync after 409, or a new
   * quiz beginning while the modal is already open). */
  sync(view: QuizView | null, sessionId: string): void {
    if (this.scoreShowing()) return; // keep the score screen until dismissed
    if (view === null) {
      if (this.isOpen) this.close();
      return;
    }
    this.sessionId = sessionId;
    if (this.element.hidden) {
      this.saved = false;
      this.element.hidden = false;
    }
    this.view = view;
    this.cursor = view.question_index;
    this.renderQuestion("");
  }

  private renderQuestion(feedback: string): void {
    const view = this.view;
    const question = view?.questions[this.cursor];
    if (!view || !question) return;
    this.element.replaceChildren();

    const title = document.createElement("h2");
    title.textContent = view.poi_name;
    const progress = document.createElement("p");
    progress.className = "quiz-progress";
    progress.textContent = t("question_of", this.lang(), {
      i: this.cursor + 1, n: view.question_count });
    const text = document.createElement("p");
    text.className = "quiz-text";
    text.textContent = question.text;
    this.element.append(title, progress, text);

    if (feedback) {
      const note = document.createElement("p");
      note.className = "quiz-feedback";
      note.textContent = feedback;
      this.element.appendChild(note);
    }

    const options = document.createElement("div");
    options.className = "quiz-options";
    question.options.forEach((label, index) => {
      const button = document.createElement("button");
      button.type = "button";
      button.className = "quiz-option";
      button.textContent = label;
      button.addEventListener("click", () => { void this.answer(index); });
      options.appendChild(button);
    });
    this.element.appendChild(options);
  }

  private async answer(choiceIndex: number): Promise<void> {
    const view = this.view;
    if (!view) return;
    try {
      const response = await this.client.answer(
        this.sessionId, view.questionnaire, this.cursor, choiceIndex);
      const feedback = response.correct
        ? t("correct", this.lang()) : t("incorrect", this.lang());
      if (response.done && response.result) {
        this.renderScore(response.result);
      } else {
        this.cursor += 1;
        this.renderQuestion(feedback);
      }
    } catch (error) {
      if (error instanceof ApiError && error.code === "sequence") {
        await this.onResync(); // server cursor wins, view arrives via sync()
        return;
      }
      throw error;
    }
  }

  private scoreShowing(): boolean {
    return this.element.querySelector(".score-screen") !== null;
  }

  private renderScore(result: ResultView): void {
    this.view = null;
    this.element.replaceChildren();
    const screen = document.createElement("div");
    screen.className = "score-screen";

    const heading = document.createElement("h2");
    heading.textContent = t("your_score", this.lang());
    const score = document.createElement("p");
    score.className = "score-value";
    score.textContent =
      `${result.score} ${t("points", this.lang())} (${result.correct_count}/${result.total_count})`;
    const message = document.createElement("p");
    message.className = "end-message";
    message.textContent = result.end_message;
    screen.append(heading, score, message);

    const status = document.createElement("p");
    status.className = "save-status";
    const actions = document.createElement("div");
    actions.className = "score-actions";

    const save = document.createElement("button");
    save.type = "button";
    save.className = "save-result";
    save.textContent = t("save_result", this.lang());
    save.addEventListener("click", () => { void this.save(result, status, actions); });

    const dismiss = document.createElement("button");
    dismiss.type = "button";
    dismiss.className = "dismiss-score";
    dismiss.textContent = t("dismiss", this.lang());
    dismiss.addEventListener("click", () => this.close());

    actions.append(save, dismiss);
    screen.append(actions, status);
    this.element.appendChild(screen);
  }

  private async save(
    result: ResultView, status: HTMLElement, actions: HTMLElement,
  ): Promise<void> {
    const outcome = await this.client.saveResult(result.questionnaire, false);
    if (outcome === "stored") {
      this.saved = true;
      status.textContent = t("saved", this.lang());
      actions.querySelector(".save-result")?.remove();
      return;
    }
    // a saved result exists: ask before replacing it
    actions.replaceChildren();
    const prompt = document.createElement("p");
    prompt.className = "overwrite-prompt";
    prompt.textContent = t("overwrite_prompt", this.lang());

    const yes = document.createElement("button");
    yes.type = "button";
    yes.className = "overwrite-yes";
    yes.textContent = t("overwrite_yes", this.lang());
    yes.addEventListener("click", () => {
      void this.client.saveResult(result.questionnaire, true).then(() => {
        this.saved = true;
        prompt.remove();
        actions.replaceChildren();
        status.textContent = t("saved", this.lang());
      });
    });

    const no = document.createElement("button");
    no.type = "button";
    no.className = "overwrite-no";
    no.textContent = t("overwrite_no", this.lang());
    no.addEventListener("click", () => {
      prompt.remove();
      actions.replaceChildren();
      status.textContent = t("not_saved", this.lang());
    });

    actions.append(prompt, yes, no);
  }
}
