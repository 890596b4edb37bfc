/** "Your results" and leaderboard pages: plain server-ordered lists. */

import { LeaderboardRow, ResultRow } from "./api.js";
import { t } from "./strings.js";

export function renderResults(container: HTMLElement, rows: ResultRow[], lang: string): void {
  container.replaceChildren();
  const heading = document.createElement("h2");
  heading.textContent = t("results_tab", lang);
  const table = document.createElement("table");
  table.className = "results-table";
  for (const row of rows) {
    const tr = document.createElement("tr");
    tr.className = "result-row";
    tr.dataset.questionnaire = row.questionnaire;
    const name = document.createElement("td");
    name.textContent = row.questionnaire;
    const score = document.createElement("td");
    score.className = "result-score";
    score.textContent = row.score === null ? t("no_score_yet", lang) : String(row.score);
    tr.append(name, score);
    table.appendChild(tr);
  }
  container.append(heading, table);
}

export function renderLeaderboard(
  container: HTMLElement, rows: LeaderboardRow[], lang: string,
): void {
  container.replaceChildren();
  const heading = document.createElement("h2");
  heading.textContent = t("leaderboard_tab", lang);
  const list = document.createElement("ol");
  list.className = "leaderboard";
  for (const row of rows) {
    const item = document.createElement("li");
    item.className = "leaderboard-row";
    item.textContent = `${row.username} — ${row.points} ${t("points", lang)}`;
    list.appendChild(item);
  }
  container.append(heading, list);
}
