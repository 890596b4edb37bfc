/** UI string table honoring the pack's language list (en/it shipped). */

const TABLE: Record<string, Record<string, string>> = {
  en: {
    app_title: "City Quest",
    email: "Email",
    username: "Username",
    password: "Password",
    identifier: "Email or username",
    login: "Log in",
    register: "Create account",
    difficulty: "Level",
    easy: "Easy",
    hard: "Hard",
    vehicle: "Vehicle",
    language: "Language",
    start: "Start riding",
    map_tab: "Map",
    topics_tab: "Topics",
    results_tab: "Your results",
    leaderboard_tab: "Leaderboard",
    logout: "Log out",
    geo_denied: "Location unavailable: click the map or type coordinates to set your position.",
    manual_position: "Set position",
    question_of: "Question {i} of {n}",
    correct: "Correct!",
    incorrect: "Not quite.",
    your_score: "Your score",
    save_result: "Save result",
    dismiss: "Dismiss",
    overwrite_prompt: "A saved result for this questionnaire already exists. Replace it?",
    overwrite_yes: "Replace",
    overwrite_no: "Keep old result",
    saved: "Result saved.",
    not_saved: "Nothing was saved.",
    no_score_yet: "—",
    points: "points",
    distance_to: "straight line",
    topic_history: "History",
    topic_arts_show_trivia: "Arts, shows & trivia",
    topic_elv: "Light electric vehicles",
    vehicle_elv: "Electric light vehicle",
    vehicle_bicycle: "Bicycle",
    vehicle_bus: "Public transport",
    vehicle_other: "Other",
  },
  it: {
    app_title: "City Quest",
    email: "Email",
    username: "Nome utente",
    password: "Password",
    identifier: "Email o nome utente",
    login: "Accedi",
    register: "Crea account",
    difficulty: "Livello",
    easy: "Facile",
    hard: "Difficile",
    vehicle: "Veicolo",
    language: "Lingua",
    start: "Inizia il giro",
    map_tab: "Mappa",
    topics_tab: "Argomenti",
    results_tab: "I tuoi risultati",
    leaderboard_tab: "Classifica",
    logout: "Esci",
    geo_denied: "Posizione non disponibile: clicca sulla mappa o inserisci le coordinate.",
    manual_position: "Imposta posizione",
    question_of: "Domanda {i} di {n}",
    correct: "Esatto!",
    incorrect: "Non proprio.",
    your_score: "Il tuo punteggio",
    save_result: "Salva risultato",
    dismiss: "Chiudi",
    overwrite_prompt: "Esiste già un risultato salvato per questo questionario. Sostituirlo?",
    overwrite_yes: "Sostituisci",
    overwrite_no: "Tieni il vecchio",
    saved: "Risultato salvato.",
    not_saved: "Non è stato salvato nulla.",
    no_score_yet: "—",
    points: "punti",
    distance_to: "linea d'aria",
    topic_history: "Storia",
    topic_arts_show_trivia: "Arte, spettacolo e curiosità",
    topic_elv: "Veicoli elettrici leggeri",
    vehicle_elv: "Veicolo elettrico leggero",
    vehicle_bicycle: "Bicicletta",
    vehicle_bus: "Trasporto pubblico",
    vehicle_other: "Altro",
  },
};

export function t(key: string, lang: string, vars?: Record<string, string | number>): string {
  const table = TABLE[lang] ?? TABLE["en"]!;
  let text = table[key] ?? TABLE["en"]![key] ?? key;
  for (const [name, value] of Object.entries(vars ?? {})) {
    text = text.replace(`{${name}}`, String(value));
  }
  return text;
}

export function topicLabel(topicId: string, lang: string): string {
  const key = `topic_${topicId}`;
  const label = t(key, lang);
  return label === key ? topicId : label;
}
