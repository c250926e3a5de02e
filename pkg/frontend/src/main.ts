import { AssistantApi } from "./api.js";
import { BoardModel } from "./model.js";
import { render } from "./render.js";

const root = document.getElementById("app") as HTMLElement;
const api = new AssistantApi("");
const model = new BoardModel(api);

function repaint(): void {
  render(model, root);
}

document.addEventListener("keydown", (event) => {
  if (event.key === "Enter") {
    void model.submit().then(repaint);
  } else if (event.key === "Backspace") {
    model.backspace();
    repaint();
  } else if (/^[a-zA-Z]$/.test(event.key)) {
    model.typeLetter(event.key);
    repaint();
  }
});

function wireButton(id: string, handler: () => Promise<void> | void): void {
  const el = document.getElementById(id);
  if (el) {
    el.addEventListener("click", () => {
      void Promise.resolve(handler()).then(repaint);
    });
  }
}

wireButton("new-game", () => model.newGame());
wireButton("undo", () => model.undo());
wireButton("toggle-mode", () => {
  const next = model.config.mode === "easy" ? "hard" : "easy";
  if (model.rows.length === 0 || confirm(`switch to ${next} mode? this starts a new game`)) {
    return model.toggleMode();
  }
});
wireButton("toggle-length", () => {
  const next = model.config.length === 5 ? 6 : 5;
  if (model.rows.length === 0 || confirm(`switch to ${next}-letter words? this starts a new game`)) {
    return model.toggleLength();
  }
});

void model.newGame().then(repaint);
