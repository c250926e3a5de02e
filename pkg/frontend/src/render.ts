/** DOM rendering: everything displayed is re-derived from the model after
 * each server response; there is no optimistic state. */

import { BoardModel, TileColor } from "./model.js";

const COLOR_CLASS: Record<string, string> = {
  B: "tile-gray",
  Y: "tile-yellow",
  G: "tile-green",
};

function tile(letter: string, color: TileColor | string | null): HTMLElement {
  const el = document.createElement("div");
  el.className = "tile " + (color ? COLOR_CLASS[color as string] : "tile-empty");
  el.textContent = letter.toUpperCase();
  return el;
}

export function render(model: BoardModel, root: HTMLElement): void {
  root.textContent = "";

  const board = document.createElement("div");
  board.className = "board";
  for (const row of model.rows) {
    const rowEl = document.createElement("div");
    rowEl.className = "row";
    for (let i = 0; i < row.letters.length; i++) {
      rowEl.appendChild(tile(row.letters[i], row.colors[i]));
    }
    board.appendChild(rowEl);
  }
  if (!model.solved) {
    const draftEl = document.createElement("div");
    draftEl.className = "row row-draft";
    for (let i = 0; i < model.config.length; i++) {
      const letter = model.draftLetters[i] ?? "";
      const el = tile(letter, model.draftColors[i] ?? null);
      el.addEventListener("click", () => {
        model.cycleTile(i);
        render(model, root);
      });
      draftEl.appendChild(el);
    }
    board.appendChild(draftEl);
  }
  root.appendChild(board);

  const status = document.createElement("p");
  status.className = "status";
  status.textContent = model.solved
    ? `solved in ${model.rows.length} guesses`
    : `${model.eligibleCount} possible words left`;
  root.appendChild(status);

  if (model.error) {
    const banner = document.createElement("div");
    banner.className = `banner banner-${model.error.kind}`;
    banner.textContent = model.error.message;
    if (model.error.kind === "conflict") {
      const undoButton = document.createElement("button");
      undoButton.textContent = "undo last row";
      undoButton.addEventListener("click", () => {
        void model.undo().then(() => render(model, root));
      });
      banner.appendChild(undoButton);
    }
    if (model.error.kind === "network") {
      const retry = document.createElement("button");
      retry.textContent = "retry";
      retry.addEventListener("click", () => {
        void model.submit().then(() => render(model, root));
      });
      banner.appendChild(retry);
    }
    root.appendChild(banner);
  }

  const panel = document.createElement("div");
  panel.className = "suggestions";
  if (!model.solved) {
    const heading = document.createElement("h2");
    heading.textContent = "suggestions";
    panel.appendChild(heading);
    const list = document.createElement("ol");
    for (const line of model.suggestionLines()) {
      const item = document.createElement("li");
      item.className = "suggestion-line";
      item.textContent = line;
      list.appendChild(item);
    }
    panel.appendChild(list);
    if (model.suggestions.length) {
      const toggle = document.createElement("button");
      toggle.textContent = model.detailsExpanded ? "hide detail" : "why these?";
      toggle.addEventListener("click", () => {
        model.toggleDetails();
        render(model, root);
      });
      panel.appendChild(toggle);
      if (model.detailsExpanded) {
        const detail = document.createElement("pre");
        detail.className = "detail";
        detail.textContent = model.suggestions
          .map(
            (s) =>
              `${s.word}: avg ${s.qhat?.toFixed(4) ?? "-"} more guesses, ` +
              `single-stage score ${s.score?.toFixed(4) ?? "-"}`,
          )
          .join("\n");
        panel.appendChild(detail);
      }
    }
  }
  root.appendChild(panel);
}
