/**
 * DOM layer: renders the machine's state into the static page shell and
 * forwards clicks back into it. The visual cues follow the survey design:
 * Next stays greyed out until a preference is entered, the chosen image is
 * highlighted with a prompt-related overlay, and a red Exit button is
 * always available.
 */

import { SurveyMachine } from "./state.js";

const OVERLAY_TEXT: Record<string, string> = {
  aesthetic: "You like this one the most",
  complexity: "You find this one more complex",
};

export function bindView(root: Document, machine: SurveyMachine): void {
  const el = (id: string) => {
    const node = root.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node;
  };

  const screens = {
    demographics: el("screen-demographics"),
    survey: el("screen-survey"),
    continue: el("screen-continue"),
    done: el("screen-done"),
  };
  const leftImage = el("left-image") as HTMLImageElement;
  const rightImage = el("right-image") as HTMLImageElement;
  const leftCard = el("left-card");
  const rightCard = el("right-card");
  const leftOverlay = el("left-overlay");
  const rightOverlay = el("right-overlay");
  const promptText = el("prompt-text");
  const nextButton = el("next") as HTMLButtonElement;
  const tieButton = el("tie") as HTMLButtonElement;
  const statusLine = el("status-line");

  const show = (screen: keyof typeof screens) => {
    for (const [name, node] of Object.entries(screens)) {
      node.hidden = name !== screen;
    }
  };

  function render(): void {
    switch (machine.phase) {
      case "demographics":
        show("demographics");
        break;
      case "continue_prompt":
        show("continue");
        break;
      case "done":
        show("done");
        break;
      default:
        show("survey");
    }
    const payload = machine.current;
    if (payload && machine.phase !== "demographics") {
      leftImage.src = payload.left_url;
      rightImage.src = payload.right_url;
      promptText.textContent = payload.prompt_text;
      leftCard.classList.toggle("selected", machine.selection === "left");
      rightCard.classList.toggle("selected", machine.selection === "right");
      tieButton.classList.toggle("selected", machine.selection === "tie");
      const overlay = OVERLAY_TEXT[payload.prompt] ?? "";
      leftOverlay.textContent = overlay;
      rightOverlay.textContent = overlay;
      leftOverlay.hidden = machine.selection !== "left";
      rightOverlay.hidden = machine.selection !== "right";
    }
    nextButton.disabled = !machine.nextEnabled && machine.phase !== "submit_error";
    statusLine.textContent =
      machine.phase === "image_error"
        ? "An image failed to load."
        : machine.phase === "submit_error"
          ? "Could not submit your answer; press Next to retry."
          : machine.phase === "loading"
            ? "Loading the next pair..."
            : "";
    el("retry-images").hidden = machine.phase !== "image_error";
  }

  machine.subscribe(render);

  el("demographics-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const pick = (id: string) => (el(id) as HTMLSelectElement).value;
    void machine
      .start({ age_range: pick("age"), gender: pick("gender"), expertise: pick("expertise") })
      .catch((err) => {
        statusLine.textContent = `Could not start the survey: ${err}`;
      });
  });
  leftCard.addEventListener("click", () => machine.select("left"));
  rightCard.addEventListener("click", () => machine.select("right"));
  tieButton.addEventListener("click", () => machine.select("tie"));
  nextButton.addEventListener("click", () => {
    void (machine.phase === "submit_error" ? machine.retrySubmit() : machine.submitAndAdvance());
  });
  el("retry-images").addEventListener("click", () => void machine.retryImages());
  el("continue").addEventListener("click", () => void machine.continueSurvey());
  for (const id of ["exit", "exit-final"]) {
    el(id).addEventListener("click", () => machine.exit());
  }

  render();
}

/** Browser image preloader: resolves when both images are decodable. */
export function preloadImages(urls: string[]): Promise<void> {
  return Promise.all(
    urls.map(
      (url) =>
        new Promise<void>((resolve, reject) => {
          const img = new Image();
          img.onload = () => resolve();
          img.onerror = () => reject(new Error(`failed to load ${url}`));
          img.src = url;
        }),
    ),
  ).then(() => undefined);
}
