import { SurveyApi } from "./api.js";
import { SurveyMachine } from "./state.js";
import { bindView, preloadImages } from "./view.js";

const machine = new SurveyMachine({
  api: new SurveyApi(""),
  preload: preloadImages,
});

bindView(document, machine);
