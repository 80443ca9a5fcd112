// Customization form state and its serialization to the API payload.

import { CustomizationPayload } from "./api.js";

export const LANGUAGES = [
  { tag: "en", label: "English" },
  { tag: "ja", label: "Japanese" },
];
export const STYLES = ["academic", "simplified"];
export const DIFFICULTIES = ["introductory", "intermediate", "advanced"];

export interface FormState {
  language: string;
  style: string;
  difficulty: string;
  objectivesText: string; // one objective per line
  modelId: string;
  includeExercises: boolean;
}

export const DEFAULT_FORM: FormState = {
  language: "en",
  style: "academic",
  difficulty: "introductory",
  objectivesText: "",
  modelId: "",
  includeExercises: true,
};

export function canSubmit(state: FormState, filesAttached: number): boolean {
  return (
    filesAttached > 0 &&
    state.language.trim() !== "" &&
    STYLES.includes(state.style) &&
    DIFFICULTIES.includes(state.difficulty) &&
    state.modelId.trim() !== ""
  );
}

export function toPayload(state: FormState): CustomizationPayload {
  return {
    output_language: state.language,
    style: state.style,
    difficulty: state.difficulty,
    objectives: state.objectivesText
      .split("\n")
      .map((line) => line.trim())
      .filter((line) => line !== ""),
    model_id: state.modelId,
    include_exercises: state.includeExercises,
  };
}
