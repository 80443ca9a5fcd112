import { describe, expect, it } from "vitest";

import { DEFAULT_FORM, canSubmit, toPayload } from "./form.js";

describe("customization form", () => {
  it("submit stays disabled without a file", () => {
    const state = { ...DEFAULT_FORM, modelId: "stub-echo" };
    expect(canSubmit(state, 0)).toBe(false);
    expect(canSubmit(state, 1)).toBe(true);
  });

  it("submit stays disabled without a model", () => {
    expect(canSubmit({ ...DEFAULT_FORM, modelId: "" }, 1)).toBe(false);
  });

  it("submit requires valid enum values", () => {
    const state = { ...DEFAULT_FORM, modelId: "m", style: "florid" };
    expect(canSubmit(state, 1)).toBe(false);
  });

  it("serializes objectives one per line, dropping blanks", () => {
    const payload = toPayload({
      ...DEFAULT_FORM,
      modelId: "stub-echo",
      language: "ja",
      objectivesText: "first goal\n\n  second goal  \n",
      includeExercises: false,
    });
    expect(payload).toEqual({
      output_language: "ja",
      style: "academic",
      difficulty: "introductory",
      objectives: ["first goal", "second goal"],
      model_id: "stub-echo",
      include_exercises: false,
    });
  });
});
