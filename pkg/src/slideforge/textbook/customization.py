"""User-facing generation parameters."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import InvalidCustomization

STYLES = ("academic", "simplified")
DIFFICULTIES = ("introductory", "intermediate", "advanced")

_BCP47 = re.compile(r"^[A-Za-z]{2,8}(-[A-Za-z0-9]{1,8})*$")


@dataclass
class CustomizationSpec:
    output_language: str = "en"
    style: str = "academic"
    difficulty: str = "introductory"
    objectives: list[str] = field(default_factory=list)
    model_id: str = "stub-echo"
    include_exercises: bool = True

    def validate(self) -> None:
        if not self.output_language or not _BCP47.match(self.output_language):
            raise InvalidCustomization(f"output_language {self.output_language!r} is not a BCP-47 tag")
        if self.style not in STYLES:
            raise InvalidCustomization(f"style must be one of {STYLES}, got {self.style!r}")
        if self.difficulty not in DIFFICULTIES:
            raise InvalidCustomization(
                f"difficulty must be one of {DIFFICULTIES}, got {self.difficulty!r}")
        if not isinstance(self.objectives, list) or not all(
            isinstance(o, str) for o in self.objectives
        ):
            raise InvalidCustomization("objectives must be a list of strings")
        if not self.model_id or not isinstance(self.model_id, str):
            raise InvalidCustomization("model_id must be a non-empty string")
        if not isinstance(self.include_exercises, bool):
            raise InvalidCustomization("include_exercises must be a boolean")

    @classmethod
    def from_dict(cls, data: dict) -> "CustomizationSpec":
        if not isinstance(data, dict):
            raise InvalidCustomization("customization must be a JSON object")
        unknown = set(data) - {
            "output_language", "style", "difficulty", "objectives", "model_id",
            "include_exercises",
        }
        if unknown:
            raise InvalidCustomization(f"unknown customization fields: {sorted(unknown)}")
        spec = cls(**{**{}, **data})
        spec.validate()
        return spec

    def to_dict(self) -> dict:
        return {
            "output_language": self.output_language,
            "style": self.style,
            "difficulty": self.difficulty,
            "objectives": list(self.objectives),
            "model_id": self.model_id,
            "include_exercises": self.include_exercises,
        }
