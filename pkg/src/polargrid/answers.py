"""Tagged answer union shared by generators, scoring, and the rater service."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

OPTION_LETTERS = "ABCDEF"


class AnswerType(str, Enum):
    OPTION_LABEL = "option_label"
    DIGIT = "digit"
    COORDINATE = "coordinate"
    STRING = "string"
    INT_LIST = "int_list"


@dataclass(frozen=True)
class Answer:
    """One answer in one of the five supported formats.

    value is a letter (option_label), int (digit), (major, minor) pair
    (coordinate), str (string), or descending int tuple (int_list).
    """

    type: AnswerType
    value: object

    def __post_init__(self):
        t, v = self.type, self.value
        if t is AnswerType.OPTION_LABEL:
            if not (isinstance(v, str) and len(v) == 1 and v in OPTION_LETTERS):
                raise ValueError(f"option label must be one of {OPTION_LETTERS}: {v!r}")
        elif t is AnswerType.DIGIT:
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValueError(f"digit answer must be an int: {v!r}")
        elif t is AnswerType.COORDINATE:
            if not (isinstance(v, tuple) and len(v) == 2 and all(isinstance(x, int) for x in v)):
                raise ValueError(f"coordinate answer must be an (int, int) pair: {v!r}")
        elif t is AnswerType.STRING:
            if not isinstance(v, str):
                raise ValueError(f"string answer must be str: {v!r}")
        elif t is AnswerType.INT_LIST:
            if not (isinstance(v, tuple) and all(isinstance(x, int) for x in v)):
                raise ValueError(f"int_list answer must be an int tuple: {v!r}")
            if any(a < b for a, b in zip(v, v[1:])):
                raise ValueError(f"int_list must be sorted descending: {v!r}")

    @staticmethod
    def option(letter: str) -> "Answer":
        return Answer(AnswerType.OPTION_LABEL, letter)

    @staticmethod
    def digit(n: int) -> "Answer":
        return Answer(AnswerType.DIGIT, int(n))

    @staticmethod
    def coordinate(major: int, minor: int) -> "Answer":
        return Answer(AnswerType.COORDINATE, (int(major), int(minor)))

    @staticmethod
    def text(s: str) -> "Answer":
        return Answer(AnswerType.STRING, s)

    @staticmethod
    def int_list(values) -> "Answer":
        return Answer(AnswerType.INT_LIST, tuple(int(x) for x in values))

    def to_json(self) -> dict:
        v = self.value
        if self.type is AnswerType.COORDINATE:
            v = list(v)
        elif self.type is AnswerType.INT_LIST:
            v = list(v)
        return {"type": self.type.value, "value": v}

    @staticmethod
    def from_json(obj: dict) -> "Answer":
        t = AnswerType(obj["type"])
        v = obj["value"]
        if t is AnswerType.COORDINATE:
            v = tuple(int(x) for x in v)
        elif t is AnswerType.INT_LIST:
            v = tuple(int(x) for x in v)
        elif t is AnswerType.DIGIT:
            v = int(v)
        return Answer(t, v)

    def display(self) -> str:
        """Human-readable form used in option lists and the rater UI."""
        if self.type is AnswerType.COORDINATE:
            return f"({self.value[0]}, {self.value[1]})"
        if self.type is AnswerType.INT_LIST:
            return "[" + ", ".join(str(x) for x in self.value) + "]"
        return str(self.value)
