# app/domain/entities/labels.py
from enum import IntEnum
from typing import List

import numpy as np

from app.domain.exceptions import UnknownLabelException


class ClassLabel(IntEnum):
    """The seven comment categories, in their fixed canonical order."""

    HateSpeech = 0
    AggressiveComment = 1
    ReligiousHatred = 2
    EthnicalAttack = 3
    ReligiousComment = 4
    PoliticalComment = 5
    SuicidalComment = 6

    @property
    def display_name(self) -> str:
        return _DISPLAY_NAMES[self]

    @property
    def hateful(self) -> bool:
        return self in HATEFUL_CLASSES


_DISPLAY_NAMES = {
    ClassLabel.HateSpeech: "Hate Speech",
    ClassLabel.AggressiveComment: "Aggressive Comment",
    ClassLabel.ReligiousHatred: "Religious Hatred",
    ClassLabel.EthnicalAttack: "Ethnical Attack",
    ClassLabel.ReligiousComment: "Religious Comment",
    ClassLabel.PoliticalComment: "Political Comment",
    ClassLabel.SuicidalComment: "Suicidal Comment",
}

HATEFUL_CLASSES = frozenset({
    ClassLabel.HateSpeech,
    ClassLabel.AggressiveComment,
    ClassLabel.ReligiousHatred,
    ClassLabel.EthnicalAttack,
})

N_CLASSES = len(ClassLabel)

# Both the display name and the identifier are accepted spellings.
_BY_NAME = {label.display_name: label for label in ClassLabel}
_BY_NAME.update({label.name: label for label in ClassLabel})


def parse_label(name: str, line_no: int | None = None) -> ClassLabel:
    key = name.strip() if isinstance(name, str) else name
    label = _BY_NAME.get(key)
    if label is None:
        raise UnknownLabelException(str(name), line_no=line_no)
    return label


def encode_label(name: str) -> int:
    """Map a canonical class name to its fixed index."""
    return int(parse_label(name))


def decode_label(index: int) -> str:
    try:
        return ClassLabel(index).display_name
    except ValueError:
        raise UnknownLabelException(str(index))


def one_hot(index: int) -> np.ndarray:
    vector = np.zeros(N_CLASSES, dtype=np.float64)
    vector[ClassLabel(index)] = 1.0
    return vector


def class_names() -> List[str]:
    return [label.display_name for label in ClassLabel]
