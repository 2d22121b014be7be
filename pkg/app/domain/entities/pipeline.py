# app/domain/entities/pipeline.py
import hashlib
import json
import unicodedata
from typing import Dict, FrozenSet, List, Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

TokenSequence = List[str]

VARIATION_SELECTOR = "\ufe0f"
UNKNOWN_EMOJI_TOKEN = "ইমোজি"


def emot_key(key: str) -> str:
    """Lookup form of an emot key: emoji presentation selectors are ignored."""
    return key.replace(VARIATION_SELECTOR, "")


class StemRule(BaseModel):
    model_config = ConfigDict(frozen=True)

    category: Literal["verbal", "nominal"]
    suffix: str = Field(min_length=1)
    replacement: str = ""
    min_stem_length: int = Field(default=1, ge=1)


class StemRuleTable(BaseModel):
    """Suffix rules (longest suffix first within a category) plus irregular forms."""

    model_config = ConfigDict(frozen=True)

    rules: Tuple[StemRule, ...] = ()
    exceptions: Dict[str, str] = Field(default_factory=dict)
    _ordered: List[StemRule] = PrivateAttr(default_factory=list)

    @field_validator("exceptions")
    @classmethod
    def _nfc_surface_forms(cls, exceptions: Dict[str, str]) -> Dict[str, str]:
        return {unicodedata.normalize("NFC", surface): root for surface, root in exceptions.items()}

    @model_validator(mode="after")
    def _longest_suffix_first(self) -> "StemRuleTable":
        for category in ("verbal", "nominal"):
            lengths = [len(rule.suffix) for rule in self.rules if rule.category == category]
            if lengths != sorted(lengths, reverse=True):
                raise ValueError(f"{category} rules are not ordered longest-suffix-first")
        return self

    def model_post_init(self, __context) -> None:
        rank = {"verbal": 0, "nominal": 1}
        self._ordered = sorted(self.rules, key=lambda rule: (-len(rule.suffix), rank[rule.category]))

    def ordered_rules(self) -> List[StemRule]:
        """All rules merged by suffix length; verbal before nominal on equal length."""
        return self._ordered

    def exception_root(self, token: str) -> str | None:
        return self.exceptions.get(unicodedata.normalize("NFC", token))


class EmotDictionary(BaseModel):
    """Emoji / emoticon key -> Bangla emotion word."""

    model_config = ConfigDict(frozen=True)

    entries: Dict[str, str] = Field(default_factory=dict)
    glosses: Dict[str, str] = Field(default_factory=dict)

    @field_validator("entries")
    @classmethod
    def _entries_valid(cls, entries: Dict[str, str]) -> Dict[str, str]:
        normalized = {}
        for key, word in entries.items():
            if not key or not word.strip():
                raise ValueError(f"empty emot key or word: {key!r} -> {word!r}")
            lookup = emot_key(key)
            if lookup in normalized:
                raise ValueError(f"duplicate emot key {key!r}")
            normalized[lookup] = word
        return normalized

    def lookup(self, key: str) -> str | None:
        return self.entries.get(emot_key(key))

    @property
    def emoticons(self) -> List[str]:
        """Keys made of ASCII punctuation/letters, longest first."""
        keys = [key for key in self.entries if key.isascii()]
        return sorted(keys, key=len, reverse=True)

    @property
    def emoji_keys(self) -> List[str]:
        return [key for key in self.entries if not key.isascii()]


class StopwordSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    words: FrozenSet[str] = frozenset()

    @field_validator("words")
    @classmethod
    def _words_valid(cls, words: FrozenSet[str]) -> FrozenSet[str]:
        for word in words:
            if not word or any(char.isspace() for char in word):
                raise ValueError(f"invalid stopword {word!r}")
        return frozenset(unicodedata.normalize("NFC", word) for word in words)

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)


class TokenPipelineConfig(BaseModel):
    """Everything the preprocessing pipeline needs; immutable once loaded."""

    model_config = ConfigDict(frozen=True)

    stopwords: StopwordSet = Field(default_factory=StopwordSet)
    stem_rules: StemRuleTable = Field(default_factory=StemRuleTable)
    emots: EmotDictionary = Field(default_factory=EmotDictionary)
    min_token_count: int = Field(default=5, ge=1)
    keep_unknown_emoji: bool = False
    prune_set: FrozenSet[str] = frozenset()

    def with_prune_set(self, prune_set) -> "TokenPipelineConfig":
        return self.model_copy(update={"prune_set": frozenset(prune_set)})

    def to_snapshot(self) -> dict:
        """Canonical JSON-ready form; sorted so the hash is stable."""
        return {
            "format_version": 1,
            "stopwords": sorted(self.stopwords.words),
            "stem_rules": [rule.model_dump() for rule in self.stem_rules.rules],
            "stem_exceptions": dict(sorted(self.stem_rules.exceptions.items())),
            "emots": dict(sorted(self.emots.entries.items())),
            "emot_glosses": dict(sorted(self.emots.glosses.items())),
            "min_token_count": self.min_token_count,
            "keep_unknown_emoji": self.keep_unknown_emoji,
            "prune_set": sorted(self.prune_set),
        }

    @classmethod
    def from_snapshot(cls, snapshot: dict) -> "TokenPipelineConfig":
        return cls(
            stopwords=StopwordSet(words=frozenset(snapshot["stopwords"])),
            stem_rules=StemRuleTable(
                rules=tuple(StemRule(**rule) for rule in snapshot["stem_rules"]),
                exceptions=snapshot["stem_exceptions"],
            ),
            emots=EmotDictionary(entries=snapshot["emots"], glosses=snapshot.get("emot_glosses", {})),
            min_token_count=snapshot["min_token_count"],
            keep_unknown_emoji=snapshot["keep_unknown_emoji"],
            prune_set=frozenset(snapshot["prune_set"]),
        )

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_snapshot(), sort_keys=True, ensure_ascii=False, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
