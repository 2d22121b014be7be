# app/domain/services/stemmer.py
from app.domain.entities.pipeline import StemRuleTable
from app.domain.services.text_cleaner import grapheme_length


def stem(token: str, rules: StemRuleTable) -> str:
    """
    Reduce an inflected Bangla word to its root.

    Irregular forms are looked up first. Otherwise the first suffix rule that
    matches (longest suffix first) is applied once, skipping any rule whose
    result would fall below its min_stem_length in grapheme clusters.
    """
    root = rules.exception_root(token)
    if root is not None:
        return root
    for rule in rules.ordered_rules():
        if not token.endswith(rule.suffix):
            continue
        base = token[: -len(rule.suffix)]
        if not base:
            continue
        candidate = base + rule.replacement
        if grapheme_length(candidate) >= rule.min_stem_length:
            return candidate
    return token
