# app/domain/services/preprocessing.py
from collections import Counter
from typing import FrozenSet, Iterable, List

from app.domain.entities.pipeline import StopwordSet, TokenPipelineConfig, TokenSequence
from app.domain.services.emot import substitute_emots
from app.domain.services.stemmer import stem
from app.domain.services.text_cleaner import clean, tokenize


def remove_stopwords(tokens: TokenSequence, stopwords: StopwordSet) -> TokenSequence:
    return [token for token in tokens if token not in stopwords]


def build_frequency_filter(corpus_tokens: Iterable[TokenSequence], min_count: int = 5) -> FrozenSet[str]:
    """Token types seen fewer than min_count times; fit on the training split only."""
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    counts = Counter(token for tokens in corpus_tokens for token in tokens)
    return frozenset(token for token, count in counts.items() if count < min_count)


def run_pipeline(text: str, config: TokenPipelineConfig) -> TokenSequence:
    """clean -> tokenize -> stem -> stopwords -> emot -> rare-token pruning."""
    emoticons = config.emots.emoticons
    tokens = tokenize(clean(text, emoticons), keep=frozenset(emoticons))
    tokens = [stem(token, config.stem_rules) for token in tokens]
    tokens = remove_stopwords(tokens, config.stopwords)
    tokens = substitute_emots(tokens, config.emots, keep_unknown=config.keep_unknown_emoji)
    if config.prune_set:
        tokens = [token for token in tokens if token not in config.prune_set]
    return tokens


def run_pipeline_batch(texts: Iterable[str], config: TokenPipelineConfig) -> List[TokenSequence]:
    return [run_pipeline(text, config) for text in texts]


def fit_prune_set(train_texts: Iterable[str], config: TokenPipelineConfig) -> TokenPipelineConfig:
    """Count post-stemming token frequencies on training texts and attach the prune set."""
    unpruned = config.with_prune_set(frozenset())
    tokens = run_pipeline_batch(train_texts, unpruned)
    return unpruned.with_prune_set(build_frequency_filter(tokens, config.min_token_count))
