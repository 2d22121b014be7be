# app/domain/services/emot.py
import regex

from app.domain.entities.pipeline import EmotDictionary, TokenSequence, UNKNOWN_EMOJI_TOKEN
from app.domain.services.text_cleaner import EMOJI_SEQUENCE

_SINGLE_EMOJI = regex.compile(EMOJI_SEQUENCE)


def substitute_emots(tokens: TokenSequence, emots: EmotDictionary, keep_unknown: bool = False) -> TokenSequence:
    """Replace emoji / emoticon tokens with Bangla emotion words.

    A token made of k emoji expands to k words. Emoji missing from the
    dictionary are dropped, or become a generic token when keep_unknown is set.
    """
    result = []
    for token in tokens:
        word = emots.lookup(token)
        if word is not None:
            result.append(word)
            continue
        sequences = _SINGLE_EMOJI.findall(token)
        if not sequences or "".join(sequences) != token:
            result.append(token)
            continue
        for sequence in sequences:
            word = emots.lookup(sequence)
            if word is not None:
                result.append(word)
            elif keep_unknown:
                result.append(UNKNOWN_EMOJI_TOKEN)
    return result
