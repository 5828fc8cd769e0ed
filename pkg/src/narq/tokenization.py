"""Shared tokenizer for keyword queries and document texts."""
from __future__ import annotations

import string
from dataclasses import dataclass, field

# The classic NLTK English stopword list, embedded so no corpus download is needed.
ENGLISH_STOPWORDS = frozenset(
    """
    i me my myself we our ours ourselves you you're you've you'll you'd your yours
    yourself yourselves he him his himself she she's her hers herself it it's its
    itself they them their theirs themselves what which who whom this that that'll
    these those am is are was were be been being have has had having do does did
    doing a an the and but if or because as until while of at by for with about
    against between into through during before after above below to from up down
    in out on off over under again further then once here there when where why how
    all any both each few more most other some such no nor not only own same so
    than too very s t can will just don don't should should've now d ll m o re ve
    y ain aren aren't couldn couldn't didn didn't doesn doesn't hadn hadn't hasn
    hasn't haven haven't isn isn't ma mightn mightn't mustn mustn't needn needn't
    shan shan't shouldn shouldn't wasn wasn't weren weren't won won't wouldn
    wouldn't
    """.split()
)

BRACKETS = "()[]{}"
PUNCTUATION = string.punctuation

_BRACKET_DELETE = str.maketrans("", "", BRACKETS)
_PUNCT_TO_SPACE = str.maketrans({ch: " " for ch in PUNCTUATION})


@dataclass(frozen=True)
class TokenizerOptions:
    """Controls stopword removal and punctuation handling.

    Punctuation replacement is off by default; some vocabularies rely on special
    characters like '-' and '+' inside labels.
    """

    remove_stopwords: bool = True
    replace_punctuation: bool = False
    stopword_list: frozenset[str] = field(default=ENGLISH_STOPWORDS)

    def __post_init__(self):
        stopwords = frozenset(self.stopword_list)
        for word in stopwords:
            if word != word.lower():
                raise ValueError(f"stopword {word!r} must be lowercase")
        object.__setattr__(self, "stopword_list", stopwords)


DEFAULT_TOKENIZER = TokenizerOptions()


def tokenize(text: str, opts: TokenizerOptions = DEFAULT_TOKENIZER) -> list[str]:
    """Split text into lowercase tokens.

    Brackets are always deleted; with replace_punctuation every punctuation
    character becomes a space. The remainder is split on whitespace, lowercased,
    and stopwords are dropped when enabled.
    """
    text = text.translate(_BRACKET_DELETE)
    if opts.replace_punctuation:
        text = text.translate(_PUNCT_TO_SPACE)
    tokens = [t.lower() for t in text.split()]
    if opts.remove_stopwords:
        tokens = [t for t in tokens if t not in opts.stopword_list]
    return [t for t in tokens if t]
