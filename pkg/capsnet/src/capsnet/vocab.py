"""Token table: ids 0/1/2 are PAD/UNK/BOS, then words by frequency.

The table is capped at ``vocab_size`` entries including the specials;
out-of-vocabulary tokens map to UNK at encode time.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Sequence

PAD_ID = 0
UNK_ID = 1
BOS_ID = 2
_SPECIALS = ("<pad>", "<unk>", "<bos>")


class Vocabulary:
    def __init__(self, words: Sequence[str]):
        self.words = list(_SPECIALS) + [w for w in words if w not in _SPECIALS]
        self._index = {w: i for i, w in enumerate(self.words)}

    def __len__(self) -> int:
        return len(self.words)

    @classmethod
    def build(cls, token_lists: Iterable[Sequence[str]], vocab_size: int) -> "Vocabulary":
        counts: Counter[str] = Counter()
        for tokens in token_lists:
            counts.update(tokens)
        budget = max(vocab_size - len(_SPECIALS), 0)
        # Frequency order, alphabetical among ties, for determinism.
        ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return cls([w for w, _ in ranked[:budget]])

    def encode(self, tokens: Sequence[str], max_len: int) -> list[int]:
        """Token ids, right-padded with PAD, truncated to ``max_len``."""
        ids = [self._index.get(t, UNK_ID) for t in tokens[:max_len]]
        return ids + [PAD_ID] * (max_len - len(ids))
