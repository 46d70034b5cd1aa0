"""Document clusters: loading, tokenization, and the sentence ground set.

A cluster file is a single JSON document:

    {"topic_id": "...",
     "documents": [{"doc_id": "...", "sentences": ["...", ...]}, ...],
     "references": [["ref sentence", ...], ...]}

Sentences are taken as given, one per array entry; no sentence splitting
happens here. Sentence ids are assigned in document order then sentence
order, skipping sentences that tokenize to nothing, so ids always form a
contiguous 0..N-1 range.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, ValidationError

# Punctuation detached from token edges as single-character tokens.
_EDGE_PUNCT = set(".,!?;:\"'()")


def tokenize(text: str) -> list[str]:
    """Lowercase and split ``text`` into tokens.

    Whitespace separates tokens; punctuation characters hanging off either
    edge of a chunk become single-character tokens of their own, while
    interior hyphens and periods (e.g. "u.s.-led") are kept intact.
    """
    tokens: list[str] = []
    for chunk in text.lower().split():
        left: list[str] = []
        right: list[str] = []
        while chunk and chunk[0] in _EDGE_PUNCT:
            left.append(chunk[0])
            chunk = chunk[1:]
        while chunk and chunk[-1] in _EDGE_PUNCT:
            right.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(left)
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(right))
    return tokens


@dataclass(frozen=True)
class Sentence:
    """One element of a cluster's ground set."""

    id: int
    doc_id: str
    position: int  # 0-based index among the document's kept sentences
    tokens: tuple[str, ...]
    raw: str

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Document:
    doc_id: str
    sentences: tuple[Sentence, ...]


@dataclass(frozen=True)
class Cluster:
    """A topic's documents, flattened sentence ground set, and references.

    ``references`` holds one token list per human reference summary; it may
    be empty only when the cluster is used for inference.
    """

    topic_id: str
    documents: tuple[Document, ...]
    sentences: tuple[Sentence, ...]
    references: tuple[tuple[str, ...], ...] = field(default=())

    @property
    def n(self) -> int:
        return len(self.sentences)


def check_cluster(cluster: Cluster) -> None:
    """Validate ground-set invariants; raise ValidationError on breakage."""
    ids = [s.id for s in cluster.sentences]
    if ids != list(range(len(ids))):
        raise ValidationError(
            f"cluster {cluster.topic_id!r}: sentence ids are not 0..N-1: {ids}"
        )
    doc_ids = {d.doc_id for d in cluster.documents}
    for s in cluster.sentences:
        if not s.tokens:
            raise ValidationError(
                f"cluster {cluster.topic_id!r}: sentence {s.id} has no tokens"
            )
        if s.doc_id not in doc_ids:
            raise ValidationError(
                f"cluster {cluster.topic_id!r}: sentence {s.id} names unknown "
                f"document {s.doc_id!r}"
            )


def _require(obj: dict, key: str, kind: type, where: str):
    if key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    value = obj[key]
    if not isinstance(value, kind):
        raise ParseError(f"{where}: field {key!r} must be {kind.__name__}")
    return value


def load_cluster(path: str | Path) -> Cluster:
    """Load one cluster file; see the module docstring for the format."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(payload, dict):
        raise ParseError(f"{path}: top level must be a JSON object")

    topic_id = _require(payload, "topic_id", str, str(path))
    raw_docs = _require(payload, "documents", list, str(path))

    documents: list[Document] = []
    sentences: list[Sentence] = []
    seen_doc_ids: set[str] = set()
    next_id = 0
    for d_idx, raw_doc in enumerate(raw_docs):
        where = f"{path}: documents[{d_idx}]"
        if not isinstance(raw_doc, dict):
            raise ParseError(f"{where}: must be an object")
        doc_id = _require(raw_doc, "doc_id", str, where)
        if doc_id in seen_doc_ids:
            raise ValidationError(f"{where}: duplicate doc_id {doc_id!r}")
        seen_doc_ids.add(doc_id)
        raw_sents = _require(raw_doc, "sentences", list, where)
        kept: list[Sentence] = []
        for s_idx, raw_sent in enumerate(raw_sents):
            if not isinstance(raw_sent, str):
                raise ParseError(f"{where}: sentences[{s_idx}] must be a string")
            tokens = tuple(tokenize(raw_sent))
            if not tokens:
                continue
            kept.append(
                Sentence(
                    id=next_id,
                    doc_id=doc_id,
                    position=len(kept),
                    tokens=tokens,
                    raw=raw_sent,
                )
            )
            next_id += 1
        documents.append(Document(doc_id=doc_id, sentences=tuple(kept)))
        sentences.extend(kept)

    references: list[tuple[str, ...]] = []
    for r_idx, raw_ref in enumerate(payload.get("references", [])):
        where = f"{path}: references[{r_idx}]"
        if not isinstance(raw_ref, list):
            raise ParseError(f"{where}: must be a list of strings")
        ref_tokens: list[str] = []
        for raw_sent in raw_ref:
            if not isinstance(raw_sent, str):
                raise ParseError(f"{where}: entries must be strings")
            ref_tokens.extend(tokenize(raw_sent))
        references.append(tuple(ref_tokens))

    cluster = Cluster(
        topic_id=topic_id,
        documents=tuple(documents),
        sentences=tuple(sentences),
        references=tuple(references),
    )
    check_cluster(cluster)
    return cluster


def load_clusters(directory: str | Path) -> list[Cluster]:
    """Load every ``*.json`` cluster file under ``directory``, sorted by name."""
    directory = Path(directory)
    paths = sorted(directory.glob("*.json"))
    if not paths:
        raise ValidationError(f"no cluster files (*.json) found in {directory}")
    return [load_cluster(p) for p in paths]
