"""Python bindings for the bqr balanced query recommendation engine."""

import json
from os import PathLike
from typing import Optional, Sequence, Union

from . import _core
from ._core import (
    Error,
    InapplicableMethod,
    InvalidArgument,
    OutOfVocabulary,
    ParseError,
    ProviderError,
    build_prompt,
    jsd,
    pareto_front,
    parse_query_list,
    prompt_hash,
    text_set_relevance,
    tokenize,
)

Path = Union[str, PathLike]

__all__ = [
    "Engine", "Error", "InapplicableMethod", "InvalidArgument", "OutOfVocabulary", "ParseError",
    "ProviderError", "build_prompt", "jsd", "pareto_front", "parse_query_list", "prompt_hash",
    "text_set_relevance", "tokenize",
]


class Engine:
    """A loaded corpus plus optional topics, word vectors and replay fixtures.

    Payloads are the same dictionaries the HTTP API returns.
    """

    def __init__(self, corpus: Path, *, schema: Optional[Path] = None, topics: Optional[Path] = None,
                 embeddings: Optional[Path] = None, fixtures: Optional[Path] = None,
                 config: Optional[dict] = None):
        self._s = _core.Session(corpus, schema, topics, embeddings, fixtures,
                                json.dumps(config) if config else "")

    def __len__(self):
        return len(self._s)

    def search(self, query: str, n: int = 20) -> dict:
        return json.loads(self._s.search_json(query, n))

    def recommend(self, query: str, *, method: Optional[str] = None, k: Optional[int] = None,
                  n: Optional[int] = None, max_iter: Optional[int] = None,
                  keywords: Optional[Sequence[str]] = None, topic_id: Optional[str] = None) -> dict:
        body = {"query": query}
        for key, value in (("method", method), ("k", k), ("n", n), ("max_iter", max_iter),
                           ("keywords", list(keywords) if keywords is not None else None),
                           ("topic_id", topic_id)):
            if value is not None:
                body[key] = value
        return json.loads(self._s.recommend_json(json.dumps(body)))

    def topics(self) -> list:
        return json.loads(self._s.topics_json())["topics"]

    def evaluate(self, methods: Sequence[str] = ("m1", "m2", "m3"),
                 topic_ids: Sequence[str] = ()) -> tuple:
        """Returns (matrix dict, matrix CSV text)."""
        payload, csv_text = self._s.evaluate_json(list(methods), list(topic_ids))
        return json.loads(payload), csv_text
