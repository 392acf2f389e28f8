"""Text cleaning and tokenization.

Null cells are treated as empty strings throughout. strip_punct deletes ASCII
punctuation characters; remove_stopwords works on whitespace token boundaries
and compares the lowercased token against the embedded list.
"""

from __future__ import annotations

import string

from ..dtypes import Null, is_null
from ..errors import TypeMismatchError
from ..frame import Column
from ..stopwords import STOPWORDS

_PUNCT_TABLE = str.maketrans("", "", string.punctuation)

TEXT_UDFS = ("lowercase", "remove_stopwords", "strip_punct")


def _require_text(col: Column, op: str) -> None:
    if col.dtype.tag != "Text":
        raise TypeMismatchError(f"{op} expects a Text column, found {col.dtype}")


def _as_text(value) -> str:
    return "" if is_null(value) else value


def lowercase(text: str) -> str:
    return text.lower()


def strip_punct(text: str) -> str:
    return text.translate(_PUNCT_TABLE)


def remove_stopwords(text: str) -> str:
    return " ".join(t for t in text.split() if t.lower() not in STOPWORDS)


_TEXT_FNS = {
    "lowercase": lowercase,
    "remove_stopwords": remove_stopwords,
    "strip_punct": strip_punct,
}


def project_text(col: Column, udf: str) -> tuple:
    """Apply one cleaning function row-wise; returns the new value tuple."""
    _require_text(col, udf)
    fn = _TEXT_FNS[udf]
    return tuple(Null if is_null(v) else fn(v) for v in col.values)


def tokenize_text(text: str) -> list[str]:
    """Punctuation-stripped whitespace split; the one tokenizer every op shares."""
    return strip_punct(text).split()


def tokenize(col: Column) -> tuple:
    """Text column -> one token list per row."""
    _require_text(col, "tokenize")
    return tuple(tuple(tokenize_text(_as_text(v))) for v in col.values)


def unique_tokens(col: Column) -> tuple:
    """Sorted, deduplicated union of all rows' tokens.

    Accepts a token-list column, or a Text column which is tokenized on the
    fly (token inventories typically annotate the text they came from).
    """
    if col.dtype.tag == "Text":
        seen: set[str] = set()
        for v in col.values:
            seen.update(tokenize_text(_as_text(v)))
        return tuple(sorted(seen))
    if col.dtype.tag != "List" or col.dtype.inner.tag != "String":
        raise TypeMismatchError(
            f"unique_tokens expects a Text or List(String) column, found {col.dtype}"
        )
    seen = set()
    for row in col.values:
        if not is_null(row):
            seen.update(row)
    return tuple(sorted(seen))
