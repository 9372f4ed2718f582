"""Pure-Python implementations of the hot kernels.

These are the reference behaviour; ``_kernels.pyx`` must produce identical
output for every input.
"""

from __future__ import annotations

import re
from array import array

IDENT = 0
NUMBER = 1
LITERAL = 2
OP = 3

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\f\r\n\ufeff]+)
  | (?P<line>//[^\n]*)
  | (?P<block>/\*(?:[^*]|\*(?!/))*(?:\*/)?)
  | (?P<text>\"\"\"(?:[^"\\]|\\.|\\\Z|"(?!""))*(?:\"\"\")?)
  | (?P<str>"(?:[^"\\\n]|\\[^\n])*"?)
  | (?P<chr>'(?:[^'\\\n]|\\[^\n])*'?)
  | (?P<ident>(?:[^\W\d]|\$)[\w$]*)
  | (?P<num>(?:\d|\.\d)(?:[eEpP][+-]|[\w$.])*)
  | (?P<ellipsis>\.\.\.)
  | (?P<op>.)
    """,
    re.VERBOSE | re.DOTALL,
)

_KIND = {
    "ident": IDENT,
    "num": NUMBER,
    "text": LITERAL,
    "str": LITERAL,
    "chr": LITERAL,
    "ellipsis": OP,
    "op": OP,
}


def lex_java(source: str) -> list[tuple[int, str, int]]:
    """Tokenize Java source into ``(kind, text, offset)`` triples.

    Whitespace and comments are dropped. Unterminated comments and text
    blocks run to end of input; unterminated string and char literals stop
    at end of line so a stray quote cannot swallow the rest of the file.
    """
    tokens = []
    append = tokens.append
    for m in _TOKEN_RE.finditer(source):
        group = m.lastgroup
        if group in ("ws", "line", "block"):
            continue
        append((_KIND[group], m.group(), m.start()))
    return tokens


def accumulate_scores(
    postings: list[tuple[float, array, array]], n_chunks: int
) -> array:
    """Sum ``query_weight * doc_weight`` over postings into a dense score array.

    *postings* is a list of ``(query_weight, chunk_ids, doc_weights)``; the
    accumulation order (list order, then posting order) is part of the
    contract so both backends round identically.
    """
    scores = array("d", bytes(8 * n_chunks))
    for qw, ids, weights in postings:
        for j in range(len(ids)):
            scores[ids[j]] += qw * weights[j]
    return scores
