"""Recursive character splitting into overlapping windows.

Windows are computed as offsets into the original text, so chunks are exact
substrings: separators stay attached to the piece they end, and dropping the
overlap between consecutive chunks gives back the input unchanged.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

# tried in order; past the last one the text is cut at a fixed stride
SEPARATORS = ("\n\n", "\n", " ")

DEFAULT_CHUNK_SIZE = 1000
DEFAULT_CHUNK_OVERLAP = 100


@dataclass(frozen=True)
class CodeChunk:
    id: int
    source_path: str
    start_offset: int
    text: str

    @property
    def end_offset(self) -> int:
        return self.start_offset + len(self.text)


def _check(chunk_size: int, chunk_overlap: int) -> None:
    if not chunk_size > chunk_overlap >= 0:
        raise ValueError(
            f"need chunk_size > chunk_overlap >= 0, got {chunk_size} and {chunk_overlap}"
        )


def split_windows(text: str, chunk_size: int, chunk_overlap: int) -> list[tuple[int, int]]:
    """Return ``(start, end)`` windows covering *text*."""
    _check(chunk_size, chunk_overlap)
    if not text:
        return []
    return _split(text, 0, len(text), 0, chunk_size, chunk_overlap)


def _split(text: str, start: int, end: int, level: int, size: int, overlap: int):
    if end - start <= size:
        return [(start, end)]
    if level == len(SEPARATORS):
        return _stride(start, end, size, overlap)
    pieces = _pieces(text, start, end, SEPARATORS[level])
    if len(pieces) == 1:
        return _split(text, start, end, level + 1, size, overlap)

    windows: list[tuple[int, int]] = []
    current: deque[tuple[int, int]] = deque()
    total = 0
    for ps, pe in pieces:
        length = pe - ps
        if length > size:
            if current:
                windows.append((current[0][0], current[-1][1]))
                current.clear()
                total = 0
            windows.extend(_split(text, ps, pe, level + 1, size, overlap))
            continue
        if current and total + length > size:
            windows.append((current[0][0], current[-1][1]))
            # carry a suffix of whole pieces into the next window as overlap
            while current and (total > overlap or total + length > size):
                s, e = current.popleft()
                total -= e - s
        current.append((ps, pe))
        total += length
    if current:
        windows.append((current[0][0], current[-1][1]))
    return windows


def _pieces(text: str, start: int, end: int, sep: str) -> list[tuple[int, int]]:
    pieces = []
    pos = start
    while True:
        hit = text.find(sep, pos, end)
        if hit < 0:
            break
        cut = hit + len(sep)
        pieces.append((pos, cut))
        pos = cut
    if pos < end:
        pieces.append((pos, end))
    return pieces


def _stride(start: int, end: int, size: int, overlap: int) -> list[tuple[int, int]]:
    step = size - overlap
    windows = []
    while True:
        stop = min(start + size, end)
        windows.append((start, stop))
        if stop == end:
            return windows
        start += step


def chunk_file(
    text: str,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    chunk_overlap: int = DEFAULT_CHUNK_OVERLAP,
    *,
    source_path: str = "",
    first_id: int = 0,
) -> list[CodeChunk]:
    return [
        CodeChunk(first_id + n, source_path, s, text[s:e])
        for n, (s, e) in enumerate(split_windows(text, chunk_size, chunk_overlap))
    ]


def reconstruct(chunks: list[CodeChunk]) -> str:
    """Concatenate consecutive chunks of one file, dropping their overlaps."""
    parts = []
    end = 0
    for chunk in chunks:
        parts.append(chunk.text[max(0, end - chunk.start_offset) :] if parts else chunk.text)
        end = chunk.end_offset
    return "".join(parts)
