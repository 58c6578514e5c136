"""Small deterministic text helpers: tokens, grids, sentences.

A token is a whitespace-delimited word throughout the package; no external
tokenizer is involved.
"""

from __future__ import annotations

import re

GRID_SEPARATORS = ("|", "\t")

_PUNCT_RE = re.compile(r"[^\w\s]+", re.UNICODE)
_SENTENCE_END_RE = re.compile(r"[.!?]+(?=\s|$)")
_MARKDOWN_RULE_RE = re.compile(r"^:?-{2,}:?$")


def tokens(text: str) -> list[str]:
    return text.split()


def normalize(text: str) -> str:
    """Lowercase, strip punctuation, collapse whitespace."""
    return " ".join(_PUNCT_RE.sub(" ", text.lower()).split())


def token_set(text: str) -> set[str]:
    """Normalized tokens of *text* as a set."""
    return set(normalize(text).split())


def is_grid_line(line: str) -> bool:
    return any(sep in line for sep in GRID_SEPARATORS)


def split_grid_row(line: str) -> list[str]:
    """Cells of one grid line, trimmed; outer empty cells dropped.

    Handles both pipe-delimited and tab-delimited rows, including the
    markdown style with leading/trailing pipes.
    """
    sep = "|" if "|" in line else "\t"
    cells = [c.strip() for c in line.strip().split(sep)]
    while cells and not cells[0]:
        cells.pop(0)
    while cells and not cells[-1]:
        cells.pop()
    return cells


def is_markdown_rule_row(cells: list[str]) -> bool:
    """True for markdown table separator rows like ``|---|---|``."""
    return bool(cells) and all(_MARKDOWN_RULE_RE.match(c) for c in cells)


def find_grid_blocks(text: str) -> list[list[str]]:
    """Maximal runs of >= 2 consecutive grid-bearing lines."""
    blocks: list[list[str]] = []
    run: list[str] = []
    for line in text.splitlines():
        if is_grid_line(line):
            run.append(line)
        else:
            if len(run) >= 2:
                blocks.append(run)
            run = []
    if len(run) >= 2:
        blocks.append(run)
    return blocks


def grid_data_rows(block: list[str]) -> list[list[str]]:
    """Data rows of a grid block: everything after the header row.

    Markdown separator rows are skipped. Rows are returned as cell lists.
    """
    rows = []
    for line in block[1:]:
        cells = split_grid_row(line)
        if cells and not is_markdown_rule_row(cells):
            rows.append(cells)
    return rows


def grid_header(block: list[str]) -> list[str]:
    return split_grid_row(block[0]) if block else []


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """Character spans of sentences; boundary = [.!?]+ then whitespace/EOL.

    Spans are contiguous (inter-sentence whitespace belongs to the following
    span) and whitespace-only spans are dropped, so slicing the text with the
    returned spans reproduces every sentence verbatim.
    """
    spans: list[tuple[int, int]] = []
    start = 0
    for m in _SENTENCE_END_RE.finditer(text):
        end = m.end()
        if text[start:end].strip():
            spans.append((start, end))
        start = end
    if text[start:].strip():
        spans.append((start, len(text)))
    return spans


def fill(template: str, mapping: dict[str, str]) -> str:
    """Single-pass placeholder substitution for ``{name}`` markers.

    Values are inserted verbatim and never re-scanned, so braces or marker
    text inside a value cannot inject further substitutions.
    """
    pattern = re.compile("|".join(re.escape("{" + k + "}") for k in mapping))
    return pattern.sub(lambda m: mapping[m.group(0)[1:-1]], template)
