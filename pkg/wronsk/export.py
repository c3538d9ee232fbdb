"""
Wronsk Export Module

Writes result tables as self-describing CSV or as an aligned text table.

CSV layout:
    # key: value          metadata block (potential, grid, tolerances)
    col_a,col_b,...       header row
    ...                   rows, floats with 17 significant digits
    # key: value          optional footer (e.g. truncation point)

Lines end with LF. No timestamps are written, so identical runs give
byte-identical files. `read_table` reads the file back into the same frame.
"""

import io
from typing import Mapping, Optional, TextIO

import pandas as pd

FLOAT_FORMAT = "%.17g"


def _format_value(value) -> str:
    if isinstance(value, float):
        return FLOAT_FORMAT % value
    return str(value)


def comment_block(meta: Optional[Mapping[str, object]]) -> str:
    if not meta:
        return ""
    return "".join(f"# {key}: {_format_value(value)}\n" for key, value in meta.items())


def render_csv(
    df: pd.DataFrame,
    meta: Optional[Mapping[str, object]] = None,
    footer: Optional[Mapping[str, object]] = None,
    header: bool = True,
) -> str:
    """
    CSV text of df.

    Args:
        df: Table to write; the index is dropped.
        meta: `# key: value` lines placed before the column header.
        footer: `# key: value` lines placed after the rows.
        header: False drops the leading metadata block (--no-header);
            the footer is always written.
    """
    body = df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    lead = comment_block(meta) if header else ""
    return lead + body + comment_block(footer)


def render_table(
    df: pd.DataFrame,
    meta: Optional[Mapping[str, object]] = None,
    footer: Optional[Mapping[str, object]] = None,
    header: bool = True,
) -> str:
    """Aligned text table for terminals."""
    if df.empty:
        body = "(no rows)\n"
    else:
        body = df.to_string(index=False, float_format=lambda v: f"{v:.10g}") + "\n"
    lead = comment_block(meta) if header else ""
    return lead + body + comment_block(footer)


def write_output(text: str, path: Optional[str], stream: TextIO) -> None:
    """Write text to path, or to stream when path is None."""
    if path is None:
        stream.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_table(source) -> pd.DataFrame:
    """Parse a CSV written by render_csv (path or text buffer); comments skipped."""
    if isinstance(source, str) and "\n" in source:
        source = io.StringIO(source)
    return pd.read_csv(source, comment="#", float_precision="round_trip")


def read_metadata(text: str) -> dict[str, str]:
    """`# key: value` lines of a rendered file, header and footer alike."""
    meta = {}
    for line in text.splitlines():
        if line.startswith("# ") and ": " in line:
            key, value = line[2:].split(": ", 1)
            meta[key] = value
    return meta
