"""Command-level model of a 16x2 alphanumeric character display."""

from __future__ import annotations

from dataclasses import dataclass, replace

N_ROWS = 2
N_COLS = 16
ROW_BASE = (0x00, 0x40)

_BLANK_ROW = " " * N_COLS


@dataclass(frozen=True)
class Clear:
    pass


@dataclass(frozen=True)
class Home:
    pass


@dataclass(frozen=True)
class DisplayOnOff:
    on: bool


@dataclass(frozen=True)
class SetAddress:
    addr: int


@dataclass(frozen=True)
class WriteChar:
    ch: str


LcdCommand = Clear | Home | DisplayOnOff | SetAddress | WriteChar


@dataclass(frozen=True)
class LcdBuffer:
    rows: tuple[str, str] = (_BLANK_ROW, _BLANK_ROW)
    cursor_row: int = 0
    cursor_col: int = 0
    display_on: bool = True


def _printable(ch: str) -> bool:
    return len(ch) == 1 and 0x20 <= ord(ch) <= 0x7E


def apply(buf: LcdBuffer, cmd: LcdCommand) -> LcdBuffer:
    """One command against the buffer, returning the next buffer value.

    Writes advance the cursor one column and clamp at the last column;
    there is no wrap onto the other row.
    """
    if isinstance(cmd, Clear):
        return LcdBuffer(display_on=buf.display_on)
    if isinstance(cmd, Home):
        return replace(buf, cursor_row=0, cursor_col=0)
    if isinstance(cmd, DisplayOnOff):
        return replace(buf, display_on=cmd.on)
    if isinstance(cmd, SetAddress):
        for row, base in enumerate(ROW_BASE):
            if base <= cmd.addr < base + N_COLS:
                return replace(buf, cursor_row=row, cursor_col=cmd.addr - base)
        raise ValueError(f"invalid display address: {cmd.addr:#04x}")
    if isinstance(cmd, WriteChar):
        if not _printable(cmd.ch):
            raise ValueError(f"not a printable character: {cmd.ch!r}")
        row = buf.rows[buf.cursor_row]
        row = row[: buf.cursor_col] + cmd.ch + row[buf.cursor_col + 1 :]
        rows = (row, buf.rows[1]) if buf.cursor_row == 0 else (buf.rows[0], row)
        return replace(buf, rows=rows, cursor_col=min(buf.cursor_col + 1, N_COLS - 1))
    raise TypeError(f"unknown command: {cmd!r}")


def render_lines(buf: LcdBuffer) -> tuple[str, str]:
    """Exact cell contents, blanks preserved."""
    return buf.rows


def paint_row(buf: LcdBuffer, row: int, text: str) -> LcdBuffer:
    """Write text into one full row, blank padded to 16 columns.

    Characters the display cannot show are drawn as '?'.
    """
    if row not in (0, 1):
        raise ValueError(f"row must be 0 or 1, got {row}")
    if len(text) > N_COLS:
        raise ValueError(f"text wider than the display: {text!r}")
    buf = apply(buf, SetAddress(ROW_BASE[row]))
    for ch in text.ljust(N_COLS):
        buf = apply(buf, WriteChar(ch if _printable(ch) else "?"))
    return buf
