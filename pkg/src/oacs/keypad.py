"""Scan-level simulation of the 4x3 switch matrix.

The matrix has no isolation diodes, so when a row is strobed low the read
follows every conductive path through closed switches: close three corners
of a rectangle and the fourth corner reads closed too (a phantom). Scans
containing phantoms are flagged ghosted, and the debouncer suppresses them
outright instead of guessing which keys are real.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

N_ROWS = 4
N_COLS = 3

LAYOUT = (
    ("1", "2", "3"),
    ("4", "5", "6"),
    ("7", "8", "9"),
    ("*", "0", "#"),
)
SYMBOLS = frozenset(sym for row in LAYOUT for sym in row)

DEFAULT_DEBOUNCE_MS = 20


class SwitchClosure(NamedTuple):
    row: int
    col: int


def _checked(sc) -> SwitchClosure:
    sc = SwitchClosure(*sc)
    if not (0 <= sc.row < N_ROWS and 0 <= sc.col < N_COLS):
        raise ValueError(f"switch index out of range: {sc}")
    return sc


def decode(sc) -> str:
    """Layout symbol of one switch position."""
    sc = _checked(sc)
    return LAYOUT[sc.row][sc.col]


def closure_for(symbol: str) -> SwitchClosure:
    for r, row in enumerate(LAYOUT):
        for c, sym in enumerate(row):
            if sym == symbol:
                return SwitchClosure(r, c)
    raise ValueError(f"unknown key symbol: {symbol!r}")


@dataclass(frozen=True)
class ScanResult:
    detected: frozenset[SwitchClosure]
    ghosted: bool


@dataclass(frozen=True)
class KeyEvent:
    key: str
    at_tick: int


def scan_cycle(closed: Iterable[SwitchClosure]) -> ScanResult:
    """Strobe each row low in sequence and read the columns.

    A column reads low for row r iff some chain of closed switches connects
    r to that column (the matrix is one electrical net per connected
    component), so phantoms appear exactly when the closed set wires extra
    row/column pairs together.
    """
    closures = frozenset(_checked(sc) for sc in closed)
    # union-find over nodes 0..3 = rows, 4..6 = columns
    parent = list(range(N_ROWS + N_COLS))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r, c in closures:
        a, b = find(r), find(N_ROWS + c)
        if a != b:
            parent[a] = b

    detected = frozenset(
        SwitchClosure(r, c)
        for r in range(N_ROWS)
        for c in range(N_COLS)
        if find(r) == find(N_ROWS + c)
    )
    return ScanResult(detected=detected, ghosted=detected != closures)


class Debouncer:
    """Turns raw scans into key events.

    An event fires once the same switch has been the only detection for
    debounce_ms consecutive ticks, and at most once per press: the switch
    must drop out of the detected set before it can fire again. Ghosted or
    multi-switch scans emit nothing and restart the stability window.
    """

    def __init__(self, debounce_ms: int = DEFAULT_DEBOUNCE_MS) -> None:
        if debounce_ms < 1:
            raise ValueError("debounce_ms must be >= 1")
        self.debounce_ms = debounce_ms
        self._candidate: SwitchClosure | None = None
        self._stable_since = 0
        self._emitted: set[SwitchClosure] = set()

    def step(self, raw: ScanResult, now: int) -> KeyEvent | None:
        self._emitted &= raw.detected
        if raw.ghosted or len(raw.detected) != 1:
            self._candidate = None
            return None
        (closure,) = raw.detected
        if closure != self._candidate:
            self._candidate = closure
            self._stable_since = now
        if now - self._stable_since + 1 >= self.debounce_ms and closure not in self._emitted:
            self._emitted.add(closure)
            return KeyEvent(key=decode(closure), at_tick=now)
        return None


class MatrixKeypad:
    """Keypad front end: tracks which switches are physically held and
    yields debounced key events, one scan per simulated millisecond."""

    def __init__(self, debounce_ms: int = DEFAULT_DEBOUNCE_MS) -> None:
        self._closed: set[SwitchClosure] = set()
        self._debouncer = Debouncer(debounce_ms)
        self._cache: dict[frozenset[SwitchClosure], ScanResult] = {}
        self.last_scan = scan_cycle(())

    @property
    def held_symbols(self) -> set[str]:
        return {decode(sc) for sc in self._closed}

    def press(self, symbol: str) -> None:
        self._closed.add(closure_for(symbol))

    def release(self, symbol: str) -> None:
        self._closed.discard(closure_for(symbol))

    def tick(self, now: int) -> KeyEvent | None:
        key = frozenset(self._closed)
        raw = self._cache.get(key)
        if raw is None:
            raw = self._cache[key] = scan_cycle(key)
        self.last_scan = raw
        return self._debouncer.step(raw, now)
