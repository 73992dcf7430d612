"""Scenario scripts: one step per line.

    press 1            close a key switch
    release 1          open it again (every press needs a release)
    wait 500           advance 500 simulated ms
    admin_reset        keyed reset: silence alarm, clear counters
    expect lock 0      assert observable state; lcd text is quoted and
    expect lcd 0 "Enter Password  "    must be exactly 16 characters

Lines starting with '#' are comments (the '#' key is still addressable as
`press #`). A key event fires debounce_ms after its press step, so presses
must be held at least that long to register.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass

from oacs.controller import LogKind, Mode
from oacs.errors import ScriptError
from oacs.keypad import SYMBOLS
from oacs.lcd import N_COLS


@dataclass(frozen=True)
class LcdLineIs:
    row: int
    text: str


@dataclass(frozen=True)
class LockIs:
    energized: bool


@dataclass(frozen=True)
class AlarmIs:
    sounding: bool


@dataclass(frozen=True)
class ModeIs:
    name: str


@dataclass(frozen=True)
class LogContains:
    kind: LogKind


Check = LcdLineIs | LockIs | AlarmIs | ModeIs | LogContains


@dataclass(frozen=True)
class Press:
    symbol: str
    line: int


@dataclass(frozen=True)
class Release:
    symbol: str
    line: int


@dataclass(frozen=True)
class Wait:
    ms: int
    line: int


@dataclass(frozen=True)
class AdminResetStep:
    line: int


@dataclass(frozen=True)
class Expect:
    check: Check
    line: int


Step = Press | Release | Wait | AdminResetStep | Expect


@dataclass(frozen=True)
class Scenario:
    steps: tuple[Step, ...]


def _err(source: str, line: int, msg: str) -> ScriptError:
    return ScriptError(f"{source}:{line}: {msg}")


def _parse_expect(tokens: list[str], source: str, line: int) -> Check:
    if not tokens:
        raise _err(source, line, "expect needs a subject")
    subject, args = tokens[0], tokens[1:]
    if subject == "lcd":
        if len(args) != 2 or args[0] not in ("0", "1"):
            raise _err(source, line, "usage: expect lcd <0|1> \"<16 chars>\"")
        if len(args[1]) != N_COLS:
            raise _err(
                source, line, f"lcd text must be exactly {N_COLS} characters, got {len(args[1])}"
            )
        return LcdLineIs(int(args[0]), args[1])
    if subject in ("lock", "alarm"):
        if len(args) != 1 or args[0] not in ("0", "1"):
            raise _err(source, line, f"usage: expect {subject} <0|1>")
        flag = args[0] == "1"
        return LockIs(flag) if subject == "lock" else AlarmIs(flag)
    if subject == "mode":
        if len(args) != 1 or args[0] not in Mode.__members__:
            names = "|".join(Mode.__members__)
            raise _err(source, line, f"usage: expect mode <{names}>")
        return ModeIs(args[0])
    if subject == "log":
        if len(args) != 1 or args[0] not in LogKind.__members__:
            names = "|".join(LogKind.__members__)
            raise _err(source, line, f"usage: expect log <{names}>")
        return LogContains(LogKind[args[0]])
    raise _err(source, line, f"unknown expect subject {subject!r}")


def parse_scenario(text: str, source: str = "<script>") -> Scenario:
    steps: list[Step] = []
    held: dict[str, int] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            tokens = shlex.split(raw)
        except ValueError as exc:
            raise _err(source, line_no, str(exc)) from exc
        head = tokens[0]
        if head == "press":
            if len(tokens) != 2 or tokens[1] not in SYMBOLS:
                raise _err(source, line_no, "usage: press <key symbol>")
            sym = tokens[1]
            if sym in held:
                raise _err(source, line_no, f"key {sym} already held since line {held[sym]}")
            held[sym] = line_no
            steps.append(Press(sym, line_no))
        elif head == "release":
            if len(tokens) != 2 or tokens[1] not in SYMBOLS:
                raise _err(source, line_no, "usage: release <key symbol>")
            sym = tokens[1]
            if sym not in held:
                raise _err(source, line_no, f"key {sym} released but not held")
            del held[sym]
            steps.append(Release(sym, line_no))
        elif head == "wait":
            if len(tokens) != 2:
                raise _err(source, line_no, "usage: wait <ms>")
            try:
                ms = int(tokens[1])
            except ValueError:
                raise _err(source, line_no, f"wait needs an integer, got {tokens[1]!r}") from None
            if ms < 1:
                raise _err(source, line_no, "wait must be >= 1 ms")
            steps.append(Wait(ms, line_no))
        elif head == "admin_reset":
            if len(tokens) != 1:
                raise _err(source, line_no, "admin_reset takes no arguments")
            steps.append(AdminResetStep(line_no))
        elif head == "expect":
            steps.append(Expect(_parse_expect(tokens[1:], source, line_no), line_no))
        else:
            raise _err(source, line_no, f"unknown step {head!r}")
    if held:
        sym, line_no = next(iter(held.items()))
        raise _err(source, line_no, f"key {sym} is never released")
    return Scenario(tuple(steps))
