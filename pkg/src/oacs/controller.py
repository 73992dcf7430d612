"""Panel controller: a deterministic transition function from events to
states and peripheral effects.

Behavior, in brief:

* Four digits are collected and validated on the fourth; there is no
  enter key. '*' abandons an entry in progress, '#' is reserved.
* A fresh valid code opens the lock for unlock_ms, marks the code used,
  and clears the wrong-attempt counter.
* A valid but already-used code is refused and does not count as wrong.
* attempt_limit consecutive wrong codes latch LOCKDOWN and the alarm;
  only an admin reset leaves that mode.
* Grant and denial messages dwell until their timer expires, then the
  prompt returns.

`step` never performs I/O itself; every observable action is returned as
an Effect for the harness to apply.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable

from oacs.credentials import CODE_LENGTH, Database, Passcode, encode_passcode
from oacs.keypad import KeyEvent

PROMPT_MSG = "Enter Password"
GRANTED_MSG = "Access Granted"
WRONG_MSG = "Wrong Password"
REPLAY_MSG = "Code Used"
LOCKED_MSG = "System Locked"


class Mode(Enum):
    IDLE = "IDLE"
    COLLECT = "COLLECT"
    GRANTED = "GRANTED"
    DENY_MSG = "DENY_MSG"
    LOCKDOWN = "LOCKDOWN"


class LogKind(Enum):
    GRANT = "GRANT"
    DENY_WRONG = "DENY_WRONG"
    DENY_REPLAY = "DENY_REPLAY"
    LOCKDOWN = "LOCKDOWN"
    RESET = "RESET"


@dataclass(frozen=True)
class Tick:
    now: int


@dataclass(frozen=True)
class AdminReset:
    pass


Event = KeyEvent | Tick | AdminReset


@dataclass(frozen=True)
class LcdWrite:
    row: int
    text: str


@dataclass(frozen=True)
class LockGrant:
    duration_ms: int


@dataclass(frozen=True)
class AlarmOn:
    pass


@dataclass(frozen=True)
class AlarmOff:
    pass


@dataclass(frozen=True)
class LogEntry:
    kind: LogKind
    detail: str


Effect = LcdWrite | LockGrant | AlarmOn | AlarmOff | LogEntry


@dataclass(frozen=True)
class Policy:
    attempt_limit: int = 3
    unlock_ms: int = 5000
    deny_ms: int = 2000

    def __post_init__(self) -> None:
        if self.attempt_limit < 1:
            raise ValueError("attempt_limit must be >= 1")
        if self.unlock_ms < 1 or self.deny_ms < 1:
            raise ValueError("durations must be >= 1")


@dataclass(frozen=True)
class PanelState:
    db: Database
    policy: Policy = Policy()
    mode: Mode = Mode.IDLE
    buffer: tuple[int, ...] = ()
    wrong_count: int = 0
    timer_deadline: int | None = None


def _banner() -> list[Effect]:
    return [LcdWrite(0, PROMPT_MSG), LcdWrite(1, "")]


def initial_state(db: Database, policy: Policy = Policy()) -> tuple[PanelState, list[Effect]]:
    """Fresh panel waiting for a code, plus the effects that paint the prompt."""
    return PanelState(db=db, policy=policy), _banner()


def step(state: PanelState, event: Event) -> tuple[PanelState, list[Effect]]:
    if isinstance(event, AdminReset):
        return _on_reset(state)
    if isinstance(event, Tick):
        return _on_tick(state, event.now)
    if isinstance(event, KeyEvent):
        return _on_key(state, event)
    raise TypeError(f"unknown event: {event!r}")


def _on_reset(state: PanelState) -> tuple[PanelState, list[Effect]]:
    effects: list[Effect] = []
    if state.mode is Mode.LOCKDOWN:
        effects.append(AlarmOff())
    effects.extend(_banner())
    effects.append(LogEntry(LogKind.RESET, "admin"))
    return (
        replace(state, mode=Mode.IDLE, buffer=(), wrong_count=0, timer_deadline=None),
        effects,
    )


def _on_tick(state: PanelState, now: int) -> tuple[PanelState, list[Effect]]:
    if state.mode in (Mode.GRANTED, Mode.DENY_MSG):
        assert state.timer_deadline is not None
        if now >= state.timer_deadline:
            return replace(state, mode=Mode.IDLE, timer_deadline=None), _banner()
    return state, []


def _on_key(state: PanelState, event: KeyEvent) -> tuple[PanelState, list[Effect]]:
    if state.mode in (Mode.GRANTED, Mode.DENY_MSG, Mode.LOCKDOWN):
        return state, []
    key = event.key
    if key == "*":
        if state.mode is Mode.COLLECT:
            return replace(state, mode=Mode.IDLE, buffer=()), _banner()
        return state, []
    if not key.isdigit():
        return state, []
    buffer = state.buffer + (int(key),)
    if len(buffer) < CODE_LENGTH:
        return (
            replace(state, mode=Mode.COLLECT, buffer=buffer),
            [LcdWrite(1, "*" * len(buffer))],
        )
    return _validate(state, buffer, event.at_tick)


def _validate(state: PanelState, buffer: tuple[int, ...], now: int) -> tuple[PanelState, list[Effect]]:
    code = Passcode(buffer)  # type: ignore[arg-type]
    value = encode_passcode(code)
    record = state.db.lookup(value)

    if record is not None and not record.used:
        state.db.mark_used(value)
        effects: list[Effect] = [
            LcdWrite(0, GRANTED_MSG),
            LcdWrite(1, record.name[:16]),
            LockGrant(state.policy.unlock_ms),
            LogEntry(LogKind.GRANT, record.name),
        ]
        next_state = replace(
            state,
            mode=Mode.GRANTED,
            buffer=(),
            wrong_count=0,
            timer_deadline=now + state.policy.unlock_ms,
        )
        return next_state, effects

    if record is not None:
        effects = [
            LcdWrite(0, REPLAY_MSG),
            LcdWrite(1, ""),
            LogEntry(LogKind.DENY_REPLAY, record.name),
        ]
        next_state = replace(
            state,
            mode=Mode.DENY_MSG,
            buffer=(),
            timer_deadline=now + state.policy.deny_ms,
        )
        return next_state, effects

    wrong = state.wrong_count + 1
    if wrong >= state.policy.attempt_limit:
        effects = [
            LcdWrite(0, LOCKED_MSG),
            LcdWrite(1, ""),
            AlarmOn(),
            LogEntry(LogKind.DENY_WRONG, str(code)),
            LogEntry(LogKind.LOCKDOWN, f"{wrong} consecutive wrong codes"),
        ]
        next_state = replace(
            state, mode=Mode.LOCKDOWN, buffer=(), wrong_count=wrong, timer_deadline=None
        )
        return next_state, effects

    effects = [
        LcdWrite(0, WRONG_MSG),
        LcdWrite(1, ""),
        LogEntry(LogKind.DENY_WRONG, str(code)),
    ]
    next_state = replace(
        state,
        mode=Mode.DENY_MSG,
        buffer=(),
        wrong_count=wrong,
        timer_deadline=now + state.policy.deny_ms,
    )
    return next_state, effects


def run_trace(
    state: PanelState, events: Iterable[Event]
) -> list[tuple[PanelState, list[Effect]]]:
    """Fold `step` over events, enforcing monotone time.

    Tick values must strictly increase; key event times must never move
    backward relative to anything already seen.
    """
    out: list[tuple[PanelState, list[Effect]]] = []
    last_time: int | None = None
    last_tick: int | None = None
    for event in events:
        if isinstance(event, Tick):
            if last_tick is not None and event.now <= last_tick:
                raise ValueError(f"tick values must strictly increase, got {event.now}")
            if last_time is not None and event.now < last_time:
                raise ValueError(f"event time went backward: {event.now}")
            last_tick = event.now
            last_time = event.now
        elif isinstance(event, KeyEvent):
            if last_time is not None and event.at_tick < last_time:
                raise ValueError(f"event time went backward: {event.at_tick}")
            last_time = event.at_tick
        state, effects = step(state, event)
        out.append((state, effects))
    return out
