"""Wiring loom and clock.

The simulator owns every peripheral and advances a millisecond tick:
keypad scans feed debounced key events into the controller, the controller
tick runs the grant/deny timers, and emitted effects drive the display,
lock, alarm and audit log. Everything is a pure function of (config, users
file, scenario), so two runs of the same script produce byte-identical
traces and audit logs.

Per-tick order: the lock pulse expires first, then key events, then the
controller tick, then the trace snapshot. A key press made by a script or
protocol message is first seen by the scan on the following tick, so its
key event fires exactly debounce_ms after the press.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO

from oacs.actuators import Alarm, Lock
from oacs.config import Config
from oacs.controller import (
    AdminReset,
    AlarmOff,
    AlarmOn,
    Effect,
    Event,
    LcdWrite,
    LockGrant,
    LogEntry,
    Tick,
    initial_state,
    step,
)
from oacs.credentials import Database, load_users
from oacs.errors import ConfigError
from oacs.keypad import MatrixKeypad
from oacs.lcd import LcdBuffer, paint_row, render_lines
from oacs.scenario import (
    AdminResetStep,
    AlarmIs,
    Expect,
    LcdLineIs,
    LockIs,
    LogContains,
    ModeIs,
    Press,
    Release,
    Scenario,
    Wait,
)


@dataclass(frozen=True)
class TraceRecord:
    tick: int
    lcd0: str
    lcd1: str
    lock: bool
    alarm: bool
    mode: str
    wrong: int

    def observable(self) -> tuple:
        return (self.lcd0, self.lcd1, self.lock, self.alarm, self.mode, self.wrong)

    def format_line(self) -> str:
        return (
            f"tick={self.tick} mode={self.mode} lock={int(self.lock)} "
            f"alarm={int(self.alarm)} wrong={self.wrong} "
            f'lcd0="{self.lcd0}" lcd1="{self.lcd1}"'
        )


def format_audit_line(tick: int, entry: LogEntry) -> str:
    return f"tick={tick} kind={entry.kind.value} detail={entry.detail}"


class Simulator:
    """One panel: controller plus simulated peripherals on a shared clock."""

    def __init__(self, db: Database, config: Config | None = None, audit_path: str | None = None):
        self.config = (config or Config()).validate()
        self.db = db
        self.keypad = MatrixKeypad(self.config.debounce_ms)
        self.lcd = LcdBuffer()
        self.lock = Lock()
        self.alarm = Alarm()
        self.now = 0
        self.audit_lines: list[str] = []
        self.log_entries: list[tuple[int, LogEntry]] = []
        self._audit_fh: IO[str] | None = (
            open(audit_path, "a", encoding="utf-8") if audit_path else None
        )
        self.state, effects = initial_state(db, self.config.policy())
        self._apply_effects(effects)
        self.trace: list[TraceRecord] = [self._snapshot()]

    def close(self) -> None:
        if self._audit_fh is not None:
            self._audit_fh.close()
            self._audit_fh = None

    def __enter__(self) -> "Simulator":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- observable state ---------------------------------------------------

    def _snapshot(self) -> TraceRecord:
        line0, line1 = render_lines(self.lcd)
        return TraceRecord(
            tick=self.now,
            lcd0=line0,
            lcd1=line1,
            lock=self.lock.energized,
            alarm=self.alarm.sounding,
            mode=self.state.mode.value,
            wrong=self.state.wrong_count,
        )

    def snapshot(self) -> TraceRecord:
        return self._snapshot()

    def _record_if_changed(self) -> None:
        snap = self._snapshot()
        if snap.observable() != self.trace[-1].observable():
            self.trace.append(snap)

    # -- effect fan-out -----------------------------------------------------

    def _apply_effects(self, effects: list[Effect]) -> None:
        for effect in effects:
            if isinstance(effect, LcdWrite):
                self.lcd = paint_row(self.lcd, effect.row, effect.text)
            elif isinstance(effect, LockGrant):
                self.lock.grant_pulse(self.now, effect.duration_ms)
            elif isinstance(effect, AlarmOn):
                self.alarm.turn_on()
            elif isinstance(effect, AlarmOff):
                self.alarm.turn_off()
            elif isinstance(effect, LogEntry):
                line = format_audit_line(self.now, effect)
                self.audit_lines.append(line)
                self.log_entries.append((self.now, effect))
                if self._audit_fh is not None:
                    self._audit_fh.write(line + "\n")
                    self._audit_fh.flush()

    def _dispatch(self, event: Event) -> None:
        self.state, effects = step(self.state, event)
        self._apply_effects(effects)

    # -- inputs -------------------------------------------------------------

    def press(self, symbol: str) -> None:
        self.keypad.press(symbol)

    def release(self, symbol: str) -> None:
        self.keypad.release(symbol)

    def admin_reset(self) -> None:
        self.lock.cancel_pulse()  # back to the secure state first
        self._dispatch(AdminReset())
        self._record_if_changed()

    # -- clock --------------------------------------------------------------

    def advance_tick(self) -> None:
        self.now += 1
        self.lock.advance(self.now)
        key_event = self.keypad.tick(self.now)
        if key_event is not None:
            self._dispatch(key_event)
        self._dispatch(Tick(self.now))
        self._record_if_changed()

    def advance(self, ms: int) -> None:
        for _ in range(ms):
            self.advance_tick()


@dataclass
class AssertionOutcome:
    line: int
    description: str
    passed: bool
    expected: str
    actual: str
    tick: int


@dataclass
class ScenarioRun:
    trace: list[TraceRecord]
    outcomes: list[AssertionOutcome]
    audit_lines: list[str]

    @property
    def passed(self) -> bool:
        return all(outcome.passed for outcome in self.outcomes)

    def trace_text(self) -> str:
        return "".join(record.format_line() + "\n" for record in self.trace)

    def audit_text(self) -> str:
        return "".join(line + "\n" for line in self.audit_lines)


def _evaluate(sim: Simulator, expect: Expect) -> AssertionOutcome:
    check = expect.check
    if isinstance(check, LcdLineIs):
        actual = render_lines(sim.lcd)[check.row]
        return AssertionOutcome(
            expect.line, f"lcd {check.row}", actual == check.text,
            repr(check.text), repr(actual), sim.now,
        )
    if isinstance(check, LockIs):
        actual_flag = sim.lock.energized
        return AssertionOutcome(
            expect.line, "lock", actual_flag == check.energized,
            str(int(check.energized)), str(int(actual_flag)), sim.now,
        )
    if isinstance(check, AlarmIs):
        actual_flag = sim.alarm.sounding
        return AssertionOutcome(
            expect.line, "alarm", actual_flag == check.sounding,
            str(int(check.sounding)), str(int(actual_flag)), sim.now,
        )
    if isinstance(check, ModeIs):
        actual_name = sim.state.mode.value
        return AssertionOutcome(
            expect.line, "mode", actual_name == check.name,
            check.name, actual_name, sim.now,
        )
    if isinstance(check, LogContains):
        found = any(entry.kind is check.kind for _, entry in sim.log_entries)
        return AssertionOutcome(
            expect.line, f"log {check.kind.value}", found,
            f"log contains {check.kind.value}",
            "present" if found else "absent", sim.now,
        )
    raise TypeError(f"unknown check: {check!r}")


def run_scenario(config: Config, scenario: Scenario, db: Database | None = None) -> ScenarioRun:
    """Execute a parsed scenario; deterministic given config and users file."""
    if db is None:
        if not config.users_path:
            raise ConfigError("users_path is required to run a scenario")
        db = load_users(config.users_path)
    outcomes: list[AssertionOutcome] = []
    with Simulator(db, config, audit_path=config.log_path) as sim:
        for item in scenario.steps:
            if isinstance(item, Press):
                sim.press(item.symbol)
            elif isinstance(item, Release):
                sim.release(item.symbol)
            elif isinstance(item, Wait):
                sim.advance(item.ms)
            elif isinstance(item, AdminResetStep):
                sim.admin_reset()
            elif isinstance(item, Expect):
                outcomes.append(_evaluate(sim, item))
            else:
                raise TypeError(f"unknown step: {item!r}")
        return ScenarioRun(sim.trace, outcomes, sim.audit_lines)
