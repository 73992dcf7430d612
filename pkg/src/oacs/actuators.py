"""Relay-driven electromagnetic lock and siren, advanced tick by tick."""

from __future__ import annotations

from typing import NamedTuple

from oacs.errors import PulseError


class TimedPulse(NamedTuple):
    started_at: int
    duration_ms: int

    @property
    def ends_at(self) -> int:
        return self.started_at + self.duration_ms


class Lock:
    """Fail-secure lock: energized (door bonded) at every tick outside an
    explicit grant pulse. A pulse covers [started_at, started_at + duration)."""

    def __init__(self) -> None:
        self.energized = True
        self.pulse: TimedPulse | None = None

    def grant_pulse(self, now: int, duration_ms: int) -> TimedPulse:
        if duration_ms < 1:
            raise ValueError("duration_ms must be >= 1")
        if self.pulse is not None and now < self.pulse.ends_at:
            raise PulseError(f"pulse already active until tick {self.pulse.ends_at}")
        self.pulse = TimedPulse(now, duration_ms)
        self.energized = False
        return self.pulse

    def advance(self, now: int) -> None:
        """Re-energize exactly when the active pulse ends."""
        if self.pulse is not None and now >= self.pulse.ends_at:
            self.pulse = None
            self.energized = True

    def cancel_pulse(self) -> None:
        """Immediate return to the secure state (admin reset)."""
        self.pulse = None
        self.energized = True


class Alarm:
    """Siren: latched on at lockdown, silenced only by an admin reset."""

    def __init__(self) -> None:
        self.sounding = False

    def turn_on(self) -> None:
        self.sounding = True

    def turn_off(self) -> None:
        self.sounding = False
