"""Deterministic desk-top simulator of a keypad door-entry control panel.

A controller state machine enforces 4-digit one-time codes, a three-strike
alarm lockdown and a timed unlock, driving simulated peripherals: a scanned
4x3 key matrix with ghost-key physics, a 16x2 character display, an
electromagnetic lock and a siren. A scenario harness replays scripted
input with assertions, and a control-protocol server exposes the live
panel to external front ends.
"""

from oacs.actuators import Alarm, Lock, TimedPulse
from oacs.config import Config, load_config
from oacs.controller import (
    AdminReset,
    Mode,
    PanelState,
    Policy,
    Tick,
    initial_state,
    run_trace,
    step,
)
from oacs.credentials import (
    Database,
    Passcode,
    UserRecord,
    decode_codevalue,
    encode_passcode,
    load_users,
    save_users,
)
from oacs.harness import Simulator, TraceRecord, run_scenario
from oacs.keypad import KeyEvent, MatrixKeypad, ScanResult, SwitchClosure, decode, scan_cycle
from oacs.lcd import LcdBuffer, render_lines
from oacs.scenario import Scenario, parse_scenario
from oacs.server import ControlServer

__all__ = [
    "AdminReset",
    "Alarm",
    "Config",
    "ControlServer",
    "Database",
    "KeyEvent",
    "LcdBuffer",
    "Lock",
    "MatrixKeypad",
    "Mode",
    "PanelState",
    "Passcode",
    "Policy",
    "ScanResult",
    "Scenario",
    "Simulator",
    "SwitchClosure",
    "Tick",
    "TimedPulse",
    "TraceRecord",
    "UserRecord",
    "decode",
    "decode_codevalue",
    "encode_passcode",
    "initial_state",
    "load_config",
    "load_users",
    "parse_scenario",
    "render_lines",
    "run_scenario",
    "run_trace",
    "save_users",
    "scan_cycle",
    "step",
]
