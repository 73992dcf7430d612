"""Interactive terminal mode.

Keys 0-9, * and # press the matching keypad button (a press is held for
debounce_ms plus a margin, then released); ':' opens a command line with
`:reset` (admin reset) and `:quit`. The panel redraws after every
observable change. Real time maps to simulated ticks at 1 ms per ms.
"""

from __future__ import annotations

import os
import select
import sys
import time

from oacs.config import Config
from oacs.credentials import Database
from oacs.errors import OacsError
from oacs.harness import Simulator, TraceRecord
from oacs.keypad import SYMBOLS

_CLEAR = "\x1b[H\x1b[2J"


def draw_panel(snap: TraceRecord, pending: str | None = None) -> str:
    lock_lamp = "LOCKED" if snap.lock else "OPEN  "
    alarm_lamp = "ALARM!" if snap.alarm else "quiet "
    lines = [
        "+------------------+",
        f"| {snap.lcd0} |",
        f"| {snap.lcd1} |",
        "+------------------+",
        f" lock: {lock_lamp}   alarm: {alarm_lamp}",
        f" mode: {snap.mode}   wrong: {snap.wrong}   tick: {snap.tick}",
        " keys 0-9 * #; :reset, :quit",
    ]
    if pending is not None:
        lines.append(f" :{pending}")
    return "\n".join(lines)


def interactive_loop(cfg: Config, db: Database, out=None) -> None:
    if out is None:
        out = sys.stdout
    if not sys.stdin.isatty():
        raise OacsError("interactive mode needs a terminal")
    import termios
    import tty

    fd = sys.stdin.fileno()
    saved = termios.tcgetattr(fd)
    tty.setcbreak(fd)
    try:
        _run(cfg, db, fd, out)
    finally:
        termios.tcsetattr(fd, termios.TCSADRAIN, saved)
        out.write("\n")


def _run(cfg: Config, db: Database, fd: int, out) -> None:
    sim = Simulator(db, cfg, audit_path=cfg.log_path)
    hold_ms = cfg.debounce_ms + 5
    release_at: dict[str, int] = {}
    command: str | None = None
    start = time.monotonic()
    drawn: tuple | None = None

    with sim:
        while True:
            ready, _, _ = select.select([fd], [], [], 0.001)
            if ready:
                ch = os.read(fd, 1).decode("utf-8", "replace")
                if command is not None:
                    if ch in ("\n", "\r"):
                        if command == "quit":
                            return
                        if command == "reset":
                            sim.admin_reset()
                        command = None
                    elif ch in ("\x7f", "\b"):
                        command = command[:-1]
                    else:
                        command += ch
                elif ch == ":":
                    command = ""
                elif ch in SYMBOLS and ch not in release_at:
                    sim.press(ch)
                    release_at[ch] = sim.now + hold_ms
                # anything else is ignored

            target = int((time.monotonic() - start) * 1000)
            while sim.now < target:
                sim.advance_tick()
                due = [sym for sym, at in release_at.items() if sim.now >= at]
                for sym in due:
                    sim.release(sym)
                    del release_at[sym]

            snap = sim.snapshot()
            key = (snap.observable(), command)
            if key != drawn:
                drawn = key
                out.write(_CLEAR + draw_panel(snap, command) + "\n")
                out.flush()
