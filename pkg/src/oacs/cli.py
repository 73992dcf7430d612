"""Command line interface.

    oacs run --users FILE --script FILE [--config FILE] [--log FILE]
    oacs interactive --users FILE [--config FILE]
    oacs serve --users FILE --port N [--ws-port N] [--config FILE] [--log FILE]
    oacs reset-used --users FILE

`run` prints the trace on stdout and assertion results on stderr; exit
code 0 means every assertion passed, 1 means at least one failed, 2 means
the run could not start.
"""

from __future__ import annotations

import argparse
import sys

from oacs.config import Config, load_config
from oacs.credentials import load_users, save_users
from oacs.errors import OacsError
from oacs.harness import run_scenario
from oacs.scenario import parse_scenario


def _config_from(args) -> Config:
    cfg = load_config(args.config) if getattr(args, "config", None) else Config()
    if getattr(args, "users", None):
        cfg.users_path = args.users
    if getattr(args, "log", None):
        cfg.log_path = args.log
    return cfg.validate()


def _cmd_run(args) -> int:
    cfg = _config_from(args)
    if not cfg.users_path:
        raise OacsError("a users file is required (--users or users_path in config)")
    with open(args.script, encoding="utf-8") as fh:
        scenario = parse_scenario(fh.read(), source=args.script)
    result = run_scenario(cfg, scenario)
    sys.stdout.write(result.trace_text())
    for oc in result.outcomes:
        status = "ok" if oc.passed else "FAIL"
        print(f"line {oc.line}: expect {oc.description} .. {status}", file=sys.stderr)
        if not oc.passed:
            print(
                f"  at tick {oc.tick}: expected {oc.expected}, actual {oc.actual}",
                file=sys.stderr,
            )
    n_pass = sum(1 for oc in result.outcomes if oc.passed)
    print(f"{n_pass}/{len(result.outcomes)} assertions passed", file=sys.stderr)
    return 0 if result.passed else 1


def _cmd_interactive(args) -> int:
    from oacs.interactive import interactive_loop

    cfg = _config_from(args)
    if not cfg.users_path:
        raise OacsError("a users file is required")
    db = load_users(cfg.users_path)
    try:
        interactive_loop(cfg, db)
    finally:
        save_users(db, cfg.users_path)
    return 0


def _cmd_serve(args) -> int:
    from oacs.harness import Simulator
    from oacs.server import ControlServer

    cfg = _config_from(args)
    if not cfg.users_path:
        raise OacsError("a users file is required")
    db = load_users(cfg.users_path)
    sim = Simulator(db, cfg, audit_path=cfg.log_path)
    ws_port = args.ws_port if args.ws_port is not None else args.port + 1
    server = ControlServer(sim, port=args.port, ws_port=ws_port)
    print(
        f"control protocol on tcp://127.0.0.1:{server.tcp_port} "
        f"and ws://127.0.0.1:{server.ws_port}",
        file=sys.stderr,
    )
    try:
        server.run_forever()
    except KeyboardInterrupt:
        server.stop()
    finally:
        sim.close()
        save_users(db, cfg.users_path)
    return 0


def _cmd_reset_used(args) -> int:
    db = load_users(args.users)
    db.reset_all_used()
    save_users(db, args.users)
    print(f"cleared used flags on {len(db)} records", file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="oacs", description="keypad door-entry panel simulator"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scripted scenario")
    p_run.add_argument("--users", help="users CSV file")
    p_run.add_argument("--script", required=True, help="scenario script file")
    p_run.add_argument("--config", help="config file (key = value lines)")
    p_run.add_argument("--log", help="append audit log to this file")
    p_run.set_defaults(func=_cmd_run)

    p_int = sub.add_parser("interactive", help="drive the panel from the terminal")
    p_int.add_argument("--users", help="users CSV file")
    p_int.add_argument("--config", help="config file")
    p_int.add_argument("--log", help="append audit log to this file")
    p_int.set_defaults(func=_cmd_interactive)

    p_serve = sub.add_parser("serve", help="serve the control protocol")
    p_serve.add_argument("--users", help="users CSV file")
    p_serve.add_argument("--port", type=int, required=True, help="TCP port")
    p_serve.add_argument("--ws-port", type=int, help="WebSocket port (default: port+1)")
    p_serve.add_argument("--config", help="config file")
    p_serve.add_argument("--log", help="append audit log to this file")
    p_serve.set_defaults(func=_cmd_serve)

    p_reset = sub.add_parser("reset-used", help="clear used flags in a users file")
    p_reset.add_argument("--users", required=True, help="users CSV file")
    p_reset.set_defaults(func=_cmd_reset_used)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OacsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
