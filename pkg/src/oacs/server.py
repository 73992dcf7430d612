"""Control protocol server.

Newline-delimited JSON over local TCP, and the same messages over
WebSocket for browsers. Client to server:

    {"t":"key_down","key":"1"}   {"t":"key_up","key":"1"}
    {"t":"admin_reset"}          {"t":"subscribe"}

Server to client, on subscribe and on every observable change:

    {"t":"snapshot","tick":N,"lcd":["...16...","...16..."],
     "lock":true,"alarm":false,"mode":"IDLE","wrong":0}

Errors are {"t":"error","msg":"..."} and leave the connection open.

Any number of observers may subscribe. The first connection that sends a
key or reset becomes the driver and keeps the role until it disconnects;
driving messages from anyone else are refused. All events funnel through
one queue into the simulation thread, which advances the clock at one
simulated millisecond per wall millisecond.
"""

from __future__ import annotations

import base64
import hashlib
import itertools
import json
import queue
import socket
import threading
import time

from oacs.harness import Simulator, TraceRecord
from oacs.keypad import SYMBOLS

_WS_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"
_MAX_CATCHUP_TICKS = 200


def _ws_frame(payload: bytes, opcode: int = 0x1) -> bytes:
    n = len(payload)
    head = bytes([0x80 | opcode])
    if n < 126:
        head += bytes([n])
    elif n < 1 << 16:
        head += bytes([126]) + n.to_bytes(2, "big")
    else:
        head += bytes([127]) + n.to_bytes(8, "big")
    return head + payload


class _WsReader:
    """Buffered frame reader for one accepted WebSocket connection."""

    def __init__(self, sock: socket.socket, leftover: bytes):
        self._sock = sock
        self._buf = leftover

    def _read_exact(self, n: int) -> bytes:
        while len(self._buf) < n:
            chunk = self._sock.recv(4096)
            if not chunk:
                raise ConnectionError("peer closed")
            self._buf += chunk
        out, self._buf = self._buf[:n], self._buf[n:]
        return out

    def read_message(self) -> tuple[int, bytes]:
        """Next complete message as (opcode, payload)."""
        opcode = 0
        parts: list[bytes] = []
        while True:
            b0, b1 = self._read_exact(2)
            fin = b0 & 0x80
            op = b0 & 0x0F
            masked = b1 & 0x80
            length = b1 & 0x7F
            if length == 126:
                length = int.from_bytes(self._read_exact(2), "big")
            elif length == 127:
                length = int.from_bytes(self._read_exact(8), "big")
            mask = self._read_exact(4) if masked else b""
            payload = self._read_exact(length) if length else b""
            if masked:
                payload = bytes(c ^ mask[i % 4] for i, c in enumerate(payload))
            if op != 0:
                opcode = op
            parts.append(payload)
            if fin:
                return opcode, b"".join(parts)


def _ws_handshake(sock: socket.socket) -> bytes | None:
    """Answer the HTTP upgrade; returns bytes received past the request."""
    data = b""
    while b"\r\n\r\n" not in data:
        chunk = sock.recv(4096)
        if not chunk or len(data) > 1 << 16:
            return None
        data += chunk
    head, leftover = data.split(b"\r\n\r\n", 1)
    lines = head.decode("latin-1").split("\r\n")
    key = None
    for line in lines[1:]:
        name, _, value = line.partition(":")
        if name.strip().lower() == "sec-websocket-key":
            key = value.strip()
    if not lines[0].startswith("GET ") or key is None:
        sock.sendall(b"HTTP/1.1 400 Bad Request\r\n\r\n")
        return None
    accept = base64.b64encode(hashlib.sha1((key + _WS_GUID).encode()).digest()).decode()
    sock.sendall(
        (
            "HTTP/1.1 101 Switching Protocols\r\n"
            "Upgrade: websocket\r\n"
            "Connection: Upgrade\r\n"
            f"Sec-WebSocket-Accept: {accept}\r\n\r\n"
        ).encode()
    )
    return leftover


class _Client:
    _ids = itertools.count(1)

    def __init__(self, sock: socket.socket, kind: str):
        self.id = next(_Client._ids)
        self.sock = sock
        self.kind = kind  # "tcp" | "ws"
        self.subscribed = False
        self.held: set[str] = set()
        self.alive = True
        self._send_lock = threading.Lock()

    def send_json(self, obj: dict) -> None:
        data = json.dumps(obj, separators=(",", ":")).encode()
        try:
            with self._send_lock:
                if self.kind == "tcp":
                    self.sock.sendall(data + b"\n")
                else:
                    self.sock.sendall(_ws_frame(data))
        except OSError:
            self.alive = False

    def send_raw(self, data: bytes) -> None:
        try:
            with self._send_lock:
                self.sock.sendall(data)
        except OSError:
            self.alive = False

    def close(self) -> None:
        self.alive = False
        try:
            self.sock.close()
        except OSError:
            pass


class ControlServer:
    """Serves the control protocol around one Simulator."""

    def __init__(
        self,
        sim: Simulator,
        host: str = "127.0.0.1",
        port: int = 0,
        ws_port: int | None = 0,
    ):
        self._sim = sim
        self._host = host
        self._commands: queue.Queue = queue.Queue()
        self._clients: dict[int, _Client] = {}
        self._clients_lock = threading.Lock()
        self._driver_id: int | None = None
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []
        self._last_sent: TraceRecord | None = None

        self._tcp_listener = socket.create_server((host, port))
        self._ws_listener = (
            socket.create_server((host, ws_port)) if ws_port is not None else None
        )

    @property
    def tcp_port(self) -> int:
        return self._tcp_listener.getsockname()[1]

    @property
    def ws_port(self) -> int | None:
        if self._ws_listener is None:
            return None
        return self._ws_listener.getsockname()[1]

    def start(self) -> None:
        self._threads = [
            threading.Thread(target=self._sim_loop, name="oacs-sim", daemon=True),
            threading.Thread(
                target=self._accept_loop,
                args=(self._tcp_listener, "tcp"),
                name="oacs-accept-tcp",
                daemon=True,
            ),
        ]
        if self._ws_listener is not None:
            self._threads.append(
                threading.Thread(
                    target=self._accept_loop,
                    args=(self._ws_listener, "ws"),
                    name="oacs-accept-ws",
                    daemon=True,
                )
            )
        for t in self._threads:
            t.start()

    def stop(self) -> None:
        self._stop.set()
        self._tcp_listener.close()
        if self._ws_listener is not None:
            self._ws_listener.close()
        with self._clients_lock:
            clients = list(self._clients.values())
        for client in clients:
            client.close()
        for t in self._threads:
            t.join(timeout=2.0)

    def run_forever(self) -> None:
        self.start()
        try:
            while not self._stop.wait(0.5):
                pass
        finally:
            self.stop()

    # -- accept/read threads --------------------------------------------------

    def _accept_loop(self, listener: socket.socket, kind: str) -> None:
        listener.settimeout(0.2)
        while not self._stop.is_set():
            try:
                sock, _addr = listener.accept()
            except socket.timeout:
                continue
            except OSError:
                break
            client = _Client(sock, kind)
            with self._clients_lock:
                self._clients[client.id] = client
            reader = threading.Thread(
                target=self._tcp_reader if kind == "tcp" else self._ws_reader,
                args=(client,),
                name=f"oacs-client-{client.id}",
                daemon=True,
            )
            reader.start()

    def _handle_text(self, client: _Client, text: str) -> None:
        try:
            msg = json.loads(text)
        except json.JSONDecodeError:
            client.send_json({"t": "error", "msg": "malformed JSON"})
            return
        if not isinstance(msg, dict):
            client.send_json({"t": "error", "msg": "message must be a JSON object"})
            return
        self._commands.put(("msg", client, msg))

    def _tcp_reader(self, client: _Client) -> None:
        buf = b""
        try:
            while not self._stop.is_set():
                chunk = client.sock.recv(4096)
                if not chunk:
                    break
                buf += chunk
                while b"\n" in buf:
                    line, buf = buf.split(b"\n", 1)
                    line = line.strip()
                    if line:
                        self._handle_text(client, line.decode("utf-8", "replace"))
        except OSError:
            pass
        finally:
            self._drop(client)

    def _ws_reader(self, client: _Client) -> None:
        try:
            leftover = _ws_handshake(client.sock)
            if leftover is None:
                self._drop(client)
                return
            reader = _WsReader(client.sock, leftover)
            while not self._stop.is_set():
                opcode, payload = reader.read_message()
                if opcode == 0x8:  # close
                    client.send_raw(_ws_frame(b"", opcode=0x8))
                    break
                if opcode == 0x9:  # ping
                    client.send_raw(_ws_frame(payload, opcode=0xA))
                    continue
                if opcode == 0x1:
                    self._handle_text(client, payload.decode("utf-8", "replace"))
        except (OSError, ConnectionError):
            pass
        finally:
            self._drop(client)

    def _drop(self, client: _Client) -> None:
        client.close()
        with self._clients_lock:
            self._clients.pop(client.id, None)
        self._commands.put(("bye", client, None))

    # -- simulation thread ------------------------------------------------------

    def _snapshot_msg(self, snap: TraceRecord) -> dict:
        return {
            "t": "snapshot",
            "tick": snap.tick,
            "lcd": [snap.lcd0, snap.lcd1],
            "lock": snap.lock,
            "alarm": snap.alarm,
            "mode": snap.mode,
            "wrong": snap.wrong,
        }

    def _broadcast_if_changed(self) -> None:
        snap = self._sim.snapshot()
        if self._last_sent is not None and snap.observable() == self._last_sent.observable():
            return
        self._last_sent = snap
        msg = self._snapshot_msg(snap)
        with self._clients_lock:
            targets = [c for c in self._clients.values() if c.subscribed and c.alive]
        for client in targets:
            client.send_json(msg)

    def _apply_msg(self, client: _Client, msg: dict) -> None:
        t = msg.get("t")
        if t == "subscribe":
            client.subscribed = True
            client.send_json(self._snapshot_msg(self._sim.snapshot()))
            return
        if t not in ("key_down", "key_up", "admin_reset"):
            client.send_json({"t": "error", "msg": f"unknown message type: {t!r}"})
            return
        if self._driver_id is None:
            self._driver_id = client.id
        if self._driver_id != client.id:
            client.send_json({"t": "error", "msg": "another driver is active"})
            return
        if t == "admin_reset":
            self._sim.admin_reset()
            return
        key = msg.get("key")
        if not isinstance(key, str) or key not in SYMBOLS:
            client.send_json({"t": "error", "msg": f"unknown key: {key!r}"})
            return
        if t == "key_down":
            self._sim.press(key)
            client.held.add(key)
        else:
            self._sim.release(key)
            client.held.discard(key)

    def _sim_loop(self) -> None:
        start_wall = time.monotonic()
        base_tick = self._sim.now
        while not self._stop.is_set():
            while True:
                try:
                    kind, client, msg = self._commands.get_nowait()
                except queue.Empty:
                    break
                if kind == "msg":
                    self._apply_msg(client, msg)
                else:  # bye
                    for key in sorted(client.held):
                        self._sim.release(key)
                    client.held.clear()
                    if self._driver_id == client.id:
                        self._driver_id = None
            target = base_tick + int((time.monotonic() - start_wall) * 1000)
            for _ in range(min(max(target - self._sim.now, 0), _MAX_CATCHUP_TICKS)):
                self._sim.advance_tick()
            self._broadcast_if_changed()
            time.sleep(0.001)
