"""User database for 4-digit access codes.

A code is an ordered 4-tuple of decimal digits stored under its positional
decimal value: digits (0,0,4,2) live at key 42 and display as "0042", so
leading-zero codes are first class. Each record carries a used flag; a code
opens the door once and is then refused until an administrator resets the
flags.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterator

from oacs.errors import (
    CapacityError,
    DuplicateCodeError,
    UnknownCodeError,
    UsersFileError,
)

CODE_LENGTH = 4
CODE_SPACE = 10_000
MAX_NAME_LENGTH = 64

_CSV_HEADER = ["name", "code", "used"]


@dataclass(frozen=True)
class Passcode:
    """Ordered digits of one code, thousands place first."""

    digits: tuple[int, int, int, int]

    def __post_init__(self) -> None:
        if len(self.digits) != CODE_LENGTH:
            raise ValueError(f"a passcode has exactly {CODE_LENGTH} digits")
        for d in self.digits:
            if not isinstance(d, int) or isinstance(d, bool) or not 0 <= d <= 9:
                raise ValueError(f"digit out of range: {d!r}")

    @classmethod
    def from_string(cls, text: str) -> "Passcode":
        if len(text) != CODE_LENGTH or not all(
            "0" <= ch <= "9" for ch in text
        ):
            raise ValueError(
                f"code must be exactly {CODE_LENGTH} ASCII digits, got {text!r}"
            )
        return cls(tuple(int(ch) for ch in text))  # type: ignore[arg-type]

    def __str__(self) -> str:
        return "".join(str(d) for d in self.digits)


def encode_passcode(code: Passcode) -> int:
    """Positional decimal value of the digits."""
    a, b, c, d = code.digits
    return a * 1000 + b * 100 + c * 10 + d * 1


def decode_codevalue(value: int) -> Passcode:
    """Inverse of encode_passcode; rejects values outside [0, 9999]."""
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"code value must be an integer, got {value!r}")
    if not 0 <= value < CODE_SPACE:
        raise ValueError(f"code value out of range: {value}")
    return Passcode((value // 1000, value // 100 % 10, value // 10 % 10, value % 10))


@dataclass
class UserRecord:
    name: str
    code: Passcode
    used: bool = False

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("name must be nonempty")
        if len(self.name) > MAX_NAME_LENGTH:
            raise ValueError(f"name longer than {MAX_NAME_LENGTH} characters")
        if "\n" in self.name or "\r" in self.name:
            raise ValueError("name must not contain line breaks")


class Database:
    """All user records, keyed by code value.

    Single writer: mutate only from the simulation thread; hand `clone()`
    copies to anything else that wants to inspect records.
    """

    def __init__(self) -> None:
        self._records: dict[int, UserRecord] = {}

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[UserRecord]:
        # sorted by code value so every serialization is deterministic
        return iter(self._records[k] for k in sorted(self._records))

    def add(self, record: UserRecord) -> None:
        key = encode_passcode(record.code)
        existing = self._records.get(key)
        if existing is not None:
            raise DuplicateCodeError(str(record.code), existing.name, record.name)
        if len(self._records) >= CODE_SPACE:
            raise CapacityError(f"database is full ({CODE_SPACE} records)")
        self._records[key] = record

    def lookup(self, value: int) -> UserRecord | None:
        return self._records.get(value)

    def mark_used(self, value: int) -> None:
        record = self._records.get(value)
        if record is None:
            raise UnknownCodeError(f"no record for code value {value}")
        record.used = True

    def reset_all_used(self) -> None:
        for record in self._records.values():
            record.used = False

    def used_count(self) -> int:
        return sum(1 for r in self._records.values() if r.used)

    def clone(self) -> "Database":
        out = Database()
        for key, r in self._records.items():
            out._records[key] = UserRecord(r.name, r.code, r.used)
        return out


def load_users(path: str) -> Database:
    """Read a users CSV (header `name,code,used`, used is 0 or 1)."""
    db = Database()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != _CSV_HEADER:
            raise UsersFileError(f"{path}:1: expected header 'name,code,used'")
        for row in reader:
            line = reader.line_num
            if len(row) != 3:
                raise UsersFileError(
                    f"{path}:{line}: expected 3 fields, got {len(row)}"
                )
            name, code_text, used_text = row
            if used_text not in ("0", "1"):
                raise UsersFileError(
                    f"{path}:{line}: used must be 0 or 1, got {used_text!r}"
                )
            try:
                record = UserRecord(
                    name, Passcode.from_string(code_text), used_text == "1"
                )
            except ValueError as exc:
                raise UsersFileError(f"{path}:{line}: {exc}") from exc
            try:
                db.add(record)
            except DuplicateCodeError as exc:
                raise UsersFileError(f"{path}:{line}: {exc}") from exc
    return db


def save_users(db: Database, path: str) -> None:
    """Write the database back out; load_users(save_users(db)) == db."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_CSV_HEADER)
        for record in db:
            writer.writerow([record.name, str(record.code), "1" if record.used else "0"])
