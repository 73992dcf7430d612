import pytest

from oacs.config import Config
from oacs.credentials import Database, Passcode, UserRecord, load_users

TABLE1_ROWS = [
    ("Sadeque Reza", "1234"),
    ("Feroz Ahmed", "4321"),
    ("Nazmul Hossain", "8765"),
    ("Arifa Ferdousi", "3211"),
]


def write_users_csv(path, rows):
    lines = ["name,code,used"]
    lines += [f"{name},{code},{used}" for name, code, used in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def table1_csv(tmp_path):
    rows = [(name, code, "0") for name, code in TABLE1_ROWS]
    return write_users_csv(tmp_path / "users.csv", rows)


@pytest.fixture
def table1_db(table1_csv):
    return load_users(str(table1_csv))


def make_db(*name_code_pairs):
    db = Database()
    for name, code in name_code_pairs:
        db.add(UserRecord(name, Passcode.from_string(code)))
    return db


def make_config(**overrides):
    cfg = Config(**overrides)
    return cfg.validate()
