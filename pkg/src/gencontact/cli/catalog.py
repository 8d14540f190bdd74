"""Access to the bundled example files and their documented verdicts."""
from __future__ import annotations

import json
from importlib import resources


class UnknownExample(KeyError):
    def __str__(self):
        return f"unknown example {self.args[0]!r}"


def _root():
    return resources.files("gencontact") / "catalog"


def entries() -> list[dict]:
    """Manifest records: name, file, description and expected check verdicts."""
    return json.loads((_root() / "manifest.json").read_text(encoding="utf-8"))["examples"]


def entry(name: str) -> dict:
    for e in entries():
        if e["name"] == name:
            return e
    raise UnknownExample(name)


def read(name: str) -> str:
    return (_root() / entry(name)["file"]).read_text(encoding="utf-8")


def path(name: str):
    """A filesystem path for the example (usable with the check command)."""
    return _root() / entry(name)["file"]
