"""Bundled example diagrams (``*.cox`` files)."""

from importlib import resources

from ..diagram import parse_diagram


def names():
    return sorted(p.name[:-4] for p in resources.files(__name__).iterdir()
                  if p.name.endswith(".cox"))


def text(name):
    return resources.files(__name__).joinpath(f"{name}.cox").read_text(encoding="utf-8")


def load(name):
    return parse_diagram(text(name))
