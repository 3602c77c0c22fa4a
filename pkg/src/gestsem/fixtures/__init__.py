"""Bundled example annotations, scenes, lexicon and utterances."""

from importlib import resources


def path(name: str):
    return resources.files(__name__) / name


def read_text(name: str) -> str:
    return path(name).read_text(encoding="utf-8")


def names(suffix: str = "") -> list[str]:
    return sorted(p.name for p in resources.files(__name__).iterdir()
                  if p.name.endswith(suffix) and not p.name.startswith("_"))
