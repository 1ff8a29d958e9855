import os

import pytest

from sedan.forms import compile_term
from sedan.reader import read_sexprs
from sedan.session import SessionOptions, process_source
from sedan.testgen import TestConfig
from sedan.world import World

CORPUS_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "sedan", "corpus")


def corpus_path(name: str) -> str:
    return os.path.normpath(os.path.join(CORPUS_DIR, name))


def term(src: str):
    """Compile a single term from source text."""
    sxs = read_sexprs(src)
    assert len(sxs) == 1, src
    return compile_term(sxs[0])


def make_world(src: str = "", **config):
    """A world populated by admitting the given forms; raises on any error."""
    options = SessionOptions(config=TestConfig(**config)) if config else SessionOptions()
    outcome, world = process_source(src, options, directory=CORPUS_DIR)
    for fr in outcome.forms:
        assert fr.status != "error", f"form {fr.index} ({fr.source}): {fr.error}"
    assert outcome.fatal_error is None, outcome.fatal_error
    return world


@pytest.fixture
def world():
    return World()
