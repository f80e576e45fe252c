"""Khovanov homology, T(2,6) detection and the link Floer case search."""

import json

from ._core import (
    AlgebraError,
    DiagramError,
    LinkDiagram,
    ParseError,
    ResourceError,
    RuleError,
    __version__,
    braid_closure,
    jones,
    lee_ranks,
    load_diagram,
    load_diagram_file,
)
from . import _core


def khovanov(diagram, ring="Z", basepoint=None, workers=1):
    """Homology as a dict with keys ``ring`` and ``groups`` (i, j, free, torsion)."""
    return json.loads(_core.khovanov_json(diagram, ring, basepoint, workers))


def detect(diagram, workers=1):
    return json.loads(_core.detect_json(diagram, workers))


def census(path, workers=1):
    return json.loads(_core.census_json(path, workers))


def hfl_cases(case=None, samples=2, lax=False, extend=0):
    """Case reports as dicts. Counterexamples are listed per report, not raised."""
    return json.loads(_core.hfl_cases_json(case, samples, lax, extend))


__all__ = [
    "AlgebraError",
    "DiagramError",
    "LinkDiagram",
    "ParseError",
    "ResourceError",
    "RuleError",
    "braid_closure",
    "census",
    "detect",
    "hfl_cases",
    "jones",
    "khovanov",
    "lee_ranks",
    "load_diagram",
    "load_diagram_file",
]
