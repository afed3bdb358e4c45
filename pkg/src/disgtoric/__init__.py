"""Exact dimension computations for disguised toric loci of reaction networks."""

from __future__ import annotations

from importlib import resources

__version__ = "0.1.0"

from .dimensions import DimensionReport, analyze_pair  # noqa: E402
from .linalg import FeasibilityCertificate, RationalMatrix  # noqa: E402
from .network import EGraph, complete_graph, is_weakly_reversible  # noqa: E402
from .parser import ParseError, parse_network, read_network, serialize_network  # noqa: E402
from .scan import ScanResult, scan, weakly_reversible_subgraphs  # noqa: E402

FIXTURES = (
    "brusselator", "brusselator_gprime", "thomas", "thomas_gprime",
    "circadian", "circadian_gprime", "square", "square_complete",
)


def load_fixture(name: str) -> EGraph:
    """One of the bundled example networks, by stem (see ``FIXTURES``)."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
    text = resources.files(__name__).joinpath("data", f"{name}.crn").read_text(encoding="utf-8")
    return parse_network(text)


def fixture_path(name: str):
    return resources.files(__name__).joinpath("data", f"{name}.crn")


__all__ = [
    "DimensionReport", "EGraph", "FeasibilityCertificate", "FIXTURES", "ParseError",
    "RationalMatrix", "ScanResult", "analyze_pair", "complete_graph", "fixture_path",
    "is_weakly_reversible", "load_fixture", "parse_network", "read_network", "scan",
    "serialize_network", "weakly_reversible_subgraphs",
]
