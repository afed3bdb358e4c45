"""Versioned JSON report documents.

Every rational is written as a ``"p/q"`` string and every dimension as an
integer, so reports contain no floats. Keys are sorted on output. Apart from
``wall_clock_ms``, the bytes depend only on the inputs and flags.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .dimensions import (
    DimensionReport,
    balance_kernel_basis,
    dynamics_kernel_basis,
    split_toric_witness,
)
from .linalg import FeasibilityCertificate
from .network import EGraph, is_weakly_reversible, linkage_classes, stoichiometric_dim
from .parser import format_complex, serialize_network
from .scan import CandidateResult, ScanResult

SCHEMA_VERSION = "1.0"


def rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def vector(v: Sequence) -> list[str]:
    return [rational(x) for x in v]


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def graph_summary(g: EGraph, bases: bool = False) -> dict[str, Any]:
    d0 = dynamics_kernel_basis(g)
    j0 = balance_kernel_basis(g)
    out = {
        "species": list(g.species),
        "vertex_count": len(g.active_vertices),
        "edge_count": len(g.edges),
        "linkage_classes": linkage_classes(g).count,
        "weakly_reversible": is_weakly_reversible(g),
        "stoich_dim": stoichiometric_dim(g),
        "dynamics_kernel_dim": len(d0),
        "balance_kernel_dim": len(j0),
        "edges": [
            f"{format_complex(s, g.species)} -> {format_complex(t, g.species)}"
            for s, t in (g.edge_coords(k) for k in range(len(g.edges)))
        ],
    }
    if bases:
        out["dynamics_kernel_basis"] = [vector(v) for v in d0]
        out["balance_kernel_basis"] = [vector(v) for v in j0]
    return out


def _gate(cert: FeasibilityCertificate, witness: dict | None) -> dict[str, Any]:
    out: dict[str, Any] = {"feasible": cert.feasible}
    if witness is not None and cert.feasible:
        out["witness"] = witness
    return out


def pair_payload(g: EGraph, gprime: EGraph, report: DimensionReport,
                 witness: bool = False) -> dict[str, Any]:
    bal_w = tor_w = None
    if witness:
        if report.balanced_flux_gate.feasible:
            bal_w = {"flux": vector(report.balanced_flux_gate.witness)}
        if report.toric_gate.feasible:
            flux, rates = split_toric_witness(gprime, report.toric_gate)
            tor_w = {"flux": vector(flux), "rates": vector(rates)}
    return {
        "vertex_rows": [
            {
                "vertex": format_complex(r.coords, gprime.species),
                "coords": list(r.coords),
                "complement_rows": r.p,
                "out_degree": r.q,
                "kernel_dim": r.kernel_dim,
            }
            for r in report.vertex_rows
        ],
        "realizable_flux_dim": report.realizable_flux_dim,
        "vertex_count": report.vertex_count,
        "linkage_classes": report.linkage_classes,
        "weakly_reversible": report.weakly_reversible,
        "balanced_flux_dim": report.balanced_flux_dim,
        "stoich_dim": report.stoich_dim,
        "dynamics_kernel_dim": report.dynamics_kernel_dim,
        "balance_kernel_dim": report.balance_kernel_dim,
        "real_locus_dim": report.real_locus_dim,
        "locus_dim": report.locus_dim,
        "balanced_flux_gate": _gate(report.balanced_flux_gate, bal_w),
        "toric_gate": _gate(report.toric_gate, tor_w),
        "ambient_dim": len(g.edges),
    }


def _candidate(c: CandidateResult) -> dict[str, Any]:
    return {
        "crn": serialize_network(c.graph),
        "edge_count": len(c.graph.edges),
        "real_locus_dim": c.report.real_locus_dim,
        "locus_dim": c.report.locus_dim,
        "contributes_to_real_locus": c.contributes_to_real_locus,
        "contributes_to_locus": c.contributes_to_locus,
    }


def scan_payload(result: ScanResult) -> dict[str, Any]:
    return {
        "ambient_dim": result.ambient_dim,
        "real_locus_dim": result.real_locus_dim,
        "locus_dim": result.locus_dim,
        "real_locus_witnesses": [_candidate(c) for c in result.real_locus_witnesses],
        "locus_witnesses": [_candidate(c) for c in result.locus_witnesses],
        "candidates_evaluated": result.candidates_evaluated,
        "early_exit": result.early_exit,
        "enumeration_mode": result.enumeration_mode,
        "vertex_set": result.vertex_set,
    }


def build_document(command: str, inputs: Sequence, options: dict, payload: dict,
                   wall_clock_ms: int) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "disgtoric", "version": __version__},
        "command": command,
        "inputs": [{"path": str(p), "sha256": file_digest(p)} for p in inputs],
        "options": options,
        "payload": payload,
        "wall_clock_ms": int(wall_clock_ms),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_schema() -> dict:
    text = resources.files("disgtoric").joinpath("report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)
