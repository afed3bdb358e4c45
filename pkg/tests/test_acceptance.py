"""Acceptance criteria, one test each; prints a PASS/FAIL line per criterion.

Run with pytest, or directly: ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import contextlib
import io
import random
import sys
import time
import warnings
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from disgtoric import FIXTURES, load_fixture  # noqa: E402
from disgtoric.cli import main as cli_main  # noqa: E402
from disgtoric.dimensions import (  # noqa: E402
    NotWeaklyReversibleWarning,
    _equivalence_system,
    analyze_pair,
    balance_kernel_basis,
    balanced_flux_certificate,
    balanced_realizable_system_dim,
    dynamics_kernel_basis,
    flux_balance_matrix,
    is_dynamically_equivalent,
    is_flux_equivalent,
    realizability_matrix,
    realizable_flux_dim,
    realizable_flux_dim_direct,
    split_toric_witness,
)
from disgtoric.linalg import RationalMatrix, rank  # noqa: E402
from disgtoric.network import EGraph, linkage_classes  # noqa: E402
from disgtoric.parser import ParseError, parse_network, read_network, serialize_network  # noqa: E402
from disgtoric.scan import scan, weakly_reversible_subgraphs  # noqa: E402
from oracles import brute_force_wr_subgraphs, sp_rank  # noqa: E402
from randgraphs import random_graph, random_pair  # noqa: E402

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # pragma: no cover
    ACCEPTANCE_LINES = []

CORPUS = Path(__file__).parent / "corpus"


def report(number: int, title: str, fn) -> None:
    try:
        detail = fn()
    except AssertionError as e:
        line = f"FAIL  criterion {number}: {title} -- {e}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    line = f"PASS  criterion {number}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)


# -- 1 ------------------------------------------------------------------------------

WORKED = {
    "brusselator": ((1, 2, 2, 1), 6, 3, 2, 0, 0, 5),
    "thomas": ((3, 1, 1, 2), 7, 4, 2, 0, 0, 6),
    "circadian": ((3, 1, 1, 2, 1), 8, 4, 3, 0, 0, 7),
}


def worked_examples():
    notes = []
    for name, (rows, fjr, jr, s, d0, j0, locus) in WORKED.items():
        g, gp = load_fixture(name), load_fixture(name + "_gprime")
        r = analyze_pair(g, gp)
        got = (tuple(x.kernel_dim for x in r.vertex_rows), r.realizable_flux_dim,
               r.balanced_flux_dim, r.stoich_dim, r.dynamics_kernel_dim,
               r.balance_kernel_dim, r.locus_dim)
        assert got == (rows, fjr, jr, s, d0, j0, locus), f"{name}: {got}"
        t0 = time.perf_counter()
        res = scan(g, jobs=1)
        elapsed = time.perf_counter() - t0
        assert res.locus_dim == locus, f"{name} scan gave {res.locus_dim}"
        assert elapsed < 600, f"{name} scan took {elapsed:.0f}s"
        notes.append(f"{name} scan {res.locus_dim} in {elapsed:.1f}s")
    sq, sqc = load_fixture("square"), load_fixture("square_complete")
    got = (len(dynamics_kernel_basis(sq)), len(dynamics_kernel_basis(sqc)),
           len(balance_kernel_basis(sq)), len(balance_kernel_basis(sqc)))
    assert got == (0, 4, 0, 3), f"square fixtures: {got}"
    assert balanced_flux_certificate(sq, sqc), "square pair gate infeasible"
    return "; ".join(notes)


def test_criterion_1_worked_examples():
    report(1, "worked examples and scans give the expected dimensions", worked_examples)


# -- 2 ------------------------------------------------------------------------------


def algorithm_consistency():
    rng = random.Random(20240601)
    gated = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NotWeaklyReversibleWarning)
        for i in range(240):
            g, gp = random_pair(rng)
            fjr, _ = realizable_flux_dim(g, gp)
            direct = realizable_flux_dim_direct(g, gp)
            assert fjr == direct, f"pair {i}: vertex table {fjr} vs definition {direct}"
            if balanced_flux_certificate(g, gp):
                gated += 1
                stacked = balanced_realizable_system_dim(g, gp)
                expect = fjr - (len(gp.active_vertices) - linkage_classes(gp).count)
                assert stacked == expect, f"pair {i}: stacked {stacked} vs {expect}"
    assert gated >= 50, f"only {gated} pairs passed the balanced-flux gate"
    return f"240 pairs, {gated} gated"


def test_criterion_2_algorithm_consistency():
    report(2, "vertex-table dimension equals the definition on random pairs",
           algorithm_consistency)


# -- 3 ------------------------------------------------------------------------------


def _positive_rates(rng, m):
    return [Fraction(rng.randint(1, 50), rng.randint(1, 9)) for _ in range(m)]


def equivalences():
    checks = 0
    for name in FIXTURES:
        g = load_fixture(name)
        basis = dynamics_kernel_basis(g)
        rng = random.Random(f"eq-{name}")
        m = len(g.edges)
        for _ in range(50):
            k = _positive_rates(rng, m)
            lam = [Fraction(0)] * m
            for b in basis:
                c = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
                lam = [a + c * x for a, x in zip(lam, b)]
            while any(a + x <= 0 for a, x in zip(k, lam)):
                lam = [x / 2 for x in lam]
            assert is_dynamically_equivalent(g, k, g, [a + x for a, x in zip(k, lam)]), name
            checks += 1
        outside = 0
        while outside < 50:
            k = _positive_rates(rng, m)
            delta = [Fraction(rng.randint(-3, 3), 5) for _ in range(m)]
            if sp_rank([list(b) for b in basis] + [delta], m) == len(basis):
                continue
            while any(a + x <= 0 for a, x in zip(k, delta)):
                delta = [x / 2 for x in delta]
            assert not is_dynamically_equivalent(g, k, g, [a + x for a, x in zip(k, delta)]), name
            outside += 1
            checks += 1

    # flux and dynamical equivalence agree at the all-ones state on every toric witness
    witnesses = 0
    pairs = [(load_fixture(n), load_fixture(n + "_gprime"))
             for n in ("brusselator", "thomas", "circadian")]
    pairs.append((load_fixture("square"), load_fixture("square_complete")))
    rng = random.Random(7)
    pairs += [random_pair(rng) for _ in range(60)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NotWeaklyReversibleWarning)
        for g, gp in pairs:
            r = analyze_pair(g, gp)
            if not r.toric_gate:
                continue
            flux, rates = split_toric_witness(gp, r.toric_gate)
            assert is_flux_equivalent(g, rates, gp, flux) == is_dynamically_equivalent(
                g, rates, gp, flux) is True
            witnesses += 1
    return f"{checks} perturbation checks, {witnesses} toric witnesses"


def test_criterion_3_equivalences():
    report(3, "rate perturbations and the flux/dynamics bridge", equivalences)


# -- 4 ------------------------------------------------------------------------------


def feasibility_soundness():
    rng = random.Random(99)
    pairs = [(load_fixture(n), load_fixture(n + "_gprime"))
             for n in ("brusselator", "thomas", "circadian")]
    pairs.append((load_fixture("square"), load_fixture("square_complete")))
    pairs += [random_pair(rng) for _ in range(120)]
    verified = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NotWeaklyReversibleWarning)
        for g, gp in pairs:
            r = analyze_pair(g, gp)
            if r.balanced_flux_gate:
                w = r.balanced_flux_gate.witness
                assert all(x >= 1 for x in w)
                assert all(v == 0 for v in flux_balance_matrix(gp) @ w)
                assert all(v == 0 for v in realizability_matrix(g, gp) @ w)
                verified += 1
            if r.toric_gate:
                flux, rates = split_toric_witness(gp, r.toric_gate)
                assert all(x >= 1 for x in flux) and all(x >= 1 for x in rates)
                assert all(v == 0 for v in flux_balance_matrix(gp) @ flux)
                joint = _equivalence_system(g, gp)
                assert all(v == 0 for v in joint @ (tuple(rates) + tuple(flux)))
                verified += 1
    one_way = parse_network("species A B\nA -> B")
    two_way = parse_network("species A B\nA <-> B")
    assert not balanced_flux_certificate(two_way, one_way), "A -> B reported feasible"
    assert balanced_flux_certificate(two_way, two_way)
    return f"{verified} witnesses re-verified"


def test_criterion_4_feasibility_soundness():
    report(4, "every feasibility witness re-verifies exactly", feasibility_soundness)


# -- 5 ------------------------------------------------------------------------------


def _complete(k):
    return EGraph(("X",), [(i,) for i in range(k)],
                  [(i, j) for i in range(k) for j in range(k) if i != j])


def enumeration_oracle():
    counts = []
    for k in (2, 3):
        gc = _complete(k)
        brute = len(brute_force_wr_subgraphs(gc))
        found = list(weakly_reversible_subgraphs(gc))
        assert len(found) == brute, f"K{k}: {len(found)} vs brute force {brute}"
        counts.append(len(found))
    assert counts == [1, 21], counts
    spanning = sum(len(g.vertices) == 3 for g in weakly_reversible_subgraphs(_complete(3)))
    assert spanning == 18
    return "1 and 21 subgraphs, 18 of the latter on all three vertices"


def test_criterion_5_enumeration_oracle():
    report(5, "subgraph enumeration matches the brute-force filter", enumeration_oracle)


# -- 6 ------------------------------------------------------------------------------

ERROR_FILES = {
    "unknown_token.crn": "unknown-token",
    "negative_coefficient.crn": "negative-coefficient",
    "duplicate_edge.crn": "duplicate-edge",
    "self_loop.crn": "self-loop",
    "empty_file.crn": "empty-file",
    "bad_declaration.crn": "bad-declaration",
}


def parser_criterion():
    for name in FIXTURES:
        g = load_fixture(name)
        assert parse_network(serialize_network(g)) == g, name
    rng = random.Random(500)
    for i in range(500):
        g = random_graph(rng, max_vertices=6, max_coef=3)
        assert parse_network(serialize_network(g)) == g, f"random graph {i}"
    for fname, kind in ERROR_FILES.items():
        try:
            read_network(CORPUS / fname, strict=True)
        except ParseError as e:
            assert e.kind == kind, f"{fname}: {e.kind}"
        else:
            raise AssertionError(f"{fname} parsed")
        with contextlib.redirect_stderr(io.StringIO()):
            code = cli_main(["check", "--strict", str(CORPUS / fname)])
        assert code == 2, f"{fname}: exit {code}"
    return f"8 fixtures, 500 random graphs, {len(ERROR_FILES)} error kinds"


def test_criterion_6_parser():
    report(6, "parser round trip and error corpus", parser_criterion)


if __name__ == "__main__":
    failed = 0
    for test in (test_criterion_1_worked_examples, test_criterion_2_algorithm_consistency,
                 test_criterion_3_equivalences, test_criterion_4_feasibility_soundness,
                 test_criterion_5_enumeration_oracle, test_criterion_6_parser):
        try:
            test()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
