"""Search over weakly reversible subgraphs of the complete graph.

:func:`scan` maximizes the locus dimension of :func:`~disgtoric.dimensions.analyze_pair`
over every weakly reversible subgraph of the complete graph on the vertices of
``g``. Subgraphs are enumerated as edge bitmasks in canonical order (by edge
count, then lexicographically by edge index). Per-vertex tables let most
candidates be scored without building an :class:`EGraph`. Exact LPs run only
for candidates that could raise or tie the running maximum.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, islice
from math import comb
from typing import Iterable, Iterator, Sequence

from .dimensions import (
    DimensionReport,
    NotWeaklyReversibleWarning,
    analyze_pair,
    balanced_flux_certificate,
    dynamics_kernel_basis,
    locus_dim_formula,
    toric_realization_certificate,
)
from .linalg import (
    RationalMatrix,
    integer_rank,
    kernel_basis,
    orthogonal_complement_basis,
    positive_kernel_feasible,
    rank,
)
from .network import (
    EGraph,
    complete_graph,
    is_subgraph,
    is_weakly_reversible,
    require_same_species,
    subgraph_from_edges,
)

MAX_EXHAUSTIVE_EDGES = 26
BATCH_SIZE = 8192


class EnumerationTooLarge(RuntimeError):
    def __init__(self, edges: int):
        self.edges = edges
        super().__init__(
            f"the complete graph has {edges} edges, i.e. 2^{edges} edge subsets, above the "
            f"exhaustive limit of 2^{MAX_EXHAUSTIVE_EDGES}; pass --cap N or --candidates DIR")


class CandidateError(ValueError):
    """An explicit candidate is not a weakly reversible subgraph of the complete graph."""


# ---------------------------------------------------------------------------
# edge-subset machinery


class _Context:
    """Precomputed per-vertex data of the complete graph ``gc`` relative to ``g``."""

    def __init__(self, g: EGraph, gc: EGraph):
        self.g = g
        self.gc = gc
        self.n = g.n
        self.nv = len(gc.vertices)
        self.edges = gc.edges
        self.vectors = gc.reaction_vectors
        self.out_list = gc.out_edges
        self.local_pos = {}
        for v, out in enumerate(self.out_list):
            for j, k in enumerate(out):
                self.local_pos[k] = (v, j)
        self.dyn_kernel_g = len(dynamics_kernel_basis(g))

        # per vertex and per subset of its out-edges (local bitmask):
        #   kernel dim of A_y B_y, whether A_y B_y has a positive kernel vector,
        #   and a kernel basis of the source matrix (in local coordinates)
        self.kd = []
        self.pos_ok = []
        self.d0 = []
        for v, out in enumerate(self.out_list):
            y = gc.vertices[v]
            gv = g.vertex_index.get(y)
            span = [g.reaction_vectors[k] for k in g.out_edges[gv]] if gv is not None else []
            a = RationalMatrix(orthogonal_complement_basis(span, self.n), self.n)
            kd_v, pos_v, d0_v = [], [], []
            for sub in range(1 << len(out)):
                chosen = [out[j] for j in range(len(out)) if sub >> j & 1]
                if not chosen:
                    kd_v.append(0)
                    pos_v.append(True)
                    d0_v.append([])
                    continue
                b = RationalMatrix.from_columns([self.vectors[k] for k in chosen], self.n)
                prod = a @ b
                kd_v.append(len(chosen) - rank(prod))
                pos_v.append(positive_kernel_feasible(prod).feasible)
                d0_v.append([dict(zip(chosen, vec)) for vec in kernel_basis(b)])
            self.kd.append(kd_v)
            self.pos_ok.append(pos_v)
            self.d0.append(d0_v)

    def is_wr(self, ids: Sequence[int]) -> bool:
        has_out = has_in = 0
        succ = [0] * self.nv
        for k in ids:
            s, t = self.edges[k]
            has_out |= 1 << s
            has_in |= 1 << t
            succ[s] |= 1 << t
        if has_out != has_in:
            return False
        # every edge s -> t must have t reaching s
        reach = {}
        for s, t in (self.edges[k] for k in ids):
            if t not in reach:
                seen = frontier = 1 << t
                while frontier:
                    nxt = 0
                    f = frontier
                    while f:
                        low = f & -f
                        nxt |= succ[low.bit_length() - 1]
                        f ^= low
                    frontier = nxt & ~seen
                    seen |= nxt
                reach[t] = seen
            if not reach[t] >> s & 1:
                return False
        return True

    def score(self, ids: Sequence[int]) -> int | None:
        """Locus dimension assuming the balanced-flux gate passes, or None if it cannot."""
        sub = {}
        for k in ids:
            v, j = self.local_pos[k]
            sub[v] = sub.get(v, 0) | 1 << j
        fjr = 0
        for v, s in sub.items():
            if not self.pos_ok[v][s]:
                return None
            fjr += self.kd[v][s]
        # linkage classes and vertex count
        parent = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for k in ids:
            s, t = self.edges[k]
            parent[find(s)] = find(t)
        nverts = len(parent)
        ell = len({find(x) for x in list(parent)})
        stoich = integer_rank([self.vectors[k] for k in ids])

        # balance-preserving perturbations: dynamics-preserving ones in the
        # kernel of the incidence map
        d0 = [vec for v, s in sub.items() for vec in self.d0[v][s]]
        j0 = 0
        if d0:
            verts = sorted(parent)
            vpos = {x: i for i, x in enumerate(verts)}
            cols = []
            for vec in d0:
                col = [Fraction(0)] * len(verts)
                for k, c in vec.items():
                    s, t = self.edges[k]
                    col[vpos[s]] += c
                    col[vpos[t]] -= c
                cols.append(col)
            j0 = len(d0) - rank(RationalMatrix(cols, len(verts)))
        jr = fjr - nverts + ell
        return locus_dim_formula(jr, stoich, self.dyn_kernel_g, j0)


def _wr_masks(ctx: _Context, size: int, start: int, stop: int) -> Iterator[tuple[int, ...]]:
    for ids in islice(combinations(range(len(ctx.edges)), size), start, stop):
        if ctx.is_wr(ids):
            yield ids


def _batches(nedges: int, batch: int = BATCH_SIZE) -> Iterator[tuple[int, int, int]]:
    for size in range(1, nedges + 1):
        total = comb(nedges, size)
        for start in range(0, total, batch):
            yield size, start, min(start + batch, total)


def _score_batch(ctx: _Context, size: int, start: int, stop: int):
    out = []
    wr = 0
    for ids in _wr_masks(ctx, size, start, stop):
        wr += 1
        out.append((ids, ctx.score(ids)))
    return wr, out


_WORKER_CTX: _Context | None = None


def _init_worker(g: EGraph, gc: EGraph) -> None:
    global _WORKER_CTX
    _WORKER_CTX = _Context(g, gc)


def _score_batch_worker(args):
    return _score_batch(_WORKER_CTX, *args)


# ---------------------------------------------------------------------------
# public API


def weakly_reversible_subgraphs(gc: EGraph, cap: int | None = None) -> Iterator[EGraph]:
    """Yield every weakly reversible subgraph of ``gc`` with at least one edge.

    Order is by edge count, then lexicographic in ``gc``'s edge indices. More
    than ``2**26`` edge subsets are refused unless ``cap`` bounds the number of
    subgraphs yielded.
    """
    m = len(gc.edges)
    if m > MAX_EXHAUSTIVE_EDGES and cap is None:
        raise EnumerationTooLarge(m)
    ctx = _Context(gc, gc)
    yielded = 0
    for size, start, stop in _batches(m):
        for ids in _wr_masks(ctx, size, start, stop):
            if cap is not None and yielded >= cap:
                return
            yielded += 1
            yield subgraph_from_edges(gc, ids)


@dataclass(frozen=True)
class CandidateResult:
    graph: EGraph
    report: DimensionReport

    @property
    def contributes_to_real_locus(self) -> bool:
        return self.report.balanced_flux_gate.feasible

    @property
    def contributes_to_locus(self) -> bool:
        return self.report.toric_gate.feasible


def evaluate_candidate(g: EGraph, gprime: EGraph, mode: str = "sources") -> CandidateResult:
    require_same_species(g, gprime)
    if not is_subgraph(gprime, complete_graph(g, mode)):
        raise CandidateError("candidate is not a subgraph of the complete graph")
    if not is_weakly_reversible(gprime):
        raise CandidateError("candidate is not weakly reversible")
    return CandidateResult(gprime, analyze_pair(g, gprime))


@dataclass(frozen=True)
class ScanResult:
    ambient_dim: int  # |E| of g; both loci live in R^|E|
    real_locus_dim: int | None
    locus_dim: int | None
    real_locus_witnesses: tuple[CandidateResult, ...]
    locus_witnesses: tuple[CandidateResult, ...]
    candidates_evaluated: int
    early_exit: bool
    enumeration_mode: str  # "exhaustive" | "capped" | "explicit-list"
    vertex_set: str = "sources"
    extra: dict = field(default_factory=dict, compare=False)


class _Tracker:
    """Running maxima with lazily certified ties, fed in canonical order."""

    def __init__(self, g: EGraph, graph_of):
        self.g = g
        self.graph_of = graph_of
        self.best_r = self.best_k = None
        self.wit_r: list = []
        self.wit_k: list = []
        self.pend_r: list = []
        self.pend_k: list = []
        self._jr: dict = {}
        self._k: dict = {}

    def jr_ok(self, key) -> bool:
        if key not in self._jr:
            self._jr[key] = balanced_flux_certificate(self.g, self.graph_of(key)).feasible
        return self._jr[key]

    def k_ok(self, key) -> bool:
        if key not in self._k:
            self._k[key] = self.jr_ok(key) and toric_realization_certificate(
                self.g, self.graph_of(key)).feasible
        return self._k[key]

    def feed(self, key, value: int | None) -> None:
        if value is None:
            return
        if self.best_r is None or value > self.best_r:
            if self.jr_ok(key):
                self.best_r, self.wit_r, self.pend_r = value, [key], []
        elif value == self.best_r:
            self.pend_r.append(key)
        if self.best_k is None or value > self.best_k:
            if self.k_ok(key):
                self.best_k, self.wit_k, self.pend_k = value, [key], []
        elif value == self.best_k:
            self.pend_k.append(key)

    def finish(self) -> tuple[list, list]:
        wr = self.wit_r + [k for k in self.pend_r if self.jr_ok(k)]
        wk = self.wit_k + [k for k in self.pend_k if self.k_ok(k)]
        return wr, wk


def scan(
    g: EGraph,
    vertex_set: str = "sources",
    cap: int | None = None,
    candidates: Iterable[EGraph] | None = None,
    jobs: int = 1,
    early_exit: bool = True,
) -> ScanResult:
    """Maximum locus dimensions over weakly reversible subgraphs of the complete graph.

    ``real_locus_dim`` maximizes over candidates admitting a positive balanced
    realizable flux; ``locus_dim`` over candidates that also admit a positive
    rate vector on ``g`` (both certified by exact LP). Either is None when no
    candidate qualifies. With ``early_exit`` the search stops after the batch
    in which ``locus_dim`` reaches ``|E|``, which cannot be exceeded.
    """
    gc = complete_graph(g, vertex_set)
    ambient = len(g.edges)

    if candidates is not None:
        cands = [gp.reorder_species(g.species) if gp.species != g.species else gp
                 for gp in candidates]
        for gp in cands:
            if not is_subgraph(gp, gc):
                raise CandidateError(f"candidate {gp!r} is not a subgraph of the complete graph")
            if not is_weakly_reversible(gp):
                raise CandidateError(f"candidate {gp!r} is not weakly reversible")
        reports = {}
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NotWeaklyReversibleWarning)
            for i, gp in enumerate(cands):
                reports[i] = analyze_pair(g, gp)
        tracker = _Tracker(g, lambda i: cands[i])
        tracker._jr = {i: r.balanced_flux_gate.feasible for i, r in reports.items()}
        tracker._k = {i: r.toric_gate.feasible for i, r in reports.items()}
        for i, r in reports.items():
            tracker.feed(i, r.real_locus_dim)
        wr, wk = tracker.finish()
        return ScanResult(
            ambient, tracker.best_r, tracker.best_k,
            tuple(CandidateResult(cands[i], reports[i]) for i in wr),
            tuple(CandidateResult(cands[i], reports[i]) for i in wk),
            len(cands), False, "explicit-list", vertex_set,
        )

    m = len(gc.edges)
    if m > MAX_EXHAUSTIVE_EDGES and cap is None:
        raise EnumerationTooLarge(m)
    mode = "exhaustive" if cap is None else "capped"

    tracker = _Tracker(g, lambda ids: subgraph_from_edges(gc, ids))
    evaluated = 0
    stopped_early = False

    def consume(results) -> bool:
        nonlocal evaluated
        _, scored = results
        for ids, value in scored:
            if cap is not None and evaluated >= cap:
                return True
            evaluated += 1
            tracker.feed(ids, value)
        return False

    batches = _batches(m)
    if jobs <= 1:
        ctx = _Context(g, gc)
        for b in batches:
            if consume(_score_batch(ctx, *b)):
                break
            if early_exit and tracker.best_k == ambient:
                stopped_early = True
                break
    else:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                 initargs=(g, gc)) as pool:
            pending = []
            it = iter(batches)
            done = False
            while not done:
                while len(pending) < 2 * jobs:
                    b = next(it, None)
                    if b is None:
                        break
                    pending.append(pool.submit(_score_batch_worker, b))
                if not pending:
                    break
                fut = pending.pop(0)
                if consume(fut.result()):
                    done = True
                elif early_exit and tracker.best_k == ambient:
                    stopped_early = True
                    done = True
            for f in pending:
                f.cancel()

    wr, wk = tracker.finish()
    cache: dict = {}

    def result(ids):
        if ids not in cache:
            gp = subgraph_from_edges(gc, ids)
            cache[ids] = CandidateResult(gp, analyze_pair(g, gp))
        return cache[ids]

    return ScanResult(
        ambient, tracker.best_r, tracker.best_k,
        tuple(result(i) for i in wr), tuple(result(i) for i in wk),
        evaluated, stopped_early, mode, vertex_set,
    )
