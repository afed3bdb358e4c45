"""Euclidean embedded graphs (reaction networks) and their graph-level attributes."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Iterable, Sequence

from .linalg import integer_rank

Vertex = tuple  # tuple[int, ...], nonnegative stoichiometric coefficients
Edge = tuple  # (source index, target index)


class GraphError(ValueError):
    """Raised when an :class:`EGraph` would violate its invariants."""


class SpeciesMismatchError(ValueError):
    """Two graphs were combined that do not share a species table."""


def vertex_sort_key(coords: Vertex) -> tuple:
    # total degree first, then lexicographic with the first species largest
    # (X before Y, X + 2Y before 3Y)
    return (sum(coords), tuple(-c for c in coords))


class EGraph:
    """Directed graph whose vertices are integer lattice points.

    Instances are immutable and canonical: vertices are sorted by
    :func:`vertex_sort_key` and edges by ``(source, target)`` index, so two
    graphs with the same species order, vertex set and edge set compare equal.
    Isolated vertices may be stored; they take no part in any dimension count.
    """

    def __init__(
        self,
        species: Sequence[str],
        vertices: Iterable[Sequence[int]],
        edges: Iterable[tuple[int, int]] = (),
    ):
        species = tuple(species)
        if not species:
            raise GraphError("at least one species is required")
        if any(not isinstance(s, str) or not s for s in species):
            raise GraphError("species names must be non-empty strings")
        if len(set(species)) != len(species):
            raise GraphError(f"duplicate species in {species}")
        verts = [tuple(int(c) for c in v) for v in vertices]
        for v in verts:
            if len(v) != len(species):
                raise GraphError(f"vertex {v} has {len(v)} coordinates, expected {len(species)}")
            if any(c < 0 for c in v):
                raise GraphError(f"vertex {v} has a negative coordinate")
        if len(set(verts)) != len(verts):
            raise GraphError("duplicate vertices")

        order = sorted(range(len(verts)), key=lambda i: vertex_sort_key(verts[i]))
        remap = {old: new for new, old in enumerate(order)}
        canon_edges = set()
        for s, t in edges:
            if not (0 <= s < len(verts) and 0 <= t < len(verts)):
                raise GraphError(f"edge ({s}, {t}) refers to a missing vertex")
            if s == t:
                raise GraphError(f"self-loop at vertex {verts[s]}")
            e = (remap[s], remap[t])
            if e in canon_edges:
                raise GraphError(f"duplicate edge {verts[s]} -> {verts[t]}")
            canon_edges.add(e)

        self.species = species
        self.vertices = tuple(verts[i] for i in order)
        self.edges = tuple(sorted(canon_edges))

    @classmethod
    def from_reactions(
        cls,
        species: Sequence[str],
        reactions: Iterable[tuple[Sequence[int], Sequence[int]]],
        vertices: Iterable[Sequence[int]] = (),
    ) -> EGraph:
        """Build a graph from ``(source_coords, target_coords)`` pairs."""
        index: dict[Vertex, int] = {}
        for v in vertices:
            index.setdefault(tuple(v), len(index))
        edges = []
        for src, tgt in reactions:
            s = index.setdefault(tuple(src), len(index))
            t = index.setdefault(tuple(tgt), len(index))
            edges.append((s, t))
        return cls(species, list(index), edges)

    # -- value semantics -----------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, EGraph):
            return NotImplemented
        return (self.species, self.vertices, self.edges) == (
            other.species, other.vertices, other.edges)

    def __hash__(self) -> int:
        return hash((self.species, self.vertices, self.edges))

    def __repr__(self) -> str:
        return (f"EGraph(species={self.species}, |V|={len(self.vertices)}, "
                f"|E|={len(self.edges)})")

    def __setattr__(self, name, value):
        if name in ("species", "vertices", "edges") and name in self.__dict__:
            raise AttributeError("EGraph is immutable")
        object.__setattr__(self, name, value)

    # -- derived data ----------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.species)

    @cached_property
    def vertex_index(self) -> dict[Vertex, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in self.vertices]
        for k, (s, _) in enumerate(self.edges):
            out[s].append(k)
        return tuple(tuple(o) for o in out)

    @cached_property
    def in_edges(self) -> tuple[tuple[int, ...], ...]:
        inc = [[] for _ in self.vertices]
        for k, (_, t) in enumerate(self.edges):
            inc[t].append(k)
        return tuple(tuple(i) for i in inc)

    @cached_property
    def reaction_vectors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(b - a for a, b in zip(self.vertices[s], self.vertices[t]))
            for s, t in self.edges
        )

    @property
    def source_vertices(self) -> tuple[int, ...]:
        return tuple(i for i, o in enumerate(self.out_edges) if o)

    @property
    def active_vertices(self) -> tuple[int, ...]:
        """Vertices incident to at least one edge."""
        return tuple(i for i in range(len(self.vertices))
                     if self.out_edges[i] or self.in_edges[i])

    def edge_coords(self, k: int) -> tuple[Vertex, Vertex]:
        s, t = self.edges[k]
        return self.vertices[s], self.vertices[t]

    def edge_index(self, source: Vertex, target: Vertex) -> int | None:
        s = self.vertex_index.get(tuple(source))
        t = self.vertex_index.get(tuple(target))
        if s is None or t is None:
            return None
        try:
            return self.edges.index((s, t))
        except ValueError:
            return None

    def reorder_species(self, species: Sequence[str]) -> EGraph:
        """Same graph with coordinates permuted to the given species order."""
        species = tuple(species)
        if sorted(species) != sorted(self.species):
            raise SpeciesMismatchError(
                f"species {list(self.species)} cannot be reordered to {list(species)}")
        perm = [self.species.index(s) for s in species]
        verts = [tuple(v[p] for p in perm) for v in self.vertices]
        return EGraph(species, verts, self.edges)


def require_same_species(g: EGraph, h: EGraph) -> None:
    if g.species != h.species:
        raise SpeciesMismatchError(
            f"species tables differ: {list(g.species)} vs {list(h.species)}")


# ---------------------------------------------------------------------------
# linkage classes and strong connectivity


@dataclass(frozen=True)
class LinkageDecomposition:
    classes: tuple[tuple[int, ...], ...]
    class_edges: tuple[tuple[int, ...], ...]
    strongly_connected: tuple[bool, ...]
    isolated: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.classes)


def strongly_connected_components(nodes: Sequence[int], succ: dict[int, list[int]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative, for a small directed graph."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def linkage_classes(g: EGraph) -> LinkageDecomposition:
    active = g.active_vertices
    parent = {v: v for v in active}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for s, t in g.edges:
        parent[find(s)] = find(t)
    groups: dict[int, list[int]] = {}
    for v in active:
        groups.setdefault(find(v), []).append(v)
    classes = sorted(groups.values())
    member = {v: c for c, vs in enumerate(classes) for v in vs}
    class_edges = [[] for _ in classes]
    for k, (s, _) in enumerate(g.edges):
        class_edges[member[s]].append(k)

    succ: dict[int, list[int]] = {}
    for s, t in g.edges:
        succ.setdefault(s, []).append(t)
    flags = []
    for vs in classes:
        comps = strongly_connected_components(vs, succ)
        flags.append(len(comps) == 1)
    isolated = tuple(i for i in range(len(g.vertices)) if i not in member)
    return LinkageDecomposition(
        tuple(tuple(c) for c in classes),
        tuple(tuple(e) for e in class_edges),
        tuple(flags),
        isolated,
    )


def is_weakly_reversible(g: EGraph) -> bool:
    return all(linkage_classes(g).strongly_connected)


def stoichiometric_dim(g: EGraph) -> int:
    return integer_rank(g.reaction_vectors)


def complete_graph(g: EGraph, mode: str = "sources") -> EGraph:
    """Complete directed graph on the source vertices (default) or all vertices of ``g``."""
    if mode == "sources":
        verts = [g.vertices[i] for i in g.source_vertices]
    elif mode == "all":
        verts = list(g.vertices)
    else:
        raise ValueError(f"unknown vertex-set mode {mode!r}; expected 'sources' or 'all'")
    return EGraph(g.species, verts, permutations(range(len(verts)), 2))


def is_subgraph(sub: EGraph, sup: EGraph) -> bool:
    require_same_species(sub, sup)
    if not set(sub.vertices) <= set(sup.vertices):
        return False
    sup_edges = {sup.edge_coords(k) for k in range(len(sup.edges))}
    return all(sub.edge_coords(k) in sup_edges for k in range(len(sub.edges)))


def subgraph_from_edges(g: EGraph, edge_ids: Iterable[int]) -> EGraph:
    """Subgraph spanned by the given edges; its vertices are their endpoints."""
    return EGraph.from_reactions(g.species, (g.edge_coords(k) for k in edge_ids))
