"""Dimensions of the flux, rate and locus spaces attached to a pair of graphs.

Throughout, ``g`` is the original network and ``gprime`` a candidate
weakly reversible realization graph on the same species. Per-edge vectors
(rates, fluxes, perturbations) follow the canonical edge order of the graph
they live on.

The main entry point is :func:`analyze_pair`, which assembles a
:class:`DimensionReport`:

* ``realizable_flux_dim``: fluxes on ``gprime`` whose net vector at every
  vertex is realizable (with real coefficients) on ``g``, computed vertex by
  vertex as ``sum dim ker(A_y B_y)``;
* ``balanced_flux_dim``: the subset of those that are positive and balanced
  (in-flow = out-flow at every vertex), equal to the above minus
  ``|V'| - #linkage classes`` when nonempty;
* ``real_locus_dim``: dimension of the set of real rate vectors on ``g`` that
  are dynamically equivalent to a complex-balanced system on ``gprime``;
* ``locus_dim``: the same restricted to positive rates, reported only when the
  exact LP certifies that set is nonempty.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .linalg import (
    FeasibilityCertificate,
    RationalMatrix,
    kernel_basis,
    orthogonal_complement_basis,
    positive_kernel_feasible,
    rank,
)
from .network import (
    EGraph,
    is_weakly_reversible,
    linkage_classes,
    require_same_species,
    stoichiometric_dim,
)


class NotWeaklyReversibleWarning(UserWarning):
    pass


def _values(g: EGraph, values: Sequence, what: str = "edge values") -> tuple[Fraction, ...]:
    vals = tuple(Fraction(v) for v in values)
    if len(vals) != len(g.edges):
        raise ValueError(f"{what}: got {len(vals)} entries for {len(g.edges)} edges")
    return vals


def _embed(g: EGraph, local: Sequence[Fraction], edge_ids: Sequence[int]) -> tuple[Fraction, ...]:
    v = [Fraction(0)] * len(g.edges)
    for x, k in zip(local, edge_ids):
        v[k] = x
    return tuple(v)


def source_matrix(g: EGraph, vertex: int) -> RationalMatrix:
    """``n x q`` matrix whose columns are the reaction vectors leaving ``vertex``."""
    cols = [g.reaction_vectors[k] for k in g.out_edges[vertex]]
    return RationalMatrix.from_columns(cols, g.n) if cols else RationalMatrix.zeros(g.n, 0)


# ---------------------------------------------------------------------------
# single-graph spaces


def dynamics_kernel_basis(g: EGraph) -> list[tuple[Fraction, ...]]:
    """Rate perturbations that leave the mass-action right-hand side unchanged.

    The space splits over source vertices: at each one the perturbation of the
    outgoing rates must lie in the kernel of :func:`source_matrix`. Each basis
    vector is supported on the out-edges of a single vertex.
    """
    basis = []
    for v in g.source_vertices:
        out = g.out_edges[v]
        for local in kernel_basis(source_matrix(g, v)):
            basis.append(_embed(g, local, out))
    return basis


def incidence_matrix(g: EGraph) -> RationalMatrix:
    """``|V| x |E|`` matrix: +1 where the vertex is the source, -1 where it is the target."""
    rows = [[0] * len(g.edges) for _ in g.vertices]
    for k, (s, t) in enumerate(g.edges):
        rows[s][k] = 1
        rows[t][k] = -1
    return RationalMatrix(rows, len(g.edges))


def _per_vertex_net_rows(g: EGraph) -> RationalMatrix:
    # n rows per source vertex: sum over its out-edges of x_e * (y' - y)
    rows = []
    for v in g.source_vertices:
        out = g.out_edges[v]
        for i in range(g.n):
            row = [0] * len(g.edges)
            for k in out:
                row[k] = g.reaction_vectors[k][i]
            rows.append(row)
    return RationalMatrix(rows, len(g.edges))


def balance_kernel_basis(g: EGraph) -> list[tuple[Fraction, ...]]:
    """Dynamics-preserving perturbations that also keep every vertex balanced."""
    stacked = RationalMatrix.vstack([_per_vertex_net_rows(g), incidence_matrix(g)], len(g.edges))
    return kernel_basis(stacked)


def flux_balance_matrix(gprime: EGraph) -> RationalMatrix:
    """Rows of the in-flow = out-flow conditions, one per non-isolated vertex.

    Its kernel is the space of (real) balanced fluxes; its rank is
    ``|V'| - #linkage classes``.
    """
    inc = incidence_matrix(gprime)
    return RationalMatrix([inc.row(v) for v in gprime.active_vertices], len(gprime.edges))


# ---------------------------------------------------------------------------
# equivalences


def net_vectors(g: EGraph, weights: Sequence) -> dict[tuple[int, ...], tuple[Fraction, ...]]:
    """Per-source-vertex sums ``sum_{y -> y'} w (y' - y)``, keyed by vertex coordinates."""
    w = _values(g, weights)
    net = {}
    for v in g.source_vertices:
        acc = [Fraction(0)] * g.n
        for k in g.out_edges[v]:
            for i, c in enumerate(g.reaction_vectors[k]):
                acc[i] += w[k] * c
        net[g.vertices[v]] = tuple(acc)
    return net


def _same_net(g, w, g2, w2) -> bool:
    require_same_species(g, g2)
    a, b = net_vectors(g, w), net_vectors(g2, w2)
    zero = tuple(Fraction(0) for _ in range(g.n))
    return all(a.get(y, zero) == b.get(y, zero) for y in set(a) | set(b))


def is_dynamically_equivalent(g: EGraph, k: Sequence, g2: EGraph, k2: Sequence) -> bool:
    """True iff ``(g, k)`` and ``(g2, k2)`` have the same net reaction vector at every vertex."""
    return _same_net(g, k, g2, k2)


def is_flux_equivalent(g: EGraph, flux: Sequence, g2: EGraph, flux2: Sequence) -> bool:
    return _same_net(g, flux, g2, flux2)


def monomial(x: Sequence[Fraction], y: Sequence[int]) -> Fraction:
    out = Fraction(1)
    for xi, yi in zip(x, y):
        out *= Fraction(xi) ** yi
    return out


def _positive_state(g: EGraph, x: Sequence) -> tuple[Fraction, ...]:
    x = tuple(Fraction(v) for v in x)
    if len(x) != g.n:
        raise ValueError(f"state has {len(x)} entries, expected {g.n}")
    if any(v <= 0 for v in x):
        raise ValueError("state must be strictly positive")
    return x


def mass_action_fluxes(g: EGraph, k: Sequence, x: Sequence) -> tuple[Fraction, ...]:
    """Edge fluxes ``k_e * x^(source of e)``."""
    x = _positive_state(g, x)
    k = _values(g, k, "rates")
    return tuple(k[e] * monomial(x, g.vertices[s]) for e, (s, _) in enumerate(g.edges))


def is_complex_balanced_at(g: EGraph, k: Sequence, x: Sequence) -> bool:
    """True iff in-flow equals out-flow at every vertex of ``(g, k)`` at state ``x``."""
    flux = mass_action_fluxes(g, k, x)
    return all(v == 0 for v in incidence_matrix(g) @ flux)


def dyn_flux_correspondence_check(g: EGraph, k: Sequence, g2: EGraph, k2: Sequence,
                                  x: Sequence) -> bool:
    """Flux equivalence of the mass-action fluxes of both systems at state ``x``."""
    return is_flux_equivalent(g, mass_action_fluxes(g, k, x), g2, mass_action_fluxes(g2, k2, x))


def scale_flux_by_source(gprime: EGraph, flux: Sequence, weights: Sequence) -> tuple[Fraction, ...]:
    """Multiply each edge's flux by the weight of its source vertex."""
    flux = _values(gprime, flux, "flux")
    w = tuple(Fraction(v) for v in weights)
    if len(w) != len(gprime.vertices):
        raise ValueError(f"got {len(w)} weights for {len(gprime.vertices)} vertices")
    return tuple(f * w[s] for f, (s, _) in zip(flux, gprime.edges))


# ---------------------------------------------------------------------------
# realizability of gprime fluxes on g


@dataclass(frozen=True)
class VertexKernelRow:
    vertex: int  # index into gprime.vertices
    coords: tuple[int, ...]
    p: int  # rows of A_y: codimension of the span of g's reactions at y
    q: int  # out-degree of y in gprime
    kernel_dim: int


@dataclass(frozen=True)
class VertexBlock:
    vertex: int
    coords: tuple[int, ...]
    complement: RationalMatrix  # A_y, p x n
    directions: RationalMatrix  # B_y, n x q

    @property
    def product(self) -> RationalMatrix:
        return self.complement @ self.directions


def realizability_blocks(g: EGraph, gprime: EGraph) -> list[VertexBlock]:
    """Per-vertex matrices ``A_y`` (complement of g's span at y) and ``B_y``.

    A vertex of ``gprime`` that is not a source of ``g`` has span ``{0}``, so its
    ``A_y`` is the identity.
    """
    require_same_species(g, gprime)
    blocks = []
    for v in gprime.active_vertices:
        y = gprime.vertices[v]
        gv = g.vertex_index.get(y)
        span = [g.reaction_vectors[k] for k in g.out_edges[gv]] if gv is not None else []
        comp = orthogonal_complement_basis(span, g.n)
        a = RationalMatrix(comp, g.n)
        blocks.append(VertexBlock(v, y, a, source_matrix(gprime, v)))
    return blocks


def _warn_if_not_wr(gprime: EGraph) -> bool:
    wr = is_weakly_reversible(gprime)
    if not wr:
        warnings.warn("realization graph is not weakly reversible; balanced-flux "
                      "quantities will be reported as absent",
                      NotWeaklyReversibleWarning, stacklevel=3)
    return wr


def realizable_flux_dim(g: EGraph, gprime: EGraph) -> tuple[int, list[VertexKernelRow]]:
    """Dimension of the space of gprime fluxes realizable on g, vertex by vertex."""
    _warn_if_not_wr(gprime)
    rows = []
    for b in realizability_blocks(g, gprime):
        q = b.directions.cols
        kd = q - rank(b.product) if b.complement.rows else q
        rows.append(VertexKernelRow(b.vertex, b.coords, b.complement.rows, q, kd))
    return sum(r.kernel_dim for r in rows), rows


def realizability_matrix(g: EGraph, gprime: EGraph) -> RationalMatrix:
    """Stack of the ``A_y B_y`` blocks, each acting on the out-edges of its vertex."""
    rows = []
    for b in realizability_blocks(g, gprime):
        prod = b.product
        out = gprime.out_edges[b.vertex]
        for i in range(prod.rows):
            row = [Fraction(0)] * len(gprime.edges)
            for j, k in enumerate(out):
                row[k] = prod[i, j]
            rows.append(row)
    return RationalMatrix(rows, len(gprime.edges))


def _equivalence_system(g: EGraph, gprime: EGraph) -> RationalMatrix:
    """Rows ``sum_E J (y - y0) - sum_E' J' (y' - y0) = 0`` over unknowns ``(J, J')``.

    One block of ``n`` rows per vertex of ``V ∪ V'`` (by coordinates).
    """
    require_same_species(g, gprime)
    ne, npr = len(g.edges), len(gprime.edges)
    verts = sorted(set(g.vertices) | set(gprime.vertices))
    rows = []
    for y in verts:
        gv, pv = g.vertex_index.get(y), gprime.vertex_index.get(y)
        out_g = g.out_edges[gv] if gv is not None else ()
        out_p = gprime.out_edges[pv] if pv is not None else ()
        if not out_g and not out_p:
            continue
        for i in range(g.n):
            row = [0] * (ne + npr)
            for k in out_g:
                row[k] = g.reaction_vectors[k][i]
            for k in out_p:
                row[ne + k] = -gprime.reaction_vectors[k][i]
            rows.append(row)
    return RationalMatrix(rows, ne + npr)


def realizable_flux_dim_direct(g: EGraph, gprime: EGraph) -> int:
    """Same dimension as :func:`realizable_flux_dim`, straight from the definition.

    The realizable fluxes are the projection onto the ``J'`` coordinates of the
    kernel of the joint equivalence system; the fibre over ``J' = 0`` is the
    dynamics-preserving space of ``g``. No orthogonal complements are used.
    """
    joint = _equivalence_system(g, gprime)
    return (joint.cols - rank(joint)) - len(dynamics_kernel_basis(g))


def balanced_realizable_system_dim(g: EGraph, gprime: EGraph) -> int:
    """Dimension of {balanced fluxes} ∩ {realizable fluxes}, from the joint system."""
    joint = _equivalence_system(g, gprime)
    ne = len(g.edges)
    bal = flux_balance_matrix(gprime)
    pad = RationalMatrix([[0] * ne + list(r) for r in bal], joint.cols)
    full = RationalMatrix.vstack([joint, pad], joint.cols)
    return (full.cols - rank(full)) - len(dynamics_kernel_basis(g))


# ---------------------------------------------------------------------------
# nonemptiness gates


def balanced_flux_certificate(g: EGraph, gprime: EGraph) -> FeasibilityCertificate:
    """Exact LP: is there a positive balanced flux on gprime realizable on g?

    The witness is that flux.
    """
    cons = RationalMatrix.vstack(
        [flux_balance_matrix(gprime), realizability_matrix(g, gprime)], len(gprime.edges))
    return positive_kernel_feasible(cons)


def toric_realization_certificate(g: EGraph, gprime: EGraph) -> FeasibilityCertificate:
    """Exact LP: is some positive rate vector on g equivalent to a complex-balanced gprime system?

    Unknowns are ``(J', k)``: a balanced positive flux ``J'`` on gprime and
    positive rates ``k`` on g, flux equivalent to ``J'``. Rescaling by monomials
    moves any complex-balanced steady state to the all-ones state, where
    ``k' = J'`` is complex balanced and flux equivalence is dynamical
    equivalence. Use :func:`split_toric_witness` to read the witness.
    """
    joint = _equivalence_system(g, gprime)
    ne, npr = len(g.edges), len(gprime.edges)
    # reorder columns to (J', k)
    rows = [list(r[ne:]) + list(r[:ne]) for r in joint]
    rows += [list(r) + [0] * ne for r in flux_balance_matrix(gprime)]
    return positive_kernel_feasible(RationalMatrix(rows, ne + npr))


def split_toric_witness(gprime: EGraph, cert: FeasibilityCertificate):
    """``(flux on gprime, rates on g)`` from a :func:`toric_realization_certificate` witness."""
    if not cert.feasible:
        raise ValueError("certificate is infeasible")
    npr = len(gprime.edges)
    return cert.witness[:npr], cert.witness[npr:]


def balanced_realizable_flux_dim(g: EGraph, gprime: EGraph) -> int | None:
    """Dimension of positive balanced realizable fluxes, or None when that set is empty."""
    if not balanced_flux_certificate(g, gprime):
        return None
    total, _ = realizable_flux_dim(g, gprime)
    return total - len(gprime.active_vertices) + linkage_classes(gprime).count


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class DimensionReport:
    stoich_dim: int  # of gprime
    dynamics_kernel_dim: int  # of g
    balance_kernel_dim: int  # of gprime
    realizable_flux_dim: int
    linkage_classes: int  # of gprime
    vertex_count: int  # non-isolated vertices of gprime
    weakly_reversible: bool  # gprime
    balanced_flux_dim: int | None
    real_locus_dim: int | None
    locus_dim: int | None
    balanced_flux_gate: FeasibilityCertificate
    toric_gate: FeasibilityCertificate
    vertex_rows: tuple[VertexKernelRow, ...] = field(default=())


def locus_dim_formula(balanced_flux_dim: int, stoich_dim: int, dynamics_kernel_dim: int,
                      balance_kernel_dim: int) -> int:
    # rates on g add the dynamics-preserving directions of g; complex-balanced
    # rates on gprime that give identical dynamics are counted once
    return balanced_flux_dim + stoich_dim + dynamics_kernel_dim - balance_kernel_dim


def analyze_pair(g: EGraph, gprime: EGraph) -> DimensionReport:
    """All dimensions and both nonemptiness certificates for the pair."""
    require_same_species(g, gprime)
    wr = _warn_if_not_wr(gprime)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NotWeaklyReversibleWarning)
        fjr, rows = realizable_flux_dim(g, gprime)
    lc = linkage_classes(gprime).count
    nv = len(gprime.active_vertices)
    s = stoichiometric_dim(gprime)
    d0 = len(dynamics_kernel_basis(g))
    j0 = len(balance_kernel_basis(gprime))

    jr_gate = balanced_flux_certificate(g, gprime) if wr else FeasibilityCertificate(False)
    if jr_gate:
        jr = fjr - nv + lc
        real = locus_dim_formula(jr, s, d0, j0)
        k_gate = toric_realization_certificate(g, gprime)
    else:
        jr = real = None
        k_gate = FeasibilityCertificate(False)
    return DimensionReport(
        stoich_dim=s,
        dynamics_kernel_dim=d0,
        balance_kernel_dim=j0,
        realizable_flux_dim=fjr,
        linkage_classes=lc,
        vertex_count=nv,
        weakly_reversible=wr,
        balanced_flux_dim=jr,
        real_locus_dim=real,
        locus_dim=real if k_gate else None,
        balanced_flux_gate=jr_gate,
        toric_gate=k_gate,
        vertex_rows=tuple(rows),
    )
