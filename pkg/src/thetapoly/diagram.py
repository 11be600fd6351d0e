"""Combinatorial diagrams of links and spatial graphs.

A diagram is a set of directed arcs whose ends sit in the slots of nodes.
Nodes are crossings (4 slots) or graph vertices (any degree).  Slots are
listed counterclockwise.  At a crossing the under-strand enters at slot 0 and
leaves at slot 2; slots 1 and 3 carry the over-strand.  An arc with no ends is
a closed loop without crossings.

Planarity of the code is not checked.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

IN, OUT = "in", "out"
CROSSING, VERTEX = "crossing", "vertex"

# slot pairs joined by each smoothing of a crossing
A_SMOOTHING = ((0, 1), (2, 3))
B_SMOOTHING = ((0, 3), (1, 2))


class DiagramError(ValueError):
    """Structural problem with a diagram (broken invariant or bad surgery site)."""


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Node:
    id: str
    kind: str
    slots: tuple[tuple[str, str], ...]

    @property
    def degree(self) -> int:
        return len(self.slots)


Loc = tuple  # (node id, slot index)


class Diagram:
    """Immutable diagram.  ``kind`` is ``"link"``, ``"theta"`` or ``"graph"``.

    ``components`` (links) maps a component name to its arcs in traversal
    order; ``edges`` (theta curves) maps ``e1/e2/e3`` to arcs from v1 to v2.
    """

    def __init__(
        self,
        arcs: Sequence[str],
        nodes: Sequence[Node],
        kind: str = "link",
        components: Mapping[str, Sequence[str]] | None = None,
        edges: Mapping[str, Sequence[str]] | None = None,
    ):
        self.arcs = tuple(arcs)
        self.nodes = tuple(nodes)
        self.kind = kind
        self._node_by_id = {n.id: n for n in self.nodes}
        if len(self._node_by_id) != len(self.nodes):
            raise DiagramError("duplicate node id")
        if len(set(self.arcs)) != len(self.arcs):
            raise DiagramError("duplicate arc id")
        ends: dict[str, list] = {a: [None, None] for a in self.arcs}
        for n in self.nodes:
            for i, (a, e) in enumerate(n.slots):
                if a not in ends:
                    raise DiagramError(f"node {n.id} references unknown arc {a!r}")
                k = 0 if e == OUT else 1
                if ends[a][k] is not None:
                    raise DiagramError(f"arc {a!r} attached twice at its {'tail' if k == 0 else 'head'}")
                ends[a][k] = (n.id, i)
        self.ends: dict[str, tuple] = {a: tuple(v) for a, v in ends.items()}
        self.components = {k: tuple(v) for k, v in (components or {}).items()}
        self.edges = {k: tuple(v) for k, v in (edges or {}).items()}

    # -- queries -----------------------------------------------------------
    def node(self, nid: str) -> Node:
        return self._node_by_id[nid]

    @property
    def crossings(self) -> tuple[Node, ...]:
        return tuple(n for n in self.nodes if n.kind == CROSSING)

    @property
    def vertices(self) -> tuple[Node, ...]:
        return tuple(n for n in self.nodes if n.kind == VERTEX)

    @property
    def n_crossings(self) -> int:
        return sum(1 for n in self.nodes if n.kind == CROSSING)

    def tail(self, arc: str):
        return self.ends[arc][0]

    def head(self, arc: str):
        return self.ends[arc][1]

    def is_free_loop(self, arc: str) -> bool:
        return self.ends[arc] == (None, None)

    def slot(self, loc) -> tuple[str, str]:
        nid, i = loc
        return self._node_by_id[nid].slots[i]

    def crossing_sign(self, nid: str) -> int:
        """+1 when the under-strand direction is the over-strand direction
        turned a quarter counterclockwise; with slots read counterclockwise
        from the incoming under-strand this means the over-strand enters at
        slot 3."""
        n = self._node_by_id[nid]
        if n.kind != CROSSING:
            raise DiagramError(f"{nid} is not a crossing")
        e1, e3 = n.slots[1][1], n.slots[3][1]
        if e1 == e3:
            raise DiagramError(f"over-strand at {nid} is not consistently directed")
        return 1 if e3 == IN else -1

    def arc_label(self, arc: str) -> str | None:
        return self._arc_to_edge.get(arc)

    @cached_property
    def _arc_to_edge(self) -> dict[str, str]:
        return {a: k for k, arcs in self.edges.items() for a in arcs}

    @cached_property
    def _arc_to_component(self) -> dict[str, str]:
        return {a: k for k, arcs in self.components.items() for a in arcs}

    def component_of(self, arc: str) -> str | None:
        return self._arc_to_component.get(arc)

    @cached_property
    def indexed(self) -> "IndexedDiagram":
        return IndexedDiagram.from_diagram(self)

    def __repr__(self) -> str:
        return (
            f"Diagram(kind={self.kind!r}, arcs={len(self.arcs)}, "
            f"crossings={self.n_crossings}, vertices={len(self.vertices)})"
        )


@dataclass(frozen=True)
class IndexedDiagram:
    """Integer form for state sums: arcs are numbered, nodes list arc numbers."""

    n_arcs: int
    crossings: tuple[tuple[int, int, int, int], ...]
    vertices: tuple[tuple[int, ...], ...]
    free_loops: int
    crossing_ids: tuple[str, ...]

    @classmethod
    def from_diagram(cls, d: Diagram) -> IndexedDiagram:
        attached = [a for a in d.arcs if not d.is_free_loop(a)]
        idx = {a: i for i, a in enumerate(attached)}
        xs = tuple(tuple(idx[a] for a, _ in n.slots) for n in d.crossings)
        vs = tuple(tuple(idx[a] for a, _ in n.slots) for n in d.vertices)
        return cls(len(attached), xs, vs, len(d.arcs) - len(attached), tuple(n.id for n in d.crossings))


# ---------------------------------------------------------------------------
# abstract graphs


@dataclass(frozen=True)
class AbstractGraph:
    """Multigraph on vertices ``0..n_vertices-1``; loops and parallel edges allowed."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for u, v in self.edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ValueError(f"edge ({u}, {v}) out of range")

    @classmethod
    def loop(cls) -> AbstractGraph:
        return cls(1, ((0, 0),))

    @classmethod
    def theta(cls, k: int = 3) -> AbstractGraph:
        return cls(2, ((0, 1),) * k)

    def disjoint_union(self, other: AbstractGraph) -> AbstractGraph:
        n = self.n_vertices
        return AbstractGraph(n + other.n_vertices, self.edges + tuple((u + n, v + n) for u, v in other.edges))


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def count_components(n: int, edges: Iterable[tuple[int, int]]) -> int:
    parent = list(range(n))
    comps = n
    for u, v in edges:
        ru, rv = _find(parent, u), _find(parent, v)
        if ru != rv:
            parent[ru] = rv
            comps -= 1
    return comps


def graph_mu_beta(g: AbstractGraph) -> tuple[int, int]:
    """Number of connected components and first Betti number."""
    mu = count_components(g.n_vertices, g.edges)
    return mu, len(g.edges) - g.n_vertices + mu


# ---------------------------------------------------------------------------
# state resolution


def resolve_bracket_state(d: Diagram, state: Sequence[str]) -> int:
    """Loops left after smoothing crossing ``i`` by ``state[i]`` in {"A", "B"}.

    Crossings are taken in ``d.crossings`` order.
    """
    if d.vertices:
        raise DiagramError("bracket states need a link diagram (graph vertices present)")
    ix = d.indexed
    if len(state) != len(ix.crossings):
        raise ValueError("state length differs from crossing count")
    parent = list(range(ix.n_arcs))
    comps = ix.n_arcs
    for s, x in zip(state, ix.crossings):
        pairs = A_SMOOTHING if s == "A" else B_SMOOTHING
        for i, j in pairs:
            ru, rv = _find(parent, x[i]), _find(parent, x[j])
            if ru != rv:
                parent[ru] = rv
                comps -= 1
    return comps + ix.free_loops


def resolve_yamada_state(d: Diagram, state: Sequence[str]) -> AbstractGraph:
    """Abstract graph of ``D_s``: ``+``/``-`` smooth a crossing (A resp. B
    smoothing), ``0`` turns it into a degree-4 vertex."""
    ix = d.indexed
    if len(state) != len(ix.crossings):
        raise ValueError("state length differs from crossing count")
    return _yamada_graph(ix, state)


def _yamada_graph(ix: IndexedDiagram, state: Sequence[str]) -> AbstractGraph:
    parent = list(range(ix.n_arcs))
    vertex_slots: list[tuple[int, ...]] = list(ix.vertices)
    for s, x in zip(state, ix.crossings):
        if s == "0":
            vertex_slots.append(x)
            continue
        for i, j in A_SMOOTHING if s == "+" else B_SMOOTHING:
            ru, rv = _find(parent, x[i]), _find(parent, x[j])
            if ru != rv:
                parent[ru] = rv
    ends: dict[int, list[int]] = {}
    for v, arcs in enumerate(vertex_slots):
        for a in arcs:
            ends.setdefault(_find(parent, a), []).append(v)
    n = len(vertex_slots)
    edges = []
    for r, vs in ends.items():
        # each strand class meets vertices at exactly its two ends
        edges.append((vs[0], vs[1]))
    roots = {_find(parent, a) for a in range(ix.n_arcs)}
    loops = len(roots - ends.keys()) + ix.free_loops
    edges.extend((n + k, n + k) for k in range(loops))
    return AbstractGraph(n + loops, tuple(edges))


def underlying_graph(d: Diagram) -> AbstractGraph:
    """The abstract graph of the diagram with every crossing forgotten."""
    ix = d.indexed
    parent = list(range(ix.n_arcs))
    for x in ix.crossings:
        for i, j in ((0, 2), (1, 3)):
            ru, rv = _find(parent, x[i]), _find(parent, x[j])
            if ru != rv:
                parent[ru] = rv
    ends: dict[int, list[int]] = {}
    for v, arcs in enumerate(ix.vertices):
        for a in arcs:
            ends.setdefault(_find(parent, a), []).append(v)
    n = len(ix.vertices)
    edges = [(vs[0], vs[1]) for vs in ends.values()]
    roots = {_find(parent, a) for a in range(ix.n_arcs)}
    loops = len(roots - ends.keys()) + ix.free_loops
    edges.extend((n + k, n + k) for k in range(loops))
    return AbstractGraph(n + loops, tuple(edges))


def writhe(d: Diagram) -> int:
    return sum(d.crossing_sign(x.id) for x in d.crossings)


def link_components(d: Diagram) -> list[tuple[str, ...]]:
    """Closed strands of a link diagram, each in traversal order."""
    seen: set[str] = set()
    comps = []
    for a in d.arcs:
        if a in seen:
            continue
        comp = []
        cur = a
        while cur not in seen:
            seen.add(cur)
            comp.append(cur)
            h = d.head(cur)
            if h is None:
                break
            n = d.node(h[0])
            if n.kind != CROSSING:
                raise DiagramError("graph vertices present")
            nxt, e = n.slots[(h[1] + 2) % 4]
            if e != OUT:
                raise DiagramError(f"strand through {n.id} is not consistently directed")
            cur = nxt
        comps.append(tuple(comp))
    return comps


# ---------------------------------------------------------------------------
# mutable builder used by every surgery


class DiagramBuilder:
    """Mutable diagram used for surgery; ``build`` freezes it."""

    def __init__(self):
        self.arcs: dict[str, list] = {}  # arc -> [tail loc, head loc]
        self.nodes: dict[str, list] = {}  # node -> [kind, slot list]
        self._counter = itertools.count()

    @classmethod
    def from_diagram(cls, d: Diagram) -> DiagramBuilder:
        b = cls()
        for a in d.arcs:
            b.arcs[a] = list(d.ends[a])
        for n in d.nodes:
            b.nodes[n.id] = [n.kind, list(n.slots)]
        return b

    def fresh(self, prefix: str) -> str:
        while True:
            name = f"{prefix}{next(self._counter)}"
            if name not in self.arcs and name not in self.nodes:
                return name

    def add_arc(self, name: str | None = None) -> str:
        name = name or self.fresh("a")
        if name in self.arcs:
            raise DiagramError(f"arc {name!r} exists")
        self.arcs[name] = [None, None]
        return name

    def add_node(self, kind: str, degree: int, name: str | None = None) -> str:
        name = name or self.fresh("x" if kind == CROSSING else "v")
        if name in self.nodes:
            raise DiagramError(f"node {name!r} exists")
        self.nodes[name] = [kind, [None] * degree]
        return name

    def attach(self, arc: str, end: str, node: str, slot: int) -> None:
        slots = self.nodes[node][1]
        if slots[slot] is not None:
            raise DiagramError(f"slot {slot} of {node} already used")
        k = 0 if end == OUT else 1
        if self.arcs[arc][k] is not None:
            raise DiagramError(f"arc {arc} already attached at that end")
        slots[slot] = (arc, end)
        self.arcs[arc][k] = (node, slot)

    def detach(self, arc: str, end: str):
        k = 0 if end == OUT else 1
        loc = self.arcs[arc][k]
        if loc is not None:
            self.nodes[loc[0]][1][loc[1]] = None
        self.arcs[arc][k] = None
        return loc

    def move_end(self, arc: str, end: str, node: str, slot: int):
        """Re-attach one end of ``arc``; returns the old location."""
        old = self.detach(arc, end)
        self.attach(arc, end, node, slot)
        return old

    def slot(self, node: str, i: int):
        return self.nodes[node][1][i]

    def reverse(self, arc: str) -> None:
        t, h = self.arcs[arc]
        self.arcs[arc] = [h, t]
        if h is not None:
            self.nodes[h[0]][1][h[1]] = (arc, OUT)
        if t is not None:
            self.nodes[t[0]][1][t[1]] = (arc, IN)

    def _strand_piece(self, arc: str, stop: str) -> list[str]:
        # arcs reachable from ``arc`` by passing straight through crossings other than ``stop``
        piece = [arc]
        seen = {arc}
        for k in (1, 0):  # forward through heads, backward through tails
            cur = arc
            while True:
                loc = self.arcs[cur][k]
                if loc is None or loc[0] == stop or self.nodes[loc[0]][0] != CROSSING:
                    break
                nxt = self.nodes[loc[0]][1][(loc[1] + 2) % 4]
                if nxt is None or nxt[0] in seen:
                    break
                cur = nxt[0]
                seen.add(cur)
                piece.append(cur)
        return piece

    def _splice(self, p: str, q: str) -> None:
        # p's head and q's tail sit at the junction; p absorbs q
        jp, jq = self.arcs[p][1], self.arcs[q][0]
        self.nodes[jp[0]][1][jp[1]] = None
        self.nodes[jq[0]][1][jq[1]] = None
        if p == q:
            self.arcs[p] = [None, None]
            return
        qh = self.arcs[q][1]
        self.arcs[p][1] = qh
        if qh is not None:
            self.nodes[qh[0]][1][qh[1]] = (p, IN)
        del self.arcs[q]

    def join(self, node: str, i: int, j: int) -> str:
        """Connect the arcs in slots ``i`` and ``j`` of ``node`` into one strand,
        reversing a strand piece if their directions clash.  Frees both slots."""
        si, sj = self.slot(node, i), self.slot(node, j)
        if si is None or sj is None:
            raise DiagramError(f"cannot join empty slot at {node}")
        (p, ep), (q, eq) = si, sj
        if p == q:
            self._splice(p, p)
            return p
        if ep == eq:
            for a in self._strand_piece(q, node):
                self.reverse(a)
            q, eq = self.slot(node, j)
        if ep == IN:
            self._splice(p, q)
            return p
        self._splice(q, p)
        return q

    def remove_node(self, node: str) -> None:
        if any(s is not None for s in self.nodes[node][1]):
            raise DiagramError(f"node {node} still has attached arcs")
        del self.nodes[node]

    def erase_crossing(self, node: str) -> None:
        """Forget the crossing: both strands pass straight through."""
        self.join(node, 0, 2)
        self.join(node, 1, 3)
        self.remove_node(node)

    def smooth(self, node: str, kind: str) -> None:
        """Replace a crossing by a smoothing ("A"/"B") or a 4-valent vertex ("0")."""
        if self.nodes[node][0] != CROSSING:
            raise DiagramError(f"{node} is not a crossing")
        if kind == "0":
            self.nodes[node][0] = VERTEX
            return
        for i, j in A_SMOOTHING if kind == "A" else B_SMOOTHING:
            self.join(node, i, j)
        self.remove_node(node)

    def delete_arc(self, arc: str) -> None:
        self.detach(arc, OUT)
        self.detach(arc, IN)
        del self.arcs[arc]

    def normalize_crossings(self) -> None:
        for nid, (kind, slots) in self.nodes.items():
            if kind != CROSSING:
                continue
            if slots[0] is not None and slots[0][1] == OUT:
                self._rotate(nid, 2)

    def _rotate(self, nid: str, r: int) -> None:
        slots = self.nodes[nid][1]
        new = slots[r:] + slots[:r]
        self.nodes[nid][1] = new
        for i, s in enumerate(new):
            if s is not None:
                a, e = s
                self.arcs[a][0 if e == OUT else 1] = (nid, i)

    def build(
        self,
        kind: str = "link",
        components: Mapping[str, Sequence[str]] | None = None,
        edges: Mapping[str, Sequence[str]] | None = None,
        order: Sequence[str] | None = None,
    ) -> Diagram:
        self.normalize_crossings()
        for nid, (_, slots) in self.nodes.items():
            if any(s is None for s in slots):
                raise DiagramError(f"free arc end at {nid}")
        nodes = [Node(nid, k, tuple(s)) for nid, (k, s) in self.nodes.items()]
        arcs = list(self.arcs)
        d = Diagram(arcs, nodes, kind=kind, components=components, edges=edges)
        if kind == "link" and components is None and not d.vertices:
            comps = link_components(d)
            d = Diagram(arcs, nodes, kind=kind, components={f"k{i + 1}": c for i, c in enumerate(comps)})
        return d


# ---------------------------------------------------------------------------
# local insertions


def insert_twist(
    b: DiagramBuilder,
    right: tuple[str, bool],
    left: tuple[str, bool],
    count: int,
    under: str,
) -> list[str]:
    """Insert ``count`` crossings between two adjacent parallel strands.

    ``right``/``left`` are ``(arc, upward)`` seen from the common bottom side;
    an upward strand is cut next to its tail, a downward one next to its head.
    The right strand crosses to the left at the first crossing.  ``under`` is
    ``"SN"`` when the strand starting bottom-right passes under, ``"WE"`` when
    it passes over.  Returns the new crossing ids, bottom to top.
    """
    if count <= 0:
        return []
    xs = [b.add_node(CROSSING, 4) for _ in range(count)]
    chains = {}
    for key, (arc, up) in (("p", right), ("q", left)):
        segs = [b.add_arc() for _ in range(count)] + [arc]
        # segs[0] takes over the original bottom end of ``arc``
        bottom_end = OUT if up else IN
        old = b.detach(arc, bottom_end)
        if old is None:
            raise DiagramError(f"arc {arc} is a free loop; anchor it first")
        b.attach(segs[0], bottom_end, *old)
        chains[key] = (segs, up)
    for k, x in enumerate(xs):
        br, bl = ("p", "q") if k % 2 == 0 else ("q", "p")
        pos = {}
        # S: bottom-right, W: bottom-left, N: top-left (continuation of S), E: top-right
        for name, key, seg_index, top in (("S", br, k, False), ("W", bl, k, False), ("N", br, k + 1, True), ("E", bl, k + 1, True)):
            segs, up = chains[key]
            end = (OUT if top else IN) if up else (IN if top else OUT)
            pos[name] = (segs[seg_index], end)
        if under == "SN":
            order = ["S", "E", "N", "W"] if pos["S"][1] == IN else ["N", "W", "S", "E"]
        else:
            order = ["W", "S", "E", "N"] if pos["W"][1] == IN else ["E", "N", "W", "S"]
        for slot, name in enumerate(order):
            arc, end = pos[name]
            b.attach(arc, end, x, slot)
    return xs


def anchor_free_loops(b: DiagramBuilder, arcs: Iterable[str]) -> dict[str, str]:
    """Give each listed free loop a 2-valent marker vertex so it can be cut;
    returns arc -> marker.  Remove markers with :func:`release_anchors`."""
    markers = {}
    for a in arcs:
        if b.arcs[a] == [None, None]:
            m = b.add_node(VERTEX, 2, b.fresh("m"))
            b.attach(a, IN, m, 0)
            b.attach(a, OUT, m, 1)
            markers[a] = m
    return markers


def release_anchors(b: DiagramBuilder, markers: Mapping[str, str]) -> None:
    for m in markers.values():
        b.join(m, 0, 1)
        b.remove_node(m)


def insert_curl(b: DiagramBuilder, arc: str, sign: int) -> str:
    """Put a one-crossing curl (loop on the left of the strand) near the tail
    of ``arc``.  Returns the crossing id."""
    markers = anchor_free_loops(b, [arc])
    x = b.add_node(CROSSING, 4)
    a0 = b.add_arc()
    loop = b.add_arc()
    old = b.detach(arc, OUT)
    b.attach(a0, OUT, *old)
    # geometry: strand enters from S heading N, loops from N round to W, exits E
    s_pos = (a0, IN)
    e_pos = (arc, OUT)
    n_pos = (loop, OUT)
    w_pos = (loop, IN)
    if sign > 0:
        order = [s_pos, e_pos, n_pos, w_pos]  # S-N strand under
    else:
        order = [w_pos, s_pos, e_pos, n_pos]  # W-E strand under
    for slot, (a, e) in enumerate(order):
        b.attach(a, e, x, slot)
    release_anchors(b, markers)
    return x


def insert_r2(b: DiagramBuilder, over: str, under: str, over_upward: bool) -> tuple[str, str]:
    """Push ``over`` across ``under`` creating a bigon.

    Geometry: ``under`` runs north; ``over`` lies on its left (west) sharing a
    face with it and runs north when ``over_upward`` else south.  Both arcs are
    cut near their tails.
    """
    markers = anchor_free_loops(b, [over, under])
    x1 = b.add_node(CROSSING, 4)  # lower
    x2 = b.add_node(CROSSING, 4)  # upper
    u0, u1 = b.add_arc(), b.add_arc()
    old = b.detach(under, OUT)
    b.attach(u0, OUT, *old)
    # under chain: u0 -> x1 -> u1 -> x2 -> under
    o_new0, o_new1 = b.add_arc(), b.add_arc()
    old = b.detach(over, OUT)
    b.attach(o_new0, OUT, *old)
    if over_upward:
        # over: o_new0 (bottom, west of x1) -> x1 -> o_new1 (bulge) -> x2 -> over (top)
        x1_slots = [(u0, IN), (o_new1, OUT), (u1, OUT), (o_new0, IN)]
        x2_slots = [(u1, IN), (o_new1, IN), (under, OUT), (over, OUT)]
    else:
        # over runs south: o_new0 (top) -> x2 -> o_new1 -> x1 -> over (bottom)
        x1_slots = [(u0, IN), (o_new1, IN), (u1, OUT), (over, OUT)]
        x2_slots = [(u1, IN), (o_new1, OUT), (under, OUT), (o_new0, IN)]
    for x, slots in ((x1, x1_slots), (x2, x2_slots)):
        for i, (a, e) in enumerate(slots):
            b.attach(a, e, x, i)
    release_anchors(b, markers)
    return x1, x2


# ---------------------------------------------------------------------------
# parallels


def parallel_copies(
    d: Diagram, reverse_left: bool, vertex_junctions: bool = True
) -> tuple[DiagramBuilder, dict[tuple[str, str], str], dict[str, list[tuple[str, str]]]]:
    """Blackboard 2-parallel of every arc.

    Each arc ``a`` becomes copies ``(a, "L")`` and ``(a, "R")`` on the left and
    right of its direction; each crossing becomes four.  Left copies are
    reversed when ``reverse_left``.  Graph vertices become junction nodes of
    twice the degree whose slots list, counterclockwise, the copies of each
    original slot; joining them is left to the caller.

    Returns the builder, the copy map ``(arc, side) -> copy arc`` and the
    junction slot map ``vertex -> [(arc, side), ...]``.
    """
    b = DiagramBuilder()
    copy: dict[tuple[str, str], str] = {}
    for a in d.arcs:
        for side in ("L", "R"):
            copy[(a, side)] = b.add_arc(f"{a}.{side}")

    def put(arc_name: str, geometric_end: str, reversed_: bool, node: str, slot: int):
        end = geometric_end if not reversed_ else (IN if geometric_end == OUT else OUT)
        b.attach(arc_name, end, node, slot)

    rev = {"L": reverse_left, "R": False}
    for x in d.crossings:
        (a0, _), (a1, e1), (a2, _), (a3, _) = x.slots
        over_east = e1 == OUT
        # copy of the over-strand on the north row
        north_side = "L" if over_east else "R"
        south_side = "R" if over_east else "L"
        side_at_row = {"N": north_side, "S": south_side}
        side_at_col = {"W": "L", "E": "R"}
        internal_u = {c: b.add_arc(f"{x.id}.u{c}") for c in "WE"}
        internal_o = {r: b.add_arc(f"{x.id}.o{r}") for r in "SN"}
        for col in "WE":
            for row in "SN":
                sub = b.add_node(CROSSING, 4, f"{x.id}.{col}{row}")
                us = side_at_col[col]
                os_ = side_at_row[row]
                # south / north: under-strand copy ``us``, geometric direction north
                south = (copy[(a0, us)], IN) if row == "S" else (internal_u[col], IN)
                north = (copy[(a2, us)], OUT) if row == "N" else (internal_u[col], OUT)
                # east / west: over-strand copy ``os_``
                if over_east:
                    west = (copy[(a3, os_)], IN) if col == "W" else (internal_o[row], IN)
                    east = (copy[(a1, os_)], OUT) if col == "E" else (internal_o[row], OUT)
                else:
                    east = (copy[(a1, os_)], IN) if col == "E" else (internal_o[row], IN)
                    west = (copy[(a3, os_)], OUT) if col == "W" else (internal_o[row], OUT)
                for slot, ((arc, end), side) in enumerate(((south, us), (east, os_), (north, us), (west, os_))):
                    put(arc, end, rev[side], sub, slot)
    junctions: dict[str, list[tuple[str, str]]] = {}
    for v in d.vertices:
        jn = b.add_node(VERTEX, 2 * v.degree, f"{v.id}")
        order = []
        for a, e in v.slots:
            # looking outward along the strand: an outgoing arc has its left
            # copy on the counterclockwise side, an incoming arc the opposite
            sides = ("R", "L") if e == OUT else ("L", "R")
            order.extend((a, s, e) for s in sides)
        for slot, (a, s, e) in enumerate(order):
            put(copy[(a, s)], e, rev[s], jn, slot)
        junctions[v.id] = [(a, s) for a, s, _ in order]
    for a in d.arcs:
        if d.is_free_loop(a):
            for side in ("L", "R"):
                if rev[side]:
                    b.reverse(copy[(a, side)])
    return b, copy, junctions


def double_link_diagram(d: Diagram) -> Diagram:
    """Blackboard-framed 2-parallel of a link diagram; both copies keep the
    original direction."""
    if d.vertices:
        raise DiagramError("doubling needs a link diagram (graph vertices present)")
    b, copy, _ = parallel_copies(d, reverse_left=False)
    d2 = b.build("link")
    return d2


# ---------------------------------------------------------------------------
# deletion


def delete_strands(d: Diagram, keep: Iterable[str], kind: str | None = None) -> Diagram:
    """Keep only the listed components (link) or edge labels (theta); arcs
    outside are removed, crossings losing a strand are erased, and 2-valent
    vertices left behind are smoothed away."""
    keep = set(keep)
    labels = d.components if d.kind == "link" else d.edges
    if not labels:
        raise DiagramError("diagram has no component or edge labels")
    unknown = keep - set(labels)
    if unknown:
        raise DiagramError(f"unknown labels {sorted(unknown)}")
    kept_arcs = {a for k in keep for a in labels[k]}
    b = DiagramBuilder.from_diagram(d)
    for a in d.arcs:
        if a not in kept_arcs:
            b.delete_arc(a)
    for x in d.crossings:
        slots = b.nodes[x.id][1]
        empty = [s is None for s in slots]
        if all(empty):
            b.remove_node(x.id)
        elif empty == [True, False, True, False]:
            b.join(x.id, 1, 3)
            b.remove_node(x.id)
        elif empty == [False, True, False, True]:
            b.join(x.id, 0, 2)
            b.remove_node(x.id)
        elif any(empty):
            raise DiagramError(f"deletion leaves a free end at {x.id}")
    for v in d.vertices:
        slots = [s for s in b.nodes[v.id][1] if s is not None]
        b.nodes[v.id][1] = slots
        for i, (a, e) in enumerate(slots):
            b.arcs[a][0 if e == OUT else 1] = (v.id, i)
        if len(slots) == 0:
            b.remove_node(v.id)
        elif len(slots) == 1:
            raise DiagramError(f"deletion leaves a free end at {v.id}")
        elif len(slots) == 2:
            b.join(v.id, 0, 1)
            b.remove_node(v.id)
    if kind is None:
        kind = "link" if not any(k == VERTEX for k, _ in b.nodes.values()) else "graph"
    return b.build(kind)


# ---------------------------------------------------------------------------
# Reidemeister moves I and II


def apply_reidemeister(d: Diagram, move: str, site) -> Diagram:
    """Apply a Reidemeister move.

    ``R1+``/``R1-``: add a positive/negative curl on arc ``site``.
    ``R1undo``: remove the curl at crossing ``site``.
    ``R2``: ``site = (over_arc, under_arc, over_upward)``, see :func:`insert_r2`.
    ``R2undo``: ``site = (x1, x2)``, two crossings bounding a bigon.
    """
    b = DiagramBuilder.from_diagram(d)
    if move in ("R1+", "R1-"):
        if site not in b.arcs:
            raise DiagramError(f"unknown arc {site!r}")
        insert_curl(b, site, 1 if move == "R1+" else -1)
    elif move == "R1undo":
        _undo_r1(b, site)
    elif move == "R2":
        over, under, up = site
        if over not in b.arcs or under not in b.arcs or over == under:
            raise DiagramError("R2 needs two distinct existing arcs")
        insert_r2(b, over, under, up)
    elif move == "R2undo":
        _undo_r2(b, d, site)
    else:
        raise ValueError(f"unknown move {move!r}")
    return _rebuild_like(b, d)


def _undo_r1(b: DiagramBuilder, x: str) -> None:
    if x not in b.nodes or b.nodes[x][0] != CROSSING:
        raise DiagramError(f"{x!r} is not a crossing")
    slots = b.nodes[x][1]
    for i in range(4):
        a, _ = slots[i]
        j = (i + 1) % 4
        if slots[j][0] == a:
            b.delete_arc(a)
            rest = [k for k in range(4) if k not in (i, j)]
            b.join(x, *rest)
            b.remove_node(x)
            return
    raise DiagramError(f"no curl at {x}")


def _undo_r2(b: DiagramBuilder, d: Diagram, site) -> None:
    x1, x2 = site
    for x in (x1, x2):
        if x not in b.nodes or b.nodes[x][0] != CROSSING:
            raise DiagramError(f"{x!r} is not a crossing")
    n1, n2 = d.node(x1), d.node(x2)
    shared = {a for a, _ in n1.slots} & {a for a, _ in n2.slots}
    over1 = {n1.slots[1][0], n1.slots[3][0]}
    over2 = {n2.slots[1][0], n2.slots[3][0]}
    under1 = {n1.slots[0][0], n1.slots[2][0]}
    under2 = {n2.slots[0][0], n2.slots[2][0]}
    if len(shared) != 2 or not (over1 & over2 & shared) or not (under1 & under2 & shared):
        raise DiagramError(f"{x1}, {x2} do not bound an R2 bigon")
    b.erase_crossing(x1)
    b.erase_crossing(x2)


def _rebuild_like(b: DiagramBuilder, d: Diagram) -> Diagram:
    if d.kind == "link":
        return b.build("link")
    if d.kind == "theta":
        from .theta import theta_edges_from_builder

        return b.build("theta", edges=theta_edges_from_builder(b, d))
    return b.build(d.kind)


# ---------------------------------------------------------------------------
# text format


def parse_diagram(text: str) -> Diagram:
    fmt = None
    arcs: list[str] = []
    arc_lines: dict[str, int] = {}
    nodes: list[Node] = []
    node_ids: set[str] = set()
    used: dict[tuple[str, str], int] = {}
    components: dict[str, list[str]] = {}
    edges: dict[str, list[str]] = {}
    pending_refs: list[tuple[str, int]] = []

    def parse_ref(tok: str, lineno: int) -> tuple[str, str]:
        if ":" not in tok:
            raise ParseError(f"arc reference {tok!r} needs :in or :out", lineno)
        a, e = tok.rsplit(":", 1)
        if e not in (IN, OUT):
            raise ParseError(f"arc reference {tok!r} needs :in or :out", lineno)
        if a not in arc_lines:
            raise ParseError(f"unknown arc {a!r}", lineno)
        if (a, e) in used:
            raise ParseError(f"arc {a!r} used twice as {e!r} (first on line {used[(a, e)]})", lineno)
        used[(a, e)] = lineno
        return a, e

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        key, args = tok[0], tok[1:]
        if key == "format":
            if fmt is not None or len(args) != 1 or args[0] not in ("link-v1", "theta-v1"):
                raise ParseError(f"bad format line {line!r}", lineno)
            fmt = args[0]
            continue
        if fmt is None:
            raise ParseError("missing 'format' header", lineno)
        if key == "arc":
            if len(args) != 1:
                raise ParseError("'arc' takes one id", lineno)
            if args[0] in arc_lines:
                raise ParseError(f"arc {args[0]!r} declared twice", lineno)
            arc_lines[args[0]] = lineno
            arcs.append(args[0])
        elif key in ("vertex", "crossing"):
            if not args:
                raise ParseError(f"'{key}' needs an id", lineno)
            nid, refs = args[0], args[1:]
            if nid in node_ids:
                raise ParseError(f"node {nid!r} declared twice", lineno)
            if key == "crossing" and len(refs) != 4:
                raise ParseError(f"crossing {nid!r} needs 4 arc references", lineno)
            if key == "vertex" and not refs:
                raise ParseError(f"vertex {nid!r} needs arc references", lineno)
            node_ids.add(nid)
            nodes.append(Node(nid, CROSSING if key == "crossing" else VERTEX, tuple(parse_ref(r, lineno) for r in refs)))
        elif key == "component":
            if fmt != "link-v1":
                raise ParseError("'component' only allowed in link files", lineno)
            if len(args) < 2:
                raise ParseError("'component' needs a name and arcs", lineno)
            if args[0] in components:
                raise ParseError(f"component {args[0]!r} declared twice", lineno)
            components[args[0]] = args[1:]
            pending_refs.extend((a, lineno) for a in args[1:])
        elif key == "edge":
            if fmt != "theta-v1":
                raise ParseError("'edge' only allowed in theta files", lineno)
            if len(args) < 2 or args[0] not in ("e1", "e2", "e3"):
                raise ParseError("'edge' needs e1|e2|e3 and arcs", lineno)
            if args[0] in edges:
                raise ParseError(f"edge {args[0]!r} declared twice", lineno)
            edges[args[0]] = args[1:]
            pending_refs.extend((a, lineno) for a in args[1:])
        else:
            raise ParseError(f"unknown keyword {key!r}", lineno)
    if fmt is None:
        raise ParseError("missing 'format' header")
    for a, lineno in pending_refs:
        if a not in arc_lines:
            raise ParseError(f"unknown arc {a!r}", lineno)
    for (a, e) in list(used):
        other = OUT if e == IN else IN
        if (a, other) not in used:
            raise ParseError(f"arc {a!r} has a free end", used[(a, e)])
    try:
        if fmt == "link-v1":
            return Diagram(arcs, nodes, "link", components=components or None)
        return Diagram(arcs, nodes, "theta", edges=edges)
    except DiagramError as exc:
        raise ParseError(str(exc)) from exc


def diagram_to_text(d: Diagram, comment: str | None = None) -> str:
    if d.kind not in ("link", "theta"):
        raise DiagramError(f"no file format for {d.kind} diagrams")
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append("format link-v1" if d.kind == "link" else "format theta-v1")
    lines.extend(f"arc {a}" for a in d.arcs)
    for n in d.nodes:
        refs = " ".join(f"{a}:{e}" for a, e in n.slots)
        lines.append(f"{n.kind} {n.id} {refs}")
    if d.kind == "link":
        for k, arcs in d.components.items():
            lines.append(f"component {k} {' '.join(arcs)}")
    else:
        for k in sorted(d.edges):
            lines.append(f"edge {k} {' '.join(d.edges[k])}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "invalid:\n" + "\n".join(f"  - {e}" for e in self.errors)


def validate_diagram(d: Diagram) -> ValidationReport:
    errs = []
    for a in d.arcs:
        t, h = d.ends[a]
        if (t is None) != (h is None):
            errs.append(f"arc {a}: free end")
    for n in d.crossings:
        if n.degree != 4:
            errs.append(f"crossing {n.id}: needs 4 slots")
            continue
        if n.slots[0][1] != IN:
            errs.append(f"crossing {n.id}: under-strand must enter at slot 0")
        if n.slots[2][1] != OUT:
            errs.append(f"crossing {n.id}: under-strand must leave at slot 2")
        if n.slots[1][1] == n.slots[3][1]:
            errs.append(f"crossing {n.id}: over-strand must enter and leave through slots 1 and 3")
    if d.kind == "link":
        if d.vertices:
            errs.append("link diagram has graph vertices: " + ", ".join(v.id for v in d.vertices))
        elif not errs:
            try:
                comps = link_components(d)
            except DiagramError as exc:
                errs.append(str(exc))
            else:
                if d.components:
                    errs.extend(_check_components(d, comps))
    return ValidationReport(errs)


def _check_components(d: Diagram, comps: list[tuple[str, ...]]) -> list[str]:
    errs = []
    listed = [a for arcs in d.components.values() for a in arcs]
    if sorted(listed) != sorted(d.arcs):
        errs.append("components do not partition the arcs exactly once")
    cyc = {frozenset(c): c for c in comps}
    for k, arcs in d.components.items():
        c = cyc.get(frozenset(arcs))
        if c is None:
            errs.append(f"component {k}: arcs do not form one closed strand")
            continue
        i = c.index(arcs[0])
        if tuple(c[i:] + c[:i]) != tuple(arcs):
            errs.append(f"component {k}: arcs not listed in traversal order")
    return errs


def iter_states(n: int, alphabet: str) -> Iterator[tuple[str, ...]]:
    return itertools.product(alphabet, repeat=n)
