"""Built-in diagrams.

Fixtures are described with an undirected port model: every node lists the
wires at its slots counterclockwise, a crossing's under-strand occupying
slots 0 and 2.  Directions are assigned afterwards by walking each edge out
of v1 (theta curves) or, for links, so that each wire enters the crossing
where it sits in slot 0 when possible.

The shipped text files in ``fixtures/`` are generated from these builders by
:func:`write_fixture_files` and are what the CLI reads.
"""

from __future__ import annotations

import itertools
from importlib import resources
from pathlib import Path

from .diagram import (
    CROSSING,
    IN,
    OUT,
    VERTEX,
    Diagram,
    DiagramBuilder,
    DiagramError,
    Node,
    diagram_to_text,
    insert_curl,
    insert_r2,
    insert_twist,
    parse_diagram,
)
from .theta import theta_edges_from_builder, validate_theta


class PortDiagram:
    def __init__(self):
        self.nodes: list[tuple[str, str, list[str]]] = []
        self.loops: list[str] = []
        self._parent: dict[str, str] = {}
        self._count = itertools.count(1)

    def wire(self) -> str:
        w = f"w{next(self._count)}"
        self._parent[w] = w
        return w

    def _find(self, w: str) -> str:
        self._parent.setdefault(w, w)
        while self._parent[w] != w:
            self._parent[w] = self._parent[self._parent[w]]
            w = self._parent[w]
        return w

    def merge(self, u: str, v: str) -> None:
        ru, rv = self._find(u), self._find(v)
        if ru == rv:
            self.loops.append(ru)
        else:
            self._parent[rv] = ru

    def crossing(self, name: str, *wires: str) -> None:
        """Wires counterclockwise; slots 0 and 2 carry the under-strand."""
        if len(wires) != 4:
            raise ValueError("a crossing has four slots")
        self.nodes.append((name, CROSSING, list(wires)))

    def vertex(self, name: str, *wires: str) -> None:
        self.nodes.append((name, VERTEX, list(wires)))

    def to_diagram(self, kind: str) -> Diagram:
        nodes = [(n, k, [self._find(w) for w in ws]) for n, k, ws in self.nodes]
        ports: dict[str, list[tuple[str, int]]] = {}
        for n, _, ws in nodes:
            for i, w in enumerate(ws):
                ports.setdefault(w, []).append((n, i))
        for w, ps in ports.items():
            if len(ps) != 2:
                raise DiagramError(f"wire {w} has {len(ps)} ends")
        kinds = {n: k for n, k, _ in nodes}
        slots_of = {n: ws for n, _, ws in nodes}
        heads: dict[str, tuple[str, int]] = {}

        def other(w, p):
            a, b = ports[w]
            if a == b:
                raise DiagramError(f"wire {w} starts and ends in one slot")
            return b if p == a else a

        def walk(w, tail):
            # orient w away from ``tail`` and continue straight through crossings
            while w not in heads:
                h = other(w, tail)
                heads[w] = h
                n, s = h
                if kinds[n] != CROSSING:
                    return
                tail = (n, (s + 2) % 4)
                w = slots_of[n][tail[1]]

        start_nodes = [n for n, k, _ in nodes if k == VERTEX and n in ("v1",)] + [n for n, k, _ in nodes if k == VERTEX and n != "v1"]
        for n in start_nodes:
            for i, w in enumerate(slots_of[n]):
                if w not in heads and not any(h == (n, i) for h in heads.values()):
                    walk(w, (n, i))
        for n, k, ws in nodes:
            if k != CROSSING:
                continue
            w = ws[0]
            if w not in heads:
                walk(w, other(w, (n, 0)))
        for w in ports:
            if w not in heads:
                walk(w, ports[w][0])
        arcs = list(ports) + sorted(set(self._find(w) for w in self.loops))
        built = []
        for n, k, ws in nodes:
            slots = []
            for i, w in enumerate(ws):
                slots.append((w, IN if heads[w] == (n, i) else OUT))
            if k == CROSSING and slots[0][1] == OUT:
                slots = slots[2:] + slots[:2]
            built.append(Node(n, k, tuple(slots)))
        d = Diagram(arcs, built, kind="graph")
        b = DiagramBuilder.from_diagram(d)
        if kind == "theta":
            edges = theta_edges_from_builder(b)
            return validate_theta(b.build("theta", edges=edges)).base
        return b.build(kind)


def _theta_builder_result(b: DiagramBuilder, like: Diagram) -> Diagram:
    return validate_theta(b.build("theta", edges=theta_edges_from_builder(b, like))).base


# ---------------------------------------------------------------------------
# theta curves


def trivial_theta() -> Diagram:
    p = PortDiagram()
    p.vertex("v1", "e3", "e2", "e1")
    p.vertex("v2", "e1", "e2", "e3")
    return p.to_diagram("theta")


def first_arc(d: Diagram, label: str) -> str:
    return d.edges[label][0]


def decorate(d: Diagram, curls=(), clasps=()) -> Diagram:
    """Add curls ``(edge, sign)`` near v1 and clasps ``(right_edge, left_edge,
    crossings, under)`` between edges adjacent at v1 (left is the
    counterclockwise neighbour of right); ``crossings`` must be even."""
    out = d
    for right, left, count, under in clasps:
        if count % 2:
            raise DiagramError("a clasp needs an even number of crossings")
        b = DiagramBuilder.from_diagram(out)
        insert_twist(b, (first_arc(out, right), True), (first_arc(out, left), True), count, under)
        out = _theta_builder_result(b, out)
    for edge, sign in curls:
        b = DiagramBuilder.from_diagram(out)
        insert_curl(b, first_arc(out, edge), sign)
        out = _theta_builder_result(b, out)
    return out


# counterclockwise neighbour pairs at v1: (right, left)
ADJACENT_AT_V1 = (("e3", "e2"), ("e2", "e1"), ("e1", "e3"))


def curl_theta() -> Diagram:
    return decorate(trivial_theta(), curls=[("e1", 1)])


def clasp_theta() -> Diagram:
    return decorate(trivial_theta(), clasps=[("e2", "e1", 2, "SN")])


TREFOIL_PD = ((1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3))


def trefoil_link() -> Diagram:
    p = PortDiagram()
    for k, x in enumerate(TREFOIL_PD, 1):
        p.crossing(f"x{k}", *(f"t{w}" for w in x))
    return p.to_diagram("link")


def hopf_link() -> Diagram:
    p = PortDiagram()
    p.crossing("x1", "h4", "h1", "h3", "h2")
    p.crossing("x2", "h2", "h3", "h1", "h4")
    return p.to_diagram("link")


def braid_closure(word, n: int) -> Diagram:
    """Closed braid on ``n`` strands running down; ``word`` as in :func:`plat_theta`."""
    p = PortDiagram()
    top = {pos: p.wire() for pos in range(1, n + 1)}
    cur = dict(top)
    for k, (i, sign) in enumerate(word, 1):
        if not 1 <= i < n:
            raise DiagramError(f"generator {i} out of range for {n} strands")
        nw, ne = cur[i], cur[i + 1]
        sw, se = p.wire(), p.wire()
        if sign > 0:
            p.crossing(f"x{k}", ne, nw, sw, se)
        else:
            p.crossing(f"x{k}", nw, sw, se, ne)
        cur[i], cur[i + 1] = sw, se
    for pos in range(1, n + 1):
        p.merge(top[pos], cur[pos])
    return p.to_diagram("link")


def trefoil_theta() -> Diagram:
    """Trefoil tied into e1: the trefoil is cut open at one arc, whose ends
    are led to v1 and v2."""
    p = PortDiagram()
    for k, x in enumerate(TREFOIL_PD, 1):
        wires = []
        for slot, w in enumerate(x):
            if w == 1:
                wires.append("e1a" if k == 1 else "e1b")
            else:
                wires.append(f"t{w}")
        p.crossing(f"x{k}", *wires)
    p.vertex("v1", "e3", "e2", "e1a")
    p.vertex("v2", "e1b", "e2", "e3")
    return p.to_diagram("theta")


def plat_theta(
    word,
    n: int,
    top_vertex=(1, 2, 3),
    top_caps=(),
    bottom_vertex=(1, 2, 3),
    bottom_caps=(),
) -> Diagram:
    """Theta curve from a plat picture with strands running down.

    ``word`` is a sequence of ``(i, sign)``: a crossing of positions i, i+1
    where for sign +1 the strand from the upper left passes over.  v1 sits on
    top of ``top_vertex`` positions, v2 below ``bottom_vertex``.
    """
    p = PortDiagram()
    cur: dict[int, str] = {}
    v1 = []
    for pos in top_vertex:
        cur[pos] = p.wire()
        v1.append(cur[pos])
    p.vertex("v1", *v1)
    for i, j in top_caps:
        w = p.wire()
        cur[i] = cur[j] = w
    if sorted(cur) != list(range(1, n + 1)):
        raise DiagramError("top of the plat does not cover every position")
    for k, (i, sign) in enumerate(word, 1):
        nw, ne = cur[i], cur[i + 1]
        sw, se = p.wire(), p.wire()
        if sign > 0:
            p.crossing(f"x{k}", ne, nw, sw, se)
        else:
            p.crossing(f"x{k}", nw, sw, se, ne)
        cur[i], cur[i + 1] = sw, se
    for i, j in bottom_caps:
        p.merge(cur[i], cur[j])
    p.vertex("v2", *(cur[pos] for pos in reversed(bottom_vertex)))
    return p.to_diagram("theta")


# found by exhaustive search over 5-strand plats (see README); all three
# subknots have trivial Jones polynomial while the normalized Yamada
# polynomial differs from that of the trivial theta curve
KINOSHITA_WORD = ((1, 1), (3, 1), (2, -1), (3, 1), (2, -1), (2, -1))
KINOSHITA_PLAT = dict(n=5, top_vertex=(1, 2, 3), top_caps=((4, 5),), bottom_vertex=(3, 4, 5), bottom_caps=((1, 2),))


def kinoshita_theta() -> Diagram:
    return plat_theta(KINOSHITA_WORD, **KINOSHITA_PLAT)


# ---------------------------------------------------------------------------
# move pairs on theta curves


def _r2_theta() -> Diagram:
    d = trivial_theta()
    b = DiagramBuilder.from_diagram(d)
    # e1 is the left neighbour of e2 looking out of v1
    insert_r2(b, first_arc(d, "e1"), first_arc(d, "e2"), True)
    return _theta_builder_result(b, d)


R3_BEFORE = ((1, 1), (2, 1), (1, 1), (2, -1), (1, -1), (2, -1))
R3_AFTER = ((2, 1), (1, 1), (2, 1), (2, -1), (1, -1), (2, -1))


def _move4_before() -> Diagram:
    # e1 runs round v2 and comes back over e3 and e2 before entering v2
    p = PortDiagram()
    p.crossing("q", "e3a", "e1a", "e3b", "e1b")
    p.crossing("p", "e2a", "e1b", "e2b", "e1c")
    p.vertex("v1", "e3a", "e2a", "e1a")
    p.vertex("v2", "e1c", "e2b", "e3b")
    return p.to_diagram("theta")


def _move4_after() -> Diagram:
    # the loop of e1 swept over v2: only a self-crossing of e1 is left
    p = PortDiagram()
    p.crossing("c", "e1b", "e1b", "e1c", "e1a")
    p.vertex("v1", "e3", "e2", "e1a")
    p.vertex("v2", "e1c", "e2", "e3")
    return p.to_diagram("theta")


def _move5_after() -> Diagram:
    # both vertices turned over about their e2 axis, then e1 and e3 relabelled:
    # one crossing between e1 and e3 next to each vertex
    return plat_theta(((1, 1), (1, 1)), 3, top_vertex=(1, 2, 3), bottom_vertex=(1, 2, 3))


MOVE_PAIRS = {
    "move1": (trivial_theta, curl_theta),
    "move1neg": (trivial_theta, lambda: decorate(trivial_theta(), curls=[("e2", -1)])),
    "move2": (trivial_theta, _r2_theta),
    "move3": (lambda: plat_theta(R3_BEFORE, 3), lambda: plat_theta(R3_AFTER, 3)),
    "move4": (_move4_before, _move4_after),
    "move5": (trivial_theta, _move5_after),
    "move6": (trivial_theta, lambda: decorate(trivial_theta(), clasps=[("e3", "e2", 2, "WE")])),
}

# R1-type pairs: unnormalized Yamada changes by a monomial
R1_PAIRS = ("move1", "move1neg")


# ---------------------------------------------------------------------------
# registry and shipped files


def _builders() -> dict[str, tuple]:
    reg = {
        "trivial-theta": (trivial_theta, "trivial theta curve, no crossings"),
        "curl-theta": (curl_theta, "trivial theta curve with one positive curl on e1"),
        "clasp-theta": (clasp_theta, "e1 and e2 twisted once fully next to v1; w12 = 2, n = (1, 1, -1)"),
        "trefoil-theta": (trefoil_theta, "trefoil tied into e1 (cut open from the PD code of the trefoil)"),
        "kinoshita-theta": (
            kinoshita_theta,
            "brunnian theta curve found by exhaustive search over 5-strand plat diagrams; "
            "subknots have Jones polynomial 1 and the normalized Yamada polynomial is nontrivial",
        ),
        "hopf": (hopf_link, "standard 2-crossing Hopf link"),
        "trefoil": (trefoil_link, "standard 3-crossing trefoil, PD X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"),
    }
    notes = {
        "move1": "move (I): positive curl on e1",
        "move1neg": "move (I): negative curl on e2",
        "move2": "move (II): e1 pushed over e2",
        "move3": "move (III): braid relation s1 s2 s1 = s2 s1 s2 on three edges",
        "move4": "move (IV): a strand of e1 passed across v2",
        "move5": "move (V): both vertices turned over, e1/e3 relabelled",
        "move6": "move (VI): e3 and e2 twisted next to v1",
    }
    for name, (before, after) in MOVE_PAIRS.items():
        reg[f"{name}-before"] = (before, notes[name] + "; before")
        reg[f"{name}-after"] = (after, notes[name] + "; after")
    return reg


FIXTURE_SUFFIX = {"theta": ".th", "link": ".lk"}


def fixture_names() -> list[str]:
    return sorted(_builders())


def build_fixture(name: str) -> Diagram:
    try:
        return _builders()[name][0]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}") from None


def fixture_text(name: str) -> str:
    """Contents of the shipped fixture file."""
    for suffix in FIXTURE_SUFFIX.values():
        res = resources.files("thetapoly").joinpath("fixtures", name + suffix)
        if res.is_file():
            return res.read_text(encoding="utf-8")
    raise KeyError(f"unknown fixture {name!r}")


def load_fixture(name: str) -> Diagram:
    return parse_diagram(fixture_text(name))


def write_fixture_files(directory: Path) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, (builder, note) in sorted(_builders().items()):
        d = builder()
        path = directory / (name + FIXTURE_SUFFIX[d.kind])
        path.write_text(diagram_to_text(d, comment=f"{name}: {note}"), encoding="utf-8")
        written.append(path)
    return written
