"""Finite acyclic quivers and the degree/path data used by the Reedy structures."""

from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass, field

from .errors import CyclicError, ParseError, QuiverNameError, ValidationError, Violation

Arrow = namedtuple("Arrow", "name src tgt")


class Quiver:
    """Vertices and arrows, both kept in input order."""

    def __init__(self, vertices, arrows, check=True):
        self.vertices = tuple(str(v) for v in vertices)
        self.arrows = tuple(a if isinstance(a, Arrow) else Arrow(*map(str, a)) for a in arrows)
        if check:
            err = validate_quiver(self)
            if err is not None:
                raise err

    def __repr__(self):
        arrows = ", ".join(f"{a.name}:{a.src}->{a.tgt}" for a in self.arrows)
        return f"Quiver({list(self.vertices)}, [{arrows}])"

    def __eq__(self, other):
        return isinstance(other, Quiver) and (self.vertices, self.arrows) == (other.vertices, other.arrows)

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def arrow(self, name):
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)

    def to_json(self):
        return {
            "vertices": list(self.vertices),
            "arrows": [{"name": a.name, "src": a.src, "tgt": a.tgt} for a in self.arrows],
        }

    @classmethod
    def from_json(cls, data):
        try:
            verts = data["vertices"]
            arrows = [(a["name"], a["src"], a["tgt"]) for a in data.get("arrows", [])]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed quiver: {exc}") from None
        if not isinstance(verts, list) or any(not isinstance(v, str) for v in verts):
            raise ParseError("quiver vertices must be a list of strings")
        if any(not all(isinstance(x, str) for x in a) for a in arrows):
            raise ParseError("arrow names and endpoints must be strings")
        q = cls(verts, arrows, check=False)
        err = validate_quiver(q)
        if err is not None:
            raise ValidationError(err)
        return q


def validate_quiver(q):
    """``None`` when ``q`` is a valid acyclic quiver, else the error instance."""
    if len(set(q.vertices)) != len(q.vertices):
        return QuiverNameError("duplicate vertex name")
    names = [a.name for a in q.arrows]
    if len(set(names)) != len(names):
        return QuiverNameError("duplicate arrow name")
    vs = set(q.vertices)
    for a in q.arrows:
        for end in (a.src, a.tgt):
            if end not in vs:
                return QuiverNameError(f"arrow {a.name} refers to unknown vertex {end}")
    cycle = _find_cycle(q)
    if cycle is not None:
        return CyclicError(cycle)
    return None


def _find_cycle(q):
    out = {v: [] for v in q.vertices}
    for a in q.arrows:
        out[a.src].append(a.tgt)
    state = dict.fromkeys(q.vertices, 0)
    for root in q.vertices:
        if state[root]:
            continue
        stack = [(root, iter(out[root]))]
        path = [root]
        state[root] = 1
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[v] = 2
                stack.pop()
                path.pop()
            elif state[nxt] == 1:
                return path[path.index(nxt):] + [nxt]
            elif state[nxt] == 0:
                state[nxt] = 1
                stack.append((nxt, iter(out[nxt])))
                path.append(nxt)
    return None


@dataclass(frozen=True)
class Path:
    """A directed path; ``arrows`` is the tuple of arrow names in travel order."""

    start: str
    end: str
    arrows: tuple = ()

    def __len__(self):
        return len(self.arrows)

    def __str__(self):
        return ".".join(self.arrows) if self.arrows else f"id_{self.start}"


@dataclass
class ReedyData:
    quiver: Quiver
    degree: dict
    incoming: dict
    outgoing: dict
    topo_order: tuple
    paths: dict = field(repr=False)

    def paths_between(self, i, j):
        return self.paths.get((i, j), [])

    def paths_into(self, j):
        """All paths ending at ``j``, ordered by (topo index of start, arrows)."""
        out = []
        for i in self.topo_order:
            out.extend(self.paths_between(i, j))
        return out

    def paths_from(self, i):
        out = []
        for j in self.topo_order:
            out.extend(self.paths_between(i, j))
        return out


def longest_path_degree(q):
    deg = {}
    order = _topological(q, None)
    for v in order:
        deg[v] = max((deg[a.src] + 1 for a in q.arrows if a.tgt == v), default=0)
    return deg


def _topological(q, degree):
    """Linear extension; ties broken by input order (or by degree first)."""
    index = {v: i for i, v in enumerate(q.vertices)}
    if degree is not None:
        return tuple(sorted(q.vertices, key=lambda v: (degree[v], index[v])))
    indeg = {v: 0 for v in q.vertices}
    for a in q.arrows:
        indeg[a.tgt] += 1
    ready = [v for v in q.vertices if indeg[v] == 0]
    order = []
    while ready:
        ready.sort(key=index.get)
        v = ready.pop(0)
        order.append(v)
        for a in q.arrows:
            if a.src == v:
                indeg[a.tgt] -= 1
                if indeg[a.tgt] == 0:
                    ready.append(a.tgt)
    return tuple(order)


def validate_degree(q, degree):
    for v in q.vertices:
        d = degree.get(v)
        if isinstance(d, bool) or not isinstance(d, int) or d < 0:
            return Violation("degree", f"vertex {v} needs a non-negative integer degree", v)
    for a in q.arrows:
        if degree[a.src] >= degree[a.tgt]:
            return Violation("degree", f"degree does not increase along {a.name}", a.name)
    return None


def build_reedy_data(q, degree=None):
    """Degree, incoming/outgoing arrows, topological order and all paths.

    By default the degree of a vertex is the length of the longest path ending
    there.  Any other strictly increasing degree may be passed instead; the
    model structures do not depend on the choice.
    """
    if degree is None:
        degree = longest_path_degree(q)
    else:
        degree = dict(degree)
        v = validate_degree(q, degree)
        if v is not None:
            raise ValidationError(v)
    topo = _topological(q, degree)
    incoming = {v: [a for a in q.arrows if a.tgt == v] for v in q.vertices}
    outgoing = {v: [a for a in q.arrows if a.src == v] for v in q.vertices}
    paths = {}
    # extend paths backwards in reverse topological order so lists come out sorted
    for i in topo:
        paths[(i, i)] = [Path(i, i)]
    for i in reversed(topo):
        for a in outgoing[i]:
            for j in topo:
                for p in paths.get((a.tgt, j), []):
                    paths.setdefault((i, j), []).append(Path(i, j, (a.name,) + p.arrows))
    arrow_pos = {a.name: k for k, a in enumerate(q.arrows)}
    for key in paths:
        paths[key].sort(key=lambda p: tuple(arrow_pos[n] for n in p.arrows))
    return ReedyData(q, degree, incoming, outgoing, topo, paths)


# fixture quivers ------------------------------------------------------------


def a_n(n):
    """Linear quiver ``0 -> 1 -> ... -> n-1``."""
    return Quiver([str(i) for i in range(n)], [(f"a{i}", str(i), str(i + 1)) for i in range(n - 1)])


def kronecker():
    return Quiver(["0", "1"], [("a", "0", "1"), ("b", "0", "1")])


def square():
    """The commutative-square shape ``0 -> 1 -> 3``, ``0 -> 2 -> 3`` (no relations)."""
    return Quiver(
        ["0", "1", "2", "3"],
        [("a", "0", "1"), ("b", "0", "2"), ("c", "1", "3"), ("d", "2", "3")],
    )


def point():
    return Quiver(["0"], [])


FIXTURE_QUIVERS = {"A2": lambda: a_n(2), "A3": lambda: a_n(3), "kronecker": kronecker, "square": square}
