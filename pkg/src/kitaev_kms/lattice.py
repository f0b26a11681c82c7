"""Finite rectangular patches of the square lattice and its dual.

Orientation conventions (fixed globally): horizontal edges point right,
vertical edges point up; faces are traversed counterclockwise; dual
horizontal edges point left, dual vertical edges point up.  Faces are
identified with dual vertices.  A patch of w x h unit cells has open
boundary: vertices live on [0,w] x [0,h], faces on [0,w) x [0,h).
"""

from __future__ import annotations

from dataclasses import dataclass

HORIZONTAL = "h"
VERTICAL = "v"
VERTEX = "vertex"
FACE = "face"
DIRECT = "direct"
DUAL = "dual"


@dataclass(frozen=True, order=True)
class Edge:
    """Oriented edge, named by its base (tail for horizontal = left end,
    for vertical = bottom end)."""

    direction: str
    x: int
    y: int

    def __repr__(self) -> str:
        return f"{self.direction}({self.x},{self.y})"


@dataclass(frozen=True, order=True)
class Site:
    """A vertex of the lattice or a face (= dual vertex)."""

    kind: str
    x: int
    y: int

    def __repr__(self) -> str:
        tag = "v" if self.kind == VERTEX else "f"
        return f"{tag}({self.x},{self.y})"


def vertex(x: int, y: int) -> Site:
    return Site(VERTEX, x, y)


def face(x: int, y: int) -> Site:
    return Site(FACE, x, y)


def edge_endpoints(e: Edge) -> tuple[Site, Site]:
    """(tail, head) in the edge's global orientation."""
    if e.direction == HORIZONTAL:
        return vertex(e.x, e.y), vertex(e.x + 1, e.y)
    return vertex(e.x, e.y), vertex(e.x, e.y + 1)


def incidence_vertex(e: Edge, v: Site) -> int:
    """+1 if e points away from v, -1 if into v, 0 if not incident."""
    tail, head = edge_endpoints(e)
    if v == tail:
        return 1
    if v == head:
        return -1
    return 0


def incidence_face(e: Edge, f: Site) -> int:
    """+1 if the counterclockwise boundary of f traverses e along its
    orientation, -1 if against, 0 if e is not on the boundary."""
    if f.kind != FACE:
        raise ValueError(f"{f} is not a face")
    if e.direction == HORIZONTAL:
        if e.x == f.x and e.y == f.y:
            return 1  # bottom, ccw goes right
        if e.x == f.x and e.y == f.y + 1:
            return -1  # top, ccw goes left
    else:
        if e.x == f.x + 1 and e.y == f.y:
            return 1  # right side, ccw goes up
        if e.x == f.x and e.y == f.y:
            return -1  # left side, ccw goes down
    return 0


def incidence(e: Edge, s: Site) -> int:
    return incidence_vertex(e, s) if s.kind == VERTEX else incidence_face(e, s)


class LatticePatch:
    """All edges of a w x h block of unit cells, with its vertices and faces."""

    def __init__(self, width: int, height: int):
        if width < 1 or height < 1:
            raise ValueError(f"patch dimensions must be >= 1, got {width}x{height}")
        self.width = width
        self.height = height
        self.edges: tuple[Edge, ...] = tuple(
            [Edge(HORIZONTAL, x, y) for y in range(height + 1) for x in range(width)]
            + [Edge(VERTICAL, x, y) for y in range(height) for x in range(width + 1)]
        )
        self.vertices: tuple[Site, ...] = tuple(
            vertex(x, y) for y in range(height + 1) for x in range(width + 1)
        )
        self.faces: tuple[Site, ...] = tuple(
            face(x, y) for y in range(height) for x in range(width)
        )
        self._edge_set = frozenset(self.edges)
        self._site_set = frozenset(self.vertices) | frozenset(self.faces)

    def __repr__(self) -> str:
        return f"LatticePatch({self.width}x{self.height}, {len(self.edges)} edges)"

    def contains_edge(self, e: Edge) -> bool:
        return e in self._edge_set

    def contains_site(self, s: Site) -> bool:
        return s in self._site_set

    def incident_edges(self, s: Site) -> list[Edge]:
        """Star of a vertex / boundary of a face, restricted to the patch."""
        if not self.contains_site(s):
            raise ValueError(f"{s} is outside {self!r}")
        if s.kind == VERTEX:
            cand = [
                Edge(HORIZONTAL, s.x, s.y),
                Edge(HORIZONTAL, s.x - 1, s.y),
                Edge(VERTICAL, s.x, s.y),
                Edge(VERTICAL, s.x, s.y - 1),
            ]
        else:
            cand = [
                Edge(HORIZONTAL, s.x, s.y),
                Edge(VERTICAL, s.x + 1, s.y),
                Edge(HORIZONTAL, s.x, s.y + 1),
                Edge(VERTICAL, s.x, s.y),
            ]
        return [e for e in cand if e in self._edge_set]

    def edge_vertices(self, e: Edge) -> list[tuple[Site, int]]:
        """Both endpoint vertices with their incidence signs."""
        tail, head = edge_endpoints(e)
        return [(tail, 1), (head, -1)]

    def edge_faces(self, e: Edge) -> list[tuple[Site, int]]:
        """Adjacent faces inside the patch with their incidence signs."""
        if e.direction == HORIZONTAL:
            cand = [face(e.x, e.y), face(e.x, e.y - 1)]
        else:
            cand = [face(e.x - 1, e.y), face(e.x, e.y)]
        return [(f, incidence_face(e, f)) for f in cand if self.contains_site(f)]

    def is_interior(self, s: Site) -> bool:
        """True when every edge of the star (vertex) or boundary (face)
        lies inside the patch; only interior sites carry Hamiltonian terms."""
        if s.kind == VERTEX:
            return 1 <= s.x <= self.width - 1 and 1 <= s.y <= self.height - 1
        return self.contains_site(s)

    def interior_vertices(self) -> list[Site]:
        return [v for v in self.vertices if self.is_interior(v)]

    def interior_faces(self) -> list[Site]:
        return list(self.faces)

    def interior_sites(self) -> list[Site]:
        return self.interior_vertices() + self.interior_faces()


@dataclass(frozen=True)
class Ribbon:
    """Oriented self-avoiding path in the direct or dual lattice.

    Each step pairs the direct-lattice edge it uses (direct ribbon) or
    crosses (dual ribbon) with the traversal sign beta = +1 when the step
    runs along the edge's own orientation (dual: the dual edge's)."""

    lattice: str
    start: Site
    end: Site
    steps: tuple[tuple[Edge, int], ...]

    def reverse(self) -> "Ribbon":
        return Ribbon(
            self.lattice,
            self.end,
            self.start,
            tuple((e, -b) for e, b in reversed(self.steps)),
        )

    def edges(self) -> list[Edge]:
        return [e for e, _ in self.steps]

    def __len__(self) -> int:
        return len(self.steps)


def find_ribbon(a: Site, b: Site, patch: LatticePatch) -> Ribbon:
    """Deterministic L-shaped ribbon from a to b: horizontal run, then
    vertical.  Vertex pairs give direct ribbons, face pairs dual ones."""
    if a.kind != b.kind:
        raise ValueError(f"mixed site kinds {a} -> {b}")
    for s in (a, b):
        if not patch.contains_site(s):
            raise ValueError(f"{s} is outside {patch!r}")
    steps: list[tuple[Edge, int]] = []
    x, y = a.x, a.y
    if a.kind == VERTEX:
        while x < b.x:
            steps.append((Edge(HORIZONTAL, x, y), 1))
            x += 1
        while x > b.x:
            steps.append((Edge(HORIZONTAL, x - 1, y), -1))
            x -= 1
        while y < b.y:
            steps.append((Edge(VERTICAL, x, y), 1))
            y += 1
        while y > b.y:
            steps.append((Edge(VERTICAL, x, y - 1), -1))
            y -= 1
        return Ribbon(DIRECT, a, b, tuple(steps))
    # dual ribbon between faces; dual horizontal edges point left, vertical up
    while x < b.x:
        steps.append((Edge(VERTICAL, x + 1, y), -1))
        x += 1
    while x > b.x:
        steps.append((Edge(VERTICAL, x, y), 1))
        x -= 1
    while y < b.y:
        steps.append((Edge(HORIZONTAL, x, y + 1), 1))
        y += 1
    while y > b.y:
        steps.append((Edge(HORIZONTAL, x, y), -1))
        y -= 1
    return Ribbon(DUAL, a, b, tuple(steps))


def ribbon_site_signs(ribbon: Ribbon, s: Site) -> list[int]:
    """sign(e, rho, s) = -zeta(e, s) * beta(e, rho) over the steps of the
    ribbon incident to s.  Interior passages contribute a cancelling pair;
    endpoints contribute a single sign."""
    if (ribbon.lattice == DIRECT) != (s.kind == VERTEX):
        raise ValueError(f"{s} does not match a {ribbon.lattice} ribbon")
    out = []
    for e, beta in ribbon.steps:
        z = incidence(e, s)
        if z:
            out.append(-z * beta)
    return out
