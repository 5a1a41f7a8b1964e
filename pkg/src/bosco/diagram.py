"""Link projections in planar code form and their checkerboard graphs.

A diagram is a list of crossings, each a quadruple of arc ids read
counterclockwise starting at the incoming under-arc, plus optional
crossingless components given by one closed arc each.  The text format
accepted by parse_diagram has one item per line:

    X a b c d    crossing, arcs counterclockwise from the incoming under-arc
    O a          closed component with no crossings, arc id a

Blank lines and anything after '#' are ignored.  Arc ids are arbitrary
whitespace-free tokens; each must occur exactly twice among the X lines,
or exactly once on an O line and nowhere else.

Port k of a crossing is the k'th position of its quadruple.  The under
strand runs port 0 to port 2; the over strand occupies ports 1 and 3.
A crossing is positive exactly when the over strand enters at port 3,
the port clockwise adjacent to the incoming under port: then the upper
arc runs lower left to upper right while the lower arc runs lower right
to upper left.

The crossing part of a diagram must be connected; split components are
expressed as O lines, which sit unnested in the unbounded face.
"""

from .matrix import int_det
from .planar import PlanarGraph

WHITE = 0
BLACK = 1

# Sector j at a crossing is the corner between ports j and j+1.  When
# sectors 0 and 2 are the black ones, the black edge, the under arc and
# the over arc occur clockwise at the crossing, so the edge has height
# equal to the index of its black sector pair.
_PAIR_HEIGHT = (0, 1)


class DiagramError(ValueError):
    """Planar code input that fails structural validation."""


class LinkDiagram:
    """A link projection: crossing quadruples plus crossingless loops."""

    __slots__ = ("crossings", "free_loops")

    def __init__(self, crossings, free_loops=()):
        self.crossings = tuple(tuple(c) for c in crossings)
        self.free_loops = tuple(free_loops)
        seen = {}
        for ci, quad in enumerate(self.crossings):
            if len(quad) != 4:
                raise DiagramError(f"crossing {ci} is not a quadruple")
            for k, arc in enumerate(quad):
                seen.setdefault(arc, []).append((ci, k))
        for arc, ports in seen.items():
            if len(ports) != 2:
                raise DiagramError(
                    f"arc {arc!r} occurs {len(ports)} times, expected 2")
        loops = set()
        for arc in self.free_loops:
            if arc in seen or arc in loops:
                raise DiagramError(f"loop arc {arc!r} reused")
            loops.add(arc)
        if not self.crossings and not self.free_loops:
            raise DiagramError("empty diagram")

    def __eq__(self, other):
        return (isinstance(other, LinkDiagram)
                and self.crossings == other.crossings
                and self.free_loops == other.free_loops)

    def __hash__(self):
        return hash((self.crossings, self.free_loops))

    def __repr__(self):
        return (f"LinkDiagram({len(self.crossings)} crossings, "
                f"{len(self.free_loops)} loops)")

    def to_text(self):
        lines = ["X " + " ".join(str(a) for a in quad)
                 for quad in self.crossings]
        lines += [f"O {arc}" for arc in self.free_loops]
        return "\n".join(lines) + "\n"


def parse_diagram(text):
    """Parse the planar code text format into a LinkDiagram."""
    crossings = []
    loops = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "X" and len(toks) == 5:
            crossings.append(tuple(toks[1:]))
        elif toks[0] == "O" and len(toks) == 2:
            loops.append(toks[1])
        else:
            raise DiagramError(f"line {lineno}: cannot parse {raw!r}")
    d = LinkDiagram(crossings, loops)
    if d.crossings:
        trace_faces(d)
    return d


# -- the four-valent map ---------------------------------------------------

def _twins(d):
    """Map each dart (crossing, port) to the other end of its arc."""
    ports = {}
    for ci, quad in enumerate(d.crossings):
        for k, arc in enumerate(quad):
            ports.setdefault(arc, []).append((ci, k))
    twin = {}
    for pair in ports.values():
        a, b = pair
        twin[a] = b
        twin[b] = a
    return twin


def trace_faces(d):
    """Faces of the crossing part as dart cycles, canonically ordered.

    The successor of a dart is the counterclockwise next port after its
    twin, which keeps every face on the left: bounded faces come out
    counterclockwise.  Validates one sphere worth of Euler count, so the
    crossing part must be connected and planar.
    """
    twin = _twins(d)
    succ = {}
    for ci, kk in twin:
        tci, tk = twin[(ci, kk)]
        succ[(ci, kk)] = (tci, (tk + 1) % 4)
    faces = []
    left = set(succ)
    while left:
        start = min(left)
        walk = []
        cur = start
        while True:
            walk.append(cur)
            left.discard(cur)
            cur = succ[cur]
            if cur == start:
                break
        lo = walk.index(min(walk))
        faces.append(tuple(walk[lo:] + walk[:lo]))
    faces.sort(key=lambda f: f[0])
    n = len(d.crossings)
    if n and len(faces) != n + 2:
        raise DiagramError("planar code is not a connected sphere diagram")
    return tuple(faces)


def _face_of(faces):
    out = {}
    for i, f in enumerate(faces):
        for dart in f:
            out[dart] = i
    return out


def outer_face_index(d, faces=None):
    """The face holding the first crossing's incoming under dart."""
    faces = trace_faces(d) if faces is None else faces
    want = (0, 0)
    for i, f in enumerate(faces):
        if want in f:
            return i
    raise DiagramError("no faces")


def _sector_face(face_of, ci, j):
    # sector j sits in the face entered through port j+1
    return face_of[(ci, (j + 1) % 4)]


def checkerboard(d, flip=False):
    """Two-color the faces; the unbounded face is white unless flipped.

    Returns a list indexed by face giving WHITE or BLACK.  Free loops are
    rejected under flip because their interiors must stay black.
    """
    if flip and d.free_loops:
        raise DiagramError("flipped coloring undefined with crossingless "
                           "components")
    faces = trace_faces(d) if d.crossings else ()
    if not faces:
        return []
    face_of = _face_of(faces)
    twin = _twins(d)
    colors = [None] * len(faces)
    outer = outer_face_index(d, faces)
    colors[outer] = BLACK if flip else WHITE
    stack = [outer]
    while stack:
        i = stack.pop()
        for dart in faces[i]:
            j = face_of[twin[dart]]
            want = colors[i] ^ 1
            if colors[j] is None:
                colors[j] = want
                stack.append(j)
            elif colors[j] != want:
                raise DiagramError("faces do not checkerboard")
    return colors


def _black_pair(d, faces, face_of, colors, ci):
    """Index p of the black sector pair {p, p+2} at crossing ci."""
    p = 0 if colors[_sector_face(face_of, ci, 0)] == BLACK else 1
    if colors[_sector_face(face_of, ci, p + 2)] != BLACK:
        raise DiagramError("sectors do not alternate")
    return p


def black_graph(d, flip=False, base=None):
    """The checkerboard graph on the black faces, one edge per crossing.

    Vertices are face indices, plus one integer per free loop for its
    black interior.  Edge ids are "c0", "c1", ... matching crossing
    order; end 0 sits at the black sector with the smaller index.  The
    height of edge "ci" is 0 when the black edge, under arc and over arc
    occur clockwise at crossing ci, else 1.

    The base vertex is the one designated, else the unbounded face if it
    is black, else the smallest black vertex on the unbounded face.
    """
    if not d.crossings:
        # each loop interior is an isolated black vertex
        rotation = {i: () for i in range(len(d.free_loops))}
        b = base if base is not None else 0
        return PlanarGraph({}, rotation, outer_dart=None, heights={},
                           base=b)

    faces = trace_faces(d)
    face_of = _face_of(faces)
    colors = checkerboard(d, flip)
    outer = outer_face_index(d, faces)

    edges = {}
    heights = {}
    pair = {}
    for ci in range(len(d.crossings)):
        p = _black_pair(d, faces, face_of, colors, ci)
        pair[ci] = p
        v0 = _sector_face(face_of, ci, p)
        v1 = _sector_face(face_of, ci, p + 2)
        edges[f"c{ci}"] = (v0, v1)
        heights[f"c{ci}"] = _PAIR_HEIGHT[p]

    rotation = {}
    for i, f in enumerate(faces):
        if colors[i] != BLACK:
            continue
        corners = []
        for dart in f:
            ci, k = dart
            j = (k - 1) % 4  # sector entered through port k
            corners.append((f"c{ci}", 0 if j == pair[ci] else 1))
        rotation[i] = corners

    nfaces = len(faces)
    for li in range(len(d.free_loops)):
        rotation[nfaces + li] = ()

    # The face orbit of a dart leaving the black sector s walks the white
    # sector s+1 on its right, which identifies black graph faces with
    # white faces.
    def orbit_white(ci, end):
        s = pair[ci] if end == 0 else pair[ci] + 2
        return _sector_face(face_of, ci, (s + 1) % 4)

    if colors[outer] == WHITE:
        target = outer
    else:
        whites = sorted(
            {_sector_face(face_of, ci, pair[ci] + 1) for ci, k in faces[outer]}
            | {_sector_face(face_of, ci, (pair[ci] - 1) % 4)
               for ci, k in faces[outer]})
        target = whites[0]
    outer_dart = min((ci, end) for ci in range(len(d.crossings))
                     for end in (0, 1) if orbit_white(ci, end) == target)
    outer_dart = (f"c{outer_dart[0]}", outer_dart[1])

    if base is None:
        if colors[outer] == BLACK:
            base = outer
        else:
            onext = {v for dart in faces[outer]
                     for v in edges[f"c{dart[0]}"]}
            onext |= {nfaces + li for li in range(len(d.free_loops))}
            base = min(onext)
    elif base not in rotation:
        raise DiagramError(f"base {base!r} is not a black vertex")
    return PlanarGraph(edges, rotation, outer_dart=outer_dart,
                       heights=heights, base=base)


def medial_diagram(graph):
    """The link diagram whose black checkerboard graph is the given one.

    One crossing per edge; the arcs are the corners between consecutive
    darts at each vertex.  A height-0 edge routes the strand hugging
    its endpoints over the other; height 1 routes it under.  Isolated
    vertices become crossingless loops drawn in the unbounded region.
    """
    from .planar import _key

    if any(graph.heights.get(e) not in (0, 1) for e in graph.edges):
        raise DiagramError("edge heights must be 0 or 1")
    order = sorted(graph.edges, key=_key)
    pos = {}
    for v, darts in graph.rotation.items():
        for i, dd in enumerate(darts):
            pos[dd] = (v, i)

    def after(dart):
        v, i = pos[dart]
        return f"{v}.{i}"

    def before(dart):
        v, i = pos[dart]
        return f"{v}.{(i - 1) % len(graph.rotation[v])}"

    quads = {}
    for eid in order:
        du, dw = (eid, 0), (eid, 1)
        if graph.heights[eid] == 0:
            quads[eid] = [after(du), before(du), after(dw), before(dw)]
        else:
            quads[eid] = [before(dw), after(du), before(du), after(dw)]

    inc = {}
    for eid in order:
        for k, a in enumerate(quads[eid]):
            inc.setdefault(a, []).append((eid, k))

    def entry_across(e, k):
        # leave through port k+2, enter the next crossing there
        out = (e, (k + 2) % 4)
        a, b = inc[quads[e][out[1]]]
        return b if a == out else a

    # orient each strand walk, then start every quad listing where the
    # under strand enters so the written form is orientable
    rotate = set()
    seen = set()
    for eid in order:
        for k0 in range(4):
            if (eid, k0) in seen:
                continue
            walk = []
            cur = (eid, k0)
            while cur not in seen:
                seen.add(cur)
                walk.append(cur)
                cur = entry_across(*cur)
            rev = {(e, (k + 2) % 4) for e, k in walk}
            seen |= rev
            key = lambda ek: (_key(ek[0]), ek[1])
            use = set(walk) if min(walk, key=key) <= min(rev, key=key) else rev
            for e, k in use:
                if k == 2:
                    if (e, 0) in use:
                        raise DiagramError("strand walk is unorientable")
                    rotate.add(e)

    final = []
    for eid in order:
        q = quads[eid]
        if eid in rotate:
            q = q[2:] + q[:2]
        final.append(tuple(q))
    loops = [f"{v}.o" for v in sorted(graph.rotation, key=_key)
             if not graph.rotation[v]]
    return LinkDiagram(final, loops)


# -- orientation -----------------------------------------------------------

def _oriented_entries(d):
    """Choose a direction per component; darts where strands enter.

    The under strand must enter at port 0.  Components that never pass
    under keep the direction of their smallest dart.
    """
    twin = _twins(d)

    def nxt(dart):
        ci, k = dart
        return twin[(ci, (k + 2) % 4)]

    orbit_of = {}
    orbits = []
    for start in sorted(twin):
        if start in orbit_of:
            continue
        orb = []
        cur = start
        while cur not in orbit_of:
            orbit_of[cur] = len(orbits)
            orb.append(cur)
            cur = nxt(cur)
        orbits.append(orb)

    chosen = set()
    done = set()
    for idx, orb in enumerate(orbits):
        if idx in done:
            continue
        ci, k = orb[0]
        ridx = orbit_of[(ci, (k + 2) % 4)]
        done.add(idx)
        done.add(ridx)
        fwd = any(k == 0 for _, k in orb)
        bwd = any(k == 2 for _, k in orb)
        if fwd and bwd:
            raise DiagramError("under strands orient inconsistently")
        pick = orbits[ridx] if bwd else orb
        if bwd and any(k == 2 for _, k in pick):
            raise DiagramError("under strands orient inconsistently")
        chosen.update(pick)
    return chosen


def negative_crossing_count(d):
    """Crossings whose over strand enters at port 1."""
    if not d.crossings:
        return 0
    entries = _oriented_entries(d)
    n = 0
    for ci in range(len(d.crossings)):
        over_in = 1 if (ci, 1) in entries else 3
        if (ci, over_in) not in entries:
            raise DiagramError("over strand enters twice or never")
        if over_in == 1:
            n += 1
    return n


# -- Goeritz determinant ---------------------------------------------------

def goeritz_det(d, flip=False):
    """|det| of the link via the Goeritz form on white faces.

    Each crossing joins its two white sectors with sign +1 or -1 by
    checkerboard type; the form is the signed Laplacian on white faces
    with one face deleted.  Split diagrams have determinant 0.
    """
    if not d.crossings:
        return 1 if len(d.free_loops) == 1 else 0
    if d.free_loops:
        return 0
    faces = trace_faces(d)
    face_of = _face_of(faces)
    colors = checkerboard(d, flip)
    whites = sorted(i for i, c in enumerate(colors) if c == WHITE)
    pos = {w: i for i, w in enumerate(whites)}
    m = len(whites)
    G = [[0] * m for _ in range(m)]
    for ci in range(len(d.crossings)):
        p = _black_pair(d, faces, face_of, colors, ci)
        eta = 1 if p == 0 else -1
        w1 = pos[_sector_face(face_of, ci, p + 1)]
        w2 = pos[_sector_face(face_of, ci, (p - 1) % 4)]
        if w1 == w2:
            continue
        G[w1][w2] -= eta
        G[w2][w1] -= eta
        G[w1][w1] += eta
        G[w2][w2] += eta
    minor = [row[1:] for row in G[1:]]
    if not minor:
        return 1
    return abs(int_det(minor))
