"""Embedded planar multigraphs as rotation systems.

A graph stores, for every vertex, the counterclockwise cyclic order of
its incident darts; a dart is (edge id, end) with end 0 at the first
endpoint and end 1 at the second. Faces are the orbits of the map
"counterclockwise successor of the twin", which puts every face on the
LEFT of its darts: bounded faces come out counterclockwise, the outer
face clockwise. The outer face is wherever the designated outer dart
lies.

Minors return new graphs. Deleting an edge merges the two faces beside
it; contracting a non-loop edge splices one rotation into the other.
Both revalidate the Euler count, so a broken rotation system fails fast
instead of corrupting downstream tree enumerations.
"""

from __future__ import annotations


def _key(x):
    return (0, x) if isinstance(x, int) else (1, str(x))


def _dart_key(d):
    return (_key(d[0]), d[1])


class PlanarGraph:
    __slots__ = ("edges", "rotation", "outer_dart", "heights", "base",
                 "_faces", "_fod")

    def __init__(self, edges, rotation, outer_dart=None, heights=None, base=None,
                 validate=True):
        self.edges = dict(edges)
        self.rotation = {v: tuple(darts) for v, darts in rotation.items()}
        self.outer_dart = outer_dart
        self.heights = dict(heights or {})
        self.base = base
        self._faces = None
        self._fod = None
        if validate:
            self.validate()

    # -- structure ---------------------------------------------------------

    @property
    def vertices(self):
        return self.rotation.keys()

    def edge_ids(self):
        return sorted(self.edges, key=_key)

    def twin(self, dart):
        eid, end = dart
        return (eid, 1 - end)

    def dart_vertex(self, dart):
        eid, end = dart
        return self.edges[eid][end]

    def is_loop(self, eid):
        u, v = self.edges[eid]
        return u == v

    def components(self):
        verts = list(self.rotation)
        parent = {v: v for v in verts}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for u, v in self.edges.values():
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        groups = {}
        for v in verts:
            groups.setdefault(find(v), []).append(v)
        return list(groups.values())

    def validate(self):
        seen = {}
        for v, darts in self.rotation.items():
            for d in darts:
                eid, end = d
                if eid not in self.edges or end not in (0, 1):
                    raise ValueError(f"unknown dart {d!r}")
                if self.edges[eid][end] != v:
                    raise ValueError(f"dart {d!r} filed at the wrong vertex")
                if d in seen:
                    raise ValueError(f"dart {d!r} appears twice")
                seen[d] = v
        for eid, (u, v) in self.edges.items():
            for end, w in ((0, u), (1, v)):
                if (eid, end) not in seen:
                    raise ValueError(f"edge {eid!r} missing its dart at {w!r}")
        for v in (e for pair in self.edges.values() for e in pair):
            if v not in self.rotation:
                raise ValueError(f"endpoint {v!r} has no rotation")
        if self.base is not None and self.base not in self.rotation:
            raise ValueError("base vertex not in the graph")
        if self.edges:
            if self.outer_dart is None:
                raise ValueError("graph with edges needs an outer dart")
            eid, end = self.outer_dart
            if eid not in self.edges:
                raise ValueError("outer dart on a missing edge")
        # Euler count, one sphere per component; a dartless vertex is
        # its own component and carries one face the trace cannot see
        ncomp = len(self.components())
        nfaces = len(self._trace())
        nfaces += sum(1 for darts in self.rotation.values() if not darts)
        if nfaces != len(self.edges) - len(self.rotation) + 2 * ncomp:
            raise ValueError("rotation system is not planar")

    # -- faces -------------------------------------------------------------

    def _trace(self):
        succ = {}
        for darts in self.rotation.values():
            for i, d in enumerate(darts):
                succ[d] = darts[(i + 1) % len(darts)]
        faces = []
        unused = set(succ)
        for start in sorted(unused, key=_dart_key):
            if start not in unused:
                continue
            orbit = []
            d = start
            while True:
                orbit.append(d)
                unused.discard(d)
                d = succ[self.twin(d)]
                if d == start:
                    break
            faces.append(tuple(orbit))
        return faces

    def faces(self):
        """Face orbits in deterministic order, each starting at its least dart."""
        if self._faces is None:
            traced = []
            for orbit in self._trace():
                i = min(range(len(orbit)), key=lambda k: _dart_key(orbit[k]))
                traced.append(orbit[i:] + orbit[:i])
            traced.sort(key=lambda f: _dart_key(f[0]))
            self._faces = tuple(traced)
        return self._faces

    def face_of_dart(self):
        if self._fod is None:
            out = {}
            for i, orbit in enumerate(self.faces()):
                for d in orbit:
                    out[d] = i
            self._fod = out
        return self._fod

    def outer_face_index(self):
        if self.outer_dart is None:
            return None
        return self.face_of_dart()[self.outer_dart]

    def bounded_faces(self):
        outer = self.outer_face_index()
        return tuple(i for i in range(len(self.faces())) if i != outer)

    # -- minors ------------------------------------------------------------

    def _outer_after(self, dropped_eid, merged_ok):
        """New outer dart once dropped_eid disappears.

        merged_ok lists faces whose surviving darts remain on the outer
        face afterwards: just the outer face for a contraction, the two
        faces beside the edge for a deletion.
        """
        if self.outer_dart is None or self.outer_dart[0] != dropped_eid:
            return self.outer_dart
        survivors = []
        faces = self.faces()
        for fi in merged_ok:
            survivors += [d for d in faces[fi] if d[0] != dropped_eid]
        if not survivors:
            return None
        return min(survivors, key=_dart_key)

    def delete_edge(self, eid):
        fod = self.face_of_dart()
        beside = {fod[(eid, 0)], fod[(eid, 1)]}
        outer = self.outer_face_index()
        merged_ok = beside if outer in beside else set()
        new_outer = self._outer_after(eid, sorted(merged_ok))
        edges = {e: uv for e, uv in self.edges.items() if e != eid}
        rotation = {
            v: tuple(d for d in darts if d[0] != eid)
            for v, darts in self.rotation.items()
        }
        heights = {e: h for e, h in self.heights.items() if e != eid}
        if not edges:
            new_outer = None
        return PlanarGraph(edges, rotation, new_outer, heights, self.base)

    def contract_edge(self, eid, keep=None):
        u, v = self.edges[eid]
        if u == v:
            raise ValueError("cannot contract a loop")
        if keep is None:
            keep = u if u == self.base else v if v == self.base else min(u, v, key=_key)
        if keep not in (u, v):
            raise ValueError("keep must be an endpoint of the contracted edge")
        lost = v if keep == u else u
        ru = list(self.rotation[keep])
        rv = list(self.rotation[lost])
        du = (eid, 0 if self.edges[eid][0] == keep else 1)
        dv = self.twin(du)
        iu, iv = ru.index(du), rv.index(dv)
        spliced = ru[:iu] + rv[iv + 1:] + rv[:iv] + ru[iu + 1:]
        rotation = {w: darts for w, darts in self.rotation.items()
                    if w not in (u, v)}
        rotation[keep] = tuple(spliced)
        edges = {}
        for e, (a, b) in self.edges.items():
            if e == eid:
                continue
            edges[e] = (keep if a == lost else a, keep if b == lost else b)
        heights = {e: h for e, h in self.heights.items() if e != eid}
        outer = self.outer_face_index()
        new_outer = self._outer_after(eid, [outer] if outer is not None else [])
        if not edges:
            new_outer = None
        base = self.base
        if base == lost:
            base = keep
        return PlanarGraph(edges, rotation, new_outer, heights, base)

    # -- cycles ------------------------------------------------------------

    def tree_adjacency(self, tree_edges):
        adj = {}
        for e in tree_edges:
            a, b = self.edges[e]
            adj.setdefault(a, []).append((b, e))
            adj.setdefault(b, []).append((a, e))
        return adj

    def tree_path(self, tree_edges, src, dst):
        """Edge list of the unique path in the spanning tree."""
        adj = self.tree_adjacency(tree_edges)
        prev = {src: (None, None)}
        stack = [src]
        while stack:
            w = stack.pop()
            if w == dst:
                break
            for x, e in adj.get(w, ()):
                if x not in prev:
                    prev[x] = (w, e)
                    stack.append(x)
        if dst not in prev:
            raise ValueError("vertices lie in different tree components")
        path = []
        w = dst
        while prev[w][0] is not None:
            path.append(prev[w][1])
            w = prev[w][0]
        path.reverse()
        return path

    def fundamental_cycle(self, tree_edges, f):
        """Edges of the cycle created by adding f to the tree."""
        a, b = self.edges[f]
        if a == b:
            return [f]
        return self.tree_path(tree_edges, a, b) + [f]

    def cycle_interior(self, cycle_edges):
        """Indices of the faces strictly inside the cycle."""
        cyc = set(cycle_edges)
        fod = self.face_of_dart()
        nfaces = len(self.faces())
        adj = [set() for _ in range(nfaces)]
        for eid in self.edges:
            if eid in cyc:
                continue
            i, j = fod[(eid, 0)], fod[(eid, 1)]
            adj[i].add(j)
            adj[j].add(i)
        outer = self.outer_face_index()
        seen = {outer}
        stack = [outer]
        while stack:
            i = stack.pop()
            for j in adj[i]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        interior = frozenset(range(nfaces)) - seen
        if cyc and not interior:
            raise ValueError("cycle encloses no face; rotation data inconsistent")
        return interior

    def cycle_ccw_walk(self, cycle_edges, interior=None):
        """Darts of the cycle in counterclockwise order (interior on the left)."""
        if interior is None:
            interior = self.cycle_interior(cycle_edges)
        fod = self.face_of_dart()
        darts = {}
        for e in cycle_edges:
            picks = [d for d in ((e, 0), (e, 1)) if fod[d] in interior]
            if len(picks) != 1:
                raise ValueError("cycle edge does not separate interior from exterior")
            darts[e] = picks[0]
        start = darts[min(cycle_edges, key=_key)]
        walk = [start]
        cyc = set(cycle_edges)
        while len(walk) < len(cycle_edges):
            head = self.dart_vertex(self.twin(walk[-1]))
            nxt = [d for e, d in darts.items()
                   if e != walk[-1][0] and self.dart_vertex(d) == head]
            if len(walk) > 1:
                nxt = [d for d in nxt if d != walk[-2]]
            if len(nxt) != 1:
                raise ValueError("cycle walk is not a simple closed curve")
            walk.append(nxt[0])
        return walk

    def swap_parity(self, tree_edges, e, f, base):
        """Orientation parity and interior faces for the swap T - e + f.

        Returns (positive, interior) where positive means e comes before
        f along the counterclockwise fundamental cycle walk started just
        after the reference vertex, the entry point of the base.
        """
        cycle = self.fundamental_cycle(tree_edges, f)
        if e not in cycle:
            raise ValueError("edge e is not on the fundamental cycle of f")
        interior = self.cycle_interior(cycle)
        walk = self.cycle_ccw_walk(cycle, interior)
        cycverts = {self.dart_vertex(d) for d in walk}
        ref = self._entry_vertex(tree_edges, cycverts, base)
        i0 = next(i for i, d in enumerate(walk) if self.dart_vertex(d) == ref)
        order = [walk[(i0 + k) % len(walk)][0] for k in range(len(walk))]
        positive = order.index(e) < order.index(f)
        return positive, interior

    def _entry_vertex(self, tree_edges, cycverts, base):
        if base in cycverts:
            return base
        adj = self.tree_adjacency(tree_edges)
        prev = {base: None}
        queue = [base]
        hit = None
        while queue and hit is None:
            nextq = []
            for w in queue:
                for x, _ in adj.get(w, ()):
                    if x not in prev:
                        prev[x] = w
                        if x in cycverts:
                            hit = x
                            break
                        nextq.append(x)
                if hit is not None:
                    break
            queue = nextq
        if hit is None:
            raise ValueError("base cannot reach the cycle through the tree")
        # first cycle vertex on the tree path from the base
        path = []
        w = hit
        while w is not None:
            path.append(w)
            w = prev[w]
        path.reverse()
        return next(v for v in path if v in cycverts)


def _walk_code(g, start):
    """Traversal encoding of a connected graph anchored at one dart."""
    rot = g.rotation
    vnum = {}
    entry = {}
    enum = {}
    eside = {}
    order = []

    def admit(v, d):
        if v not in vnum:
            vnum[v] = len(vnum)
            entry[v] = d
            order.append(v)

    admit(g.dart_vertex(start), start)
    rows = []
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        darts = rot[v]
        j = darts.index(entry[v])
        row = []
        for k in range(len(darts)):
            d = darts[(j + k) % len(darts)]
            eid = d[0]
            if eid not in enum:
                enum[eid] = len(enum)
                eside[eid] = d[1]
            row.append((enum[eid], 0 if d[1] == eside[eid] else 1,
                        g.heights.get(eid, 0)))
            t = g.twin(d)
            admit(g.dart_vertex(t), t)
        rows.append(tuple(row))
    return tuple(rows)


def canonical_code(g):
    """Relabeling invariant code for an embedded graph with edge heights.

    Two connected graphs share a code exactly when some bijection of
    vertices and edges matches rotations, heights, and the outer face.
    The base vertex is ignored. Disconnected graphs only get a coarse
    summary, enough to key caches of complexes with no spanning trees.
    """
    if not g.edges:
        return ("trivial", len(g.rotation))
    if len(g.components()) > 1:
        return ("split", len(g.rotation), len(g.edges),
                tuple(sorted(g.heights[e] for e in g.edges)))
    best = None
    for anchor in g.faces()[g.outer_face_index()]:
        code = _walk_code(g, anchor)
        if best is None or code < best:
            best = code
    return ("embedded",) + best
