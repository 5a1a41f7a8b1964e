"""The spanning-tree complex of an embedded graph with edge heights.

Generators are spanning trees, graded by total height: the number of
height-1 edges inside the tree plus the number of height-0 edges outside
it. The differential raises height by 2, sending a tree T to every tree
T - e + f with e a height-0 edge of T on the fundamental cycle of a
height-1 edge f outside T. The coefficient of such a swap is

    1/(1 + alpha) + 1/(1 + beta)

where alpha multiplies the variables of the faces interior to the
fundamental cycle, inverted when the swap is orientation-negative, and
beta multiplies the variables of the vertices cut off from the base by
removing e. Entries are stored structurally (face tuple, inversion flag,
vertex tuple) and rendered on demand into exact field elements,
univariate fractions, or GF(2**16) values, so one build serves both the
symbolic and the specialized rank paths.
"""

from __future__ import annotations

from fractions import Fraction

from .field import FieldElement, ONE, mono, poly
from .gf2 import GF16, Frac1, draw_exponents
from .matrix import int_det, retry_rng
from .planar import _key

# -- spanning trees ---------------------------------------------------------


def _component_count(vertices, edge_pairs):
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    n = len(parent)
    for u, v in edge_pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            n -= 1
    return n


def spanning_trees(graph):
    """All spanning trees as frozensets of edge ids, deterministically ordered."""
    vertices = list(graph.vertices)
    edges = {e: uv for e, uv in graph.edges.items()}
    if _component_count(vertices, edges.values()) != 1:
        return []
    out = []
    order = sorted(edges, key=_key)

    def recurse(remaining, chosen, nverts):
        if nverts == 1:
            out.append(frozenset(chosen))
            return
        live = [e for e in remaining if edges[e][0] != edges[e][1]]
        if not live:
            return
        e = live[0]
        rest = [x for x in live if x != e]
        u, v = edges[e]
        # contract e: relabel v as u everywhere
        saved = {x: edges[x] for x in rest}
        for x in rest:
            a, b = edges[x]
            edges[x] = (u if a == v else a, u if b == v else b)
        recurse(rest, chosen + [e], nverts - 1)
        for x in rest:
            edges[x] = saved[x]
        # delete e, if the rest stays connected
        verts = set()
        for x in rest:
            verts.update(edges[x])
        if len(verts) == nverts and _component_count(verts, [edges[x] for x in rest]) == 1:
            recurse(rest, chosen, nverts)

    recurse(order, [], len(vertices))
    out.sort(key=lambda t: sorted(map(_key, t)))
    return out


def tree_count(graph):
    """Number of spanning trees by the matrix-tree theorem."""
    verts = sorted(graph.vertices, key=_key)
    if not verts:
        return 0
    idx = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    lap = [[0] * n for _ in range(n)]
    for u, v in graph.edges.values():
        if u == v:
            continue
        iu, iv = idx[u], idx[v]
        lap[iu][iu] += 1
        lap[iv][iv] += 1
        lap[iu][iv] -= 1
        lap[iv][iu] -= 1
    if n == 1:
        return 1
    minor = [row[1:] for row in lap[1:]]
    return int_det(minor)


def tree_height(graph, tree):
    h = 0
    for e in graph.edges:
        ht = graph.heights[e]
        if ht == 1 and e in tree:
            h += 1
        elif ht == 0 and e not in tree:
            h += 1
    return h


# -- the complex ------------------------------------------------------------


class Entry:
    """One differential matrix entry, stored structurally."""

    __slots__ = ("row", "col", "alpha", "inverted", "beta")

    def __init__(self, row, col, alpha, inverted, beta):
        self.row = row
        self.col = col
        self.alpha = alpha
        self.inverted = inverted
        self.beta = beta

    def exact(self):
        """Coefficient as an exact field element."""
        am = tuple((v, 1) for v in self.alpha)
        bm = tuple((v, 1) for v in self.beta)
        fa = FieldElement(ONE, (poly((), am),))
        if self.inverted:
            # 1/(1 + a^-1) = 1 + 1/(1 + a) in characteristic 2
            fa = FieldElement(ONE) + fa
        fb = FieldElement(ONE, (poly((), bm),))
        return fa + fb

    def frac1(self, exponents):
        ea = sum(exponents[v] for v in self.alpha)
        eb = sum(exponents[v] for v in self.beta)
        if self.inverted:
            fa = Frac1(1 << ea, 1 ^ 1 << ea)
        else:
            fa = Frac1(1, 1 ^ 1 << ea)
        return fa + Frac1(1, 1 ^ 1 << eb)

    def gf16(self, exponents, gf, pows):
        a = pows[sum(exponents[v] for v in self.alpha) % gf.ORDER]
        if self.inverted:
            a = gf.inv(a)
        b = pows[sum(exponents[v] for v in self.beta) % gf.ORDER]
        return gf.inv(1 ^ a) ^ gf.inv(1 ^ b)


class TreeComplex:
    """Spanning-tree complex of one embedded graph with heights and base."""

    def __init__(self, graph):
        if graph.base is None:
            raise ValueError("complex needs a base vertex")
        for e in graph.edges:
            if graph.heights.get(e) not in (0, 1):
                raise ValueError(f"edge {e!r} has no height")
        self.graph = graph
        self.trees = spanning_trees(graph)
        self.tree_index = {t: i for i, t in enumerate(self.trees)}
        self.height = [tree_height(graph, t) for t in self.trees]
        self.by_height = {}
        for i, h in enumerate(self.height):
            self.by_height.setdefault(h, []).append(i)
        self.local = {}
        for h, idxs in self.by_height.items():
            for j, i in enumerate(idxs):
                self.local[i] = j
        self.vertex_var = {
            v: f"v_{v}" for v in graph.vertices if v != graph.base
        }
        self.face_var = {
            fi: f"f{n + 1}" for n, fi in enumerate(graph.bounded_faces())
        }
        self.entries = {h: [] for h in self.by_height}
        self._build_entries()

    # construction

    def _build_entries(self):
        g = self.graph
        h1_edges = sorted(
            (e for e, h in g.heights.items() if h == 1), key=_key
        )
        beta_cache = {}
        for ti, tree in enumerate(self.trees):
            h = self.height[ti]
            col = self.local[ti]
            for f in h1_edges:
                if f in tree or g.is_loop(f):
                    continue
                cycle = g.fundamental_cycle(tree, f)
                interior = g.cycle_interior(cycle)
                walk = g.cycle_ccw_walk(cycle, interior)
                cycverts = {g.dart_vertex(d) for d in walk}
                ref = g._entry_vertex(tree, cycverts, g.base)
                i0 = next(
                    i for i, d in enumerate(walk) if g.dart_vertex(d) == ref
                )
                order = [
                    walk[(i0 + k) % len(walk)][0] for k in range(len(walk))
                ]
                pos = {e: k for k, e in enumerate(order)}
                alpha = tuple(sorted(self.face_var[i] for i in interior))
                for e in cycle:
                    if e == f or g.heights[e] != 0:
                        continue
                    target = tree - {e} | {f}
                    tj = self.tree_index[target]
                    assert self.height[tj] == h + 2
                    if (ti, e) not in beta_cache:
                        beta_cache[(ti, e)] = self._beta(tree, e)
                    entry = Entry(
                        self.local[tj],
                        col,
                        alpha,
                        not pos[e] < pos[f],
                        beta_cache[(ti, e)],
                    )
                    self.entries[h].append(entry)
        for h in self.entries:
            self.entries[h].sort(key=lambda en: (en.row, en.col))

    def _beta(self, tree, e):
        g = self.graph
        adj = g.tree_adjacency(tree - {e})
        a, b = g.edges[e]
        seen = {a}
        stack = [a]
        while stack:
            w = stack.pop()
            for x, _ in adj.get(w, ()):
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        if g.base in seen:
            comp = self._reach(adj, b)
        else:
            comp = seen
        assert g.base not in comp
        return tuple(sorted(self.vertex_var[v] for v in comp))

    @staticmethod
    def _reach(adj, start):
        seen = {start}
        stack = [start]
        while stack:
            w = stack.pop()
            for x, _ in adj.get(w, ()):
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        return seen

    # shape

    def dims(self):
        return {h: len(idxs) for h, idxs in sorted(self.by_height.items())}

    def occupied_heights(self):
        return sorted(self.by_height)

    def euler(self):
        """Alternating sum of dimensions, signs stepping with height/2."""
        total = 0
        for h, idxs in self.by_height.items():
            total += (-1) ** (h // 2) * len(idxs)
        return total

    def determinant(self):
        return abs(self.euler())

    def variables(self):
        return sorted(self.vertex_var.values()) + sorted(self.face_var.values())

    # rendering

    def matrix_shape(self, h):
        rows = len(self.by_height.get(h + 2, ()))
        cols = len(self.by_height.get(h, ()))
        return rows, cols

    def differential_exact(self, h):
        rows, cols = self.matrix_shape(h)
        zero = FieldElement(frozenset())
        m = [[zero] * cols for _ in range(rows)]
        for en in self.entries.get(h, ()):
            m[en.row][en.col] = m[en.row][en.col] + en.exact()
        return m

    def differential_frac1(self, h, exponents):
        rows, cols = self.matrix_shape(h)
        m = [[Frac1(0)] * cols for _ in range(rows)]
        for en in self.entries.get(h, ()):
            m[en.row][en.col] = m[en.row][en.col] + en.frac1(exponents)
        return m

    def differential_gf16(self, h, exponents, gf, pows):
        rows, cols = self.matrix_shape(h)
        m = [[0] * cols for _ in range(rows)]
        for en in self.entries.get(h, ()):
            m[en.row][en.col] ^= en.gf16(exponents, gf, pows)
        return m

    def _pow_table(self, exponents, gf):
        need = 0
        for ens in self.entries.values():
            for en in ens:
                need = max(
                    need,
                    sum(exponents[v] for v in en.alpha),
                    sum(exponents[v] for v in en.beta),
                )
        return gf.powers_of_t(need)

    # verification

    def _square_terms(self, h):
        """Composite entries of the height h double step, as term parities.

        Every matrix entry is a sum of simple terms, 1 or 1/(1 + m) for a
        monomial m, so a two-step composite is a sum of terms indexed by
        their denominator monomial multisets. Terms cancel in pairs over
        the two-element field; the map returned sends each composite cell
        to the multiset keys left with odd parity.
        """
        step_up = {}
        for en in self.entries.get(h + 2, ()):
            step_up.setdefault(en.col, []).append(en)
        cells = {}
        for en in self.entries.get(h, ()):
            for fn in step_up.get(en.row, ()):
                parity = cells.setdefault((fn.row, en.col), {})
                for u in _entry_terms(en):
                    for v in _entry_terms(fn):
                        key = tuple(sorted(u + v))
                        parity[key] = parity.get(key, 0) ^ 1
        return cells

    def _exact_square_zero(self, h):
        """Does the symbolic composite out of height h vanish identically?

        Paired terms cancel syntactically; whatever survives the pairing
        is summed in exact field arithmetic, so the verdict is exact even
        when distinct multiset keys denote equal fractions.
        """
        for parity in self._square_terms(h).values():
            left = [key for key, odd in parity.items() if odd]
            if not left:
                continue
            total = FieldElement(frozenset())
            for key in left:
                total = total + _term_exact(key)
            if total:
                return False
        return True

    def verify_d_squared(self, seed=0, samples=3):
        """d squared = 0, exactly and under seeded specializations.

        Exact symbolic composition runs first, term by term so that the
        cost stays near the entry count; on top of that the check runs
        under `samples` independent seeded specializations.
        """
        heights = self.occupied_heights()
        pairs = [h for h in heights if h + 2 in self.by_height and h + 4 in self.by_height]
        for h in pairs:
            if not self._exact_square_zero(h):
                return False
        varnames = self.variables()
        for s in range(samples):
            exps = draw_exponents(varnames, retry_rng(seed, s))
            for h in pairs:
                a = self.differential_frac1(h, exps)
                b = self.differential_frac1(h + 2, exps)
                if not _product_is_zero(b, a):
                    return False
        return True

    # cohomology

    def specialized_ranks(self, seed=0, retries=5):
        """Best evaluated rank of each differential over seeded retries.

        Entries specialize to powers of a GF(2**16) generator; every
        attempt's rank is a lower bound for the generic rank, so the
        best attempt is the sharpest certified bound.
        """
        gf = GF16()
        varnames = self.variables()
        best = {}
        attempts = {}
        for a in range(retries):
            exps = draw_exponents(varnames, retry_rng(seed, a))
            pows = self._pow_table(exps, gf)
            for h in self.occupied_heights():
                rows, cols = self.matrix_shape(h)
                if rows == 0 or cols == 0:
                    best.setdefault(h, 0)
                    attempts.setdefault(h, []).append(0)
                    continue
                m = self.differential_gf16(h, exps, gf, pows)
                r = gf.rank(m, cols)
                best[h] = max(best.get(h, 0), r)
                attempts.setdefault(h, []).append(r)
        return best, attempts

    def cohomology(self, seed=0, retries=5):
        """Upper bounds for generic cohomology dimensions per height.

        dim H(h) <= dim C(h) - rank d(h) - rank d(h-2), evaluated with
        the best specialized ranks. The report layer upgrades bounds to
        certified values when a certification rule applies.
        """
        ranks, attempts = self.specialized_ranks(seed, retries)
        dims = self.dims()
        out = {}
        for h, n in dims.items():
            r_out = ranks.get(h, 0)
            r_in = ranks.get(h - 2, 0) if h - 2 in dims else 0
            out[h] = n - r_out - r_in
        return out, ranks, attempts

    def exact_ranks(self):
        """Exact generic ranks by symbolic elimination; small graphs only."""
        from .matrix import exact_rank

        out = {}
        for h in self.occupied_heights():
            rows, cols = self.matrix_shape(h)
            if rows == 0 or cols == 0:
                out[h] = 0
                continue
            out[h] = exact_rank(self.differential_exact(h), cols)
        return out

    def shifted_degrees(self, negative_crossings):
        """Map of link-level degree (a Fraction, often a half) to dimension."""
        out = {}
        for h, idxs in sorted(self.by_height.items()):
            out[Fraction(h - negative_crossings, 2)] = len(idxs)
        return out


def _entry_terms(en):
    """Simple-term decomposition of one entry's coefficient.

    Each term is a multiset of denominator monomials: () stands for the
    constant 1, (m,) for 1/(1 + m). Inversion contributes the constant.
    """
    terms = [(tuple(sorted(en.alpha)),), (tuple(sorted(en.beta)),)]
    if en.inverted:
        terms.append(())
    return terms


def _term_exact(key):
    """The field element behind one composite term key."""
    dens = tuple(poly((), tuple((v, 1) for v in m)) for m in key)
    return FieldElement(ONE, dens)


def _product_is_zero(b, a):
    """Is the matrix product b @ a zero? Sparse-friendly, any field."""
    if not b or not a:
        return True
    cols_a = len(a[0])
    for i, brow in enumerate(b):
        nz = [(k, v) for k, v in enumerate(brow) if v]
        if not nz:
            continue
        for j in range(cols_a):
            acc = None
            for k, v in nz:
                term = v * a[k][j]
                acc = term if acc is None else acc + term
            if acc:
                return False
    return True
