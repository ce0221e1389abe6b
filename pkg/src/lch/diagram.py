"""Plat fronts, their Lagrangian resolutions, and m-copies.

A front in plat position (2k horizontal strands, braid word, k left and k
right cusps) is resolved into a Lagrangian diagram: each braid crossing
becomes a transverse crossing with the descending strand on top, and each
right cusp becomes a rightward teardrop loop whose upper branch passes over.
The whole diagram is realized as closed polygonal curves with exact rational
coordinates and all edges in the eight axis/diagonal directions, so that
turning numbers, crossing data, faces and winding numbers are computed
exactly.

The m-copy construction offsets every strand to m parallel lanes (copy 1
outermost on the left of the travel direction) and splices a right-handed
half twist (the Morse maximum) followed by a left-handed one (the minimum)
into the marked loop, immediately after the base point.
"""

from __future__ import annotations

from fractions import Fraction

from .words import Gen, Alphabet

# The eight edge directions, indexed by angle in eighth-turns.
DIR_VECS = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]
_DIR_INDEX = {v: i for i, v in enumerate(DIR_VECS)}


def _sign(x):
    return (x > 0) - (x < 0)


def dir8(p, q):
    v = (_sign(q[0] - p[0]), _sign(q[1] - p[1]))
    d = _DIR_INDEX.get(v)
    if d is None or (p[0] == q[0] and p[1] == q[1]):
        raise ValueError("degenerate edge %s -> %s" % (p, q))
    dx, dy = q[0] - p[0], q[1] - p[1]
    if v[0] and v[1] and abs(dx) != abs(dy):
        raise ValueError("edge %s -> %s is not at 45 degrees" % (p, q))
    return d


def turn8(d1, d2):
    """Signed turning from direction d1 to d2, as a fraction of a full
    turn; straight-line reversals are not allowed at a plain vertex."""
    t = (d2 - d1) % 8
    if t > 4:
        t -= 8
    if t == 4 or t == -4:
        raise ValueError("reversal in polyline")
    return Fraction(t, 8)


def rot90(v):
    return (-v[1], v[0])


class PlatError(ValueError):
    pass


class PlatFront:
    """A front diagram in plat position."""

    def __init__(self, strand_count, events, basepoint_cusp=1, reverse=False):
        if strand_count < 2 or strand_count % 2:
            raise PlatError("strand count must be a positive even number")
        k = strand_count // 2
        for i in events:
            if not 1 <= i <= strand_count - 1:
                raise PlatError("crossing index %d out of range" % i)
        if not 1 <= basepoint_cusp <= k:
            raise PlatError("basepoint cusp %d out of range" % basepoint_cusp)
        self.strand_count = strand_count
        self.events = list(events)
        self.basepoint_cusp = basepoint_cusp
        self.reverse = reverse

    @property
    def cusps(self):
        return self.strand_count // 2

    def components(self):
        """Number of components of the plat closure."""
        n = self.strand_count
        perm = list(range(n))  # left position -> right position
        for i in self.events:
            # braid generator swaps the strands currently at rows i-1, i
            for s in range(n):
                if perm[s] == i - 1:
                    perm[s] = i
                elif perm[s] == i:
                    perm[s] = i - 1
        seen = set()
        comps = 0
        for start in range(n):
            if start in seen:
                continue
            comps += 1
            s = start
            while s not in seen:
                seen.add(s)
                # travel to the right, close through the right cusp, travel
                # back on the partner strand, close through the left cusp
                r = perm[s]
                r2 = r + 1 if r % 2 == 0 else r - 1
                s2 = perm.index(r2)
                seen.add(s2)
                s = s2 + 1 if s2 % 2 == 0 else s2 - 1
        return comps


def parse_plat(text):
    """Parse the plat file format.

    Line-oriented: `strands <2k>`, `crossings [i1,i2,...]`,
    `basepoint-cusp <r>`, optional `orientation reverse`.  Blank lines and
    `#` comments are ignored.
    """
    strands = None
    events = []
    bp = 1
    reverse = False
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace("=", " ").split(None, 1)
        key = parts[0].lower()
        val = parts[1].strip() if len(parts) > 1 else ""
        if key == "strands":
            strands = int(val)
        elif key == "crossings":
            v = val.strip()
            if not (v.startswith("[") and v.endswith("]")):
                raise PlatError("crossings must be a bracketed list")
            body = v[1:-1].strip()
            events = [int(x) for x in body.split(",")] if body else []
        elif key in ("basepoint-cusp", "basepoint_cusp"):
            bp = int(val)
        elif key == "orientation":
            if val.lower() != "reverse":
                raise PlatError("orientation must be 'reverse'")
            reverse = True
        else:
            raise PlatError("unknown directive %r" % key)
    if strands is None:
        raise PlatError("missing 'strands' directive")
    front = PlatFront(strands, events, bp, reverse)
    if front.components() != 1:
        raise PlatError("plat closure is not a knot (%d components)"
                        % front.components())
    return front


# ---------------------------------------------------------------------------
# Polyline walks


class Node:
    """A vertex of a closed walk; label is None, ('star', i), ('dot', i) or
    ('cross', crossing_id, over_bool)."""

    __slots__ = ("pt", "label")

    def __init__(self, pt, label=None):
        self.pt = pt
        self.label = label


class Walk:
    """A closed polygonal curve: nodes with implicit edge last -> first."""

    def __init__(self, nodes, component):
        self.nodes = nodes
        self.component = component

    def __len__(self):
        return len(self.nodes)

    def pt(self, i):
        return self.nodes[i % len(self.nodes)].pt

    def edge_dir(self, i):
        """Direction of the edge leaving node i."""
        return dir8(self.pt(i), self.pt(i + 1))

    def node_dir(self, i):
        """Travel direction at node i (for non-corner nodes)."""
        return self.edge_dir(i)

    def turning_at(self, i):
        return turn8(self.edge_dir(i - 1 + len(self.nodes)), self.edge_dir(i))

    def total_turning(self):
        n = len(self.nodes)
        return sum(self.turning_at(i) for i in range(n))


def _seg_intersection(p1, p2, q1, q2):
    """Proper interior intersection point of segments p1p2, q1q2, or None."""
    d1 = (p2[0] - p1[0], p2[1] - p1[1])
    d2 = (q2[0] - q1[0], q2[1] - q1[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if den == 0:
        return None
    w = (q1[0] - p1[0], q1[1] - p1[1])
    t = Fraction(w[0] * d2[1] - w[1] * d2[0], den)
    u = Fraction(w[0] * d1[1] - w[1] * d1[0], den)
    if not (0 < t < 1 and 0 < u < 1):
        return None
    return (p1[0] + t * d1[0], p1[1] + t * d1[1]), t, u


class _Builder:
    """Accumulates the polyline of one closed component."""

    def __init__(self, component):
        self.pts = []
        self.labels = []
        self.tags = []  # per appended segment (pts[i] -> pts[i+1])
        self.component = component

    def add(self, pt, label=None, tag=None):
        if self.pts and pt == self.pts[-1]:
            if label is not None:
                if self.labels[-1] is not None:
                    raise PlatError("marker collision")
                self.labels[-1] = label
            return
        if self.pts:
            self.tags.append(tag)
        self.pts.append(pt)
        self.labels.append(label)

    def close(self):
        if self.pts[0] == self.pts[-1]:
            self.pts.pop()
            lb = self.labels.pop()
            if lb is not None:
                if self.labels[0] is not None:
                    raise PlatError("marker collision at closure")
                self.labels[0] = lb
        else:
            self.tags.append(None)
        if len(self.tags) < len(self.pts):
            self.tags.append(None)
        return self


F = Fraction


def _loop_vertices(x_r, u, L):
    """Vertex/marker description of a resolved right cusp at rows (u, u+1).

    Returns (vertices, segment tags); traversal order is upper entry ->
    lower exit.  The crossing sits at (x_r + 3/4, -(u + 1/2)); the SE branch
    (upper side) goes over.  L >= 0 lengthens the top leg to make room for
    markers and half twists.
    """
    y_u, y_l = -F(u), -F(u + 1)
    pts = [
        (F(x_r), y_u),
        (F(x_r) + F(1, 4), y_u),
        (F(x_r) + F(5, 4), y_l),
        (F(x_r) + 2 + L, y_l),
        (F(x_r) + F(5, 2) + L, y_u - F(1, 2)),
        (F(x_r) + F(5, 2) + L, y_u + F(1, 4)),
        (F(x_r) + F(3, 2), y_u + F(1, 4)),
        (F(x_r) + F(1, 4), y_l),
        (F(x_r), y_l),
    ]
    tags = [None, ("loopSE",), None, None, None, ("topleg",), ("loopSW",), None]
    return pts, tags


class ResolvedPlat:
    """Intermediate product: tagged closed polyline(s) plus marker slots."""

    def __init__(self, front, m=1):
        self.front = front
        self.m = m
        # extra top-leg length on the marked loop (room for twists)
        self.L_bp = 1 if m == 1 else 2 * m + 5
        self.base = None          # _Builder for the single knot component
        self.topleg = {}          # cusp -> (xW, xE, y) of its top leg
        self.entry_upper = {}     # cusp -> bool
        self._build_base()

    def _build_base(self):
        front = self.front
        n2 = front.strand_count
        k = front.cusps
        nev = len(front.events)
        x_caps = F(1)
        x_r = F(nev + 1)

        b = _Builder(1)
        row, x, heading = 1, x_caps, +1  # +1 = east
        b.add((x_caps, -F(1)))
        visited_caps = set()
        while True:
            if heading > 0:
                for j, ev in enumerate(front.events, start=1):
                    x0, x1 = F(j), F(j + 1)
                    if row == ev:
                        b.add((x0, -F(row)))
                        b.add((x1, -F(row + 1)), tag=("braid", j, "desc"))
                        row += 1
                    elif row == ev + 1:
                        b.add((x0, -F(row)))
                        b.add((x1, -F(row - 1)), tag=("braid", j, "asc"))
                        row -= 1
                    else:
                        b.add((x0, -F(row)))
                        b.add((x1, -F(row)))
                # right cusp
                cusp = (row + 1) // 2
                upper = row % 2 == 1
                L = self.L_bp if cusp == front.basepoint_cusp else F(0)
                pts, tags = _loop_vertices(x_r, 2 * cusp - 1, L)
                if not upper:
                    pts = list(reversed(pts))
                    tags = list(reversed(tags))
                self.entry_upper.setdefault(cusp, upper)
                self.topleg[cusp] = (F(x_r) + F(3, 2), F(x_r) + F(5, 2) + L,
                                     -F(2 * cusp - 1) + F(1, 4))
                for i, p in enumerate(pts):
                    b.add(p, tag=(tags[i - 1] + (cusp,)) if i and tags[i - 1]
                          else None)
                row = row + 1 if upper else row - 1
                heading = -1
            else:
                for j in range(nev, 0, -1):
                    ev = front.events[j - 1]
                    x0, x1 = F(j + 1), F(j)
                    if row == ev:
                        b.add((x0, -F(row)))
                        b.add((x1, -F(row + 1)), tag=("braid", j, "asc"))
                        row += 1
                    elif row == ev + 1:
                        b.add((x0, -F(row)))
                        b.add((x1, -F(row - 1)), tag=("braid", j, "desc"))
                        row -= 1
                    else:
                        b.add((x0, -F(row)))
                        b.add((x1, -F(row)))
                # left cap
                cap = (row + 1) // 2
                upper = row % 2 == 1
                u = 2 * cap - 1
                cap_pts = [
                    (x_caps, -F(u)),
                    (x_caps - F(3, 4), -F(u)),
                    (x_caps - F(5, 4), -F(u) - F(1, 2)),
                    (x_caps - F(3, 4), -F(u + 1)),
                    (x_caps, -F(u + 1)),
                ]
                if not upper:
                    cap_pts = list(reversed(cap_pts))
                for p in cap_pts:
                    b.add(p)
                visited_caps.add(cap)
                row = row + 1 if upper else row - 1
                heading = +1
                if row == 1 and len(visited_caps) == k:
                    break
                if (row, heading) == (1, 1) :
                    break
        b.close()
        if front.reverse:
            b.pts.reverse()
            b.labels.reverse()
            b.tags.reverse()
            b.tags = b.tags[1:] + b.tags[:1]
            # recompute entry sides: reversing swaps them
            for c in self.entry_upper:
                self.entry_upper[c] = not self.entry_upper[c]
        self.base = b


def _offset_vertex(prev_pt, pt, nxt_pt, shift_prev, shift_next):
    """Intersection of the two adjacent segment lines shifted by the given
    vectors (vertex of an offset polyline)."""
    a1 = (prev_pt[0] + shift_prev[0], prev_pt[1] + shift_prev[1])
    a2 = (pt[0] + shift_prev[0], pt[1] + shift_prev[1])
    b1 = (pt[0] + shift_next[0], pt[1] + shift_next[1])
    b2 = (nxt_pt[0] + shift_next[0], nxt_pt[1] + shift_next[1])
    d1 = (a2[0] - a1[0], a2[1] - a1[1])
    d2 = (b2[0] - b1[0], b2[1] - b1[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if den == 0:
        return a2  # collinear: both lines agree
    w = (b1[0] - a1[0], b1[1] - a1[1])
    t = Fraction(w[0] * d2[1] - w[1] * d2[0], den)
    return (a1[0] + t * d1[0], a1[1] + t * d1[1])


def _shift_vec(d, amount):
    nx, ny = rot90(DIR_VECS[d])
    if DIR_VECS[d][0] and DIR_VECS[d][1]:
        amount = amount / 2
    return (nx * amount, ny * amount)


DELTA = F(1, 64)      # lane spacing of parallel copies
TWIST_STEP = F(1, 2)  # spacing of turn points inside a half twist


def _copy_polyline(res, alpha, m):
    """The closed polyline of copy `alpha` (1 = leftmost of travel).

    Offsets the base polyline to lane c = m - alpha and splices markers and,
    for m >= 2, the two half twists into the top leg of the marked loop.
    """
    front = res.front
    base = res.base
    c = m - alpha
    npts = len(base.pts)
    bp = front.basepoint_cusp
    up = res.entry_upper[bp]
    xW, xE, y_leg = res.topleg[bp]

    out = _Builder(alpha)
    for i in range(npts):
        prev_pt = base.pts[(i - 1) % npts]
        pt = base.pts[i]
        nxt = base.pts[(i + 1) % npts]
        d_in = dir8(prev_pt, pt)
        d_out = dir8(pt, nxt)
        seg_tag_out = base.tags[i]
        v = _offset_vertex(prev_pt, pt, nxt,
                           _shift_vec(d_in, c * DELTA),
                           _shift_vec(d_out, c * DELTA))
        tag_in = base.tags[(i - 1) % npts]
        out.add(v, tag=_with_copy(tag_in, alpha))
        if seg_tag_out and seg_tag_out[0] == "topleg" and seg_tag_out[1] == bp:
            _emit_window(out, res, alpha, m, c)
    out.close()
    return out


def _with_copy(tag, alpha):
    return (tag + ("copy", alpha)) if tag else ("plain", "copy", alpha)


def _emit_window(out, res, alpha, m, c):
    """Markers and half twists along the top leg of the marked loop."""
    front = res.front
    bp = front.basepoint_cusp
    up = res.entry_upper[bp]
    xW, xE, y_leg = res.topleg[bp]
    trav = -1 if up else +1        # travel direction: west if entered on top
    x0 = xE if up else xW          # window start (entry end of the leg)
    # left of travel: west-travel -> south (-y); east-travel -> north (+y)
    lane = (lambda cc: y_leg + trav * cc * DELTA)

    def X(offs):
        return x0 + trav * offs

    tag = ("topleg", bp, "copy", alpha)
    pts = []

    def go(x, y, label=None):
        out.add((x, y), label=label, tag=tag)

    go(X(F(1, 4)), lane(c), ("star", alpha))
    go(X(F(1, 2)), lane(c), ("dot", alpha))
    if m == 1:
        return
    g = TWIST_STEP
    # right-handed half twist (Morse maximum): lane +c -> lane -c
    xb0 = F(1)  # box entry offset
    if alpha < m:
        xt = xb0 + (m - alpha) * g
        go(X(xt), lane(c))
        out.add((X(xt), lane(-c)), tag=("tw", "max", "v", "copy", alpha))
    # straight stretch between the twists on lane -c (copy m: lane 0)
    xb1 = xb0 + m * g + 1
    # left-handed half twist (Morse minimum): lane -c -> lane +c
    if alpha < m:
        xt2 = xb1 + (alpha - 1) * g
        go(X(xt2), lane(-c))
        out.add((X(xt2), lane(c)), tag=("tw", "min", "v", "copy", alpha))


# ---------------------------------------------------------------------------
# Crossings, faces, and the assembled diagram


class Crossing:
    """One crossing of the resolved diagram.

    `key` identifies the underlying chord: ('a', j, alpha, beta) for braid
    crossings, ('cusp', i, alpha, beta) for resolved cusps, ('max', 1,
    alpha, beta) / ('min', 1, alpha, beta) for half-twist crossings.  The
    over passage belongs to copy alpha, the under passage to copy beta.
    """

    __slots__ = ("key", "point", "over", "under", "over_dir", "under_dir",
                 "sign", "ray_slots")

    def __init__(self, key, point, over, under, over_dir, under_dir):
        self.key = key
        self.point = point
        self.over = over      # (walk_index, node_index)
        self.under = under
        self.over_dir = over_dir
        self.under_dir = under_dir
        o, u = DIR_VECS[over_dir], DIR_VECS[under_dir]
        det = o[0] * u[1] - o[1] * u[0]
        self.sign = 1 if det > 0 else -1
        # four outward rays in CCW order: angles of {o, o+4, u, u+4}
        self.ray_slots = sorted([over_dir, (over_dir + 4) % 8,
                                 under_dir, (under_dir + 4) % 8])

    def ray_is_over(self, angle):
        return angle % 4 == self.over_dir % 4

    def ray_is_outgoing(self, angle):
        if self.ray_is_over(angle):
            return angle == self.over_dir
        return angle == self.under_dir

    def quadrant_info(self, slot_index):
        """Data for the quadrant between CCW rays slot_index, slot_index+1.

        Returns (label, ray_a_out, ray_b_out) where label is 'p' or 'q' and
        ray_a is the clockwise edge of the quadrant.
        """
        a = self.ray_slots[slot_index % 4]
        b = self.ray_slots[(slot_index + 1) % 4]
        label = "p" if self.ray_is_over(a) else "q"
        return label, self.ray_is_outgoing(a), self.ray_is_outgoing(b)


def _classify(tag1, tag2):
    """Over/under and chord key parts from two segment tags.

    Returns (key_base, over_is_first) or raises on unexpected pairs.
    """
    k1, k2 = tag1[0], tag2[0]
    if k1 == "braid" and k2 == "braid" and tag1[1] == tag2[1]:
        if {tag1[2], tag2[2]} != {"desc", "asc"}:
            raise PlatError("parallel braid strands intersect")
        return ("a", tag1[1]), tag1[2] == "desc"
    if {k1, k2} == {"loopSE", "loopSW"} and tag1[1] == tag2[1]:
        return ("cusp", tag1[1]), k1 == "loopSE"
    if k1 == "tw" or k2 == "tw":
        vtag = tag1 if k1 == "tw" else tag2
        htag = tag2 if k1 == "tw" else tag1
        if htag[0] != "topleg":
            raise PlatError("twist strand meets a non-twist segment")
        return (vtag[1], 1), k1 == "tw"
    raise PlatError("unexpected crossing between %r and %r" % (tag1, tag2))


class LagrangianDiagram:
    """Resolved diagram: closed walks with crossing/marker nodes, faces,
    and exact geometry."""

    def __init__(self, front, m=1):
        self.front = front
        self.m = m
        res = ResolvedPlat(front, m)
        builders = [_copy_polyline(res, alpha, m) for alpha in range(1, m + 1)]
        self._assemble(builders)
        self._build_faces()

    # -- construction ------------------------------------------------------

    def _assemble(self, builders):
        segs = []
        for wi, b in enumerate(builders):
            npts = len(b.pts)
            for i in range(npts):
                p, q = b.pts[i], b.pts[(i + 1) % npts]
                tag = b.tags[i] if i < len(b.tags) else None
                if tag is None:
                    tag = ("plain", "copy", b.component)
                segs.append((wi, i, p, q, tag))
        # endpoint-on-segment sanity check
        for wi, b in enumerate(builders):
            for v in b.pts:
                for wj, j, p, q, _tag in segs:
                    if (wi == wj) or p == v or q == v:
                        continue
                    if _point_on_segment(v, p, q):
                        raise PlatError("vertex of copy %d lies on a foreign "
                                        "segment" % (wi + 1))
        hits = {}
        crossing_raw = []
        for a in range(len(segs)):
            w1, i1, p1, q1, t1 = segs[a]
            for b in range(a + 1, len(segs)):
                w2, i2, p2, q2, t2 = segs[b]
                if w1 == w2 and (i1 == i2 or (i1 - i2) % len(builders[w1].pts)
                                 in (1, len(builders[w1].pts) - 1)):
                    continue
                res = _seg_intersection(p1, q1, p2, q2)
                if res is None:
                    continue
                pt, t, u = res
                crossing_raw.append(((w1, i1, t, t1), (w2, i2, u, t2), pt))
        # classify and name crossings
        self.crossings = {}
        counters = {}
        pending = {}  # (walk, seg) -> list of (t, key, over?, dir)
        for (w1, i1, t, t1), (w2, i2, u, t2), pt in crossing_raw:
            base, over_first = _classify(t1, t2)
            over = (w1, i1, t, t1) if over_first else (w2, i2, u, t2)
            under = (w2, i2, u, t2) if over_first else (w1, i1, t, t1)
            alpha = over[3][-1]
            beta = under[3][-1]
            key = base + (alpha, beta)
            if key in pending:
                raise PlatError("duplicate crossing %r" % (key,))
            pending[key] = (over, under, pt)
        # insert crossing nodes into the walks
        insertions = {}
        for key, (over, under, pt) in pending.items():
            for passage, is_over in ((over, True), (under, False)):
                w, i, t, _tag = passage
                insertions.setdefault((w, i), []).append((t, key, is_over, pt))
        self.walks = []
        for wi, b in enumerate(builders):
            nodes = []
            npts = len(b.pts)
            for i in range(npts):
                nodes.append(Node(b.pts[i], b.labels[i]))
                for t, key, is_over, pt in sorted(insertions.get((wi, i), []),
                                                  key=lambda e: e[0]):
                    nodes.append(Node(pt, ("cross", key, is_over)))
            self.walks.append(Walk(nodes, wi + 1))
        # crossing records with walk positions
        locs = {}
        for wi, walk in enumerate(self.walks):
            for ni, node in enumerate(walk.nodes):
                if node.label and node.label[0] == "cross":
                    locs[(node.label[1], node.label[2])] = (wi, ni)
        for key, (over, under, pt) in pending.items():
            o_loc = locs[(key, True)]
            u_loc = locs[(key, False)]
            o_dir = self.walks[o_loc[0]].node_dir(o_loc[1])
            u_dir = self.walks[u_loc[0]].node_dir(u_loc[1])
            self.crossings[key] = Crossing(key, pt, o_loc, u_loc, o_dir, u_dir)

    # -- faces ---------------------------------------------------------------

    def _build_faces(self):
        # arcs: maximal walk stretches between crossing nodes
        self.arcs = []
        self._dart_to_arc = {}
        for wi, walk in enumerate(self.walks):
            cross_idx = [i for i, nd in enumerate(walk.nodes)
                         if nd.label and nd.label[0] == "cross"]
            if not cross_idx:
                raise PlatError("component %d avoids all crossings" % wi)
            n = len(walk.nodes)
            for a_i in range(len(cross_idx)):
                start = cross_idx[a_i]
                end = cross_idx[(a_i + 1) % len(cross_idx)]
                self.arcs.append(_Arc(self, wi, start, end, len(self.arcs)))
        for arc in self.arcs:
            self._dart_to_arc[(arc.start_key, arc.start_ray)] = (arc, +1)
            self._dart_to_arc[(arc.end_key, arc.end_ray)] = (arc, -1)
        # face orbits: entering a crossing along ray s (pointing outward
        # toward us), the face on the left continues out along the CCW-next
        # ray s+1; the face corner between them is quadrant slot(s).
        darts = set(self._dart_to_arc)
        faces = []
        visited = set()
        for d0 in sorted(darts, key=repr):
            if d0 in visited:
                continue
            cycle = []
            corners = []
            d = d0
            while True:
                visited.add(d)
                cycle.append(d)
                arc, direction = self._dart_to_arc[d]
                key2, ray_in = arc.far_end(d)
                cr = self.crossings[key2]
                slot_i = cr.ray_slots.index(ray_in)
                corners.append((key2, (slot_i - 1) % 4))
                nxt_ray = cr.ray_slots[(slot_i - 1) % 4]
                d = (key2, nxt_ray)
                if d == d0:
                    break
            faces.append(Face(self, cycle, corners, len(faces)))
        self.faces = faces
        # Euler check: V - E + F = 2 for the (connected-per-copy) projection
        V = len(self.crossings)
        E = len(self.arcs)
        if V - E + len(faces) != 2:
            raise PlatError("face extraction failed Euler check: V=%d E=%d "
                            "F=%d" % (V, E, len(faces)))
        outer = [f for f in faces if f.boundary_turning() == -1]
        if len(outer) != 1:
            raise PlatError("expected exactly one outer face")
        self.outer_face = outer[0]
        for f in faces:
            if f is not self.outer_face and f.boundary_turning() != 1:
                raise PlatError("bounded face with turning != 1")


def _point_on_segment(v, p, q):
    cross = (q[0] - p[0]) * (v[1] - p[1]) - (q[1] - p[1]) * (v[0] - p[0])
    if cross != 0:
        return False
    dot = (v[0] - p[0]) * (q[0] - p[0]) + (v[1] - p[1]) * (q[1] - p[1])
    L2 = (q[0] - p[0]) ** 2 + (q[1] - p[1]) ** 2
    return 0 < dot < L2


class _Arc:
    """Directed stretch of a walk between two consecutive crossing nodes."""

    def __init__(self, diagram, walk_index, start, end, index):
        self.diagram = diagram
        self.walk_index = walk_index
        self.start = start
        self.end = end
        self.index = index
        walk = diagram.walks[walk_index]
        self.start_key = walk.nodes[start].label[1]
        self.end_key = walk.nodes[end].label[1]
        n = len(walk.nodes)
        self.node_indices = []
        i = start
        while True:
            self.node_indices.append(i % n)
            if i % n == end and len(self.node_indices) > 1:
                break
            if len(self.node_indices) > 2 * n + 2:
                raise PlatError("arc extraction loop")
            i += 1
        # outward ray angles at both endpoints
        self.start_ray = walk.node_dir(start)
        self.end_ray = (walk.node_dir(end - 1 + n) + 4) % 8
        # total turning along the arc (vertices strictly inside)
        self.turning = sum(walk.turning_at(i % n)
                           for i in range(start + 1, start + len(self.node_indices) - 1))
        # marker features in order: (kind, index, sign)
        self.features = []
        for i in self.node_indices[1:-1]:
            lb = walk.nodes[i].label
            if lb and lb[0] in ("star", "dot"):
                self.features.append((lb[0], lb[1], +1))

    def far_end(self, dart):
        """Given one end dart (key, ray), the (key, ray) of the other end."""
        if dart == (self.start_key, self.start_ray):
            return self.end_key, self.end_ray
        return self.start_key, self.start_ray

    def points(self, direction=+1):
        walk = self.diagram.walks[self.walk_index]
        pts = [walk.nodes[i].pt for i in self.node_indices]
        return pts if direction > 0 else list(reversed(pts))

    def turning_signed(self, direction=+1):
        return self.turning if direction > 0 else -self.turning

    def features_signed(self, direction=+1):
        if direction > 0:
            return list(self.features)
        return [(k, i, -s) for (k, i, s) in reversed(self.features)]


class Face:
    def __init__(self, diagram, dart_cycle, corners, index):
        self.diagram = diagram
        self.darts = dart_cycle
        self.corners = corners          # (crossing_key, quadrant_slot)
        self.index = index
        self._sample = None

    def boundary_turning(self):
        total = Fraction(0)
        for d in self.darts:
            arc, direction = self.diagram._dart_to_arc[d]
            total += arc.turning_signed(self._arc_dir(d))
        total += Fraction(len(self.corners), 4)
        return total

    def _arc_dir(self, dart):
        arc, _ = self.diagram._dart_to_arc[dart]
        return +1 if dart == (arc.start_key, arc.start_ray) else -1

    def sample_point(self):
        if self._sample is not None:
            return self._sample
        eps = Fraction(1, 3 * 2 ** 11)
        best = None
        for d in self.darts:
            arc, _ = self.diagram._dart_to_arc[d]
            direction = self._arc_dir(d)
            pts = arc.points(direction)
            for i in range(len(pts) - 1):
                p, q = pts[i], pts[i + 1]
                L2 = (q[0] - p[0]) ** 2 + (q[1] - p[1]) ** 2
                if best is None or L2 > best[0]:
                    best = (L2, p, q)
        _L2, p, q = best
        mid = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
        d = dir8(p, q)
        nx, ny = rot90(DIR_VECS[d])
        self._sample = (mid[0] + nx * eps, mid[1] + ny * eps)
        return self._sample


def winding_number(polyline_pts, point):
    """Exact winding number of a closed polygonal curve around `point`.

    Counts signed crossings of the upward vertical ray from `point`;
    assumes no vertex lies on the ray (guaranteed by the off-grid sample
    construction).
    """
    px, py = point
    n = len(polyline_pts)
    w = 0
    for i in range(n):
        x1, y1 = polyline_pts[i]
        x2, y2 = polyline_pts[(i + 1) % n]
        if x1 == x2:
            continue
        if x1 < px < x2 or x2 < px < x1:
            t = Fraction(px - x1, x2 - x1)
            y = y1 + t * (y2 - y1)
            if y > py:
                w += 1 if x2 > x1 else -1
        elif px == x1 or px == x2:
            raise PlatError("winding ray through a vertex; sample not generic")
    # crossing the ray left-to-right above the point means the curve winds
    # clockwise; flip to the usual counterclockwise convention
    return -w


class GeneratorTable:
    """Chord generators of a resolved diagram with gradings, link gradings
    and capping-path data.

    Capping passages for a chord generator are stored as two lists (before
    and after the jump); each entry is (crossing_key, endpoint, direction)
    with endpoint +1 at the over endpoint, -1 at the under endpoint, and
    direction +1/-1 for travel with/against the knot orientation.  The
    corner of the capping path is made convex; when the natural corner turns
    the wrong way, the path picks up one extra forced passage at the jump
    chord (the "fold"), which is included here.
    """

    def __init__(self, diagram, mu=None, modulus=None):
        self.diagram = diagram
        m = diagram.m
        self.mu = dict(mu or {})
        self.alphabet = Alphabet(m=m)
        self.qgen = {}
        self.pgen = {}
        self.cappings = {}
        self.rot = {}
        self._prepare_walk_data()
        rot_total = sum(self.component_rot.values())
        if modulus is None:
            modulus = abs(2 * rot_total) if m == 1 else None
            if modulus is None:
                raise PlatError("m-copy tables need the base modulus")
        self.alphabet.modulus = modulus
        self._build_generators()
        self._build_cappings()
        self._build_endpoint_order()

    # -- walk bookkeeping ---------------------------------------------------

    def _prepare_walk_data(self):
        d = self.diagram
        self.dot_node = {}
        self.star_node = {}
        self.cum_turn = []
        self.component_rot = {}
        for wi, walk in enumerate(d.walks):
            n = len(walk.nodes)
            cum = [Fraction(0)] * (n + 1)
            for i in range(n):
                cum[i + 1] = cum[i] + walk.turning_at(i)
            self.cum_turn.append(cum)
            total = cum[n]
            if total.denominator != 1:
                raise PlatError("non-integer total turning")
            self.component_rot[wi + 1] = int(total)
            for i, nd in enumerate(walk.nodes):
                if nd.label and nd.label[0] == "dot":
                    self.dot_node[wi + 1] = i
                if nd.label and nd.label[0] == "star":
                    self.star_node[wi + 1] = i
        for a in range(1, d.m + 1):
            if a not in self.dot_node:
                raise PlatError("component %d has no base point" % a)

    def _turn_between(self, comp, i0, i1):
        """Turning along the walk of `comp` from node i0 to node i1 going
        forward (interior vertices only)."""
        walk = self.diagram.walks[comp - 1]
        cum = self.cum_turn[comp - 1]
        n = len(walk.nodes)
        i0 %= n
        i1 %= n
        # sum of turning_at over nodes i0+1 .. i1 (cyclically), endpoints
        # excluded: turning_at(i) is indexed by cum[i+1]-cum[i]
        if i1 > i0:
            return cum[i1] - cum[i0 + 1]
        return (cum[n] - cum[i0 + 1]) + (cum[i1] - cum[0])

    def _forward_nodes(self, comp, i0, i1):
        """Node indices strictly between i0 and i1 going forward."""
        walk = self.diagram.walks[comp - 1]
        n = len(walk.nodes)
        out = []
        i = (i0 + 1) % n
        while i != i1 % n:
            out.append(i)
            i = (i + 1) % n
        return out

    # -- generators ---------------------------------------------------------

    def _build_generators(self):
        d = self.diagram
        A = self.alphabet
        nev = len(d.front.events)
        order = sorted(d.crossings,
                       key=lambda k: (_chord_rank(k, nev), k[2], k[3]))
        for key in order:
            cr = d.crossings[key]
            kind, idx = key[0], key[1]
            alpha, beta = key[2], key[3]
            a, b = (alpha, beta) if d.m > 1 else (0, 0)
            if kind == "a":
                qk, pk, gidx = "q", "p", idx
            elif kind == "cusp":
                qk, pk, gidx = "q", "p", nev + idx
            elif kind == "max":
                qk, pk, gidx = "x", "xbar", idx
            else:
                qk, pk, gidx = "y", "ybar", idx
            over_comp = alpha
            under_comp = beta
            rot_q = self._leg_turn(over_comp, cr.over) \
                - self._leg_turn(under_comp, cr.under)
            self.rot[key] = rot_q
            mu_p = self.mu.get(over_comp, 0) - self.mu.get(under_comp, 0)
            deg_q = _floor2(-rot_q - mu_p)
            deg_p = _floor2(rot_q + mu_p)
            qg = Gen(qk, gidx, a, b)
            pg = Gen(pk, gidx, a, b)
            A.add(qg, deg_q, over_comp, under_comp, 0)
            A.add(pg, deg_p, under_comp, over_comp, 1)
            self.qgen[key] = qg
            self.pgen[key] = pg
        self.tgen = {}
        self.tinvgen = {}
        for comp in range(1, d.m + 1):
            a = comp if d.m > 1 else 0
            tg = Gen("t", comp if d.m > 1 else 1, a, 0)
            ti = Gen("tinv", comp if d.m > 1 else 1, a, 0)
            rot = self.component_rot[comp]
            mu0 = 0  # e-(t) = e+(t) for a knot copy
            A.add(tg, -2 * rot, comp, comp, 0)
            A.add(ti, 2 * rot, comp, comp, 0)
            self.tgen[comp] = tg
            self.tinvgen[comp] = ti

    def _leg_turn(self, comp, loc):
        """Turning from the base point of `comp` forward to the crossing
        passage at walk location `loc` = (walk_index, node_index)."""
        wi, ni = loc
        if wi != comp - 1:
            raise PlatError("passage/component mismatch")
        return self._turn_between(comp, self.dot_node[comp], ni)

    # -- capping passages ---------------------------------------------------

    def _build_cappings(self):
        d = self.diagram
        for key, cr in d.crossings.items():
            for gen, jump_start, jump_end, startp in (
                    (self.qgen[key], cr.over, cr.under, +1),
                    (self.pgen[key], cr.under, cr.over, -1)):
                comp_s = self.alphabet.eminus[gen]
                comp_e = self.alphabet.eplus[gen]
                pre = self._collect_passages(comp_s, self.dot_node[comp_s],
                                             jump_start[1])
                post_fwd = self._collect_passages(comp_e,
                                                  self.dot_node[comp_e],
                                                  jump_end[1])
                post = [(k, ep, -dr) for (k, ep, dr) in reversed(post_fwd)]
                fold = (cr.sign < 0) if gen.kind in ("p", "xbar", "ybar") \
                    else (cr.sign > 0)
                if fold:
                    pre = pre + [(key, startp, +1)]
                self.cappings[gen] = (pre, post)
        for comp in range(1, d.m + 1):
            node_dot = self.dot_node[comp]
            node_star = self.star_node[comp]
            before = self._collect_passages(comp, node_dot, node_star)
            between = self._collect_passages(comp, node_star, node_dot)
            if between:
                raise PlatError("crossing between star and dot")
            self.cappings[self.tgen[comp]] = (before, [])
            after = [(k, ep, -dr) for (k, ep, dr) in reversed(before)]
            self.cappings[self.tinvgen[comp]] = ([], after)

    def _collect_passages(self, comp, i0, i1):
        walk = self.diagram.walks[comp - 1]
        out = []
        for i in self._forward_nodes(comp, i0, i1):
            lb = walk.nodes[i].label
            if lb and lb[0] == "cross":
                out.append((lb[1], +1 if lb[2] else -1, +1))
            elif lb and lb[0] == "star":
                raise PlatError("capping leg crosses a marked point")
        return out

    def _build_endpoint_order(self):
        """Order of chord endpoint passages along the knot from the base
        point (used by the thin-disk crossing terms); 1-copy only."""
        self.endpoint_order = {}
        if self.diagram.m != 1:
            return
        walk = self.diagram.walks[0]
        rank = 0
        for i in self._forward_nodes(1, self.dot_node[1],
                                     self.dot_node[1] - 1):
            lb = walk.nodes[i].label
            if lb and lb[0] == "cross":
                self.endpoint_order[(lb[1], +1 if lb[2] else -1)] = rank
                rank += 1

    # -- degree recomputation (Maslov torsor checks) -------------------------

    def degree_with_mu(self, gen, mu):
        if gen.kind in ("t", "tinv"):
            return self.alphabet.degree[gen]
        key = _gen_key(self, gen)
        rot_q = self.rot[key]
        over_comp = key[2]
        under_comp = key[3]
        mu_p = mu.get(over_comp, 0) - mu.get(under_comp, 0)
        if gen.kind in ("q", "x", "y"):
            return _floor2(-rot_q - mu_p)
        return _floor2(rot_q + mu_p)


def _gen_key(table, gen):
    for key, g in table.qgen.items():
        if g == gen:
            return key
    for key, g in table.pgen.items():
        if g == gen:
            return key
    raise KeyError(gen)


def _chord_rank(key, nev):
    kind, idx = key[0], key[1]
    if kind == "a":
        return (0, idx)
    if kind == "cusp":
        return (0, nev + idx)
    if kind == "max":
        return (1, idx)
    return (2, idx)


def _floor2(x):
    """floor(2*x) for a Fraction x."""
    from math import floor
    return floor(2 * x)


def resolve_front(front, m=1):
    """Resolve a plat front into its Lagrangian diagram (or its m-copy)."""
    return LagrangianDiagram(front, m)


def generator_table(diag, mu=None, modulus=None):
    return GeneratorTable(diag, mu=mu, modulus=modulus)


def build_m_copy(front, m):
    """The Lagrangian m-copy of the resolution of `front`."""
    if m < 1:
        raise PlatError("m must be >= 1")
    if isinstance(front, LagrangianDiagram):
        front = front.front
    return LagrangianDiagram(front, m)
