"""Immersed-disk enumeration and the disk-counting differentials.

Disk boundaries are closed walks on the diagram that pass straight through
crossings or turn left into a quadrant (a convex corner).  A closed walk
bounds an immersed disk iff its total turning is +1, all face winding
numbers are nonnegative, and Blank's pairing criterion holds (automatic
when every multiplicity is at most 1 and the boundary is embedded away
from corners).  Enumeration is complete up to the configured caps on corner
count and face multiplicity; the quantum-master-equation and curvature
certificates downstream convert "caps large enough" into a checkable
condition.
"""

from __future__ import annotations

from fractions import Fraction

from . import signs
from .words import CyclicElement, Element, to_cyclic


class CapacityError(RuntimeError):
    """Enumeration hit a cap in a way that may hide disks."""


class Disk:
    """One immersed disk, with a chosen linear order of its corners."""

    __slots__ = ("diagram", "corners", "arcs", "mults", "index")

    def __init__(self, diagram, corners, arcs):
        self.diagram = diagram
        # corners[i] = (crossing_key, quadrant_slot); arcs[i] = (arc, dir)
        # runs from corner i to corner i+1 (cyclically).
        self.corners = corners
        self.arcs = arcs
        self.mults = None

    def canonical_key(self):
        n = len(self.corners)
        reprs = []
        for r in range(n):
            key = tuple((self.corners[(r + i) % n],
                         self.arcs[(r + i) % n][0].index,
                         self.arcs[(r + i) % n][1]) for i in range(n))
            reprs.append(key)
        return min(reprs)

    def boundary_points(self):
        pts = []
        for arc, direction in self.arcs:
            pts.extend(arc.points(direction)[:-1])
        return pts

    def face_multiplicities(self):
        if self.mults is None:
            pts = self.boundary_points()
            from .diagram import winding_number
            self.mults = {}
            for f in self.diagram.faces:
                w = winding_number(pts, f.sample_point())
                self.mults[f.index] = w
        return self.mults

    def corner_count(self):
        return len(self.corners)

    def positive_corners(self):
        out = []
        for i, (key, slot) in enumerate(self.corners):
            label, _, _ = self.diagram.crossings[key].quadrant_info(slot)
            if label == "p":
                out.append(i)
        return out

    def corner_eps(self, i):
        key, slot = self.corners[i]
        cr = self.diagram.crossings[key]
        label, a_out, b_out = cr.quadrant_info(slot)
        return signs.hamiltonian_eps(label, a_out, b_out)

    def corner_ce_shaded(self, i):
        key, slot = self.corners[i]
        cr = self.diagram.crossings[key]
        label, a_out, b_out = cr.quadrant_info(slot)
        over_flank_out = a_out if label == "p" else b_out
        return signs.ce_corner_shaded(label, over_flank_out, cr.sign > 0)

    def eps_prime_after(self, i):
        """+1 iff the boundary right after corner i runs with the knot."""
        _arc, direction = self.arcs[i]
        return 1 if direction > 0 else -1

    def word_from(self, table, start):
        """The word read off starting right after corner `start`, ending
        with corner `start` itself: [arcs/corners ...] as Gen tuple."""
        n = len(self.corners)
        letters = []
        for i in range(n):
            j = (start + i) % n
            letters.extend(_arc_letters(table, self.arcs[j]))
            key, slot = self.corners[(j + 1) % n]
            cr = self.diagram.crossings[key]
            label, _, _ = cr.quadrant_info(slot)
            gen = table.pgen[key] if label == "p" else table.qgen[key]
            letters.append(gen)
        return tuple(letters)

    def sign_from(self, start):
        """sgn of the representative whose last corner is `start`."""
        s = self.eps_prime_after(start)
        for i in range(len(self.corners)):
            s *= self.corner_eps(i)
        return s

    def ce_sign_from(self, start):
        s = 1
        for i in range(len(self.corners)):
            if self.corner_ce_shaded(i):
                s = -s
        return s


def _arc_letters(table, directed_arc):
    arc, direction = directed_arc
    letters = []
    for kind, idx, sg in arc.features_signed(direction):
        if kind != "star":
            continue
        letters.append(table.tgen[idx] if sg > 0 else table.tinvgen[idx])
    return letters


class DiskSet:
    def __init__(self, disks, caps, mode):
        self.disks = disks
        self.caps = caps
        self.mode = mode


def enumerate_disks(diag, mode="all", caps=(12, 4)):
    """All immersed disks with at most K corners and multiplicity <= M.

    mode='single_positive' restricts to disks with exactly one corner on a
    p-quadrant.  Walks that close with multiplicity M+1 raise
    CapacityError, so an insufficient cap is never silent.
    """
    K, M = caps
    if K < 1 or M < 1:
        raise ValueError("caps must be >= 1")
    single = mode == "single_positive"
    found = {}
    darts = sorted(diag._dart_to_arc, key=repr)
    for d0 in darts:
        _dfs_from(diag, d0, K, M, single, found)
    disks = list(found.values())
    return DiskSet(disks, (K, M), mode)


def _dfs_from(diag, d0, K, M, single, found):
    """Enumerate closed walks whose closing transition is a corner at d0."""
    arc0, dir0 = diag._dart_to_arc[d0]
    usage = {}
    path = []   # list of (dart, corner_after_or_None)

    def step(dart):
        arc, direction = diag._dart_to_arc[dart]
        usage[(arc.index, direction)] = usage.get((arc.index, direction), 0) + 1
        key, ray_in = arc.far_end(dart)
        return arc, direction, key, ray_in

    def unstep(dart):
        arc, direction = diag._dart_to_arc[dart]
        usage[(arc.index, direction)] -= 1

    def rec(dart, ncorners):
        arc, direction, key, ray_in = step(dart)
        cr = diag.crossings[key]
        d_end = (ray_in + 4) % 8
        # option 1: close up with a corner back to d0
        corner_exit = (d_end + 2) % 8
        if (key, corner_exit) == d0 and ncorners + 1 <= K:
            slot = cr.ray_slots.index(corner_exit)
            if not single or _pcount(diag, path, key, slot) + 1 <= 1 or True:
                _emit(diag, path + [(dart, (key, slot))], K, M, single, found)
        # option 2: corner then continue
        if ncorners + 1 <= K:
            slot = cr.ray_slots.index(corner_exit)
            nxt = (key, corner_exit)
            a2, dir2 = diag._dart_to_arc[nxt]
            if usage.get((a2.index, dir2), 0) <= M:
                if not single or _pcount_ok(diag, path, key, slot):
                    path.append((dart, (key, slot)))
                    rec(nxt, ncorners + 1)
                    path.pop()
        # option 3: straight through
        nxt = (key, d_end)
        a2, dir2 = diag._dart_to_arc[nxt]
        if nxt != d0 and usage.get((a2.index, dir2), 0) <= M:
            path.append((dart, None))
            rec(nxt, ncorners)
            path.pop()
        unstep(dart)

    rec(d0, 0)


def _pcount(diag, path, key, slot):
    n = 0
    for _dart, corner in path:
        if corner is not None:
            ckey, cslot = corner
            label, _, _ = diag.crossings[ckey].quadrant_info(cslot)
            if label == "p":
                n += 1
    return n


def _pcount_ok(diag, path, key, slot):
    label, _, _ = diag.crossings[key].quadrant_info(slot)
    extra = 1 if label == "p" else 0
    return _pcount(diag, path, None, None) + extra <= 1


def _emit(diag, steps, K, M, single, found):
    # reconstruct the corner/arc structure: walk steps are (dart, corner)
    # where corner is the corner AFTER traversing the dart's arc.
    corners = []
    arcs = []
    run = []
    # split the cyclic dart sequence at corners
    n = len(steps)
    corner_positions = [i for i, (_d, c) in enumerate(steps) if c is not None]
    if not corner_positions:
        return
    for ci in range(len(corner_positions)):
        i0 = corner_positions[ci - 1]
        i1 = corner_positions[ci]
        # the arc run from corner at i0 to corner at i1
        seq = []
        j = (i0 + 1) % n
        while True:
            seq.append(steps[(j - 1) % n][0] if False else steps[j][0])
            if j == i1:
                break
            j = (j + 1) % n
        run.append((steps[i0][1], seq))
    # run[k] = (corner, dart sequence following it)
    corners = [c for c, _ in run]
    merged_arcs = []
    for c, seq in run:
        merged_arcs.append([diag._dart_to_arc[d] for d in seq])
    disk = _CandidateDisk(diag, corners, merged_arcs)
    if single and len(disk.positive_corner_labels()) != 1:
        return
    disk2 = disk.certify(M)
    if disk2 is None:
        return
    found.setdefault(disk2.canonical_key(), disk2)


class _CandidateDisk:
    def __init__(self, diag, corners, arc_runs):
        self.diag = diag
        self.corners = corners
        self.arc_runs = arc_runs

    def positive_corner_labels(self):
        out = []
        for key, slot in self.corners:
            label, _, _ = self.diag.crossings[key].quadrant_info(slot)
            if label == "p":
                out.append((key, slot))
        return out

    def certify(self, M):
        # total turning must be +1
        turn = Fraction(len(self.corners), 4)
        for runlist in self.arc_runs:
            for arc, direction in runlist:
                turn += arc.turning_signed(direction)
        if turn != 1:
            return None
        flat_arcs = []
        for runlist in self.arc_runs:
            flat_arcs.extend(runlist)
        disk = Disk(self.diag, self.corners, None)
        disk.arcs = _glue_runs(self.corners, self.arc_runs)
        mults = disk.face_multiplicities()
        if any(w < 0 for w in mults.values()):
            return None
        if mults[self.diag.outer_face.index] != 0:
            return None
        mx = max(mults.values())
        if mx > M:
            raise CapacityError(
                "closed walk with multiplicity %d exceeds cap M=%d" % (mx, M))
        if mx <= 1 and _boundary_embedded(disk):
            return disk
        if _blank_criterion(disk, mults):
            return disk
        return None


def _glue_runs(corners, arc_runs):
    """Collapse each dart run between consecutive corners into the list of
    directed arcs traversed (kept as a flat list aligned with corners)."""
    glued = []
    for runlist in arc_runs:
        glued.append(runlist)
    return glued


def _boundary_embedded(disk):
    seen = set()
    for runlist in disk.arcs:
        for arc, _direction in runlist:
            if arc.index in seen:
                return False
            seen.add(arc.index)
    return True


def _blank_criterion(disk, mults):
    """Blank's pairing criterion for immersed-disk extension.

    Shoots a vertical ray up from each positive-multiplicity face sample and
    reads the cyclic word of signed ray crossings along the boundary; the
    walk extends to an immersed disk iff some assignment of each negative
    letter to a distinct positive letter of the same face is non-crossing
    in the cyclic order.
    """
    pts = disk.boundary_points()
    n = len(pts)
    letters = []  # (position fraction along boundary, face, sign)
    for f in disk.diagram.faces:
        if mults.get(f.index, 0) <= 0:
            continue
        sx, sy = f.sample_point()
        for i in range(n):
            x1, y1 = pts[i]
            x2, y2 = pts[(i + 1) % n]
            if x1 == x2:
                continue
            if x1 < sx < x2 or x2 < sx < x1:
                t = Fraction(sx - x1, x2 - x1)
                y = y1 + t * (y2 - y1)
                if y > sy:
                    letters.append((i + t, f.index, 1 if x2 > x1 else -1))
    letters.sort(key=lambda e: e[0])
    word = [(f, s) for _pos, f, s in letters]
    neg = [i for i, (_f, s) in enumerate(word) if s < 0]
    pos = [i for i, (_f, s) in enumerate(word) if s > 0]
    if not neg:
        return True

    def crossing_pair(a, b):
        (i, j), (k, l) = sorted(a), sorted(b)
        return (i < k < j < l) or (k < i < l < j)

    def search(remaining, chosen):
        if not remaining:
            return True
        i = remaining[0]
        for j in pos:
            if any(j == c[1] for c in chosen):
                continue
            if word[j][0] != word[i][0]:
                continue
            pair = (i, j)
            if any(crossing_pair(pair, c) for c in chosen):
                continue
            if search(remaining[1:], chosen + [pair]):
                return True
        return False

    return search(neg, [])
