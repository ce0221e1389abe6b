"""Orientation-sign tables for disk counts.

A corner of a disk covers one quadrant at a crossing.  Each quadrant is
described by its two flanking half-edges in counterclockwise order
(ray_a, ray_b); for a p-quadrant ray_a lies on the over-strand and ray_b on
the under-strand, for a q-quadrant the roles are swapped.  A flanking ray is
"outgoing" when the strand orientation points away from the crossing along
it.

The tables below assign the shaded corners.  They are module state (not
baked into the enumeration code) so the test suite can flip single entries
and check that the structural identity suites detect the corruption.

Keys: (label, ray_a_outgoing, ray_b_outgoing) -> shaded?
"""

# Shading for the Hamiltonian sign eps_i: at positive crossings three
# quadrants are shaded (both p-quadrants and the q-quadrant whose over-flank
# points out); at negative crossings only the p-quadrant whose over-flank
# points in.  Expressed quadrant-locally this is the table below.
HAMILTONIAN_SHADING = {
    ("p", True, True): True,
    ("p", False, False): True,
    ("p", False, True): True,
    ("p", True, False): False,
    ("q", False, True): True,
    ("q", True, False): False,
    ("q", True, True): False,
    ("q", False, False): False,
}

# Shading for the Chekanov-Eliashberg sign sgn_d: a corner is shaded iff its
# crossing is positive and the over-strand flank of the quadrant points out.
# Keys: (label, over_flank_outgoing, crossing_positive) -> shaded?
CE_SHADING = {}
for _label in ("p", "q"):
    for _out in (True, False):
        for _pos in (True, False):
            CE_SHADING[(_label, _out, _pos)] = _pos and _out


def hamiltonian_eps(label, ray_a_out, ray_b_out):
    """The sign eps_i of one disk corner: -1 if shaded else +1."""
    return -1 if HAMILTONIAN_SHADING[(label, ray_a_out, ray_b_out)] else 1


def ce_corner_shaded(label, over_flank_out, crossing_positive):
    return CE_SHADING[(label, over_flank_out, crossing_positive)]
