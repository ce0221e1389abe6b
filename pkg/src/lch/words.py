"""Composable words over the LSFT generator alphabet, and their linear algebra.

Generators carry an internal link grading (e_minus, e_plus) valued in copy
labels 1..m; a word is composable when consecutive labels match.  Elements
are finitely supported linear combinations of composable words, reduced by
t*t^-1 = e and truncated above a configurable filtration order in the
p-type generators.  Cyclic elements live in the quotient by graded
commutators; their canonical representative is the least rotation, with the
Koszul sign of the rotation folded into the coefficient.
"""

from __future__ import annotations

from collections import namedtuple


# kind, chord/critical/marked-point index, copy superscripts a, b.
# 1-copy generators use a = b = 0.  For q/x/y-type generators e- = a, e+ = b;
# for p/xbar/ybar-type e- = b, e+ = a.  't' is t_i on copy a, 'tinv' its
# inverse; 'eta' is the curvature formal variable on copy a; 'e' is the
# idempotent e_a (only ever appears as a one-letter word).
Gen = namedtuple("Gen", "kind idx a b")

_KIND_RANK = {
    "e": 0, "q": 1, "p": 2, "x": 3, "xbar": 4, "y": 5, "ybar": 6,
    "t": 7, "tinv": 8, "eta": 9,
}

P_KINDS = ("p", "xbar", "ybar")
Q_KINDS = ("q", "x", "y")


def gen_sort_key(g):
    return (_KIND_RANK[g.kind], g.idx or 0, g.a, g.b)


def fmt_gen(g):
    base = {"tinv": "t^-1", "e": "e"}.get(g.kind, g.kind)
    if g.kind in ("t", "tinv"):
        s = "t" if g.kind == "t" else "t^-1"
        if g.idx not in (None, 1):
            s += "_%d" % g.idx
    elif g.kind == "eta":
        s = "eta"
    elif g.kind == "e":
        s = "e%d" % g.a
    else:
        s = base + ("%d" % g.idx if g.idx is not None else "")
    if g.a or g.b:
        if g.kind in ("t", "tinv", "eta"):
            s += "^%d" % g.a
        else:
            s += "^%d%d" % (g.a, g.b)
    return s


def fmt_word(word):
    if len(word) == 1 and word[0].kind == "e":
        return "1" if word[0].a == 0 else fmt_gen(word[0])
    return "".join(fmt_gen(g) for g in word)


class Alphabet:
    """Generator data shared by all elements of one (m-copy) LSFT algebra.

    Holds gradings, link gradings e-/e+, filtration degrees, and the grading
    modulus (2*rot, or 0 for honest Z-gradings).
    """

    def __init__(self, m=1, modulus=0):
        self.m = m                       # number of copy labels (idempotents)
        self.modulus = modulus           # degrees live in Z/modulus (0 = Z)
        self.degree = {}                 # Gen -> int
        self.eminus = {}
        self.eplus = {}
        self.filt = {}                   # Gen -> 0 or 1
        self.gens = []

    def add(self, g, degree, eminus, eplus, filt):
        if g in self.degree:
            raise ValueError("duplicate generator %s" % fmt_gen(g))
        self.degree[g] = degree
        self.eminus[g] = eminus
        self.eplus[g] = eplus
        self.filt[g] = filt
        self.gens.append(g)

    def idem(self, a):
        return (Gen("e", None, a, a),)

    def deg(self, g):
        if g.kind == "e":
            return 0
        return self.degree[g]

    def em(self, g):
        if g.kind == "e":
            return g.a
        return self.eminus[g]

    def ep(self, g):
        if g.kind == "e":
            return g.a
        return self.eplus[g]

    def word_deg(self, word):
        return sum(self.deg(g) for g in word)

    def word_filt(self, word):
        return sum(self.filt.get(g, 0) for g in word)

    def word_em(self, word):
        return self.em(word[0])

    def word_ep(self, word):
        return self.ep(word[-1])

    def composable(self, word):
        for i in range(len(word) - 1):
            if self.ep(word[i]) != self.em(word[i + 1]):
                return False
        return True

    def degrees_equal(self, d1, d2):
        if self.modulus:
            return (d1 - d2) % self.modulus == 0
        return d1 == d2

    def reduce(self, word):
        """Apply t*t^-1 = t^-1*t = e and drop interior idempotents.

        Returns the reduced word tuple, or None if the word is not
        composable.  An empty product collapses to the idempotent word.
        """
        if not self.composable(word):
            return None
        out = []
        for g in word:
            if g.kind == "e":
                continue
            if out and _t_inverse_pair(out[-1], g):
                out.pop()
            else:
                out.append(g)
        if not out:
            return self.idem(self.em(word[0]))
        return tuple(out)


def _t_inverse_pair(g1, g2):
    if g1.idx != g2.idx or g1.a != g2.a:
        return False
    return (g1.kind, g2.kind) in (("t", "tinv"), ("tinv", "t"))


class Element:
    """A k^m-linear combination of composable words, filtration-truncated.

    Immutable by convention: all operations return fresh elements.  `trunc`
    is the filtration order N; words with total p-degree > N are discarded
    (None disables truncation).
    """

    __slots__ = ("alphabet", "ring", "terms", "trunc")

    def __init__(self, alphabet, ring, terms=None, trunc=None):
        self.alphabet = alphabet
        self.ring = ring
        self.trunc = trunc
        self.terms = {}
        if terms:
            for w, c in terms.items():
                self._accum(w, c)

    def _accum(self, word, coeff):
        if self.ring.is_zero(coeff):
            return
        if self.trunc is not None and self.alphabet.word_filt(word) > self.trunc:
            return
        cur = self.terms.get(word)
        if cur is None:
            self.terms[word] = coeff
        else:
            s = self.ring.add(cur, coeff)
            if self.ring.is_zero(s):
                del self.terms[word]
            else:
                self.terms[word] = s

    def copy_empty(self):
        return Element(self.alphabet, self.ring, None, self.trunc)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, Element) and self.terms == other.terms)

    def __hash__(self):
        raise TypeError("Element is unhashable")

    def add(self, other):
        out = Element(self.alphabet, self.ring, dict(self.terms), self.trunc)
        for w, c in other.terms.items():
            out._accum(w, c)
        return out

    def sub(self, other):
        out = Element(self.alphabet, self.ring, dict(self.terms), self.trunc)
        for w, c in other.terms.items():
            out._accum(w, self.ring.neg(c))
        return out

    def scale(self, c):
        out = self.copy_empty()
        if self.ring.is_zero(c):
            return out
        for w, k in self.terms.items():
            out._accum(w, self.ring.mul(c, k))
        return out

    def neg(self):
        return self.scale(self.ring.from_int(-1))

    def mul(self, other):
        A = self.alphabet
        out = self.copy_empty()
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                if A.ep(w1[-1]) != A.em(w2[0]):
                    continue
                w = A.reduce(w1 + w2)
                if w is not None:
                    out._accum(w, self.ring.mul(c1, c2))
        return out

    def coeff(self, word):
        word = self.alphabet.reduce(tuple(word))
        if word is None:
            return self.ring.zero()
        return self.terms.get(word, self.ring.zero())

    def degree(self):
        """Common degree of all terms, or None if empty / inhomogeneous."""
        degs = {self.alphabet.word_deg(w) for w in self.terms}
        if not degs:
            return None
        if self.alphabet.modulus:
            degs = {d % self.alphabet.modulus for d in degs}
        if len(degs) > 1:
            return None
        return degs.pop()

    def substitute(self, images):
        """Replace each letter g by images[g] (an Element); letters not in
        `images` map to themselves.  Used for the twisting automorphisms."""
        out = self.copy_empty()
        A = self.alphabet
        for w, c in self.terms.items():
            # expand letter by letter
            words = {(): c}
            for g in w:
                img = images.get(g)
                nxt = {}
                if img is None:
                    for pw, pc in words.items():
                        nxt[pw + (g,)] = pc
                else:
                    for pw, pc in words.items():
                        for iw, ic in img.terms.items():
                            piece = () if (len(iw) == 1 and iw[0].kind == "e") else iw
                            nw = pw + piece
                            c2 = self.ring.mul(pc, ic)
                            if nw in nxt:
                                c2 = self.ring.add(nxt[nw], c2)
                            if self.ring.is_zero(c2):
                                nxt.pop(nw, None)
                            else:
                                nxt[nw] = c2
                words = nxt
                if not words:
                    break
            for nw, nc in words.items():
                full = nw if nw else A.idem(A.word_em(w))
                red = A.reduce(full)
                if red is not None:
                    out._accum(red, nc)
        return out

    def terms_list(self):
        return sorted(self.terms.items(),
                      key=lambda kv: (len(kv[0]), tuple(map(gen_sort_key, kv[0]))))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w, c in self.terms_list():
            bits.append("%s*%s" % (c, fmt_word(w)))
        return " + ".join(bits)


def element(alphabet, ring, word=None, coeff=1, trunc=None):
    e = Element(alphabet, ring, None, trunc)
    if word is not None:
        w = alphabet.reduce(tuple(word))
        if w is None:
            raise ValueError("non-composable word %s" % fmt_word(tuple(word)))
        e._accum(w, ring.from_int(coeff) if isinstance(coeff, int) else coeff)
    return e


def unit(alphabet, ring, trunc=None):
    """The full unit e_1 + ... + e_m."""
    e = Element(alphabet, ring, None, trunc)
    for a in range(1, alphabet.m + 1):
        e._accum(alphabet.idem(a), ring.one())
    return e


def cyclic_rotation_sign(alphabet, word, i):
    """Koszul sign of rotating word -> word[i:] + word[:i]."""
    du = alphabet.word_deg(word[:i])
    dv = alphabet.word_deg(word[i:])
    return -1 if (du % 2) and (dv % 2) else 1


def canonical_rotation(alphabet, word):
    """Least cyclically-composable rotation of `word` with its Koszul sign.

    Returns (canonical_word, sign, torsion) where torsion=True means the
    word equals an odd-signed rotation of itself, so its cyclic class is
    2-torsion (and vanishes over rings where 2 is invertible).
    """
    if len(word) == 1 and word[0].kind == "e":
        return word, 1, False
    if alphabet.ep(word[-1]) != alphabet.em(word[0]):
        raise ValueError("word is not cyclically composable")
    n = len(word)
    best = None
    best_i = 0
    for i in range(n):
        rot = word[i:] + word[:i]
        key = tuple(map(gen_sort_key, rot))
        if best is None or key < best[0]:
            best = (key, rot)
            best_i = i
    canon = best[1]
    sign = cyclic_rotation_sign(alphabet, word, best_i)
    torsion = False
    for i in range(n):
        if i == best_i:
            continue
        rot = word[i:] + word[:i]
        if rot == canon and cyclic_rotation_sign(alphabet, word, i) != sign:
            torsion = True
            break
    return canon, sign, torsion


class CyclicElement:
    """An element of the cyclic quotient L^cyc.

    Terms are keyed by the canonical rotation; anti-periodic words (whose
    cyclic class is 2-torsion) are dropped, which is exact over fields of
    characteristic 2 and over rings where 2 is invertible.
    """

    __slots__ = ("alphabet", "ring", "terms", "trunc")

    def __init__(self, alphabet, ring, trunc=None):
        self.alphabet = alphabet
        self.ring = ring
        self.trunc = trunc
        self.terms = {}

    def _accum(self, word, coeff):
        if self.ring.is_zero(coeff):
            return
        if self.trunc is not None and self.alphabet.word_filt(word) > self.trunc:
            return
        canon, sign, torsion = canonical_rotation(self.alphabet, word)
        if torsion and not _char_two(self.ring):
            return
        if sign < 0:
            coeff = self.ring.neg(coeff)
        cur = self.terms.get(canon)
        if cur is None:
            self.terms[canon] = coeff
        else:
            s = self.ring.add(cur, coeff)
            if self.ring.is_zero(s):
                del self.terms[canon]
            else:
                self.terms[canon] = s

    def add(self, other):
        out = CyclicElement(self.alphabet, self.ring, self.trunc)
        out.terms = dict(self.terms)
        for w, c in other.terms.items():
            out._accum(w, c)
        return out

    def scale(self, c):
        out = CyclicElement(self.alphabet, self.ring, self.trunc)
        for w, k in self.terms.items():
            ck = self.ring.mul(c, k)
            if not self.ring.is_zero(ck):
                out.terms[w] = ck
        return out

    def sub(self, other):
        return self.add(other.scale(self.ring.from_int(-1)))

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, CyclicElement) and self.terms == other.terms

    def degree(self):
        degs = {self.alphabet.word_deg(w) for w in self.terms}
        if not degs:
            return None
        if self.alphabet.modulus:
            degs = {d % self.alphabet.modulus for d in degs}
        return degs.pop() if len(degs) == 1 else None

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w, c in sorted(self.terms.items(),
                           key=lambda kv: (len(kv[0]),
                                           tuple(map(gen_sort_key, kv[0])))):
            bits.append("%s*[%s]" % (c, fmt_word(w)))
        return " + ".join(bits)


def _char_two(ring):
    return ring.is_zero(ring.add(ring.one(), ring.one()))


def to_cyclic(elt):
    out = CyclicElement(elt.alphabet, elt.ring, elt.trunc)
    for w, c in elt.terms.items():
        out._accum(w, c)
    return out
