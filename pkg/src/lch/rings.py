"""Exact coefficient arithmetic: prime fields GF(p), the rationals, and the integers.

Every computation in the package runs over one of these rings; no floating
point is used anywhere.  Ring elements are plain python ints (GF(p), ZZ) or
Fractions (QQ), with the ring object supplying the operations.
"""

from __future__ import annotations

from fractions import Fraction


class Ring:
    """Base class; subclasses implement exact field/ring arithmetic."""

    name = "ring"
    is_field = False

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def from_int(self, n):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_zero(self, a):
        return a == self.zero()

    def elements(self):
        """All elements (finite rings only)."""
        raise NotImplementedError("not a finite ring")

    def units(self):
        raise NotImplementedError("not a finite ring")

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return type(self) is type(other) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


class GF(Ring):
    """The prime field F_p; elements are ints in range(p)."""

    is_field = True

    def __init__(self, p):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError("GF order must be prime, got %r" % (p,))
        self.p = p
        self.name = "gf%d" % p

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in %s" % self.name)
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def elements(self):
        return list(range(self.p))

    def units(self):
        return list(range(1, self.p))


class QQ(Ring):
    """The rationals; elements are Fractions."""

    is_field = True
    name = "q"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in QQ")
        return 1 / Fraction(a)


class ZZ(Ring):
    """The integers; elements are ints.  Only +/-1 are invertible."""

    name = "z"

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a in (1, -1):
            return a
        raise ZeroDivisionError("%r is not a unit in ZZ" % (a,))


_CACHE = {}


def ring_by_name(name):
    """Look up a ring from a CLI-style name: 'gf2', 'gf3', 'q', 'z'."""
    if name not in _CACHE:
        if name == "q":
            _CACHE[name] = QQ()
        elif name == "z":
            _CACHE[name] = ZZ()
        elif name.startswith("gf"):
            _CACHE[name] = GF(int(name[2:]))
        else:
            raise ValueError("unknown coefficient ring %r" % name)
    return _CACHE[name]
