"""Canonical-form projective points over F_p or QQ.

Points are stored with the first nonzero coordinate scaled to 1, so equality
and hashing are raw tuple comparisons.  That canonical form is what allows
the dynamics to index its phase space with plain dictionaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .field import QQ, FieldElement, PrimeField


def _normalize(coords: tuple, domain) -> tuple:
    vals = tuple(domain.element(c) for c in coords)
    for v in vals:
        if v != 0:
            lead = v
            break
    else:
        raise ValueError("projective point cannot have all coordinates zero")
    if lead == domain.one:
        return vals
    inv = domain.inv(lead) if domain is QQ else lead.inv()
    return tuple(v * inv for v in vals)


def _raw(v) -> int | Fraction:
    return v.value if isinstance(v, FieldElement) else v


@dataclass(frozen=True)
class ProjectivePoint2:
    """A point of P^2 in canonical form (first nonzero coordinate = 1)."""

    coords: tuple

    @classmethod
    def make(cls, domain, c0, c1, c2) -> "ProjectivePoint2":
        return cls(_normalize((c0, c1, c2), domain))

    @property
    def raw(self) -> tuple:
        """Coordinates as plain ints (F_p residues) or Fractions."""
        return tuple(_raw(c) for c in self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self) -> str:
        return "(" + " : ".join(str(_raw(c)) for c in self.coords) + ")"


@dataclass(frozen=True)
class ProjectivePoint1:
    """A point of P^1 in canonical form."""

    coords: tuple

    @classmethod
    def make(cls, domain, c0, c1) -> "ProjectivePoint1":
        return cls(_normalize((c0, c1), domain))

    @property
    def raw(self) -> tuple:
        return tuple(_raw(c) for c in self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self) -> str:
        return "(" + " : ".join(str(_raw(c)) for c in self.coords) + ")"


def point2(domain, c0, c1, c2) -> ProjectivePoint2:
    return ProjectivePoint2.make(domain, c0, c1, c2)


def point1(domain, c0, c1) -> ProjectivePoint1:
    return ProjectivePoint1.make(domain, c0, c1)


def plane_points(field: PrimeField):
    """All canonical points of P^2(F_p) as raw int triples, lex sorted.

    The canonical representatives are (0,0,1), (0,1,z) and (1,y,z); listing
    them in lexicographic order keeps every enumeration deterministic.
    """
    p = field.p
    pts = [(0, 0, 1)]
    pts.extend((0, 1, z) for z in range(p))
    pts.extend((1, y, z) for y in range(p) for z in range(p))
    return pts


def line_points(field: PrimeField):
    """All canonical points of P^1(F_p): (0,1) then (1, t)."""
    return [(0, 1)] + [(1, t) for t in range(field.p)]


def normalize_raw(coords: tuple[int, ...], p: int, inv_table) -> tuple[int, ...]:
    """Canonicalize a raw residue tuple without building field elements."""
    for v in coords:
        if v:
            if v == 1:
                return coords
            s = inv_table[v]
            return tuple(c * s % p for c in coords)
    raise ValueError("zero vector")
