"""Wehler K3 surfaces: the (1,1) and (2,2) forms and everything derived
pointwise from them.

A surface is stored as the 3x3 coefficient matrix a_ij of
L = sum a_ij x_i y_j and the 6x6 canonical coefficient table b[I][K] of
Q = sum b[I][K] xmon_I ymon_K, where the monomial order is
(0,0),(0,1),(0,2),(1,1),(1,2),(2,2) and cross entries carry the full
coefficient of x_i x_j (no halving).  With that convention the classical
G/H fiber quadratics come out of the coefficient polynomials verbatim.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._engine import PAIR_INDEX, PAIRS, SurfaceEngine
from .errors import (
    BadModulus,
    DegenerateBase,
    ExhaustedAttempts,
    InexactQuotient,
    ParseError,
    ZeroForm,
    ZeroInverse,
)
from .field import QQ, PrimeField, is_prime
from .geometry import ProjectivePoint2, point2
from .poly import SparsePoly

VARS6 = ("x0", "x1", "x2", "y0", "y1", "y2")
XVARS = ("x0", "x1", "x2")
YVARS = ("y0", "y1", "y2")


def _side_vars(side: str):
    if side == "x":
        return XVARS
    if side == "y":
        return YVARS
    raise ValueError(f"side must be 'x' or 'y', got {side!r}")


class WehlerSurface:
    """Immutable V(L, Q) in P^2 x P^2 over F_p or QQ."""

    def __init__(self, domain, a, b):
        self.domain = domain
        elt = domain.element
        self.a = tuple(tuple(elt(a[i][j]) for j in range(3)) for i in range(3))
        self.b = tuple(tuple(elt(b[I][K]) for K in range(6)) for I in range(6))
        if all(v == domain.zero for row in self.a for v in row):
            raise ZeroForm("L is identically zero")
        if all(v == domain.zero for row in self.b for v in row):
            raise ZeroForm("Q is identically zero")
        self._cache: dict = {}

    # -- construction -------------------------------------------------------

    @classmethod
    def from_terms(cls, domain, l_terms, q_terms) -> "WehlerSurface":
        """Build from sparse entries ((i,j),c) for L and ((i,j,k,l),c) for Q.

        Q indices are symmetrized into canonical slots; repeated entries
        accumulate.
        """
        a = [[0] * 3 for _ in range(3)]
        b = [[0] * 6 for _ in range(6)]
        for (i, j), c in l_terms:
            a[i][j] += c
        for (i, j, k, l), c in q_terms:
            I = PAIR_INDEX[(min(i, j), max(i, j))]
            K = PAIR_INDEX[(min(k, l), max(k, l))]
            b[I][K] += c
        return cls(domain, a, b)

    def __eq__(self, other):
        if not isinstance(other, WehlerSurface):
            return NotImplemented
        return self.domain is other.domain and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((id(self.domain), self.a, self.b))

    def __repr__(self):
        return f"WehlerSurface(domain={self.domain!r}, L={self.l_poly()}, Q={self.q_poly()})"

    @property
    def p(self) -> int | None:
        return getattr(self.domain, "p", None)

    def is_finite(self) -> bool:
        return self.domain is not QQ

    # -- defining forms -----------------------------------------------------

    def l_poly(self) -> SparsePoly:
        if "L" not in self._cache:
            terms = {}
            for i in range(3):
                for j in range(3):
                    e = [0] * 6
                    e[i] = 1
                    e[3 + j] = 1
                    terms[tuple(e)] = self.a[i][j]
            self._cache["L"] = SparsePoly(self.domain, VARS6, terms)
        return self._cache["L"]

    def q_poly(self) -> SparsePoly:
        if "Q" not in self._cache:
            terms = {}
            for I, (i, j) in enumerate(PAIRS):
                for K, (k, l) in enumerate(PAIRS):
                    e = [0] * 6
                    e[i] += 1
                    e[j] += 1
                    e[3 + k] += 1
                    e[3 + l] += 1
                    terms[tuple(e)] = self.b[I][K]
            self._cache["Q"] = SparsePoly(self.domain, VARS6, terms)
        return self._cache["Q"]

    def reduce_mod(self, p: int) -> "WehlerSurface":
        """Reduction of a QQ surface modulo an odd prime."""
        if self.domain is not QQ:
            raise ValueError("reduce_mod applies to surfaces over QQ")
        field = PrimeField(p)
        try:
            a = [[field.element(v) for v in row] for row in self.a]
            b = [[field.element(v) for v in row] for row in self.b]
        except ZeroInverse as exc:
            raise BadModulus(f"surface has bad reduction at {p}") from exc
        return WehlerSurface(field, a, b)

    # -- raw coefficient arrays (engine) --------------------------------------

    def _mats(self):
        amat = [[int(v) for v in row] for row in self.a]
        bmat = [[int(v) for v in row] for row in self.b]
        return amat, bmat

    def engine(self) -> SurfaceEngine:
        if not self.is_finite():
            raise ValueError("engine requires a finite field surface")
        if "engine" not in self._cache:
            amat, bmat = self._mats()
            self._cache["engine"] = SurfaceEngine(amat, bmat, self.domain.p)
        return self._cache["engine"]

    # -- evaluation helpers ----------------------------------------------------

    def line_values(self, side: str, base) -> tuple:
        """L restricted to the fiber over `base`: its 3 linear coefficients."""
        c = list(base)
        if side == "x":
            return tuple(sum((self.a[i][j] * c[i] for i in range(3)), self.domain.zero)
                         for j in range(3))
        return tuple(sum((self.a[i][j] * c[j] for j in range(3)), self.domain.zero)
                     for i in range(3))

    def quad_values(self, side: str, base) -> tuple:
        """Q restricted to the fiber over `base`: its 6 quadratic coefficients."""
        c = list(base)
        mon = [c[i] * c[j] for (i, j) in PAIRS]
        if side == "x":
            return tuple(sum((self.b[I][K] * mon[I] for I in range(6)), self.domain.zero)
                         for K in range(6))
        return tuple(sum((self.b[I][K] * mon[K] for K in range(6)), self.domain.zero)
                     for I in range(6))

    def contains(self, a, b) -> bool:
        """Whether (a, b) satisfies L = Q = 0."""
        lv = self.line_values("x", a)
        lval = sum((lv[j] * list(b)[j] for j in range(3)), self.domain.zero)
        qv = self.quad_values("x", a)
        bc = list(b)
        qval = sum((qv[K] * bc[k] * bc[l] for K, (k, l) in enumerate(PAIRS)),
                   self.domain.zero)
        return lval == self.domain.zero and qval == self.domain.zero


# -- file format ---------------------------------------------------------------


def parse_surface(text: str) -> WehlerSurface:
    """Parse the line-oriented surface format.

    Line 1 is `p <modulus|Q>`; remaining non-comment lines are `L i j c` or
    `Q i j k l c` with integer c, accumulated and symmetrized.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty surface file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "p":
        raise ParseError(f"first line must be 'p <modulus|Q>', got {lines[0]!r}")
    if head[1] == "Q":
        domain = QQ
    else:
        try:
            p = int(head[1])
        except ValueError as exc:
            raise ParseError(f"bad modulus {head[1]!r}") from exc
        if p < 3 or p % 2 == 0 or not is_prime(p):
            raise BadModulus(f"modulus must be an odd prime, got {p}")
        domain = PrimeField(p)
    l_terms = []
    q_terms = []
    for ln in lines[1:]:
        parts = ln.split()
        try:
            if parts[0] == "L" and len(parts) == 4:
                i, j, c = int(parts[1]), int(parts[2]), int(parts[3])
                if not (0 <= i <= 2 and 0 <= j <= 2):
                    raise ParseError(f"L indices out of range: {ln!r}")
                l_terms.append(((i, j), c))
            elif parts[0] == "Q" and len(parts) == 6:
                i, j, k, l, c = (int(x) for x in parts[1:])
                if not all(0 <= t <= 2 for t in (i, j, k, l)):
                    raise ParseError(f"Q indices out of range: {ln!r}")
                q_terms.append(((i, j, k, l), c))
            else:
                raise ParseError(f"unrecognized entry {ln!r}")
        except ValueError as exc:
            raise ParseError(f"bad integer in {ln!r}") from exc
    return WehlerSurface.from_terms(domain, l_terms, q_terms)


def serialize_surface(s: WehlerSurface) -> str:
    """Canonical text form: sorted entries, zero coefficients skipped."""
    out = ["p Q" if s.domain is QQ else f"p {s.domain.p}"]
    for i in range(3):
        for j in range(3):
            c = s.a[i][j]
            if c != s.domain.zero:
                out.append(f"L {i} {j} {_coeff_str(c)}")
    for I, (i, j) in enumerate(PAIRS):
        for K, (k, l) in enumerate(PAIRS):
            c = s.b[I][K]
            if c != s.domain.zero:
                out.append(f"Q {i} {j} {k} {l} {_coeff_str(c)}")
    return "\n".join(out) + "\n"


def _coeff_str(c) -> str:
    if isinstance(c, Fraction):
        if c.denominator != 1:
            raise ParseError("surface files require integer coefficients")
        return str(c.numerator)
    return str(int(c))


# -- coefficient polynomials and the G/H system -------------------------------


@dataclass(frozen=True)
class CoefficientPolys:
    """The linear and quadratic coefficient polynomials of one side."""

    side: str
    lc: tuple            # lc[j] = L_j^side, linear in the side's variables
    qc: dict             # qc[(k,l)] (k <= l) = Q_kl^side, quadratic

    def q(self, k: int, l: int) -> SparsePoly:
        return self.qc[(min(k, l), max(k, l))]


@dataclass(frozen=True)
class GHSystem:
    """The fiber-quadratic coefficient system G_k, H_ij of one side."""

    side: str
    g: tuple             # g[k], quartic
    h: dict              # h[(i,j)] (i < j), quartic

    def triple(self, k: int, l: int):
        """(G_k, H_kl, G_l) for the quadratic in the (k, l) moving coordinates."""
        return self.g[k], self.h[(min(k, l), max(k, l))], self.g[l]


@dataclass(frozen=True)
class RamificationSextic:
    """Branch locus of one projection: sigma_side fixes exactly its zeros."""

    side: str
    g: SparsePoly        # degree 6 in the side's own three variables


def coefficient_polys(s: WehlerSurface, side: str) -> CoefficientPolys:
    key = ("coeff", side)
    if key in s._cache:
        return s._cache[key]
    names = _side_vars(side)
    gens = SparsePoly.gens(s.domain, names)
    if side == "x":
        lc = tuple(
            sum((gens[i] * s.a[i][j] for i in range(3)),
                SparsePoly.zero(s.domain, names))
            for j in range(3)
        )
        qc = {
            (k, l): sum(
                (gens[i] * gens[j] * s.b[I][PAIR_INDEX[(k, l)]]
                 for I, (i, j) in enumerate(PAIRS)),
                SparsePoly.zero(s.domain, names))
            for (k, l) in PAIRS
        }
    else:
        lc = tuple(
            sum((gens[j] * s.a[i][j] for j in range(3)),
                SparsePoly.zero(s.domain, names))
            for i in range(3)
        )
        qc = {
            (i, j): sum(
                (gens[k] * gens[l] * s.b[PAIR_INDEX[(i, j)]][K]
                 for K, (k, l) in enumerate(PAIRS)),
                SparsePoly.zero(s.domain, names))
            for (i, j) in PAIRS
        }
    result = CoefficientPolys(side, lc, qc)
    s._cache[key] = result
    return result


def gh_system(s: WehlerSurface, side: str) -> GHSystem:
    """G_k = L_j^2 Q_ii - L_i L_j Q_ij + L_i^2 Q_jj and the matching H_ij.

    (i, j, k) runs over permutations of {0, 1, 2}; every G and H is a quartic
    in the side's own variables.
    """
    key = ("gh", side)
    if key in s._cache:
        return s._cache[key]
    cp = coefficient_polys(s, side)
    L, q = cp.lc, cp.q
    g = []
    for k in range(3):
        i, j = [t for t in range(3) if t != k]
        g.append(L[j] * L[j] * q(i, i) - L[i] * L[j] * q(i, j) + L[i] * L[i] * q(j, j))
    h = {}
    for (i, j) in ((0, 1), (0, 2), (1, 2)):
        k = 3 - i - j
        h[(i, j)] = (
            2 * L[i] * L[j] * q(k, k)
            - L[i] * L[k] * q(j, k)
            - L[j] * L[k] * q(i, k)
            + L[k] * L[k] * q(i, j)
        )
    for poly in list(g) + list(h.values()):
        if poly and poly.total_degree() > 4:
            raise AssertionError("G/H degree bound violated")
    result = GHSystem(side, tuple(g), h)
    s._cache[key] = result
    return result


def gh_values(s: WehlerSurface, side: str, base) -> tuple[tuple, dict]:
    """G and H evaluated at one base point, without symbolic polynomials."""
    L = s.line_values(side, base)
    qv = s.quad_values(side, base)

    def q(i, j):
        return qv[PAIR_INDEX[(min(i, j), max(i, j))]]

    g = []
    for k in range(3):
        i, j = [t for t in range(3) if t != k]
        g.append(L[j] * L[j] * q(i, i) - L[i] * L[j] * q(i, j) + L[i] * L[i] * q(j, j))
    h = {}
    for (i, j) in ((0, 1), (0, 2), (1, 2)):
        k = 3 - i - j
        h[(i, j)] = (
            2 * L[i] * L[j] * q(k, k)
            - L[i] * L[k] * q(j, k)
            - L[j] * L[k] * q(i, k)
            + L[k] * L[k] * q(i, j)
        )
    return tuple(g), h


def fiber_quadratic(s: WehlerSurface, side: str, base, pair: tuple[int, int]):
    """(A, B, C) with A x_l^2 + B x_k x_l + C x_k^2 = 0 cutting the fiber.

    Raises DegenerateBase when every G and H vanishes at the base, which is
    the signal to route through a blow-up chart.
    """
    g, h = gh_values(s, side, base)
    zero = s.domain.zero
    if all(v == zero for v in g) and all(v == zero for v in h.values()):
        raise DegenerateBase(f"all fiber quadratics vanish over {base}")
    k, l = pair
    return g[k], h[(min(k, l), max(k, l))], g[l]


def ramification_sextic(s: WehlerSurface, side: str) -> RamificationSextic:
    """The degree-6 branch form ((H_ij)^2 - 4 G_i G_j) / (L_k)^2.

    The quotient is computed exactly and checked to be independent of the
    index pair: for every other permutation the identity
    H_ij^2 - 4 G_i G_j = g * L_k^2 must hold on the nose.
    """
    key = ("sextic", side)
    if key in s._cache:
        return s._cache[key]
    cp = coefficient_polys(s, side)
    sys = gh_system(s, side)
    perms = ((0, 1, 2), (0, 2, 1), (1, 2, 0))
    nums = {}
    dens = {}
    for (i, j, k) in perms:
        nums[k] = sys.h[(i, j)] * sys.h[(i, j)] - 4 * sys.g[i] * sys.g[j]
        dens[k] = cp.lc[k] * cp.lc[k]
    g_poly = None
    for k in (2, 1, 0):
        if cp.lc[k]:
            try:
                g_poly = nums[k].divide_exact(dens[k])
            except Exception as exc:
                raise InexactQuotient(
                    f"(L_{k})^2 does not divide H^2 - 4GG on side {side}") from exc
            break
    if g_poly is None:
        raise InexactQuotient("all linear coefficient forms vanish")
    for k in (2, 1, 0):
        if nums[k] != g_poly * dens[k]:
            raise InexactQuotient(
                f"ramification form disagrees between index pairs on side {side}")
    if g_poly and g_poly.total_degree() > 6:
        raise InexactQuotient("ramification form has degree > 6")
    result = RamificationSextic(side, g_poly)
    s._cache[key] = result
    return result


# -- degenerate fibers ----------------------------------------------------------


@dataclass(frozen=True)
class DegenerateFiberInfo:
    """A positive-dimensional fiber: its base point and witness kind."""

    base: ProjectivePoint2
    kind: str            # "line", "conic" or "plane"


def _fiber_restriction(s: WehlerSurface, side: str, base):
    """Classification data for the fiber over `base`.

    Returns (kind, payload): kind "finite" (payload: line basis u, v and the
    restricted quadratic (A,B,C)), or one of the degenerate kinds.
    """
    zero = s.domain.zero
    lc = s.line_values(side, base)
    qv = s.quad_values(side, base)
    if all(c == zero for c in lc):
        if all(c == zero for c in qv):
            return "plane", None
        return "conic", None
    c0, c1, c2 = lc
    one = s.domain.one
    if c2 != zero:
        u = (c2, zero, -c0)
        v = (zero, c2, -c1)
    elif c1 != zero:
        u = (c1, -c0, zero)
        v = (zero, zero, one)
    else:
        u = (zero, one, zero)
        v = (zero, zero, one)

    def q_at(w):
        return sum((qv[K] * w[k] * w[l] for K, (k, l) in enumerate(PAIRS)), zero)

    A = q_at(u)
    C = q_at(v)
    B = q_at(tuple(a + b for a, b in zip(u, v))) - A - C
    if A == zero and B == zero and C == zero:
        return "line", (u, v)
    return "finite", (u, v, (A, B, C))


def _qq_candidates(height: int):
    """Primitive integer triples of height <= `height`, canonical signs."""
    from math import gcd
    for c0 in range(0, height + 1):
        r1 = range(-height, height + 1) if c0 else range(0, height + 1)
        for c1 in r1:
            if c0 == 0 and c1 == 0:
                r2 = [1]
            elif (c0, c1) != (0, 0):
                r2 = range(-height, height + 1)
            for c2 in r2:
                if (c0, c1, c2) == (0, 0, 0):
                    continue
                lead = c0 if c0 else (c1 if c1 else c2)
                if lead < 0:
                    continue
                if gcd(gcd(abs(c0), abs(c1)), abs(c2)) != 1:
                    continue
                yield (Fraction(c0), Fraction(c1), Fraction(c2))


def degenerate_fibers(s: WehlerSurface, side: str, height: int = 8):
    """Base points with positive-dimensional fiber and vanishing G/H system.

    Over F_p the scan is exhaustive.  Over QQ candidates are searched up to
    the given naive height; the returned list is complete only within that
    box (the worked example's centers have height 1).
    """
    result = []
    zero = s.domain.zero
    if s.is_finite():
        _, degenerate = _analysis(s, side)
        for base_row, kind in degenerate:
            base = point2(s.domain, *[int(v) for v in base_row])
            g, h = gh_values(s, side, base.raw)
            if all(v == zero for v in g) and all(v == zero for v in h.values()):
                result.append(DegenerateFiberInfo(base, kind))
    else:
        for cand in _qq_candidates(height):
            kind, _ = _fiber_restriction(s, side, cand)
            if kind == "finite":
                continue
            g, h = gh_values(s, side, cand)
            if all(v == zero for v in g) and all(v == zero for v in h.values()):
                result.append(DegenerateFiberInfo(point2(QQ, *cand), kind))
    result.sort(key=lambda d: d.base.raw)
    return result


def _analysis(s: WehlerSurface, side: str):
    key = ("analysis", side)
    if key not in s._cache:
        s._cache[key] = s.engine().analyze(side)
    return s._cache[key]


# -- rational points --------------------------------------------------------------


def surface_pairs(s: WehlerSurface) -> np.ndarray:
    """All rational points as an (N, 6) int array [a | b], lex sorted."""
    pairs, _ = _analysis(s, "x")
    return pairs


def enumerate_points(s: WehlerSurface):
    """All solutions of L = Q = 0 as canonical point pairs, lex ordered."""
    pairs = surface_pairs(s)
    dom = s.domain
    return [
        (point2(dom, int(r[0]), int(r[1]), int(r[2])),
         point2(dom, int(r[3]), int(r[4]), int(r[5])))
        for r in pairs
    ]


def point_count(s: WehlerSurface) -> int:
    return len(surface_pairs(s))


@dataclass(frozen=True)
class SmoothnessReport:
    """Result of the rational-point Jacobian scan.

    A True verdict means "no rational singular point"; singular points over
    field extensions are invisible to this check, so it is a necessary but
    not sufficient smoothness condition.
    """

    no_rational_singular_point: bool
    points_checked: int
    singular_points: tuple

    def __bool__(self) -> bool:
        return self.no_rational_singular_point


def is_smooth_rational(s: WehlerSurface) -> SmoothnessReport:
    """Rank-2 Jacobian test of (L, Q) at every rational point."""
    pairs = surface_pairs(s)
    if len(pairs) == 0:
        return SmoothnessReport(True, 0, ())
    bad = s.engine().smooth_scan(pairs)
    rows = pairs[bad]
    dom = s.domain
    sing = tuple(
        (point2(dom, int(r[0]), int(r[1]), int(r[2])),
         point2(dom, int(r[3]), int(r[4]), int(r[5])))
        for r in rows[:16]
    )
    return SmoothnessReport(not bool(bad.any()), len(pairs), sing)


# -- random surfaces ----------------------------------------------------------------


def random_surface(
    p: int,
    seed: int,
    mode: str = "nondegenerate",
    min_degenerate: int = 1,
    max_draws: int = 10_000,
) -> WehlerSurface:
    """Rejection-sample a surface over F_p with reproducible draws.

    mode "nondegenerate": no degenerate fibers on either side.
    mode "degenerate": at least `min_degenerate` degenerate fibers in total.
    mode "any": only the smoothness filter.
    Every accepted surface passes the rational-point Jacobian check.
    """
    if p < 5:
        raise BadModulus(f"random surfaces need p >= 5, got {p}")
    field = PrimeField(p)
    rng = random.Random(seed)
    if mode not in ("nondegenerate", "degenerate", "any"):
        raise ValueError(f"unknown mode {mode!r}")
    for _ in range(max_draws):
        a = [[rng.randrange(p) for _ in range(3)] for _ in range(3)]
        b = [[rng.randrange(p) for _ in range(6)] for _ in range(6)]
        try:
            cand = WehlerSurface(field, a, b)
        except ZeroForm:
            continue
        if not is_smooth_rational(cand):
            continue
        n_deg = len(degenerate_fibers(cand, "x")) + len(degenerate_fibers(cand, "y"))
        if mode == "nondegenerate" and n_deg:
            continue
        if mode == "degenerate" and n_deg < min_degenerate:
            continue
        return cand
    raise ExhaustedAttempts(f"no acceptable surface in {max_draws} draws at p={p}")
