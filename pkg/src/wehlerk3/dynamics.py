"""The finite phase space and the cycle structure of phi = sigma_y o sigma_x.

Phase points are surface points with their blow-up line parameters attached:
a point over a degenerate base of either projection carries the parameter of
the exceptional line it sits on (one per degenerate side).  Points of
positive-dimensional fibers are replaced by the per-line boundary points of
the corresponding chart, so both involutions act everywhere and phi becomes
a bijection of a finite set.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .blowup import BoundaryPoint, chart_for, exceptional_points, resolve_s
from .errors import NonBijective, PairingFailure
from .geometry import ProjectivePoint1, ProjectivePoint2, point1, point2
from .involution import _cor1_partner
from .surface import WehlerSurface, degenerate_fibers, surface_pairs

__all__ = [
    "PhasePoint",
    "PhaseSpace",
    "CycleCensus",
    "CycleRecord",
    "build_phase_space",
    "cycle_decomposition",
    "classify_cycle",
    "asymmetric_pairing",
    "orbit",
    "lift_pair",
    "phase_step",
    "phi_step",
    "psi_step",
]


@dataclass(frozen=True)
class PhasePoint:
    """A surface point plus the line parameters of any degenerate bases."""

    a: ProjectivePoint2
    b: ProjectivePoint2
    sx: ProjectivePoint1 | None = None
    sy: ProjectivePoint1 | None = None

    @property
    def kind(self) -> str:
        return "regular" if self.sx is None and self.sy is None else "boundary"

    @property
    def pair(self):
        return self.a, self.b

    def key(self):
        return (
            self.a.raw,
            self.b.raw,
            None if self.sx is None else self.sx.raw,
            None if self.sy is None else self.sy.raw,
        )

    def __repr__(self):
        extra = ""
        if self.sx is not None:
            extra += f", sx={self.sx}"
        if self.sy is not None:
            extra += f", sy={self.sy}"
        return f"PhasePoint({self.a}, {self.b}{extra})"


class _Context:
    """Degenerate centers and charts of one surface, shared by all steps."""

    def __init__(self, s: WehlerSurface):
        self.surface = s
        self.p = s.domain.p
        self.centers = {}
        self.charts = {}
        for side in ("x", "y"):
            infos = degenerate_fibers(s, side)
            self.centers[side] = {info.base.raw: info for info in infos}

    def chart(self, side: str, center: ProjectivePoint2):
        key = (side, center.raw)
        if key not in self.charts:
            self.charts[key] = chart_for(self.surface, side, center)
        return self.charts[key]

    def is_center(self, side: str, raw: tuple) -> bool:
        return raw in self.centers[side]


def _context(s: WehlerSurface) -> _Context:
    if "dyn_ctx" not in s._cache:
        s._cache["dyn_ctx"] = _Context(s)
    return s._cache["dyn_ctx"]


# -- standalone scalar stepping (orbits, public phi/psi) -------------------------


def lift_pair(s: WehlerSurface, a, b) -> PhasePoint:
    """Attach line parameters to a raw surface point.

    Raises NoRationalS/AmbiguousS when a degenerate side has no unique
    parameter; those points are outside the phase space.
    """
    if not isinstance(a, ProjectivePoint2):
        a = point2(s.domain, *a)
    if not isinstance(b, ProjectivePoint2):
        b = point2(s.domain, *b)
    ctx = _context(s)
    sx = sy = None
    if ctx.is_center("x", a.raw):
        sx = resolve_s(ctx.chart("x", a), b)
    if ctx.is_center("y", b.raw):
        sy = resolve_s(ctx.chart("y", b), a)
    return PhasePoint(a, b, sx, sy)


def phase_step(s: WehlerSurface, P: PhasePoint, side: str) -> PhasePoint:
    """Apply sigma_side to a phase point, routing through charts as needed."""
    ctx = _context(s)
    if side == "x":
        if P.sx is not None:
            chart = ctx.chart("x", P.a)
            bp = BoundaryPoint("x", P.a, P.sx, P.b)
            moved = chart_swap(chart, bp)
            return _reattach(s, ctx, P.a, moved.moving, kept=P.sx,
                             old_moving=P.b, old_other=P.sy, changed="b")
        partner = _cor1_partner(s, "x", P.a.coords, P.b.coords)
        new_b = point2(s.domain, *partner)
        return _reattach(s, ctx, P.a, new_b, kept=None,
                         old_moving=P.b, old_other=P.sy, changed="b")
    if side == "y":
        if P.sy is not None:
            chart = ctx.chart("y", P.b)
            bp = BoundaryPoint("y", P.b, P.sy, P.a)
            moved = chart_swap(chart, bp)
            return _reattach(s, ctx, moved.moving, P.b, kept=P.sy,
                             old_moving=P.a, old_other=P.sx, changed="a")
        partner = _cor1_partner(s, "y", P.b.coords, P.a.coords)
        new_a = point2(s.domain, *partner)
        return _reattach(s, ctx, new_a, P.b, kept=None,
                         old_moving=P.a, old_other=P.sx, changed="a")
    raise ValueError(f"side must be 'x' or 'y', got {side!r}")


def _reattach(s, ctx, a, b, kept, old_moving, old_other, changed):
    """Rebuild the parameter fields after one coordinate moved.

    `kept` is the stepped side's own parameter (unchanged by the swap);
    the moved coordinate's parameter is rederived unless the swap was a
    fixed point, in which case the old value survives.
    """
    if changed == "b":
        if b == old_moving:
            new_sy = old_other
        elif ctx.is_center("y", b.raw):
            new_sy = resolve_s(ctx.chart("y", b), a)
        else:
            new_sy = None
        return PhasePoint(a, b, kept, new_sy)
    if a == old_moving:
        new_sx = old_other
    elif ctx.is_center("x", a.raw):
        new_sx = resolve_s(ctx.chart("x", a), b)
    else:
        new_sx = None
    return PhasePoint(a, b, new_sx, kept)


def chart_swap(chart, bp: BoundaryPoint) -> BoundaryPoint:
    from .blowup import sigma_extended
    return sigma_extended(chart, bp)


def phi_step(s: WehlerSurface, P: PhasePoint) -> PhasePoint:
    """phi = sigma_y o sigma_x."""
    return phase_step(s, phase_step(s, P, "x"), "y")


def psi_step(s: WehlerSurface, P: PhasePoint) -> PhasePoint:
    """psi = sigma_x o sigma_y, the inverse of phi."""
    return phase_step(s, phase_step(s, P, "y"), "x")


def orbit(s: WehlerSurface, P, n: int) -> list[PhasePoint]:
    """[P, phi P, ..., phi^n P], routing through charts where bases degenerate."""
    if not isinstance(P, PhasePoint):
        P = lift_pair(s, *P)
    out = [P]
    for _ in range(n):
        out.append(phi_step(s, out[-1]))
    return out


# -- the materialized phase space -------------------------------------------------


class PhaseSpace:
    """All phase points of a surface with the two involution permutations."""

    def __init__(self, s: WehlerSurface):
        self.surface = s
        self.p = s.domain.p
        self.ctx = _context(s)
        self.exceptions: list[str] = []
        self._build_points()
        self._perms: dict[str, np.ndarray] = {}

    # -- construction ------------------------------------------------------

    def _build_points(self):
        s = self.surface
        p = self.p
        pairs = surface_pairs(s)
        xc = {raw for raw in self.ctx.centers["x"]}
        yc = {raw for raw in self.ctx.centers["y"]}
        self._xc_keys = {self._pack3(c) for c in xc}
        self._yc_keys = {self._pack3(c) for c in yc}

        akeys = self._pack_rows(pairs[:, :3])
        bkeys = self._pack_rows(pairs[:, 3:])
        a_deg = np.isin(akeys, np.fromiter(self._xc_keys, dtype=np.int64))
        b_deg = np.isin(bkeys, np.fromiter(self._yc_keys, dtype=np.int64))
        if not self._xc_keys:
            a_deg = np.zeros(len(pairs), dtype=bool)
        if not self._yc_keys:
            b_deg = np.zeros(len(pairs), dtype=bool)
        regular = pairs[~a_deg & ~b_deg]

        # Boundary atoms from every chart on both sides.
        x_atoms: dict[tuple, list[tuple]] = {}
        y_atoms: dict[tuple, list[tuple]] = {}
        for raw in sorted(xc):
            chart = self.ctx.chart("x", point2(s.domain, *raw))
            for bp in exceptional_points(chart):
                key = (raw, bp.moving.raw)
                x_atoms.setdefault(key, []).append(bp.s.raw)
        for raw in sorted(yc):
            chart = self.ctx.chart("y", point2(s.domain, *raw))
            for bp in exceptional_points(chart):
                key = (bp.moving.raw, raw)
                y_atoms.setdefault(key, []).append(bp.s.raw)

        none_code = p + 1
        records: list[tuple] = []
        for (a_raw, b_raw), sxs in x_atoms.items():
            if b_raw in yc:
                continue  # handled in the merge below
            for sx in sxs:
                records.append(a_raw + b_raw + (self._scode(sx), none_code))
        for (a_raw, b_raw), sys_ in y_atoms.items():
            if a_raw in xc:
                continue
            for sy in sys_:
                records.append(a_raw + b_raw + (none_code, self._scode(sy)))
        both_keys = {k for k in x_atoms if k[1] in yc} | {
            k for k in y_atoms if k[0] in xc}
        for key in sorted(both_keys):
            xs = x_atoms.get(key, [])
            ys = y_atoms.get(key, [])
            if len(xs) == 1 and len(ys) == 1:
                records.append(key[0] + key[1] + (self._scode(xs[0]), self._scode(ys[0])))
            else:
                self.exceptions.append(
                    f"ambiguous both-side boundary point {key}: "
                    f"{len(xs)} x-lines, {len(ys)} y-lines")

        reg_records = np.concatenate(
            [
                regular,
                np.full((len(regular), 1), none_code, dtype=np.int64),
                np.full((len(regular), 1), none_code, dtype=np.int64),
            ],
            axis=1,
        ) if len(regular) else np.empty((0, 8), dtype=np.int64)
        bnd_records = np.array(sorted(records), dtype=np.int64).reshape(-1, 8)
        allrec = np.concatenate([reg_records, bnd_records]) if len(bnd_records) else reg_records
        order = np.lexsort(allrec.T[::-1])
        self.records = allrec[order]
        self._index = {tuple(int(v) for v in row): i for i, row in enumerate(self.records)}
        self._by_ab: dict[tuple, list[int]] = {}
        for i, row in enumerate(self.records):
            self._by_ab.setdefault(tuple(int(v) for v in row[:6]), []).append(i)

    def _pack3(self, raw: tuple) -> int:
        p = self.p
        return (int(raw[0]) * p + int(raw[1])) * p + int(raw[2])

    def _pack_rows(self, rows: np.ndarray) -> np.ndarray:
        p = self.p
        return (rows[:, 0] * p + rows[:, 1]) * p + rows[:, 2]

    def _scode(self, s_raw: tuple) -> int:
        s0, s1 = int(s_raw[0]), int(s_raw[1])
        return self.p if s0 == 0 else s1

    def _sdecode(self, code: int):
        if code == self.p + 1:
            return None
        if code == self.p:
            return point1(self.surface.domain, 0, 1)
        return point1(self.surface.domain, 1, code)

    # -- point access ---------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.records)

    def point(self, i: int) -> PhasePoint:
        row = self.records[i]
        dom = self.surface.domain
        return PhasePoint(
            point2(dom, *[int(v) for v in row[:3]]),
            point2(dom, *[int(v) for v in row[3:6]]),
            self._sdecode(int(row[6])),
            self._sdecode(int(row[7])),
        )

    def points(self) -> list[PhasePoint]:
        return [self.point(i) for i in range(self.size)]

    def index_of(self, P: PhasePoint) -> int:
        none_code = self.p + 1
        row = P.a.raw + P.b.raw + (
            none_code if P.sx is None else self._scode(P.sx.raw),
            none_code if P.sy is None else self._scode(P.sy.raw),
        )
        row = tuple(int(v) for v in row)
        if row not in self._index:
            raise KeyError(f"{P} is not in the phase space")
        return self._index[row]

    # -- the involution permutations --------------------------------------------

    def perm(self, side: str) -> np.ndarray:
        if side not in self._perms:
            self._perms[side] = self._build_perm(side)
            self._check_involution(side)
        return self._perms[side]

    def _lookup_target(self, a_raw, b_raw, sx_known, i, side) -> int:
        """Find the unique record matching the moved point.

        sx_known is the preserved parameter of the swap side (encoded), or
        None when the swap side's base is non-degenerate; the other side's
        parameter is whatever the unique matching record carries.
        """
        cands = self._by_ab.get(a_raw + b_raw, [])
        if sx_known is not None:
            col = 6 if side == "x" else 7
            cands = [j for j in cands if int(self.records[j][col]) == sx_known]
        if len(cands) == 1:
            return cands[0]
        if not cands:
            self.exceptions.append(
                f"sigma_{side} image of record {i} has no phase point "
                f"({a_raw}, {b_raw})")
        else:
            self.exceptions.append(
                f"sigma_{side} image of record {i} is ambiguous: "
                f"{len(cands)} candidates at ({a_raw}, {b_raw})")
        return -1

    def _build_perm(self, side: str) -> np.ndarray:
        s = self.surface
        p = self.p
        none_code = p + 1
        rec = self.records
        n = len(rec)
        out = np.full(n, -1, dtype=np.int64)

        swap_col = 6 if side == "x" else 7
        base_cols = slice(0, 3) if side == "x" else slice(3, 6)
        mov_cols = slice(3, 6) if side == "x" else slice(0, 3)

        plain = rec[:, swap_col] == none_code
        plain_idx = np.nonzero(plain)[0]
        if len(plain_idx):
            bases = rec[plain_idx][:, base_cols]
            movings = rec[plain_idx][:, mov_cols]
            moved = s.engine().cor1_swap(side, bases, movings)
            for i, row_i in enumerate(plain_idx):
                a_raw = tuple(int(v) for v in rec[row_i][0:3])
                b_raw = tuple(int(v) for v in rec[row_i][3:6])
                new = tuple(int(v) for v in moved[i])
                if side == "x":
                    tgt = self._lookup_target(a_raw, new, None, row_i, side)
                else:
                    tgt = self._lookup_target(new, b_raw, None, row_i, side)
                out[row_i] = tgt

        for row_i in np.nonzero(~plain)[0]:
            row = rec[row_i]
            dom = s.domain
            center = point2(dom, *[int(v) for v in row[base_cols]])
            moving = point2(dom, *[int(v) for v in row[mov_cols]])
            s_param = self._sdecode(int(row[swap_col]))
            chart = self.ctx.chart(side, center)
            bp = BoundaryPoint(side, center, s_param, moving)
            moved = chart_swap(chart, bp)
            new = moved.moving.raw
            if side == "x":
                tgt = self._lookup_target(
                    tuple(int(v) for v in row[0:3]), new, int(row[swap_col]),
                    row_i, side)
            else:
                tgt = self._lookup_target(
                    new, tuple(int(v) for v in row[3:6]), int(row[swap_col]),
                    row_i, side)
            out[row_i] = tgt
        return out

    def _check_involution(self, side: str):
        perm = self._perms[side]
        if np.any(perm < 0):
            raise NonBijective(
                f"sigma_{side} is not total on the phase space; "
                f"first notes: {self.exceptions[:3]}")
        if not np.array_equal(perm[perm], np.arange(len(perm))):
            raise NonBijective(f"sigma_{side} is not an involution")

    def perm_phi(self) -> np.ndarray:
        return self.perm("y")[self.perm("x")]

    def fixed_points(self, side: str) -> list[PhasePoint]:
        perm = self.perm(side)
        idx = np.nonzero(perm == np.arange(len(perm)))[0]
        return [self.point(int(i)) for i in idx]

    def fixed_count(self, side: str) -> int:
        perm = self.perm(side)
        return int(np.count_nonzero(perm == np.arange(len(perm))))


def build_phase_space(s: WehlerSurface) -> PhaseSpace:
    if "phase_space" not in s._cache:
        s._cache["phase_space"] = PhaseSpace(s)
    return s._cache["phase_space"]


# -- cycle census ------------------------------------------------------------------


@dataclass(frozen=True)
class CycleRecord:
    length: int
    symmetric: bool
    rep_index: int


@dataclass
class CycleCensus:
    """Full cycle decomposition of phi with symmetry labels.

    `cycles` lists (minimal period, symmetric?, representative index); the
    identity #symmetric = (fix_x + fix_y) / 2 and the length partition are
    verified at construction time.
    """

    space: PhaseSpace
    cycles: list[CycleRecord]
    fix_x: int
    fix_y: int
    total: int
    cycle_id: np.ndarray = dc_field(repr=False, default=None)

    @property
    def symmetric_count(self) -> int:
        return sum(1 for c in self.cycles if c.symmetric)

    @property
    def asymmetric_count(self) -> int:
        return sum(1 for c in self.cycles if not c.symmetric)

    def lengths(self, symmetric: bool) -> list[int]:
        return [c.length for c in self.cycles if c.symmetric == symmetric]

    def representative(self, record: CycleRecord) -> PhasePoint:
        return self.space.point(record.rep_index)

    def cycle_points(self, record: CycleRecord) -> list[PhasePoint]:
        phi = self.space.perm_phi()
        out = [record.rep_index]
        j = int(phi[record.rep_index])
        while j != record.rep_index:
            out.append(j)
            j = int(phi[j])
        return [self.space.point(i) for i in out]

    def verify(self):
        if sum(c.length for c in self.cycles) != self.total:
            raise NonBijective("cycle lengths do not partition the phase space")
        if (self.fix_x + self.fix_y) % 2:
            raise NonBijective("fix_x + fix_y is odd")
        if self.symmetric_count != (self.fix_x + self.fix_y) // 2:
            raise NonBijective(
                f"symmetric cycle count {self.symmetric_count} != "
                f"(fix_x + fix_y)/2 = {(self.fix_x + self.fix_y) // 2}")

    def period_histogram(self) -> dict[int, float]:
        """Fraction of phase points of each minimal period."""
        from .errors import EmptyPhaseSpace
        if self.total == 0:
            raise EmptyPhaseSpace("no phase points")
        hist: dict[int, int] = {}
        for c in self.cycles:
            hist[c.length] = hist.get(c.length, 0) + c.length
        return {t: n / self.total for t, n in sorted(hist.items())}

    def to_csv_rows(self) -> list[str]:
        """Aggregated rows `length,symmetric,count` (count = #cycles)."""
        agg: dict[tuple[int, bool], int] = {}
        for c in self.cycles:
            agg[(c.length, c.symmetric)] = agg.get((c.length, c.symmetric), 0) + 1
        rows = ["length,symmetric,count"]
        for (length, sym), n in sorted(agg.items()):
            rows.append(f"{length},{int(sym)},{n}")
        return rows

    def to_json_dict(self) -> dict:
        return {
            "total": self.total,
            "fix_x": self.fix_x,
            "fix_y": self.fix_y,
            "symmetric_cycles": self.symmetric_count,
            "asymmetric_cycles": self.asymmetric_count,
            "cycles": [
                {
                    "period": c.length,
                    "interleaved_length": 2 * c.length,
                    "symmetric": c.symmetric,
                    "representative": _point_json(self.representative(c)),
                }
                for c in self.cycles
            ],
        }


def _point_json(P: PhasePoint) -> dict:
    out = {"a": [int(v) for v in P.a.raw], "b": [int(v) for v in P.b.raw]}
    if P.sx is not None:
        out["sx"] = [int(v) for v in P.sx.raw]
    if P.sy is not None:
        out["sy"] = [int(v) for v in P.sy.raw]
    return out


def cycle_decomposition(s_or_space) -> CycleCensus:
    """Walk phi over the materialized phase space; exact minimal periods."""
    space = s_or_space if isinstance(s_or_space, PhaseSpace) else build_phase_space(s_or_space)
    phi = space.perm_phi()
    n = len(phi)
    sx = space.perm("x")
    counts = np.bincount(phi, minlength=n)
    if np.any(counts != 1):
        raise NonBijective("phi is not a bijection of the phase space")
    cycle_id = np.full(n, -1, dtype=np.int64)
    cycles: list[CycleRecord] = []
    for start in range(n):
        if cycle_id[start] >= 0:
            continue
        cid = len(cycles)
        length = 0
        j = start
        while cycle_id[j] < 0:
            cycle_id[j] = cid
            j = int(phi[j])
            length += 1
        cycles.append(CycleRecord(length, False, start))
    # A cycle is symmetric iff sigma_x maps it onto itself; sigma_x sends
    # phi-cycles to phi-cycles, so testing one representative suffices.
    final = []
    for c in cycles:
        sym = cycle_id[int(sx[c.rep_index])] == cycle_id[c.rep_index]
        final.append(CycleRecord(c.length, bool(sym), c.rep_index))
    census = CycleCensus(
        space=space,
        cycles=final,
        fix_x=space.fixed_count("x"),
        fix_y=space.fixed_count("y"),
        total=n,
        cycle_id=cycle_id,
    )
    census.verify()
    return census


def classify_cycle(s: WehlerSurface, cycle_points) -> str:
    """'symmetric' iff sigma_x maps the cycle's point set onto itself."""
    pts = list(cycle_points)
    as_set = {P.key() for P in pts}
    image = {phase_step(s, P, "x").key() for P in pts}
    return "symmetric" if image == as_set else "asymmetric"


def asymmetric_pairing(census: CycleCensus) -> dict[int, int]:
    """Pair each asymmetric cycle with its sigma_x image.

    Returns {cycle index: partner index}; a fixed-point-free, length
    preserving involution on the asymmetric cycles, or PairingFailure.
    """
    space = census.space
    sx = space.perm("x")
    cid = census.cycle_id
    pairing: dict[int, int] = {}
    for i, c in enumerate(census.cycles):
        if c.symmetric:
            continue
        partner = int(cid[int(sx[c.rep_index])])
        if partner == i:
            raise PairingFailure(f"asymmetric cycle {i} maps to itself")
        if census.cycles[partner].length != c.length:
            raise PairingFailure(
                f"cycles {i} and {partner} have different minimal periods")
        if census.cycles[partner].symmetric:
            raise PairingFailure(f"asymmetric cycle {i} pairs with a symmetric one")
        pairing[i] = partner
    for i, j in pairing.items():
        if pairing.get(j) != i:
            raise PairingFailure(f"pairing is not involutive at cycle {i}")
    return pairing
