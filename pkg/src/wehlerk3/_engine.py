"""Vectorized F_p kernels for point enumeration, Jacobian scans and fiber swaps.

Pure numpy int64 arithmetic, always reduced mod p after each product, so all
results are exact.  The symbolic machinery lives in `poly`; this module only
handles the bulk numeric passes whose cost scales with p^2.
"""

from __future__ import annotations

import numpy as np

from .errors import BadModulus
from .field import PrimeField

# x_i*x_j (or y_k*y_l) monomials in canonical order; cross terms carry the
# full coefficient, matching how WehlerSurface stores its (2,2) form.
PAIRS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))
PAIR_INDEX = {pq: n for n, pq in enumerate(PAIRS)}

# Vieta recovery tries index pairs in this fixed order; entry n is (k, l, m)
# with m the third index.
SWAP_PAIRS = ((0, 1, 2), (0, 2, 1), (1, 2, 0))

_ENUM_P_CAP = 2048


class PlaneTable:
    """Canonical P^2(F_p) points plus lookup tables, cached per prime."""

    _cache: dict[int, "PlaneTable"] = {}

    def __new__(cls, p: int):
        if p in cls._cache:
            return cls._cache[p]
        if p > _ENUM_P_CAP:
            raise BadModulus(f"plane enumeration capped at p <= {_ENUM_P_CAP}, got {p}")
        self = super().__new__(cls)
        self.p = p
        field = PrimeField(p)
        pts = [(0, 0, 1)]
        pts.extend((0, 1, z) for z in range(p))
        pts.extend((1, y, z) for y in range(p) for z in range(p))
        self.pts = np.array(pts, dtype=np.int64)
        self.keys = self.pack(self.pts)  # strictly increasing by construction?
        order = np.argsort(self.keys, kind="stable")
        self.pts = self.pts[order]
        self.keys = self.keys[order]
        self.inv = np.array(field.inv_table(), dtype=np.int64)
        self.sqrt = np.array(field.sqrt_table(), dtype=np.int64)
        self.mon6 = self._monomials(self.pts)
        cls._cache[p] = self
        return self

    def pack(self, pts: np.ndarray) -> np.ndarray:
        p = self.p
        return (pts[..., 0] * p + pts[..., 1]) * p + pts[..., 2]

    def _monomials(self, pts: np.ndarray) -> np.ndarray:
        p = self.p
        cols = [pts[:, i] * pts[:, j] % p for (i, j) in PAIRS]
        return np.stack(cols, axis=1)

    def monomials(self, pts: np.ndarray) -> np.ndarray:
        return self._monomials(np.asarray(pts, dtype=np.int64))

    def index_of(self, pts: np.ndarray) -> np.ndarray:
        """Row indices of canonical points in the table."""
        keys = self.pack(np.asarray(pts, dtype=np.int64))
        idx = np.searchsorted(self.keys, keys)
        if np.any(self.keys[idx] != keys):
            raise KeyError("point not in canonical table")
        return idx

    def canonicalize(self, pts: np.ndarray) -> np.ndarray:
        """Scale rows so the first nonzero coordinate is 1."""
        pts = np.asarray(pts, dtype=np.int64)
        nz = pts != 0
        lead_pos = np.argmax(nz, axis=1)
        lead = pts[np.arange(len(pts)), lead_pos]
        if np.any(lead == 0):
            raise ValueError("zero vector cannot be canonicalized")
        return pts * self.inv[lead][:, None] % self.p


def line_basis(lc: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Two independent points spanning each line c.y = 0 (rows with c != 0)."""
    c0, c1, c2 = lc[:, 0], lc[:, 1], lc[:, 2]
    zero = np.zeros_like(c0)
    one = np.ones_like(c0)
    case2 = c2 != 0
    case1 = ~case2 & (c1 != 0)
    case0 = ~case2 & ~case1
    u = np.empty_like(lc)
    v = np.empty_like(lc)
    # c2 != 0: u=(c2,0,-c0), v=(0,c2,-c1)
    # c2 == 0, c1 != 0: u=(c1,-c0,0), v=(0,0,1)
    # only c0 != 0: line y0=0: u=(0,1,0), v=(0,0,1)
    u[:, 0] = np.select([case2, case1, case0], [c2, c1, zero])
    u[:, 1] = np.select([case2, case1, case0], [zero, (-c0) % p, one])
    u[:, 2] = np.select([case2, case1, case0], [(-c0) % p, zero, zero])
    v[:, 0] = zero
    v[:, 1] = np.select([case2, case1, case0], [c2, zero, zero])
    v[:, 2] = np.select([case2, case1, case0], [(-c1) % p, one, one])
    return u % p, v % p


def quad_eval(qc: np.ndarray, w: np.ndarray, p: int) -> np.ndarray:
    """Evaluate rows of 6-coefficient quadratics at rows of points w."""
    acc = np.zeros(len(qc), dtype=np.int64)
    for n, (i, j) in enumerate(PAIRS):
        acc = (acc + qc[:, n] * (w[:, i] * w[:, j] % p)) % p
    return acc


def gh_eval(lc: np.ndarray, qc: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """G_k and H_kl values from evaluated L (n,3) and Q (n,6) coefficients.

    Columns of H follow SWAP_PAIRS order: H01, H02, H12.
    """
    L0, L1, L2 = lc[:, 0] % p, lc[:, 1] % p, lc[:, 2] % p
    Q00, Q01, Q02, Q11, Q12, Q22 = (qc[:, n] % p for n in range(6))
    L00, L11, L22 = L0 * L0 % p, L1 * L1 % p, L2 * L2 % p
    L01, L02, L12 = L0 * L1 % p, L0 * L2 % p, L1 * L2 % p
    G0 = (L22 * Q11 - L12 * Q12 + L11 * Q22) % p
    G1 = (L22 * Q00 - L02 * Q02 + L00 * Q22) % p
    G2 = (L11 * Q00 - L01 * Q01 + L00 * Q11) % p
    H01 = (2 * L01 * Q22 - L02 * Q12 - L12 * Q02 + L22 * Q01) % p
    H02 = (2 * L02 * Q11 - L01 * Q12 - L12 * Q01 + L11 * Q02) % p
    H12 = (2 * L12 * Q00 - L01 * Q02 - L02 * Q01 + L00 * Q12) % p
    return np.stack([G0, G1, G2], axis=1), np.stack([H01, H02, H12], axis=1)


def binary_other_root(A, B, C, alpha, beta, p: int):
    """Second root of A*t1^2 + B*t0*t1 + C*t0^2 given the root (alpha, beta).

    Everything vectorized mod p; returns (gamma, delta) with the convention
    that a double root reproduces (alpha, beta) projectively.
    """
    use = alpha % p != 0
    gamma = np.where(use, A * alpha, B) % p
    delta = np.where(use, -(B * alpha + A * beta), -C) % p
    return gamma, delta


class SurfaceEngine:
    """Bulk operations for one Wehler surface over F_p."""

    def __init__(self, amat, bmat, p: int):
        self.p = p
        self.table = PlaneTable(p)
        self.amat = np.asarray(amat, dtype=np.int64) % p
        self.bmat = np.asarray(bmat, dtype=np.int64) % p

    # -- per-base coefficient collections ----------------------------------

    def line_coeffs(self, side: str, bases: np.ndarray) -> np.ndarray:
        """L restricted to the fiber over each base: 3 linear coefficients.

        side 'x': bases are a in P^2_x, coefficients of y_j in L(a, .).
        side 'y': bases are b in P^2_y, coefficients of x_i in L(., b).
        """
        if side == "x":
            return bases @ self.amat % self.p
        return bases @ self.amat.T % self.p

    def quad_coeffs(self, side: str, mon: np.ndarray) -> np.ndarray:
        """Q restricted to the fiber: 6 quadratic coefficients per base."""
        if side == "x":
            return mon @ self.bmat % self.p
        return mon @ self.bmat.T % self.p

    # -- full fiber analysis over one side ----------------------------------

    def analyze(self, side: str):
        """Solve every fiber of the chosen projection.

        Returns (pairs, degenerate) where pairs is an (N, 6) array of
        [base, fiber-point] coordinate rows in (x, y) order, and degenerate
        lists (base_row, kind) for positive-dimensional fibers with
        kind in {"line", "conic", "plane"}.
        """
        p = self.p
        tbl = self.table
        bases = tbl.pts
        lc = self.line_coeffs(side, bases)
        qc = self.quad_coeffs(side, tbl.mon6)

        line_ok = np.any(lc != 0, axis=1)
        out_base: list[np.ndarray] = []
        out_fib: list[np.ndarray] = []
        degenerate: list[tuple[np.ndarray, str]] = []

        # Generic bases: restrict Q to the line L(base, .) = 0.
        idx = np.nonzero(line_ok)[0]
        u, v = line_basis(lc[idx], p)
        qci = qc[idx]
        A = quad_eval(qci, u, p)
        C = quad_eval(qci, v, p)
        B = (quad_eval(qci, (u + v) % p, p) - A - C) % p

        whole_line = (A == 0) & (B == 0) & (C == 0)
        for row in idx[whole_line]:
            degenerate.append((bases[row], "line"))
            ts = np.concatenate(
                [np.stack([np.ones(p, dtype=np.int64), np.arange(p)], axis=1),
                 np.array([[0, 1]], dtype=np.int64)]
            )
            upts = (ts[:, :1] * u[np.searchsorted(idx, row)][None, :]
                    + ts[:, 1:] * v[np.searchsorted(idx, row)][None, :]) % p
            out_base.append(np.repeat(bases[row][None, :], len(upts), axis=0))
            out_fib.append(tbl.canonicalize(upts))

        solvable = ~whole_line
        # Roots with t1 = 0 exist iff A == 0: fiber point = u.
        rootA = solvable & (A == 0)
        rows = idx[rootA]
        out_base.append(bases[rows])
        out_fib.append(tbl.canonicalize(u[rootA]))
        # Second root for A == 0, B != 0: t0 = -C/B, t1 = 1.
        rootB = solvable & (A == 0) & (B != 0)
        t0 = (-C[rootB] * tbl.inv[B[rootB]]) % p
        pts = (t0[:, None] * u[rootB] + v[rootB]) % p
        out_base.append(bases[idx[rootB]])
        out_fib.append(tbl.canonicalize(pts))
        # A != 0: standard quadratic in t0 with t1 = 1.
        quad = solvable & (A != 0)
        disc = (B[quad] * B[quad] - 4 * A[quad] * C[quad]) % p
        root = tbl.sqrt[disc]
        has = root >= 0
        qrows = np.nonzero(quad)[0][has]
        r = root[has]
        inv2A = tbl.inv[(2 * A[qrows]) % p]
        for sign in (1, -1):
            t0 = ((-B[qrows] + sign * r) * inv2A) % p
            sel = np.ones(len(qrows), dtype=bool) if sign == 1 else r != 0
            pts = (t0[sel][:, None] * u[qrows[sel]] + v[qrows[sel]]) % p
            out_base.append(bases[idx[qrows[sel]]])
            out_fib.append(tbl.canonicalize(pts))

        # Special bases where L vanishes identically on the fiber plane.
        for row in np.nonzero(~line_ok)[0]:
            qrow = qc[row]
            if np.all(qrow == 0):
                degenerate.append((bases[row], "plane"))
                sols = tbl.pts
            else:
                degenerate.append((bases[row], "conic"))
                vals = tbl.mon6 @ (qrow % p) % p
                sols = tbl.pts[vals == 0]
            out_base.append(np.repeat(bases[row][None, :], len(sols), axis=0))
            out_fib.append(sols)

        base_arr = np.concatenate(out_base) if out_base else np.empty((0, 3), np.int64)
        fib_arr = np.concatenate(out_fib) if out_fib else np.empty((0, 3), np.int64)
        if side == "x":
            pairs = np.concatenate([base_arr, fib_arr], axis=1)
        else:
            pairs = np.concatenate([fib_arr, base_arr], axis=1)
        order = np.lexsort(pairs.T[::-1])
        return pairs[order], degenerate

    # -- rational-point Jacobian rank scan -----------------------------------

    def smooth_scan(self, pairs: np.ndarray) -> np.ndarray:
        """Mask of rows where the 2x6 Jacobian of (L, Q) has rank < 2."""
        p = self.p
        a = pairs[:, :3]
        b = pairs[:, 3:]
        amon = self.table.monomials(a)
        bmon = self.table.monomials(b)
        # dL/dx_i depends only on b, dL/dy_j only on a.
        jl = np.concatenate([b @ self.amat.T % p, a @ self.amat % p], axis=1)
        qxc = bmon @ self.bmat.T % p  # x-quadratic coefficients at b
        qyc = amon @ self.bmat % p    # y-quadratic coefficients at a
        jq = np.empty_like(jl)
        for i in range(3):
            acc = np.zeros(len(a), dtype=np.int64)
            for j in range(3):
                c = qxc[:, PAIR_INDEX[(min(i, j), max(i, j))]]
                mult = 2 if i == j else 1
                acc = (acc + mult * c * a[:, j]) % p
            jq[:, i] = acc
        for k in range(3):
            acc = np.zeros(len(a), dtype=np.int64)
            for l in range(3):
                c = qyc[:, PAIR_INDEX[(min(k, l), max(k, l))]]
                mult = 2 if k == l else 1
                acc = (acc + mult * c * b[:, l]) % p
            jq[:, 3 + k] = acc

        jl_nonzero = jl != 0
        has_pivot = np.any(jl_nonzero, axis=1)
        pivot = np.argmax(jl_nonzero, axis=1)
        rows = np.arange(len(a))
        scale = np.where(has_pivot, jq[rows, pivot], 0)
        factor = self.table.inv[np.where(has_pivot, jl[rows, pivot], 1)]
        resid = (jq - (scale * factor % p)[:, None] * jl) % p
        rank_lt_2 = ~has_pivot | np.all(resid == 0, axis=1)
        # If jl == 0 but jq != 0 the rank is 1, still singular for a surface.
        return rank_lt_2

    # -- Vieta fiber swap ------------------------------------------------------

    def cor1_swap(self, side: str, bases: np.ndarray, moving: np.ndarray) -> np.ndarray:
        """Partner of each moving point in the 2-point fiber over its base.

        side 'x': bases in P^2_x, moving points are the y coordinates.
        side 'y': bases in P^2_y, moving points are the x coordinates.
        Bases must be non-degenerate; double roots return the input point.
        """
        p = self.p
        tbl = self.table
        lc = self.line_coeffs(side, bases)
        qc = self.quad_coeffs(side, tbl.monomials(bases))
        G, H = gh_eval(lc, qc, p)

        usable = np.stack([lc[:, m] != 0 for (_, _, m) in SWAP_PAIRS], axis=1)
        if not np.all(np.any(usable, axis=1)):
            raise ValueError("degenerate base reached the vectorized swap")
        choice = np.argmax(usable, axis=1)
        k = np.array([kp for (kp, _, _) in SWAP_PAIRS])[choice]
        l = np.array([lp for (_, lp, _) in SWAP_PAIRS])[choice]
        m = np.array([mp for (_, _, mp) in SWAP_PAIRS])[choice]

        rows = np.arange(len(bases))
        A = G[rows, k]
        B = H[rows, choice]
        C = G[rows, l]
        alpha = moving[rows, k]
        beta = moving[rows, l]
        gamma, delta = binary_other_root(A, B, C, alpha, beta, p)
        lk = lc[rows, k]
        ll = lc[rows, l]
        lm = lc[rows, m]
        third = (-(lk * gamma + ll * delta) % p) * tbl.inv[lm] % p
        out = np.zeros_like(moving)
        out[rows, k] = gamma
        out[rows, l] = delta
        out[rows, m] = third
        return tbl.canonicalize(out)
