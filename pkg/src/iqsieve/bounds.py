"""Right-hand sides of the sieve inequalities and the moduli-set counting functions.

The closed-form bounds take (Q, N, epsilon, ...) straight to a number.  The
counting side works on a multiset S of nonzero ring elements inside the disk
of radius sqrt(Q): S_t is the exact dilation filter {q : t*q in S}, and
A_t(u, k, l) the sup over constrained centers of how many congruent points
of S_t one radius-u disk can cover.  That sup is exact: a maximising disk
can be translated until two points lie on its boundary, it is centered at a
point, or it is pinned against the center-constraint circle, giving a finite
candidate set of centers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as Rat

from .qfield import FieldParams, OKElt, enumerate_by_norm, exact_div
from .residue import coprime_residues, divisors, is_coprime, residue_system
from .sieve import FractionFamily

_GEOM_EPS = 1e-9


@dataclass(frozen=True)
class ModuliSet:
    """Multiset of nonzero moduli inside the closed disk of radius sqrt(Q)."""

    field: FieldParams
    Q: int
    elements: tuple[OKElt, ...]

    def __post_init__(self):
        if self.Q < 1:
            raise ValueError(f"Q must be >= 1, got {self.Q}")
        for s in self.elements:
            if s.is_zero():
                raise ValueError("moduli set contains 0")
            if s.norm() > self.Q:
                raise ValueError(f"modulus {s!r} has norm {s.norm()} > Q = {self.Q}")


@dataclass(frozen=True)
class BoundParams:
    """Parameters of one closed-form right-hand side."""

    theorem: str  # huxley | power | square | prime
    Q: int
    N: int
    k: int = 1
    epsilon: float = 0.0
    delta: float = 0.5

    @property
    def kappa(self) -> int:
        return 2 ** (self.k - 1)


def rhs_bound(p: BoundParams) -> float:
    """Evaluate the stated bound, (QN)^epsilon factors included where stated."""
    Q, N, eps = p.Q, p.N, p.epsilon
    if Q < 1 or N < 1:
        raise ValueError(f"Q and N must be >= 1, got Q={Q}, N={N}")
    if p.theorem == "huxley":
        return float(Q * Q + N)
    if p.theorem == "power":
        if p.k < 1:
            raise ValueError(f"power bound needs k >= 1, got {p.k}")
        kap = p.kappa
        main = Q ** (p.k + 1) + N * Q ** (1 - 1 / kap) + N ** (1 - 1 / kap) * Q ** (1 + p.k / kap)
        return (Q * N) ** eps * main
    if p.theorem == "square":
        return (Q * N) ** eps * (Q ** 3 + Q * Q * math.sqrt(N) + N)
    if p.theorem == "prime":
        if not (0.0 < p.delta < 1.0):
            raise ValueError(f"prime bound needs 0 < delta < 1, got {p.delta}")
        if Q < 16:
            raise ValueError(f"prime bound needs Q >= 16, got {Q}")
        ideal_n = Q ** (1.0 + p.delta) / 16.0
        if abs(N - ideal_n) > 1.0:
            raise ValueError(f"prime bound needs N = Q^(1+delta)/16 = {ideal_n:.3f}, got N={N}")
        return Q * Q * math.log(math.log(Q)) / ((1.0 - p.delta) * math.log(Q))
    raise ValueError(f"unknown theorem {p.theorem!r}")


def make_S_t(S: ModuliSet, t: OKElt) -> list[OKElt]:
    """Exact dilation filter {q : t*q in S}, multiset multiplicity preserved."""
    if t.is_zero():
        raise ValueError("t must be nonzero")
    out = []
    for s in S.elements:
        q = exact_div(s, t)
        if q is not None:
            out.append(q)
    return out


def _circle_circle(c0: complex, r0: float, c1: complex, r1: float) -> list[complex]:
    """Intersection points of two circles, [] if disjoint or nested."""
    d = abs(c1 - c0)
    if d == 0.0:
        return []
    if d > r0 + r1 + _GEOM_EPS or d < abs(r0 - r1) - _GEOM_EPS:
        return []
    a = (d * d + r0 * r0 - r1 * r1) / (2.0 * d)
    h2 = r0 * r0 - a * a
    h = math.sqrt(max(h2, 0.0))
    dirv = (c1 - c0) / d
    base = c0 + a * dirv
    off = 1j * dirv * h
    return [base + off, base - off]


def _max_cover_count(points: list[complex], u: float, center_cap: float) -> int:
    """Max points (with multiplicity) in one closed radius-u disk, center in |y| <= cap.

    Candidate centers: the origin, each point (projected to the cap circle if
    outside), the two centers of radius-u circles through each close enough
    pair, and the intersections of each point's radius-u circle with the cap
    circle.
    """
    if not points:
        return 0
    cands = [0j]
    for p in points:
        ap = abs(p)
        cands.append(p if ap <= center_cap else p * (center_cap / ap))
        cands.extend(_circle_circle(0j, center_cap, p, u))
    n = len(points)
    for i in range(n):
        for j in range(i + 1, n):
            for c in _circle_circle(points[i], u, points[j], u):
                ac = abs(c)
                if ac <= center_cap + _GEOM_EPS:
                    cands.append(c if ac <= center_cap else c * (center_cap / ac))
    tol = u + _GEOM_EPS * max(1.0, u)
    best = 0
    for c in cands:
        cnt = sum(1 for p in points if abs(p - c) <= tol)
        if cnt > best:
            best = cnt
    return best


def count_A_t(S_t: list[OKElt], Q: int, t: OKElt, u: float,
              kmod: OKElt, l: OKElt) -> int:
    """Exact sup over centers |y| <= sqrt(Q)/|t| of #{q in S_t : q in B(y,u), q = l mod kmod}."""
    if t.is_zero():
        raise ValueError("t must be nonzero")
    if kmod.is_zero():
        raise ValueError("congruence modulus must be nonzero")
    field = kmod.field
    if not is_coprime(field, kmod, l):
        raise ValueError("congruence class l must be coprime to the modulus")
    cap = math.sqrt(Q) / abs(complex(t))
    if not (-_GEOM_EPS <= u <= cap * (1.0 + _GEOM_EPS) + _GEOM_EPS):
        raise ValueError(f"radius u={u} outside [0, sqrt(Q)/|t|={cap}]")
    pts = [complex(q) for q in S_t if exact_div(q - l, kmod) is not None]
    return _max_cover_count(pts, max(u, 0.0), cap)


def theorem2_rhs(S: ModuliSet, Q: int, N: int, z_samples: int = 8) -> float:
    """The nested counting bound N*(1 + sup_r sup_z sup_h sum_t sum_m A_t(...)).

    r runs over 1 <= |r| <= N^(1/4); the sup over the |z| annulus
    [N^(-1/2), sqrt(|D_K|)/(|r| N^(1/4))] is replaced by z_samples
    log-spaced radii (the summand depends on z only through |z|); h runs
    over residues coprime to r; t over divisors of r; m over
    0 < |m| <= 3|rz|sqrt(Q)/|t| with (m, r/t) = 1.  A_t is grouped by the
    congruence class of h*m mod r/t, so each class is counted once.
    """
    field = S.field
    if not field.class_number_one:
        raise ValueError(f"divisor enumeration requires class number one, got d={field.d}")
    if N < 16:
        raise ValueError(f"N >= 16 required so the |r| <= N^(1/4) range is nonempty, got {N}")
    if z_samples < 1:
        raise ValueError(f"z_samples must be >= 1, got {z_samples}")
    sqrt_disc = math.sqrt(-field.discriminant)
    sup_total = 0.0
    for r in enumerate_by_norm(field, math.isqrt(N)):
        r_abs = abs(complex(r))
        z_lo = 1.0 / math.sqrt(N)
        z_hi = sqrt_disc / (r_abs * N ** 0.25)
        if z_hi < z_lo:
            continue
        zs = [z_lo * (z_hi / z_lo) ** (i / (z_samples - 1)) for i in range(z_samples)] \
            if z_samples > 1 else [z_hi]
        rs_r = residue_system(field, r)
        hs = [h for h in rs_r.reps if is_coprime(field, h, r)]
        tdata = []
        for t in divisors(field, r):
            S_t = make_S_t(S, t)
            if not S_t:
                continue
            k_elt = exact_div(r, t)
            rs_k = residue_system(field, k_elt)
            classes = [c for c in rs_k.reps if is_coprime(field, c, k_elt)]
            cls_index = {c: i for i, c in enumerate(classes)}
            tdata.append((t, S_t, k_elt, rs_k, classes, cls_index))
        for z in zs:
            per_t = []
            for t, S_t, k_elt, rs_k, classes, cls_index in tdata:
                t_abs = abs(complex(t))
                u = math.sqrt(Q) / (math.sqrt(N) * z * t_abs)
                m_bound = 3.0 * r_abs * z * math.sqrt(Q) / t_abs
                m_norm_cap = int(m_bound * m_bound * (1.0 + 1e-12))
                m_counts = [0] * len(classes)
                for m in enumerate_by_norm(field, m_norm_cap):
                    if is_coprime(field, m, k_elt):
                        m_counts[cls_index[rs_k.reduce(m)]] += 1
                a_table = [count_A_t(S_t, Q, t, u, k_elt, c) for c in classes]
                per_t.append((rs_k, classes, cls_index, m_counts, a_table))
            for h in hs:
                total = 0
                for rs_k, classes, cls_index, m_counts, a_table in per_t:
                    for ci, c in enumerate(classes):
                        if m_counts[ci]:
                            total += m_counts[ci] * a_table[cls_index[rs_k.reduce(h * c)]]
                sup_total = max(sup_total, float(total))
    return N * (1.0 + sup_total)


def _circumcenter(p0: complex, p1: complex, p2: complex) -> complex | None:
    ax, ay = p0.real, p0.imag
    bx, by = p1.real, p1.imag
    cx, cy = p2.real, p2.imag
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if abs(d) < 1e-14:
        return None
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
          + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
          + (cx * cx + cy * cy) * (bx - ax)) / d
    return complex(ux, uy)


def verify_X(S: ModuliSet, Q: int, N: int) -> float:
    """Minimal X with A_t(u,k,l) <= (1 + (|S_t|/N(k))/(Q/|t|^2) u^2) X over the stated ranges.

    Ranges: |t| <= N^(1/4), |k| <= N^(1/4)/|t|, (k,l) = 1 and
    |k| sqrt(Q)/(sqrt(|D_K|) N^(1/4)) <= u <= sqrt(Q)/|t|.  Since A_t is a
    right-continuous step function of u and the denominator grows with u,
    the sup over the u-continuum is attained at the lower endpoint or at a
    radius where A_t jumps; those critical radii are enumerated from the
    point geometry (half pairwise distances and point-to-candidate-center
    distances, candidate centers being points, pair midpoints, triple
    circumcenters, the origin and cap-circle projections).
    """
    field = S.field
    if not field.class_number_one:
        raise ValueError(f"divisor enumeration requires class number one, got d={field.d}")
    if N < 16:
        raise ValueError(f"N >= 16 required, got {N}")
    sqrt_disc = math.sqrt(-field.discriminant)
    root4N = N ** 0.25
    best = 0.0
    for t in enumerate_by_norm(field, math.isqrt(N)):
        S_t = make_S_t(S, t)
        if not S_t:
            continue
        t_abs = abs(complex(t))
        st_size = len(S_t)
        u_hi = math.sqrt(Q) / t_abs
        k_cap = math.isqrt(N) // t.norm()
        for kmod in enumerate_by_norm(field, k_cap):
            u_lo = abs(complex(kmod)) * math.sqrt(Q) / (sqrt_disc * root4N)
            if u_lo > u_hi * (1.0 + 1e-12):
                continue
            u_lo = min(u_lo, u_hi)
            nk = kmod.norm()
            denom_scale = (st_size / nk) * (t.norm() / Q)
            for l in coprime_residues(field, kmod):
                pts = [complex(q) for q in S_t if exact_div(q - l, kmod) is not None]
                if not pts:
                    continue
                radii = {u_lo, u_hi}
                centers = list(pts) + [0j]
                npts = len(pts)
                for i in range(npts):
                    api = abs(pts[i])
                    if api > 0:
                        centers.append(pts[i] * (u_hi / api))
                    for j in range(i + 1, npts):
                        radii.add(abs(pts[i] - pts[j]) / 2.0)
                        centers.append((pts[i] + pts[j]) / 2.0)
                        if npts <= 40:
                            for k2 in range(j + 1, npts):
                                cc = _circumcenter(pts[i], pts[j], pts[k2])
                                if cc is not None:
                                    centers.append(cc)
                for c in centers:
                    for p in pts:
                        radii.add(abs(p - c))
                for u in sorted(radii):
                    if u < u_lo - 1e-12 or u > u_hi + 1e-12:
                        continue
                    u_eval = min(max(u, u_lo), u_hi)
                    a_val = count_A_t(S_t, Q, t, u_eval, kmod, l)
                    ratio = a_val / (1.0 + denom_scale * u_eval * u_eval)
                    if ratio > best:
                        best = ratio
    return best


def _leq_with_sqrt(s: Rat, b: Rat, dd: int) -> bool:
    """Exact test of s + b*sqrt(dd) <= 0 for rationals s, b and integer dd > 0."""
    if s <= 0 and b <= 0:
        return True
    if s >= 0 and b >= 0:
        return s == 0 and b == 0
    if b > 0:  # s < 0 < b: need b*sqrt(dd) <= -s
        return b * b * dd <= s * s
    # b < 0 < s: need s <= -b*sqrt(dd)
    return s * s <= b * b * dd


def count_fractions_near(field: FieldParams, family: FractionFamily,
                         alpha: complex, radius: float) -> int:
    """Count family fractions r/m with |r/m - alpha| <= radius, exactly.

    The fraction value r/m = x + y*omega has rational coordinates; the
    squared distance to alpha splits as A + B*sqrt(|d|) with A, B rational
    (floats are exact rationals), so every comparison is decided exactly.
    """
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    ax = Rat(float(alpha.real))
    ay = Rat(float(alpha.imag))
    r2 = Rat(float(radius)) ** 2
    re_om = Rat(field.omega_trace, 2)
    im_c = Rat(1, 1) if field.omega_case.value == "sqrt_d" else Rat(1, 2)
    dd = -field.d
    count = 0
    for fr in family.fractions:
        w = fr.residue * fr.modulus.conj()
        x = Rat(w.a, fr.modulus_norm)
        y = Rat(w.b, fr.modulus_norm)
        # |v - alpha|^2 = (x + y*Re(omega) - ax)^2 + (y*im_c*sqrt(dd) - ay)^2
        re_diff = x + y * re_om - ax
        a_part = re_diff * re_diff + y * y * im_c * im_c * dd + ay * ay
        b_part = -2 * y * im_c * ay
        if _leq_with_sqrt(a_part - r2, b_part, dd):
            count += 1
    return count
