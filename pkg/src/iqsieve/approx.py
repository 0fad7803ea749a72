"""Constructive Dirichlet approximation of complex numbers by ratios in O_K.

Given z and a cutoff N there is always a pair (p, q) in O_K with
0 < |q| <= N and |z - p/q| <= sqrt(|D_K|)/(|q| N).  The search scans
denominators in canonical order and takes the first certificate; a separate
exhaustive oracle minimises the scaled error |z - p/q|*|q| for small N and
certifies the guarantee independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qfield import FieldParams, OKElt, canonical_key, enumerate_by_norm

_BOUNDARY_SLACK = 1e-12  # float slack on the guarantee at the boundary

_lattice_cache: dict[tuple[int, int], tuple] = {}


def _lattice_arrays(field: FieldParams, norm_bound: int):
    """Canonical nonzero elements of norm <= norm_bound plus numpy views."""
    key = (field.d, norm_bound)
    hit = _lattice_cache.get(key)
    if hit is not None:
        return hit
    elems = enumerate_by_norm(field, norm_bound)
    av = np.array([e.a for e in elems], dtype=np.float64)
    bv = np.array([e.b for e in elems], dtype=np.float64)
    zv = av + bv * field.omega_complex
    entry = (elems, zv)
    _lattice_cache[key] = entry
    return entry


@dataclass(frozen=True)
class Approximation:
    """One certificate: z ~ p/q with |q| <= N and error <= bound."""

    p: OKElt
    q: OKElt
    error: float
    bound: float


def nearest_lattice_point(field: FieldParams, w: complex) -> OKElt:
    """The O_K point nearest to w, ties broken by the canonical order.

    Solves the skewed 2x2 real system for the basis coordinates, then checks
    the 3x3 block of lattice points around the floor (rounding in a
    non-orthogonal basis is not always nearest; the block always is).
    """
    om = field.omega_complex
    y = w.imag / om.imag
    x = w.real - y * om.real
    fa, fb = math.floor(x), math.floor(y)
    best = None
    best_key = None
    for da in (-1, 0, 1):
        for db in (-1, 0, 1):
            cand = OKElt(field, fa + da, fb + db)
            dist = abs(w - complex(cand))
            key = (dist,) + canonical_key(cand)
            if best_key is None or key < best_key:
                best, best_key = cand, key
    return best


def _min_dist2_to_lattice(field: FieldParams, w: np.ndarray) -> np.ndarray:
    """Vectorised squared distance from each w to its nearest lattice point."""
    om = field.omega_complex
    yy = w.imag / om.imag
    xx = w.real - yy * om.real
    fa = np.floor(xx)
    fb = np.floor(yy)
    best = np.full(w.shape, np.inf)
    for da in (-1.0, 0.0, 1.0):
        for db in (-1.0, 0.0, 1.0):
            cand = (fa + da) + (fb + db) * om
            d2 = np.abs(w - cand) ** 2
            np.minimum(best, d2, out=best)
    return best


def dirichlet_approx(field: FieldParams, z: complex, n_cap: int) -> Approximation:
    """First (p, q) in canonical q-order with |z - p/q| <= sqrt(|D_K|)/(|q| n_cap).

    The guarantee |z*q - p| <= sqrt(|D_K|)/n_cap is independent of q, so the
    scan tests every denominator of modulus <= n_cap (norm <= n_cap^2) at
    once and keeps the first hit.
    """
    if n_cap < 1:
        raise ValueError(f"denominator cutoff must be >= 1, got {n_cap}")
    elems, qv = _lattice_arrays(field, n_cap * n_cap)
    sqrt_disc = math.sqrt(-field.discriminant)
    thr = (sqrt_disc / n_cap) * (1.0 + _BOUNDARY_SLACK)
    err2 = _min_dist2_to_lattice(field, complex(z) * qv)
    hits = np.flatnonzero(err2 <= thr * thr)
    if hits.size == 0:
        raise RuntimeError("no Dirichlet certificate found; this contradicts the existence guarantee")
    q = elems[int(hits[0])]
    p = nearest_lattice_point(field, complex(z) * complex(q))
    qabs = abs(complex(q))
    error = abs(complex(z) - complex(p) / complex(q))
    return Approximation(p=p, q=q, error=error, bound=sqrt_disc / (qabs * n_cap))


def best_approx_oracle(field: FieldParams, z: complex, n_cap: int) -> Approximation:
    """Exhaustive minimiser of the scaled error |z - p/q|*|q| over |q| <= n_cap.

    Cost guard n_cap <= 50.  The minimiser certifies the existence guarantee:
    its scaled error never exceeds sqrt(|D_K|)/n_cap.
    """
    if n_cap < 1:
        raise ValueError(f"denominator cutoff must be >= 1, got {n_cap}")
    if n_cap > 50:
        raise ValueError(f"oracle cost guard: n_cap <= 50 required, got {n_cap}")
    elems, qv = _lattice_arrays(field, n_cap * n_cap)
    err2 = _min_dist2_to_lattice(field, complex(z) * qv)
    # |z - p/q|*|q| = |z*q - p|, so the scaled objective is just the distance
    idx = int(np.argmin(err2))
    q = elems[idx]
    p = nearest_lattice_point(field, complex(z) * complex(q))
    qabs = abs(complex(q))
    sqrt_disc = math.sqrt(-field.discriminant)
    error = abs(complex(z) - complex(p) / complex(q))
    return Approximation(p=p, q=q, error=error, bound=sqrt_disc / (qabs * n_cap))
