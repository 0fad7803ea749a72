"""Fraction families, the sieve quadratic form, and matrix-free spectral sweeps.

A family is the ordered list of pairs (residue r mod m, modulus m) indexing
the outer sum of the sieve form T = sum_fr |sum_n a_n e(phase(n r / m))|^2.
The sharp sieve constant is the top eigenvalue of the Gram action
v -> A*(A v), where A has one unit-modulus character row per fraction; it is
computed by seeded power iteration without ever forming A*A.  Phases are
exact integers mod N(m); conversion to floating point happens once per row.

The generic torus counting quantities (the max-overlap count F and the exact
disk-covering count K0) live here too, since they certify the same spectral
bounds for arbitrary point sets in the unit square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as Rat

import numpy as np

from .character import phase_coeffs
from .qfield import FieldParams, OKElt, canonical_key, enumerate_by_norm
from .residue import coprime_residues

FAMILY_KINDS = ("all", "power", "square", "prime", "custom")

CSV_HEADER = "d,family,k,Q,N,F,M,lambda_max,rhs,ratio,iterations,seed"


@dataclass(frozen=True)
class Fraction:
    """One sieve node: reduced residue mod the (already exponentiated) modulus."""

    modulus: OKElt
    residue: OKElt
    modulus_norm: int


@dataclass(frozen=True)
class FractionFamily:
    field: FieldParams
    kind: str
    k: int
    Q: int
    fractions: tuple[Fraction, ...]
    dyadic: bool = False

    @property
    def F(self) -> int:
        return len(self.fractions)


class CoeffSeq:
    """Complex coefficients indexed by the canonical elements of norm <= N."""

    __slots__ = ("field", "N", "elements", "values")

    def __init__(self, field: FieldParams, N: int, values):
        self.field = field
        self.N = int(N)
        self.elements = enumerate_by_norm(field, self.N, include_zero=True)
        vals = np.asarray(values, dtype=np.complex128)
        if vals.shape != (len(self.elements),):
            raise ValueError(f"expected {len(self.elements)} coefficients, got shape {vals.shape}")
        self.values = vals

    @classmethod
    def delta(cls, field: FieldParams, N: int, at: OKElt | None = None) -> "CoeffSeq":
        """Mass 1 at a single element (default: n = 0)."""
        elements = enumerate_by_norm(field, N, include_zero=True)
        target = at if at is not None else field.zero()
        vals = np.zeros(len(elements), dtype=np.complex128)
        vals[elements.index(target)] = 1.0
        return cls(field, N, vals)

    @classmethod
    def from_mapping(cls, field: FieldParams, N: int, mapping) -> "CoeffSeq":
        elements = enumerate_by_norm(field, N, include_zero=True)
        vals = np.array([complex(mapping.get(e, 0.0)) for e in elements])
        return cls(field, N, vals)

    @classmethod
    def random_unit(cls, field: FieldParams, N: int, seed: int = 0) -> "CoeffSeq":
        """Seeded random coefficients with unit l2 mass."""
        elements = enumerate_by_norm(field, N, include_zero=True)
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(len(elements)) + 1j * rng.standard_normal(len(elements))
        return cls(field, N, v / np.linalg.norm(v))

    def as_dict(self) -> dict[OKElt, complex]:
        return dict(zip(self.elements, map(complex, self.values)))

    def l2_norm_sq(self) -> float:
        return float(np.vdot(self.values, self.values).real)

    def __len__(self):
        return len(self.elements)


@dataclass
class SieveReport:
    """One experiment row of a spectral sweep."""

    d: int
    family: str
    k: int
    Q: int
    N: int
    F: int
    M: int
    lambda_max: float
    rhs: float
    ratio: float
    iterations: int
    seed: int

    def csv_row(self) -> str:
        return ",".join([
            str(self.d), self.family, str(self.k), str(self.Q), str(self.N),
            str(self.F), str(self.M),
            f"{self.lambda_max:.12g}", f"{self.rhs:.12g}", f"{self.ratio:.12g}",
            str(self.iterations), str(self.seed),
        ])


def build_fractions(field: FieldParams, kind: str, Q: int, k: int = 1,
                    custom: list[OKElt] | None = None, dyadic: bool = False) -> FractionFamily:
    """Enumerate the fraction family of one moduli set.

    kind 'all' uses every nonzero modulus of norm <= Q (k forced to 1),
    'power' raises each base to the k-th power, 'square' is power with k = 2,
    'prime' runs over prime elements (class number one only), and 'custom'
    takes the given multiset of moduli as-is (duplicates give duplicate
    rows).  The dyadic flag restricts base norms to Q/2 < N(q) <= Q.
    """
    if kind not in FAMILY_KINDS:
        raise ValueError(f"unknown family kind {kind!r}; expected one of {FAMILY_KINDS}")
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if kind == "prime" and not field.class_number_one:
        raise ValueError(f"prime moduli require a class-number-one field, got d={field.d}")

    if kind == "custom":
        if custom is None:
            raise ValueError("custom family needs the moduli multiset")
        bases = list(custom)
        for s in bases:
            if s.is_zero() or s.norm() > Q:
                raise ValueError(f"custom modulus {s!r} violates 0 < norm <= Q={Q}")
        eff_k = 1
    elif kind == "prime":
        from .residue import primes_up_to_norm
        bases = list(primes_up_to_norm(field, Q))
        eff_k = 1
    else:
        bases = list(enumerate_by_norm(field, Q))
        eff_k = {"all": 1, "square": 2, "power": k}[kind]

    if dyadic:
        bases = [q for q in bases if 2 * q.norm() > Q]
    bases.sort(key=canonical_key)

    fractions = []
    for q in bases:
        modulus = q ** eff_k
        mn = modulus.norm()
        for r in coprime_residues(field, modulus):
            fractions.append(Fraction(modulus=modulus, residue=r, modulus_norm=mn))
    fractions.sort(key=lambda fr: (fr.modulus_norm, fr.modulus.a, fr.modulus.b,
                                   fr.residue.a, fr.residue.b))
    return FractionFamily(field=field, kind=kind, k=eff_k, Q=Q,
                          fractions=tuple(fractions), dyadic=dyadic)


def embed_fraction_exact(field: FieldParams, fr: Fraction) -> tuple[Rat, Rat]:
    """Exact torus point of r/m in [0,1)^2.

    Writing r/m = x + y*omega, the embedding is (y, x + y*Tr(omega)) mod 1:
    the first coordinate is (r/m - conj)/sqrtD and the second
    (r/m*omega - conj)/sqrtD.
    """
    w = fr.residue * fr.modulus.conj()
    nm = fr.modulus_norm
    x = Rat(w.a, nm)
    y = Rat(w.b, nm)
    return (y % 1, (x + y * field.omega_trace) % 1)


def embed_fraction(field: FieldParams, fr: Fraction) -> tuple[float, float]:
    p, q = embed_fraction_exact(field, fr)
    return float(p), float(q)


def _phase_arrays(family: FractionFamily):
    """Per-fraction integer coefficients (c1, c2, nm) of the linear phase."""
    field = family.field
    c1, c2, nm = [], [], []
    for fr in family.fractions:
        a, b, n = phase_coeffs(field, fr.residue, fr.modulus)
        c1.append(a)
        c2.append(b)
        nm.append(n)
    return c1, c2, nm


class GramOperator:
    """Matrix-free Hermitian PSD action v -> A*(A v) of one family at level N.

    Rows of A are the character values e((c1*n.a + c2*n.b)/nm) over the
    canonical coefficient index; the row data is stored as exact integers and
    expanded to floating point in blocks, so the full A*A is never formed.
    Small families keep the expanded A cached for speed.
    """

    _MATERIALIZE_LIMIT = 5_000_000  # entries of A kept in memory at most

    def __init__(self, family: FractionFamily, N: int):
        if N < 0:
            raise ValueError(f"coefficient norm cutoff must be >= 0, got {N}")
        self.family = family
        self.N = int(N)
        self.elements = enumerate_by_norm(family.field, self.N, include_zero=True)
        self.M = len(self.elements)
        self.F = len(family.fractions)
        c1, c2, nm = _phase_arrays(family)
        na = [e.a for e in self.elements]
        nb = [e.b for e in self.elements]
        # int64 is ample at desk scale; fall back to exact object arithmetic otherwise
        cmax = max((max(map(abs, c1), default=0), max(map(abs, c2), default=0)))
        emax = max((max(map(abs, na), default=0), max(map(abs, nb), default=0)))
        exact_ok = 2 * cmax * emax < 2 ** 62
        dtype = np.int64 if exact_ok else object
        self._c1 = np.array(c1, dtype=dtype)
        self._c2 = np.array(c2, dtype=dtype)
        self._nm = np.array(nm, dtype=dtype)
        self._na = np.array(na, dtype=dtype)
        self._nb = np.array(nb, dtype=dtype)
        self._A = self._rows(np.arange(self.F)) if self.F * self.M <= self._MATERIALIZE_LIMIT else None

    def _rows(self, idx: np.ndarray) -> np.ndarray:
        ph = (self._c1[idx, None] * self._na[None, :]
              + self._c2[idx, None] * self._nb[None, :]) % self._nm[idx, None]
        frac = (ph / self._nm[idx, None]).astype(np.float64)
        return np.exp((2j * np.pi) * frac)

    def _row_blocks(self):
        if self._A is not None:
            yield self._A
            return
        step = max(1, self._MATERIALIZE_LIMIT // max(1, self.M))
        for lo in range(0, self.F, step):
            yield self._rows(np.arange(lo, min(lo + step, self.F)))

    def forward(self, v: np.ndarray) -> np.ndarray:
        """A v: one inner character sum per fraction."""
        v = np.asarray(v, dtype=np.complex128)
        if v.shape != (self.M,):
            raise ValueError(f"expected vector of length {self.M}, got shape {v.shape}")
        parts = [blk @ v for blk in self._row_blocks()]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.complex128)

    def adjoint(self, w: np.ndarray) -> np.ndarray:
        w = np.asarray(w, dtype=np.complex128)
        if w.shape != (self.F,):
            raise ValueError(f"expected vector of length {self.F}, got shape {w.shape}")
        out = np.zeros(self.M, dtype=np.complex128)
        lo = 0
        for blk in self._row_blocks():
            hi = lo + blk.shape[0]
            out += blk.conj().T @ w[lo:hi]
            lo = hi
        return out

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.adjoint(self.forward(v))

    def dense_matrix(self) -> np.ndarray:
        """The full character matrix A (rows fractions, cols coefficients)."""
        return np.vstack(list(self._row_blocks())) if self.F else np.zeros((0, self.M), dtype=np.complex128)


def quadratic_form(family: FractionFamily, coeffs: CoeffSeq) -> float:
    """T = sum over fractions of |sum_n a_n e(phase)|^2, exact phases."""
    op = GramOperator(family, coeffs.N)
    w = op.forward(coeffs.values)
    return float(np.vdot(w, w).real)


def apply_gram(family: FractionFamily, N: int, v: np.ndarray) -> np.ndarray:
    """One Gram action A*(A v) for a coefficient vector in canonical order."""
    return GramOperator(family, N).apply(v)


@dataclass(frozen=True)
class LambdaResult:
    value: float
    iterations: int
    converged: bool


def power_lambda_max(matvec, dim: int, tol: float = 1e-9, seed: int = 0,
                     max_iter: int = 20000, restarts: int = 2) -> LambdaResult:
    """Top eigenvalue of a Hermitian PSD action by seeded power iteration.

    Runs 1 + restarts independent seeded starts and returns the max Rayleigh
    quotient seen; stops each run when the relative eigenvalue change drops
    below tol.  The result is a lower bound on the true top eigenvalue,
    within tol relatively at convergence.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if dim == 0:
        return LambdaResult(0.0, 0, True)
    best = 0.0
    total_iters = 0
    all_converged = True
    for run in range(1 + restarts):
        rng = np.random.default_rng((seed, run))
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        v /= np.linalg.norm(v)
        lam_prev = None
        converged = False
        lam = 0.0
        for _ in range(max_iter):
            total_iters += 1
            w = matvec(v)
            lam = float(np.vdot(v, w).real)
            nw = float(np.linalg.norm(w))
            if nw == 0.0:
                lam = 0.0
                converged = True
                break
            v = w / nw
            if lam_prev is not None and abs(lam - lam_prev) <= tol * max(abs(lam), 1e-300):
                converged = True
                break
            lam_prev = lam
        best = max(best, lam)
        all_converged = all_converged and converged
    return LambdaResult(best, total_iters, all_converged)


def lambda_max(family: FractionFamily, N: int, tol: float = 1e-9, seed: int = 0,
               max_iter: int = 20000) -> LambdaResult:
    """Sharp sieve constant of the family at coefficient level N."""
    op = GramOperator(family, N)
    return power_lambda_max(op.apply, op.M, tol=tol, seed=seed, max_iter=max_iter)


# ---------------------------------------------------------------------------
# Torus point-set counts certifying the generic large-sieve bounds

def _toroidal_dist(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Euclidean distance on R^2/Z^2 between broadcastable point arrays."""
    d = np.abs(a - b)
    d = np.minimum(d, 1.0 - d)
    return np.hypot(d[..., 0], d[..., 1])


def torus_spacing_count(points, n_level: int) -> int:
    """Max over i of #{j : toroidal dist(x_j, x_i) <= sqrt(2)/sqrt(n_level)}."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64)) % 1.0
    if pts.size == 0:
        raise ValueError("empty point list")
    if n_level < 1:
        raise ValueError(f"n_level must be >= 1, got {n_level}")
    thr = math.sqrt(2.0) / math.sqrt(n_level) + 1e-12
    dist = _toroidal_dist(pts[:, None, :], pts[None, :, :])
    return int((dist <= thr).sum(axis=1).max())


def torus_k0(points, delta: float) -> int:
    """Exact sup over centers of the number of points within toroidal distance sqrt(delta).

    A maximising disk can be translated until two covered points lie on its
    boundary or it is centered at a point, so the finite candidate set
    {points} + {centers of radius-u circles through point pairs} attains the
    sup.  O(n^3).
    """
    if not (0.0 < delta <= 0.5):
        raise ValueError(f"delta must be in (0, 1/2], got {delta}")
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64)) % 1.0
    if pts.size == 0:
        raise ValueError("empty point list")
    u = math.sqrt(delta)
    cands = [pts]
    n = len(pts)
    shifts = [np.array([sx, sy]) for sx in (-1.0, 0.0, 1.0) for sy in (-1.0, 0.0, 1.0)]
    for i in range(n):
        for j in range(i + 1, n):
            for sh in shifts:
                pj = pts[j] + sh
                dvec = pj - pts[i]
                dist = math.hypot(dvec[0], dvec[1])
                if dist == 0.0 or dist > 2.0 * u:
                    continue
                mid = (pts[i] + pj) / 2.0
                h = math.sqrt(max(u * u - dist * dist / 4.0, 0.0))
                perp = np.array([-dvec[1], dvec[0]]) / dist
                cands.append((mid + h * perp)[None, :])
                cands.append((mid - h * perp)[None, :])
    centers = np.vstack(cands) % 1.0
    dist = _toroidal_dist(centers[:, None, :], pts[None, :, :])
    return int((dist <= u + 1e-12).sum(axis=1).max())


def torus_gram_matrix(points, n_level: int) -> np.ndarray:
    """Rows e(n . x_i) over integer frequencies ||n||_2 <= sqrt(n_level)."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if n_level < 1:
        raise ValueError(f"n_level must be >= 1, got {n_level}")
    rmax = math.isqrt(n_level)
    freqs = [(n1, n2) for n1 in range(-rmax, rmax + 1) for n2 in range(-rmax, rmax + 1)
             if n1 * n1 + n2 * n2 <= n_level]
    fq = np.array(freqs, dtype=np.float64)
    return np.exp(2j * np.pi * (pts @ fq.T))


def torus_lambda_max(points, n_level: int, tol: float = 1e-9, seed: int = 0,
                     max_iter: int = 20000) -> LambdaResult:
    """Top eigenvalue of the torus character Gram for a point set."""
    A = torus_gram_matrix(points, n_level)

    def matvec(v):
        return A.conj().T @ (A @ v)

    return power_lambda_max(matvec, A.shape[1], tol=tol, seed=seed, max_iter=max_iter)
