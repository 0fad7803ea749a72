"""Residue systems, coprimality, totients, divisors and prime elements.

Congruence arithmetic mod m works on the sublattice m*O_K of Z^2 through its
Hermite normal form, so reduction is O(1) and the representative box is a
canonical, stable enumeration.  Coprimality is the ideal condition
(x, m) = O_K, decided by a 4-generator lattice HNF; it needs no Euclidean
algorithm and is valid in every imaginary quadratic field.
"""

from __future__ import annotations

import math

from .qfield import FieldParams, OKElt, canonical_key, enumerate_by_norm, exact_div


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _hnf2(gens: list[tuple[int, int]]) -> tuple[int, int, int]:
    """Lower-triangular HNF (h11, h21, h22) of the lattice spanned by gens.

    The lattice is {x*(h11, h21) + y*(0, h22)} with h11, h22 > 0 and
    0 <= h21 < h22.  Raises for rank-deficient input.
    """
    col = [g for g in gens if g != (0, 0)]
    lead = None
    rest = []
    for v in col:
        if v[0] == 0:
            rest.append(v)
            continue
        if lead is None:
            lead = v
            continue
        g, s, t = _egcd(lead[0], v[0])
        combo = (g, s * lead[1] + t * v[1])
        rest.append((0, (v[0] // g) * lead[1] - (lead[0] // g) * v[1]))
        lead = combo
    if lead is None:
        raise ValueError("lattice has rank < 2 (no generator with nonzero first coordinate)")
    h22 = 0
    for _, y in rest:
        h22 = math.gcd(h22, y)
    if h22 == 0:
        raise ValueError("lattice has rank < 2 (second coordinate degenerate)")
    h11 = abs(lead[0])
    h21 = lead[1] if lead[0] > 0 else -lead[1]
    h21 %= h22
    return h11, h21, h22


def _modulus_lattice(field: FieldParams, m: OKElt) -> list[tuple[int, int]]:
    mo = m * field.omega()
    return [(m.a, m.b), (mo.a, mo.b)]


class ResidueSystem:
    """Complete residue system mod m, backed by the HNF of m*O_K."""

    __slots__ = ("modulus", "reps", "hnf", "_h")

    def __init__(self, field: FieldParams, m: OKElt):
        if m.is_zero():
            raise ValueError("residue system modulus must be nonzero")
        h11, h21, h22 = _hnf2(_modulus_lattice(field, m))
        assert h11 * h22 == m.norm()
        self.modulus = m
        self._h = (h11, h21, h22)
        self.hnf = ((h11, 0), (h21, h22))
        self.reps = tuple(OKElt(field, x, y)
                          for x in range(h11) for y in range(h22))

    def reduce(self, x: OKElt) -> OKElt:
        """The unique box representative congruent to x mod the modulus."""
        h11, h21, h22 = self._h
        k = x.a // h11
        a = x.a - k * h11
        b = x.b - k * h21
        b -= (b // h22) * h22
        return OKElt(self.modulus.field, a, b)

    def __len__(self):
        return len(self.reps)

    def __repr__(self):
        return f"ResidueSystem(mod {self.modulus!r}, {len(self.reps)} reps)"


def residue_system(field: FieldParams, m: OKElt) -> ResidueSystem:
    return ResidueSystem(field, m)


def reduce(x: OKElt, rs: ResidueSystem) -> OKElt:
    return rs.reduce(x)


def is_coprime(field: FieldParams, x: OKElt, m: OKElt) -> bool:
    """Ideal coprimality (x, m) = O_K via the 4-generator lattice determinant."""
    if x.is_zero() and m.is_zero():
        raise ValueError("is_coprime(0, 0) is undefined")
    gens = []
    for e in (x, m):
        if not e.is_zero():
            gens.extend(_modulus_lattice(field, e))
    h11, h21, h22 = _hnf2(gens)
    return h11 * h22 == 1


def totient(field: FieldParams, m: OKElt) -> int:
    """Number of residues mod m coprime to m."""
    if m.is_zero():
        raise ValueError("totient of the zero modulus")
    rs = residue_system(field, m)
    return sum(1 for r in rs.reps if is_coprime(field, r, m))


def coprime_residues(field: FieldParams, m: OKElt) -> tuple[OKElt, ...]:
    """The residues of residue_system(m) coprime to m, in box order."""
    rs = residue_system(field, m)
    return tuple(r for r in rs.reps if is_coprime(field, r, m))


def divisors(field: FieldParams, r: OKElt) -> tuple[OKElt, ...]:
    """All t | r, associates included, sorted canonically.

    Restricted to class-number-one fields, matching the hypotheses of the
    divisor-sum bounds this feeds.
    """
    if not field.class_number_one:
        raise ValueError(f"divisors requires a class-number-one field, got d={field.d}")
    if r.is_zero():
        raise ValueError("divisors of zero")
    nr = r.norm()
    out = [t for t in enumerate_by_norm(field, nr)
           if nr % t.norm() == 0 and exact_div(r, t) is not None]
    return tuple(out)


def _is_rational_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def kronecker_symbol(disc: int, p: int) -> int:
    """(disc/p) for a rational prime p: 1 split, -1 inert, 0 ramified."""
    if p == 2:
        if disc % 2 == 0:
            return 0
        return 1 if disc % 8 in (1, 7) else -1
    a = disc % p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def primes_up_to_norm(field: FieldParams, q_bound: int) -> tuple[OKElt, ...]:
    """All prime elements of norm <= q_bound (associates and conjugates included).

    An element is prime iff its norm is a rational prime, or its norm is p^2
    with p a rational prime inert in K and the element an associate of p.
    Class number one only, so primality of elements matches irreducibility.
    """
    if not field.class_number_one:
        raise ValueError(f"primes_up_to_norm requires a class-number-one field, got d={field.d}")
    out = []
    for x in enumerate_by_norm(field, q_bound):
        n = x.norm()
        if n == 1:
            continue
        if _is_rational_prime(n):
            out.append(x)
            continue
        p = math.isqrt(n)
        if (p * p == n and _is_rational_prime(p)
                and kronecker_symbol(field.discriminant, p) == -1
                and any(u * p == x for u in field.units)):
            out.append(x)
    return tuple(sorted(out, key=canonical_key))
