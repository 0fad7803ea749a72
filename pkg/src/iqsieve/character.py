"""The additive character of K, evaluated through exact rational phases.

For z = x + y*omega in K the character value is e(y): writing sqrtD for the
purely imaginary square root of the discriminant, omega - conj(omega) = sqrtD,
so Tr(z/sqrtD) = (z - conj(z))/sqrtD = y, an exact rational number whenever
z is a ratio of ring elements.  All phase bookkeeping happens in Fraction
arithmetic mod 1; conversion to a floating complex number happens once, at
evaluation time.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction as Rat

from .qfield import FieldParams, OKElt

#: Exact rational phase in [0, 1); the character value is e(phase).
QPhase = Rat


def phase(field: FieldParams, n: OKElt, r: OKElt, m: OKElt) -> Rat:
    """Exact phase of the character at n*r/m, as a rational in [0, 1).

    With w = n*r*conj(m), the fraction n*r/m equals (w.a + w.b*omega)/N(m),
    whose phase is w.b/N(m) reduced mod 1.
    """
    if m.is_zero():
        raise ZeroDivisionError("character phase with zero modulus")
    w = n * r * m.conj()
    return Rat(w.b, m.norm()) % 1


def phase_coeffs(field: FieldParams, r: OKElt, m: OKElt) -> tuple[int, int, int]:
    """Integers (c1, c2, nm) with phase(n, r, m) = (c1*n.a + c2*n.b)/nm mod 1.

    The phase is linear in the coordinates of n; this is the kernel used by
    the vectorised quadratic-form and Gram paths.
    """
    if m.is_zero():
        raise ZeroDivisionError("character phase with zero modulus")
    v = r * m.conj()
    nm = m.norm()
    s = field.omega_trace
    return v.b % nm, (v.a + s * v.b) % nm, nm


def eval_character(p) -> complex:
    """e(p) = cos(2 pi p) + i sin(2 pi p), reducing exact phases mod 1 first."""
    if isinstance(p, Rat):
        p = float(p % 1)
    return cmath.exp(2j * math.pi * p)


def char_value(field: FieldParams, n: OKElt, r: OKElt, m: OKElt) -> complex:
    """Character at n*r/m via the exact rational phase."""
    return eval_character(phase(field, n, r, m))


def eval_character_complex_oracle(field: FieldParams, z: complex) -> complex:
    """Direct floating-point evaluation of exp(2 pi i (z - conj(z))/sqrtD).

    sqrtD = i*sqrt(|discriminant|).  Used only as a cross-check of phase().
    """
    sqrt_disc = 1j * math.sqrt(-field.discriminant)
    zz = complex(z)
    return cmath.exp(2j * math.pi * (zz / sqrt_disc - zz.conjugate() / sqrt_disc))
