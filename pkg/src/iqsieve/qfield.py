"""Exact arithmetic in the ring of integers of an imaginary quadratic field.

K = Q(sqrt(d)) with d < 0 squarefree has ring of integers Z + omega*Z,
where omega = (1 + sqrt(d))/2 when d = 1 (mod 4) and omega = sqrt(d)
otherwise.  Elements carry their integer coordinates in that basis and all
ring operations (products, conjugates, norms, traces) are exact integer
arithmetic, so k-th powers and large products never lose precision.
"""

from __future__ import annotations

import enum
import math

#: The nine class-number-one discriminant parameters d.
HEEGNER_D = (-1, -2, -3, -7, -11, -19, -43, -67, -163)


class OmegaCase(enum.Enum):
    """Which integral basis generator the field uses."""

    HALF_PLUS = "half_plus"  # d = 1 (mod 4): omega = (1 + sqrt(d))/2
    SQRT_D = "sqrt_d"        # d = 2, 3 (mod 4): omega = sqrt(d)


def _is_squarefree(n: int) -> bool:
    i = 2
    while i * i <= n:
        if n % (i * i) == 0:
            return False
        if n % i == 0:
            n //= i
        else:
            i += 1
    return True


def _coords_norm_le(s: int, c: int, disc_abs: int, bound: int):
    """Yield (a, b, norm) with a^2 + s*a*b + c*b^2 <= bound, b != 0 allowed, (0,0) included.

    Integer-only region scan: b is bounded by the b^2-coefficient of the
    positive definite form (4c - s^2 = |disc|), a by solving the quadratic.
    """
    if bound < 0:
        return
    bmax = math.isqrt((4 * bound) // disc_abs)
    for b in range(-bmax, bmax + 1):
        disc = 4 * bound - disc_abs * b * b
        if disc < 0:
            continue
        rt = math.isqrt(disc)
        amin = -((s * b + rt) // 2) - 1
        amax = (-s * b + rt) // 2 + 1
        for a in range(amin, amax + 1):
            n = a * a + s * a * b + c * b * b
            if n <= bound:
                yield a, b, n


class FieldParams:
    """Ring data for one field K = Q(sqrt(d)), d < 0 squarefree.

    Exposes the discriminant, the minimal-polynomial data of omega
    (omega^2 = omega_trace*omega - omega_norm), the unit group and the
    class-number-one flag.  Instances are immutable and hashable by d.
    """

    __slots__ = ("d", "discriminant", "omega_case", "omega_trace", "omega_norm",
                 "units", "class_number_one", "omega_complex", "_enum_cache")

    def __init__(self, d: int):
        if not isinstance(d, int):
            raise ValueError(f"d must be an integer, got {d!r}")
        if d >= 0:
            raise ValueError(f"d must be negative, got {d}")
        if not _is_squarefree(-d):
            raise ValueError(f"d must be squarefree, got {d}")
        self.d = d
        if d % 4 == 1:
            self.omega_case = OmegaCase.HALF_PLUS
            self.discriminant = d
            self.omega_trace = 1         # Tr(omega)
            self.omega_norm = (1 - d) // 4  # N(omega)
        else:
            self.omega_case = OmegaCase.SQRT_D
            self.discriminant = 4 * d
            self.omega_trace = 0
            self.omega_norm = -d
        self.omega_complex = (self.omega_trace + 1j * math.sqrt(-self.discriminant)) / 2.0
        self.class_number_one = d in HEEGNER_D
        self._enum_cache = {}
        units = [OKElt(self, a, b) for a, b, n in
                 _coords_norm_le(self.omega_trace, self.omega_norm, -self.discriminant, 1)
                 if n == 1]
        units.sort(key=canonical_key)
        self.units = tuple(units)

    def element(self, a: int, b: int = 0) -> "OKElt":
        return OKElt(self, a, b)

    def zero(self) -> "OKElt":
        return OKElt(self, 0, 0)

    def one(self) -> "OKElt":
        return OKElt(self, 1, 0)

    def omega(self) -> "OKElt":
        return OKElt(self, 0, 1)

    def __eq__(self, other):
        return isinstance(other, FieldParams) and other.d == self.d

    def __hash__(self):
        return hash(("FieldParams", self.d))

    def __repr__(self):
        return f"FieldParams(d={self.d})"


class OKElt:
    """Element a + b*omega of O_K with exact integer coordinates."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: FieldParams, a: int, b: int = 0):
        self.field = field
        self.a = a
        self.b = b

    def _coerce(self, other):
        if isinstance(other, OKElt):
            if other.field.d != self.field.d:
                raise ValueError("operands belong to different fields "
                                 f"(d={self.field.d} vs d={other.field.d})")
            return other
        if isinstance(other, int):
            return OKElt(self.field, other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return OKElt(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return OKElt(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return OKElt(self.field, o.a - self.a, o.b - self.b)

    def __neg__(self):
        return OKElt(self.field, -self.a, -self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # omega^2 = s*omega - c with s = Tr(omega), c = N(omega)
        s, c = self.field.omega_trace, self.field.omega_norm
        bb = self.b * o.b
        return OKElt(self.field,
                     self.a * o.a - c * bb,
                     self.a * o.b + self.b * o.a + s * bb)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {k!r}")
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "OKElt":
        s = self.field.omega_trace
        return OKElt(self.field, self.a + s * self.b, -self.b)

    def norm(self) -> int:
        s, c = self.field.omega_trace, self.field.omega_norm
        return self.a * self.a + s * self.a * self.b + c * self.b * self.b

    def trace(self) -> int:
        return 2 * self.a + self.field.omega_trace * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def __complex__(self) -> complex:
        return self.a + self.b * self.field.omega_complex

    def __eq__(self, other):
        if isinstance(other, int):
            return self.a == other and self.b == 0
        return (isinstance(other, OKElt) and other.field.d == self.field.d
                and other.a == self.a and other.b == self.b)

    def __hash__(self):
        return hash((self.field.d, self.a, self.b))

    def __repr__(self):
        return f"({self.a}{self.b:+}w|d={self.field.d})"


def make_field(d: int) -> FieldParams:
    """Validate d (negative, squarefree) and build the field parameters."""
    return FieldParams(d)


def norm_trace(x: OKElt) -> tuple[int, int]:
    """Exact (norm, trace) of x."""
    return x.norm(), x.trace()


def canonical_key(x: OKElt) -> tuple[int, int, int]:
    """Fixed global ordering key (norm, a, b) used by every enumeration."""
    return (x.norm(), x.a, x.b)


def enumerate_by_norm(field: FieldParams, bound: int, include_zero: bool = False) -> tuple[OKElt, ...]:
    """All x in O_K with N(x) <= bound, sorted by (norm, a, b).

    The scan is exact integer arithmetic; results are cached per field.
    """
    if bound < 0:
        raise ValueError(f"bound must be nonnegative, got {bound}")
    key = (bound, include_zero)
    cached = field._enum_cache.get(key)
    if cached is not None:
        return cached
    out = []
    for a, b, n in _coords_norm_le(field.omega_trace, field.omega_norm,
                                   -field.discriminant, bound):
        if a == 0 and b == 0 and not include_zero:
            continue
        out.append(OKElt(field, a, b))
    out.sort(key=canonical_key)
    result = tuple(out)
    field._enum_cache[key] = result
    return result


def exact_div(x: OKElt, t: OKElt) -> OKElt | None:
    """x / t when t divides x in O_K, else None."""
    if t.is_zero():
        raise ZeroDivisionError("division by zero element")
    nt = t.norm()
    w = x * t.conj()
    qa, ra = divmod(w.a, nt)
    qb, rb = divmod(w.b, nt)
    if ra or rb:
        return None
    return OKElt(x.field, qa, qb)
