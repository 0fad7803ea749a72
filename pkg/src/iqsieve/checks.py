"""Self-contained property suites behind the `verify` CLI subcommand.

Each suite returns (name, max_error, passed) records; exact-arithmetic
checks report an error of 0.0 or 1.0 (failure count clamped), floating
checks report the worst residual seen.  Everything is seeded and
deterministic.
"""

from __future__ import annotations

import math
import random

from . import analytic, approx, character, residue
from .qfield import FieldParams, enumerate_by_norm

Record = tuple[str, float, bool]


def _rand_elt(field: FieldParams, rng: random.Random, span: int = 40):
    return field.element(rng.randint(-span, span), rng.randint(-span, span))


def check_ring(field: FieldParams, seed: int = 0, trials: int = 2000) -> list[Record]:
    rng = random.Random(seed)
    bad_mult = 0
    bad_conj = 0
    bad_trace = 0
    for _ in range(trials):
        x = _rand_elt(field, rng)
        y = _rand_elt(field, rng)
        if (x * y).norm() != x.norm() * y.norm():
            bad_mult += 1
        xc = x * x.conj()
        if x.conj().conj() != x or xc.b != 0 or xc.a != x.norm():
            bad_conj += 1
        if x + x.conj() != field.element(x.trace(), 0):
            bad_trace += 1
    bad_enum = 0
    prev = set()
    for bound in range(0, 26):
        cur = set(enumerate_by_norm(field, bound))
        if not prev <= cur:
            bad_enum += 1
        prev = cur
    return [
        ("norm_multiplicative", float(bad_mult), bad_mult == 0),
        ("conjugation_identities", float(bad_conj), bad_conj == 0),
        ("trace_identity", float(bad_trace), bad_trace == 0),
        ("enumeration_nested", float(bad_enum), bad_enum == 0),
    ]


def check_character(field: FieldParams, seed: int = 0, trials: int = 400) -> list[Record]:
    rng = random.Random(seed)
    bad_shift = 0
    bad_add = 0
    for _ in range(trials):
        n = _rand_elt(field, rng, 20)
        r = _rand_elt(field, rng, 20)
        m = _rand_elt(field, rng, 8)
        if m.is_zero():
            m = field.one()
        s = _rand_elt(field, rng, 10)
        if character.phase(field, n, r, m) != character.phase(field, n, r + s * m, m):
            bad_shift += 1
        n2 = _rand_elt(field, rng, 20)
        lhs = (character.phase(field, n, r, m) + character.phase(field, n2, r, m)) % 1
        if lhs != character.phase(field, n + n2, r, m):
            bad_add += 1
    worst_orth = 0.0
    for m in enumerate_by_norm(field, 12):
        rs = residue.residue_system(field, m)
        for a in rs.reps:
            total = sum(character.char_value(field, a, r, m) for r in rs.reps)
            target = m.norm() if rs.reduce(a).is_zero() else 0.0
            worst_orth = max(worst_orth, abs(total - target))
    worst_oracle = 0.0
    for _ in range(trials):
        n = _rand_elt(field, rng, 30)
        r = _rand_elt(field, rng, 30)
        m = _rand_elt(field, rng, 30)
        if m.is_zero():
            m = field.one()
        z = complex(n) * complex(r) / complex(m)
        diff = abs(character.eval_character(character.phase(field, n, r, m))
                   - character.eval_character_complex_oracle(field, z))
        worst_oracle = max(worst_oracle, diff)
    return [
        ("phase_residue_invariance", float(bad_shift), bad_shift == 0),
        ("phase_additivity", float(bad_add), bad_add == 0),
        ("orthogonality_norm_le_12", worst_orth, worst_orth < 1e-9),
        ("complex_oracle_agreement", worst_oracle, worst_oracle < 1e-10),
    ]


def check_residue(field: FieldParams, seed: int = 0) -> list[Record]:
    rng = random.Random(seed)
    bad_size = 0
    bad_reduce = 0
    for m in enumerate_by_norm(field, 16):
        rs = residue.residue_system(field, m)
        if len(rs.reps) != m.norm():
            bad_size += 1
        for _ in range(20):
            x = _rand_elt(field, rng, 50)
            red = rs.reduce(x)
            if rs.reduce(red) != red:
                bad_reduce += 1
            w = (red - x) * m.conj()
            if w.a % m.norm() or w.b % m.norm():
                bad_reduce += 1
    bad_totient = 0
    pool = [m for m in enumerate_by_norm(field, 10)]
    for _ in range(60):
        m1 = rng.choice(pool)
        m2 = rng.choice(pool)
        if m1.norm() * m2.norm() > 100 or not residue.is_coprime(field, m1, m2):
            continue
        if residue.totient(field, m1 * m2) != residue.totient(field, m1) * residue.totient(field, m2):
            bad_totient += 1
    return [
        ("residue_system_size", float(bad_size), bad_size == 0),
        ("reduce_idempotent_congruent", float(bad_reduce), bad_reduce == 0),
        ("totient_multiplicative", float(bad_totient), bad_totient == 0),
    ]


def check_approx(field: FieldParams, seed: int = 0, trials: int = 1000) -> list[Record]:
    rng = random.Random(seed)
    sqrt_disc = math.sqrt(-field.discriminant)
    worst = -math.inf
    bad_q = 0
    for _ in range(trials):
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        n_cap = rng.randint(1, 25)
        cert = approx.dirichlet_approx(field, z, n_cap)
        qabs = abs(complex(cert.q))
        if not (0 < qabs <= n_cap * (1 + 1e-12)):
            bad_q += 1
        worst = max(worst, cert.error - sqrt_disc / (qabs * n_cap))
    return [
        ("denominator_in_range", float(bad_q), bad_q == 0),
        ("certificate_error_bound", max(worst, 0.0), worst <= 1e-12),
    ]


def check_poisson(field: FieldParams, seed: int = 0) -> list[Record]:
    worst = 0.0
    for x_scale in (0.5, 1.0):
        for m in enumerate_by_norm(field, 4):
            if m.a < 0 or (m.a == 0 and m.b < 0):
                continue  # one representative per +/- pair is enough here
            for r in (field.zero(), field.one()):
                lhs, rhs = analytic.poisson_identity_check(field, x_scale, m, r)
                worst = max(worst, abs(lhs - rhs))
    lhs, rhs = analytic.poisson_scaled_check(field, field.one(), field.element(1, 1), 1.0)
    worst_scaled = abs(lhs - rhs)
    return [
        ("poisson_residue_class_identity", worst, worst < 1e-8),
        ("poisson_scaled_identity", worst_scaled, worst_scaled < 1e-8),
    ]


def check_fourier(field: FieldParams, seed: int = 0, trials: int = 4) -> list[Record]:
    rng = random.Random(seed)
    worst = 0.0
    k = 2
    q0 = 4.0
    for _ in range(trials):
        alpha = [_rand_elt(field, rng, 2)]
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        closed = analytic.g_fourier_analytic(field, z, alpha, q0, k)
        numeric = analytic.fourier_numeric_oracle(
            field, lambda w: analytic.g_weight(field, w, alpha, q0, k), z)
        worst = max(worst, abs(closed - numeric))
    return [
        ("gaussian_transform_closed_form", worst, worst < 1e-6),
    ]


SUITES = {
    "ring": check_ring,
    "character": check_character,
    "residue": check_residue,
    "approx": check_approx,
    "poisson": check_poisson,
    "fourier": check_fourier,
}
