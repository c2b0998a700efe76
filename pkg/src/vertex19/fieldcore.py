"""Exact scalars and the model context.

All spectral quantities are handled multiplicatively: the code never stores a
bare rapidity, only its exponential X = e^{2*lambda} as an exact rational.
Difference arguments become ratios of X values.  The base indeterminate is
p with q = p**2, so that half-integer powers of q stay rational.

Rationals are gmpy2.mpq when gmpy2 is importable, else fractions.Fraction.
Both expose .numerator/.denominator and exact field arithmetic, which is all
the rest of the package relies on.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DegenerateParameter

try:
    from gmpy2 import mpq as _mpq

    def rat(num, den=1):
        # gmpy2 reads a second argument after a string as a numeric base
        if isinstance(num, str):
            return rat_from_str(num) / den
        return _mpq(num, den)

    RAT_BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as _Fraction

    def rat(num, den=1):
        if isinstance(num, str):
            return rat_from_str(num) / den
        return _Fraction(num, den)

    RAT_BACKEND = "fractions"

R0 = rat(0)
R1 = rat(1)


def rat_from_str(s):
    """Parse "num/den" or a plain integer string into an exact rational."""
    s = s.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        d = int(den)
        if d == 0:
            raise ZeroDivisionError("zero denominator in %r" % s)
        return rat(int(num), d)
    return rat(int(s))


def rat_str(x):
    """Canonical "num/den" form (always includes the denominator)."""
    return "%d/%d" % (x.numerator, x.denominator)


def rpow(x, k):
    """x**k for integer k of either sign, staying exact."""
    if k >= 0:
        return x ** k
    return R1 / (x ** (-k))


class Model(enum.Enum):
    IK = "ik"
    FZ = "fz"

    @classmethod
    def parse(cls, s):
        try:
            return cls(s.lower())
        except ValueError:
            raise DegenerateParameter("unknown model %r (expected ik or fz)" % s)


@dataclass(frozen=True)
class ModelContext:
    """Immutable bundle of everything a weight evaluation needs.

    p realizes q**(1/2); zeta is q for FZ and -q**3 for IK; m holds the
    multiplicative column inhomogeneities.  L is len(m).
    """

    model: Model
    p: object
    q: object
    zeta: object
    m: tuple
    L: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "L", len(self.m))


def make_context(model, p, m):
    """Validate parameters and derive q and zeta.

    Raises DegenerateParameter when p is 0 or +-1, an inhomogeneity is zero,
    or q**2 == zeta (which would kill denominators downstream).
    """
    if not isinstance(model, Model):
        model = Model.parse(model)
    p = rat(p)
    if p == 0 or p == 1 or p == -1:
        raise DegenerateParameter("p must not be 0, 1 or -1 (got %s)" % p)
    m = tuple(rat(mj) for mj in m)
    if not m:
        raise DegenerateParameter("at least one inhomogeneity required")
    if any(mj == 0 for mj in m):
        raise DegenerateParameter("inhomogeneities must be nonzero")
    q = p * p
    zeta = q if model is Model.FZ else -(q ** 3)
    if q * q == zeta:
        raise DegenerateParameter("q**2 == zeta is degenerate")
    return ModelContext(model=model, p=p, q=q, zeta=zeta, m=m)


def q_half_power(ctx, k):
    """q**(k/2), i.e. p**k, exact for either sign of k."""
    return rpow(ctx.p, k)


# ---------------------------------------------------------------------------
# Prime-field scalars (backend for the modular linear solver)


@dataclass(frozen=True)
class PrimeFieldElement:
    residue: int
    modulus: int

    def __post_init__(self):
        if not 0 <= self.residue < self.modulus:
            object.__setattr__(self, "residue", self.residue % self.modulus)

    def _check(self, other):
        if self.modulus != other.modulus:
            raise ValueError("mixed moduli %d and %d" % (self.modulus, other.modulus))

    def __add__(self, other):
        self._check(other)
        return PrimeFieldElement((self.residue + other.residue) % self.modulus, self.modulus)

    def __sub__(self, other):
        self._check(other)
        return PrimeFieldElement((self.residue - other.residue) % self.modulus, self.modulus)

    def __mul__(self, other):
        self._check(other)
        return PrimeFieldElement((self.residue * other.residue) % self.modulus, self.modulus)

    def __truediv__(self, other):
        self._check(other)
        if other.residue == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.modulus)
        inv = pow(other.residue, -1, self.modulus)
        return PrimeFieldElement((self.residue * inv) % self.modulus, self.modulus)


def reduce_mod(x, prime):
    """Image of a rational in F_prime.

    Raises ZeroDivisionError when the denominator vanishes mod prime; callers
    treat that as "bad prime, pick another".
    """
    den = int(x.denominator) % prime
    if den == 0:
        raise ZeroDivisionError("denominator divisible by %d" % prime)
    return (int(x.numerator) % prime) * pow(den, -1, prime) % prime


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin, valid for all n < 2**64."""
    if n < 2:
        return False
    for sp in _MR_BASES:
        if n % sp == 0:
            return n == sp
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(rng, bits=30):
    """A random prime with the requested bit length, from a seeded rng."""
    lo, hi = 1 << (bits - 1), (1 << bits) - 1
    while True:
        cand = rng.randrange(lo, hi) | 1
        if is_prime(cand):
            return cand


def crt_pair(r1, m1, r2, m2):
    """Combine residues r1 mod m1 and r2 mod m2 (coprime moduli)."""
    g, inv = 0, pow(m1, -1, m2)
    t = (r2 - r1) * inv % m2
    return r1 + m1 * t, m1 * m2


def rational_reconstruction(a, modulus):
    """Recover n/d from a mod modulus with |n|, d <= sqrt(modulus/2).

    Standard half-extended Euclid; returns a rational or None when no
    candidate exists within the bound.
    """
    a %= modulus
    bound = math.isqrt((modulus - 1) // 2)
    r0, s0 = modulus, 0
    r1, s1 = a, 1
    while r1 > bound:
        quo = r0 // r1
        r0, r1 = r1, r0 - quo * r1
        s0, s1 = s1, s0 - quo * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    num, den = (r1, s1) if s1 > 0 else (-r1, -s1)
    if math.gcd(den, modulus) != 1 or math.gcd(abs(num), den) != 1:
        return None
    if (num - a * den) % modulus != 0:
        return None
    return rat(num, den)


# ---------------------------------------------------------------------------
# Seeded sampling of generic rational parameters


def rand_rational(rng, lo=2, hi=9, signed=False):
    """A small random nonzero rational n/d with n != d (so it is never 1)."""
    if lo >= hi:
        raise DegenerateParameter("need lo < hi to draw n != d")
    while True:
        n = rng.randrange(lo, hi + 1)
        d = rng.randrange(lo, hi + 1)
        if n == d:
            continue
        x = rat(n, d)
        if signed and rng.random() < 0.5:
            x = -x
        return x


def rand_distinct_ints(rng, count, lo=2, hi=97):
    """Distinct random integers, handy as generic spectral sample points."""
    if hi - lo + 1 < count:
        raise ValueError("range too small for %d distinct values" % count)
    vals = rng.sample(range(lo, hi + 1), count)
    return [rat(v) for v in vals]
