"""Binomial-ring arithmetic: exact binom(x, n) in Z, Q, Z[1/r], and truncated
p-adic integers, with the defining axiom suite as executable, seeded checks.

A binomial ring is torsion-free and closed under x -> x(x-1)...(x-n+1)/n!.
The p-adic instance carries residues modulo p^(K+guard) and tracks how many
digits stay certified through each division by n!; equality reads only the
first K digits.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, gcd

from .errors import CapError, ValidationError
from .polymaps import integer_binom


class NotInRing(ValidationError):
    code = "not_in_ring"


class PrecisionExhausted(CapError):
    code = "precision_exhausted"

    def __init__(self, message, required_guard=None):
        super().__init__(message)
        self.required_guard = required_guard


class RingElement:
    """Immutable element of a binomial ring; payload format is ring-specific."""

    __slots__ = ("ring", "payload", "valid")

    def __init__(self, ring, payload, valid=None):
        self.ring = ring
        self.payload = payload
        self.valid = valid

    def _peer(self, other):
        if not isinstance(other, RingElement) or other.ring != self.ring:
            raise ValidationError(f"cannot mix elements of {self.ring} and {other!r}")
        return other

    def __add__(self, other):
        return self.ring._add(self, self._peer(other))

    def __sub__(self, other):
        return self.ring._add(self, self.ring._neg(self._peer(other)))

    def __neg__(self):
        return self.ring._neg(self)

    def __mul__(self, other):
        return self.ring._mul(self, self._peer(other))

    def __eq__(self, other):
        if not isinstance(other, RingElement) or other.ring != self.ring:
            return NotImplemented
        return self.ring._eq(self, other)

    def __hash__(self):
        return hash((self.ring.descriptor, self.ring._canonical(self)))

    def __repr__(self):
        return self.ring._render(self)


class BinomialRing:
    descriptor = "ring"

    def __eq__(self, other):
        return type(self) is type(other) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash(self.descriptor)

    def __repr__(self):
        return self.descriptor

    def from_int(self, c: int) -> RingElement:
        return self.element(c)

    @property
    def zero(self) -> RingElement:
        return self.from_int(0)

    @property
    def one(self) -> RingElement:
        return self.from_int(1)

    def binom(self, x: RingElement, n: int) -> RingElement:
        """x(x-1)...(x-n+1)/n!, exact in the ring."""
        raise NotImplementedError

    def _canonical(self, x):
        return x.payload

    def _render(self, x):
        return f"{x.payload}"


class Integers(BinomialRing):
    descriptor = "z"

    def element(self, value) -> RingElement:
        if isinstance(value, RingElement):
            return value
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise NotInRing(f"{value} is not an integer")
            value = value.numerator
        if not isinstance(value, int):
            raise NotInRing(f"cannot coerce {value!r} into Z")
        return RingElement(self, value)

    def _add(self, a, b):
        return RingElement(self, a.payload + b.payload)

    def _neg(self, a):
        return RingElement(self, -a.payload)

    def _mul(self, a, b):
        return RingElement(self, a.payload * b.payload)

    def _eq(self, a, b):
        return a.payload == b.payload

    def binom(self, x, n):
        if n < 0:
            raise ValidationError("binomial order must be >= 0")
        return RingElement(self, integer_binom(x.payload, n))

    def sample(self, rng) -> RingElement:
        return self.element(rng.randint(-30, 30))


class _FractionRing(BinomialRing):
    def _add(self, a, b):
        return self.element(a.payload + b.payload)

    def _neg(self, a):
        return self.element(-a.payload)

    def _mul(self, a, b):
        return self.element(a.payload * b.payload)

    def _eq(self, a, b):
        return a.payload == b.payload

    def binom(self, x, n):
        if n < 0:
            raise ValidationError("binomial order must be >= 0")
        num = Fraction(1)
        for i in range(n):
            num *= x.payload - i
        return self.element(num / factorial(n))


class Rationals(_FractionRing):
    descriptor = "q"

    def element(self, value) -> RingElement:
        if isinstance(value, RingElement):
            return value
        return RingElement(self, Fraction(value))

    def sample(self, rng) -> RingElement:
        return self.element(Fraction(rng.randint(-30, 30), rng.randint(1, 12)))


class LocalizedIntegers(_FractionRing):
    """Z[1/r]: exact fractions whose denominator divides a power of r."""

    def __init__(self, r: int):
        if r < 2:
            raise ValidationError("localization parameter must be >= 2")
        self.r = r
        self.descriptor = f"zinv:{r}"

    def element(self, value) -> RingElement:
        if isinstance(value, RingElement):
            return value
        frac = Fraction(value)
        den = frac.denominator
        while den > 1:
            g = gcd(den, self.r)
            if g == 1:
                raise NotInRing(f"{frac} has denominator outside the powers of {self.r}")
            while den % g == 0:
                den //= g
        return RingElement(self, frac)

    def sample(self, rng) -> RingElement:
        return self.element(Fraction(rng.randint(-30, 30), self.r ** rng.randint(0, 3)))


class TruncatedPAdic(BinomialRing):
    """Z_p truncated to K certified digits, computed with guard digits.

    Elements store residues mod p^(K+guard) plus the count of digits still
    certified; dividing by n! costs v_p(n!) digits, and equality only ever
    reads the first K.
    """

    def __init__(self, p: int, precision: int, guard: int | None = None):
        if p < 2 or precision < 1:
            raise ValidationError("need a prime p >= 2 and precision >= 1")
        self.p = p
        self.precision = precision
        self.guard = precision + 6 if guard is None else guard
        if self.guard < 0:
            raise ValidationError("guard must be >= 0")
        self.width = precision + self.guard
        self.modulus = p**self.width
        self.descriptor = f"zp:{p}:{precision}:{self.guard}"

    def element(self, value) -> RingElement:
        if isinstance(value, RingElement):
            return value
        if isinstance(value, Fraction):
            vden = self._valuation(value.denominator)
            if vden:
                raise NotInRing(f"{value} has negative {self.p}-adic valuation")
            inv = pow(value.denominator, -1, self.modulus)
            return RingElement(self, value.numerator * inv % self.modulus, self.width)
        if not isinstance(value, int):
            raise NotInRing(f"cannot coerce {value!r} into Z_{self.p}")
        return RingElement(self, value % self.modulus, self.width)

    def _valuation(self, n: int) -> int:
        if n == 0:
            return self.width
        v = 0
        while n % self.p == 0:
            n //= self.p
            v += 1
        return v

    def _add(self, a, b):
        return RingElement(self, (a.payload + b.payload) % self.modulus, min(a.valid, b.valid))

    def _neg(self, a):
        return RingElement(self, -a.payload % self.modulus, a.valid)

    def _mul(self, a, b):
        return RingElement(self, a.payload * b.payload % self.modulus, min(a.valid, b.valid))

    def _eq(self, a, b):
        cut = self.p**self.precision
        return a.payload % cut == b.payload % cut

    def _canonical(self, x):
        return x.payload % self.p**self.precision

    def residue(self, x: RingElement) -> int:
        """The certified residue mod p^K."""
        return self._canonical(x)

    def _render(self, x):
        return f"{self._canonical(x)} (mod {self.p}^{self.precision})"

    def binom(self, x, n):
        if n < 0:
            raise ValidationError("binomial order must be >= 0")
        if n == 0:
            return self.one
        lost = self._valuation_factorial(n)
        valid_after = x.valid - lost
        if valid_after < self.precision:
            deficit = self.precision - valid_after
            raise PrecisionExhausted(
                f"binom(., {n}) in {self.descriptor} loses {lost} digits; "
                f"raise guard to >= {self.guard + deficit}",
                required_guard=self.guard + deficit,
            )
        num = 1
        for i in range(n):
            num = num * ((x.payload - i) % self.modulus) % self.modulus
        pe = self.p**lost
        assert num % pe == 0, "p-adic binomial closure violated"
        unit = factorial(n) // pe
        q = num // pe * pow(unit, -1, self.modulus) % self.modulus
        return RingElement(self, q, valid_after)

    def _valuation_factorial(self, n: int) -> int:
        v = 0
        q = self.p
        while q <= n:
            v += n // q
            q *= self.p
        return v

    def sample(self, rng) -> RingElement:
        # Stay away from the truncation boundary: nonzero samples keep
        # valuation <= K-3 so that n*x (n <= 6) never reads as 0 mod p^K.
        top = self.p**self.precision - 1
        while True:
            v = rng.randint(0, top)
            if self.precision <= 2 or v == 0 or v % self.p ** (self.precision - 2):
                return self.element(v)


def ring_from_token(token: str) -> BinomialRing:
    """Parse plain ring descriptors: z | q | zinv:R | zp:P:K[:GUARD]."""
    parts = token.split(":")
    kind = parts[0]
    try:
        if kind == "z" and len(parts) == 1:
            return Integers()
        if kind == "q" and len(parts) == 1:
            return Rationals()
        if kind == "zinv" and len(parts) == 2:
            return LocalizedIntegers(int(parts[1]))
        if kind == "zp" and len(parts) in (3, 4):
            guard = int(parts[3]) if len(parts) == 4 else None
            return TruncatedPAdic(int(parts[1]), int(parts[2]), guard)
    except ValueError as err:
        raise ValidationError(f"bad ring token {token!r}: {err}") from err
    raise ValidationError(f"unknown ring token {token!r}")


@dataclass(frozen=True)
class AxiomResult:
    axiom: str
    description: str
    passed: bool
    checks: int
    counterexample: str | None


@dataclass(frozen=True)
class SuiteReport:
    ring: str
    seed: int
    samples: int
    results: tuple[AxiomResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def result(self, axiom: str) -> AxiomResult:
        return next(r for r in self.results if r.axiom == axiom)

    def as_dict(self):
        return {
            "ring": self.ring,
            "seed": self.seed,
            "samples": self.samples,
            "all_passed": self.all_passed,
            "axioms": [
                {
                    "axiom": r.axiom,
                    "description": r.description,
                    "passed": r.passed,
                    "checks": r.checks,
                    "counterexample": r.counterexample,
                }
                for r in self.results
            ],
        }


def _compositions(n: int, parts: int):
    """Ordered tuples of ``parts`` positive integers summing to n."""
    if parts == 0:
        if n == 0:
            yield ()
        return
    for first in range(1, n - parts + 2):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def axiom_suite(ring: BinomialRing, samples: int = 100, seed: int = 0, *, nmax: int = 6, include=()) -> SuiteReport:
    """Run the five binomial-ring axioms on seeded samples, n, m <= nmax."""
    rng = random.Random(seed)
    elems = [ring.element(v) for v in include]
    elems += [ring.sample(rng) for _ in range(samples)]
    pairs = [(elems[i], elems[(i + 1) % len(elems)]) for i in range(len(elems))]
    results = []

    def run(axiom, description, check_iter):
        checks = 0
        counterexample = None
        for label, ok in check_iter:
            checks += 1
            if not ok:
                counterexample = label
                break
        results.append(AxiomResult(axiom, description, counterexample is None, checks, counterexample))

    def vandermonde():
        for a, b in pairs:
            for n in range(nmax + 1):
                lhs = ring.binom(a + b, n)
                rhs = ring.zero
                for p in range(n + 1):
                    rhs = rhs + ring.binom(a, p) * ring.binom(b, n - p)
                yield f"a={a!r} b={b!r} n={n}", lhs == rhs

    def product_expansion():
        for a, b in pairs:
            for n in range(nmax + 1):
                lhs = ring.binom(a * b, n)
                rhs = ring.zero
                for m in range(n + 1):
                    inner = ring.zero
                    for q in _compositions(n, m):
                        term = ring.one
                        for qi in q:
                            term = term * ring.binom(b, qi)
                        inner = inner + term
                    rhs = rhs + ring.binom(a, m) * inner
                yield f"a={a!r} b={b!r} n={n}", lhs == rhs

    def binomial_products():
        for a in elems:
            for m in range(nmax + 1):
                for n in range(nmax + 1):
                    lhs = ring.binom(a, m) * ring.binom(a, n)
                    rhs = ring.zero
                    for k in range(n + 1):
                        w = comb(m + k, n) * comb(n, k)
                        rhs = rhs + ring.binom(a, m + k) * ring.from_int(w)
                    yield f"a={a!r} m={m} n={n}", lhs == rhs

    def unit_vanishing():
        one = ring.one
        for n in range(2, nmax + 1):
            yield f"n={n}", ring.binom(one, n) == ring.zero

    def normalization():
        for a in elems:
            yield f"a={a!r} n=0", ring.binom(a, 0) == ring.one
            yield f"a={a!r} n=1", ring.binom(a, 1) == a

    run("i", "binom(a+b, n) = sum over p+q=n of binom(a,p) binom(b,q)", vandermonde())
    run("ii", "binom(ab, n) expands over compositions of n", product_expansion())
    run("iii", "binom(a,m) binom(a,n) = sum_k binom(a,m+k) C(m+k,n) C(n,k)", binomial_products())
    run("iv", "binom(1, n) = 0 for n >= 2", unit_vanishing())
    run("v", "binom(a, 0) = 1 and binom(a, 1) = a", normalization())
    return SuiteReport(ring.descriptor, seed, samples, tuple(results))


def is_binomial_sanity(ring, samples: int = 25, seed: int = 0, *, nmax: int = 6) -> bool:
    """Sampled torsion-freeness plus closure of binom inside the ring."""
    rng = random.Random(seed)
    try:
        elems = [ring.sample(rng) for _ in range(samples)] + [ring.one]
        zero = ring.zero
        for x in elems:
            if x == zero:
                continue
            for n in range(2, nmax + 1):
                if ring.from_int(n) * x == zero:
                    return False
        for x in elems:
            for n in range(nmax + 1):
                ring.binom(x, n)
    except ValidationError:
        return False
    return True
