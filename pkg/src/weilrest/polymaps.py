"""Polynomial-map calculus for pointed maps between free abelian monoids/groups.

The k-th deviation of f is defined recursively: the order-0 deviation is f,
and the order-(k+1) deviation combines the last two of its k+2 arguments,

    D[k+1] f(m0,...,mk,m(k+1)) = D[k] f(m0,...,mk + m(k+1))
                               - D[k] f(m0,...,mk)
                               - D[k] f(m0,...,m(k+1)).

A map has degree N when the deviation taking N+1 arguments vanishes
identically while the one taking N arguments does not (degree 0 = the zero
map).  Certification is box-bounded evidence: vanishing is checked on all
unordered argument tuples drawn from {0..B}^r (deviations are symmetric), and
the certificate records its own bounds.  Newton/Mahler coefficients computed
from iterated unit-vector differences at 0 give the unique degree-N extension
to the group completion and the scalar extension to binomial rings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, factorial

from .errors import CapError, ToolError, ValidationError

DEFAULT_BOX = 4
DEFAULT_DEGREE_BOUND = 8
DEFAULT_BUDGET = 10**6


class ArityMismatch(ValidationError):
    code = "arity_mismatch"


class BudgetExceeded(CapError):
    code = "budget_exceeded"


class ExceedsBound(ToolError):
    code = "exceeds_bound"


class CertificateInvalid(ValidationError):
    code = "certificate_invalid"


class NotPolylinear(ValidationError):
    code = "not_polylinear"


class Obstruction(ToolError):
    code = "obstruction"

    def __init__(self, message, witness=None, relation=None):
        super().__init__(message)
        self.witness = witness
        self.relation = relation


class RingUnsupported(ValidationError):
    code = "ring_unsupported"


def integer_binom(x: int, k: int) -> int:
    """C(x, k) for any integer x: x(x-1)...(x-k+1)/k!, always an integer."""
    if k < 0:
        raise ValidationError("binomial order must be >= 0")
    num = 1
    for i in range(k):
        num *= x - i
    value, rem = divmod(num, factorial(k))
    assert rem == 0
    return value


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


class PointedMap:
    """Exact evaluation oracle N^r -> Z^s (Z^r with group_domain) with f(0)=0.

    Normalization subtracts the raw value at 0, so any total integer map can
    be wrapped.  Evaluations are cached; the wrapped function must be pure.
    """

    def __init__(self, arity_in, arity_out, fn, *, group_domain=False, name=None):
        self.arity_in = arity_in
        self.arity_out = arity_out
        self.group_domain = group_domain
        self.name = name
        self._fn = fn
        self._cache: dict[tuple, tuple] = {}
        zero = (0,) * arity_in
        raw = tuple(fn(zero))
        if len(raw) != arity_out:
            raise ArityMismatch(f"map returned {len(raw)} coordinates, expected {arity_out}")
        self._offset = raw

    def __call__(self, point) -> tuple[int, ...]:
        point = tuple(point)
        if len(point) != self.arity_in:
            raise ArityMismatch(f"expected {self.arity_in} coordinates, got {len(point)}")
        hit = self._cache.get(point)
        if hit is None:
            raw = tuple(self._fn(point))
            hit = _vsub(raw, self._offset)
            self._cache[point] = hit
        return hit

    def __repr__(self):
        dom = "Z" if self.group_domain else "N"
        label = self.name or "map"
        return f"PointedMap({label}: {dom}^{self.arity_in} -> Z^{self.arity_out})"


def pointed(arity_in, arity_out, fn, **kw) -> PointedMap:
    return PointedMap(arity_in, arity_out, fn, **kw)


def delta(f: PointedMap, k: int, args) -> tuple[int, ...]:
    """Order-k deviation, evaluated by the defining recursion on k+1 arguments."""
    args = tuple(tuple(a) for a in args)
    if len(args) != k + 1:
        raise ArityMismatch(f"level-{k} deviation takes {k + 1} arguments, got {len(args)}")
    for a in args:
        if len(a) != f.arity_in:
            raise ArityMismatch(f"argument {a} has wrong arity")
    return _delta_rec(f, args)


def _delta_rec(f, args):
    if len(args) == 1:
        return f(args[0])
    head, a, b = args[:-2], args[-2], args[-1]
    joined = _delta_rec(f, head + (_vadd(a, b),))
    left = _delta_rec(f, head + (a,))
    right = _delta_rec(f, head + (b,))
    return _vsub(_vsub(joined, left), right)


def _deviation(f, args):
    # Closed form of the recursion: alternating sum of f over argument-subset
    # sums.  Symmetric in the arguments, hence the multiset enumeration below.
    m = len(args)
    total = (0,) * f.arity_out
    for bits in range(1, 1 << m):
        point = (0,) * f.arity_in
        size = 0
        for i in range(m):
            if bits >> i & 1:
                point = _vadd(point, args[i])
                size += 1
        term = f(point)
        if (m - size) % 2:
            total = _vsub(total, term)
        else:
            total = _vadd(total, term)
    return total


class DifferenceTable:
    """Mahler/Newton coefficients a_k of a map, for multi-indices |k| <= order.

    a_k is the iterated unit-vector forward difference of f at 0; the map is
    reconstructed as sum_k a_k * prod_i C(x_i, k_i).
    """

    def __init__(self, base: PointedMap, order: int):
        self.base = base
        self.order = order
        self.coefficients = {}
        zero = (0,) * base.arity_out
        for k in _multi_indices(base.arity_in, order):
            a_k = self._mixed_difference(k)
            if a_k != zero:
                self.coefficients[k] = a_k

    def _mixed_difference(self, k):
        total = (0,) * self.base.arity_out
        ranges = [range(ki + 1) for ki in k]
        for j in itertools.product(*ranges):
            weight = 1
            for ki, ji in zip(k, j):
                weight *= comb(ki, ji)
            if (sum(k) - sum(j)) % 2:
                weight = -weight
            term = self.base(j)
            total = _vadd(total, tuple(weight * t for t in term))
        return total

    def coefficient(self, k) -> tuple[int, ...]:
        return self.coefficients.get(tuple(k), (0,) * self.base.arity_out)

    def reconstruct(self, x) -> tuple[int, ...]:
        total = (0,) * self.base.arity_out
        for k, a_k in self.coefficients.items():
            w = 1
            for xi, ki in zip(x, k):
                w *= integer_binom(xi, ki)
                if w == 0:
                    break
            if w:
                total = _vadd(total, tuple(w * a for a in a_k))
        return total


def _multi_indices(r, bound):
    for total in range(bound + 1):
        yield from _compositions_leq(r, total)


def _compositions_leq(r, total):
    if r == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions_leq(r - 1, total - first):
            yield (first,) + rest


@dataclass(frozen=True)
class PolynomialCertificate:
    """Degree N with box-bounded evidence: the (N+1)-argument deviation
    vanished on every unordered tuple from {0..box}^r, and witness_args is an
    N-argument tuple where the order-below deviation is nonzero (N >= 1)."""

    map: PointedMap
    degree: int
    box: int
    degree_bound: int
    checked: int
    witness_args: tuple | None
    witness_value: tuple | None
    table: DifferenceTable

    def as_dict(self):
        return {
            "degree": self.degree,
            "box": self.box,
            "degree_bound": self.degree_bound,
            "checked_tuples": self.checked,
            "coefficients": {
                ",".join(map(str, k)): list(v)
                for k, v in sorted(self.table.coefficients.items())
            },
            "witness": None
            if self.witness_args is None
            else {
                "args": [list(a) for a in self.witness_args],
                "value": list(self.witness_value),
            },
        }


def certify_degree(
    f: PointedMap,
    degree_bound: int = DEFAULT_DEGREE_BOUND,
    box: int = DEFAULT_BOX,
    *,
    budget: int = DEFAULT_BUDGET,
) -> PolynomialCertificate:
    """Find the least degree whose next deviation vanishes on the box.

    Raises ExceedsBound when every level up to degree_bound has a nonzero
    deviation, and BudgetExceeded when the multiset scan would be too large.
    """
    if degree_bound < 0 or box < 0:
        raise ValidationError("degree bound and box must be >= 0")
    points = list(itertools.product(range(box + 1), repeat=f.arity_in))
    checked = 0
    witness = None
    zero = (0,) * f.arity_out
    for level in range(degree_bound + 1):
        size = comb(len(points) + level, level + 1)
        if checked + size > budget:
            raise BudgetExceeded(
                f"level {level} needs {size} deviation evaluations "
                f"(budget {budget}, used {checked})"
            )
        vanished = True
        for args in itertools.combinations_with_replacement(points, level + 1):
            checked += 1
            value = _deviation(f, args)
            if value != zero:
                witness = (args, value)
                vanished = False
                break
        if vanished:
            table = DifferenceTable(f, level)
            for x in points:
                if table.reconstruct(x) != f(x):
                    raise ExceedsBound(
                        "deviations vanish but the Newton reconstruction "
                        f"disagrees at {x}; the map is not polynomial of "
                        f"degree {level} on the box"
                    )
            return PolynomialCertificate(
                map=f,
                degree=level,
                box=box,
                degree_bound=degree_bound,
                checked=checked,
                witness_args=witness[0] if witness else None,
                witness_value=witness[1] if witness else None,
                table=table,
            )
    raise ExceedsBound(
        f"no vanishing deviation up to degree bound {degree_bound} on box {box}"
    )


def extend_to_groupification(cert: PolynomialCertificate) -> PointedMap:
    """Unique polynomial extension to Z^r, evaluated by the Mahler expansion."""
    f = cert.map
    table = cert.table
    for x in itertools.product(range(cert.box + 1), repeat=f.arity_in):
        if table.reconstruct(x) != f(x):
            raise CertificateInvalid(f"certificate does not reproduce f at {x}")
    return PointedMap(
        f.arity_in,
        f.arity_out,
        table.reconstruct,
        group_domain=True,
        name=(f.name or "map") + "~Z",
    )


def compose(
    fc: PolynomialCertificate,
    gc: PolynomialCertificate,
    *,
    budget: int = DEFAULT_BUDGET,
) -> PolynomialCertificate:
    """Certificate for g after f; the degree is re-certified, not assumed."""
    f, g = fc.map, gc.map
    if f.arity_out != g.arity_in:
        raise ArityMismatch(
            f"cannot compose: f lands in Z^{f.arity_out}, g expects {g.arity_in}"
        )
    g_ext = extend_to_groupification(gc)
    composite = PointedMap(
        f.arity_in,
        g.arity_out,
        lambda x: g_ext(f(x)),
        group_domain=f.group_domain,
        name=f"({g.name or 'g'} o {f.name or 'f'})",
    )
    bound = max(fc.degree * gc.degree, 0)
    return certify_degree(composite, bound, fc.box, budget=budget)


def check_polylinear(
    f: PointedMap,
    blocks,
    *,
    box: int = 2,
    budget: int = DEFAULT_BUDGET,
) -> PolynomialCertificate:
    """Verify block-additivity on the box, then certify degree <= #blocks."""
    blocks = tuple(blocks)
    if sum(blocks) != f.arity_in:
        raise ArityMismatch(f"blocks {blocks} do not sum to arity {f.arity_in}")
    offsets = [sum(blocks[:i]) for i in range(len(blocks))]
    for i, (off, width) in enumerate(zip(offsets, blocks)):
        rest = f.arity_in - width
        for fixed in itertools.product(range(box + 1), repeat=rest):
            for u in itertools.product(range(box + 1), repeat=width):
                for v in itertools.product(range(box + 1), repeat=width):
                    def assemble(block_vals):
                        return fixed[:off] + tuple(block_vals) + fixed[off:]

                    lhs = f(assemble(_vadd(u, v)))
                    rhs = _vadd(f(assemble(u)), f(assemble(v)))
                    if lhs != rhs:
                        raise NotPolylinear(
                            f"not additive in block {i}: u={u}, v={v}, fixed={fixed}"
                        )
    try:
        return certify_degree(f, len(blocks), box, budget=budget)
    except ExceedsBound as err:
        raise NotPolylinear(str(err)) from err


@dataclass(frozen=True)
class QuotientMap:
    """Map induced on Z^r / lattice, evaluated at canonical coset representatives."""

    base: PointedMap
    lattice: tuple
    certificate: PolynomialCertificate | None

    def canonical(self, x) -> tuple[int, ...]:
        x = list(x)
        for row in self.lattice:
            col = next(i for i, v in enumerate(row) if v)
            q = x[col] // row[col]
            for i, v in enumerate(row):
                x[i] -= q * v
        return tuple(x)

    def __call__(self, x) -> tuple[int, ...]:
        return self.base(self.canonical(x))


def factor_through_quotient(
    source,
    relations,
    *,
    box: int = DEFAULT_BOX,
) -> QuotientMap:
    """Factor a map on Z^r through Z^r / <u - v : (u, v) in relations>.

    The hypothesis f(m+u) = f(m+v) is verified for every m in {-box..box}^r;
    the first failure raises Obstruction with the witness.  ``source`` may be
    a certificate or a bare group-domain PointedMap (periodic maps such as a
    parity table are factorable without being box-certifiable).
    """
    cert = source if isinstance(source, PolynomialCertificate) else None
    if cert is not None:
        f = cert.map if cert.map.group_domain else extend_to_groupification(cert)
    else:
        f = source
        if not f.group_domain:
            raise ValidationError("quotient factoring needs a map defined on Z^r")
    relations = [(tuple(u), tuple(v)) for u, v in relations]
    for u, v in relations:
        if len(u) != f.arity_in or len(v) != f.arity_in:
            raise ArityMismatch("relation arity does not match the map")
        for m in itertools.product(range(-box, box + 1), repeat=f.arity_in):
            if f(_vadd(m, u)) != f(_vadd(m, v)):
                raise Obstruction(
                    f"f(m+u) != f(m+v) at m={m} for relation {(u, v)}",
                    witness=m,
                    relation=(u, v),
                )
    lattice = _hermite_rows([_vsub(u, v) for u, v in relations], f.arity_in)
    return QuotientMap(base=f, lattice=tuple(lattice), certificate=cert)


def _hermite_rows(gens, ncols):
    """Row Hermite form of the integer lattice spanned by ``gens``."""
    mat = [list(g) for g in gens if any(g)]
    pivots = []
    for col in range(ncols):
        while True:
            nz = [r for r in mat if r[col]]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            base = nz[0]
            for r in nz[1:]:
                q = r[col] // base[col]
                for i in range(ncols):
                    r[i] -= q * base[i]
            mat = [r for r in mat if any(r)]
        nz = [r for r in mat if r[col]]
        if nz:
            row = nz[0]
            if row[col] < 0:
                row = [-a for a in row]
            pivots.append((col, row))
            mat = [r for r in mat if not r[col] and any(r)]
    # Reduce entries above each pivot into [0, pivot).
    for idx, (col, row) in enumerate(pivots):
        for jdx in range(idx):
            other = pivots[jdx][1]
            q = other[col] // row[col]
            for i in range(ncols):
                other[i] -= q * row[i]
    return [tuple(row) for _, row in pivots]


class ScalarExtendedMap:
    """Mahler expansion of a certified map over a binomial ring."""

    def __init__(self, certificate: PolynomialCertificate, ring):
        for attr in ("binom", "from_int"):
            if not hasattr(ring, attr):
                raise RingUnsupported(f"ring {ring!r} lacks {attr}")
        self.certificate = certificate
        self.ring = ring

    def __call__(self, xs):
        cert = self.certificate
        xs = tuple(xs)
        if len(xs) != cert.map.arity_in:
            raise ArityMismatch(
                f"expected {cert.map.arity_in} coordinates, got {len(xs)}"
            )
        ring = self.ring
        totals = [ring.from_int(0) for _ in range(cert.map.arity_out)]
        for k, a_k in cert.table.coefficients.items():
            w = ring.from_int(1)
            for xi, ki in zip(xs, k):
                w = w * ring.binom(xi, ki)
            for j, a in enumerate(a_k):
                totals[j] = totals[j] + w * ring.from_int(a)
        return tuple(totals)


def extend_scalars(cert: PolynomialCertificate, ring) -> ScalarExtendedMap:
    """f_R(x) = sum_k a_k prod_i binom_R(x_i, k_i); agrees with f on Z points."""
    ext = ScalarExtendedMap(cert, ring)
    for x in itertools.product(range(cert.box + 1), repeat=cert.map.arity_in):
        expected = cert.map(x)
        got = ext(tuple(ring.from_int(c) for c in x))
        if got != tuple(ring.from_int(c) for c in expected):
            raise CertificateInvalid(
                f"scalar extension disagrees with f at integer point {x}"
            )
    return ext
