"""Exact finite-group engine on element indices 0..order-1.

Groups are value objects: equality and hashing go through the multiplication
table (or, for large permutation-backed groups, the permutation list).  All
values are immutable after construction, so everything here is safe to share
between threads.
"""

from __future__ import annotations

import itertools
from math import factorial

from .errors import CapError, ValidationError

# Above this order a permutation-backed group keeps no materialized table.
_TABLE_LIMIT = 1024

# all_subgroups and everything downstream of it stay at desk scale.
SUBGROUP_ORDER_CAP = 64

_NAMED_CAPS = {"C": 512, "S": 8, "D": 256}


class NotAssociative(ValidationError):
    code = "not_associative"


class NoIdentity(ValidationError):
    code = "no_identity"


class NoInverse(ValidationError):
    code = "no_inverse"


class UnknownName(ValidationError):
    code = "unknown_name"


class ParameterTooLarge(CapError):
    code = "parameter_too_large"


class GroupTooLarge(CapError):
    code = "group_too_large"


class NotASubgroup(ValidationError):
    code = "not_a_subgroup"


class FiniteGroup:
    """Finite group with elements 0..order-1 and an exact multiplication law."""

    def __init__(self, table=None, *, perms=None, name=None, validate=True):
        if (table is None) == (perms is None):
            raise ValidationError("give exactly one of table= or perms=")
        self.name = name
        if table is not None:
            self._table = tuple(tuple(row) for row in table)
            self._perms = None
            self.order = len(self._table)
            _check_square(self._table)
        else:
            self._perms = tuple(tuple(p) for p in perms)
            self.order = len(self._perms)
            self._index = {p: i for i, p in enumerate(self._perms)}
            if len(self._index) != self.order:
                raise ValidationError("duplicate permutations")
            self._table = self._build_table() if self.order <= _TABLE_LIMIT else None
        self.identity = self._find_identity()
        self.inv = tuple(self._find_inverse(g) for g in range(self.order))
        if validate and self._table is not None:
            _check_associative(self)

    def _build_table(self):
        idx = self._index
        return tuple(
            tuple(idx[_compose(p, q)] for q in self._perms) for p in self._perms
        )

    def mult(self, a: int, b: int) -> int:
        if self._table is not None:
            return self._table[a][b]
        return self._index[_compose(self._perms[a], self._perms[b])]

    @property
    def table(self):
        if self._table is None:
            raise GroupTooLarge(
                f"order {self.order} exceeds the table limit {_TABLE_LIMIT}"
            )
        return self._table

    def elements(self) -> range:
        return range(self.order)

    def _find_identity(self) -> int:
        # A left identity first; two-sidedness then follows from the inverse
        # and associativity checks.
        if self._perms is not None and self._table is None:
            return self._index[tuple(range(len(self._perms[0])))]
        for e in range(self.order):
            if all(self._table[e][x] == x for x in range(self.order)):
                return e
        raise NoIdentity("no row acts as the identity")

    def _find_inverse(self, g: int) -> int:
        if self._perms is not None and self._table is None:
            q = self._perms[g]
            inv = [0] * len(q)
            for i, v in enumerate(q):
                inv[v] = i
            return self._index[tuple(inv)]
        e = self.identity
        for h in range(self.order):
            if self.mult(g, h) == e and self.mult(h, g) == e:
                return h
        raise NoInverse(f"element {g} has no two-sided inverse")

    def _key(self):
        if self._table is not None:
            return ("table", self._table)
        return ("perms", self._perms)

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self._key() == other._key()

    def __hash__(self):
        cached = getattr(self, "_hash", None)
        if cached is None:
            cached = hash(self._key())
            object.__setattr__(self, "_hash", cached)
        return cached

    def __repr__(self):
        label = self.name or f"order-{self.order} group"
        return f"FiniteGroup({label})"


def _check_square(table):
    n = len(table)
    for g, row in enumerate(table):
        if len(row) != n:
            raise ValidationError(f"row {g} has length {len(row)}, expected {n}")
        for h, v in enumerate(row):
            if not isinstance(v, int) or not 0 <= v < n:
                raise ValidationError(f"entry table[{g}][{h}]={v!r} out of range")


def _check_associative(group: FiniteGroup) -> None:
    n = group.order
    table = group._table
    if n <= SUBGROUP_ORDER_CAP:
        for a in range(n):
            ra = table[a]
            for b in range(n):
                rab = table[ra[b]]
                rb = table[b]
                for c in range(n):
                    if rab[c] != ra[rb[c]]:
                        raise NotAssociative(f"witness triple ({a}, {b}, {c})")
        return
    # Light's test: associativity with one factor restricted to a generating
    # set implies full associativity once the generators close to the group.
    gens = _generating_set(group)
    for c in gens:
        for a in range(n):
            ra = table[a]
            for b in range(n):
                if table[ra[b]][c] != ra[table[b][c]]:
                    raise NotAssociative(f"witness triple ({a}, {b}, {c})")


def _generating_set(group: FiniteGroup):
    gens: list[int] = []
    reached = {group.identity}
    for g in group.elements():
        if g in reached:
            continue
        gens.append(g)
        reached = _closure(group, gens)
        if len(reached) == group.order:
            break
    return gens


def _closure(group: FiniteGroup, seed) -> frozenset:
    members = {group.identity}
    members.update(seed)
    frontier = list(members)
    while frontier:
        fresh = []
        for a in frontier:
            for b in list(members):
                for c in (group.mult(a, b), group.mult(b, a)):
                    if c not in members:
                        members.add(c)
                        fresh.append(c)
        frontier = fresh
    return frozenset(members)


def group_from_table(table, *, name=None) -> FiniteGroup:
    """Build and fully validate a group from its multiplication table."""
    return FiniteGroup(table, name=name)


def named_group(family: str, n: int) -> FiniteGroup:
    """Cn (powers of a generator), Sn (lexicographic permutations, n <= 8),
    or Dn (n rotations then n reflections)."""
    if family not in _NAMED_CAPS:
        raise UnknownName(f"unknown family {family!r}, expected one of C, S, D")
    if n < 1:
        raise ValidationError(f"parameter must be >= 1, got {n}")
    if n > _NAMED_CAPS[family]:
        raise ParameterTooLarge(f"{family}{n} exceeds the cap {family}<= {_NAMED_CAPS[family]}")
    if family == "C":
        table = [[(i + j) % n for j in range(n)] for i in range(n)]
        return FiniteGroup(table, name=f"C{n}")
    if family == "S":
        perms = list(itertools.permutations(range(n)))
        if factorial(n) <= _TABLE_LIMIT:
            index = {p: i for i, p in enumerate(perms)}
            table = [[index[_compose(p, q)] for q in perms] for p in perms]
            return FiniteGroup(table, name=f"S{n}")
        return FiniteGroup(perms=perms, name=f"S{n}")
    # Dn: indices 0..n-1 are rotations r^i, n..2n-1 are reflections r^i s,
    # with s r = r^-1 s.
    def dmult(i, j):
        ri, fi = i % n, i >= n
        rj, fj = j % n, j >= n
        rot = (ri + rj) % n if not fi else (ri - rj) % n
        return rot + (n if fi != fj else 0)

    table = [[dmult(i, j) for j in range(2 * n)] for i in range(2 * n)]
    return FiniteGroup(table, name=f"D{n}")


def direct_product(g1: FiniteGroup, g2: FiniteGroup, *, name=None) -> FiniteGroup:
    """Direct product with (a, b) encoded as a*|G2| + b."""
    n2 = g2.order
    size = g1.order * n2
    if size > _TABLE_LIMIT:
        raise ParameterTooLarge(f"product order {size} exceeds {_TABLE_LIMIT}")
    table = [
        [
            g1.mult(x // n2, y // n2) * n2 + g2.mult(x % n2, y % n2)
            for y in range(size)
        ]
        for x in range(size)
    ]
    label = name or f"{g1.name or 'G1'}x{g2.name or 'G2'}"
    return FiniteGroup(table, name=label)


def _compose(p, q):
    # (p*q)(x) = p(q(x))
    return tuple(p[v] for v in q)


class Subgroup:
    """Subgroup given by its sorted member indices inside a parent group."""

    def __init__(self, parent: FiniteGroup, members, *, validate=True):
        self.parent = parent
        self.members = tuple(sorted(set(members)))
        if not self.members:
            raise NotASubgroup("empty member set")
        if any(not 0 <= m < parent.order for m in self.members):
            raise NotASubgroup("member index out of range")
        if validate:
            self._validate()

    def _validate(self):
        parent, members = self.parent, self.members
        memberset = frozenset(members)
        if parent.identity not in memberset:
            raise NotASubgroup("identity missing")
        if parent.order % len(members) != 0:
            raise NotASubgroup(
                f"size {len(members)} does not divide group order {parent.order}"
            )
        for g in members:
            if parent.inv[g] not in memberset:
                raise NotASubgroup(f"missing inverse of {g}")
        if len(members) <= 1000:
            for a in members:
                for b in members:
                    if parent.mult(a, b) not in memberset:
                        raise NotASubgroup(f"not closed: {a}*{b}")
        else:
            # Too big for the quadratic check; spot-check products.
            step = max(1, len(members) // 64)
            sample = members[::step]
            for a in sample:
                for b in sample:
                    if parent.mult(a, b) not in memberset:
                        raise NotASubgroup(f"not closed: {a}*{b}")

    @property
    def order(self) -> int:
        return len(self.members)

    def index(self) -> int:
        return self.parent.order // self.order

    def __contains__(self, g: int) -> bool:
        return g in self._memberset

    @property
    def _memberset(self):
        return frozenset(self.members)

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.parent == other.parent
            and self.members == other.members
        )

    def __hash__(self):
        return hash((self.parent, self.members))

    def __repr__(self):
        return f"Subgroup{self.members}"


def trivial_subgroup(group: FiniteGroup) -> Subgroup:
    return Subgroup(group, (group.identity,), validate=False)


def full_subgroup(group: FiniteGroup) -> Subgroup:
    return Subgroup(group, range(group.order), validate=False)


def all_subgroups(group: FiniteGroup) -> list[Subgroup]:
    """Every subgroup exactly once, sorted by (size, members).

    Cyclic subgroups seed the search; joining pairs to closure-fixpoint then
    reaches every subgroup, since each one is a join of cyclic ones.
    """
    if group.order > SUBGROUP_ORDER_CAP:
        raise GroupTooLarge(f"order {group.order} exceeds cap {SUBGROUP_ORDER_CAP}")
    found = {frozenset((group.identity,))}
    for g in group.elements():
        found.add(_closure(group, (g,)))
    frontier = set(found)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in found:
                if a <= b or b <= a:
                    continue
                j = _closure(group, a | b)
                if j not in found and j not in fresh:
                    fresh.add(j)
        found |= fresh
        frontier = fresh
    subs = [Subgroup(group, s, validate=False) for s in found]
    subs.sort(key=lambda s: (s.order, s.members))
    return subs


class CosetSpace:
    """Left cosets of H in G, ordered by minimal element index."""

    def __init__(self, parent: FiniteGroup, subgroup: Subgroup):
        if subgroup.parent != parent:
            raise NotASubgroup("subgroup belongs to a different group")
        self.parent = parent
        self.subgroup = subgroup
        cosets = []
        reps = []
        position = [-1] * parent.order
        for g in parent.elements():
            if position[g] >= 0:
                continue
            coset = frozenset(parent.mult(g, h) for h in subgroup.members)
            p = len(cosets)
            for x in coset:
                position[x] = p
            cosets.append(coset)
            reps.append(g)
        self.cosets = tuple(cosets)
        self.reps = tuple(reps)
        self.position = tuple(position)

    def __len__(self) -> int:
        return len(self.cosets)

    def translate(self, g: int, p: int) -> int:
        """Position of g * (coset p)."""
        return self.position[self.parent.mult(g, self.reps[p])]

    def action_row(self, g: int):
        return tuple(self.translate(g, p) for p in range(len(self)))

    def __repr__(self):
        return f"CosetSpace({len(self)} cosets of order-{self.subgroup.order} subgroup)"


def left_cosets(group: FiniteGroup, subgroup: Subgroup) -> CosetSpace:
    return CosetSpace(group, subgroup)


def coset_action(group: FiniteGroup, cs: CosetSpace):
    """Permutation table: row g sends the position of tH to the position of g*tH."""
    if cs.parent != group:
        raise NotASubgroup("coset space was not built from this group")
    return tuple(cs.action_row(g) for g in group.elements())


def conjugate_members(group: FiniteGroup, members, g: int):
    ginv = group.inv[g]
    return frozenset(group.mult(group.mult(g, s), ginv) for s in members)


def are_conjugate(group: FiniteGroup, s1: Subgroup, s2: Subgroup) -> bool:
    for sub in (s1, s2):
        if sub.parent != group:
            raise NotASubgroup("subgroup belongs to a different group")
    if s1.order != s2.order:
        return False
    target = s2._memberset
    return any(
        conjugate_members(group, s1.members, g) == target for g in group.elements()
    )


def canonical_conjugate(group: FiniteGroup, sub: Subgroup) -> Subgroup:
    """The conjugate of ``sub`` with lexicographically least member tuple."""
    if sub.parent != group:
        raise NotASubgroup("subgroup belongs to a different group")
    best = min(
        tuple(sorted(conjugate_members(group, sub.members, g)))
        for g in group.elements()
    )
    return Subgroup(group, best, validate=False)
