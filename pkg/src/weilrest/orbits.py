"""Orbits of a Galois group acting on label functions G/H -> {1..n}.

The action is (rho . alpha)(sigma) = alpha(rho^-1 sigma), realized on coset
positions through CosetSpace.translate.  Functions are encoded as base-n
integers whose ordering matches lexicographic ordering of the value vectors,
so ascending-seed discovery yields canonical (lex-least) representatives for
free.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapError, ValidationError
from .groups import CosetSpace, FiniteGroup, Subgroup

DEFAULT_ENUMERATION_CAP = 10**7


class LengthMismatch(ValidationError):
    code = "length_mismatch"


class EnumerationCapExceeded(CapError):
    code = "enumeration_cap_exceeded"


@dataclass(frozen=True)
class LabelFunction:
    """Values in 1..n indexed by coset position."""

    values: tuple[int, ...]
    n: int

    def __post_init__(self):
        if any(not 1 <= v <= self.n for v in self.values):
            raise ValidationError(f"labels must lie in 1..{self.n}")


@dataclass(frozen=True)
class Orbit:
    canonical_rep: LabelFunction
    size: int
    stabilizer: Subgroup


@dataclass(frozen=True)
class OrbitSet:
    group: FiniteGroup
    cs: CosetSpace
    n: int
    orbits: tuple[Orbit, ...]

    def __len__(self) -> int:
        return len(self.orbits)


def _check_length(cs: CosetSpace, alpha: LabelFunction) -> None:
    if len(alpha.values) != len(cs):
        raise LengthMismatch(
            f"label function has length {len(alpha.values)}, expected {len(cs)}"
        )


def act(group: FiniteGroup, cs: CosetSpace, rho: int, alpha: LabelFunction) -> LabelFunction:
    """(rho . alpha) at position p = alpha at the position of rho^-1 (coset p)."""
    _check_length(cs, alpha)
    ginv = group.inv[rho]
    vals = alpha.values
    return LabelFunction(
        tuple(vals[cs.translate(ginv, p)] for p in range(len(cs))), alpha.n
    )


def stabilizer(group: FiniteGroup, cs: CosetSpace, alpha: LabelFunction) -> Subgroup:
    """{rho in G : rho . alpha = alpha} as a Subgroup."""
    _check_length(cs, alpha)
    members = [
        g for g in group.elements() if act(group, cs, g, alpha).values == alpha.values
    ]
    return Subgroup(group, members, validate=group.order <= 1024)


def _inverse_rows(group: FiniteGroup, cs: CosetSpace):
    # row for g maps position p to the position holding (g . alpha)'s source,
    # i.e. the row of g^-1 under the plain coset action.
    return [cs.action_row(group.inv[g]) for g in group.elements()]


def orbits(
    group: FiniteGroup,
    cs: CosetSpace,
    n: int,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> OrbitSet:
    """Full orbit partition of the n^[G:H] label functions, canonically ordered."""
    if n < 1:
        raise ValidationError(f"alphabet size must be >= 1, got {n}")
    d = len(cs)
    total = n**d
    if total > cap:
        raise EnumerationCapExceeded(
            f"{n}^{d} = {total} label functions exceed the cap {cap}; "
            "burnside_count still provides the orbit count"
        )
    rows = _inverse_rows(group, cs)
    powers = [n ** (d - 1 - p) for p in range(d)]
    validate_stab = group.order <= 1024

    visited = bytearray(total)
    found = []
    order = group.order
    for seed in range(total):
        if visited[seed]:
            continue
        vals = _decode(seed, n, d)
        member_codes = set()
        stab = []
        for g in range(order):
            row = rows[g]
            code = 0
            for p in range(d):
                code += (vals[row[p]] - 1) * powers[p]
            member_codes.add(code)
            if code == seed:
                stab.append(g)
        for code in member_codes:
            visited[code] = 1
        rep = LabelFunction(tuple(vals), n)
        sub = Subgroup(group, stab, validate=validate_stab)
        orbit = Orbit(rep, len(member_codes), sub)
        if orbit.size * sub.order != order:
            raise AssertionError("orbit-stabilizer identity violated")
        found.append(orbit)
    if sum(o.size for o in found) != total:
        raise AssertionError("orbits do not partition the function set")
    return OrbitSet(group, cs, n, tuple(found))


def _decode(code: int, n: int, d: int):
    vals = [0] * d
    for p in range(d - 1, -1, -1):
        code, r = divmod(code, n)
        vals[p] = r + 1
    return vals


def burnside_count(group: FiniteGroup, cs: CosetSpace, n: int) -> int:
    """(1/|G|) sum over rho of n^{cycles of rho on coset positions}."""
    if n < 1:
        raise ValidationError(f"alphabet size must be >= 1, got {n}")
    total = 0
    d = len(cs)
    for g in group.elements():
        row = cs.action_row(g)
        seen = [False] * d
        cycles = 0
        for start in range(d):
            if seen[start]:
                continue
            cycles += 1
            p = start
            while not seen[p]:
                seen[p] = True
                p = row[p]
        total += n**cycles
    count, remainder = divmod(total, group.order)
    assert remainder == 0, "Burnside sum must be divisible by |G|"
    return count
