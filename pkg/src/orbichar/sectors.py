"""Finite-group machinery and sector-sum characteristics for global quotients.

A quotient of a manifold by a finite group decomposes its sectors over
conjugacy classes of homomorphisms into the group; each class contributes
the Euler characteristic of the fixed set of its image divided by the
centralizer order.  Manifolds are never represented here: a
FixedPointCharacter records the fixed-set Euler characteristic per
subgroup, which is all the sector sum needs.

This module doubles as an independent oracle for the closed-form
characteristics in `core`: the two are compared in the test suite on
rotation actions on the sphere.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd

from .core import (
    FgAbelian,
    FreeGroup,
    GammaDescriptor,
    MirroredCylinder,
    Presented,
    abelianize,
    chi_es_mirrored,
    parse_word,
)

DEFAULT_HOM_BUDGET = 10**7
BUDGET_ENV_VAR = "ORBICHAR_HOM_BUDGET"


class HomBudgetExceeded(RuntimeError):
    """Hom enumeration would exceed the configured table-lookup budget."""


class FixedPointDataError(KeyError):
    """A required subgroup is missing from the fixed-point data."""


def _hom_budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    return int(os.environ.get(BUDGET_ENV_VAR, DEFAULT_HOM_BUDGET))


# ---------------------------------------------------------------------------
# Finite groups as multiplication tables
# ---------------------------------------------------------------------------

class FiniteGroup:
    """Explicit finite group: elements 0..order-1 with a multiplication table.

    The table is validated on construction (closure, identity, inverses,
    associativity) and immutable afterwards.
    """

    __slots__ = ("order", "table", "identity", "inverse")

    def __init__(self, table):
        rows = tuple(tuple(row) for row in table)
        order = len(rows)
        if order == 0 or any(len(row) != order for row in rows):
            raise ValueError("multiplication table must be square and nonempty")
        for row in rows:
            for entry in row:
                if not isinstance(entry, int) or not 0 <= entry < order:
                    raise ValueError(f"table entry {entry!r} out of range")
        identity = None
        for e in range(order):
            if all(rows[e][x] == x == rows[x][e] for x in range(order)):
                identity = e
                break
        if identity is None:
            raise ValueError("table has no identity element")
        inverse = [None] * order
        for a in range(order):
            for b in range(order):
                if rows[a][b] == identity and rows[b][a] == identity:
                    inverse[a] = b
                    break
            if inverse[a] is None:
                raise ValueError(f"element {a} has no inverse")
        for a in range(order):
            for b in range(order):
                ab = rows[a][b]
                for c in range(order):
                    if rows[ab][c] != rows[a][rows[b][c]]:
                        raise ValueError(f"table is not associative at ({a},{b},{c})")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "table", rows)
        object.__setattr__(self, "identity", identity)
        object.__setattr__(self, "inverse", tuple(inverse))

    def __setattr__(self, name, value):
        raise AttributeError("FiniteGroup is immutable")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def conjugate(self, g: int, x: int) -> int:
        return self.table[self.table[g][x]][self.inverse[g]]

    def power(self, x: int, exponent: int) -> int:
        if exponent < 0:
            x, exponent = self.inverse[x], -exponent
        if exponent > self.order:
            exponent %= self.element_order(x)
        out = self.identity
        for _ in range(exponent):
            out = self.table[out][x]
        return out

    def element_order(self, x: int) -> int:
        out, n = x, 1
        while out != self.identity:
            out = self.table[out][x]
            n += 1
        return n

    def subgroup_closure(self, elements) -> frozenset[int]:
        """Smallest subgroup containing the given elements (table saturation).

        In a finite group the words in the generators already form a
        subgroup, so a breadth-first closure under right multiplication
        by the generators suffices.
        """
        gens = list(set(elements))
        closed = {self.identity}
        frontier = [self.identity]
        while frontier:
            new = []
            for a in frontier:
                for g in gens:
                    ag = self.table[a][g]
                    if ag not in closed:
                        closed.add(ag)
                        new.append(ag)
            frontier = new
        return frozenset(closed)

    def to_json(self) -> dict:
        return {"order": self.order, "table": [list(row) for row in self.table]}

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteGroup":
        table = obj["table"]
        if "order" in obj and obj["order"] != len(table):
            raise ValueError("declared order does not match the table")
        return cls(table)


def cyclic_group(n: int) -> FiniteGroup:
    """Z/nZ; element i is the i-th power of the generator."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)])


def dihedral_group(n: int) -> FiniteGroup:
    """Dihedral group of order 2n: indices 0..n-1 are the rotations r^i,
    indices n..2n-1 are the reflections s*r^i."""
    if n < 1:
        raise ValueError(f"rotation count must be >= 1, got {n}")
    size = 2 * n
    table = [[0] * size for _ in range(size)]
    for i in range(n):
        for j in range(n):
            table[i][j] = (i + j) % n
            table[i][j + n] = n + (j - i) % n
            table[i + n][j] = n + (i + j) % n
            table[i + n][j + n] = (j - i) % n
    return FiniteGroup(table)


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    """Direct product; element (x, y) has index x * |b| + y."""
    nb = b.order
    size = a.order * nb
    table = [
        [a.table[x1][x2] * nb + b.table[y1][y2] for x2 in range(a.order) for y2 in range(nb)]
        for x1 in range(a.order)
        for y1 in range(nb)
    ]
    return FiniteGroup(table)


def group_by_name(name: str) -> FiniteGroup:
    """Builtin constructors: "C6", "D10" (dihedral of order 10), "C2xC3"."""
    factors = []
    for part in name.split("x"):
        part = part.strip()
        if part.startswith("C") and part[1:].isdigit():
            factors.append(cyclic_group(int(part[1:])))
        elif part.startswith("D") and part[1:].isdigit():
            order = int(part[1:])
            if order % 2 != 0 or order < 2:
                raise ValueError(f"dihedral group order must be even, got {part!r}")
            factors.append(dihedral_group(order // 2))
        else:
            raise ValueError(f"unknown group name {part!r}")
    group = factors[0]
    for factor in factors[1:]:
        group = direct_product(group, factor)
    return group


# ---------------------------------------------------------------------------
# Homomorphism enumeration and conjugacy classes
# ---------------------------------------------------------------------------

def enumerate_homs(
    gamma: GammaDescriptor, group: FiniteGroup, budget: int | None = None
) -> list[tuple[int, ...]]:
    """All homomorphisms from the described group into the finite group,
    as tuples of generator images.

    Free generators can map anywhere; abelian descriptors require pairwise
    commuting images and kill generator torsion; finite presentations are
    checked relator by relator against the table.  The search space
    |G|**generators is capped by the budget (parameter,
    ORBICHAR_HOM_BUDGET, or 10**7).
    """
    if isinstance(gamma, Presented):
        n_gens = len(gamma.generators)
    elif isinstance(gamma, FreeGroup):
        n_gens = gamma.rank
    elif isinstance(gamma, FgAbelian):
        n_gens = gamma.rank + len(gamma.torsion)
    else:
        raise TypeError(f"unsupported group descriptor: {gamma!r}")
    cap = _hom_budget(budget)
    if group.order**n_gens > cap:
        raise HomBudgetExceeded(
            f"{group.order}**{n_gens} image tuples exceed the budget of {cap}"
        )
    if n_gens == 0:
        return [()]

    if isinstance(gamma, FreeGroup):
        return list(product(range(group.order), repeat=n_gens))

    if isinstance(gamma, Presented):
        relators = [parse_word(w, gamma.generators) for w in gamma.relators]
        homs = []
        for images in product(range(group.order), repeat=n_gens):
            ok = True
            for word in relators:
                value = group.identity
                for index, exp in word:
                    value = group.mul(value, group.power(images[index], exp))
                if value != group.identity:
                    ok = False
                    break
            if ok:
                homs.append(images)
        return homs

    candidates = [tuple(range(group.order))] * gamma.rank
    for torsion in gamma.torsion:
        candidates.append(
            tuple(x for x in range(group.order) if group.power(x, torsion) == group.identity)
        )

    homs: list[tuple[int, ...]] = []

    def extend(prefix: tuple[int, ...]):
        position = len(prefix)
        if position == n_gens:
            homs.append(prefix)
            return
        for x in candidates[position]:
            if all(group.mul(x, y) == group.mul(y, x) for y in prefix):
                extend(prefix + (x,))

    extend(())
    return homs


@dataclass(frozen=True)
class HomClass:
    """Conjugacy class of homomorphisms under simultaneous conjugation."""

    representative: tuple[int, ...]
    size: int
    centralizer_order: int
    image: frozenset[int]


def hom_classes(
    gamma: GammaDescriptor, group: FiniteGroup, budget: int | None = None
) -> list[HomClass]:
    """Partition the homomorphisms into conjugacy classes.

    The centralizer of a class is the stabilizer of any representative
    tuple; class size times centralizer order always equals the group
    order (checked).
    """
    homs = enumerate_homs(gamma, group, budget)
    remaining = set(homs)
    classes = []
    while remaining:
        rep = min(remaining)
        orbit = set()
        stabilizer = 0
        for g in range(group.order):
            conjugated = tuple(group.conjugate(g, x) for x in rep)
            orbit.add(conjugated)
            if conjugated == rep:
                stabilizer += 1
        if len(orbit) * stabilizer != group.order:
            raise RuntimeError("orbit-stabilizer mismatch in conjugacy computation")
        remaining -= orbit
        classes.append(
            HomClass(
                representative=rep,
                size=len(orbit),
                centralizer_order=stabilizer,
                image=group.subgroup_closure(rep),
            )
        )
    classes.sort(key=lambda cls: cls.representative)
    return classes


# ---------------------------------------------------------------------------
# Fixed-point data and the sector sum
# ---------------------------------------------------------------------------

class FixedPointCharacter:
    """Euler characteristic of the fixed set, per subgroup.

    Keys are subgroups given as frozen sets of element indices; the data
    must cover every subgroup generated by the images of the homomorphisms
    being summed over.  chi_top is not monotone in the subgroup, so no
    consistency between nested subgroups is imposed.
    """

    __slots__ = ("_chars",)

    def __init__(self, chars):
        normalized = {}
        for subgroup, chi in dict(chars).items():
            normalized[frozenset(subgroup)] = int(chi)
        self._chars = normalized

    def chi(self, subgroup: frozenset[int]) -> int:
        try:
            return self._chars[frozenset(subgroup)]
        except KeyError:
            raise FixedPointDataError(
                f"no fixed-point value for subgroup {sorted(subgroup)}"
            ) from None

    def subgroups(self) -> list[frozenset[int]]:
        return sorted(self._chars, key=sorted)

    def to_json(self) -> list[dict]:
        return [
            {"subgroup": sorted(subgroup), "chi": chi}
            for subgroup, chi in sorted(self._chars.items(), key=lambda kv: sorted(kv[0]))
        ]

    @classmethod
    def from_json(cls, entries) -> "FixedPointCharacter":
        return cls({frozenset(entry["subgroup"]): entry["chi"] for entry in entries})


def chi_gamma_quotient(
    group: FiniteGroup,
    fixed: FixedPointCharacter,
    gamma: GammaDescriptor,
    budget: int | None = None,
) -> Fraction:
    """Characteristic of the sectors of a finite quotient.

    Computed twice, once as the sum over conjugacy classes of
    chi(fixed set of the image) / centralizer order, and once as the
    average over all homomorphisms of chi(fixed set); the two must agree
    exactly.
    """
    by_classes = Fraction(0)
    for cls in hom_classes(gamma, group, budget):
        by_classes += Fraction(fixed.chi(cls.image), cls.centralizer_order)
    total = 0
    for hom in enumerate_homs(gamma, group, budget):
        total += fixed.chi(group.subgroup_closure(hom))
    by_average = Fraction(total, group.order)
    if by_classes != by_average:
        raise RuntimeError(
            f"sector sums disagree: {by_classes} by classes, {by_average} by average"
        )
    return by_classes


def rotation_sphere_action(n: int, step: int) -> tuple[FiniteGroup, FixedPointCharacter]:
    """Z/n acting on the sphere, the generator rotating by 2*pi*step/n.

    Every subgroup fixes either the whole sphere (when it lies in the
    kernel of the action) or exactly the two poles; the fixed-set Euler
    characteristic is 2 in both cases, recorded for every subgroup of Z/n.
    """
    if n < 1:
        raise ValueError(f"group order must be >= 1, got {n}")
    if not 1 <= step < n:
        raise ValueError(f"rotation step must satisfy 1 <= step < {n}, got {step}")
    group = cyclic_group(n)
    chars = {}
    for d in range(1, n + 1):
        if n % d == 0:
            chars[frozenset(range(0, n, n // d))] = 2
    return group, FixedPointCharacter(chars)


def rotation_kernel(n: int, step: int) -> frozenset[int]:
    """Subgroup of Z/n acting trivially under rotation by 2*pi*step/n."""
    if not 1 <= step < n:
        raise ValueError(f"rotation step must satisfy 1 <= step < {n}, got {step}")
    period = n // gcd(n, step)
    return frozenset(range(0, n, period))


# ---------------------------------------------------------------------------
# Sector sums for mirrored cylinders
# ---------------------------------------------------------------------------

def chi_gamma_mirrored(
    mc: MirroredCylinder, gamma: GammaDescriptor, budget: int | None = None
) -> Fraction:
    """Characteristic of the sectors of a mirrored cylinder.

    Beyond the identity sector, only homomorphism classes landing inside a
    corner's rotation subgroup contribute: each is a point sector weighted
    by the centralizer, which for an odd corner order n is the full
    rotation subgroup, giving 1/n.  Classes whose image contains a
    reflection correspond to circle sectors of Euler characteristic zero
    and contribute nothing; this inventory is the model assumption behind
    restricting corner orders to odd values.
    """
    ab = abelianize(gamma)
    total = chi_es_mirrored(mc)
    for n in mc.corner_orders:
        group = dihedral_group(n)
        for cls in hom_classes(ab, group, budget):
            if len(cls.image) > 1 and all(index < n for index in cls.image):
                if cls.centralizer_order != n:
                    raise RuntimeError(
                        "rotation-image class with unexpected centralizer"
                    )
                total += Fraction(1, cls.centralizer_order)
    return total
