"""Characteristic sequences and their inversion back to signatures.

The level-l characteristics of a signature determine it completely once
enough levels are known: consecutive differences of the sequence form an
exponential sum over the distinct cone orders, so an exact minimal linear
recurrence recovers the orders as integer roots of its characteristic
polynomial, and an exact linear solve recovers the multiplicities.  All
arithmetic is rational and exact; there are no tolerances anywhere.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence, Union

from .core import OrbifoldSignature, chi_level


class InvalidSequenceError(ValueError):
    """The input is provably not a characteristic sequence of any signature."""


@dataclass(frozen=True)
class InsufficientData:
    """The sequence is consistent with some signature but too short to commit."""

    reason: str


ReconstructResult = Union[OrbifoldSignature, InsufficientData]


def char_sequence(sig: OrbifoldSignature, length: int) -> list[Fraction]:
    """Characteristic values at levels 0..length, as exact Fractions."""
    if length < 0:
        raise ValueError(f"length must be nonnegative, got {length}")
    return [chi_level(sig, l) for l in range(length + 1)]


# ---------------------------------------------------------------------------
# Minimal linear recurrence over the rationals (Berlekamp-Massey)
# ---------------------------------------------------------------------------

def minimal_recurrence(seq: Sequence[Fraction | int]) -> tuple[list[Fraction], int]:
    """Shortest linear recurrence generating the whole sequence.

    Returns (coefficients, depth) with
    seq[j] == sum(coefficients[i] * seq[j-1-i] for i in range(depth))
    for every j >= depth.  The recurrence is uniquely determined by the data
    only when len(seq) >= 2 * depth.
    """
    current = [Fraction(1)]
    previous = [Fraction(1)]
    depth = 0
    shift = 1
    last_discrepancy = Fraction(1)
    for i, term in enumerate(seq):
        discrepancy = Fraction(term)
        for t in range(1, depth + 1):
            discrepancy += current[t] * seq[i - t]
        if discrepancy == 0:
            shift += 1
            continue
        update = current[:]
        scale = discrepancy / last_discrepancy
        if len(update) < len(previous) + shift:
            update.extend([Fraction(0)] * (len(previous) + shift - len(update)))
        for t, coeff in enumerate(previous):
            update[t + shift] -= scale * coeff
        if 2 * depth <= i:
            previous = current
            depth = i + 1 - depth
            last_discrepancy = discrepancy
            shift = 1
        else:
            shift += 1
        current = update
    return [-c for c in current[1 : depth + 1]], depth


def _integer_roots(coefficients: list[int]) -> list[int] | None:
    """All roots of x^d - c[0]*x^(d-1) - ... - c[d-1], if they are exactly
    d distinct integers >= 2; None otherwise."""
    depth = len(coefficients)
    constant = coefficients[-1]
    trace = coefficients[0]
    if constant == 0 or trace < 2 * depth:
        return None

    def evaluate(x: int) -> int:
        value = 1
        for c in coefficients:
            value = value * x - c
        return value

    roots: list[int] = []
    bound = trace - 2 * (depth - 1)  # remaining roots are >= 2 each
    candidate = 2
    while candidate <= bound and len(roots) < depth:
        if constant % candidate == 0 and evaluate(candidate) == 0:
            roots.append(candidate)
        candidate += 1
    if len(roots) != depth:
        return None
    return roots


def _solve_vandermonde(roots: list[int], targets: list[int]) -> list[Fraction] | None:
    """Solve sum(weights[i] * roots[i]**j) == targets[j] exactly."""
    depth = len(roots)
    matrix = [
        [Fraction(roots[i] ** j) for i in range(depth)] + [Fraction(targets[j])]
        for j in range(depth)
    ]
    for col in range(depth):
        pivot = next((r for r in range(col, depth) if matrix[r][col] != 0), None)
        if pivot is None:
            return None
        matrix[col], matrix[pivot] = matrix[pivot], matrix[col]
        for row in range(depth):
            if row != col and matrix[row][col] != 0:
                factor = matrix[row][col] / matrix[col][col]
                matrix[row] = [a - factor * b for a, b in zip(matrix[row], matrix[col])]
    return [matrix[i][depth] / matrix[i][i] for i in range(depth)]


def reconstruct(values: Sequence[Fraction | int]) -> ReconstructResult:
    """Invert a characteristic sequence back to its signature.

    The genus is read off the level-1 value; consecutive differences
    v_l = sum((m-1) * m**(l-1)) over cone orders m feed the recurrence
    fitting.  Returns InsufficientData when the data cannot pin the
    signature down (fewer than 2D differences for D distinct orders, or a
    failure that a longer consistent sequence could still repair); raises
    InvalidSequenceError when no signature at all can match.  A candidate is
    only ever returned after its full sequence reproduces the input.
    """
    values = [Fraction(v) for v in values]
    if len(values) < 2:
        raise InvalidSequenceError("need at least the level-0 and level-1 values")
    top = values[1]
    if top.denominator != 1 or top.numerator % 2 != 0 or top > 2:
        raise InvalidSequenceError("level-1 value must be an even integer <= 2")
    genus = (2 - int(top)) // 2

    diffs: list[int] = []
    for j in range(1, len(values) - 1):
        step = values[j + 1] - values[j]
        if step.denominator != 1 or step < 0:
            raise InvalidSequenceError(
                "level differences must be nonnegative integers"
            )
        diffs.append(int(step))

    length = len(values) - 1

    def verified(candidate: OrbifoldSignature) -> bool:
        return char_sequence(candidate, length) == values

    if all(d == 0 for d in diffs):
        if values[0] == values[1]:
            return OrbifoldSignature(genus)
        # cone points exist but no difference data constrains them
        gap = values[1] - values[0]  # equals sum(1 - 1/m) over cones
        if diffs:
            raise InvalidSequenceError("constant tail with nonzero cone deficit")
        if gap < 0 or 2 * gap < int(gap) + 1:
            # no integer cone count k with k/2 <= gap < k exists
            raise InvalidSequenceError("cone deficit fits no cone count")
        return InsufficientData("only the Euler-Satake value constrains the cones")

    if 0 in diffs:
        raise InvalidSequenceError("difference sequence of a signature is positive")
    for j in range(len(diffs) - 1):
        # every cone order is >= 2, so the differences at least double
        if diffs[j + 1] < 2 * diffs[j]:
            raise InvalidSequenceError("differences must at least double per level")

    coefficients, depth = minimal_recurrence(diffs)
    if len(diffs) < 2 * depth:
        return InsufficientData(
            f"{len(diffs)} differences cannot determine a depth-{depth} recurrence"
        )

    def fail() -> ReconstructResult:
        if len(diffs) >= 2 * depth + 1:
            raise InvalidSequenceError("not a valid characteristic sequence")
        return InsufficientData(
            "determined recurrence admits no signature; a longer sequence may"
        )

    if any(c.denominator != 1 for c in coefficients):
        return fail()
    roots = _integer_roots([int(c) for c in coefficients])
    if roots is None:
        return fail()
    weights = _solve_vandermonde(roots, diffs[:depth])
    if weights is None:
        return fail()
    cones: dict[int, int] = {}
    for order, weight in zip(roots, weights):
        count = weight / (order - 1)
        if count <= 0 or count.denominator != 1:
            return fail()
        cones[order] = int(count)
    candidate = OrbifoldSignature(genus, cones)
    if not verified(candidate):
        return fail()
    return candidate


# ---------------------------------------------------------------------------
# Finite enumeration of a given Euler-Satake characteristic
# ---------------------------------------------------------------------------

_SCAN_LIMIT = 1 << 16


def _factorize(n: int) -> dict[int, int]:
    factors: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                factors[p] = factors.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def _iter_final_pairs(p: int, q: int, lo: int) -> Iterator[tuple[int, int]]:
    """Ordered pairs lo <= m1 <= m2 with 1/m1 + 1/m2 == p/q exactly.

    Writes (p*m1 - q)(p*m2 - q) = q*q and walks divisors d <= q of q*q with
    d == -q mod p; used instead of a linear scan when the scan range q/p is
    large (near-exhausted sums produce ranges in the millions).
    """
    if q // p <= _SCAN_LIMIT:
        m1 = max(lo, -(-q // p))
        for m in range(m1, 2 * q // p + 1):
            num, den = p * m - q, q * m
            if num > 0 and den % num == 0:
                yield m, den // num
        return
    divisors = [1]
    for prime, exp in _factorize(q).items():
        divisors = [d * prime**e for d in divisors for e in range(2 * exp + 1)]
    for d in sorted(divisors):
        if d > q:
            break
        if (d + q) % p != 0:
            continue
        m1 = (d + q) // p
        if m1 < lo:
            continue
        yield m1, (q * q // d + q) // p


def _iter_order_tuples(k: int, p: int, q: int, lo: int) -> Iterator[tuple[int, ...]]:
    """Nondecreasing order tuples of length k >= 1 with sum(1/m) == p/q > 0."""
    if k == 1:
        if q % p == 0 and q // p >= lo:
            yield (q // p,)
        return
    if k == 2:
        for m1, m2 in _iter_final_pairs(p, q, lo):
            yield (m1, m2)
        return
    m_lo = max(lo, -(-q // p))
    m_hi = k * q // p
    for m in range(m_lo, m_hi + 1):
        num, den = p * m - q, q * m
        if num == 0:
            continue  # k - 1 further positive terms cannot sum to zero
        shrink = gcd(num, den)
        for rest in _iter_order_tuples(k - 1, num // shrink, den // shrink, m):
            yield (m,) + rest


def iter_signatures_by_chi_es(target: Fraction | int) -> Iterator[OrbifoldSignature]:
    """All signatures with the given Euler-Satake characteristic, streamed in
    canonical order (genus, cone count, order tuple).

    The solution set is always finite: the characteristic bounds the genus
    by 2 - 2g >= target, then the cone count, then each order in turn
    through the exact remaining-sum window.
    """
    target = Fraction(target)
    genus = 0
    while Fraction(2 - 2 * genus) >= target:
        count_cap_twice = 2 * (Fraction(2 - 2 * genus) - target)
        for k in range(int(count_cap_twice) + 1):
            need = target - (2 - 2 * genus - k)  # required sum of 1/order
            if k == 0:
                if need == 0:
                    yield OrbifoldSignature(genus)
                continue
            if need <= 0 or 2 * need > k:
                continue
            for orders in _iter_order_tuples(k, need.numerator, need.denominator, 2):
                yield OrbifoldSignature.from_orders(genus, *orders)
        genus += 1


def enumerate_by_chi_es(target: Fraction | int) -> list[OrbifoldSignature]:
    """Materialized form of iter_signatures_by_chi_es (may be very large)."""
    return list(iter_signatures_by_chi_es(target))


# ---------------------------------------------------------------------------
# Brute-force collision search over a bounded window
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CollisionGroup:
    """Signatures sharing one characteristic sequence through a given level."""

    values: tuple[Fraction, ...]
    signatures: tuple[OrbifoldSignature, ...]


def search_collisions(
    genus_max: int, count_max: int, order_max: int, level: int
) -> list[CollisionGroup]:
    """Group all signatures within the bounds by their characteristic
    sequence through ``level`` and return the groups of size >= 2."""
    if min(genus_max, count_max, order_max, level) < 0:
        raise ValueError("all bounds must be nonnegative")
    buckets: dict[tuple[Fraction, ...], list[OrbifoldSignature]] = defaultdict(list)

    def order_tuples(k: int, lo: int):
        if k == 0:
            yield ()
            return
        for m in range(lo, order_max + 1):
            for rest in order_tuples(k - 1, m):
                yield (m,) + rest

    for genus in range(genus_max + 1):
        for k in range(count_max + 1):
            for orders in order_tuples(k, 2):
                sig = OrbifoldSignature.from_orders(genus, *orders)
                buckets[tuple(char_sequence(sig, level))].append(sig)
    groups = [
        CollisionGroup(values, tuple(sorted(sigs, key=OrbifoldSignature.sort_key)))
        for values, sigs in buckets.items()
        if len(sigs) >= 2
    ]
    groups.sort(key=lambda grp: grp.signatures[0].sort_key())
    return groups
