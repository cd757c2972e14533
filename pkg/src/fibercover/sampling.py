"""Seeded random instances for property runs and the ``check-claims`` command."""

from __future__ import annotations

import random
from dataclasses import dataclass

from fibercover.covers import BranchedCoverSpec, Permutation, canonical_order, is_connected, validate


def random_points(rng: random.Random, count: int, span: int = 6) -> list[complex]:
    """``count`` distinct Gaussian integers with coordinates in ``[-span, span]``."""
    pts: set[complex] = set()
    while len(pts) < count:
        pts.add(complex(rng.randint(-span, span), rng.randint(-span, span)))
    return canonical_order(pts)


def random_permutation(rng: random.Random, n: int, *, non_identity: bool = True) -> Permutation:
    while True:
        images = list(range(n))
        rng.shuffle(images)
        p = Permutation(tuple(images))
        if not (non_identity and p.is_identity()):
            return p


def permutation_with_cycle_lengths(rng: random.Random, lengths: list[int]) -> Permutation:
    n = sum(lengths)
    order = list(range(n))
    rng.shuffle(order)
    images = list(range(n))
    pos = 0
    for m in lengths:
        cyc = order[pos:pos + m]
        for k, a in enumerate(cyc):
            images[a] = cyc[(k + 1) % m]
        pos += m
    return Permutation(tuple(images))


def random_multiple_partition(rng: random.Random, n: int, k: int) -> list[int]:
    """Random composition of ``n`` into parts that are multiples of ``k`` (``k`` divides ``n``)."""
    parts = []
    left = n // k
    while left:
        m = rng.randint(1, left)
        parts.append(m * k)
        left -= m
    return parts


def random_connected_cover(rng: random.Random, degree: int, points: list[complex]) -> BranchedCoverSpec:
    if degree == 1:
        return BranchedCoverSpec(1)
    while True:
        perms = [random_permutation(rng, degree) for _ in points]
        spec = BranchedCoverSpec(degree, tuple(points), tuple(perms))
        if is_connected(spec):
            return validate(spec)


@dataclass(frozen=True)
class FiberPair:
    cover1: BranchedCoverSpec
    cover2: BranchedCoverSpec


def random_fiber_pair(rng: random.Random, max_degree: int = 6, max_points: int = 5) -> FiberPair:
    """Two connected covers of degree in ``[2, max_degree]`` on overlapping random branch sets."""
    while True:
        n1, n2 = rng.randint(2, max_degree), rng.randint(2, max_degree)
        pool = random_points(rng, max_points + 2)
        a1 = sorted(rng.sample(pool, rng.randint(1, max_points)), key=lambda z: (z.real, z.imag))
        a2 = sorted(rng.sample(pool, rng.randint(1, max_points)), key=lambda z: (z.real, z.imag))
        # few branch points rarely give a transitive group; resample until both covers connect
        for _ in range(50):
            try:
                c1 = _try_connected(rng, n1, a1)
                c2 = _try_connected(rng, n2, a2)
            except _Retry:
                continue
            return FiberPair(c1, c2)


class _Retry(Exception):
    pass


def _try_connected(rng: random.Random, degree: int, points: list[complex], attempts: int = 200) -> BranchedCoverSpec:
    for _ in range(attempts):
        perms = [random_permutation(rng, degree) for _ in points]
        spec = BranchedCoverSpec(degree, tuple(points), tuple(perms))
        if is_connected(spec):
            return validate(spec)
    raise _Retry


def random_connectedness_instance(rng: random.Random, max_degree: int = 6, max_points: int = 5) -> FiberPair:
    """A pair meeting the connectedness hypotheses.

    The second branch set lies inside the first, and over each of its points
    every cycle of both monodromies has length divisible by a common ``k >= 2``,
    so every point above it is singular.
    """
    while True:
        k = rng.choice([2, 3])
        mult = [m for m in range(k, max_degree + 1, k)]
        n1, n2 = rng.choice(mult), rng.choice(mult)
        a1 = random_points(rng, rng.randint(1, max_points))
        a2 = sorted(rng.sample(a1, rng.randint(1, len(a1))), key=lambda z: (z.real, z.imag))
        shared = set(a2)
        for _ in range(200):
            perms1 = [permutation_with_cycle_lengths(rng, random_multiple_partition(rng, n1, k))
                      if a in shared else random_permutation(rng, n1) for a in a1]
            perms2 = [permutation_with_cycle_lengths(rng, random_multiple_partition(rng, n2, k))
                      for _ in a2]
            c1 = BranchedCoverSpec(n1, tuple(a1), tuple(perms1))
            c2 = BranchedCoverSpec(n2, tuple(a2), tuple(perms2))
            if is_connected(c1) and is_connected(c2):
                return FiberPair(validate(c1), validate(c2))
