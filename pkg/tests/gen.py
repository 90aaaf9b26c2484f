"""Seeded random inputs shared by the property and acceptance suites."""

import random

from frankl_cert import SetDistribution, canonicalize, union_closure


def random_distribution(rng: random.Random, max_n: int = 6) -> SetDistribution:
    n = rng.randint(1, max_n)
    k = rng.randint(1, min(1 << n, 24))
    support = rng.sample(range(1 << n), k)
    weights = {m: rng.random() + 1e-3 for m in support}
    return SetDistribution.from_mapping(n, weights, normalize=True)


def random_order(rng: random.Random, n: int) -> list[int]:
    order = list(range(1, n + 1))
    rng.shuffle(order)
    return order


def random_family(rng: random.Random, n: int = 3, min_size: int = 1):
    k = rng.randint(min_size, 1 << n)
    masks = rng.sample(range(1 << n), k)
    return canonicalize([[i + 1 for i in range(n) if m >> i & 1] for m in masks], n)


def random_union_closed(rng: random.Random, n: int = 3):
    return union_closure(random_family(rng, n, min_size=1))


def distributions(seed: int = 2024, count: int = 500, max_n: int = 6):
    rng = random.Random(seed)
    return [random_distribution(rng, max_n) for _ in range(count)]
