# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Set partitions of {0..s-1} and the numbers that count them."""

from functools import lru_cache
from typing import Iterator, List, Tuple

from ..exceptions import ConfigurationError

SetPartition = Tuple[Tuple[int, ...], ...]


def restricted_growth_strings(s: int, sigma: int) -> Iterator[Tuple[int, ...]]:
    """Yield restricted growth strings of length ``s`` using exactly ``sigma`` labels.

    a[0] = 0 and a[k] <= max(a[:k]) + 1; strings come in lexicographic order.
    """
    labels = [0] * s

    def extend(position: int, used: int) -> Iterator[Tuple[int, ...]]:
        if position == s:
            if used == sigma:
                yield tuple(labels)
            return
        left_after = s - position - 1
        for label in range(min(used + 1, sigma)):
            now_used = used + 1 if label == used else used
            if sigma - now_used > left_after:
                continue
            labels[position] = label
            yield from extend(position + 1, now_used)

    if s == 0:
        return
    yield from extend(1, 1)


def _to_partition(labels: Tuple[int, ...], sigma: int) -> SetPartition:
    parts: List[List[int]] = [[] for _ in range(sigma)]
    for element, label in enumerate(labels):
        parts[label].append(element)
    return tuple(tuple(part) for part in parts)


@lru_cache(maxsize=None)
def partitions(s: int, sigma: int) -> Tuple[SetPartition, ...]:
    """All partitions of {0..s-1} into exactly ``sigma`` parts.

    Args:
        s: Size of the set
        sigma: Number of parts, 1 <= sigma <= s

    Returns:
        S(s, sigma) partitions in restricted-growth-string order
    """
    if s < 1 or sigma < 1 or sigma > s:
        raise ConfigurationError(f"Number of parts must be in 1..{s}, got {sigma}")
    return tuple(_to_partition(labels, sigma)
                 for labels in restricted_growth_strings(s, sigma))


@lru_cache(maxsize=None)
def stirling2(d: int, sigma: int) -> int:
    """Stirling number of the second kind S(d, sigma)."""
    if d < 0 or sigma < 0:
        raise ConfigurationError(f"Stirling arguments must be >= 0, got ({d}, {sigma})")
    if d == sigma:
        return 1
    if sigma == 0 or sigma > d:
        return 0
    return sigma * stirling2(d - 1, sigma) + stirling2(d - 1, sigma - 1)


def bell(d: int) -> int:
    """Bell number B(d), the count of all partitions of a d-element set."""
    if d < 0:
        raise ConfigurationError(f"Bell argument must be >= 0, got {d}")
    return sum(stirling2(d, sigma) for sigma in range(d + 1))
