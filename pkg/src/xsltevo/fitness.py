"""Vector fitness: (deletions, additions, length), minimized lexicographically."""

from __future__ import annotations

import sys
from typing import NamedTuple

from .exceptions import TransformOverflow
from .xslt import transform_lines


class FitnessVector(NamedTuple):
    deletions: int
    additions: int
    length: int

    @property
    def is_solution(self) -> bool:
        return self.deletions == 0 and self.additions == 0

    def __str__(self):
        return f"deletions={self.deletions} additions={self.additions} length={self.length}"


WORST = FitnessVector(sys.maxsize, sys.maxsize, sys.maxsize)


def compare(a: FitnessVector, b: FitnessVector) -> int:
    """-1 if ``a`` is better than ``b``, 1 if worse, 0 if equal."""
    a, b = tuple(a), tuple(b)
    return (a > b) - (a < b)


def lcs_length(a, b) -> int:
    """Length of a longest common subsequence, bit-parallel over ``b``.

    One bit per position of ``b``; each element of ``a`` costs a handful of
    big-integer operations.
    """
    if not a or not b:
        return 0
    masks = {}
    for j, item in enumerate(b):
        masks[item] = masks.get(item, 0) | (1 << j)
    full = (1 << len(b)) - 1
    v = full
    for item in a:
        m = masks.get(item)
        if m is None:
            continue
        u = v & m
        v = ((v + u) | (v - u)) & full
    return len(b) - v.bit_count()


def line_diff(obtained, target) -> tuple[int, int]:
    """Deletions and additions turning ``obtained`` into ``target``."""
    common = lcs_length(obtained, target)
    return len(obtained) - common, len(target) - common


class LineTarget:
    """Target lines with the bit masks precomputed, for repeated diffs."""

    def __init__(self, lines):
        self.lines = list(lines)
        self.masks = {}
        for j, item in enumerate(self.lines):
            self.masks[item] = self.masks.get(item, 0) | (1 << j)
        self.full = (1 << len(self.lines)) - 1

    def __len__(self):
        return len(self.lines)

    def diff(self, obtained) -> tuple[int, int]:
        masks = self.masks
        full = v = self.full
        for item in obtained:
            m = masks.get(item)
            if m is not None:
                u = v & m
                v = ((v + u) | (v - u)) & full
        common = len(self.lines) - v.bit_count()
        return len(obtained) - common, len(self.lines) - common


def evaluate(genome, doc, target_lines, limits=None) -> FitnessVector:
    """Fitness of ``genome`` (or a bare stylesheet) on ``doc`` against ``target_lines``.

    Overflowing transforms get :data:`WORST`.
    """
    from .genome import genome_size

    target = target_lines if isinstance(target_lines, LineTarget) else LineTarget(target_lines)
    try:
        obtained = transform_lines(getattr(genome, "sheet", genome), doc, limits)
    except TransformOverflow:
        return WORST
    d, a = target.diff(obtained)
    return FitnessVector(d, a, genome_size(genome))
