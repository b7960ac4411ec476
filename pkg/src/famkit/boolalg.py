"""Finite fields of sets over an explicit ground set.

Sets are bit-vectors (Python ints), an algebra is stored canonically by its
atom partition, and all outputs are deterministic: atom and cell lists are
sorted by bitmask value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import (
    CapExceededError,
    GroundMismatchError,
    InputError,
    NotInAlgebraError,
)

#: Default cap on ground-set size.  Large enough for every desk-scale fixture;
#: raise it per-instance via ``GroundSet(labels, cap=...)``.
DEFAULT_GROUND_CAP = 64

#: Guard against generator blowup in :func:`generate_algebra`.
ATOM_CAP = 2**16


@dataclass(frozen=True)
class GroundSet:
    """An ordered finite set of distinct element names."""

    labels: tuple[str, ...]

    def __init__(self, labels: Iterable[str], cap: int = DEFAULT_GROUND_CAP):
        labels = tuple(str(x) for x in labels)
        if not labels:
            raise InputError("ground set must be non-empty")
        if len(set(labels)) != len(labels):
            raise InputError("ground set labels must be distinct")
        if len(labels) > cap:
            raise CapExceededError(f"ground set size {len(labels)} exceeds cap {cap}")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of_size(cls, n: int, cap: int = DEFAULT_GROUND_CAP) -> "GroundSet":
        return cls((str(i) for i in range(n)), cap=cap)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise InputError(f"unknown ground element {label!r}") from None

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"GroundSet({list(self.labels)!r})"


@dataclass(frozen=True)
class SetElem:
    """A subset of a ground set, stored as a membership bitmask."""

    bits: int
    ground: GroundSet

    def __init__(self, ground: GroundSet, bits: int):
        if bits < 0 or bits >> ground.size:
            raise InputError(f"mask {bits:#x} out of range for ground of size {ground.size}")
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "ground", ground)

    # -- constructors -------------------------------------------------

    @classmethod
    def empty(cls, ground: GroundSet) -> "SetElem":
        return cls(ground, 0)

    @classmethod
    def full(cls, ground: GroundSet) -> "SetElem":
        return cls(ground, ground.full_mask)

    @classmethod
    def singleton(cls, ground: GroundSet, index: int) -> "SetElem":
        if not 0 <= index < ground.size:
            raise InputError(f"index {index} out of range")
        return cls(ground, 1 << index)

    @classmethod
    def from_indices(cls, ground: GroundSet, indices: Iterable[int]) -> "SetElem":
        bits = 0
        for i in indices:
            if not 0 <= i < ground.size:
                raise InputError(f"index {i} out of range")
            bits |= 1 << i
        return cls(ground, bits)

    @classmethod
    def from_labels(cls, ground: GroundSet, labels: Iterable[str]) -> "SetElem":
        return cls.from_indices(ground, (ground.index_of(x) for x in labels))

    # -- set operations -----------------------------------------------

    def _check(self, other: "SetElem") -> None:
        if self.ground != other.ground:
            raise GroundMismatchError("operands live over different ground sets")

    def __and__(self, other: "SetElem") -> "SetElem":
        self._check(other)
        return SetElem(self.ground, self.bits & other.bits)

    def __or__(self, other: "SetElem") -> "SetElem":
        self._check(other)
        return SetElem(self.ground, self.bits | other.bits)

    def __sub__(self, other: "SetElem") -> "SetElem":
        self._check(other)
        return SetElem(self.ground, self.bits & ~other.bits)

    def __invert__(self) -> "SetElem":
        return SetElem(self.ground, self.ground.full_mask & ~self.bits)

    def __le__(self, other: "SetElem") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __contains__(self, index: int) -> bool:
        return bool(self.bits >> index & 1)

    def disjoint(self, other: "SetElem") -> bool:
        self._check(other)
        return self.bits & other.bits == 0

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.ground.size) if self.bits >> i & 1)

    def members(self) -> tuple[str, ...]:
        return tuple(self.ground.labels[i] for i in self.indices())

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices())

    def __repr__(self) -> str:
        return "{%s}" % ",".join(self.members())


@dataclass(frozen=True)
class Algebra:
    """A field of sets, represented canonically by its atom partition.

    An element belongs to the algebra iff it is a union of atoms, so the
    atom list determines the full (size ``2**len(atoms)``) algebra without
    enumerating it.
    """

    ground: GroundSet
    atoms: tuple[SetElem, ...]

    def __init__(self, ground: GroundSet, atoms: Sequence[SetElem]):
        atoms = tuple(sorted(atoms, key=lambda a: a.bits))
        if not atoms:
            raise InputError("algebra needs at least one atom")
        union = 0
        for a in atoms:
            if a.ground != ground:
                raise GroundMismatchError("atom over a different ground set")
            if a.is_empty:
                raise InputError("empty atom")
            if union & a.bits:
                raise InputError("atoms must be pairwise disjoint")
            union |= a.bits
        if union != ground.full_mask:
            raise InputError("atoms must cover the ground set")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def trivial(cls, ground: GroundSet) -> "Algebra":
        return cls(ground, (SetElem.full(ground),))

    @classmethod
    def power_set(cls, ground: GroundSet) -> "Algebra":
        return cls(ground, tuple(SetElem.singleton(ground, i) for i in range(ground.size)))

    @property
    def atom_count(self) -> int:
        return len(self.atoms)

    def size(self) -> int:
        """Number of elements of the algebra (``2**atom_count``)."""
        return 1 << self.atom_count

    def contains(self, b: SetElem) -> bool:
        if b.ground != self.ground:
            return False
        # b is a union of atoms iff no atom straddles it
        return all(a.bits & b.bits in (0, a.bits) for a in self.atoms)

    def require(self, b: SetElem) -> SetElem:
        if not self.contains(b):
            raise NotInAlgebraError(f"{b} is not in the algebra")
        return b

    def floor(self, b: SetElem) -> SetElem:
        """Largest algebra element contained in ``b``."""
        if b.ground != self.ground:
            raise GroundMismatchError("set over a different ground set")
        bits = 0
        for a in self.atoms:
            if a.bits & ~b.bits == 0:
                bits |= a.bits
        return SetElem(self.ground, bits)

    def ceil(self, b: SetElem) -> SetElem:
        """Smallest algebra element containing ``b``."""
        if b.ground != self.ground:
            raise GroundMismatchError("set over a different ground set")
        bits = 0
        for a in self.atoms:
            if a.bits & b.bits:
                bits |= a.bits
        return SetElem(self.ground, bits)

    def elements(self) -> Iterator[SetElem]:
        """Enumerate all ``2**atom_count`` elements (guarded by a size cap)."""
        if self.atom_count > 20:
            raise CapExceededError("refusing to enumerate an algebra with more than 2^20 elements")
        for combo in itertools.chain.from_iterable(
            itertools.combinations(self.atoms, k) for k in range(self.atom_count + 1)
        ):
            bits = 0
            for a in combo:
                bits |= a.bits
            yield SetElem(self.ground, bits)

    def __repr__(self) -> str:
        return f"Algebra(atoms={list(self.atoms)!r})"


@dataclass(frozen=True)
class Partition:
    """A finite disjoint cover of the ground set by algebra elements."""

    algebra: Algebra
    cells: tuple[SetElem, ...]

    def __init__(self, algebra: Algebra, cells: Sequence[SetElem]):
        # the empty set is never a cell: empty inputs are dropped silently
        cells = tuple(sorted((c for c in cells if not c.is_empty), key=lambda c: c.bits))
        union = 0
        for c in cells:
            if not algebra.contains(c):
                raise NotInAlgebraError(f"cell {c} not in the algebra")
            if union & c.bits:
                raise InputError("partition cells must be disjoint")
            union |= c.bits
        if union != algebra.ground.full_mask:
            raise InputError("partition cells must cover the ground set")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def of_atoms(cls, algebra: Algebra) -> "Partition":
        return cls(algebra, algebra.atoms)

    @classmethod
    def coarsest(cls, algebra: Algebra) -> "Partition":
        return cls(algebra, (SetElem.full(algebra.ground),))

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[SetElem]:
        return iter(self.cells)

    def __repr__(self) -> str:
        return f"Partition({list(self.cells)!r})"


# -- module-level operations ------------------------------------------


def generate_algebra(ground: GroundSet, generators: Sequence[SetElem]) -> Algebra:
    """Smallest field of sets over ``ground`` containing all ``generators``.

    Computed by iterative splitting: start from {X} and split every atom by
    each generator in turn, dropping empty pieces.
    """
    atoms = [ground.full_mask]
    for g in generators:
        if g.ground != ground:
            raise GroundMismatchError("generator over a different ground set")
        split: list[int] = []
        for a in atoms:
            inside = a & g.bits
            outside = a & ~g.bits
            if inside:
                split.append(inside)
            if outside:
                split.append(outside)
        atoms = split
        if len(atoms) > ATOM_CAP:
            raise CapExceededError(f"atom count exceeded cap {ATOM_CAP}")
    return Algebra(ground, tuple(SetElem(ground, a) for a in atoms))


def atoms(algebra: Algebra) -> tuple[SetElem, ...]:
    """The canonical atom list, sorted by bitmask."""
    return algebra.atoms


def contains(algebra: Algebra, b: SetElem) -> bool:
    """True iff ``b`` is a union of atoms of ``algebra``."""
    return algebra.contains(b)


def meet_partitions(p: Partition, q: Partition) -> Partition:
    """Common refinement ``{a ∩ b != 0 : a in P, b in Q}``."""
    if p.algebra != q.algebra:
        raise GroundMismatchError("partitions over different algebras")
    cells = []
    for a in p.cells:
        for b in q.cells:
            both = a.bits & b.bits
            if both:
                cells.append(SetElem(p.algebra.ground, both))
    return Partition(p.algebra, cells)


def is_refinement(q: Partition, p: Partition) -> bool:
    """True iff every cell of ``p`` is a union of cells of ``q``."""
    if p.algebra != q.algebra:
        raise GroundMismatchError("partitions over different algebras")
    for a in p.cells:
        covered = 0
        for b in q.cells:
            inter = a.bits & b.bits
            if inter == b.bits:
                covered |= b.bits
            elif inter:
                return False  # cell of q straddles a
        if covered != a.bits:
            return False
    return True


def floor_in(algebra: Algebra, b: SetElem) -> SetElem:
    """Union of atoms contained in ``b``: the largest algebra element below it."""
    return algebra.floor(b)


def ceil_in(algebra: Algebra, b: SetElem) -> SetElem:
    """Union of atoms meeting ``b``: the smallest algebra element above it."""
    return algebra.ceil(b)
