"""Core model: finite labelled prime event structures.

Events are dense ids 0..n-1.  Causality is stored as the strict order
(transitively closed); conflict as a symmetric irreflexive relation closed
under inheritance along causality.  Both relations live in per-event
bitmasks, which keeps every downstream computation (configurations,
transition systems, canonization) cheap at desk scale.
"""

from __future__ import annotations

import enum
import sys
from dataclasses import dataclass
from functools import cached_property

from .canon import canon_encode
from .errors import (
    CausalityConflictOverlap,
    CycleInCausality,
    DanglingId,
    SelfConflict,
)

Label = str


class StructureClass(enum.Enum):
    PES = "PES"
    CS = "CS"
    EES = "EES"


def _bits(mask):
    """Iterate the set bit positions of mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class EventStructure:
    """Immutable event structure; construct through :func:`build`.

    labels[e] is the action of event e; down[e] the bitmask of its strict
    causal predecessors (closed); conflicts[e] the bitmask of events in
    conflict with e (closed under inheritance).
    """

    labels: tuple[Label, ...]
    down: tuple[int, ...]
    conflicts: tuple[int, ...]

    @property
    def n(self):
        return len(self.labels)

    @property
    def all_mask(self):
        return (1 << self.n) - 1

    @cached_property
    def up(self):
        """Bitmask of strict causal successors per event."""
        up = [0] * self.n
        for e in range(self.n):
            for p in _bits(self.down[e]):
                up[p] |= 1 << e
        return tuple(up)

    @cached_property
    def minimal_events(self):
        return tuple(e for e in range(self.n) if self.down[e] == 0)

    def causality_pairs(self):
        """All strict pairs (e, e') with e < e'."""
        return frozenset((p, e) for e in range(self.n) for p in _bits(self.down[e]))

    def conflict_pairs(self):
        """All unordered conflict pairs as (min, max) tuples."""
        return frozenset(
            (e, f) for e in range(self.n) for f in _bits(self.conflicts[e]) if e < f
        )

    def __repr__(self):
        return (
            f"EventStructure(n={self.n}, labels={self.labels!r}, "
            f"causes={sorted(self.causality_pairs())}, "
            f"conflicts={sorted(self.conflict_pairs())})"
        )


def build(count, labels, causes=(), conflicts=()) -> EventStructure:
    """Validate and close a structure description.

    `causes` may be any acyclic generating relation (reduction or closure);
    `conflicts` may list only non-inherited pairs.  The result stores the
    transitive closure and the inheritance closure.
    """
    if count < 0:
        raise DanglingId("event count must be non-negative")
    if isinstance(labels, dict):
        label_map = labels
    else:
        label_map = dict(enumerate(labels))
    for e in label_map:
        if not 0 <= e < count:
            raise DanglingId(f"label given for unknown event {e}")
    missing = [e for e in range(count) if e not in label_map]
    if missing:
        raise DanglingId(f"no label for event {missing[0]}")
    lab = tuple(sys.intern(str(label_map[e])) for e in range(count))

    down = [0] * count
    for a, b in causes:
        if not (0 <= a < count and 0 <= b < count):
            raise DanglingId(f"cause pair ({a}, {b}) out of range")
        if a == b:
            raise CycleInCausality(f"event {a} causes itself")
        down[b] |= 1 << a
    # transitive closure over the strict order
    changed = True
    while changed:
        changed = False
        for e in range(count):
            acc = down[e]
            for p in _bits(down[e]):
                acc |= down[p]
            if acc != down[e]:
                down[e] = acc
                changed = True
    for e in range(count):
        if (down[e] >> e) & 1:
            raise CycleInCausality(f"causality cycle through event {e}")

    cf = [0] * count
    base = []
    for a, b in conflicts:
        if not (0 <= a < count and 0 <= b < count):
            raise DanglingId(f"conflict pair ({a}, {b}) out of range")
        if a == b:
            raise SelfConflict(f"event {a} conflicts with itself")
        if (down[b] >> a) & 1 or (down[a] >> b) & 1:
            raise CausalityConflictOverlap(
                f"events {a} and {b} are both ordered and in conflict"
            )
        base.append((a, b))
    # inheritance closure: a # b propagates to all causal successors of both
    for a, b in base:
        amask = (1 << a) | _up_closure(down, count, a)
        bmask = (1 << b) | _up_closure(down, count, b)
        for x in _bits(amask):
            cf[x] |= bmask
        for y in _bits(bmask):
            cf[y] |= amask
    for e in range(count):
        if (cf[e] >> e) & 1:
            raise SelfConflict(
                f"inheritance closure forces event {e} into conflict with itself"
            )
    for e in range(count):
        if cf[e] & down[e]:
            raise CausalityConflictOverlap(
                f"event {e} conflicts with one of its causes"
            )
    return EventStructure(labels=lab, down=tuple(down), conflicts=tuple(cf))


def _up_closure(down, count, e):
    mask = 0
    for x in range(count):
        if (down[x] >> e) & 1:
            mask |= 1 << x
    return mask


def concurrency(s: EventStructure):
    """Unordered pairs of distinct events neither ordered nor conflicting."""
    out = set()
    for e in range(s.n):
        for f in range(e + 1, s.n):
            related = ((s.down[f] >> e) & 1) or ((s.down[e] >> f) & 1) or (
                (s.conflicts[e] >> f) & 1
            )
            if not related:
                out.add((e, f))
    return frozenset(out)


def classify(s: EventStructure):
    """All class tags that apply; every valid structure is at least PES."""
    tags = {StructureClass.PES}
    if all(m == 0 for m in s.down):
        tags.add(StructureClass.CS)
    if all(m == 0 for m in s.conflicts):
        tags.add(StructureClass.EES)
    return frozenset(tags)


def canonical_form(s: EventStructure) -> bytes:
    """Canonical bytes; equal for two structures iff they are isomorphic."""
    enc, _ = _canon_with_perm(s)
    return enc


def _canon_with_perm(s: EventStructure):
    table = sorted(set(s.labels))
    rank = {lbl: i for i, lbl in enumerate(table)}
    enc, perm = canon_encode(
        s.n, [rank[l] for l in s.labels], list(s.down), list(s.conflicts)
    )
    return enc + b"|" + b"\x00".join(lbl.encode() for lbl in table), perm


def isomorphic(s: EventStructure, t: EventStructure):
    """Decide isomorphism; on success also return a witness bijection s -> t."""
    if s.n != t.n or sorted(s.labels) != sorted(t.labels):
        return False, None
    enc_s, perm_s = _canon_with_perm(s)
    enc_t, perm_t = _canon_with_perm(t)
    if enc_s != enc_t:
        return False, None
    mapping = {perm_s[i]: perm_t[i] for i in range(s.n)}
    return True, mapping


def transitive_reduction(s: EventStructure):
    """Cover pairs (e, e') of the strict order: e < e' with nothing between."""
    out = []
    for e in range(s.n):
        for p in _bits(s.down[e]):
            between = s.down[e] & s.up[p]
            if between == 0:
                out.append((p, e))
    return sorted(out)


def minimal_conflict_pairs(s: EventStructure):
    """The unique minimal generating set of the conflict relation.

    A pair is kept iff no other conflict pair sits (causally) below it in
    both components; inheritance closure of the kept pairs recovers the
    full relation.
    """
    pairs = sorted(s.conflict_pairs())
    keep = []
    for a, b in pairs:
        dea = s.down[a] | (1 << a)
        deb = s.down[b] | (1 << b)
        redundant = False
        for x, y in pairs:
            if (x, y) == (a, b):
                continue
            if ((dea >> x) & 1 and (deb >> y) & 1) or (
                (dea >> y) & 1 and (deb >> x) & 1
            ):
                redundant = True
                break
        if not redundant:
            keep.append((a, b))
    return keep


def restrict(s: EventStructure, mask: int) -> EventStructure:
    """Substructure induced by the events in mask, reindexed densely.

    Valid whenever the restriction of the closed relations is itself closed,
    which holds for downward- and upward-closed event sets alike.
    """
    kept = [e for e in range(s.n) if (mask >> e) & 1]
    index = {e: i for i, e in enumerate(kept)}
    labels = tuple(s.labels[e] for e in kept)
    down = tuple(
        _remap(s.down[e] & mask, index) for e in kept
    )
    cf = tuple(_remap(s.conflicts[e] & mask, index) for e in kept)
    return EventStructure(labels=labels, down=down, conflicts=cf)


def _remap(mask, index):
    out = 0
    for e in _bits(mask):
        out |= 1 << index[e]
    return out


def relabel(s: EventStructure, mapping) -> EventStructure:
    """Structure with every label replaced through `mapping`."""
    return EventStructure(
        labels=tuple(sys.intern(str(mapping[l])) for l in s.labels),
        down=s.down,
        conflicts=s.conflicts,
    )
