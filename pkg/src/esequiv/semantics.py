"""Configurations, transition systems, and pomset coding.

A configuration is a bitmask over event ids: conflict-free and closed under
causal predecessors.  Three transition relations are supported between
configurations:

- interleaving: add one event, label = its action;
- step: add a non-empty set of pairwise concurrent events, label = the
  sorted multiset of their actions;
- pomset: add any non-empty event set H reaching another configuration,
  label = the canonical code of the induced labelled poset on H.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import ModeMismatch, NotAConfiguration, SizeLimit
from .structure import EventStructure, _bits, canonical_form, restrict, transitive_reduction

MODE_INTERLEAVING = "interleaving"
MODE_STEP = "step"
MODE_POMSET = "pomset"
MODES = (MODE_INTERLEAVING, MODE_STEP, MODE_POMSET)

MAX_LTS_EVENTS = 30


def is_configuration(s: EventStructure, mask: int) -> bool:
    if mask & ~s.all_mask:
        return False
    for e in _bits(mask):
        if s.down[e] & ~mask:
            return False
        if s.conflicts[e] & mask:
            return False
    return True


def enabled_events(s: EventStructure, mask: int):
    """Events addable to the configuration mask as a single transition."""
    out = []
    for e in range(s.n):
        if (mask >> e) & 1:
            continue
        if s.down[e] & ~mask:
            continue
        if s.conflicts[e] & mask:
            continue
        out.append(e)
    return out


def configurations(s: EventStructure):
    """All configurations, sorted by (size, mask).

    Layered expansion from the empty set; complete because every
    configuration is reachable by adding its events in any order compatible
    with causality.
    """
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for mask in frontier:
            for e in enabled_events(s, mask):
                m2 = mask | (1 << e)
                if m2 not in seen:
                    seen.add(m2)
                    nxt.append(m2)
        frontier = nxt
    return tuple(sorted(seen, key=lambda m: (m.bit_count(), m)))


def poset_of(s: EventStructure, mask: int) -> EventStructure:
    """The labelled poset induced by a configuration (conflict part empty)."""
    if not is_configuration(s, mask):
        raise NotAConfiguration(f"{config_text(mask)} is not a configuration")
    return restrict(s, mask)


def pomset_code(poset: EventStructure) -> bytes:
    """Canonical code of a labelled poset; equal iff poset-isomorphic."""
    return canonical_form(poset)


def pomset_text(poset: EventStructure) -> str:
    """Readable rendering of a poset's isomorphism class.

    Labels in canonical vertex order, then the cover pairs between
    canonical positions, e.g. chains render as ``a.b/0<1`` and antichains
    as ``a.b/``.
    """
    from .structure import _canon_with_perm

    _, perm = _canon_with_perm(poset)
    pos = {v: i for i, v in enumerate(perm)}
    labels = ".".join(poset.labels[v] for v in perm)
    covers = sorted((pos[a], pos[b]) for a, b in transitive_reduction(poset))
    return labels + "/" + ",".join(f"{a}<{b}" for a, b in covers)


def config_text(mask: int) -> str:
    return "{" + ",".join(f"e{e}" for e in _bits(mask)) + "}"


@dataclass(frozen=True)
class Lts:
    """Explicit transition system over configurations, rooted at the empty one."""

    mode: str
    states: tuple[int, ...]
    transitions: tuple[tuple[int, object, int], ...]
    initial: int = 0

    @cached_property
    def successors(self):
        """state -> sorted tuple of (label, dst)."""
        succ = {m: [] for m in self.states}
        for src, label, dst in self.transitions:
            succ[src].append((label, dst))
        return {m: tuple(sorted(v)) for m, v in succ.items()}

    @cached_property
    def alphabet(self):
        return tuple(sorted({label for _, label, _ in self.transitions}))


def _pomset_code_memo(s, memo, mask):
    code = memo.get(mask)
    if code is None:
        code = pomset_code(restrict(s, mask))
        memo[mask] = code
    return code


def build_lts(s: EventStructure, mode: str) -> Lts:
    """Full transition system of the structure under the given mode."""
    if mode not in MODES:
        raise ModeMismatch(f"unknown mode {mode!r}")
    if s.n > MAX_LTS_EVENTS:
        raise SizeLimit(f"structure has {s.n} events; limit is {MAX_LTS_EVENTS}")
    states = configurations(s)
    transitions = []
    if mode == MODE_INTERLEAVING:
        for mask in states:
            for e in enabled_events(s, mask):
                transitions.append((mask, s.labels[e], mask | (1 << e)))
    elif mode == MODE_STEP:
        for mask in states:
            enabled = enabled_events(s, mask)
            # non-empty subsets of pairwise concurrent enabled events;
            # enabled events are never ordered, so only conflicts matter
            for group in _independent_subsets(s, enabled):
                label = tuple(sorted(s.labels[e] for e in _bits(group)))
                transitions.append((mask, label, mask | group))
    else:
        memo = {}
        for mask in states:
            for bigger in states:
                if bigger != mask and (bigger & mask) == mask:
                    diff = bigger & ~mask
                    code = _pomset_code_memo(s, memo, diff)
                    transitions.append((mask, code, bigger))
    transitions.sort(key=lambda t: (t[0].bit_count(), t[0], t[1], t[2]))
    return Lts(mode=mode, states=states, transitions=tuple(transitions))


def _independent_subsets(s, events):
    """Non-empty conflict-free subsets of `events`, as bitmasks."""
    out = []

    def rec(i, mask):
        if i == len(events):
            if mask:
                out.append(mask)
            return
        e = events[i]
        rec(i + 1, mask)
        if not (s.conflicts[e] & mask):
            rec(i + 1, mask | (1 << e))

    rec(0, 0)
    return sorted(out)


def trace_language(lts: Lts, limit: int = 1_000_000):
    """The full (finite) set of label sequences of an acyclic rooted LTS.

    Exponential in the worst case; guarded by `limit`.  Meant for the small
    curated examples and for cross-checks, not for deciding equivalence.
    """
    memo = {}

    def rec(state):
        got = memo.get(state)
        if got is not None:
            return got
        acc = {()}
        for label, dst in lts.successors[state]:
            for w in rec(dst):
                acc.add((label,) + w)
                if len(acc) > limit:
                    raise SizeLimit("trace language larger than limit")
        got = frozenset(acc)
        memo[state] = got
        return got

    return rec(lts.initial)


def has_autoconcurrency(s: EventStructure) -> bool:
    """Some configuration holds two distinct concurrent events with one label."""
    for e in range(s.n):
        for f in range(e + 1, s.n):
            if s.labels[e] != s.labels[f]:
                continue
            ordered = ((s.down[f] >> e) & 1) or ((s.down[e] >> f) & 1)
            if ordered or ((s.conflicts[e] >> f) & 1):
                continue
            joint = s.down[e] | s.down[f] | (1 << e) | (1 << f)
            if is_configuration(s, joint):
                return True
    return False
