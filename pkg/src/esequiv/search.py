"""Bounded exhaustive search over small conflict-free structures.

Enumerates one representative per isomorphism class of labelled strict
orders, size by size, and looks for the smallest pairs related by a coarse
relation but separated by a fine one.  Classes are generated by extending
each (n-1)-event representative with one fresh maximal event whose
predecessor set ranges over all downward-closed sets, deduplicating by
canonical form; every n-event class arises this way from the class of some
maximal-event-deleted substructure, so the sweep is complete.

Buckets of cheap language invariants cut the quadratic pair testing; a
bucket key is only ever an invariant implied by the chosen coarse relation,
so bucketing never loses a qualifying pair.
"""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .equivalences import Relation, bisim, check, trace_equiv
from .errors import NoPairFound, NotAnEes, SizeLimit
from .semantics import (
    MODE_INTERLEAVING,
    MODE_POMSET,
    MODE_STEP,
    build_lts,
    configurations,
    pomset_code,
)
from .structure import EventStructure, canonical_form, restrict

MAX_SEARCH_EVENTS = 9
MAX_SEARCH_ALPHABET = 3

_LETTERS = "abc"


def _downset_masks(s: EventStructure):
    """All downward-closed event sets of a conflict-free structure."""
    return configurations(s)


def _extended(base: EventStructure, downset: int, letter: str) -> EventStructure:
    # the fresh event is maximal, so closure properties are preserved
    return EventStructure(
        labels=base.labels + (letter,),
        down=base.down + (downset,),
        conflicts=base.conflicts + (0,),
    )


def _poset_levels(max_events: int, alphabet: int):
    """levels[k] = canonical representatives of every k-event class."""
    if max_events > MAX_SEARCH_EVENTS:
        raise SizeLimit(
            f"poset enumeration capped at {MAX_SEARCH_EVENTS} events, got {max_events}"
        )
    if not 1 <= alphabet <= MAX_SEARCH_ALPHABET:
        raise SizeLimit(f"poset enumeration supports 1..{MAX_SEARCH_ALPHABET} labels")
    letters = _LETTERS[:alphabet]
    levels = [[EventStructure(labels=(), down=(), conflicts=())]]
    for _ in range(max_events):
        reps = {}
        for base in levels[-1]:
            for downset in _downset_masks(base):
                for letter in letters:
                    cand = _extended(base, downset, letter)
                    code = canonical_form(cand)
                    if code not in reps:
                        reps[code] = cand
        levels.append([reps[code] for code in sorted(reps)])
    return levels


def enumerate_posets(n: int, alphabet: int = 1):
    """One representative per isomorphism class of n-event labelled posets."""
    yield from _poset_levels(n, alphabet)[n]


def source_deleted_multiset(s: EventStructure):
    """Multiset (sorted tuple) of canonical forms after deleting each minimal event."""
    if any(s.conflicts):
        raise NotAnEes("source deletion is defined for conflict-free structures")
    out = []
    for e in s.minimal_events:
        out.append(canonical_form(restrict(s, s.all_mask & ~(1 << e))))
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# language fingerprints (exact invariants for trace equivalences)
# ---------------------------------------------------------------------------


def _language_fingerprint(lts):
    """Canonical encoding of the minimal acceptor of the trace language.

    Equal fingerprints iff equal languages: subset construction, then
    coarsest stable partition, then breadth-first numbering of the quotient.
    """
    index = {m: i for i, m in enumerate(lts.states)}
    rows = defaultdict(lambda: [0] * len(lts.states))
    for src, label, dst in lts.transitions:
        rows[label][index[src]] |= 1 << index[dst]
    alphabet = sorted(rows)
    subsets = {1: 0}
    trans = []  # per subset id: list of (label index, dst subset id)
    queue = [1]
    while queue:
        nxt = []
        for sub in queue:
            out = []
            for ai, label in enumerate(alphabet):
                target = 0
                row = rows[label]
                m = sub
                while m:
                    low = m & -m
                    target |= row[low.bit_length() - 1]
                    m ^= low
                if target:
                    if target not in subsets:
                        subsets[target] = len(subsets)
                        nxt.append(target)
                    out.append((ai, subsets[target]))
            trans.append(out)
        queue = nxt
    # trans[i] built in id order because ids are assigned in BFS order
    n = len(trans)
    block = [0] * n
    while True:
        sigs = [
            (block[i], tuple((ai, block[dst]) for ai, dst in trans[i]))
            for i in range(n)
        ]
        order = {sig: k for k, sig in enumerate(sorted(set(sigs)))}
        new = [order[sig] for sig in sigs]
        if len(order) == len(set(block)):
            break
        block = new
    # canonical numbering of the quotient, breadth-first in label order
    number = {block[0]: 0}
    edges = []
    worklist = [block[0]]
    rep_of = {}
    for i in range(n):
        rep_of.setdefault(block[i], i)
    while worklist:
        nxt = []
        for b in worklist:
            for ai, dst in trans[rep_of[b]]:
                db = block[dst]
                if db not in number:
                    number[db] = len(number)
                    nxt.append(db)
                edges.append((number[b], ai, number[db]))
        worklist = nxt
    return (tuple(alphabet), len(number), tuple(edges))


def it_fingerprint(s: EventStructure):
    return _language_fingerprint(build_lts(s, MODE_INTERLEAVING))


def st_fingerprint(s: EventStructure):
    return _language_fingerprint(build_lts(s, MODE_STEP))


def pomset_set(s: EventStructure):
    return frozenset(pomset_code(restrict(s, m)) for m in configurations(s))


# bucket invariants sound for each coarse relation (beyond the always-sound
# label multiset and interleaving language)
_ST_SOUND = {
    Relation.ST,
    Relation.SB,
    Relation.PT,
    Relation.PB,
    Relation.WHB,
    Relation.HB,
    Relation.HHB,
    Relation.ISO,
}
_PT_SOUND = {
    Relation.PT,
    Relation.PB,
    Relation.WHB,
    Relation.HB,
    Relation.HHB,
    Relation.ISO,
}


@dataclass(frozen=True)
class SearchSpec:
    """What to search for: pairs with `coarse` holding and `fine` failing."""

    coarse: Relation
    fine: Relation
    max_events: int
    alphabet: int = 1
    use_filters: bool = True
    sdm_filter: bool = False
    jobs: int = 1


@dataclass
class SizeStats:
    classes: int = 0
    buckets: int = 0
    largest_bucket: int = 0
    groups: int = 0
    pairs_tested: int = 0
    found: int = 0


@dataclass
class SearchResult:
    spec: SearchSpec
    size: int
    pairs: list  # (left, right) EventStructure pairs, canonically ordered
    stats: dict = field(default_factory=dict)  # size -> SizeStats

    def certificate(self) -> str:
        return _certificate_text(self.spec, self.stats, self.size)


def _certificate_text(spec, stats, found_size):
    lines = [
        f"search: coarse={spec.coarse.value} fine={spec.fine.value} "
        f"alphabet={spec.alphabet} filters={'on' if spec.use_filters else 'off'} "
        f"sdm={'on' if spec.sdm_filter else 'off'}"
    ]
    for size in sorted(stats):
        st = stats[size]
        lines.append(
            f"size {size}: {st.classes} classes, {st.buckets} buckets "
            f"(largest {st.largest_bucket}), {st.groups} groups, "
            f"{st.pairs_tested} pairs tested, {st.found} qualifying"
        )
    if found_size is None:
        lines.append(f"exhausted all sizes up to {max(stats) if stats else 0}: no pair")
    else:
        exhausted = [s for s in sorted(stats) if s < found_size]
        if exhausted:
            lines.append(
                f"sizes {exhausted[0]}..{exhausted[-1]} exhausted without a pair"
            )
        lines.append(f"first qualifying pairs at size {found_size}")
    return "\n".join(lines) + "\n"


def _bucket_key(s, spec):
    key = [tuple(sorted(s.labels))]
    if spec.use_filters:
        key.append(it_fingerprint(s))
        if spec.coarse in _ST_SOUND:
            key.append(st_fingerprint(s))
        if spec.coarse in _PT_SOUND:
            key.append(pomset_set(s))
    if spec.sdm_filter:
        key.append(source_deleted_multiset(s))
    return tuple(key)


class _PairTester:
    """Relation checks over a fixed rep list, with per-rep LTS caching."""

    def __init__(self, reps):
        self.reps = reps
        self._lts = {}

    def lts(self, idx, mode):
        got = self._lts.get((idx, mode))
        if got is None:
            got = build_lts(self.reps[idx], mode)
            self._lts[(idx, mode)] = got
        return got

    def holds(self, rel, i, j):
        if rel in (Relation.IT, Relation.ST):
            mode = MODE_INTERLEAVING if rel is Relation.IT else MODE_STEP
            return trace_equiv(self.lts(i, mode), self.lts(j, mode))
        if rel in (Relation.IB, Relation.SB, Relation.PB):
            mode = {
                Relation.IB: MODE_INTERLEAVING,
                Relation.SB: MODE_STEP,
                Relation.PB: MODE_POMSET,
            }[rel]
            return bisim(self.lts(i, mode), self.lts(j, mode))
        return check(rel, self.reps[i], self.reps[j])


def _process_bucket(args):
    """Group one bucket by the coarse relation; return local qualifying pairs."""
    members, coarse, fine = args
    tester = _PairTester(members)
    groups = []
    pairs_tested = 0
    for idx in range(len(members)):
        for group in groups:
            pairs_tested += 1
            if tester.holds(coarse, group[0], idx):
                group.append(idx)
                break
        else:
            groups.append([idx])
    found = []
    for group in groups:
        for a in range(len(group)):
            for b in range(a + 1, len(group)):
                i, j = group[a], group[b]
                # distinct representatives are never isomorphic
                if fine is not Relation.ISO:
                    pairs_tested += 1
                    if tester.holds(fine, i, j):
                        continue
                found.append((i, j))
    return len(groups), pairs_tested, found


def find_minimal_pairs(spec: SearchSpec) -> SearchResult:
    """All qualifying pairs at the smallest size admitting one.

    Raises NoPairFound (carrying the exhaustion certificate) if no size up
    to the bound yields a pair.
    """
    levels = _poset_levels(spec.max_events, spec.alphabet)
    stats = {}
    for size in range(1, spec.max_events + 1):
        reps = levels[size]
        st = SizeStats(classes=len(reps))
        stats[size] = st
        buckets = defaultdict(list)
        for idx, s in enumerate(reps):
            buckets[_bucket_key(s, spec)].append(idx)
        st.buckets = len(buckets)
        st.largest_bucket = max(len(v) for v in buckets.values())
        big = [
            members
            for _, members in sorted(buckets.items(), key=lambda kv: repr(kv[0]))
            if len(members) >= 2
        ]
        tasks = [
            ([reps[i] for i in members], spec.coarse, spec.fine) for members in big
        ]
        if spec.jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
                outcomes = list(pool.map(_process_bucket, tasks, chunksize=1))
        else:
            outcomes = [_process_bucket(t) for t in tasks]
        found = []
        for members, (groups, tested, pairs) in zip(big, outcomes):
            st.groups += groups
            st.pairs_tested += tested
            found.extend((members[i], members[j]) for i, j in pairs)
        st.groups += sum(1 for members in buckets.values() if len(members) == 1)
        if found:
            result_pairs = []
            for i, j in found:
                left, right = reps[i], reps[j]
                if canonical_form(left) > canonical_form(right):
                    left, right = right, left
                result_pairs.append((left, right))
            result_pairs.sort(
                key=lambda p: (canonical_form(p[0]), canonical_form(p[1]))
            )
            st.found = len(result_pairs)
            return SearchResult(spec=spec, size=size, pairs=result_pairs, stats=stats)
    raise NoPairFound(spec.max_events, _certificate_text(spec, stats, None))
