"""Kernel-level properties: compiled/pure parity and exactness."""

import random

import pytest

from esequiv import _canon_py
from esequiv.search import enumerate_posets
from esequiv.structure import canonical_form

from conftest import random_structure

try:
    from esequiv import _canonc
except ImportError:
    _canonc = None


def _kernel_inputs(s):
    table = sorted(set(s.labels))
    rank = {l: i for i, l in enumerate(table)}
    return s.n, [rank[l] for l in s.labels], list(s.down), list(s.conflicts)


@pytest.mark.skipif(_canonc is None, reason="compiled kernel not built")
def test_kernel_parity():
    rng = random.Random(31)
    for _ in range(400):
        s = random_structure(rng, max_events=8, alphabet=rng.choice([1, 2, 3]))
        n, lranks, down, cf = _kernel_inputs(s)
        assert _canon_py.canon_encode(n, lranks, down, cf) == _canonc.canon_encode(
            n, lranks, down, cf
        )


@pytest.mark.skipif(_canonc is None, reason="compiled kernel not built")
def test_kernel_parity_symmetric_cases():
    # large automorphism groups exercise the orbit pruning
    for n in range(1, 9):
        assert _canon_py.canon_encode(n, [0] * n, [0] * n, [0] * n) == _canonc.canon_encode(
            n, [0] * n, [0] * n, [0] * n
        )
    # disjoint identical chains
    down = [0, 0, 0, 0b0001, 0b0010, 0b0100]
    assert _canon_py.canon_encode(6, [0] * 6, down, [0] * 6) == _canonc.canon_encode(
        6, [0] * 6, down, [0] * 6
    )


def test_empty_structure_code_unique():
    from esequiv.structure import build

    assert canonical_form(build(0, {})) == canonical_form(build(0, {}))


def test_four_event_single_label_classes():
    # distinct canonical forms over all one-label posets on four events
    forms = {canonical_form(s) for s in enumerate_posets(4, 1)}
    assert len(forms) == 16
