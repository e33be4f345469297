import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nestlab import kernels
from nestlab.embedding import _encoded, _fmap
from nestlab.enumeration import random_algebra, random_embedding
from nestlab.pisom import is_staircase, is_strictly_monotone

BACKENDS = kernels.backends()


def test_compiled_backend_present():
    # the build ships the extension; the pure twin is always importable
    assert "python" in BACKENDS
    assert kernels.BACKEND in BACKENDS


cellsets = st.lists(st.tuples(st.integers(1, 5), st.integers(1, 5)).map(lambda c: (min(c), max(c))),
                    min_size=1, max_size=8)


@pytest.mark.parametrize("name", sorted(BACKENDS))
@given(cells=cellsets)
def test_cellset_ok_matches_definitions(name, cells):
    impl = BACKENDS[name]
    rows = np.array([r for r, _ in cells], dtype=np.int32)
    cols = np.array([c for _, c in cells], dtype=np.int32)
    assert bool(impl.cellset_ok(rows, cols, 5, kernels.STAIRCASE)) == is_staircase(set(cells))
    assert bool(impl.cellset_ok(rows, cols, 5, kernels.STRICT)) == is_strictly_monotone(set(cells))


@given(st.integers(0, 10 ** 6), st.booleans())
def test_backends_agree_on_scans(seed, strict):
    rng = random.Random(seed)
    phi = random_embedding(rng, random_algebra(rng, 4, 2), max_mu=3, codomain_atoms=5)
    _, rows, cols, offsets = _encoded(phi.domain, strict)
    mode = kernels.STRICT if strict else kernels.STAIRCASE
    answers = {name: int(impl.scan_images(rows, cols, offsets, _fmap(phi), phi.codomain.num_atoms, mode))
               for name, impl in BACKENDS.items()}
    assert len(set(answers.values())) == 1, answers


def test_scan_reports_first_failure():
    impl = BACKENDS["python"]
    rows = np.array([1, 1, 2], dtype=np.int32)
    cols = np.array([1, 2, 2], dtype=np.int32)
    offsets = np.array([0, 1, 3], dtype=np.int32)
    crossed = np.array([[0, 1, 4], [0, 2, 3]], dtype=np.int32)
    # the single cell (1,1) passes; the pair {(1,2),(2,2)} maps onto {(1,4),(2,3),(4,4),(3,3)}
    assert impl.scan_images(rows, cols, offsets, crossed, 4, kernels.STAIRCASE) == 1
    assert impl.scan_images(rows, cols, offsets[:2], crossed, 4, kernels.STAIRCASE) == -1
