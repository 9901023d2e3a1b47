import random

import pytest

from acausal import kernels
from acausal.consistency import SUFFICIENT, ALL_OPS, constraint_maps
from acausal.scenario import Scenario
from oracles import naive_deterministic_vertices

IMPLS = [kernels.python_kernels]
if kernels.compiled_kernels is not None:
    IMPLS.append(kernels.compiled_kernels)


def test_selection():
    assert kernels.IMPLEMENTATION in ("python", "cython")
    assert kernels.active in IMPLS


@pytest.mark.skipif(kernels.compiled_kernels is None, reason="compiled kernels not built")
def test_compiled_is_cython():
    assert kernels.compiled_kernels.IMPLEMENTATION == "cython"


def _fmaps(sc, mode=SUFFICIENT):
    return [fm for fm, _ in constraint_maps(sc, mode)]


@pytest.mark.parametrize("impl", IMPLS, ids=lambda m: m.IMPLEMENTATION)
@pytest.mark.parametrize("n,d", [(1, 2), (2, 2), (1, 3)])
def test_scan_matches_brute_force(impl, n, d):
    sc = Scenario(n, d)
    got = []
    for lo in range(sc.D):
        got.extend(impl.scan_tables(sc.D, _fmaps(sc), lo, lo + 1))
    assert sorted(got) == naive_deterministic_vertices(sc)


@pytest.mark.parametrize("impl", IMPLS, ids=lambda m: m.IMPLEMENTATION)
def test_scan_all_ops_equals_sufficient(impl):
    sc = Scenario(2, 2)
    a = impl.scan_tables(sc.D, _fmaps(sc), 0, sc.D)
    b = impl.scan_tables(sc.D, _fmaps(sc, ALL_OPS), 0, sc.D)
    assert sorted(a) == sorted(b)


def test_scan_empty_range():
    for impl in IMPLS:
        assert impl.scan_tables(4, _fmaps(Scenario(2, 2)), 2, 2) == []


@pytest.mark.parametrize("n,d", [(2, 2), (3, 2), (2, 3)])
def test_pointwise_kernels_agree(n, d):
    sc = Scenario(n, d)
    fmaps = _fmaps(sc)
    rng = random.Random(n * d)
    for _ in range(300):
        t = [rng.randrange(sc.D) for _ in range(sc.D)]
        fm = rng.choice(fmaps)
        counts = {impl.fixed_point_count(t, fm) for impl in IMPLS}
        assert counts == {sum(1 for i in range(sc.D) if t[fm[i]] == i)}
        viol = {impl.first_violation(t, fmaps) for impl in IMPLS}
        assert len(viol) == 1
        v = viol.pop()
        expect = next((k for k, f in enumerate(fmaps)
                       if sum(1 for i in range(sc.D) if t[f[i]] == i) != 1), -1)
        assert v == expect


@pytest.mark.skipif(kernels.compiled_kernels is None, reason="compiled kernels not built")
@pytest.mark.slow
def test_three_party_scan_agrees():
    sc = Scenario(3, 2)
    fmaps = _fmaps(sc)
    # the pure-Python scan over one chunk is enough to compare
    for lo in (0, 5):
        assert (kernels.python_kernels.scan_tables(sc.D, fmaps, lo, lo + 1)
                == kernels.compiled_kernels.scan_tables(sc.D, fmaps, lo, lo + 1))
