import json
import time

import pytest

from primpoints.field import CapExceeded
from primpoints.sphere import (
    primorial_facts,
    sphere_has_primitive,
    sphere_scan,
    sphere_sufficiency_gap,
    sphere_sufficient,
    sphere_witness,
    sufficiency_threshold,
)


def test_examples():
    assert sphere_witness(7) == (3, 3, 5)
    assert sphere_has_primitive(7)
    assert not sphere_has_primitive(13)
    assert not sphere_has_primitive(25)
    with pytest.raises(ValueError):
        sphere_witness(8)


def test_witnesses_are_valid():
    for q in (7, 11, 17, 27, 49, 81, 121, 343):
        from primpoints.field import field_for_q

        K = field_for_q(q)
        x, y, z = sphere_witness(q)
        assert all(K.is_primitive(v) for v in (x, y, z))
        assert K.add(K.add(K.mul(x, x), K.mul(y, y)), K.mul(z, z)) == 1


def test_scan_small():
    assert sphere_scan(1000, 1) == [3, 5, 9, 13, 25]
    assert sphere_scan(2, 1) == []


def test_scan_is_independent_of_parallelism(tmp_path):
    recs1, recs2 = [], []
    assert sphere_scan(600, 1, records=recs1) == sphere_scan(600, 2, records=recs2)
    assert recs1 == recs2


def test_checkpoint_resume(tmp_path):
    path = tmp_path / "ck.jsonl"
    cold = sphere_scan(400, 1, path)
    lines = path.read_text().splitlines()
    recs = [json.loads(x) for x in lines]
    assert [r["q"] for r in recs] == sorted(r["q"] for r in recs)
    assert all(set(r) == {"q", "has_primitive", "witness"} for r in recs)
    # keep a prefix plus a torn line, then resume
    path.write_text("\n".join(lines[:20]) + '\n{"q": 9')
    resumed = sphere_scan(400, 1, path)
    assert resumed == cold
    # all values present: nothing recomputed
    n_before = len(path.read_text().splitlines())
    assert sphere_scan(400, 1, path) == cold
    assert len(path.read_text().splitlines()) == n_before


def test_scan_cap():
    with pytest.raises(CapExceeded):
        sphere_scan(1000, 1, cap=500)


def test_threshold_examples():
    assert not sphere_sufficient(1e9)
    assert sphere_sufficient(1e10)
    t0 = time.perf_counter()
    t = sufficiency_threshold()
    assert time.perf_counter() - t0 < 1.0
    assert sphere_sufficiency_gap(t + 2) > 0 > sphere_sufficiency_gap(t - 2)


def test_primorial_facts():
    assert all(primorial_facts().values())
