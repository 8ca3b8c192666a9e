import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hmsched.core import INF, Assignment, InvalidInstance, JobType, ScheduleInstance, identical
from hmsched.reductions import REDUCTIONS, BinPackingInstance, perfect_schedule, q_to_cutting_stock, reduce_bbp
from hmsched.serialize import canonical, digest, dumps, enc_num, loads
from hmsched.solvers import cuttingstock_solve
from hmsched.solvers.cutting_stock import CuttingStockInstance


def test_number_encoding():
    assert enc_num(Fraction(6)) == "6"
    assert enc_num(Fraction(4, -6)) == "-2/3"
    assert enc_num(INF) == "inf"


def test_bignum_as_string(bbp0):
    inst, _ = reduce_bbp("bbp2ql2", bbp0)
    doc = json.loads(dumps(inst))
    assert doc["kind"] == "schedule_instance"
    assert all(isinstance(m["speed"], str) for m in doc["machines"])
    assert doc["target"] == "14721408908146522/4779135760501137025"


def test_roundtrip_every_family(bbp0):
    for family in REDUCTIONS:
        bundle = reduce_bbp(family, bbp0)
        assert loads(dumps(bundle)) == bundle
        assert loads(dumps(perfect_schedule(bundle[1], (0, 1, 0, 1)))) == perfect_schedule(bundle[1], (0, 1, 0, 1))


def test_roundtrip_other_kinds(bbp0, tiny):
    inst, _ = reduce_bbp("bbp2qcmax", bbp0)
    cs, rc = q_to_cutting_stock(inst)
    small = CuttingStockInstance((2,), (3,), (4, 2), (3, 2), budget=5)
    values = [cs, rc, (cs, rc), small, cuttingstock_solve(small), tiny, bbp0,
              BinPackingInstance((1, 2, 3), 2, 3),
              ScheduleInstance("unrelated", 2, (JobType((INF, 3), 1, 2),), objective="sumwc")]
    for v in values:
        assert loads(dumps(v)) == v


def test_digest_stable(tiny):
    assert digest(tiny) == digest(identical((3, 5), (2, 1), 2))
    assert digest(tiny) != digest(identical((3, 5), (2, 2), 2))
    assert canonical(tiny) == canonical(loads(dumps(tiny)))


def test_decode_errors():
    with pytest.raises(InvalidInstance):
        loads("{")
    with pytest.raises(InvalidInstance, match="kind"):
        loads("{}")
    with pytest.raises(InvalidInstance, match="unknown kind"):
        loads('{"kind": "thing"}')
    with pytest.raises(InvalidInstance):
        loads('{"kind": "assignment", "counts": [["x"]]}')


def test_schema_accepts_plain_machine_count():
    inst = loads('{"kind":"schedule_instance","model":"identical","machines":"2",'
                 '"jobs":[{"size":"3","multiplicity":"2"},{"size":"5","multiplicity":"1"}]}')
    assert inst == identical((3, 5), (2, 1), 2)


@given(st.lists(st.tuples(st.integers(1, 10**30), st.integers(0, 10**20), st.integers(0, 9)), min_size=1, max_size=4),
       st.lists(st.fractions(min_value=Fraction(1, 10**6), max_value=10**6), min_size=1, max_size=3))
def test_roundtrip_property(jobs, speeds):
    inst = ScheduleInstance("uniform", len(speeds), tuple(JobType(p, n, w) for p, n, w in jobs), speeds=speeds,
                            objective="sumwc", target=Fraction(7, 3))
    assert loads(dumps(inst)) == inst
    a = Assignment(tuple((n,) * len(jobs) for n in range(len(speeds))))
    assert loads(dumps(a)) == a
