import json
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from latinquot import Matrix2, Matrix3, PairSet, Partition, RationalMatrix3, SupportSet, lift_partial, QuotientInstance
from latinquot import documents as docs
from latinquot.cli import run

from conftest import EXAMPLE_M, cyclic_latin


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_quotient(tmp_path, capsys):
    m = write(tmp_path, "m.json", docs.matrix_to_doc(Matrix2(EXAMPLE_M)))
    code, out, _ = call(capsys, "quotient", "--axis", "1", "--partition", "1,2|3,4", m)
    assert code == 0 and out["entries"] == [[5, 5, 7, 1], [3, 4, 5, 1]]
    code, out, _ = call(capsys, "quotient", "--axis", "all", "--partition", "1,2|3,4", m)
    assert out["entries"] == [[10, 8], [7, 6]]
    code, _, err = call(capsys, "quotient", "--axis", "3", "--partition", "1,2|3,4", m)
    assert code == 1 and err.startswith("error: invalid:")


def test_lift_and_verify(tmp_path, capsys):
    L4 = cyclic_latin(4)
    from latinquot import triple_quotient

    M = triple_quotient(L4, Partition.canonical([2, 2]))
    inst = write(tmp_path, "i.json", docs.instance_to_doc(M, [2, 2], PairSet.full(2)))
    code, out, _ = call(capsys, "lift", inst)
    assert code == 0
    lift = write(tmp_path, "l.json", out)
    code, out, _ = call(capsys, "verify", inst, lift)
    assert code == 0 and out == {"ok": True, "reasons": []}
    doc = json.loads((tmp_path / "l.json").read_text())
    doc["L"]["entries"][0][0][0] = 1 - doc["L"]["entries"][0][0][0]
    bad = write(tmp_path, "bad.json", doc)
    code, out, err = call(capsys, "verify", inst, bad)
    assert code == 1 and not out["ok"] and "quotient mismatch" in err


def test_lift_precondition_failure(tmp_path, capsys):
    inst = write(tmp_path, "i.json", docs.instance_to_doc(Matrix3([[[5]]]), [2], PairSet.full(1)))
    code, out, err = call(capsys, "lift", inst)
    assert code == 1 and out is None and "vertical" in err


def test_lift_real(tmp_path, capsys):
    half = RationalMatrix3(np.full((2, 2, 2), Fraction(1, 2), dtype=object).tolist())
    inst = write(tmp_path, "i.json", docs.instance_to_doc(half, S=PairSet.full(2), beta=1))
    code, out, _ = call(capsys, "lift-real", inst)
    assert code == 0 and out["block_size"] == 2
    assert out["rational_solution"]["entries"][0][0][0] == "1/2"


def test_decompose(tmp_path, capsys):
    m = write(tmp_path, "m.json", docs.matrix_to_doc(Matrix2([[1, 1], [1, 1]])))
    code, out, _ = call(capsys, "decompose", "--mode", "perm", m)
    assert [p["entries"] for p in out["pieces"]] == [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]
    code, out, _ = call(capsys, "decompose", "--mode", "class", "--rows", "1,1", "--cols", "1,1", "--k", "2", m)
    assert code == 0 and len(out["pieces"]) == 2
    code, out, _ = call(capsys, "decompose", "--mode", "padded", "--rows", "1,1", "--cols", "1,1", "--k", "2", "--exact", "1", m)
    assert code == 0 and len(out["pieces"]) == 2
    code, _, _ = call(capsys, "decompose", "--mode", "class", m)
    assert code == 1


def test_hyper(tmp_path, capsys):
    s = write(tmp_path, "s.json", docs.support_to_doc(SupportSet.full(3)))
    code, out, _ = call(capsys, "hyper", s)
    assert (out["rho"], out["alpha_bar"], out["alpha_star"]) == (9, 9, "9")
    m = write(tmp_path, "m.json", docs.matrix_to_doc(cyclic_latin(2)))
    code, out, _ = call(capsys, "hyper", m)
    assert code == 0 and out["rho"] == 4


def test_counterexamples(capsys):
    code, out, _ = call(capsys, "counterexample", "--which", "A")
    assert code == 0 and out["alpha_bar"] < 9 and out["alpha_star"] == "9"
    code, out, _ = call(capsys, "counterexample", "--which", "gqq")
    assert code == 0 and out["r"] == [1, 2, 2] and Fraction(out["alpha_star"]) < 9


def test_explore(capsys):
    code, out, _ = call(capsys, "explore", "--k", "2", "--rmax", "1", "--policy", "sample", "--samples", "20", "--seed", "3")
    assert code == 0 and out["instances_checked"] == 20 and out["reverified"]


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "latinquot", "hyper", "-"], input='{"k":1,"triples":[[1,1,1]]}',
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["rho"] == 1


MALFORMED = [
    "not json",
    "[]",
    '{"dims": [2, 2]}',
    '{"dims": [2, 2], "entries": [[1, 2]]}',
    '{"dims": [2, 2], "entries": [[1, 2], [3]]}',
    '{"dims": [1, 1], "entries": [[-1]]}',
    '{"dims": [1, 1], "entries": [[true]]}',
    '{"dims": [1, 1], "entries": [[1.5]]}',
    '{"dims": [4], "entries": [1, 2, 3, 4]}',
    '{"dims": [1, 1, 1], "entries": [[["x/y"]]], "rational": true}',
]


@pytest.mark.parametrize("text", MALFORMED)
def test_malformed_matrix_exits_2(tmp_path, capsys, text):
    m = write(tmp_path, "m.json", text)
    code, out, err = call(capsys, "decompose", "--mode", "perm", m)
    assert code == 2 and out is None and err.startswith("error: malformed:")
    assert err.count("\n") == 1


@pytest.mark.parametrize("doc", [
    {"matrix": {"dims": [1, 1, 1], "entries": [[[1]]]}, "r": [1], "S": [[2, 1]]},
    {"matrix": {"dims": [1, 1, 1], "entries": [[[1]]]}, "r": "1"},
    {"matrix": {"dims": [1, 1, 1], "entries": [[[1]]]}, "r": [1], "S": [[1]]},
    {"r": [1]},
])
def test_malformed_instance_exits_2(tmp_path, capsys, doc):
    code, _, err = call(capsys, "lift", write(tmp_path, "i.json", doc))
    assert code == 2 and err.startswith("error: malformed:")


def test_usage_errors_exit_2(tmp_path, capsys):
    assert call(capsys, "nonsense")[0] == 2
    assert call(capsys, "quotient", "--axis", "9", "--partition", "1", "x")[0] == 2
    assert call(capsys, "hyper", str(tmp_path / "missing.json"))[0] == 2
    assert call(capsys, "decompose", "--mode", "class", "--rows", "a,b", "x")[0] == 2


# ---- round trips ----------------------------------------------------------

ints = st.integers(0, 50)
fracs = st.fractions(min_value=0, max_value=10, max_denominator=12)


@st.composite
def any_matrix(draw):
    kind = draw(st.sampled_from(["2", "3", "q"]))
    dims = draw(st.lists(st.integers(1, 3), min_size=2 if kind == "2" else 3, max_size=2 if kind == "2" else 3))
    size = int(np.prod(dims))
    vals = draw(st.lists(fracs if kind == "q" else ints, min_size=size, max_size=size))
    arr = np.array(vals, dtype=object).reshape(dims).tolist()
    return {"2": Matrix2, "3": Matrix3, "q": RationalMatrix3}[kind](arr)


@settings(max_examples=100, deadline=None)
@given(any_matrix())
def test_matrix_round_trip(M):
    doc = docs.matrix_to_doc(M)
    assert docs.matrix_from_doc(json.loads(docs.dumps(doc))) == M
    assert docs.matrix_to_doc(docs.matrix_from_doc(doc)) == doc


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(lambda k: st.tuples(
    st.just(k),
    st.frozensets(st.tuples(*[st.integers(1, k)] * 3)),
    st.frozensets(st.tuples(*[st.integers(1, k)] * 2)),
)))
def test_support_and_pairs_round_trip(data):
    k, triples, pairs = data
    H, S = SupportSet(k, triples), PairSet(k, pairs)
    assert docs.support_from_doc(json.loads(docs.dumps(docs.support_to_doc(H)))) == H
    assert docs.pairs_from_doc(json.loads(docs.dumps(docs.pairs_to_doc(S))), k) == S


def test_lift_round_trip():
    from latinquot import triple_quotient

    M = triple_quotient(cyclic_latin(3), Partition.canonical([1, 2]))
    res = lift_partial(QuotientInstance(M, (1, 2), PairSet.full(2)))
    doc = json.loads(docs.dumps(docs.lift_to_doc(res)))
    assert docs.lift_from_doc(doc) == res
    inst = docs.instance_to_doc(M, [1, 2], PairSet.full(2), Fraction(3, 2))
    assert docs.instance_from_doc(json.loads(docs.dumps(inst))) == (M, [1, 2], PairSet.full(2), Fraction(3, 2))
