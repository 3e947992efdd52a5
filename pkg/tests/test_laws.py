import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcube.algebra import Observable, bell_projector, pauli_matrix
from qcube.calculus import semigroup_apply, variance
from qcube.generators import GeneratorSpec, generate
from qcube.laws import LAWS, QUANTUM_LAWS, Grid, check

from conftest import random_op

SMALL = Grid(p=(1.0, 1.5, 2.0), q=(1.0, 1.5), alpha=(0.0, 1.0), t=(0.5,), k=(1, 2))


def test_bell_sharpness_record():
    for j in (0, 1):
        rec, = check("Q4", bell_projector(2), {"j": j})
        assert rec.kind == "operator"
        assert abs(rec.margin) <= 1e-10 and rec.passed


def test_constant_operator_skips_q9():
    recs = check("Q9", Observable.scalar(2, 0.3), {"p": 1, "q": 1, "alpha": 1})
    assert recs and all(r.skipped for r in recs)


def test_poincare_on_random_input():
    recs = check("Q1", random_op(3, 17), {"t": 0.7})
    assert len(recs) == 1 and recs[0].margin >= 0


def test_poincare_equality_at_level_one():
    rec, = check("Q1", pauli_matrix((0, 2)), {"t": 0.7})
    assert rec.margin == pytest.approx(0, abs=1e-15)


def test_q9_reports_both_forms():
    recs = check("Q9", random_op(2, 4), {"grid": SMALL})
    forms = {r.params["form"] for r in recs}
    assert forms == {"stated", "proof"}


def test_bounded_laws_rescale():
    A = generate(GeneratorSpec("random_hermitian", 2, 1)) * 3.0
    for law in ("Q10", "Q12"):
        recs = check(law, A, {"grid": SMALL})
        assert all(r.params.get("rescaled") for r in recs if not r.skipped)


def test_unknown_law_and_bad_grid():
    with pytest.raises(KeyError):
        check("Q99", Observable.identity(1))
    with pytest.raises(ValueError):
        Grid(p=(3.0,))
    with pytest.raises(ValueError):
        Grid(q=(2.0,))
    with pytest.raises(ValueError):
        Grid(t=(0.0,))


@pytest.mark.parametrize("law", QUANTUM_LAWS)
@pytest.mark.parametrize("kind", ["random_hermitian", "random_quantum_boolean", "low_degree", "classical_embed",
                                  "pauli_character", "bell"])
def test_every_law_passes_every_generator(law, kind):
    n = 2 if kind == "bell" else 3
    A = generate(GeneratorSpec(kind, n, 2024))
    recs = check(law, A, {"grid": SMALL})
    assert recs
    bad = [r for r in recs if r.failed]
    assert not bad, bad[:3]


def test_catalog_metadata():
    assert len(QUANTUM_LAWS) == 20
    for law in QUANTUM_LAWS:
        info = LAWS[law]
        assert info.kind in ("scalar", "operator") and info.statement


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**31), st.floats(0, 2), st.floats(0.01, 2))
def test_variance_log_convexity(n, seed, t1, gap):
    A = random_op(n, seed)
    t2 = t1 + gap
    mid = variance(semigroup_apply(A, (t1 + t2) / 2))
    assert mid**2 <= variance(semigroup_apply(A, t1)) * variance(semigroup_apply(A, t2)) + 1e-10


def test_records_serialize():
    rec = check("Q2", random_op(1, 0), {"t": 0.5})[0]
    d = rec.to_dict()
    assert d["law_id"] == "Q2" and d["pass"] is True and set(d) >= {"lhs", "rhs", "margin"}
    skipped = check("Q9", Observable.identity(1), {"p": 1, "q": 1, "alpha": 0})[0].to_dict()
    assert skipped["margin"] is None and skipped["status"] == "skipped"
