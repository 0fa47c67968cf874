"""Acceptance batch bookkeeping"""
import run_acceptance
from app.errors import RefinementExhausted


def test_laurent_batch_fails_when_a_seed_raises(rng, monkeypatch):
    def exhausted(*args, **kwargs):
        raise RefinementExhausted("comparison did not settle")

    monkeypatch.setattr(run_acceptance, "solve_equation", exhausted)
    result = run_acceptance.batch_laurent_obstruction(rng, instances=10)
    assert not result.passed
    assert "0 nonzero" in result.detail
    assert " 0 raised" not in result.detail


def test_run_batches_reports_each_name(monkeypatch):
    monkeypatch.setitem(
        run_acceptance.BATCHES, "padic", lambda rng: run_acceptance.BatchResult("p-adic", True, "ok")
    )
    results = run_acceptance.run_batches(["padic"], seed=1)
    assert [r.passed for r in results] == [True]
    assert results[0].seconds >= 0
