"""The eight acceptance criteria, each timed against its budget.

Every test records one PASS/FAIL line; ``conftest.py`` prints them at the end
of the run, and running this file directly prints them too.
"""

import random
import subprocess
import sys
import time

from polyverify import catalog
from polyverify.contracts import check_verified, erasure_coherent
from polyverify.core import run_closed
from polyverify.laws import kleisli_laws, mealy_laws, monad_laws, monoidal_laws, parallel_laws
from polyverify.monitors import run_monitored_trace
from polyverify.values import UNIT
from polyverify.wiring import compose_wiring

from oracles import (
    append_input, brute_force_freedep, concat_input, fib_sequence, native_append, native_concat, nat_list,
    random_nat_list,
)

RESULTS: dict = {}


class Criterion:
    """Times a block and records whether it passed within ``budget`` seconds."""

    def __init__(self, number: int, title: str, budget: float):
        self.number, self.title, self.budget = number, title, budget

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        ok = exc_type is None and elapsed < self.budget
        why = "" if exc_type is None else f" ({exc_type.__name__}: {exc})"
        if exc_type is None and not ok:
            why = f" (over the {self.budget:g}s budget)"
        RESULTS[self.number] = (f"criterion {self.number} [{self.title}]: {'PASS' if ok else 'FAIL'} "
                                f"in {elapsed:.2f}s{why}")
        if exc_type is None:
            assert ok, RESULTS[self.number]
        return False


def test_criterion_1_trace_fib():
    with Criterion(1, "trace fib --count 10", 1.0):
        out = subprocess.run([sys.executable, "-m", "polyverify", "trace", "fib", "--count", "10"],
                             capture_output=True, text=True, check=True).stdout
        assert out.split() == ["0", "1", "1", "2", "3", "5", "8", "13", "21", "34"]


def test_criterion_2_compositions_agree_with_native():
    with Criterion(2, "append/concat via multi_compose and wiring vs native, 1000 inputs", 5.0):
        rng = random.Random(2)
        app, cat = catalog.append_family().append, catalog.concat_family().concat
        reg = catalog.default_registry()
        app_w, cat_w = compose_wiring(catalog.APPEND_DIAGRAM, reg), compose_wiring(catalog.CONCAT_DIAGRAM, reg)
        for _ in range(1000):
            xs, ys = random_nat_list(rng), random_nat_list(rng)
            a = append_input(xs, ys)
            want = nat_list(native_append(xs, ys))
            assert run_closed(app, a) == want, (xs, ys)
            assert run_closed(app_w, a) == want, (xs, ys)
            xss = [random_nat_list(rng) for _ in range(rng.randint(0, 16))]
            c = concat_input(xss)
            want = nat_list(native_concat(xss))
            assert run_closed(cat, c) == want, xss
            assert run_closed(cat_w, c) == want, xss


def test_criterion_3_append_spec_and_mutants():
    with Criterion(3, "check_verified(appendSpec) vs brute force, 10 mutants", 30.0):
        vf = catalog.get("appendSpec", alphabet=3, max_len=3)
        report = check_verified(vf, mode="exhaustive")
        assert report.passed, report.violations[:3]
        assert brute_force_freedep(vf)[0] == "pass"
        mutations = catalog.entry("appendSpec").mutations
        assert len(mutations) == 10
        for m in mutations:
            mv = catalog.get("appendSpec", mutation=m, alphabet=3, max_len=3)
            verdict = check_verified(mv, mode="exhaustive").verdict
            assert verdict == brute_force_freedep(mv)[0], m
            assert verdict == "fail", m


def test_criterion_4_compositionality():
    with Criterion(4, "components pass exhaustively => composite passes", 60.0):
        checked = 0
        for comp in catalog.compositions():
            if all(check_verified(v, mode="exhaustive").passed for _, v in comp.components):
                checked += 1
                assert check_verified(comp.composite, mode="exhaustive").passed, comp.name
        assert checked == len(catalog.compositions())


def first_corrupted_step(n: int) -> int:
    """Index of the first step whose written state differs from the correct machine's."""
    good, bad = catalog.get("fib"), catalog.get("fib", mutation="off-by-one")
    for k in range(n):
        _, good = good.step(UNIT)
        _, bad = bad.step(UNIT)
        if good.inner.state != bad.inner.state:
            return k
    raise AssertionError("mutant never diverges")


def test_criterion_5_monitored_fib():
    with Criterion(5, "monitored fib, 50 steps, off-by-one caught at first corruption", 1.0):
        t = run_monitored_trace(catalog.get("fibSpec"), [UNIT] * 50)
        assert t.violation is None
        assert [e.n for e in t.evidence] == list(range(50))
        assert [y.n for y in t.outputs] == fib_sequence(50)
        bad = run_monitored_trace(catalog.get("fibSpec", mutation="off-by-one"), [UNIT] * 50)
        assert bad.violation is not None
        assert bad.violation[0] == first_corrupted_step(50)


def test_criterion_6_law_suites():
    with Criterion(6, "monad/Kleisli/Mealy/oplus-naturality law suites", 60.0):
        results = (monad_laws(6, cases=500) + kleisli_laws(6, cases=500)
                   + mealy_laws(6, cases=100, depth=20) + monoidal_laws(6, cases=100, depth=20))
        names = {r.name for r in results}
        assert {"monad/left-identity", "monad/right-identity", "monad/associativity"} <= names, names
        for r in results:
            assert r.passed, (r.name, r.failures[:3])
            assert r.cases >= 100, (r.name, r.cases)


def test_criterion_7_parallel():
    with Criterion(7, "parallel equations, affine discipline, noninterference", 30.0):
        results = parallel_laws(7, pairs=200, traces=1000)
        for r in results:
            assert r.passed, (r.name, r.failures[:3])
        good = check_verified(catalog.noninterference(), mode="exhaustive")
        assert good.passed and good.coverage["complete"]
        assert not check_verified(catalog.noninterference(leak=True), mode="exhaustive").passed


def test_criterion_8_erasure_coherence():
    with Criterion(8, "erasure coherence of every verified catalog entry", 10.0):
        entries = catalog.verified_entries()
        assert entries
        for e in entries:
            assert erasure_coherent(e.payload()), e.name


if __name__ == "__main__":
    import pytest

    pytest.main([__file__, "-q"])
    for k in sorted(RESULTS):
        print(RESULTS[k])
