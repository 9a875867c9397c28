import random

from fidl_lab.fidl import product_module, validate_module
from fidl_lab.generators import random_module
from fidl_lab.suite import HARD, hard_failures, run_module_suite


def test_mod2_passes_everything(MOD2):
    res = run_module_suite(MOD2)
    assert all(res[k] == "pass" for k in HARD)
    assert res["verdict"] == "subdirectly_irreducible_not_simple"
    assert {d["criterion"] for d in res["diagnostics"]} >= {"point_closure_simplicity"}


def test_large_modules_skip_prime_extension(MOD2):
    P, _ = product_module([MOD2, MOD2, MOD2])
    res = run_module_suite(P)
    assert res["prime_extension"] == "skipped"
    assert hard_failures(res) == []


def test_missing_implication_bottom_is_reported(MOD2):
    i = [list(r) for r in MOD2.i]
    i[0][0] = 0
    N = validate_module(MOD2.A, MOD2.B, MOD2.f, i)
    bad = hard_failures(run_module_suite(N))
    assert "representation" in bad and "anti_isomorphism" in bad
    assert "axioms" not in bad


def test_generated_modules_pass():
    rng = random.Random(12)
    for _ in range(15):
        assert hard_failures(run_module_suite(random_module(rng, "mixed", 6, 4))) == []
