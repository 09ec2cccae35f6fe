import pytest

from hyperoct.algebra import ClassAWeights, a_hat, expand, random_class_a, select_ell
from hyperoct.group import enumerate_group
from hyperoct.reduction import (
    CounterexampleError,
    CounterexampleSpec,
    Family,
    Semirecursive,
    counterexample,
    default_counterexample,
    gap_monotonicity,
    gap_monotonicity_check,
    octopus_check,
    rank_one_discrepancy,
    rank_one_identity_check,
    reduce,
    semirecursive_check,
    theta_n,
    theta_t,
)

W2_UNIT = ClassAWeights(2, {(1,): 1.0, (2,): 1.0}, {(1, 2): 1.0})


def test_theta_n_examples():
    signs = {(1,): 1.0, (2,): 2.0, (1, 2, 3): 3.0}
    assert theta_n({(1,): 1.0, (2,): 2.0}, 3) == {(1,): 1.0, (2,): 2.0}
    assert theta_n({(1,): 1.0, (2,): 2.0}, 2) == {(1,): 1.0}
    assert theta_n({(1,): 1.0, (1, 2, 3): 3.0}, 1) == {}
    assert theta_n(signs, 2) == {(1,): 1.0}


def test_theta_t_examples():
    assert theta_t({(1, 2): 0.4}, 3) == {(1, 2): 0.4}
    assert theta_t({(1, 3): 1.0, (2, 3): 1.0}, 3) == {(1, 2): 0.5}
    assert theta_t({(1, 2): 2.0}, 2) == {}


def test_theta_t_star_weights():
    # every pair touches 4 with weight 1: each remaining pair gets 1*1/3
    out = theta_t({(1, 4): 1.0, (2, 4): 1.0, (3, 4): 1.0}, 4)
    assert out == pytest.approx({(1, 2): 1 / 3, (1, 3): 1 / 3, (2, 3): 1 / 3})


def test_reduce_examples():
    step = reduce(W2_UNIT)
    assert step.ell == 2
    assert step.output == ClassAWeights(1, {(1,): 1.0})
    zero = reduce(ClassAWeights(3))
    assert zero.ell == 3 and zero.output.is_empty()
    pure = ClassAWeights(3, {}, {(1, 3): 1.0, (2, 3): 1.0})
    assert reduce(pure).output.transposition_weights == {(1, 2): 0.5}
    with pytest.raises(ValueError):
        reduce(ClassAWeights(1, {(1,): 1.0}))


@pytest.mark.parametrize("seed", range(20))
def test_reduce_invariants(seed):
    caw = random_class_a(4, 0.7, seed)
    step = reduce(caw)
    assert all(step.ell not in A for A in step.unrelabeled.sign_weights)
    assert all(step.ell not in p for p in step.unrelabeled.transposition_weights)
    assert all(v >= 0 for v in step.output.transposition_weights.values())
    assert step.output.n == 3
    # relabeling is a bijection onto 1..n-1 that preserves order
    assert sorted(step.relabeling.values()) == [1, 2, 3]
    assert list(step.relabeling.values()) == sorted(step.relabeling.values())
    # embedding the relabeled output recovers the unrelabeled one
    assert step.embedded_output() == expand(step.unrelabeled)


@pytest.mark.parametrize("seed", range(10))
def test_select_ell_consistent_with_relabeling(seed):
    caw = random_class_a(4, 0.8, seed)
    ell = select_ell(caw)
    ah = a_hat(caw)
    assert ah[ell - 1] == ah.min()
    assert all(ah[j] > ah.min() for j in range(ell, 4))


def test_octopus_check_examples(w3):
    # every sign set and the only transposition touch ell = 3, so theta(w) = 0
    caw = ClassAWeights(3, {(1, 2, 3): 1.0}, {(1, 3): 1.0})
    assert reduce(caw).ell == 3 and reduce(caw).output.is_empty()
    assert octopus_check(caw, w3)
    for seed in range(20):
        assert octopus_check(random_class_a(3, 0.8, seed), w3)


def test_octopus_on_symmetric_group():
    s4 = enumerate_group(4, signs=False)
    for seed in range(5):
        assert octopus_check(random_class_a(4, 0.9, seed).transposition_part(), s4)


def test_octopus_detects_overshoot(w3):
    # doubling the redistributed weight makes w - z leave the cone
    caw = ClassAWeights(3, {}, {(1, 3): 1.0, (2, 3): 1.0})
    z = ClassAWeights(2, {}, {(1, 2): 1.0})
    assert semirecursive_check(caw, z, w3) is Semirecursive.PRECONDITION_FAILED


def test_gap_monotonicity_examples():
    lhs, rhs = gap_monotonicity(W2_UNIT)
    assert lhs == pytest.approx(2.0, abs=1e-12) and rhs == pytest.approx(2.0, abs=1e-12)
    assert gap_monotonicity_check(W2_UNIT)
    lhs, rhs = gap_monotonicity(ClassAWeights(3))
    assert lhs == 0 and rhs == 0


@pytest.mark.parametrize("seed", range(20))
def test_gap_monotonicity_n2(seed):
    assert gap_monotonicity_check(random_class_a(2, 0.8, seed))


@pytest.mark.parametrize("seed", range(10))
def test_gap_monotonicity_singletons(seed):
    caw = random_class_a(4, 0.8, seed)
    caw = ClassAWeights(4, {A: a for A, a in caw.sign_weights.items() if len(A) == 1},
                        caw.transposition_weights)
    assert gap_monotonicity_check(caw)


def test_gap_monotonicity_fails_with_large_sign_set():
    # a_hat of the reduced weights loses the {1,2,3} contribution
    caw = ClassAWeights(3, {(1, 2, 3): 1.0, (1,): 0.1, (2,): 0.1}, {(1, 2): 1.0, (1, 3): 1.0, (2, 3): 1.0})
    lhs, rhs = gap_monotonicity(caw)
    assert lhs > rhs + 0.5


def test_semirecursive_examples(w3):
    for seed in range(5):
        caw = random_class_a(3, 0.8, seed)
        step = reduce(caw)
        r = semirecursive_check(caw, step.output, w3, drop=step.ell)
        assert r is Semirecursive.HOLDS
        assert semirecursive_check(caw, ClassAWeights(2), w3) is Semirecursive.HOLDS


def test_semirecursive_scaling_search(w3):
    caw = random_class_a(3, 1.0, 3)
    step = reduce(caw)
    assert semirecursive_check(caw, step.output, w3, drop=step.ell) is Semirecursive.HOLDS
    scale = 2.0
    while semirecursive_check(caw, step.output.scaled(scale, scale), w3, drop=step.ell) \
            is not Semirecursive.PRECONDITION_FAILED:
        scale *= 2
        assert scale < 1e6
    assert scale >= 2.0


def test_rank_one_examples():
    n = 4
    star = ClassAWeights(n, {}, {(i, n): 1.0 for i in range(1, n)})
    r = rank_one_discrepancy(star)
    assert r["ell"] == 4 and r["d_ell"] == 3.0
    assert r["entry_deviation"] < 1e-15
    assert rank_one_identity_check(star)
    no_touch = ClassAWeights(n, {}, {(1, 2): 1.0, (2, 3): 2.0})
    r = rank_one_discrepancy(no_touch)
    assert r["vacuous"] and r["entry_deviation"] == 0.0


@pytest.mark.parametrize("seed", range(20))
def test_rank_one_random(seed):
    caw = random_class_a(4, 0.8, seed)
    r = rank_one_discrepancy(caw)
    assert r["entry_deviation"] < 1e-12
    assert rank_one_identity_check(caw)
    assert r["two_a_hat_deviation"] < 1e-8


def test_counterexample_family_a(w2):
    rep = counterexample(default_counterexample("a"), w2)
    g = rep["gaps"]
    assert g["dn"] == pytest.approx(2.0, abs=1e-3)
    assert g["d0n"] == pytest.approx(2e-3, abs=1e-12)
    assert rep["passed"] and rep["margin"] > 1


def test_counterexample_family_b(w2):
    rep = counterexample(default_counterexample("b"), w2)
    assert rep["gaps"]["dn"] == pytest.approx(2e-3, abs=1e-12)
    assert rep["gaps"]["d0n"] == pytest.approx(2.0, abs=1e-12)
    assert rep["passed"] and rep["margin"] > 1


def test_counterexample_family_c(w2):
    rep = counterexample(default_counterexample("c"), w2)
    assert rep["gaps"]["jn"] == pytest.approx(4e-3, abs=1e-12)
    assert rep["gaps"]["cayley"] == pytest.approx(4e-3, abs=1e-10)
    assert rep["gaps"]["pn"] >= 2.0 - 1e-10
    assert rep["passed"] and rep["margin"] > 0.1


def test_counterexample_n3(w3):
    for fam in "abc":
        assert counterexample(default_counterexample(fam, 3), w3)["passed"]


def test_counterexample_validation():
    with pytest.raises(CounterexampleError, match="connectivity"):
        CounterexampleSpec(Family.SIGN_DOMINANT, 3, 1e-3, {(1,): 1, (2,): 1, (3,): 1}, {(1, 2): 1.0})
    with pytest.raises(CounterexampleError, match="coverage"):
        CounterexampleSpec(Family.SIGN_DOMINANT, 2, 1e-3, {(1,): 1.0}, {(1, 2): 1.0})
    with pytest.raises(CounterexampleError, match="coverage"):
        CounterexampleSpec(Family.EVEN_SETS, 2, 1e-3, {(1,): 1.0, (2,): 1.0}, {(1, 2): 1.0})
    with pytest.raises(CounterexampleError):
        CounterexampleSpec(Family.EVEN_SETS, 2, 1e-3, {(1, 2): 1.0}, {(1, 2): 1.0})
    with pytest.raises(CounterexampleError):
        default_counterexample("a", 2, epsilon=0.0)
