import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polytriple.classifier import (
    VACUOUS,
    ClassificationResult,
    Verdict,
    check_gcd_power_of_two,
    classify,
    classify_consecutive,
    classify_power_family,
    fermat_mersenne_guarantee,
    find_condition_i_prime,
    find_condition_ii_prime,
    parity_pattern,
    replay_witness_chain,
)
from polytriple.errors import DomainError

orders = st.integers(min_value=3, max_value=40)


def test_gcd_examples():
    assert check_gcd_power_of_two(3, 4, 5)
    assert not check_gcd_power_of_two(5, 8, 11)
    assert check_gcd_power_of_two(3, 3, 3)
    assert check_gcd_power_of_two(6, 10, 18)


def test_condition_i_examples():
    assert find_condition_i_prime(3, 5, 9) == 7
    assert find_condition_i_prime(3, 4, 7) == 5
    assert find_condition_i_prime(3, 4, 4) is None


def test_condition_ii_examples():
    assert find_condition_ii_prime(3, 4, 7) is None
    assert find_condition_ii_prime(3, 6, 13) == 11
    assert find_condition_ii_prime(3, 5, 7) == VACUOUS


def test_parity_patterns():
    assert parity_pattern(3, 5, 7) == "i"
    assert parity_pattern(5, 6, 7) == "ii"
    assert parity_pattern(6, 4, 8) == "ii"
    assert parity_pattern(3, 4, 7) == "iii"
    assert parity_pattern(3, 4, 5) is None


def test_classify_examples():
    r = classify(3, 5, 9)
    assert r.verdict == Verdict.ALMOST_UNIVERSAL
    assert r.witnesses["p"] == 7 and r.witnesses["q"] == VACUOUS
    assert replay_witness_chain(r.witness_chain)

    r = classify(5, 6, 7)
    assert r.verdict == Verdict.ALMOST_UNIVERSAL and r.matched_statement == "mod3-parity-criterion(ii)"
    assert any("m = 1 (mod 4)" in n for n in r.notes)

    r = classify(4, 4, 4)
    assert r.verdict == Verdict.LOCAL_OBSTRUCTION
    assert r.witnesses["obstruction"]["modulus"] == 8 and r.witnesses["obstruction"]["attained"] == 7

    r = classify(3, 4, 5)
    assert r.verdict == Verdict.ALMOST_UNIVERSAL_OUTSIDE_S
    assert r.witnesses["exceptional_divisors"] == [1, 2, 3, 6]
    assert any("Sun" in n for n in r.notes)


def test_classify_on_class():
    r = classify(3, 3, 3)
    assert r.verdict == Verdict.ALMOST_UNIVERSAL_ON_CLASS and r.residue_class == 1


def test_classify_inconclusive_when_all_divisible_by_4():
    assert classify(4, 4, 8).verdict == Verdict.INCONCLUSIVE


def test_classify_domain_error():
    with pytest.raises(DomainError):
        classify(2, 4, 5)


def test_sufficiently_large_flag():
    assert classify(5, 6, 7).sufficiently_large
    assert not classify(4, 4, 4).sufficiently_large


@given(orders, orders, orders)
def test_permutation_invariance(a, b, c):
    ref = classify(a, b, c)
    for perm in itertools.permutations((a, b, c)):
        r = classify(*perm)
        assert (r.verdict, r.matched_statement, r.residue_class, r.witnesses) == (
            ref.verdict, ref.matched_statement, ref.residue_class, ref.witnesses
        )


@given(st.integers(3, 80), st.integers(3, 80), st.integers(3, 80))
def test_no_obstruction_verdict_unless_all_divisible_by_4(a, b, c):
    if any(m % 4 for m in (a, b, c)):
        assert classify(a, b, c).verdict != Verdict.LOCAL_OBSTRUCTION


@given(orders, orders, orders)
def test_result_json_round_trip(a, b, c):
    r = classify(a, b, c)
    back = ClassificationResult.from_dict(json.loads(json.dumps(r.to_dict())))
    assert back.to_dict() == r.to_dict()


def test_replay_detects_tampering():
    chain = list(classify(3, 5, 9).witness_chain)
    assert replay_witness_chain(chain)
    step = next(i for i, s in enumerate(chain) if s["check"] == "legendre")
    chain[step] = dict(chain[step], expect=1)
    assert not replay_witness_chain(chain)


def test_consecutive_examples():
    assert classify_consecutive(5).verdict == Verdict.ALMOST_UNIVERSAL
    assert classify_consecutive(9).verdict == Verdict.ALMOST_UNIVERSAL
    r = classify_consecutive(4)
    assert set(r.witnesses["exceptional_divisors"]) <= {2}
    assert replay_witness_chain(r.witness_chain)


@pytest.mark.parametrize("m", range(3, 40))
def test_consecutive_narrowing_is_replayable(m):
    r = classify_consecutive(m)
    if r.verdict == Verdict.ALMOST_UNIVERSAL_OUTSIDE_S:
        assert r.witnesses["exceptional_divisors"] == [2]
        assert replay_witness_chain(r.witness_chain)


def test_power_family_condition_i():
    r = classify_power_family(1, 5, 3, 2, 2, 2)
    assert r.triple == (6, 22, 14)
    assert r.verdict == Verdict.ALMOST_UNIVERSAL and r.matched_statement == "power-family(i)"
    assert replay_witness_chain(r.witness_chain)


def test_power_family_condition_ii():
    r = classify_power_family(1, 5, 3, 4, 2, 2)
    assert r.verdict == Verdict.ALMOST_UNIVERSAL and r.matched_statement == "power-family(ii)"
    assert replay_witness_chain(r.witness_chain)


def test_power_family_condition_iii_gate():
    # k - m = 1 fails the gate
    r = classify_power_family(1, 13, 3, 3, 3, 2)
    assert "no power-family condition matched" in r.notes


def test_power_family_condition_iii_replay_is_honest():
    # the matched condition's mod-3 exclusion does not hold, so no power-family verdict
    r = classify_power_family(1, 13, 3, 5, 5, 2)
    assert not r.matched_statement.startswith("power-family")
    assert r.witnesses.get("power_family_condition") == "iii"


@pytest.mark.parametrize(
    "args",
    [(2, 5, 3, 2, 2, 2), (3, 5, 9, 2, 2, 2), (1, 5, 3, 2, 3, 2), (1, 5, 3, 2, 2, 1)],
)
def test_power_family_hypotheses(args):
    with pytest.raises(DomainError):
        classify_power_family(*args)


def test_fermat_and_mersenne():
    r = fermat_mersenne_guarantee("fermat", (1, 2, 3))
    assert r.triple == (7, 19, 259)
    assert r.verdict == Verdict.ALMOST_UNIVERSAL_ON_CLASS and r.residue_class == 2
    assert replay_witness_chain(r.witness_chain)
    r = fermat_mersenne_guarantee("mersenne", (3, 5, 7))
    assert r.triple == (9, 33, 129)
    assert r.verdict == Verdict.ALMOST_UNIVERSAL_ON_CLASS and r.residue_class == 1
    assert replay_witness_chain(r.witness_chain)


@pytest.mark.parametrize("kind, idx", [("fermat", (1, 1, 2)), ("mersenne", (3, 4, 5)), ("mersenne", (2, 3, 5))])
def test_fermat_mersenne_domain_errors(kind, idx):
    with pytest.raises(DomainError):
        fermat_mersenne_guarantee(kind, idx)
