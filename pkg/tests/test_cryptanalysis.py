import itertools
import random

import pytest

from otplab.bits import all_bitstrings, xor_bits
from otplab.cryptanalysis import (
    EfficiencyVerdict,
    LeakageReport,
    ResourceCount,
    attack_es_qkd_keyset,
    attack_es_qkd_parity,
    attack_otp_baseline,
    attack_xor_chain,
    efficiency_audit,
    leakage_report,
    xor_chain_view,
)
from otplab.infotheory import Distribution, enumerate_joint, posterior
from otplab.otp import random_key
from otplab.protocols import eve_view, run_es_qkd, run_otp_baseline, run_xor_chain
from otplab.quantum import BELL_LABELS, PHI_PLUS, PSI_PLUS, swap_distribution_oracle

ALL_PAIRS = list(itertools.product(BELL_LABELS, BELL_LABELS))


class TestAttackXorChain:
    def test_two_bit_posterior_and_gain(self):
        run = run_xor_chain("11")  # broadcast is 0
        post, eve_bits = attack_xor_chain(run, Distribution.uniform_bits(2))
        assert set(post.support) == {"00", "11"}
        assert post.probability("00") == pytest.approx(0.5, abs=1e-9)
        assert eve_bits == pytest.approx(1.0, abs=1e-9)

    def test_two_bit_throughput(self):
        run = run_xor_chain("11")
        result = attack_xor_chain(run, Distribution.uniform_bits(2))
        report = leakage_report(run, result)
        assert report.receiver_bits == pytest.approx(2.0, abs=1e-9)
        assert report.eve_bits == pytest.approx(1.0, abs=1e-9)
        assert report.secure_bits == pytest.approx(1.0, abs=1e-9)

    def test_eight_bit_gain(self):
        run = run_xor_chain("10110100")
        _, eve_bits = attack_xor_chain(run, Distribution.uniform_bits(8))
        assert eve_bits == pytest.approx(4.0, abs=1e-9)

    @pytest.mark.parametrize("n_bits", [2, 4, 6, 8, 10, 12, 14, 16])
    def test_leakage_is_half_the_message(self, n_bits):
        run = run_xor_chain("01" * (n_bits // 2))
        _, eve_bits = attack_xor_chain(run, Distribution.uniform_bits(n_bits))
        assert eve_bits == pytest.approx(n_bits / 2, abs=1e-9)

    def test_view_function_matches_protocol(self):
        for message in all_bitstrings(6):
            assert xor_chain_view(message) == eve_view(run_xor_chain(message).transcript)

    def test_posterior_is_consistent_with_view(self):
        run = run_xor_chain("0110")
        post, _ = attack_xor_chain(run, Distribution.uniform_bits(4))
        view = eve_view(run.transcript)
        assert all(xor_chain_view(m) == view for m in post.support)
        assert run.message in post.support

    def test_prior_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            attack_xor_chain(run_xor_chain("11"), Distribution.uniform_bits(4))


class TestAttackEsQkdKeyset:
    def test_phi_plus_psi_plus_key_set(self):
        key_sets, total = attack_es_qkd_keyset([(PHI_PLUS, PSI_PLUS)])
        assert key_sets == [("0010", "0111", "1000", "1101")]
        assert total == pytest.approx(2.0, abs=1e-9)

    def test_equal_labels_key_set(self):
        key_sets, total = attack_es_qkd_keyset([(PHI_PLUS, PHI_PLUS)])
        assert key_sets == [("0000", "0101", "1010", "1111")]
        assert total == pytest.approx(2.0, abs=1e-9)

    def test_two_swaps_add(self):
        _, total = attack_es_qkd_keyset([(PHI_PLUS, PSI_PLUS), (PHI_PLUS, PHI_PLUS)])
        assert total == pytest.approx(4.0, abs=1e-9)

    @pytest.mark.parametrize("pair", ALL_PAIRS)
    def test_every_initial_pair_leaves_two_bits(self, pair):
        key_sets, total = attack_es_qkd_keyset([pair])
        assert len(key_sets[0]) == 4
        assert total == pytest.approx(2.0, abs=1e-9)

    def test_residual_half_of_key_is_uniform(self):
        # What Eve cannot pin down -- Alice's result label -- runs over all
        # four values exactly once inside the reachable key set.
        for pair in ALL_PAIRS:
            key_sets, _ = attack_es_qkd_keyset([pair])
            prior = Distribution.uniform(key_sets[0])
            joint = enumerate_joint(prior, lambda key: "")
            post = posterior(joint, "")
            first_halves = {key[:2] for key in post.support}
            assert first_halves == {"00", "01", "10", "11"}
            marginal = {}
            for key, p in post.entries.items():
                marginal[key[:2]] = marginal.get(key[:2], 0.0) + p
            for p in marginal.values():
                assert p == pytest.approx(0.25, abs=1e-9)


class TestAttackEsQkdParity:
    def test_zero_ciphertext_reveals_key_parities(self):
        assert attack_es_qkd_parity("0000", (PHI_PLUS, PSI_PLUS)) == (1, 0)

    def test_substitution_example(self):
        assert attack_es_qkd_parity("1010", (PHI_PLUS, PSI_PLUS)) == (1, 0)

    def test_equal_labels_pass_ciphertext_parities_through(self):
        assert attack_es_qkd_parity("1100", (PHI_PLUS, PHI_PLUS)) == (1, 1)
        assert attack_es_qkd_parity("0100", (PHI_PLUS, PHI_PLUS)) == (0, 1)

    def test_sound_on_all_1024_cases(self):
        failures = 0
        cases = 0
        for pair in ALL_PAIRS:
            for x, y in swap_distribution_oracle(*pair).support:
                key = x.bits + y.bits
                for plaintext in all_bitstrings(4):
                    ciphertext = xor_bits(plaintext, key)
                    recovered = attack_es_qkd_parity(ciphertext, pair)
                    p = [int(ch) for ch in plaintext]
                    if recovered != (p[0] ^ p[2], p[1] ^ p[3]):
                        failures += 1
                    cases += 1
        assert cases == 1024
        assert failures == 0

    def test_rejects_wrong_block_size(self):
        with pytest.raises(ValueError):
            attack_es_qkd_parity("00", (PHI_PLUS, PSI_PLUS))


class TestAttackOtpBaseline:
    def test_posterior_equals_prior(self):
        prior = Distribution.uniform_bits(4)
        post, eve_bits = attack_otp_baseline(prior, "1011")
        assert eve_bits == pytest.approx(0.0, abs=1e-9)
        for outcome in prior.entries:
            assert post.probability(outcome) == pytest.approx(0.0625, abs=1e-9)


class TestLeakageReport:
    def test_xor_chain_accounting(self):
        run = run_xor_chain("11")
        report = leakage_report(run, attack_xor_chain(run, Distribution.uniform_bits(2)))
        assert report.scenario == "xor-chain"
        assert report.claimed_bits == 2
        assert report.secure_bits == pytest.approx(1.0, abs=1e-9)
        assert report.resources == ResourceCount(carrier_states=1, qubits=3)

    def test_es_qkd_accounting(self):
        run = run_es_qkd([(PHI_PLUS, PSI_PLUS)], random.Random(1))
        report = leakage_report(run, attack_es_qkd_keyset(run.initial_pairs))
        assert report.claimed_bits == 4
        assert report.eve_bits == pytest.approx(2.0, abs=1e-9)
        assert report.secure_bits == pytest.approx(2.0, abs=1e-9)
        assert report.resources == ResourceCount(carrier_states=1, qubits=4)

    def test_otp_baseline_accounting(self):
        rng = random.Random(9)
        transcript = run_otp_baseline("110100", random_key(6, rng))
        prior = Distribution.uniform_bits(6)
        report = leakage_report(transcript, attack_otp_baseline(prior, eve_view(transcript)))
        assert report.eve_bits == pytest.approx(0.0, abs=1e-9)
        assert report.secure_bits == pytest.approx(6.0, abs=1e-9)

    def test_invariants_enforced(self):
        with pytest.raises(ValueError):
            LeakageReport("x", 2, 1.0, 2.0, -1.0, ResourceCount(1, 3))
        with pytest.raises(ValueError):
            LeakageReport("x", 2, 2.0, 1.0, 0.5, ResourceCount(1, 3))


class TestEfficiencyAudit:
    def test_xor_chain_rates(self):
        run = run_xor_chain("11")
        report = leakage_report(run, attack_xor_chain(run, Distribution.uniform_bits(2)))
        verdict = efficiency_audit(report)
        assert verdict.claimed_bits_per_carrier == pytest.approx(2.0, abs=1e-9)
        assert verdict.effective_bits_per_carrier == pytest.approx(1.0, abs=1e-9)
        assert verdict.holevo_ok

    def test_es_qkd_rates(self):
        run = run_es_qkd([(PHI_PLUS, PSI_PLUS)], random.Random(2))
        verdict = efficiency_audit(
            leakage_report(run, attack_es_qkd_keyset(run.initial_pairs))
        )
        assert verdict.claimed_bits_per_carrier == pytest.approx(4.0, abs=1e-9)
        assert verdict.effective_bits_per_carrier == pytest.approx(2.0, abs=1e-9)
        assert verdict.effective_bits_per_qubit == pytest.approx(0.5, abs=1e-9)
        assert verdict.holevo_ok

    def test_ceiling_violation_is_flagged(self):
        impossible = LeakageReport("x", 8, 8.0, 0.0, 8.0, ResourceCount(1, 4))
        verdict = efficiency_audit(impossible)
        assert not verdict.holevo_ok

    def test_rejects_empty_resources(self):
        report = LeakageReport("x", 2, 2.0, 1.0, 1.0, ResourceCount(1, 3))
        broken = LeakageReport("x", 2, 2.0, 1.0, 1.0, ResourceCount(0, 0))
        assert isinstance(efficiency_audit(report), EfficiencyVerdict)
        with pytest.raises(ValueError):
            efficiency_audit(broken)
