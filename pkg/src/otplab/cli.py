"""Command-line front end: scenario configuration, seeded runs, reports.

Three commands:

* simulate -- run a scenario and report transcripts plus the exact leakage
  accounting (the numbers come from full enumeration, never from trial
  frequencies).
* attack -- simulate and additionally mount the eavesdropper attack that
  matches the scenario, reporting what Eve recovers.
* audit -- print the claimed-vs-effective throughput table for the two
  flawed schemes and the correct baseline.

Reports go to standard output (or --out PATH); diagnostics to standard
error.  Exit codes: 0 success, 2 configuration error, 1 internal failure.
Identical command lines, including the seed, produce byte-identical JSON.
The default seed can be overridden with the OTPLAB_SEED environment
variable.

Bell pairs on the command line use the tokens phi+, phi-, psi+, psi-,
joined by ':' within a pair and ',' between pairs, e.g.
--pairs phi+:psi+,phi-:phi-.
"""

import argparse
import json
import os
import random
import sys
import traceback
from dataclasses import asdict, dataclass

from . import __version__
from .bits import check_bits, random_bits
from .cryptanalysis import (
    attack_es_qkd_keyset,
    attack_es_qkd_parity,
    efficiency_audit,
    leakage_report,
    xor_chain_view,
)
from .infotheory import Distribution, enumerate_joint, mutual_information, posterior
from .otp import KeyMaterial, ciphertext_joint, derived_correlated, encrypt, random_key
from .protocols import eve_view, run_es_qkd, run_otp_baseline, run_xor_chain
from .quantum import BellLabel

SCENARIOS = ("xor-chain", "es-qkd", "otp-baseline")
# Exact-analysis ceilings: 2**bits messages for the chain, and
# 2**bits plaintexts x 2**bits pads for the baseline (the 2**24 budget).
MAX_XOR_MESSAGE_BITS = 16
MAX_OTP_MESSAGE_BITS = 12
POSTERIOR_TOL = 1e-9


class ConfigError(Exception):
    """Invalid scenario configuration; maps to exit code 2."""


@dataclass
class ScenarioConfig:
    scenario: str
    message_bits: int | None
    pairs: list | None
    seed: int
    trials: int
    fmt: str
    out: str | None = None
    plaintext: str | None = None

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "message_bits": self.message_bits,
            "pairs": None if self.pairs is None else [f"{a}:{b}" for a, b in self.pairs],
            "seed": self.seed,
            "trials": self.trials,
            "format": self.fmt,
            "plaintext": self.plaintext,
        }


def parse_pairs(text: str) -> list:
    """Parse "phi+:psi+,phi-:phi-" into a list of Bell label pairs."""
    pairs = []
    for chunk in text.split(","):
        parts = chunk.strip().split(":")
        if len(parts) != 2:
            raise ConfigError(f"pair {chunk!r} must be two labels joined by ':'")
        try:
            pairs.append((BellLabel.from_token(parts[0]), BellLabel.from_token(parts[1])))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if not pairs:
        raise ConfigError("at least one Bell pair is required")
    return pairs


def default_seed() -> int:
    raw = os.environ.get("OTPLAB_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"OTPLAB_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="otplab",
        description="Simulate flawed quantum-communication pads and measure their leakage.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--scenario", choices=SCENARIOS, required=True)
        p.add_argument(
            "--message-bits", type=int, default=2,
            help="message length for xor-chain (even) and otp-baseline",
        )
        p.add_argument(
            "--pairs", default="phi+:psi+",
            help="initial Bell pairs for es-qkd, e.g. phi+:psi+,phi-:phi-",
        )
        p.add_argument("--seed", type=int, default=None, help="defaults to $OTPLAB_SEED or 0")
        p.add_argument("--trials", type=int, default=1)
        p.add_argument("--format", choices=("json", "text"), default="text", dest="fmt")
        p.add_argument("--out", default=None, help="write the report here instead of stdout")

    sim = sub.add_parser("simulate", help="run a scenario and report exact leakage")
    add_common(sim)
    atk = sub.add_parser("attack", help="run a scenario and mount Eve's attack")
    add_common(atk)
    atk.add_argument(
        "--plaintext", default=None,
        help="es-qkd only: plaintext to encrypt with the run's key (4 bits per pair)",
    )
    aud = sub.add_parser("audit", help="print the claimed-vs-effective table")
    aud.add_argument("--format", choices=("json", "text"), default="text", dest="fmt")
    aud.add_argument("--out", default=None)
    return parser


def config_from_args(args) -> ScenarioConfig:
    seed = args.seed if args.seed is not None else default_seed()
    if not 0 <= seed < (1 << 64):
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed}")
    if args.trials < 1:
        raise ConfigError(f"trials must be >= 1, got {args.trials}")
    plaintext = getattr(args, "plaintext", None)

    message_bits = None
    pairs = None
    if args.scenario == "xor-chain":
        message_bits = args.message_bits
        if message_bits < 2 or message_bits % 2 != 0:
            raise ConfigError(f"xor-chain needs an even message length >= 2, got {message_bits}")
        if message_bits > MAX_XOR_MESSAGE_BITS:
            raise ConfigError(
                f"xor-chain message length is capped at {MAX_XOR_MESSAGE_BITS} "
                "(exact enumeration over all messages)"
            )
    elif args.scenario == "otp-baseline":
        message_bits = args.message_bits
        if message_bits < 1:
            raise ConfigError(f"otp-baseline needs a message length >= 1, got {message_bits}")
        if message_bits > MAX_OTP_MESSAGE_BITS:
            raise ConfigError(
                f"otp-baseline message length is capped at {MAX_OTP_MESSAGE_BITS} "
                "(exact enumeration over all plaintext/pad pairs)"
            )
    else:
        pairs = parse_pairs(args.pairs)

    if plaintext is not None:
        if args.scenario != "es-qkd":
            raise ConfigError("--plaintext applies to the es-qkd scenario only")
        check = None
        try:
            check = check_bits(plaintext, "plaintext")
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if len(check) != 4 * len(pairs):
            raise ConfigError(
                f"plaintext must cover 4 bits per pair ({4 * len(pairs)}), got {len(check)}"
            )

    return ScenarioConfig(
        scenario=args.scenario,
        message_bits=message_bits,
        pairs=pairs,
        seed=seed,
        trials=args.trials,
        fmt=args.fmt,
        out=args.out,
        plaintext=plaintext,
    )


def _trial_rngs(config: ScenarioConfig):
    base = random.Random(config.seed)
    return [random.Random(base.getrandbits(64)) for _ in range(config.trials)]


def _distributions_match(a: Distribution, b: Distribution) -> bool:
    outcomes = set(a.entries) | set(b.entries)
    return all(abs(a.probability(o) - b.probability(o)) <= POSTERIOR_TOL for o in outcomes)


def _run_xor_chain(config: ScenarioConfig, with_attack: bool) -> dict:
    prior = Distribution.uniform_bits(config.message_bits)
    joint = enumerate_joint(prior, xor_chain_view)
    eve_bits = mutual_information(joint)
    trials = []
    leakage = None
    for rng in _trial_rngs(config):
        run = run_xor_chain(random_bits(config.message_bits, rng))
        view = eve_view(run.transcript)
        post = posterior(joint, view)
        if leakage is None:
            leakage = leakage_report(run, (post, eve_bits))
        attack = None
        if with_attack:
            attack = {
                "view": view,
                "posterior_support": list(post.support),
                "eve_bits": eve_bits,
            }
        trials.append({
            "transcript": run.transcript.to_records(),
            "key_or_message": run.message,
            "attack": attack,
        })
    return {"trials": trials, "leakage": leakage}


def _run_es_qkd(config: ScenarioConfig, with_attack: bool) -> dict:
    key_sets, key_entropy = attack_es_qkd_keyset(config.pairs)
    trials = []
    leakage = None
    for rng in _trial_rngs(config):
        run = run_es_qkd(config.pairs, rng)
        if leakage is None:
            leakage = leakage_report(run, (key_sets, key_entropy))
        attack = None
        if with_attack:
            attack = {
                "key_sets": [list(blocks) for blocks in key_sets],
                "key_entropy_given_eve": key_entropy,
            }
            if config.plaintext is not None:
                pad = KeyMaterial(run.key, derived_correlated("entanglement-swap outcomes"))
                ciphertext = encrypt(config.plaintext, pad).ciphertext
                recovered = []
                true = []
                for i, pair in enumerate(config.pairs):
                    block = slice(4 * i, 4 * i + 4)
                    recovered.append(list(attack_es_qkd_parity(ciphertext[block], pair)))
                    p = [int(ch) for ch in config.plaintext[block]]
                    true.append([p[0] ^ p[2], p[1] ^ p[3]])
                attack.update({
                    "ciphertext": ciphertext,
                    "recovered_parities": recovered,
                    "true_parities": true,
                    "parities_match": recovered == true,
                })
        trials.append({
            "transcript": [],
            "key_or_message": run.key,
            "attack": attack,
        })
    return {"trials": trials, "leakage": leakage}


def _run_otp_baseline(config: ScenarioConfig, with_attack: bool) -> dict:
    prior = Distribution.uniform_bits(config.message_bits)
    joint = ciphertext_joint(prior)
    eve_bits = mutual_information(joint)
    trials = []
    leakage = None
    for rng in _trial_rngs(config):
        plaintext = random_bits(config.message_bits, rng)
        key = random_key(config.message_bits, rng)
        transcript = run_otp_baseline(plaintext, key)
        if leakage is None:
            leakage = leakage_report(transcript, (None, eve_bits))
        attack = None
        if with_attack:
            ciphertext = eve_view(transcript)
            post = posterior(joint, ciphertext)
            attack = {
                "ciphertext": ciphertext,
                "eve_bits": eve_bits,
                "posterior_equals_prior": _distributions_match(post, prior),
            }
        trials.append({
            "transcript": transcript.to_records(),
            "key_or_message": plaintext,
            "attack": attack,
        })
    return {"trials": trials, "leakage": leakage}


_RUNNERS = {
    "xor-chain": _run_xor_chain,
    "es-qkd": _run_es_qkd,
    "otp-baseline": _run_otp_baseline,
}


def build_report(config: ScenarioConfig, with_attack: bool) -> dict:
    result = _RUNNERS[config.scenario](config, with_attack)
    leakage = result["leakage"]
    return {
        "scenario": config.scenario,
        "config": config.to_dict(),
        "trials": result["trials"],
        "leakage": asdict(leakage),
        "efficiency": asdict(efficiency_audit(leakage)),
        "tool_version": __version__,
    }


def build_audit_rows() -> list:
    """Claimed-vs-effective table at canonical sizes, from the real pipeline."""
    rows = []
    rng = random.Random(0)

    run = run_xor_chain("00")
    prior = Distribution.uniform_bits(2)
    joint = enumerate_joint(prior, xor_chain_view)
    leak = leakage_report(run, (None, mutual_information(joint)))
    rows.append(("xor-chain", "ghz-state", leak))

    es_run = run_es_qkd([(BellLabel.from_token("phi+"), BellLabel.from_token("psi+"))], rng)
    leak = leakage_report(es_run, attack_es_qkd_keyset(es_run.initial_pairs))
    rows.append(("es-qkd", "swap", leak))

    key = random_key(2, rng)
    transcript = run_otp_baseline("00", key)
    eve_bits = mutual_information(ciphertext_joint(prior))
    leak = leakage_report(transcript, (None, eve_bits))
    rows.append(("otp-baseline", "pad-bit", leak))

    table = []
    for scenario, unit, leak in rows:
        verdict = efficiency_audit(leak)
        claimed = verdict.claimed_bits_per_carrier
        effective = verdict.effective_bits_per_carrier
        if abs(claimed - round(claimed)) > 1e-9 or abs(effective - round(effective)) > 1e-9:
            raise AssertionError("audit table rates must be exact integers")
        table.append({
            "scenario": scenario,
            "carrier_unit": unit,
            "claimed_bits_per_carrier": int(round(claimed)),
            "effective_bits_per_carrier": int(round(effective)),
            "effective_bits_per_qubit": verdict.effective_bits_per_qubit,
            "holevo_ok": verdict.holevo_ok,
        })
    return table


def render_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def render_report_text(report: dict) -> str:
    lines = [f"scenario: {report['scenario']}"]
    cfg = report["config"]
    lines.append("config: " + " ".join(f"{k}={cfg[k]}" for k in sorted(cfg)))
    for i, trial in enumerate(report["trials"], start=1):
        lines.append(f"trial {i}:")
        if trial["transcript"]:
            for event in trial["transcript"]:
                lines.append(f"  {event['sender']} {event['channel']} {event['payload']}")
        else:
            lines.append("  (no channel events)")
        lines.append(f"  key_or_message: {trial['key_or_message']}")
        attack = trial["attack"]
        if attack is not None:
            for k in sorted(attack):
                lines.append(f"  attack.{k}: {attack[k]}")
    leak = report["leakage"]
    lines.append(
        "leakage: claimed={claimed_bits} receiver={receiver_bits} eve={eve_bits} "
        "secure={secure_bits} carriers={c} qubits={q}".format(
            c=leak["resources"]["carrier_states"], q=leak["resources"]["qubits"], **leak
        )
    )
    eff = report["efficiency"]
    lines.append(
        "efficiency: claimed/carrier={claimed_bits_per_carrier} "
        "effective/carrier={effective_bits_per_carrier} "
        "effective/qubit={effective_bits_per_qubit} holevo_ok={holevo_ok}".format(**eff)
    )
    lines.append(f"tool_version: {report['tool_version']}")
    return "\n".join(lines) + "\n"


def render_audit_text(rows: list) -> str:
    header = f"{'scenario':<14}{'claimed':>8}{'effective':>10}  per-carrier  bits/qubit  ceiling"
    lines = [header]
    for row in rows:
        lines.append(
            f"{row['scenario']:<14}{row['claimed_bits_per_carrier']:>8}"
            f"{row['effective_bits_per_carrier']:>10}  {row['carrier_unit']:<11}"
            f"  {row['effective_bits_per_qubit']:<10.4g}"
            f"  {'ok' if row['holevo_ok'] else 'VIOLATED'}"
        )
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as handle:
            handle.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 2
    try:
        if args.command == "audit":
            rows = build_audit_rows()
            if args.fmt == "json":
                text = render_json({"rows": rows, "tool_version": __version__})
            else:
                text = render_audit_text(rows)
            _emit(text, args.out)
            return 0
        config = config_from_args(args)
        report = build_report(config, with_attack=args.command == "attack")
        text = render_json(report) if config.fmt == "json" else render_report_text(report)
        _emit(text, config.out)
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc(file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
