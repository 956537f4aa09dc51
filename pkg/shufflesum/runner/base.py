import argparse
import configparser
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import tqdm

from .. import log
from .._version import __version__
from ..analysis.distribution import sd_to_uniform_sweep
from ..analysis.moments import first_moment_check, second_moment_experiment
from ..analysis.montecarlo import mc_advantage, multiset_acceptor, splitmix_sampler, zero_sum_subset_acceptor
from ..analysis.security import security_check
from ..dp.base import dp_privacy_accounting
from ..dp.harness import dp_sum_experiment
from ..dp.noise import polya_noise, zero_noise
from ..dp.params import derive_dp_params
from ..ffield.base import field_sum
from ..linalg.multinomial import multinomial_facts_check
from ..linalg.partitions import matching_exhaustive_check
from ..linalg.tail import deficit_tail_sweep
from ..lowerbound.distinguisher import general_distinguisher, splitmix_distinguisher_advantage
from ..lowerbound.encoder import splitmix_encoder_spec
from ..lowerbound.field import avg_field_distance, invy_bound_check
from ..lowerbound.summary import lower_bound_summary
from ..protocol.base import analyze, asymptotic_messages, encode, required_messages, shuffle
from ..protocol.params import ProtocolParams, as_modulus
from ..setup.config import Config
from ..utils.rng import make_generator
from .figure1 import figure1_table
from .records import FORMATS, ExperimentRecord, write_records

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


@dataclass(frozen=True)
class RunSettings:
    """
    Values every subcommand may need, from the loaded config overridden by the common flags.
    """

    budget: int
    rational_state_limit: int
    partition_budget: int
    n_jobs: int | None
    chunk_size: int
    stderr_slack: float
    truncation_delta_fraction: float
    error_tolerance_constant: float


def int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(value) for value in text.split(",") if value.strip() != "")
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from e


def float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(value) for value in text.split(",") if value.strip() != "")
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from e


def _gamma(args: argparse.Namespace) -> float:
    if args.sigma is not None and args.gamma is not None:
        raise ValueError("Give --gamma or --sigma, not both")
    if args.sigma is not None:
        return 2.0 ** (-args.sigma - 1)
    return 1.0 if args.gamma is None else args.gamma


def _protocol_params(args: argparse.Namespace, n: int, m: int | None = None) -> ProtocolParams:
    m = args.m if m is None else m
    if m is None:
        raise ValueError("--m is required")
    if args.sigma is not None:
        return ProtocolParams.from_sigma(n, m, args.q, args.sigma)
    return ProtocolParams(n, m, as_modulus(args.q), _gamma(args))


def _party_count(args: argparse.Namespace, x: Sequence[int] | None) -> int:
    if x is None:
        if args.n is None:
            raise ValueError("--n is required when --x is not given")
        return args.n
    if args.n is not None and args.n != len(x):
        raise ValueError(f"--n is {args.n} but --x has {len(x)} inputs")
    return len(x)


def _record(args: argparse.Namespace, params: dict, results: dict, passed: bool, seeded: bool = True):
    return ExperimentRecord(args.command, params, args.seed if seeded else None, results, passed)


def run_encode(args: argparse.Namespace, settings: RunSettings) -> list[ExperimentRecord]:
    modulus = as_modulus(args.q)
    shares = encode(modulus.element(args.x), args.m, make_generator(args.seed))
    total = field_sum(shares.shares, modulus.q)
    results = {"shares": shares.shares, "sum": total}
    return [_record(args, {"x": args.x, "m": args.m, "q": args.q}, results, total == args.x % modulus.q)]


def run_simulate(args: argparse.Namespace, settings: RunSettings) -> list[ExperimentRecord]:
    n = _party_count(args, args.x)
    params = ProtocolParams.create(n, args.m, args.q)
    rng = make_generator(args.seed)
    correct = 0
    first_run = None
    for trial in tqdm.trange(args.trials, desc="Simulating", unit="run", disable=None):
        x = args.x if args.x is not None else rng.integers(0, params.q, size=n).tolist()
        transcript = shuffle([encode(params.modulus.element(value), params.m, rng) for value in x], rng)
        output = analyze(transcript).value
        correct += output == sum(x) % params.q
        if trial == 0:
            first_run = {"inputs": list(x), "messages": transcript.messages, "output": output}
    results = {"trials": args.trials, "correct": correct, "first_run": first_run}
    return [_record(args, {"n": n, "m": params.m, "q": params.q, "x": args.x}, results, correct == args.trials)]


def run_msg_count(args: argparse.Namespace, settings: RunSettings) -> list[ExperimentRecord]:
    gamma = _gamma(args)
    results = {"m": required_messages(args.n, args.q, gamma), "gamma": gamma}
    if args.sigma is not None:
        results["asymptotic"] = asymptotic_messages(args.n, args.q, args.sigma)
        if args.sigma >= 1:
            summary = lower_bound_summary(args.n, args.q, args.sigma)
            results.update(m_field=summary.m_field, m_security=summary.m_security, m_floor=summary.m_floor)
    params = {"n": args.n, "q": args.q, "gamma": args.gamma, "sigma": args.sigma}
    return [_record(args, params, results, True, seeded=False)]


def run_sd_exact(args: argparse.Namespace, settings: RunSettings) -> list[ExperimentRecord]:
    n = _party_count(args, args.x)
    records = []
    if args.xp is not None:
        params = _protocol_params(args, n)
        report = security_check(args.x, args.xp, params, settings.budget, settings.rational_state_limit)
        bound = report.certified_bound
        if report.gamma_bound is not None:
            bound = min(bound, report.gamma_bound)
        results = {
            "sd": report.sd,
            "bound": bound,
            "certified_bound": report.certified_bound,
            "gamma_bound": report.gamma_bound,
            "sd_x_to_uniform": report.sd_x_to_uniform,
            "sd_xp_to_uniform": report.sd_x_prime_to_uniform,
        }
        record_params = {"n": n, "m": params.m, "q": params.q, "gamma": params.gamma, "x": args.x, "xp": args.xp}
        records.append(_record(args, record_params, results, report.passed, seeded=False))
    if args.m_sweep is not None:
        if list(args.m_sweep) != sorted(set(args.m_sweep)):
            raise ValueError(f"--m-sweep must be strictly increasing, got {args.m_sweep}")
        previous = None
        for m, sd in sd_to_uniform_sweep(args.x, args.q, args.m_sweep, settings.budget, settings.rational_state_limit):
            non_increasing = previous is None or sd <= previous
            results = {"sd_to_uniform": sd, "non_increasing": non_increasing}
            record_params = {"n": n, "m": m, "q": args.q, "x": args.x}
            records.append(_record(args, record_params, results, non_increasing and sd <= 1, seeded=False))
            previous = sd
    if not records:
        raise ValueError("sd-exact needs --xp, --m-sweep or both")
    return records


def run_sd_mc(args: argparse.Namespace, settings: RunSettings) -> list[ExperimentRecord]:
    n = _party_count(args, args.x)
    params = _protocol_params(args, n)
    if len(args.xp) != n:
        raise ValueError(f"--xp has {len(args.xp)} inputs, expected {n}")
    if sum(args.x) % params.q != sum(args.xp) % params.q:
        raise ValueError("--x and --xp must have the same sum modulo q")
    acceptor = zero_sum_subset_acceptor(params.m) if args.accept is None else multiset_acceptor(args.accept)
    advantage, stderr = mc_advantage(
        splitmix_sampler(args.x, params), splitmix_sampler(args.xp, params), acceptor, args.trials, args.seed
    )
    bound = 1.0
    if n >= 3 and params.m >= required_messages(n, params.q, params.gamma):
        bound = min(1.0, 2 * params.gamma)
    passed = abs(advantage) <= bound + settings.stderr_slack * stderr
    results = {"advantage": advantage, "stderr": stderr, "bound": bound, "trials": args.trials}
    record_params = {"n": n, "m": params.m, "q": params.q, "gamma": params.gamma, "x": args.x, "xp": args.xp}
    return [_record(args, record_params, results, passed)]


def run_moment_check(args: argparse.Namespace, settings: RunSettings) -> list[ExperimentRecord]:
    n = _party_count(args, args.x)
    params = ProtocolParams.create(n, args.m, args.q)
    record_params = {"n": n, "m": params.m, "q": params.q, "x": args.x, "identical": args.identical}
    moment = second_moment_experiment(
        params,
        args.trials,
        args.seed,
        args.x,
        args.identical,
        n_jobs=settings.n_jobs,
        chunk_size=settings.chunk_size,
        slack=settings.stderr_slack,
    )
    results = {
        "mu": moment.mu,
        "second_moment_ratio": moment.empirical_second_moment_ratio,
        "chebyshev_zero_bound": moment.chebyshev_zero_bound,
        "scaled_estimate": moment.scaled_estimate,
        "scaled_stderr": moment.scaled_stderr,
        "bound": moment.series_bound,
        "k_tail": moment.k_tail,
        "samples": moment.samples,
    }
    records = [_record(args, record_params, results, moment.passed)]
    if args.exact:
        values = [0] * n if args.x is None else list(args.x)
        probability = first_moment_check(range(n * params.m), values, sum(values), params, settings.budget)
        expected = Fraction(1, params.q ** (n - 1))
        results = {"first_moment": probability, "expected": expected}
        records.append(_record(args, record_params, results, probability == expected, seeded=False))
    return records


def run_rank_exp(args: argparse.Namespace, settings: RunSettings) -> list[ExperimentRecord]:
    records = []
    tails = deficit_tail_sweep(
        args.n,
        args.m,
        args.q,
        args.k,
        args.trials,
        args.seed,
        n_jobs=settings.n_jobs,
        chunk_size=settings.chunk_size,
        slack=settings.stderr_slack,
    )
    for tail in tails:
        results = {
            "empirical": tail.empirical,
            "stderr": tail.stderr,
            "bound": tail.bound,
            "union_bound": tail.union_bound,
            "samples": tail.samples,
        }
        records.append(_record(args, {"n": args.n, "m": args.m, "q": args.q, "k": tail.k}, results, tail.passed))
    if args.matching:
        report = matching_exhaustive_check(
            args.n, args.m, args.q, args.all_pairs, settings.budget, settings.partition_budget
        )
        results = {
            "pairs_checked": report.pairs_checked,
            "proved_direction_holds": report.proved_direction_holds,
            "converse_holds": report.converse_holds,
            "equality_holds": report.equality_holds,
            "counterexamples": report.counterexamples,
        }
        record_params = {"n": args.n, "m": args.m, "q": args.q, "all_pairs": args.all_pairs}
        records.append(_record(args, record_params, results, report.passed, seeded=False))
    return records


def run_lb_field(args: argparse.Namespace, settings: RunSettings) -> list[ExperimentRecord]:
    record_params = {"n": args.n, "m": args.m, "q": args.q, "s": args.s}
    distance = avg_field_distance(args.n, args.m, args.q, args.s, budget=settings.budget)
    results = {
        "exact_value": distance.d_avg,
        "bound": distance.bound,
        "witness": distance.witness,
        "witness_sd": distance.witness_sd,
    }
    records = [_record(args, record_params, results, distance.passed, seeded=False)]
    if args.y is not None:
        inverse = invy_bound_check(args.y, args.n, args.m, args.q, args.s, budget=settings.budget)
        results = {"y": args.y, "count": inverse.count, "cap": inverse.cap, "inputs": inverse.inputs}
        records.append(_record(args, record_params, results, inverse.passed, seeded=False))
    if args.sigma is not None:
        summary = lower_bound_summary(args.n, args.q, args.sigma)
        results = {
            "sigma": summary.sigma,
            "m_field": summary.m_field,
            "m_security": summary.m_security,
            "m_floor": summary.m_floor,
            "m_upper": summary.m_upper,
            "m_asymptotic": summary.m_asymptotic,
        }
        records.append(_record(args, record_params, results, True, seeded=False))
    return records


def run_lb_dist(args: argparse.Namespace, settings: RunSettings) -> list[ExperimentRecord]:
    record_params = {"n": args.n, "m": args.m, "q": args.q}
    warmup = splitmix_distinguisher_advantage(
        args.n, args.m, args.q, args.x, args.trials, args.seed, settings.budget, settings.stderr_slack
    )
    results = {
        "test": "zero-sum",
        "x": warmup.x,
        "exact_value": warmup.advantage,
        "closed_form": warmup.closed_form,
        "bound": warmup.floor,
        "exact": warmup.exact,
        "stderr": warmup.stderr,
    }
    records = [_record(args, record_params, results, warmup.passed, seeded=not warmup.exact)]
    if args.n > 2:
        run = general_distinguisher(splitmix_encoder_spec(args.q, args.m), args.n, settings.budget)
        results = {
            "test": "marginal",
            "t": run.marginal.t,
            "x": run.x,
            "threshold": run.marginal.threshold,
            "marginal_sd": run.marginal.sd,
            "category_probs": run.category_probs,
            "delta_by_category": run.delta_by_category,
            "exact_value": run.total_advantage,
            "bound": run.floor,
            "checks": run.checks,
        }
        records.append(_record(args, record_params, results, run.passed, seeded=False))
    else:
        log.warn(f"The marginal test needs n > 2 parties, skipped for n={args.n}")
    return records


def run_dp_sum(args: argparse.Namespace, settings: RunSettings) -> list[ExperimentRecord]:
    params = derive_dp_params(args.epsilon, args.delta, args.n, args.scale)
    if args.noise == "none":
        noise = zero_noise()
    else:
        noise = polya_noise(params.epsilon, params.n, params.scale, params.delta, settings.truncation_delta_fraction)
    experiment = dp_sum_experiment(
        params,
        noise,
        args.trials,
        args.seed,
        n_jobs=settings.n_jobs,
        error_tolerance_constant=settings.error_tolerance_constant,
        chunk_size=settings.chunk_size,
        slack=settings.stderr_slack,
    )
    report = dp_privacy_accounting(params, noise)
    results = {
        "mean_abs_error": experiment.mean_abs_error,
        "mean_abs_error_stderr": experiment.mean_abs_error_stderr,
        "mean_error": experiment.mean_error,
        "mean_error_stderr": experiment.mean_error_stderr,
        "max_abs_error": experiment.max_abs_error,
        "wraparounds": experiment.wraparounds,
        "target": experiment.target,
        "tolerance": experiment.tolerance,
        "m": params.m,
        "q": params.q,
        "sigma": params.sigma,
        "scale": params.scale,
        "bits_per_message": params.bits_per_message,
        "noise": noise.aggregate_distribution_name,
        "truncation_bound": noise.truncation_bound,
        "delta_security": report.delta_security,
        "delta_noise": report.delta_noise,
        "delta_total": report.delta_total,
        "worst_case_headroom": report.worst_case_headroom,
    }
    record_params = {"n": args.n, "epsilon": args.epsilon, "delta": args.delta, "trials": args.trials}
    return [_record(args, record_params, results, experiment.passed and report.within_budget)]


def run_facts_check(args: argparse.Namespace, settings: RunSettings) -> list[ExperimentRecord]:
    if args.max_entry < 1 or args.max_length < 1:
        raise ValueError("--max-entry and --max-length must be positive")
    records = []
    if args.trials > 0:
        rng = make_generator(args.seed)
        violations = 0
        first_violation = None
        for _ in tqdm.trange(args.trials, desc="Checking tuples", unit="tuple", disable=None):
            length = int(rng.integers(1, args.max_length + 1))
            a = rng.integers(1, args.max_entry + 1, size=length).tolist()
            a_prime = rng.integers(1, args.max_entry + 1, size=length).tolist()
            if not multinomial_facts_check(a, a_prime).passed:
                violations += 1
                first_violation = first_violation or {"a": a, "a_prime": a_prime}
        results = {"trials": args.trials, "violations": violations, "first_violation": first_violation}
        record_params = {"max_entry": args.max_entry, "max_length": args.max_length}
        records.append(_record(args, record_params, results, violations == 0))
    if args.a is not None or args.ap is not None:
        if args.a is None or args.ap is None:
            raise ValueError("Give both --a and --ap")
        report = multinomial_facts_check(args.a, args.ap)
        results = {
            "superadditive": report.superadditive,
            "halved_power": report.halved_power,
            "halved_power_prime": report.halved_power_prime,
        }
        records.append(_record(args, {"a": args.a, "ap": args.ap}, results, report.passed, seeded=False))
    if not records:
        raise ValueError("facts-check needs --trials above 0 or --a and --ap")
    return records


def run_figure1(args: argparse.Namespace, settings: RunSettings) -> list[ExperimentRecord]:
    records = []
    for row in figure1_table(args.n, args.epsilon, args.delta):
        params = {key: row[key] for key in ("n", "epsilon", "delta") if key in row}
        results = {key: value for key, value in row.items() if key not in params}
        records.append(_record(args, params, results, True, seeded=False))
    return records


COMMANDS: dict[str, Callable[[argparse.Namespace, RunSettings], list[ExperimentRecord]]] = {
    "encode": run_encode,
    "simulate": run_simulate,
    "msg-count": run_msg_count,
    "sd-exact": run_sd_exact,
    "sd-mc": run_sd_mc,
    "moment-check": run_moment_check,
    "rank-exp": run_rank_exp,
    "lb-field": run_lb_field,
    "lb-dist": run_lb_dist,
    "dp-sum": run_dp_sum,
    "facts-check": run_facts_check,
    "figure1": run_figure1,
}


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("common options")
    group.add_argument("--seed", type=int, default=0, help="64-bit seed of every random choice")
    group.add_argument("--out", default=None, help="write records to this file instead of standard output")
    group.add_argument("--format", choices=FORMATS, default="json", help="record format, one record per line")
    group.add_argument(
        "--budget",
        type=int,
        default=None,
        help="largest number of states an exact enumeration may visit (default: config [enumeration] budget)",
    )
    group.add_argument("--config", default=None, help="config file overriding the packaged default.ini")
    group.add_argument("--log-file", default=None, help="append log messages to this file")
    group.add_argument("--notify", action="store_true", help="send a desktop notification on completion")
    group.add_argument(
        "--n-jobs", type=int, default=None, help="parallel workers (default: config [parallel] n_jobs or core count)"
    )
    return common


def _add_protocol_args(
    sub: argparse.ArgumentParser, n: int | None = None, m: int | None = None, q: int | None = 5
) -> None:
    sub.add_argument("--n", type=int, default=n, help="number of parties")
    sub.add_argument("--m", type=int, default=m, help="messages per party")
    sub.add_argument("--q", type=int, default=q, required=q is None, help="prime field size")


def _add_security_args(sub: argparse.ArgumentParser) -> None:
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--gamma", type=float, default=None, help="target distance to the uniform reference, (0, 1]")
    group.add_argument("--sigma", type=float, default=None, help="security parameter in bits, gamma = 2^(-sigma-1)")


def build_parser() -> argparse.ArgumentParser:
    """
    The argparse parser of every subcommand. Common options are accepted after the subcommand name.
    """
    parser = argparse.ArgumentParser(
        prog="shufflesum", description="Split-and-mix secure aggregation experiments. Records go to standard output."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="subcommand")
    common = _common_parser()
    formatter = argparse.ArgumentDefaultsHelpFormatter

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return subparsers.add_parser(name, parents=[common], help=help_text, formatter_class=formatter)

    sub = add("encode", "split one input into m additive shares")
    sub.add_argument("--x", type=int, required=True, help="the input, reduced modulo q")
    sub.add_argument("--m", type=int, default=3, help="messages per party")
    sub.add_argument("--q", type=int, default=5, help="prime field size")

    sub = add("simulate", "run encode, shuffle and analyze and check the output sum")
    _add_protocol_args(sub, n=4, m=3)
    sub.add_argument("--x", type=int_list, default=None, help="comma separated inputs (default: random every run)")
    sub.add_argument("--trials", type=int, default=1, help="number of protocol runs")

    sub = add("msg-count", "messages per party certified for a target distance")
    sub.add_argument("--n", type=int, required=True, help="number of parties, at least 3")
    sub.add_argument("--q", type=int, required=True, help="prime field size")
    _add_security_args(sub)

    sub = add("sd-exact", "exact statistical distances by enumeration")
    _add_protocol_args(sub)
    sub.add_argument("--x", type=int_list, required=True, help="comma separated inputs")
    sub.add_argument("--xp", type=int_list, default=None, help="comma separated inputs with the same sum")
    sub.add_argument("--m-sweep", type=int_list, default=None, help="comma separated increasing m for SD(R(x), U)")
    _add_security_args(sub)

    sub = add("sd-mc", "Monte Carlo advantage of a fixed distinguisher")
    _add_protocol_args(sub, m=2)
    sub.add_argument("--x", type=int_list, required=True, help="comma separated inputs")
    sub.add_argument("--xp", type=int_list, required=True, help="comma separated inputs with the same sum")
    sub.add_argument(
        "--accept", type=int_list, default=None, help="accept this one transcript (default: m messages sum to 0)"
    )
    sub.add_argument("--trials", type=int, default=10_000, help="samples per distribution")
    _add_security_args(sub)

    sub = add("moment-check", "second moment of the number of consistent permutations")
    _add_protocol_args(sub, n=3, m=3, q=2)
    sub.add_argument("--x", type=int_list, default=None, help="comma separated inputs (default: all zero)")
    sub.add_argument("--trials", type=int, default=10_000, help="sampled (pi, pi', t) triples")
    sub.add_argument("--identical", action="store_true", help="force pi' = pi")
    sub.add_argument("--exact", action="store_true", help="also enumerate the first moment exactly")

    sub = add("rank-exp", "rank deficit tail of random permutation pair matrices")
    _add_protocol_args(sub, n=8, m=4, q=2)
    sub.add_argument("--k", type=int_list, default=(2, 3, 4), help="comma separated deficit thresholds")
    sub.add_argument("--trials", type=int, default=10_000, help="sampled permutation pairs")
    sub.add_argument("--matching", action="store_true", help="also check matching partitions over all pairs")
    sub.add_argument("--all-pairs", action="store_true", help="enumerate both permutations with --matching")

    sub = add("lb-field", "average distance between equal-sum inputs, the field size lower bound")
    _add_protocol_args(sub, n=2, m=1)
    sub.add_argument("--s", type=int, default=0, help="common input sum")
    sub.add_argument("--y", type=int_list, default=None, help="also count the inputs consistent with transcript y")
    sub.add_argument("--sigma", type=float, default=None, help="also report the message count floors at sigma")

    sub = add("lb-dist", "distinguishers against few-message protocols")
    _add_protocol_args(sub, n=3, m=2)
    sub.add_argument("--x", type=int_list, default=None, help="zero-sum inputs (default: 1, ..., 1, -(n-1))")
    sub.add_argument("--trials", type=int, default=100_000, help="Monte Carlo trials when enumeration is too large")

    sub = add("dp-sum", "differentially private real summation")
    sub.add_argument("--n", type=int, default=1000, help="number of parties, at least 3")
    sub.add_argument("--epsilon", type=float, default=1.0, help="privacy parameter epsilon")
    sub.add_argument("--delta", type=float, default=2.0**-20, help="privacy parameter delta")
    sub.add_argument("--scale", type=int, default=None, help="fixed-point scale (default: floor(sqrt(n)))")
    sub.add_argument("--trials", type=int, default=1000, help="independent runs")
    sub.add_argument("--noise", choices=("none", "default"), default="default", help="per-party noise")

    sub = add("facts-check", "exact checks of the multinomial inequalities")
    sub.add_argument("--trials", type=int, default=10_000, help="random tuple pairs")
    sub.add_argument("--max-entry", type=int, default=12, help="largest tuple entry, entries start at 1")
    sub.add_argument("--max-length", type=int, default=6, help="largest tuple length")
    sub.add_argument("--a", type=int_list, default=None, help="also check this tuple")
    sub.add_argument("--ap", type=int_list, default=None, help="second tuple for --a")

    sub = add("figure1", "comparison table of DP summation protocols")
    sub.add_argument("--n", type=int_list, default=(100, 1000, 10_000), help="comma separated party counts")
    sub.add_argument("--epsilon", type=float_list, default=(0.5, 1.0), help="comma separated epsilons")
    sub.add_argument("--delta", type=float_list, default=(2.0**-20,), help="comma separated deltas")
    return parser


def _configure(args: argparse.Namespace) -> RunSettings:
    config = Config()
    config.load(args.config)
    if args.log_file is not None:
        config["notifications"]["log_name"] = args.log_file
    if args.budget is not None:
        config["enumeration"]["budget"] = args.budget
    if args.n_jobs is not None:
        config["parallel"]["n_jobs"] = args.n_jobs

    notifications = config["notifications"]
    log.set_log_config(
        notifications["minimum_print_severity"],
        notifications["log_name"],
        notifications["allow_notifications"] or args.notify,
        notifications["notify_on_completion"] or args.notify,
    )
    enumeration, parallel = config["enumeration"], config["parallel"]
    if enumeration["budget"] < 1:
        raise ValueError(f"--budget must be positive, got {enumeration['budget']}")
    if parallel["n_jobs"] is not None and parallel["n_jobs"] < 1:
        raise ValueError(f"--n-jobs must be positive, got {parallel['n_jobs']}")
    return RunSettings(
        budget=enumeration["budget"],
        rational_state_limit=enumeration["rational_state_limit"],
        partition_budget=config["partitions"]["budget"],
        n_jobs=parallel["n_jobs"],
        chunk_size=parallel["chunk_size"],
        stderr_slack=config["statistics"]["stderr_slack"],
        truncation_delta_fraction=config["dp"]["truncation_delta_fraction"],
        error_tolerance_constant=config["dp"]["error_tolerance_constant"],
    )



def _run_command(args: argparse.Namespace, settings: RunSettings) -> list[ExperimentRecord]:
    records = COMMANDS[args.command](args, settings)
    write_records(records, args.format, sys.stdout if args.out is None else args.out)
    return records


def run(argv: Sequence[str] | None = None) -> int:
    """
    Parse the arguments, run one subcommand and write its records.

    Args:
        argv (list of str, optional): arguments without the program name. Default: `sys.argv[1:]`.

    Returns:
        (int): exit_code. 0 when every record passed, 1 when one failed, 2 for usage errors and invalid parameters.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_request:
        return EXIT_PASS if exit_request.code in (0, None) else EXIT_USAGE

    try:
        settings = _configure(args)
        # Errors are also written to the log file, with their traceback.
        records = log.error_catch(_run_command, args, settings)
    except (
        ValueError,
        OSError,
        configparser.Error,
        Config.ParamError,
        Config.MissingParamError,
        Config.SectionError,
    ) as e:
        print(f"shufflesum {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    failed = [record for record in records if not record.passed]
    log.info(f"{args.command} complete, {len(records) - len(failed)} of {len(records)} records passed", notify=True)
    return EXIT_FAIL if failed else EXIT_PASS


def main() -> None:
    sys.exit(run())
