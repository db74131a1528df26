"""
Multi-run experiments: seed sweeps, paired policy comparisons and the sybil
scenario.
"""
import concurrent.futures
import logging
from statistics import median
from typing import Dict, List, Optional, Sequence

from scipy.stats import binomtest

from app.models.ranking import ValueModel
from app.models.simulation import PairedComparison, PolicyOutcome, SimConfig, SimulationResult
from app.simulation.engine import run

logger = logging.getLogger(__name__)


def _run_config(cfg: SimConfig) -> SimulationResult:
    return run(cfg)


def run_sweep(cfg: SimConfig, seeds: Sequence[int], max_workers: Optional[int] = None) -> List[SimulationResult]:
    """
    Run the same config under every seed, concurrently.

    Runs share no state; results come back in seed order. max_workers=1 runs
    in-process.
    """
    configs = [cfg.model_copy(update={"seed": int(s)}) for s in seeds]
    if max_workers == 1 or len(configs) <= 1:
        return [_run_config(c) for c in configs]

    logger.info("Sweeping %d seeds with up to %s workers", len(configs), max_workers or "default")
    with concurrent.futures.ProcessPoolExecutor(max_workers=max_workers) as executor:
        return list(executor.map(_run_config, configs))


def outcome_of(result: SimulationResult, policy: str) -> PolicyOutcome:
    final = result.final().values
    return PolicyOutcome(
        seed=result.config.seed,
        policy=policy,
        final_rwc=final.get("rwc"),
        final_modularity=final["modularity"],
        final_affect=result.affect_series[-1],
    )


def _sign_p(successes: int, trials: int) -> Optional[float]:
    if trials == 0:
        return None
    return float(binomtest(successes, trials, 0.5, alternative="greater").pvalue)


def paired_comparison(
    cfg: SimConfig,
    baseline: ValueModel,
    treatment: ValueModel,
    seeds: Sequence[int],
    names: Sequence[str] = ("engagement", "bridging"),
    max_workers: Optional[int] = None,
) -> PairedComparison:
    """
    Run every seed under both policies and compare final RWC and affect.

    One-sided sign tests: does the treatment lower RWC, and does it raise
    mean affect_out, on more seeds than chance?
    """
    base_name, treat_name = names
    base_runs = run_sweep(cfg.model_copy(update={"value_model": baseline}), seeds, max_workers)
    treat_runs = run_sweep(cfg.model_copy(update={"value_model": treatment}), seeds, max_workers)

    outcomes: List[PolicyOutcome] = []
    rwc_lower = rwc_trials = affect_higher = affect_trials = 0
    for b_run, t_run in zip(base_runs, treat_runs):
        b, t = outcome_of(b_run, base_name), outcome_of(t_run, treat_name)
        outcomes.extend([b, t])
        if b.final_rwc is not None and t.final_rwc is not None and t.final_rwc != b.final_rwc:
            rwc_trials += 1
            rwc_lower += t.final_rwc < b.final_rwc
        if t.final_affect != b.final_affect:
            affect_trials += 1
            affect_higher += t.final_affect > b.final_affect

    def medians(field: str) -> Dict[str, float]:
        result = {}
        for name in (base_name, treat_name):
            values = [getattr(o, field) for o in outcomes if o.policy == name and getattr(o, field) is not None]
            if values:
                result[name] = float(median(values))
        return result

    comparison = PairedComparison(
        baseline=base_name,
        treatment=treat_name,
        seeds=[int(s) for s in seeds],
        outcomes=outcomes,
        median_rwc=medians("final_rwc"),
        median_affect=medians("final_affect"),
        rwc_lower_count=rwc_lower,
        affect_higher_count=affect_higher,
        rwc_sign_p=_sign_p(rwc_lower, rwc_trials),
        affect_sign_p=_sign_p(affect_higher, affect_trials),
    )
    logger.info(
        "Paired comparison over %d seeds: RWC lower on %d, affect higher on %d",
        len(seeds), rwc_lower, affect_higher,
    )
    return comparison


def sybil_config(cfg: SimConfig, fraction: float, policy: Optional[ValueModel] = None) -> SimConfig:
    """Same config with a share of sybil agents that back each other's items"""
    update: Dict[str, object] = {"sybil_fraction": fraction}
    if policy is not None:
        update["value_model"] = policy
    return SimConfig.model_validate({**cfg.model_dump(), **update})
