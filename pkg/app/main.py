#!/usr/bin/env python3
import sys
import json
import time
import logging
import argparse
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import ValidationError

from app.config import EXIT_INPUT_ERROR, EXIT_OK, K_RANGE_DEFAULT, KMEANS_RESTARTS, RWC_STEPS, RWC_WALKS, TOOL_NAME, default_seed
from app.explain.formatter import FeedFormatter
from app.io.serialization import (
    digest_of,
    file_digest,
    read_item_list,
    read_model,
    read_votes_csv,
    write_affect_csv,
    write_feeds_jsonl,
    write_json,
    write_jsonl,
    write_metric_series,
    write_projection_csv,
    write_signals_csv,
)
from app.metrics import (
    balance_fraction,
    bridging_delta,
    interactions_from_votes,
    relation_report,
    signal_prevalence,
)
from app.metrics.prevalence import DIVERSE_APPROVAL
from app.models import Clustering, MFHyperparams, RelationMetricReport, RunManifest, SimConfig, ValueModel
from app.ranking import RankingContext, rank
from app.relation import cluster_people, pca_project, vote_similarity_graph
from app.signals import compute_signals
from app.simulation import paired_comparison, run, run_sweep
from app.utils.errors import BridgeRankError, ErrorType, InputError
from app.utils.logging import setup_logging

logger = logging.getLogger(__name__)

# (outputs, config used, input files)
CommandResult = Tuple[List[Path], Dict[str, Any], List[str]]

POLICIES = {
    "engagement": ValueModel.engagement_only,
    "bridging": ValueModel.bridging,
}


def print_banner(command: str):
    """Short header on stderr"""
    print("=" * 70, file=sys.stderr)
    print(f"  {TOOL_NAME} {command}", file=sys.stderr)
    print("=" * 70, file=sys.stderr)


def load_value_model(name_or_path: str) -> ValueModel:
    """Named policy ('engagement', 'bridging') or a value-model JSON file"""
    if name_or_path in POLICIES:
        return POLICIES[name_or_path]()
    return read_model(name_or_path, ValueModel)


def load_clustering(path: str, votes) -> Clustering:
    clustering = read_model(path, Clustering)
    unknown = sorted(p for p in clustering.labels if not votes.has_person(p))
    if unknown:
        raise InputError(
            ErrorType.UNKNOWN_PERSON,
            f"{path}: {len(unknown)} labelled person(s) not in the votes, e.g. '{unknown[0]}'",
            details={"people": unknown[:10]},
        )
    return clustering


def load_sim_config(args) -> SimConfig:
    raw: Dict[str, Any] = {}
    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise InputError(ErrorType.EMPTY_INPUT, f"{args.config}: no such file")
        except json.JSONDecodeError as e:
            raise InputError(ErrorType.SCHEMA_VIOLATION, f"{args.config}: line {e.lineno}: {e.msg}")
    if args.seed is not None or "seed" not in raw:
        raw["seed"] = args.seed if args.seed is not None else default_seed()
    if args.ticks is not None:
        raw["ticks"] = args.ticks
    if args.policy:
        raw["value_model"] = load_value_model(args.policy).model_dump()
    return SimConfig.model_validate(raw)


def cmd_cluster(args) -> CommandResult:
    votes = read_votes_csv(args.votes)
    space = pca_project(votes, d=args.dim)
    clustering = cluster_people(space, k_range=(args.k_min, args.k_max), restarts=args.restarts, seed=args.seed)

    out = Path(args.out)
    outputs = [
        write_json(clustering, out / "clustering.json"),
        write_projection_csv(space, clustering, out / "projection.csv"),
        write_json(space, out / "space.json"),
    ]
    print(FeedFormatter().format_clustering(clustering, space))
    config = {"dim": args.dim, "k_range": [args.k_min, args.k_max], "restarts": args.restarts, "seed": args.seed}
    return outputs, config, [args.votes]


def cmd_score(args) -> CommandResult:
    votes = read_votes_csv(args.votes)
    clustering = load_clustering(args.clustering, votes)
    extra = read_item_list(args.items) if args.items else []
    hyperparams = MFHyperparams(seed=args.seed)
    table = compute_signals(votes, clustering, hyperparams=hyperparams, extra_items=extra)

    out = Path(args.out)
    if args.format == "json":
        target = out / "signals.json"
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(
            json.dumps({item: table[item].model_dump(mode="json") for item in sorted(table)}, indent=2) + "\n",
            encoding="utf-8",
        )
    else:
        target = write_signals_csv(table, out / "signals.csv")
    print(FeedFormatter().format_signals(table))
    inputs = [args.votes, args.clustering] + ([args.items] if args.items else [])
    return [target], {"mf": hyperparams.model_dump(), "format": args.format}, inputs


def cmd_rank(args) -> CommandResult:
    votes = read_votes_csv(args.votes)
    clustering = load_clustering(args.clustering, votes)
    value_model = load_value_model(args.value_model)
    pool = read_item_list(args.candidates) if args.candidates else votes.canonical_items()
    viewers = args.viewer or sorted(clustering.labels)

    context = RankingContext.for_value_model(
        votes, clustering, value_model, extra_items=pool, hyperparams=MFHyperparams(seed=args.seed)
    )
    feeds = [rank(viewer, pool, context, value_model) for viewer in viewers]

    formatter = FeedFormatter()
    for feed in feeds:
        print(formatter.format_feed(feed))

    out = Path(args.out)
    if len(feeds) == 1:
        target = write_json(feeds[0], out / "feed.json")
    else:
        target = write_jsonl(feeds, out / "feeds.jsonl")
    inputs = [args.votes, args.clustering] + ([args.candidates] if args.candidates else [])
    if Path(args.value_model).is_file():
        inputs.append(args.value_model)
    return [target], {"value_model": value_model.model_dump(), "viewers": viewers}, inputs


def cmd_metrics(args) -> CommandResult:
    votes = read_votes_csv(args.votes)
    clustering = load_clustering(args.clustering, votes)
    graph = vote_similarity_graph(votes, tau=args.tau)

    extra: Dict[str, float] = {}
    if clustering.k >= 2:
        history = interactions_from_votes(votes, tick=args.tick)
        extra[f"{DIVERSE_APPROVAL}_prevalence"] = signal_prevalence(
            history, DIVERSE_APPROVAL, (args.tick, args.tick), clustering
        )
    signed = vote_similarity_graph(votes, tau=args.tau, signed=True)
    try:
        extra["balance"] = balance_fraction(signed)
    except InputError as e:
        if e.error_type != ErrorType.NO_TRIANGLES:
            raise
        logger.info("No triangles in the signed graph; balance omitted")

    report = relation_report(
        args.tick, graph, clustering, extra=extra,
        rwc_walks=args.walks, rwc_steps=args.steps, rwc_method=args.rwc_method, seed=args.seed,
    )

    out = Path(args.out)
    outputs = [write_json(report, out / "metrics.json")]
    if args.format == "csv":
        outputs.append(write_metric_series([report], out / "metrics.csv"))

    bridging = None
    inputs = [args.votes, args.clustering]
    if args.baseline:
        bridging = bridging_delta(read_model(args.baseline, RelationMetricReport), report)
        outputs.append(write_json(bridging, out / "bridging.json"))
        inputs.append(args.baseline)

    print(FeedFormatter().format_metrics(report, bridging))
    config = {"tau": args.tau, "walks": args.walks, "steps": args.steps, "rwc_method": args.rwc_method, "tick": args.tick}
    return outputs, config, inputs


def write_run(result, out: Path) -> List[Path]:
    outputs = [
        write_metric_series(result.reports, out / "metrics.csv"),
        write_affect_csv(result.affect_series, out / "affect.csv"),
        write_feeds_jsonl(result.feeds, out / "feeds.jsonl"),
        write_json(result.world, out / "world_final.json"),
    ]
    if result.bridging is not None:
        outputs.append(write_json(result.bridging, out / "bridging.json"))
    return outputs


def cmd_simulate(args) -> CommandResult:
    cfg = load_sim_config(args)
    out = Path(args.out)
    inputs = [args.config] if args.config else []
    formatter = FeedFormatter()

    if args.compare:
        seeds = list(range(cfg.seed, cfg.seed + max(args.sweep or 1, 1)))
        comparison = paired_comparison(
            cfg, ValueModel.engagement_only(), ValueModel.bridging(), seeds, max_workers=args.workers
        )
        target = write_json(comparison, out / "comparison.json")
        print(f"Median final RWC: {comparison.median_rwc}")
        print(f"Median final affect_out: {comparison.median_affect}")
        print(f"Sign test p (RWC lower): {comparison.rwc_sign_p}   (affect higher): {comparison.affect_sign_p}")
        return [target], cfg.model_dump(mode="json"), inputs

    if args.sweep:
        seeds = list(range(cfg.seed, cfg.seed + args.sweep))
        outputs: List[Path] = []
        for result in run_sweep(cfg, seeds, max_workers=args.workers):
            outputs.extend(write_run(result, out / f"seed_{result.config.seed}"))
            print(formatter.format_simulation(result))
        return outputs, cfg.model_dump(mode="json"), inputs

    result = run(cfg)
    print(formatter.format_simulation(result))
    return write_run(result, out), cfg.model_dump(mode="json"), inputs


COMMANDS = {
    "cluster": cmd_cluster,
    "score": cmd_score,
    "rank": cmd_rank,
    "metrics": cmd_metrics,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None, help='Random seed (default: $BRIDGERANK_SEED or 0)')
    common.add_argument('--out', default='out', help='Output directory')
    common.add_argument('--format', choices=['json', 'csv'], default=None, help='Format of the main artifact')
    common.add_argument('-v', '--verbose', action='store_true', help='Show progress logs')
    common.add_argument('--log-level', default=None, help='Explicit log level (overrides -v and $BRIDGERANK_LOG)')

    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Bridging-based ranking: relation models, signals, metrics and simulation",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('cluster', parents=[common], help='PCA projection + k-means opinion groups')
    p.add_argument('votes', help='Votes CSV (person_id,item_id,vote)')
    p.add_argument('--dim', type=int, default=2, help='Projection dimension')
    p.add_argument('--k-min', type=int, default=K_RANGE_DEFAULT[0])
    p.add_argument('--k-max', type=int, default=K_RANGE_DEFAULT[1])
    p.add_argument('--restarts', type=int, default=KMEANS_RESTARTS)

    p = sub.add_parser('score', parents=[common], help='Bridging signals per item')
    p.add_argument('votes')
    p.add_argument('clustering', help='clustering.json from the cluster command')
    p.add_argument('--items', default=None, help='CSV with an item_id column; unvoted items get prior rows')

    p = sub.add_parser('rank', parents=[common], help='Ranked feeds under a value model')
    p.add_argument('votes')
    p.add_argument('clustering')
    p.add_argument('--value-model', required=True, help="'engagement', 'bridging' or a value-model JSON")
    p.add_argument('--viewer', action='append', default=None, help='Viewer id (repeatable; default everyone)')
    p.add_argument('--candidates', default=None, help='CSV with an item_id column (default: every voted item)')

    p = sub.add_parser('metrics', parents=[common], help='Relation metrics on the co-vote graph')
    p.add_argument('votes')
    p.add_argument('clustering')
    p.add_argument('--tau', type=float, default=0.0, help='Similarity threshold for edges')
    p.add_argument('--walks', type=int, default=RWC_WALKS)
    p.add_argument('--steps', type=int, default=RWC_STEPS)
    p.add_argument('--rwc-method', choices=['monte_carlo', 'exact'], default='monte_carlo')
    p.add_argument('--tick', type=int, default=0, help='Timestamp recorded on the report')
    p.add_argument('--baseline', default=None, help='Earlier metrics.json; writes bridging.json deltas')

    p = sub.add_parser('simulate', parents=[common], help='Seeded agent-based policy simulation')
    p.add_argument('--config', default=None, help='SimConfig JSON')
    p.add_argument('--ticks', type=int, default=None, help='Override the configured tick count')
    p.add_argument('--policy', default=None, help="'engagement', 'bridging' or a value-model JSON")
    p.add_argument('--sweep', type=int, default=None, metavar='N', help='Run N consecutive seeds into out/seed_<s>/')
    p.add_argument('--workers', type=int, default=None, help='Process count for sweeps')
    p.add_argument('--compare', action='store_true', help='Paired engagement vs bridging comparison over the sweep seeds')

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_logging(args.verbose, args.log_level)
    if args.seed is None and args.command != 'simulate':
        args.seed = default_seed()
    if args.format is None:
        args.format = 'csv' if args.command == 'score' else 'json'

    if args.verbose:
        print_banner(args.command)

    started = time.perf_counter()
    try:
        outputs, config, inputs = COMMANDS[args.command](args)
    except BridgeRankError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        if args.verbose:
            logging.error("Command %s failed", args.command, exc_info=True)
        return e.exit_code
    except ValidationError as e:
        print(f"ERROR: [{ErrorType.INVALID_CONFIG.value}] {e.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    seed = args.seed if args.seed is not None else config.get("seed", 0)
    manifest = RunManifest(
        command=args.command,
        config_digest=digest_of(config),
        input_digests={path: file_digest(path) for path in inputs},
        seed=seed,
        output_paths=[str(p) for p in outputs],
        wall_clock_seconds=time.perf_counter() - started,
    )
    write_json(manifest, Path(args.out) / "manifest.json")
    logger.info("Wrote %d outputs and manifest to %s", len(outputs), args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
