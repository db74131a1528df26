import logging
from typing import Dict, Optional

from app.models import (
    BridgingMetricReport,
    Clustering,
    RankedFeed,
    RelationMetricReport,
    SignalVector,
    SimulationResult,
    SpaceModel,
)

logger = logging.getLogger(__name__)

RULE = "=" * 70
THIN = "-" * 70


def _fmt(value: Optional[float], digits: int = 4) -> str:
    return "-" if value is None else f"{value:.{digits}f}"


class FeedFormatter:
    """Formats feeds, clusterings and metric reports as plain-text tables"""

    def __init__(self, include_warnings: bool = True):
        self.include_warnings = include_warnings

    def _header(self, title: str) -> list:
        return [RULE, title, RULE, ""]

    def format_feed(self, feed: RankedFeed, show_signals: bool = True) -> str:
        """Slot-by-slot table with score and component signals"""
        output = self._header(f"RANKED FEED FOR {feed.viewer}")
        output.append(f"{'slot':>4}  {'item':<16} {'score':>8}  signals")
        output.append(THIN)
        for allocation in feed.allocations:
            score = allocation.properties.get("score")
            line = f"{allocation.slot:>4}  {allocation.object:<16} {_fmt(score):>8}"
            if show_signals:
                signals = allocation.properties.get("signals", {})
                parts = [f"{k}={_fmt(v, 3)}" for k, v in signals.items() if v is not None]
                line += "  " + " ".join(parts)
            output.append(line)
        output.append("")
        output.append(f"Value model digest: {feed.value_model_digest[:12]}")
        output.append(RULE)
        return "\n".join(output)

    def format_clustering(self, clustering: Clustering, space: Optional[SpaceModel] = None) -> str:
        output = self._header("OPINION GROUPS")
        output.append(f"Groups: {clustering.k}   Silhouette: {clustering.silhouette:.4f}")
        if clustering.silhouette_by_k:
            by_k = ", ".join(f"k={k}: {s:.4f}" for k, s in sorted(clustering.silhouette_by_k.items()))
            output.append(f"Silhouette by k: {by_k}")
        if space is not None and space.explained_variance:
            explained = ", ".join(f"{e:.1%}" for e in space.explained_variance)
            output.append(f"Explained variance: {explained}")
        output.append("")

        for group in clustering.groups():
            members = clustering.members(group)
            output.append(f"Group {group} ({len(members)}): {', '.join(members)}")
        output.append("")

        warnings = list(clustering.warnings) + (list(space.warnings) if space is not None else [])
        if self.include_warnings and warnings:
            output.append("WARNINGS")
            output.append(THIN)
            for warning in warnings:
                output.append(f"  • [{warning.severity}] {warning.message}")
            output.append("")
        output.append(RULE)
        return "\n".join(output)

    def format_signals(self, table: Dict[str, SignalVector]) -> str:
        output = self._header("ITEM SIGNALS")
        output.append(f"{'item':<16} {'engage':>8} {'diverse':>8} {'gac':>8} {'mf':>8} {'bimodal':>8}")
        output.append(THIN)
        for item in sorted(table):
            s = table[item]
            output.append(
                f"{item:<16} {_fmt(s.engagement):>8} {_fmt(s.diverse_approval):>8} "
                f"{_fmt(s.group_aware_consensus):>8} {_fmt(s.mf_intercept):>8} {_fmt(s.bimodality):>8}"
            )
        output.append(RULE)
        return "\n".join(output)

    def format_metrics(
        self,
        report: RelationMetricReport,
        bridging: Optional[BridgingMetricReport] = None,
    ) -> str:
        output = self._header(f"RELATION METRICS (tick {report.timestamp})")
        for name in sorted(report.values):
            output.append(f"  {name:<34} {report.values[name]:>10.4f}")
        output.append("")

        if bridging is not None:
            t0, t1 = bridging.window
            output.append(f"BRIDGING METRICS (ticks {t0} -> {t1})")
            output.append(THIN)
            for name in sorted(bridging.deltas):
                output.append(f"  Δ {name:<32} {bridging.deltas[name]:>+10.4f}")
            for name in sorted(bridging.prevalence):
                output.append(f"  {name + ' per person':<34} {bridging.prevalence[name]:>10.4f}")
            output.append("")
        output.append(RULE)
        return "\n".join(output)

    def format_simulation(self, result: SimulationResult) -> str:
        cfg = result.config
        policy = ", ".join(f"{k}={w:g}" for k, w in sorted(cfg.value_model.weights.items()))
        output = self._header("SIMULATION SUMMARY")
        output.append(f"Seed: {cfg.seed}   Agents: {cfg.n_agents}   Groups: {cfg.n_groups}   Ticks: {cfg.ticks}")
        output.append(f"Policy: {policy}")
        output.append(f"Mean affect_out: {result.affect_series[0]:.2f} -> {result.affect_series[-1]:.2f}")
        if result.sybil_gac_share is not None:
            output.append(f"Slot-1 share of sybil items: {result.sybil_gac_share:.3f}")
        output.append("")
        body = self.format_metrics(result.final(), result.bridging)
        return "\n".join(output) + "\n" + body
