"""
Readers and writers for every artifact the CLI consumes or emits.

CSV is the only ingestion format for votes. JSON artifacts are pydantic models
carrying `schema_version`. CSV exports go through pandas with a fixed line
terminator and float format so reruns are byte-identical.
"""
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Type, TypeVar, Union

import pandas as pd
from pydantic import BaseModel, ValidationError

from app.models.relations import Clustering, SpaceModel
from app.models.reports import RelationMetricReport
from app.models.signals import SignalVector
from app.models.simulation import TickFeed
from app.models.votes import ItemId, VoteMatrix
from app.relation.votes import build_vote_matrix
from app.utils.errors import ErrorType, InputError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
ModelT = TypeVar("ModelT", bound=BaseModel)

VOTE_COLUMNS = ("person_id", "item_id", "vote")
VOTE_TOKENS = {"1": 1, "+1": 1, "-1": -1, "0": 0}
FLOAT_FORMAT = "%.10g"
# Per-item columns; exposure_diversity is a property of feeds, not items
SIGNAL_CSV_COLUMNS = ("engagement", "diverse_approval", "gac", "mf_intercept", "bimodality")


# Digests

def canonical_json(obj: Any) -> str:
    if isinstance(obj, BaseModel):
        obj = obj.model_dump(mode="json")
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)


def digest_of(obj: Any) -> str:
    """SHA-256 over canonical JSON"""
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()


def file_digest(path: PathLike) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# Votes

def read_votes_csv(path: PathLike) -> VoteMatrix:
    """
    Read `person_id,item_id,vote` rows into a VoteMatrix.

    Schema problems name the 1-based file line (the header is line 1).
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise InputError(ErrorType.EMPTY_INPUT, f"{path}: file is empty")
    except FileNotFoundError:
        raise InputError(ErrorType.EMPTY_INPUT, f"{path}: no such file")

    missing = [c for c in VOTE_COLUMNS if c not in frame.columns]
    if missing:
        raise InputError(
            ErrorType.SCHEMA_VIOLATION,
            f"{path}: line 1: missing column(s) {', '.join(missing)}",
            details={"line": 1, "columns": list(frame.columns)},
        )

    records = []
    seen = {}
    for offset, row in enumerate(frame[list(VOTE_COLUMNS)].itertuples(index=False)):
        line = offset + 2
        person, item, raw = (str(x).strip() for x in row)
        if not person or not item:
            raise InputError(
                ErrorType.SCHEMA_VIOLATION,
                f"{path}: line {line}: person_id and item_id must be non-empty",
                details={"line": line},
            )
        if raw not in VOTE_TOKENS:
            raise InputError(
                ErrorType.SCHEMA_VIOLATION,
                f"{path}: line {line}: vote value {raw!r} is not one of -1, 0, 1",
                details={"line": line, "value": raw},
            )
        if (person, item) in seen:
            raise InputError(
                ErrorType.DUPLICATE_VOTE,
                f"{path}: line {line}: duplicate vote for ({person}, {item}), first on line {seen[(person, item)]}",
                details={"line": line, "person": person, "item": item},
            )
        seen[(person, item)] = line
        records.append((person, item, VOTE_TOKENS[raw]))

    logger.info("Read %d vote rows from %s", len(records), path)
    return build_vote_matrix(records)


def write_votes_csv(m: VoteMatrix, path: PathLike) -> None:
    rows = [(v.person, v.item, int(v.value)) for v in m.iter_votes()]
    _write_frame(pd.DataFrame(rows, columns=list(VOTE_COLUMNS)), path)


def read_item_list(path: PathLike) -> List[ItemId]:
    """Item ids from a CSV with an `item_id` column"""
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise InputError(ErrorType.EMPTY_INPUT, f"{path}: file is empty")
    if "item_id" not in frame.columns:
        raise InputError(ErrorType.SCHEMA_VIOLATION, f"{path}: line 1: missing column item_id", details={"line": 1})
    return [s.strip() for s in frame["item_id"] if s.strip()]


# JSON artifacts

def write_json(model: BaseModel, path: PathLike) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return target


def read_model(path: PathLike, cls: Type[ModelT]) -> ModelT:
    """Validate a JSON file against a model; failures are schema violations"""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputError(ErrorType.EMPTY_INPUT, f"{path}: no such file")
    try:
        return cls.model_validate_json(text)
    except ValidationError as e:
        raise InputError(
            ErrorType.SCHEMA_VIOLATION,
            f"{path}: not a valid {cls.__name__}: {e.errors()[0]['msg']}",
            details={"errors": e.errors(include_url=False)},
        )


def write_jsonl(models: Iterable[BaseModel], path: PathLike) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", encoding="utf-8", newline="\n") as handle:
        for model in models:
            handle.write(model.model_dump_json() + "\n")
    return target


def write_feeds_jsonl(feeds: Sequence[TickFeed], path: PathLike) -> Path:
    return write_jsonl(feeds, path)


# CSV exports

def _write_frame(frame: pd.DataFrame, path: PathLike) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(target, index=False, lineterminator="\n", float_format=FLOAT_FORMAT)
    return target


def projection_frame(space: SpaceModel, clustering: Clustering) -> pd.DataFrame:
    """person_id,x,y,group in sorted person order"""
    rows = []
    for person in sorted(space.person_positions):
        position = space.person_positions[person]
        y = position[1] if len(position) > 1 else 0.0
        rows.append((person, position[0], y, clustering.labels.get(person, "")))
    return pd.DataFrame(rows, columns=["person_id", "x", "y", "group"])


def write_projection_csv(space: SpaceModel, clustering: Clustering, path: PathLike) -> Path:
    return _write_frame(projection_frame(space, clustering), path)


def signals_frame(table: Dict[ItemId, SignalVector]) -> pd.DataFrame:
    rows = []
    for item in sorted(table):
        row: Dict[str, Optional[Any]] = {"item_id": item}
        signals = table[item].as_dict()
        row.update({name: signals[name] for name in SIGNAL_CSV_COLUMNS})
        rows.append(row)
    return pd.DataFrame(rows, columns=["item_id", *SIGNAL_CSV_COLUMNS])


def write_signals_csv(table: Dict[ItemId, SignalVector], path: PathLike) -> Path:
    return _write_frame(signals_frame(table), path)


def metric_series_frame(reports: Sequence[RelationMetricReport]) -> pd.DataFrame:
    """Long format tick,metric,value for plotting"""
    rows = [
        (report.timestamp, name, report.values[name])
        for report in sorted(reports, key=lambda r: r.timestamp)
        for name in sorted(report.values)
    ]
    return pd.DataFrame(rows, columns=["tick", "metric", "value"])


def write_metric_series(reports: Sequence[RelationMetricReport], path: PathLike) -> Path:
    return _write_frame(metric_series_frame(reports), path)


def write_affect_csv(series: Sequence[float], path: PathLike) -> Path:
    frame = pd.DataFrame({"tick": range(len(series)), "mean_affect_out": list(series)})
    return _write_frame(frame, path)
