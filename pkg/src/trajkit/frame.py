"""Columnar trajectory data model.

A :class:`TrajectoryFrame` holds every point of every trajectory in typed
column arrays, always sorted by (trajectory id, timestamp).  Timestamps are
integer UTC epoch seconds; sub-second data is out of scope.  A
:class:`TrajectorySegment` is the single-trajectory slice that per-trajectory
operations receive.

Null conventions per column kind:

* ``float``     -- float64 array, NaN marks null
* ``integer``   -- int64 array (no nulls) or object array with ``None``
* ``boolean``   -- bool array (no nulls) or object array with ``None``
* ``string``    -- unicode array (empty string marks null) or object array
                   with ``None``/empty string
* ``timestamp`` -- int64 epoch seconds (core time column; never null)

Core columns (id, lat, lon, time) are never null; feature columns may be.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ValidationError

VALID_KINDS = ("string", "integer", "float", "timestamp", "boolean")

# Largest magnitude representable as signed 64-bit seconds.
_INT64_MIN = -(2**63)
_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class ColumnSpec:
    """Name, value kind and nullability of one frame column."""

    name: str
    kind: str
    nullable: bool = True

    def __post_init__(self):
        if self.kind not in VALID_KINDS:
            raise ValidationError(f"unknown column kind {self.kind!r}")


@dataclass(frozen=True)
class ColumnMapping:
    """Source column names for the four core roles (id, lat, lon, time)."""

    id_col: str
    lat_col: str
    lon_col: str
    time_col: str

    def __post_init__(self):
        names = self.as_tuple()
        if any(not isinstance(n, str) or not n for n in names):
            raise ValidationError("core column names must be non-empty strings")
        if len(set(names)) != 4:
            raise ValidationError(f"core column names must be distinct, got {names}")

    def as_tuple(self) -> tuple[str, str, str, str]:
        return (self.id_col, self.lat_col, self.lon_col, self.time_col)


@dataclass(frozen=True)
class TrajectoryPoint:
    """One validated fix: opaque id, WGS-84 degrees, UTC epoch seconds."""

    traj_id: str
    lat: float
    lon: float
    timestamp: int

    def __post_init__(self):
        _check_lat_lon(self.lat, self.lon)
        if not (_INT64_MIN <= int(self.timestamp) <= _INT64_MAX):
            raise ValidationError(f"timestamp {self.timestamp} exceeds 64-bit seconds")


def _check_lat_lon(lat: float, lon: float) -> None:
    if not (math.isfinite(lat) and -90.0 <= lat <= 90.0):
        raise ValidationError(f"latitude {lat} out of range [-90, 90]")
    if not (math.isfinite(lon) and -180.0 <= lon <= 180.0):
        raise ValidationError(f"longitude {lon} out of range [-180, 180]")


def parse_timestamp(value) -> int:
    """Coerce a raw timestamp value to integer UTC epoch seconds.

    Accepts integers, integral floats, timezone-naive (treated as UTC) or
    aware datetimes, and strings holding either an integer or an ISO-8601
    "YYYY-MM-DDTHH:MM:SS" value with optional trailing "Z".
    """
    if isinstance(value, bool):
        raise ValidationError(f"unparsable timestamp {value!r}")
    if isinstance(value, (int, np.integer)):
        out = int(value)
    elif isinstance(value, (float, np.floating)):
        if not (math.isfinite(value) and float(value).is_integer()):
            raise ValidationError(f"unparsable timestamp {value!r} (whole seconds required)")
        out = int(value)
    elif isinstance(value, dt.datetime):
        if value.tzinfo is None:
            value = value.replace(tzinfo=dt.timezone.utc)
        out = int(value.timestamp())
    elif isinstance(value, str):
        text = value.strip()
        try:
            out = int(text)
        except ValueError:
            out = parse_iso_timestamp(text)
    else:
        raise ValidationError(f"unparsable timestamp {value!r}")
    if not (_INT64_MIN <= out <= _INT64_MAX):
        raise ValidationError(f"timestamp {value!r} exceeds 64-bit seconds")
    return out


def parse_iso_timestamp(text: str) -> int:
    """Parse "YYYY-MM-DDTHH:MM:SS" (optional trailing "Z") as UTC epoch seconds."""
    raw = text[:-1] if text.endswith("Z") else text
    try:
        parsed = dt.datetime.strptime(raw, "%Y-%m-%dT%H:%M:%S")
    except ValueError:
        raise ValidationError(f"unparsable timestamp {text!r}") from None
    return int(parsed.replace(tzinfo=dt.timezone.utc).timestamp())


def is_null_value(kind: str, value) -> bool:
    if value is None:
        return True
    if kind == "float":
        return isinstance(value, (float, np.floating)) and math.isnan(value)
    if kind == "string":
        return value == ""
    return False


def null_mask(kind: str, arr: np.ndarray) -> np.ndarray:
    """Boolean mask of null entries for a column of the given kind."""
    if kind == "float" and arr.dtype.kind == "f":
        return np.isnan(arr)
    if arr.dtype.kind == "U":
        return arr == "" if kind == "string" else np.zeros(arr.shape, bool)
    if arr.dtype == object:
        return np.fromiter(
            (is_null_value(kind, v) for v in arr), dtype=bool, count=len(arr)
        )
    return np.zeros(arr.shape, bool)


def null_filler(kind: str, count: int) -> np.ndarray:
    """Array of `count` null markers suitable for a column of `kind`."""
    if kind == "float":
        return np.full(count, np.nan)
    out = np.empty(count, dtype=object)
    out[:] = None
    return out


def _to_object_column(kind: str, arr: np.ndarray) -> np.ndarray:
    """Canonical object representation: nulls become None."""
    out = np.empty(len(arr), dtype=object)
    for i, v in enumerate(arr):
        if is_null_value(kind, v):
            out[i] = None
        elif kind == "float":
            out[i] = float(v)
        elif kind in ("integer", "timestamp"):
            out[i] = int(v)
        elif kind == "boolean":
            out[i] = bool(v)
        else:
            out[i] = str(v)
    return out


def column_values_equal(kind: str, a: np.ndarray, b: np.ndarray) -> bool:
    if len(a) != len(b):
        return False
    if kind == "float" and a.dtype.kind == "f" and b.dtype.kind == "f":
        return np.array_equal(a, b, equal_nan=True)
    ca, cb = _to_object_column(kind, a), _to_object_column(kind, b)
    for x, y in zip(ca, cb):
        if x is None or y is None:
            if x is not y:
                return False
        elif isinstance(x, float) and isinstance(y, float):
            if x != y and not (math.isnan(x) and math.isnan(y)):
                return False
        elif x != y:
            return False
    return True


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _coerce_feature_column(name: str, values) -> tuple[str, np.ndarray]:
    """Infer (kind, array) for an extra input column.

    Typed numpy arrays keep their kind; object/list input is scanned and the
    narrowest of boolean < integer < float < string that fits is used.  A
    column of only nulls becomes a string column.
    """
    arr = np.asarray(values) if not isinstance(values, np.ndarray) else values
    if arr.dtype.kind == "f":
        return "float", arr.astype(float)
    if arr.dtype.kind in "iu":
        return "integer", arr.astype(np.int64)
    if arr.dtype.kind == "b":
        return "boolean", arr
    if arr.dtype.kind == "U":
        return "string", arr
    if arr.dtype != object:
        raise ValidationError(f"column {name!r}: unsupported dtype {arr.dtype}")

    kinds = set()
    for v in arr:
        if v is None:
            continue
        if isinstance(v, (bool, np.bool_)):
            kinds.add("boolean")
        elif isinstance(v, (int, np.integer)):
            kinds.add("integer")
        elif isinstance(v, (float, np.floating)):
            kinds.add("float")
        elif isinstance(v, str):
            kinds.add("string")
        else:
            raise ValidationError(
                f"column {name!r}: unsupported value type {type(v).__name__}"
            )
    if not kinds:
        return "string", arr.copy()
    if kinds == {"boolean"}:
        kind = "boolean"
    elif kinds == {"integer"}:
        kind = "integer"
    elif kinds <= {"integer", "float"}:
        kind = "float"
    elif kinds == {"string"}:
        kind = "string"
    else:
        raise ValidationError(f"column {name!r}: mixed value types {sorted(kinds)}")
    if kind == "float":
        out = np.array([np.nan if v is None else float(v) for v in arr])
        return "float", out
    return kind, arr.copy()


class TrajectoryFrame:
    """Immutable, canonically ordered column store of trajectory points."""

    def __init__(
        self,
        schema: Sequence[ColumnSpec],
        columns: Mapping[str, np.ndarray],
        core: ColumnMapping,
        *,
        validate: bool = True,
        dropped_duplicates: int = 0,
    ):
        self.schema: tuple[ColumnSpec, ...] = tuple(schema)
        self.core = core
        self._columns = {spec.name: np.asarray(columns[spec.name]) for spec in self.schema}
        # Count of exact-duplicate rows collapsed at build time (load artifact,
        # not part of frame identity).
        self.dropped_duplicates = dropped_duplicates
        self._check_structure()
        if validate:
            self.check_valid()
        for arr in self._columns.values():
            _freeze(arr)

    # -- construction helpers -------------------------------------------------

    def _check_structure(self) -> None:
        names = [s.name for s in self.schema]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate column names in schema")
        for role in self.core.as_tuple():
            if role not in names:
                raise ValidationError(f"core column {role!r} missing from schema")
        if names[:4] != list(self.core.as_tuple()):
            raise ValidationError("schema must list core columns first (id, lat, lon, time)")
        lengths = {len(a) for a in self._columns.values()}
        if len(lengths) > 1:
            raise ValidationError(f"column arrays have differing lengths: {sorted(lengths)}")

    def check_valid(self) -> None:
        """Raise ValidationError unless every frame invariant holds."""
        ids, lats, lons, times = self.ids, self.lats, self.lons, self.times
        if len(self) == 0:
            return
        if ids.dtype.kind not in ("U", "O"):
            raise ValidationError("id column must hold strings")
        if np.any(~np.isfinite(lats)) or lats.min() < -90.0 or lats.max() > 90.0:
            raise ValidationError("latitude out of range [-90, 90]")
        if np.any(~np.isfinite(lons)) or lons.min() < -180.0 or lons.max() > 180.0:
            raise ValidationError("longitude out of range [-180, 180]")
        if times.dtype != np.int64:
            raise ValidationError("timestamps must be int64 epoch seconds")
        if len(self) > 1:
            same = ids[1:] == ids[:-1]
            if np.any(ids[1:] < ids[:-1]):
                raise ValidationError("rows not sorted by trajectory id")
            dt_ok = times[1:] > times[:-1]
            if np.any(same & ~dt_ok):
                raise ValidationError("timestamps not strictly increasing within a trajectory")
        for spec in self.schema[4:]:
            if not spec.nullable and null_mask(spec.kind, self._columns[spec.name]).any():
                raise ValidationError(f"nulls in non-nullable column {spec.name!r}")

    # -- basic accessors ------------------------------------------------------

    def __len__(self) -> int:
        return len(self._columns[self.core.id_col])

    @property
    def num_rows(self) -> int:
        return len(self)

    @property
    def ids(self) -> np.ndarray:
        return self._columns[self.core.id_col]

    @property
    def lats(self) -> np.ndarray:
        return self._columns[self.core.lat_col]

    @property
    def lons(self) -> np.ndarray:
        return self._columns[self.core.lon_col]

    @property
    def times(self) -> np.ndarray:
        return self._columns[self.core.time_col]

    def column(self, name: str) -> np.ndarray:
        if name not in self._columns:
            raise ValidationError(f"unknown column {name!r}")
        return self._columns[name]

    def column_names(self) -> list[str]:
        return [s.name for s in self.schema]

    def spec_for(self, name: str) -> ColumnSpec:
        for s in self.schema:
            if s.name == name:
                return s
        raise ValidationError(f"unknown column {name!r}")

    def traj_ids(self) -> list[str]:
        """Distinct trajectory ids in canonical (ascending) order."""
        if len(self) == 0:
            return []
        ids = self.ids
        change = np.flatnonzero(ids[1:] != ids[:-1]) + 1
        starts = np.concatenate(([0], change))
        return [str(ids[i]) for i in starts]

    def row(self, i: int) -> TrajectoryPoint:
        return TrajectoryPoint(
            str(self.ids[i]), float(self.lats[i]), float(self.lons[i]), int(self.times[i])
        )

    def __repr__(self) -> str:
        return (
            f"TrajectoryFrame({len(self)} rows, "
            f"{len(self.traj_ids())} trajectories, {len(self.schema)} columns)"
        )

    # -- derivation -----------------------------------------------------------

    def with_columns(self, new: Mapping[str, tuple[str, np.ndarray]]) -> "TrajectoryFrame":
        """New frame with feature columns added or (if the name exists) replaced.

        `new` maps column name to (kind, values).  Core columns cannot be
        overwritten.
        """
        core_names = set(self.core.as_tuple())
        schema = list(self.schema)
        columns = dict(self._columns)
        for name, (kind, values) in new.items():
            if name in core_names:
                raise ValidationError(
                    f"feature column {name!r} would overwrite a core column"
                )
            arr = np.asarray(values)
            if len(arr) != len(self):
                raise ValidationError(
                    f"column {name!r}: {len(arr)} values for {len(self)} rows"
                )
            spec = ColumnSpec(name, kind, nullable=True)
            existing = [i for i, s in enumerate(schema) if s.name == name]
            if existing:
                schema[existing[0]] = spec
            else:
                schema.append(spec)
            columns[name] = arr
        return TrajectoryFrame(
            schema, columns, self.core, validate=False,
            dropped_duplicates=self.dropped_duplicates,
        )

    def equals(self, other: "TrajectoryFrame") -> bool:
        """Value equality: same schema, same core mapping, same cell values."""
        if not isinstance(other, TrajectoryFrame):
            return False
        if self.schema != other.schema or self.core != other.core:
            return False
        return all(
            column_values_equal(s.kind, self._columns[s.name], other._columns[s.name])
            for s in self.schema
        )


class TrajectorySegment:
    """All rows of one trajectory, in frame order. The unit of parallel work."""

    __slots__ = ("traj_id", "schema", "core", "_columns")

    def __init__(
        self,
        traj_id: str,
        schema: Sequence[ColumnSpec],
        columns: Mapping[str, np.ndarray],
        core: ColumnMapping,
        *,
        validate: bool = True,
    ):
        self.traj_id = str(traj_id)
        self.schema = tuple(schema)
        self.core = core
        self._columns = {s.name: np.asarray(columns[s.name]) for s in self.schema}
        if validate:
            n = len(self._columns[core.id_col])
            if n == 0:
                raise ValidationError(f"trajectory {self.traj_id!r}: empty segment")
            if any(len(a) != n for a in self._columns.values()):
                raise ValidationError(f"trajectory {self.traj_id!r}: ragged columns")
            times = self._columns[core.time_col]
            if n > 1 and not np.all(times[1:] > times[:-1]):
                raise ValidationError(
                    f"trajectory {self.traj_id!r}: timestamps not strictly increasing"
                )

    def __len__(self) -> int:
        return len(self._columns[self.core.id_col])

    @property
    def lats(self) -> np.ndarray:
        return self._columns[self.core.lat_col]

    @property
    def lons(self) -> np.ndarray:
        return self._columns[self.core.lon_col]

    @property
    def times(self) -> np.ndarray:
        return self._columns[self.core.time_col]

    def column(self, name: str) -> np.ndarray:
        if name not in self._columns:
            raise ValidationError(f"unknown column {name!r}")
        return self._columns[name]

    def has_column(self, name: str) -> bool:
        return name in self._columns

    def columns_dict(self) -> dict[str, np.ndarray]:
        return dict(self._columns)

    def take(self, indices: np.ndarray) -> "TrajectorySegment | None":
        """Row subset (indices ascending). Returns None when nothing is left."""
        if len(indices) == 0:
            return None
        cols = {name: arr[indices] for name, arr in self._columns.items()}
        return TrajectorySegment(self.traj_id, self.schema, cols, self.core, validate=False)

    def with_columns(self, new: Mapping[str, tuple[str, np.ndarray]]) -> "TrajectorySegment":
        core_names = set(self.core.as_tuple())
        schema = list(self.schema)
        columns = dict(self._columns)
        for name, (kind, values) in new.items():
            if name in core_names:
                raise ValidationError(
                    f"feature column {name!r} would overwrite a core column"
                )
            arr = np.asarray(values)
            if len(arr) != len(self):
                raise ValidationError(
                    f"column {name!r}: {len(arr)} values for {len(self)} rows"
                )
            spec = ColumnSpec(name, kind, nullable=True)
            existing = [i for i, s in enumerate(schema) if s.name == name]
            if existing:
                schema[existing[0]] = spec
            else:
                schema.append(spec)
            columns[name] = arr
        return TrajectorySegment(self.traj_id, schema, columns, self.core, validate=False)


# -- frame construction --------------------------------------------------------


def build_frame(rows, mapping: ColumnMapping) -> TrajectoryFrame:
    """Validate raw records and assemble a canonical TrajectoryFrame.

    `rows` is either a sequence of per-row mappings or a mapping from column
    name to a sequence of values (both orientations carry the same data).
    Columns beyond the four mapped core roles are kept as feature columns.
    Exact duplicate rows (same id, time, lat, lon) are collapsed to their
    first occurrence; the number removed is reported on
    ``frame.dropped_duplicates``.  Rows sharing (id, time) but disagreeing on
    coordinates are a hard error.
    """
    if isinstance(rows, Mapping):
        columns = {name: list(values) for name, values in rows.items()}
        lengths = {len(v) for v in columns.values()}
        if len(lengths) > 1:
            raise ValidationError(f"column lengths differ: {sorted(lengths)}")
    else:
        records = list(rows)
        if records:
            header = list(records[0].keys())
            expected = set(header)
            columns = {name: [] for name in header}
            for i, rec in enumerate(records):
                if set(rec.keys()) != expected:
                    raise ValidationError(f"row {i}: fields differ from first row")
                for name in header:
                    columns[name].append(rec[name])
        else:
            columns = {name: [] for name in mapping.as_tuple()}

    for role in mapping.as_tuple():
        if role not in columns:
            raise ValidationError(f"mapped column {role!r} not present in input")

    n = len(columns[mapping.id_col])

    ids = _coerce_ids(columns[mapping.id_col])
    lats = _coerce_coord(columns[mapping.lat_col], "latitude", -90.0, 90.0)
    lons = _coerce_coord(columns[mapping.lon_col], "longitude", -180.0, 180.0)
    times = _coerce_times(columns[mapping.time_col])

    feature_specs: list[ColumnSpec] = []
    feature_cols: dict[str, np.ndarray] = {}
    for name, values in columns.items():
        if name in mapping.as_tuple():
            continue
        if len(values) != n:
            raise ValidationError(f"column {name!r}: length {len(values)} != {n}")
        kind, arr = _coerce_feature_column(name, values)
        feature_specs.append(ColumnSpec(name, kind, nullable=True))
        feature_cols[name] = arr

    # Canonical sort; stable so equal (id, time) keep input order.
    _, codes = np.unique(ids, return_inverse=True) if n else (None, np.empty(0, np.int64))
    order = np.lexsort((times, codes))
    ids, lats, lons, times = ids[order], lats[order], lons[order], times[order]
    feature_cols = {k: v[order] for k, v in feature_cols.items()}

    keep, dropped = _resolve_duplicates(ids, lats, lons, times, order)
    if dropped:
        ids, lats, lons, times = ids[keep], lats[keep], lons[keep], times[keep]
        feature_cols = {k: v[keep] for k, v in feature_cols.items()}

    schema = [
        ColumnSpec(mapping.id_col, "string", nullable=False),
        ColumnSpec(mapping.lat_col, "float", nullable=False),
        ColumnSpec(mapping.lon_col, "float", nullable=False),
        ColumnSpec(mapping.time_col, "timestamp", nullable=False),
    ] + feature_specs
    cols = {
        mapping.id_col: ids,
        mapping.lat_col: lats,
        mapping.lon_col: lons,
        mapping.time_col: times,
    }
    cols.update(feature_cols)
    return TrajectoryFrame(
        schema, cols, mapping, validate=False, dropped_duplicates=dropped
    )


def _coerce_ids(values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.dtype.kind == "U":
        return arr
    out = []
    for i, v in enumerate(arr):
        if v is None:
            raise ValidationError(f"row {i}: trajectory id is null")
        out.append(str(v))
    return np.array(out, dtype=str) if out else np.empty(0, dtype="U1")


def _coerce_coord(values, label: str, lo: float, hi: float) -> np.ndarray:
    try:
        arr = np.asarray(values, dtype=float)
    except (TypeError, ValueError):
        for i, v in enumerate(values):
            try:
                float(v)
            except (TypeError, ValueError):
                raise ValidationError(f"row {i}: unparsable {label} {v!r}") from None
        raise
    bad = ~np.isfinite(arr) | (arr < lo) | (arr > hi)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise ValidationError(f"row {i}: {label} {arr[i]} out of range [{lo}, {hi}]")
    return arr


def _coerce_times(values) -> np.ndarray:
    arr = np.asarray(values)
    if np.issubdtype(arr.dtype, np.integer):
        return arr.astype(np.int64)
    out = np.empty(len(arr), dtype=np.int64)
    for i, v in enumerate(arr):
        try:
            out[i] = parse_timestamp(v)
        except ValidationError as exc:
            raise ValidationError(f"row {i}: {exc}") from None
    return out


def _resolve_duplicates(ids, lats, lons, times, order) -> tuple[np.ndarray, int]:
    """Keep-first mask over sorted rows; error on conflicting (id, time) pairs."""
    n = len(ids)
    if n < 2:
        return np.arange(n), 0
    tie = (ids[1:] == ids[:-1]) & (times[1:] == times[:-1])
    if not np.any(tie):
        return np.arange(n), 0
    keep = np.ones(n, dtype=bool)
    for j in np.flatnonzero(tie):
        # j and j+1 share (id, time); compare against the first kept row of the run
        anchor = j
        while anchor > 0 and not keep[anchor]:
            anchor -= 1
        if lats[j + 1] == lats[anchor] and lons[j + 1] == lons[anchor]:
            keep[j + 1] = False
        else:
            raise ValidationError(
                f"rows {int(order[anchor])} and {int(order[j + 1])}: trajectory "
                f"{ids[j]!r} repeats timestamp {int(times[j])} with different coordinates"
            )
    return np.flatnonzero(keep), int(n - keep.sum())


# -- partition / merge -----------------------------------------------------------


def partition(frame: TrajectoryFrame) -> list[TrajectorySegment]:
    """Split a frame into one segment per trajectory, ordered by id."""
    n = len(frame)
    if n == 0:
        return []
    ids = frame.ids
    change = np.flatnonzero(ids[1:] != ids[:-1]) + 1
    starts = np.concatenate(([0], change))
    ends = np.concatenate((change, [n]))
    segments = []
    for a, b in zip(starts, ends):
        cols = {s.name: frame.column(s.name)[a:b] for s in frame.schema}
        segments.append(
            TrajectorySegment(str(ids[a]), frame.schema, cols, frame.core, validate=False)
        )
    return segments


def merge(
    segments: Sequence[TrajectorySegment],
    schema: Sequence[ColumnSpec] | None = None,
    core: ColumnMapping | None = None,
) -> TrajectoryFrame:
    """Reassemble segments into a canonical frame (inverse of partition).

    Segments may arrive in any order; output is sorted by id.  All segments
    must share one schema and carry distinct ids.  `schema`/`core` are only
    required when `segments` is empty.
    """
    segs = sorted(segments, key=lambda s: s.traj_id)
    if not segs:
        if schema is None or core is None:
            raise ValidationError("merging zero segments requires schema and core")
        cols = {
            s.name: np.empty(0, dtype=float if s.kind == "float" else object)
            for s in schema
        }
        cols[core.id_col] = np.empty(0, dtype="U1")
        cols[core.time_col] = np.empty(0, dtype=np.int64)
        cols[core.lat_col] = np.empty(0, dtype=float)
        cols[core.lon_col] = np.empty(0, dtype=float)
        return TrajectoryFrame(schema, cols, core, validate=False)

    ref = segs[0]
    for seg in segs[1:]:
        if seg.schema != ref.schema or seg.core != ref.core:
            raise ValidationError(
                f"trajectory {seg.traj_id!r}: schema differs from other segments"
            )
    seen_ids = [s.traj_id for s in segs]
    if len(set(seen_ids)) != len(seen_ids):
        dupe = sorted({i for i in seen_ids if seen_ids.count(i) > 1})
        raise ValidationError(f"duplicate trajectory ids in merge: {dupe}")

    columns = {}
    for spec in ref.schema:
        parts = [seg.column(spec.name) for seg in segs]
        if any(p.dtype == object for p in parts):
            parts = [p.astype(object) for p in parts]
        columns[spec.name] = np.concatenate(parts)
    return TrajectoryFrame(ref.schema, columns, ref.core, validate=False)
