"""Append-only quantized vector store with exact L1 linear-scan lookup.

File layout (all little-endian, bit-exact):

    header:  magic `SVS1` | u16 version=1 | u16 n | u8 d | u8 b
             | d x f32 scale | u64 count
    record:  u64 segment_id | n^2*d*b/8 payload bytes

Payloads hold the quantized codes (u8/u16) or raw f32 values for b=32.
Scans run against an in-memory dequantized float32 matrix built lazily from
the file; per-row distances accumulate in float64, and ties order by
segment id, so results are identical for any thread count.
"""

from __future__ import annotations

import platform
import struct
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .encoder import EncoderConfig, FeatureVector, QuantizedVector, dequantize, quantize
from .errors import FormatError

MAGIC = b"SVS1"
FORMAT_VERSION = 1
#: Reference collection size used for benchmark extrapolation.
REFERENCE_VECTOR_COUNT = 1_046_235

_HEADER = struct.Struct("<4sHHBB")


@dataclass(frozen=True)
class QueryResult:
    segment_id: int
    distance: float
    rank: int


@dataclass(frozen=True)
class BenchmarkReport:
    """Wall-clock statistics of repeated full scans."""

    vector_count: int
    dims: int
    query_count: int
    repetitions: int
    threads: int
    mean_ms: float
    p50_ms: float
    p95_ms: float
    vector_dims_per_ms: float
    extrapolated_ms: float  # projected mean for REFERENCE_VECTOR_COUNT vectors
    machine: str


def _code_dtype(bits: int) -> np.dtype:
    return {8: np.dtype("u1"), 16: np.dtype("<u2"), 32: np.dtype("<f4")}[bits]


class VectorStore:
    """Single-writer, multi-reader store of quantized feature vectors."""

    def __init__(self, path: Path, config: EncoderConfig, scale: np.ndarray, count: int) -> None:
        self._path = path
        self._config = config
        self._scale = scale
        self._count = count
        self._dims = config.dims
        self._payload_len = self._dims * config.bits // 8
        self._record_len = 8 + self._payload_len
        self._header_len = _HEADER.size + 4 * config.d + 8
        self._file = open(path, "r+b")
        self._ids = self._read_ids()
        self._id_set = set(self._ids.tolist())
        self._matrix: np.ndarray | None = None
        self._pending: list[np.ndarray] = []
        self._lock = threading.Lock()

    # -- lifecycle ---------------------------------------------------------

    @classmethod
    def create(
        cls, path: str | Path, config: EncoderConfig, scale: Sequence[float] | None = None
    ) -> "VectorStore":
        """Create a new store file; the path must not already exist."""
        path = Path(path)
        if path.exists():
            raise FileExistsError(f"store path already exists: {path}")
        scale_arr = np.ones(config.d, dtype=np.float32) if scale is None else np.asarray(
            scale, dtype=np.float32
        )
        if scale_arr.shape != (config.d,):
            raise ValueError(f"scale must have {config.d} entries, got {scale_arr.shape}")
        header = (
            _HEADER.pack(MAGIC, FORMAT_VERSION, config.n, config.d, config.bits)
            + scale_arr.astype("<f4").tobytes()
            + struct.pack("<Q", 0)
        )
        with open(path, "xb") as handle:
            handle.write(header)
        return cls(path, config, scale_arr, count=0)

    @classmethod
    def open(cls, path: str | Path, expected: EncoderConfig | None = None) -> "VectorStore":
        """Open an existing store, verifying header integrity and file length."""
        path = Path(path)
        with open(path, "rb") as handle:
            fixed = handle.read(_HEADER.size)
            if len(fixed) < _HEADER.size:
                raise FormatError(f"{path}: file shorter than the store header")
            magic, version, n, d, bits = _HEADER.unpack(fixed)
            if magic != MAGIC:
                raise FormatError(f"{path}: bad magic {magic!r}")
            if version != FORMAT_VERSION:
                raise FormatError(f"{path}: unsupported store version {version}")
            try:
                config = EncoderConfig(n=n, d=d, bits=bits)
            except ValueError as exc:
                raise FormatError(f"{path}: invalid header config: {exc}") from None
            scale_bytes = handle.read(4 * d)
            count_bytes = handle.read(8)
            if len(scale_bytes) < 4 * d or len(count_bytes) < 8:
                raise FormatError(f"{path}: truncated store header")
            scale = np.frombuffer(scale_bytes, dtype="<f4").copy()
            (count,) = struct.unpack("<Q", count_bytes)
        if expected is not None and config != expected:
            raise ValueError(f"{path}: store config {config} does not match expected {expected}")
        header_len = _HEADER.size + 4 * config.d + 8
        record_len = 8 + config.dims * config.bits // 8
        expected_size = header_len + count * record_len
        actual = path.stat().st_size
        if actual != expected_size:
            raise FormatError(
                f"{path}: store is truncated or has trailing garbage "
                f"({actual} bytes, header says {expected_size})"
            )
        return cls(path, config, scale, count)

    def close(self) -> None:
        if not self._file.closed:
            self._file.flush()
            self._file.close()

    def __enter__(self) -> "VectorStore":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    # -- properties ----------------------------------------------------------

    @property
    def config(self) -> EncoderConfig:
        return self._config

    @property
    def scale(self) -> np.ndarray:
        return self._scale

    @property
    def dims(self) -> int:
        return self._dims

    def __len__(self) -> int:
        return self._count

    @property
    def segment_ids(self) -> np.ndarray:
        return self._ids[: self._count].copy()

    # -- writing -------------------------------------------------------------

    def append(self, segment_id: int, vector: FeatureVector | QuantizedVector) -> None:
        """Append one record; it is flushed and queryable before returning."""
        q = self._as_quantized(vector)
        with self._lock:
            if segment_id in self._id_set:
                raise ValueError(f"duplicate segment id {segment_id}")
            self._write_records([segment_id], q.codes.reshape(1, -1))

    def extend(self, segment_ids: Sequence[int], matrix: np.ndarray) -> None:
        """Bulk-append float vectors given as an (r, n^2*d) matrix."""
        matrix = np.asarray(matrix)
        if matrix.ndim != 2 or matrix.shape[1] != self._dims:
            raise ValueError(f"expected (r, {self._dims}) matrix, got {matrix.shape}")
        if len(segment_ids) != matrix.shape[0]:
            raise ValueError("segment id count does not match the matrix rows")
        ids = [int(s) for s in segment_ids]
        with self._lock:
            fresh = set(ids)
            if len(fresh) != len(ids) or fresh & self._id_set:
                raise ValueError("duplicate segment ids in bulk append")
            step = max(1, (32 << 20) // max(1, 8 * self._dims))
            for start in range(0, len(ids), step):
                stop = min(start + step, len(ids))
                self._write_records(ids[start:stop], self._quantize_rows(matrix[start:stop]))

    def _quantize_rows(self, rows: np.ndarray) -> np.ndarray:
        values = np.asarray(rows, dtype=np.float64)
        if not np.all(np.isfinite(values)):
            raise ValueError("vectors contain non-finite values")
        if np.abs(values).max(initial=0.0) > 1.0 + 1e-9:
            raise ValueError("vector values outside [-1, 1]")
        values = np.clip(values, -1.0, 1.0)
        if self._config.bits == 32:
            return values.astype(np.float32)
        levels = (1 << self._config.bits) - 1
        return np.rint((values + 1.0) * 0.5 * levels).astype(_code_dtype(self._config.bits))

    def _as_quantized(self, vector: FeatureVector | QuantizedVector) -> QuantizedVector:
        if isinstance(vector, FeatureVector):
            if (vector.n, vector.d) != (self._config.n, self._config.d):
                raise ValueError(
                    f"vector shape (n={vector.n}, d={vector.d}) does not match store "
                    f"(n={self._config.n}, d={self._config.d})"
                )
            return quantize(vector, self._config.bits)
        if (vector.n, vector.d, vector.bits) != (
            self._config.n,
            self._config.d,
            self._config.bits,
        ):
            raise ValueError("quantized vector does not match the store configuration")
        return vector

    def _write_records(self, segment_ids: list[int], codes: np.ndarray) -> None:
        dtype = _code_dtype(self._config.bits)
        payloads = np.ascontiguousarray(codes).astype(dtype, copy=False)
        self._file.seek(self._header_len + self._count * self._record_len)
        chunks = []
        for sid, row in zip(segment_ids, payloads):
            chunks.append(struct.pack("<Q", sid))
            chunks.append(row.tobytes())
        self._file.write(b"".join(chunks))
        self._count += len(segment_ids)
        self._file.seek(_HEADER.size + 4 * self._config.d)
        self._file.write(struct.pack("<Q", self._count))
        self._file.flush()
        self._ids = np.concatenate([self._ids, np.asarray(segment_ids, dtype=np.uint64)])
        self._id_set.update(segment_ids)
        if self._matrix is not None:
            self._pending.extend(self._to_float32(payloads))

    # -- reading ---------------------------------------------------------------

    def _read_ids(self) -> np.ndarray:
        if self._count == 0:
            return np.empty(0, dtype=np.uint64)
        raw = np.memmap(self._path, mode="r", offset=self._header_len, dtype=self._record_dtype())
        return raw["id"][: self._count].astype(np.uint64)

    def _record_dtype(self) -> np.dtype:
        return np.dtype([("id", "<u8"), ("payload", np.uint8, (self._payload_len,))])

    def _to_float32(self, payload_rows: np.ndarray) -> np.ndarray:
        """Dequantize raw code rows into float32 scan rows."""
        bits = self._config.bits
        if bits == 32:
            return payload_rows.view("<f4").astype(np.float32, copy=False).reshape(-1, self._dims)
        codes = payload_rows.view(_code_dtype(bits)).reshape(-1, self._dims)
        levels = (1 << bits) - 1
        return (codes.astype(np.float64) / levels * 2.0 - 1.0).astype(np.float32)

    def _ensure_matrix(self) -> np.ndarray:
        with self._lock:
            if self._matrix is None:
                if self._count == 0:
                    self._matrix = np.empty((0, self._dims), dtype=np.float32)
                else:
                    raw = np.memmap(
                        self._path, mode="r", offset=self._header_len, dtype=self._record_dtype()
                    )
                    out = np.empty((self._count, self._dims), dtype=np.float32)
                    step = max(1, (64 << 20) // self._record_len)
                    for start in range(0, self._count, step):
                        stop = min(start + step, self._count)
                        out[start:stop] = self._to_float32(np.asarray(raw["payload"][start:stop]))
                    del raw
                    self._matrix = out
            elif self._pending:
                self._matrix = np.vstack([self._matrix, np.stack(self._pending)])
                self._pending.clear()
            return self._matrix

    def vectors(self) -> Iterator[tuple[int, np.ndarray]]:
        """Yield (segment_id, dequantized float64 values) straight from disk."""
        self._file.flush()
        config = self._config
        with open(self._path, "rb") as handle:
            handle.seek(self._header_len)
            for _ in range(self._count):
                record = handle.read(self._record_len)
                (sid,) = struct.unpack_from("<Q", record)
                codes = np.frombuffer(record, dtype=_code_dtype(config.bits), offset=8)
                q = QuantizedVector(config.n, config.d, config.bits, codes)
                yield sid, dequantize(q).values

    # -- search ------------------------------------------------------------------

    def knn(self, query: FeatureVector | np.ndarray, k: int, threads: int = 1) -> list[QueryResult]:
        """Exact top-k by linear scan under L1; ties order by segment id."""
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        q = self._query_values(query)
        count = self._count
        matrix = self._ensure_matrix()[:count]
        ids = self._ids[:count]
        distances = self._scan(matrix, q, threads)
        order = np.lexsort((ids, distances))[: min(k, count)]
        return [
            QueryResult(segment_id=int(ids[i]), distance=float(distances[i]), rank=rank)
            for rank, i in enumerate(order, start=1)
        ]

    def _query_values(self, query: FeatureVector | np.ndarray) -> np.ndarray:
        if isinstance(query, FeatureVector):
            if (query.n, query.d) != (self._config.n, self._config.d):
                raise ValueError(
                    f"query shape (n={query.n}, d={query.d}) does not match store "
                    f"(n={self._config.n}, d={self._config.d})"
                )
            values = query.values
        else:
            values = np.asarray(query)
            if values.shape != (self._dims,):
                raise ValueError(f"query must have {self._dims} dims, got shape {values.shape}")
        return values.astype(np.float32)

    def _scan(self, matrix: np.ndarray, q: np.ndarray, threads: int) -> np.ndarray:
        count = matrix.shape[0]
        distances = np.empty(count, dtype=np.float64)
        chunk = max(1, (8 << 20) // max(1, 4 * self._dims))

        def scan_range(start: int, stop: int) -> None:
            buf = np.empty((min(chunk, max(stop - start, 1)), self._dims), dtype=np.float32)
            for lo in range(start, stop, chunk):
                hi = min(lo + chunk, stop)
                part = buf[: hi - lo]
                np.subtract(matrix[lo:hi], q, out=part)
                np.abs(part, out=part)
                distances[lo:hi] = part.sum(axis=1, dtype=np.float64)

        if threads <= 1 or count < 2 * chunk:
            scan_range(0, count)
        else:
            bounds = np.linspace(0, count, threads + 1, dtype=int)
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = [
                    pool.submit(scan_range, int(bounds[t]), int(bounds[t + 1]))
                    for t in range(threads)
                ]
                for future in futures:
                    future.result()
        return distances

    # -- benchmarking -----------------------------------------------------------

    def scan_benchmark(
        self,
        queries: Sequence[FeatureVector | np.ndarray],
        repetitions: int,
        k: int = 10,
        threads: int = 1,
    ) -> BenchmarkReport:
        """Time repeated full scans and extrapolate to the reference collection size."""
        if self._count == 0:
            raise ValueError("cannot benchmark an empty store")
        if not queries:
            raise ValueError("benchmark needs at least one query")
        if repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {repetitions}")

        self.knn(queries[0], k, threads)  # warm-up: loads and dequantizes the matrix
        times_ms: list[float] = []
        for _ in range(repetitions):
            for query in queries:
                start = time.perf_counter()
                self.knn(query, k, threads)
                times_ms.append((time.perf_counter() - start) * 1e3)

        arr = np.asarray(times_ms)
        mean_ms = float(arr.mean())
        return BenchmarkReport(
            vector_count=self._count,
            dims=self._dims,
            query_count=len(queries),
            repetitions=repetitions,
            threads=threads,
            mean_ms=mean_ms,
            p50_ms=float(np.percentile(arr, 50)),
            p95_ms=float(np.percentile(arr, 95)),
            vector_dims_per_ms=self._count * self._dims / mean_ms,
            extrapolated_ms=mean_ms * REFERENCE_VECTOR_COUNT / self._count,
            machine=f"{platform.platform()} / {platform.processor() or 'unknown cpu'}",
        )
