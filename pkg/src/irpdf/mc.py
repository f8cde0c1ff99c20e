"""Deterministic Monte Carlo estimation of E[φ] and the experiment runner.

Sample i always draws from the (seed, i) stream (see :mod:`irpdf.streams`).
Workers take the indices congruent to their rank modulo the worker count;
values are reassembled in index order before any reduction, so estimates are
bit-identical for every worker count.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

from . import linear_examples as lx
from .perm import Perm, cycle_counts, parse_perm
from .thoma import ThomaParams, tau, validate_params
from .vk import ConfigBatch

log = logging.getLogger(__name__)

STDERR_FLOOR = 1e-12
CHUNK = 1 << 15
CSV_COLUMNS = ["element", "mean_re", "mean_im", "stderr", "target_re", "target_im", "zscore", "verdict"]


class Sampler(Protocol):
    def values(self, g, seed: int, indices: np.ndarray) -> np.ndarray: ...

    def target(self, g) -> complex: ...


class SamplerError(RuntimeError):
    def __init__(self, index: int, cause: BaseException):
        super().__init__(f"sampler failed at sample index {index}: {cause}")
        self.index = index


@dataclass(frozen=True)
class MCEstimate:
    mean: complex
    stderr: float
    samples: int
    seed: int


@dataclass(frozen=True)
class Verdict:
    passed: bool
    zscore: float
    mean: complex
    target: complex
    stderr: float


# -- samplers ----------------------------------------------------------------


@dataclass(frozen=True)
class ConstantSampler:
    value: complex = 1.0

    def values(self, g, seed, indices):
        return np.full(len(indices), self.value)

    def target(self, g) -> complex:
        return self.value


@dataclass(frozen=True)
class VKSampler:
    """φ_ω(g) on the Vershik–Kerov space; ``twisted=False`` drops the sign (the plain IRS)."""

    params: ThomaParams
    twisted: bool = True

    def values(self, g: Perm, seed, indices):
        batch = ConfigBatch.from_stream(self.params, max(1, g.max_support()), seed, indices)
        if self.twisted:
            return batch.phi(g)
        return batch.fixed(g).astype(np.int64)

    def target(self, g: Perm) -> complex:
        if self.twisted:
            return tau(self.params, g)
        # stabilizer probability: each k-cycle needs one atom repeated k times
        out = 1.0
        for k, r in cycle_counts(g).items():
            out *= (sum(a**k for a in self.params.alpha) + sum(b**k for b in self.params.beta)) ** r
        return out


@dataclass(frozen=True)
class SphereSampler:
    dim: int

    def values(self, gamma, seed, indices):
        xi = lx.sphere_batch(self.dim, seed, indices)
        return np.einsum("si,si->s", xi.conj(), xi @ np.asarray(gamma).T)

    def target(self, gamma) -> complex:
        return complex(np.trace(gamma)) / self.dim


@dataclass(frozen=True)
class CircleSampler:
    def values(self, k: int, seed, indices):
        return lx.circle_batch(seed, indices) ** int(k)

    def target(self, k: int) -> complex:
        return 1.0 if int(k) == 0 else 0.0


# -- estimation ----------------------------------------------------------------


def _evaluate(sampler, g, seed: int, indices: np.ndarray) -> np.ndarray:
    out = []
    for start in range(0, len(indices), CHUNK):
        part = indices[start:start + CHUNK]
        try:
            out.append(np.asarray(sampler.values(g, seed, part)))
        except Exception as exc:
            for i in part:
                try:
                    sampler.values(g, seed, np.array([i]))
                except Exception as inner:
                    raise SamplerError(int(i), inner) from inner
            raise SamplerError(int(part[0]), exc) from exc
    return np.concatenate(out) if out else np.zeros(0)


def sample_values(sampler, g, N: int, seed: int, workers: int = 1) -> np.ndarray:
    """All N sample values in index order."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1:
        return _evaluate(sampler, g, seed, np.arange(N, dtype=np.int64))
    parts = [np.arange(w, N, workers, dtype=np.int64) for w in range(workers)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda idx: _evaluate(sampler, g, seed, idx), parts))
    dtype = np.result_type(*[r.dtype for r in results])
    vals = np.empty(N, dtype=dtype)
    for idx, r in zip(parts, results):
        vals[idx] = r
    return vals


def summarize(vals: np.ndarray, seed: int) -> MCEstimate:
    N = len(vals)
    if N == 0:
        raise ValueError("no samples")
    if np.all(vals == vals[0]):
        return MCEstimate(complex(vals[0]), 0.0, N, seed)
    mean = complex(np.mean(vals))
    var = float(np.sum(np.abs(vals - mean) ** 2)) / (N - 1)
    return MCEstimate(mean, math.sqrt(var / N), N, seed)


def estimate(sampler, g, N: int, seed: int, workers: int = 1) -> MCEstimate:
    """Mean and standard error of N evaluations of the sampler at g."""
    if N < 100:
        raise ValueError(f"need at least 100 samples, got {N}")
    return summarize(sample_values(sampler, g, N, seed, workers), seed)


def merge(parts: Sequence[MCEstimate]) -> MCEstimate:
    """Pool estimates over disjoint sample sets (parallel variance formula)."""
    N = sum(p.samples for p in parts)
    mean = complex(math.fsum(p.samples * p.mean.real for p in parts) / N,
                   math.fsum(p.samples * p.mean.imag for p in parts) / N)
    m2 = math.fsum(p.stderr**2 * p.samples * (p.samples - 1) for p in parts)
    m2 += math.fsum(p.samples * abs(p.mean - mean) ** 2 for p in parts)
    return MCEstimate(mean, math.sqrt(m2 / (N - 1) / N), N, parts[0].seed)


def compare(est: MCEstimate, target: complex, z: float = 4.0) -> Verdict:
    if z <= 0:
        raise ValueError("z must be positive")
    dev = abs(est.mean - target)
    score = dev / max(est.stderr, STDERR_FLOOR)
    return Verdict(dev <= z * max(est.stderr, STDERR_FLOOR), score, est.mean, complex(target), est.stderr)


# -- experiments -----------------------------------------------------------------


@dataclass
class ExperimentConfig:
    sampler: dict
    elements: list
    samples: int
    seed: int
    output: str | None = None
    z: float = 4.0
    workers: int = 1
    targets: list | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        errors = []
        if not isinstance(self.sampler, dict) or "id" not in self.sampler:
            errors.append("sampler: must be an object with an 'id' field")
        elif self.sampler["id"] not in SAMPLER_IDS:
            errors.append(f"sampler.id: unknown sampler {self.sampler['id']!r}, expected one of {sorted(SAMPLER_IDS)}")
        if not isinstance(self.elements, list) or not self.elements:
            errors.append("elements: must be a nonempty list")
        if not isinstance(self.samples, int) or self.samples < 100:
            errors.append(f"samples: must be an integer >= 100, got {self.samples!r}")
        if not isinstance(self.seed, int) or self.seed < 0 or self.seed >= 2**64:
            errors.append(f"seed: must be a 64-bit unsigned integer, got {self.seed!r}")
        if not isinstance(self.z, (int, float)) or self.z <= 0:
            errors.append(f"z: must be positive, got {self.z!r}")
        if not isinstance(self.workers, int) or self.workers < 1:
            errors.append(f"workers: must be a positive integer, got {self.workers!r}")
        if self.targets is not None and len(self.targets) != len(self.elements or []):
            errors.append("targets: must have one entry per element")
        if errors:
            raise ValueError("invalid experiment config:\n  " + "\n  ".join(errors))

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {"sampler", "elements", "samples", "seed", "output", "z", "workers", "targets"}
        missing = [k for k in ("sampler", "elements", "samples", "seed") if k not in d]
        if missing:
            raise ValueError("invalid experiment config:\n  " + "\n  ".join(f"{k}: required" for k in missing))
        extra = {k: v for k, v in d.items() if k not in known}
        return cls(**{k: v for k, v in d.items() if k in known}, extra=extra)

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


SAMPLER_IDS = {"constant", "vk", "irs", "sphere", "circle"}


def _parse_complex(x) -> complex:
    if isinstance(x, (list, tuple)):
        return complex(float(x[0]), float(x[1]))
    return complex(x)


def parse_matrix(rows) -> np.ndarray:
    """Complex matrix from nested lists whose entries are [re, im] pairs or reals."""
    return np.array([[_parse_complex(x) for x in row] for row in rows], dtype=complex)


def build_sampler(opts: dict):
    """Return (sampler, element parser) for a config's sampler object."""
    sid = opts["id"]
    if sid == "constant":
        return ConstantSampler(_parse_complex(opts.get("value", 1.0))), parse_perm
    if sid in ("vk", "irs"):
        params = validate_params(opts.get("alpha", []), opts.get("beta", []))
        return VKSampler(params, twisted=(sid == "vk")), parse_perm
    if sid == "sphere":
        dim = int(opts["dim"])

        def parse_unitary(item):
            return lx.check_unitary(parse_matrix(item["matrix"] if isinstance(item, dict) else item))

        return SphereSampler(dim), parse_unitary
    if sid == "circle":
        return CircleSampler(), int
    raise ValueError(f"unknown sampler {sid!r}")


def _element_label(item, i: int) -> str:
    if isinstance(item, dict):
        return str(item.get("name", f"element{i}"))
    if isinstance(item, str):
        return str(parse_perm(item)) if "(" in item or item.strip() == "e" else item
    if isinstance(item, int):
        return str(item)
    return f"element{i}"


@dataclass
class ExperimentReport:
    rows: list[dict]
    summary: dict

    @property
    def passed(self) -> bool:
        return self.summary["pass"]

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([r[c] for c in CSV_COLUMNS])
        return buf.getvalue()


def _fmt(x: float) -> str:
    return repr(float(x))


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Estimate every element, compare against its target, write CSV + JSON summary."""
    sampler, parse = build_sampler(config.sampler)
    rows, failures = [], []
    for i, item in enumerate(config.elements):
        label = _element_label(item, i)
        g = parse(item)
        est = estimate(sampler, g, config.samples, config.seed, config.workers)
        target = _parse_complex(config.targets[i]) if config.targets else complex(sampler.target(g))
        v = compare(est, target, config.z)
        log.info("%s: mean=%s stderr=%.3g target=%s z=%.2f", label, est.mean, est.stderr, target, v.zscore)
        rows.append({
            "element": label,
            "mean_re": _fmt(est.mean.real),
            "mean_im": _fmt(est.mean.imag),
            "stderr": _fmt(est.stderr),
            "target_re": _fmt(target.real),
            "target_im": _fmt(target.imag),
            "zscore": _fmt(v.zscore),
            "verdict": "pass" if v.passed else "fail",
        })
        if not v.passed:
            failures.append(label)
    summary = {"pass": not failures, "failures": failures, "seed": config.seed, "samples": config.samples}
    report = ExperimentReport(rows, summary)
    if config.output:
        out = Path(config.output)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(report.csv_text())
        out.with_suffix(".json").write_text(json.dumps(summary, indent=2) + "\n")
    return report
