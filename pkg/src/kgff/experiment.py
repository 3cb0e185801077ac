"""Monte Carlo runs: sample A uniformly from I^{mn}, count N(Q, A) for every
Q up to Q_max, and compare against the exact main term.

Each sample draws its matrix from its own SplitMix64 stream (see
:meth:`kgff.rng.SplitMix64.for_sample`), so results do not depend on how
samples are scheduled across threads.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import FieldSpec
from .approx import Psi, psi_eval, shell_counts
from .counting import DEFAULT_BUDGET, EXACT, PAPER, check_budget, phi, t_series
from .errors import EmptyInput
from .laurent import FracMatrix
from .rng import SplitMix64

LOG_BASE = "natural"


@dataclass(frozen=True)
class RunConfig:
    field: FieldSpec
    m: int
    n: int
    psi: Psi
    Q_max: int
    samples: int
    seed: int
    epsilon: float = 0.1
    orbits: bool = False

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.m < 1 or self.n < 1 or self.Q_max < 0:
            raise ValueError("need m, n >= 1 and Q_max >= 0")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")

    @property
    def t(self) -> int:
        """Precision that decides every inequality with |q| <= k**Q_max."""
        return self.Q_max + psi_eval(self.psi, self.Q_max)

    def as_dict(self) -> dict:
        F = self.field
        return {"p": F.p, "l": F.l, "modulus": list(F.modulus) if F.modulus else None,
                "k": F.k, "m": self.m, "n": self.n, "psi": str(self.psi),
                "Q_max": self.Q_max, "samples": self.samples, "seed": self.seed,
                "epsilon": self.epsilon, "orbits": self.orbits, "t": self.t,
                "log_base": LOG_BASE}


@dataclass(frozen=True)
class RunRecord:
    seed: int
    sample: int
    Q: int
    N: int
    phi_exact: Fraction
    phi_paper: Fraction
    T: Fraction
    residual: Fraction
    normalized: float | None


def sample_matrix(stream: SplitMix64, m: int, n: int, t: int, F: FieldSpec) -> FracMatrix:
    """Draw the first t digits of every entry, entry-major (i, then j)."""
    if t < 1:
        raise ValueError("t must be >= 1")
    codes = stream.integers_below(F.k, m * n * t)
    return FracMatrix(F, codes.reshape(m, n, t))


def normalized_residual(N: int, phi_exact: Fraction, epsilon: float) -> float | None:
    """|N - Phi| / (sqrt(Phi) * ln(Phi)**(3/2 + eps)), defined for Phi > e."""
    ph = float(phi_exact)
    if ph <= math.e:
        return None
    return abs(float(N - phi_exact)) / (math.sqrt(ph) * math.log(ph) ** (1.5 + epsilon))


def _one_sample(config: RunConfig, index: int, backend: str | None) -> list[int]:
    stream = SplitMix64.for_sample(config.seed, index)
    A = sample_matrix(stream, config.m, config.n, config.t, config.field)
    shells = shell_counts(config.Q_max, A, config.psi, orbits=config.orbits, backend=backend)
    return np.cumsum(shells).tolist()


def run(config: RunConfig, *, threads: int = 1, backend: str | None = None,
        budget: int | None = DEFAULT_BUDGET, with_T: bool = True) -> list[RunRecord]:
    F, m, n, psi = config.field, config.m, config.n, config.psi
    check_budget(F.k ** (m * (config.Q_max + 1)), budget, "per-sample q enumeration")
    Qs = range(config.Q_max + 1)
    ph_exact = [phi(Q, psi, m, n, F, EXACT) for Q in Qs]
    ph_paper = [phi(Q, psi, m, n, F, PAPER) for Q in Qs]
    Ts = t_series(config.Q_max, psi, m, n, F, budget) if with_T else [Fraction(0)] * len(Qs)

    threads = max(1, int(threads or 1))
    if threads == 1:
        per_sample = [_one_sample(config, i, backend) for i in range(config.samples)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_sample = list(pool.map(lambda i: _one_sample(config, i, backend),
                                       range(config.samples)))

    records = []
    for i, Ns in enumerate(per_sample):
        for Q in Qs:
            res = Ns[Q] - ph_exact[Q]
            records.append(RunRecord(config.seed, i, Q, Ns[Q], ph_exact[Q], ph_paper[Q], Ts[Q],
                                     res, normalized_residual(Ns[Q], ph_exact[Q], config.epsilon)))
    return records


@dataclass
class QStats:
    Q: int
    count: int
    mean_N: Fraction
    var_N: Fraction
    phi_exact: Fraction
    phi_paper: Fraction
    max_normalized: float | None


@dataclass
class Stats:
    epsilon: float
    per_Q: list[QStats] = field(default_factory=list)

    @property
    def trend(self) -> list[tuple[int, float]]:
        return [(s.Q, s.max_normalized) for s in self.per_Q if s.max_normalized is not None]

    @property
    def max_normalized(self) -> float | None:
        vals = [v for _, v in self.trend]
        return max(vals) if vals else None

    @property
    def monotone_blowup(self) -> bool:
        """True when the per-Q maxima strictly increase at every step."""
        vals = [v for _, v in self.trend]
        return len(vals) > 1 and all(b > a for a, b in zip(vals, vals[1:]))

    def as_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "log_base": LOG_BASE,
            "max_normalized": self.max_normalized,
            "monotone_blowup": self.monotone_blowup,
            "per_Q": [{"Q": s.Q, "samples": s.count, "mean_N": float(s.mean_N),
                       "var_N": float(s.var_N), "phi_exact": str(s.phi_exact),
                       "phi_paper": str(s.phi_paper),
                       "mean_minus_phi_exact": float(s.mean_N - s.phi_exact),
                       "max_normalized": s.max_normalized} for s in self.per_Q],
        }


def residual_stats(records: Sequence[RunRecord], epsilon: float = 0.1) -> Stats:
    if not records:
        raise EmptyInput("no records")
    by_Q: dict[int, list[RunRecord]] = {}
    for rec in records:
        by_Q.setdefault(rec.Q, []).append(rec)
    stats = Stats(epsilon)
    for Q in sorted(by_Q):
        rows = by_Q[Q]
        Ns = [r.N for r in rows]
        mean = Fraction(sum(Ns), len(Ns))
        var = (sum((x - mean) ** 2 for x in Ns) / (len(Ns) - 1)) if len(Ns) > 1 else Fraction(0)
        norms = [normalized_residual(r.N, r.phi_exact, epsilon) for r in rows]
        norms = [v for v in norms if v is not None]
        stats.per_Q.append(QStats(Q, len(rows), mean, var, rows[0].phi_exact, rows[0].phi_paper,
                                  max(norms) if norms else None))
    return stats


RUNS_COLUMNS = ["seed", "sample", "Q", "N", "phi_exact_num", "phi_exact_den",
                "phi_paper_num", "phi_paper_den", "T_num", "T_den", "residual", "normalized"]


def _fmt_float(x: float | None) -> str:
    return "" if x is None else repr(round(x, 12))


def runs_csv(records: Sequence[RunRecord], config: dict | None = None) -> str:
    buf = io.StringIO()
    if config is not None:
        buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RUNS_COLUMNS)
    for r in records:
        w.writerow([r.seed, r.sample, r.Q, r.N,
                    r.phi_exact.numerator, r.phi_exact.denominator,
                    r.phi_paper.numerator, r.phi_paper.denominator,
                    r.T.numerator, r.T.denominator, str(r.residual), _fmt_float(r.normalized)])
    return buf.getvalue()


def summary(config: RunConfig, records: Sequence[RunRecord]) -> dict:
    stats = residual_stats(records, config.epsilon)
    out = {"config": config.as_dict(), "stats": stats.as_dict()}
    Ts = {r.Q: r.T for r in records if r.sample == 0}
    out["T_over_phi_exact"] = [{"Q": Q, "T": str(T), "ratio": float(T / s.phi_exact)}
                               for Q, T, s in zip(sorted(Ts), [Ts[q] for q in sorted(Ts)],
                                                  stats.per_Q)]
    return out
