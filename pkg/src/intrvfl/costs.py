"""Abstract per-inference cost model: exact operation counts, bit-width
annotations, and network sizing under an energy-like budget.

Costs are unitless configuration, not measurements.  The default profile
encodes typical relative energies of small-integer versus double-precision
arithmetic; under it the integer network's total lands an order of
magnitude below the conventional one for a mid-sized network, which is the
directional claim this model exists to express.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError

def _value_bits(max_abs: int) -> int:
    """Bits to distinguish the 2V+1 integers in [-V, V]."""
    if max_abs < 0:
        raise ValueError("bound must be non-negative")
    return max(1, math.ceil(math.log2(2 * max_abs + 1)))


@dataclass(frozen=True)
class CostProfile:
    """Abstract energy units per primitive operation.

    ``quantize`` covers one feature quantization (a multiply plus a round);
    ``int_compare`` is the clip comparison.  All values must be >= 0.
    """

    int_add: float = 1.0
    int_compare: float = 1.0
    sign_flip: float = 0.5
    int_mac: float = 2.0
    real_add: float = 8.0
    real_mac: float = 15.0
    sigmoid_eval: float = 60.0
    quantize: float = 15.0

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ConfigError(f"cost profile entry {f.name} must be >= 0")

    def cost_of(self, counts: dict[str, int]) -> float:
        return float(sum(count * getattr(self, op) for op, count in counts.items()))

    def to_json_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_file(cls, path: str | Path) -> "CostProfile":
        try:
            raw = json.loads(Path(path).read_text())
            return cls(**raw)
        except (OSError, json.JSONDecodeError, TypeError) as exc:
            raise ConfigError(f"bad cost profile {path}: {exc}") from exc


DEFAULT_PROFILE = CostProfile()


@dataclass(frozen=True)
class InferenceCost:
    """Exact op counts per stage for one inference, plus bit-width notes.

    Counts are pure arithmetic in the model dimensions; there is no
    profiling noise and repeated calls agree exactly.
    """

    family: str
    stages: dict[str, dict[str, int]]
    stage_bits: dict[str, int]
    total: float

    def stage_total(self, profile: CostProfile, stage: str) -> float:
        return profile.cost_of(self.stages[stage])

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "stages": {k: dict(v) for k, v in self.stages.items()},
            "stage_bits": dict(self.stage_bits),
            "total": self.total,
        }


def count_ops(
    family: str,
    n_features: int,
    n_hidden: int,
    n_classes: int,
    kappa: int | None = None,
    boundary: int | None = None,
    profile: CostProfile = DEFAULT_PROFILE,
) -> InferenceCost:
    """Operation counts for one forward pass.

    Integer family: K quantizations, N*K sign flips, N*(K-1) integer adds,
    N clips, then L*N integer MACs.  Conventional family: N*K real MACs,
    N bias adds, N sigmoid evaluations, then L*N real MACs.  Bit widths for
    the integer family follow the value ranges of each stage.
    """
    if n_features < 1 or n_hidden < 1 or n_classes < 1:
        raise ConfigError("model dimensions must be >= 1")
    if family == "intrvfl":
        if kappa is None or kappa < 1:
            raise ConfigError("intrvfl cost needs kappa >= 1")
        b = boundary if boundary is not None else 1
        if b < 1:
            raise ConfigError("boundary must be >= 1")
        stages = {
            "encoding": {"quantize": n_features},
            "hidden": {
                "sign_flip": n_hidden * n_features,
                "int_add": n_hidden * (n_features - 1),
                "int_compare": n_hidden,
            },
            "readout": {"int_mac": n_classes * n_hidden},
        }
        stage_bits = {
            "hidden_accumulator": _value_bits(n_features),
            "neuron_storage": _value_bits(kappa),
            "readout_accumulator": _value_bits(n_hidden * kappa * b),
        }
    elif family == "rvfl":
        stages = {
            "encoding": {},
            "hidden": {
                "real_mac": n_hidden * n_features,
                "real_add": n_hidden,
                "sigmoid_eval": n_hidden,
            },
            "readout": {"real_mac": n_classes * n_hidden},
        }
        stage_bits = {"hidden_accumulator": 64, "neuron_storage": 64,
                      "readout_accumulator": 64}
    else:
        raise ConfigError(f"unknown family {family!r}")
    total = sum(profile.cost_of(ops) for ops in stages.values())
    return InferenceCost(family=family, stages=stages, stage_bits=stage_bits, total=total)


def max_hidden_under_budget(
    family: str,
    n_features: int,
    n_classes: int,
    kappa: int | None,
    profile: CostProfile,
    budget: float,
) -> int | None:
    """Largest hidden-layer size whose per-inference total fits the budget.

    The total is monotone in N, so binary search applies.  Returns None
    when even N=1 exceeds the budget ("budget infeasible"); a profile under
    which growing N is free is a configuration error.
    """
    def total(n_hidden: int) -> float:
        return count_ops(family, n_features, n_hidden, n_classes,
                         kappa=kappa, profile=profile).total

    if total(2) <= total(1):
        raise ConfigError("cost profile makes hidden neurons free; no finite answer")
    if total(1) > budget:
        return None
    lo, hi = 1, 2
    while total(hi) <= budget:
        lo, hi = hi, hi * 2
    # invariant: total(lo) <= budget < total(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if total(mid) <= budget:
            lo = mid
        else:
            hi = mid
    return lo
