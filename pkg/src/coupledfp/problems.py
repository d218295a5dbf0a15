"""Builtin problem catalog and problem construction from JSON-style configs.

The three builtins are desk-scale instances engineered so that every
hypothesis the solver checks (seed condition, mixed monotonicity, the
rational contraction) demonstrably holds:

* ``linear_demo``    F(x, y) = (x - y) / 4 on [-2, 2], fixed pair (0, 0).
* ``affine_demo``    F(x, y) = x/3 - y/4 + 1 on [-4, 4], fixed pair
  (12/11, 12/11).
* ``integral_demo``  a discretized Hammerstein-type operator on N nodes:
  F(x, y)_i = 1/4 + (1/(4N)) * sum_j exp(-|t_i - t_j|) (s(x_j) - s(y_j))
  with s(t) = t / (1 + |t|) and t_i = i/N, in the max metric. s is
  nondecreasing and 1-Lipschitz, which makes the operator mixed monotone
  and contractive with beta = 1/2 by construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from .errors import InputError
from .expressions import Expression, parse_expression
from .maps import ContractionParams, CoupledMap
from .spaces import METRICS, Pair, SpaceDescriptor, as_point


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """A ready-to-solve instance: space, map, seed, optional extras."""

    name: str
    space: SpaceDescriptor
    map: CoupledMap
    seed: Pair
    suggested_params: ContractionParams | None = None
    expected_fixed_pair: Pair | None = None

    def __post_init__(self):
        if not (
            self.map.contains(self.seed.first) and self.map.contains(self.seed.second)
        ):
            raise InputError(
                f"seed {self.seed!r} lies outside the domain box of {self.name!r}"
            )

    def describe(self) -> dict:
        return {
            "name": self.name,
            "dim": self.space.dim,
            "metric": self.space.metric,
            "domain_lower": self.map.lower.tolist(),
            "domain_upper": self.map.upper.tolist(),
            "seed_x0": self.seed.first.tolist(),
            "seed_y0": self.seed.second.tolist(),
            "params": None
            if self.suggested_params is None
            else {
                "alpha": self.suggested_params.alpha,
                "beta": self.suggested_params.beta,
            },
            "expected_fixed_pair": None
            if self.expected_fixed_pair is None
            else {
                "x": self.expected_fixed_pair.first.tolist(),
                "y": self.expected_fixed_pair.second.tolist(),
            },
        }


def linear_demo() -> ProblemSpec:
    space = SpaceDescriptor(dim=1, metric="euclidean")
    F = CoupledMap(
        name="linear_demo",
        dim=1,
        evaluator=lambda x, y: (x - y) / 4.0,
        lower=[-2.0],
        upper=[2.0],
    )
    return ProblemSpec(
        name="linear_demo",
        space=space,
        map=F,
        seed=Pair([-1.0], [1.0]),
        suggested_params=ContractionParams(0.1, 0.5),
        expected_fixed_pair=Pair([0.0], [0.0]),
    )


def affine_demo() -> ProblemSpec:
    space = SpaceDescriptor(dim=1, metric="euclidean")
    F = CoupledMap(
        name="affine_demo",
        dim=1,
        evaluator=lambda x, y: x / 3.0 - y / 4.0 + 1.0,
        lower=[-4.0],
        upper=[4.0],
    )
    value = float(Fraction(12, 11))
    return ProblemSpec(
        name="affine_demo",
        space=space,
        map=F,
        seed=Pair([0.0], [3.0]),
        suggested_params=ContractionParams(0.1, 2.0 / 3.0),
        expected_fixed_pair=Pair([value], [value]),
    )


def integral_demo(n_nodes: int = 16) -> ProblemSpec:
    if n_nodes < 1:
        raise InputError(f"integral_demo needs n_nodes >= 1, got {n_nodes}")
    nodes = np.arange(n_nodes) / n_nodes
    kernel = np.exp(-np.abs(nodes[:, None] - nodes[None, :]))
    scale = 1.0 / (4.0 * n_nodes)

    def squash(v: np.ndarray) -> np.ndarray:
        return v / (1.0 + np.abs(v))

    def evaluator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return 0.25 + scale * (kernel @ (squash(x) - squash(y)))

    space = SpaceDescriptor(dim=n_nodes, metric="max")
    F = CoupledMap(
        name="integral_demo",
        dim=n_nodes,
        evaluator=evaluator,
        lower=np.full(n_nodes, -2.0),
        upper=np.full(n_nodes, 2.0),
    )
    quarter = np.full(n_nodes, 0.25)
    return ProblemSpec(
        name="integral_demo",
        space=space,
        map=F,
        seed=Pair(np.zeros(n_nodes), np.ones(n_nodes)),
        suggested_params=ContractionParams(0.05, 0.5),
        expected_fixed_pair=Pair(quarter, quarter),
    )


BUILTINS: dict[str, Callable[..., ProblemSpec]] = {
    "linear_demo": linear_demo,
    "affine_demo": affine_demo,
    "integral_demo": integral_demo,
}


def get_builtin(name: str, dim: int | None = None) -> ProblemSpec:
    if name not in BUILTINS:
        raise InputError(
            f"unknown builtin {name!r}; available: {', '.join(sorted(BUILTINS))}"
        )
    if dim is not None:
        if name != "integral_demo":
            raise InputError(f"builtin {name!r} has a fixed dimension")
        return integral_demo(dim)
    return BUILTINS[name]()


_TOP_KEYS = {"builtin", "dim", "metric", "components_F", "domain_box", "seed", "params"}
_BUILTIN_KEYS = {"builtin", "dim", "seed", "params"}
_SEED_KEYS = {"x0", "y0"}
_PARAM_KEYS = {"alpha", "beta"}


def _reject_unknown(doc: Mapping, allowed: set[str], where: str) -> None:
    unknown = set(doc) - allowed
    if unknown:
        raise InputError(f"unknown {where} fields: {sorted(unknown)}")


def _parse_params(doc) -> ContractionParams:
    if not isinstance(doc, Mapping):
        raise InputError("params must be an object with alpha and beta")
    _reject_unknown(doc, _PARAM_KEYS, "params")
    missing = _PARAM_KEYS - set(doc)
    if missing:
        raise InputError(f"params is missing {sorted(missing)}")
    return ContractionParams(float(doc["alpha"]), float(doc["beta"]))


def _parse_seed(doc, dim: int) -> Pair:
    if not isinstance(doc, Mapping):
        raise InputError("seed must be an object with x0 and y0")
    _reject_unknown(doc, _SEED_KEYS, "seed")
    missing = _SEED_KEYS - set(doc)
    if missing:
        raise InputError(f"seed is missing {sorted(missing)}")
    return Pair(as_point(doc["x0"], dim=dim), as_point(doc["y0"], dim=dim))


def _parse_box(doc, dim: int) -> tuple[np.ndarray, np.ndarray]:
    box = np.asarray(doc, dtype=float)
    if box.shape == (2,):
        lower = np.full(dim, box[0])
        upper = np.full(dim, box[1])
    elif box.shape == (dim, 2):
        lower, upper = box[:, 0].copy(), box[:, 1].copy()
    else:
        raise InputError(
            "domain_box must be [lo, hi] or one [lo, hi] pair per coordinate"
        )
    if np.any(lower > upper):
        raise InputError("domain_box has lower > upper")
    return lower, upper

# Custom maps default to this box per coordinate when none is given.
DEFAULT_BOX = (-10.0, 10.0)


def build_problem(config: Mapping) -> ProblemSpec:
    """Validate a config document and construct the problem it describes.

    Either ``builtin`` names a catalog entry (with optional seed/params
    overrides, and dim for integral_demo), or ``components_F`` +
    ``dim`` + ``seed`` define a custom expression map. Unknown fields are
    rejected outright.
    """
    if not isinstance(config, Mapping):
        raise InputError("problem config must be a JSON object")
    _reject_unknown(config, _TOP_KEYS, "config")

    if "builtin" in config:
        _reject_unknown(config, _BUILTIN_KEYS, "builtin config")
        spec = get_builtin(str(config["builtin"]), config.get("dim"))
        seed = spec.seed if "seed" not in config else _parse_seed(config["seed"], spec.space.dim)
        params = (
            spec.suggested_params
            if "params" not in config
            else _parse_params(config["params"])
        )
        return ProblemSpec(
            name=spec.name,
            space=spec.space,
            map=spec.map,
            seed=seed,
            suggested_params=params,
            expected_fixed_pair=spec.expected_fixed_pair,
        )

    if "components_F" not in config:
        raise InputError("config needs either 'builtin' or 'components_F'")
    if "dim" not in config:
        raise InputError("custom maps need an explicit 'dim'")
    dim = config["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise InputError(f"dim must be a positive integer, got {dim!r}")
    components = config["components_F"]
    if not isinstance(components, (list, tuple)) or len(components) != dim:
        raise InputError(f"components_F must list exactly {dim} expressions")
    exprs: list[Expression] = [parse_expression(str(c), dim) for c in components]

    metric = config.get("metric", "euclidean")
    if metric not in METRICS:
        raise InputError(f"unknown metric {metric!r}; choose from {METRICS}")
    lower, upper = _parse_box(config.get("domain_box", DEFAULT_BOX), dim)
    if "seed" not in config:
        raise InputError("custom maps need a 'seed' with x0 and y0")
    seed = _parse_seed(config["seed"], dim)

    def evaluator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.array([e.eval(x, y) for e in exprs])

    name = "custom[" + "; ".join(str(e) for e in exprs) + "]"
    F = CoupledMap(name=name, dim=dim, evaluator=evaluator, lower=lower, upper=upper)
    params = _parse_params(config["params"]) if "params" in config else None
    return ProblemSpec(
        name=name,
        space=SpaceDescriptor(dim=dim, metric=metric),
        map=F,
        seed=seed,
        suggested_params=params,
    )


def load_problem(path) -> ProblemSpec:
    """Read a JSON config file and build the problem it describes."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read problem config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path!r}: {exc}") from exc
    return build_problem(doc)
