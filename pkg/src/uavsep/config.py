"""JSON scenario files.

Field names carry their units (``v_m_mps``, ``tau_dm_s``); ``r_s_m`` may be
the string ``"auto"``.  :func:`config_to_dict` and :func:`config_from_dict`
round-trip exactly.
"""

import json
from pathlib import Path

from .channel import UncertaintyBudget
from .core import ObstacleParams, ParameterError, VehicleParams
from .sim.scenario import ConfigError, ObstacleSpec, ScenarioConfig

_BUDGET_FIELDS = {
    "b_m": "b",
    "v_b_mps": "v_b",
    "b_o_m": "b_o",
    "v_bo_mps": "v_bo",
    "tau_dm_s": "tau_dm",
    "theta_m": "theta_m",
    "T_s_s": "T_s",
}


def _vec(v):
    return None if v is None else [float(x) for x in v]


def config_to_dict(config: ScenarioConfig) -> dict:
    b = config.budget
    return {
        "name": config.name,
        "duration_s": config.duration,
        "dt_s": config.dt,
        "seed": config.seed,
        "r_s_m": "auto" if config.r_s is None else config.r_s,
        "margin_m": config.margin,
        "goal_gain_per_s": config.goal_gain,
        "band_m": config.band,
        "channel_model": config.channel_model,
        "uav": {
            "r_m_m": config.uav.r_m,
            "l_per_s": config.uav.l,
            "v_m_mps": config.uav.v_m,
            "p0_m": _vec(config.p0),
            "v0_mps": _vec(config.v0),
            "goal_m": _vec(config.goal),
        },
        "budget": {key: getattr(b, attr) for key, attr in _BUDGET_FIELDS.items()},
        "obstacles": [
            {
                "r_o_m": ob.params.r_o,
                "v_o_mps": ob.params.v_o,
                "p0_m": _vec(ob.p0),
                "v0_mps": _vec(ob.v0),
                "behavior": ob.behavior,
                "tau_d_s": ob.tau_d,
                "theta": ob.theta,
                "goal_m": _vec(ob.goal),
                "chase_eps_mps": ob.chase_eps,
            }
            for ob in config.obstacles
        ],
    }


class _Reader:
    """Pulls typed fields out of a JSON tree, collecting every problem."""

    def __init__(self):
        self.problems = []

    def get(self, tree, key, where, kind="number", default=..., allow_none=False):
        if not isinstance(tree, dict) or key not in tree:
            if default is not ...:
                return default
            self.problems.append(f"{where}{key}: missing")
            return None
        value = tree[key]
        if value is None and allow_none:
            return None
        ok = {
            "number": isinstance(value, (int, float)) and not isinstance(value, bool),
            "int": isinstance(value, int) and not isinstance(value, bool),
            "str": isinstance(value, str),
            "vec": isinstance(value, list)
            and len(value) == 3
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value),
        }[kind]
        if not ok:
            self.problems.append(f"{where}{key}: expected {kind}, got {value!r}")
            return None
        return float(value) if kind == "number" else value

    def build(self, where, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ParameterError, TypeError) as exc:
            self.problems.append(f"{where}{exc}")
            return None


def config_from_dict(tree) -> ScenarioConfig:
    """Build and validate a scenario; raises :class:`ConfigError` listing all problems."""
    if not isinstance(tree, dict):
        raise ConfigError(["top level must be an object"])
    rd = _Reader()
    uav_t = tree.get("uav")
    bud_t = tree.get("budget")
    obs_t = tree.get("obstacles")
    if not isinstance(uav_t, dict):
        rd.problems.append("uav: missing or not an object")
        uav_t = {}
    if not isinstance(bud_t, dict):
        rd.problems.append("budget: missing or not an object")
        bud_t = {}
    if not isinstance(obs_t, list) or not obs_t:
        rd.problems.append("obstacles: must be a non-empty list")
        obs_t = []

    uav_vals = [rd.get(uav_t, k, "uav.") for k in ("r_m_m", "l_per_s", "v_m_mps")]
    p0 = rd.get(uav_t, "p0_m", "uav.", "vec")
    v0 = rd.get(uav_t, "v0_mps", "uav.", "vec", default=[0.0, 0.0, 0.0])
    goal = rd.get(uav_t, "goal_m", "uav.", "vec", default=None, allow_none=True)
    uav = rd.build("uav: ", VehicleParams, *uav_vals) if None not in uav_vals else None

    b_vals = {attr: rd.get(bud_t, key, "budget.", default=0.0 if key != "T_s_s" else 0.01)
              for key, attr in _BUDGET_FIELDS.items()}
    budget = rd.build("budget: ", UncertaintyBudget, **b_vals) if None not in b_vals.values() else None

    obstacles = []
    for k, o in enumerate(obs_t):
        w = f"obstacles[{k}]."
        r_o = rd.get(o, "r_o_m", w)
        v_o = rd.get(o, "v_o_mps", w)
        params = rd.build(w, ObstacleParams, r_o, v_o) if None not in (r_o, v_o) else None
        spec = dict(
            p0=rd.get(o, "p0_m", w, "vec"),
            v0=rd.get(o, "v0_mps", w, "vec", default=[0.0, 0.0, 0.0]),
            behavior=rd.get(o, "behavior", w, "str", default="constant"),
            tau_d=rd.get(o, "tau_d_s", w, default=None, allow_none=True),
            theta=rd.get(o, "theta", w, default=None, allow_none=True),
            goal=rd.get(o, "goal_m", w, "vec", default=None, allow_none=True),
            chase_eps=rd.get(o, "chase_eps_mps", w, default=1.0),
        )
        if params is not None and spec["p0"] is not None and None not in (spec["v0"], spec["behavior"]):
            obstacles.append(ObstacleSpec(params, **spec))

    r_s = tree.get("r_s_m", "auto")
    if r_s == "auto":
        r_s = None
    elif not isinstance(r_s, (int, float)) or isinstance(r_s, bool):
        rd.problems.append(f"r_s_m: expected number or 'auto', got {r_s!r}")
        r_s = None

    top = dict(
        name=rd.get(tree, "name", "", "str", default="custom"),
        duration=rd.get(tree, "duration_s", ""),
        dt=rd.get(tree, "dt_s", "", default=0.01),
        seed=rd.get(tree, "seed", "", "int", default=0),
        margin=rd.get(tree, "margin_m", "", default=1.0),
        goal_gain=rd.get(tree, "goal_gain_per_s", "", default=1.0),
        band=rd.get(tree, "band_m", "", default=0.1),
        channel_model=rd.get(tree, "channel_model", "", "str", default="expectation"),
    )
    if isinstance(top["seed"], int) and top["seed"] < 0:
        rd.problems.append("seed: must be >= 0")
    if rd.problems or uav is None or budget is None or p0 is None or len(obstacles) != len(obs_t):
        raise ConfigError(rd.problems or ["incomplete scenario"])
    config = ScenarioConfig(
        uav=uav, p0=p0, v0=v0, goal=goal, obstacles=obstacles, budget=budget, r_s=None if r_s is None else float(r_s),
        **top,
    )
    return config.validate()


def load_config(path) -> ScenarioConfig:
    try:
        tree = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError([f"{path}: not valid JSON ({exc})"]) from None
    return config_from_dict(tree)


def dump_config(config: ScenarioConfig, path) -> None:
    Path(path).write_text(json.dumps(config_to_dict(config), indent=2) + "\n")
