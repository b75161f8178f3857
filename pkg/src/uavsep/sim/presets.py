"""Built-in scenarios.

Vehicle, obstacle and link parameters are the published values; mission
goals, obstacle headings and controller margins are not published and are
chosen here (waypoints sit beyond the obstacles along the approach axis).
"""

from ..channel import UncertaintyBudget
from ..core import ObstacleParams, VehicleParams
from .scenario import ObstacleSpec, ScenarioConfig

T_S = 0.01

BUDGETS = {
    "A": UncertaintyBudget(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, T_S),
    "B": UncertaintyBudget(b=3.0, v_b=3.0, b_o=1.0, v_bo=1.0, tau_dm=1.0, theta_m=0.1, T_s=T_S),
    "C": UncertaintyBudget(b=5.0, v_b=6.0, b_o=2.0, v_bo=5.0, tau_dm=2.0, theta_m=0.2, T_s=T_S),
    "exp1": UncertaintyBudget(b=0.10, v_b=0.08, b_o=0.03, v_bo=0.01, tau_dm=1.0, theta_m=0.1, T_s=T_S),
    "exp2": UncertaintyBudget(b=0.2, v_b=0.08, b_o=0.1, v_bo=0.01, tau_dm=2.0, theta_m=0.3, T_s=T_S),
    "exp3": UncertaintyBudget(b=0.012, v_b=0.012, b_o=0.01, v_bo=0.01, tau_dm=0.1, theta_m=0.01, T_s=T_S),
}

# published radii (rounded to 0.01 m)
RADII = {
    "sim1-caseA": 5.30,
    "sim1-caseB": 14.30,
    "sim1-caseC": 22.31,
    "sim1-caseC-adversarial": 22.31,
    "sim2-caseB": 14.30,
    "sim2-caseC": 22.31,
    "sim3-coop": 14.14,
    "exp1": 0.47,
    "exp2": 0.71,
    "exp3": 0.23,
}

CHASE_EPS = 2.0


def _sim1(name, case, behavior="constant"):
    return ScenarioConfig(
        name=name,
        uav=VehicleParams(r_m=5.0, l=5.0, v_m=10.0),
        p0=[0.0, 0.0, 100.0],
        goal=[80.0, 0.0, 100.0],
        obstacles=[
            ObstacleSpec(
                ObstacleParams(r_o=10.0, v_o=5.0),
                p0=[40.0, 0.0, 100.0],
                v0=[-5.0, 0.0, 0.0],
                behavior=behavior,
                chase_eps=CHASE_EPS,
            )
        ],
        budget=BUDGETS[case],
        duration=20.0,
        r_s=RADII[name],
        margin=0.5,
    )


def _sim2(name, case):
    obstacles = [
        ObstacleSpec(ObstacleParams(r_o=10.0, v_o=i + 2.0), p0=[x, -40.0, 100.0], v0=[0.0, i + 2.0, 0.0])
        for i, x in zip((1, 2, 3), (-40.0, 0.0, 40.0))
    ]
    return ScenarioConfig(
        name=name,
        uav=VehicleParams(r_m=5.0, l=5.0, v_m=10.0),
        p0=[0.0, 40.0, 100.0],
        goal=[0.0, -120.0, 100.0],
        obstacles=obstacles,
        budget=BUDGETS[case],
        duration=20.0,
        r_s=RADII[name],
        margin=0.5,
    )


def _sim3():
    starts = ([40.0, 40.0, 100.0], [40.0, -40.0, 100.0], [-40.0, -40.0, 100.0])
    goals = ([-120.0, 40.0, 100.0], [-120.0, 120.0, 100.0], [-40.0, 120.0, 100.0])
    obstacles = [
        ObstacleSpec(
            ObstacleParams(r_o=10.0, v_o=i + 2.0),
            p0=p0,
            v0=[0.0, 0.0, 0.0],
            behavior="cooperative",
            goal=goal,
        )
        for i, p0, goal in zip((1, 2, 3), starts, goals)
    ]
    return ScenarioConfig(
        name="sim3-coop",
        uav=VehicleParams(r_m=5.0, l=5.0, v_m=5.0),
        p0=[-40.0, 40.0, 100.0],
        goal=[120.0, -120.0, 100.0],
        obstacles=obstacles,
        budget=BUDGETS["B"],
        duration=40.0,
        r_s=RADII["sim3-coop"],
        # wide blend band: the delayed link hides the obstacles' own avoidance for tau_dm
        margin=2.0,
    )


def _exp1():
    return ScenarioConfig(
        name="exp1",
        uav=VehicleParams(r_m=0.2, l=2.0, v_m=0.1),
        p0=[1.5, 0.0, 1.0],
        goal=[-1.9, 0.0, 1.0],
        obstacles=[ObstacleSpec(ObstacleParams(r_o=0.2, v_o=0.0), p0=[-0.2, 0.0, 1.0], v0=[0.0, 0.0, 0.0])],
        budget=BUDGETS["exp1"],
        duration=80.0,
        r_s=RADII["exp1"],
        margin=0.05,
        band=0.005,
    )


def _exp2():
    return ScenarioConfig(
        name="exp2",
        uav=VehicleParams(r_m=0.2, l=2.0, v_m=0.1),
        p0=[1.5, 0.0, 1.0],
        goal=[1.5, 0.0, 1.0],
        obstacles=[
            ObstacleSpec(
                ObstacleParams(r_o=0.2, v_o=0.1),
                p0=[-1.5, 0.0, 1.0],
                v0=[0.0, 0.0, 0.0],
                behavior="cooperative",
                goal=[3.0, 0.0, 1.0],
            )
        ],
        budget=BUDGETS["exp2"],
        duration=80.0,
        r_s=RADII["exp2"],
        margin=0.2,
        band=0.005,
    )


def _exp3():
    starts = ([1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [-1.0, -1.0, 1.0])
    goals = ([-3.0, 1.0, 1.0], [-3.0, 3.0, 1.0], [-1.0, 3.0, 1.0])
    obstacles = [
        ObstacleSpec(ObstacleParams(r_o=0.23, v_o=0.1), p0=p0, v0=[0.0, 0.0, 0.0], behavior="cooperative", goal=g)
        for p0, g in zip(starts, goals)
    ]
    return ScenarioConfig(
        name="exp3",
        uav=VehicleParams(r_m=0.2, l=2.0, v_m=0.1),
        p0=[-1.0, 1.0, 1.0],
        goal=[3.0, -3.0, 1.0],
        obstacles=obstacles,
        budget=BUDGETS["exp3"],
        duration=60.0,
        r_s=RADII["exp3"],
        margin=0.1,
        band=0.005,
    )


_FACTORIES = {
    "sim1-caseA": lambda: _sim1("sim1-caseA", "A"),
    "sim1-caseB": lambda: _sim1("sim1-caseB", "B"),
    "sim1-caseC": lambda: _sim1("sim1-caseC", "C"),
    "sim1-caseC-adversarial": lambda: _sim1("sim1-caseC-adversarial", "C", behavior="chasing"),
    "sim2-caseB": lambda: _sim2("sim2-caseB", "B"),
    "sim2-caseC": lambda: _sim2("sim2-caseC", "C"),
    "sim3-coop": _sim3,
    "exp1": _exp1,
    "exp2": _exp2,
    "exp3": _exp3,
}

PRESET_NAMES = tuple(_FACTORIES)


def preset(name: str) -> ScenarioConfig:
    """Fresh config for preset ``name``."""
    try:
        return _FACTORIES[name]()
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}") from None
