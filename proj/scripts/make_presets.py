"""Writes the bundled desk-scale scenario presets to data/scenarios/.

Initial formations are generated here with a fixed seed so the JSON files
are reproducible; the C++ loader only ever reads the JSON.
"""
import json
import math
import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "scenarios"


def ball(n, radius, center, seed, d_min):
    rng = random.Random(seed)
    pts = []
    while len(pts) < n:
        p = [rng.uniform(-1, 1) for _ in range(3)]
        if sum(c * c for c in p) > 1:
            continue
        p = [center[i] + radius * p[i] for i in range(3)]
        if all(math.dist(p, q) >= d_min for q in pts):
            pts.append(p)
    return [{"position": [round(c, 6) for c in p], "velocity": [0.0, 0.0, 0.0]} for p in pts]


def write(name, cfg):
    cfg["n_attackers"] = len(cfg["initial_attackers"])
    cfg["n_defenders"] = len(cfg["initial_defenders"])
    (OUT / name).write_text(json.dumps(cfg, indent=2) + "\n")


BASE = dict(hvu_position=[0.0, 0.0, 0.0], d0=1.5, d1=4.0, k_rep=2.0, k_att=0.5,
            s0=4.0, k_dref=5.0, leader_gain=1.0, damping=0.5,
            survival_threshold=0.5, bernstein_order=8, rng_seed=1)


def ghost_herding(**over):
    cfg = dict(BASE)
    cfg.update(lambda_a=1.0, lambda_d=1.0, sigma_a=9.0, sigma_d=4.0,
               dt=0.1, n_steps=250, u_max=1.0, d_min=1.0)
    cfg.update(over)
    cfg["initial_attackers"] = ball(20, 3.0, [30.0, 0.0, 0.0], 11, 1.0)
    cfg["initial_defenders"] = ball(4, 2.0, [3.0, 0.0, 0.0], 12, 1.0)
    return cfg


def tradeoff(att_radius=6.0, **over):
    # Tight kernels and a spread-out swarm so more defenders are needed.
    cfg = dict(BASE)
    cfg.update(lambda_a=3.0, lambda_d=1.0, sigma_a=4.0, sigma_d=4.0,
               dt=0.1, n_steps=250, u_max=1.0, d_min=1.0)
    cfg.update(over)
    cfg["initial_attackers"] = ball(10, att_radius, [30.0, 0.0, 0.0], 21, 1.0)
    cfg["initial_defenders"] = ball(1, 3.0, [0.0, 0.0, 0.0], 22, 1.0)
    return cfg


def agent(x, y, z, vx=0.0, vy=0.0, vz=0.0):
    return {"position": [x, y, z], "velocity": [vx, vy, vz]}


def two_vs_one():
    # Short hand-checkable engagement: two attackers, one stationary defender.
    cfg = dict(BASE)
    cfg.update(lambda_a=1.0, lambda_d=1.5, sigma_a=6.0, sigma_d=8.0,
               dt=0.1, n_steps=10, u_max=1.0, d_min=1.0, bernstein_order=4)
    cfg["initial_attackers"] = [agent(4.0, 0.5, 0.0, -0.5, 0.0, 0.0), agent(4.5, -1.0, 0.3)]
    cfg["initial_defenders"] = [agent(2.0, 0.0, 0.0)]
    return cfg


def interposition():
    # One attacker driving at the HVU; the defender starts off the approach axis.
    cfg = dict(BASE)
    cfg.update(lambda_a=0.3, lambda_d=2.0, sigma_a=6.0, sigma_d=6.0,
               dt=0.1, n_steps=150, u_max=2.0, d_min=1.0)
    cfg["initial_attackers"] = [agent(20.0, 0.0, 0.0)]
    cfg["initial_defenders"] = [agent(-2.0, 6.0, 0.0)]
    return cfg


def frozen():
    # No forces act (K = 0, defender outside s0), so positions never change
    # and the removal hazards are constant.
    cfg = dict(BASE)
    cfg.update(leader_gain=0.0, s0=1.0, lambda_a=3.0, lambda_d=2.0, sigma_a=6.0, sigma_d=6.0,
               dt=0.1, n_steps=3, u_max=1.0, d_min=1.0, bernstein_order=2)
    cfg["initial_attackers"] = [agent(2.0, 0.0, 0.0)]
    cfg["initial_defenders"] = [agent(0.0, 2.0, 0.0)]
    return cfg


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    write("desk_ghost_herding.json", ghost_herding())
    write("desk_tradeoff.json", tradeoff())
    write("desk_2v1.json", two_vs_one())
    write("desk_1v1_interposition.json", interposition())
    write("desk_1v1_frozen.json", frozen())
