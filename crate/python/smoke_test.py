"""Quick end-to-end check of the wslm Python extension."""

import json
import math
import os
import tempfile

import wslm


def main():
    cfg = wslm.SystemConfig(3, 9, 9, 6, 3, 1.0)
    feas = cfg.feasibility()
    assert feas["proper"] and feas["n_eq"] == 81 and feas["n_v"] == 117, feas

    channels = wslm.ChannelSet.generate(cfg, 7)
    h = channels.h(0, 1)
    assert len(h) == 9 and len(h[0]) == 9 and isinstance(h[0][0], complex)
    assert len(channels.h(3, 0)) == 6  # eavesdropper rows

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "h.json")
        channels.save(path)
        back = wslm.ChannelSet.load(path)
        assert back.h(2, 2) == channels.h(2, 2)

    sol = wslm.solve(channels, 11, kappa_max=100)
    traj = sol.cost_trajectory
    assert all(b <= a + 1e-12 for a, b in zip(traj, traj[1:]))
    assert sol.final_cost == traj[-1]

    rates = sol.rates(channels)
    assert math.isclose(rates["ssr"], sum(rates["secrecy_rates"]))
    chk = sol.check_conditions(channels)
    assert len(chk["rank_ok"]) == 3

    base = wslm.solve(channels, 11, variant="conventional", kappa_max=100)
    assert base.variant == "conventional"

    try:
        wslm.SystemConfig(3, 2, 9, 6, 3, 1.0)
    except ValueError as e:
        assert "`d`" in str(e)
    else:
        raise AssertionError("invalid config accepted")

    spec = {
        "base_config": {"K": 3, "Nt": 4, "Nr": 4, "Nre": 3, "d": 1, "Pt": 10.0},
        "sweep": {"snr": {"values_db": [0, 10]}},
        "trials": 4,
    }
    rows = wslm.sweep(json.dumps(spec))
    assert len(rows) == 4 and {r["variant"] for r in rows} == {"wslm", "conventional"}

    print(f"ok: {sol.iterations} iterations, final cost {sol.final_cost:.3e}, ssr {rates['ssr']:.3f}")


if __name__ == "__main__":
    main()
