"""Smoke tests for the _qpricer extension module."""

import math

try:
    import _qpricer as q
except ImportError:  # installed-package layout
    from qpricer import _qpricer as q


def close(x, y, tol):
    return abs(x - y) <= tol


def main():
    queue = q.QueueParams(lambda_p=6.0, mu=12.0, sigma=0.2)
    market = q.MarketParams(a=120.0, b=0.1, c=0.3)

    assert close(q.compute_psi(0.2, 12.0), 3.38, 1e-12)
    assert close(q.w_fcfs(queue, 0.0), 0.28167, 1e-4)

    w = q.mean_wait(queue, 5.6655, 1.0)
    assert close(w.w_p, 9.8231, 1e-3) and close(w.w_s, 9.8231, 1e-3)
    w_inf = q.mean_wait(queue, 3.0, float("inf"))
    assert w_inf.w_s < w_inf.w_p

    report = q.classify_region(queue, market, 19.0)
    assert report.region == q.Region.I_PLUS
    assert math.isinf(report.j_l)

    op = q.optimize(queue, market, 8.0)
    assert op.region == q.Region.I
    assert close(op.lambda_s, 5.6655, 1e-3)
    assert close(op.theta, 1108.1, 0.5)
    assert close(op.s_s, 11.754, 1e-3)
    assert close(op.revenue, 6277.94, 0.5)
    assert op.theta_valid
    assert close(q.mean_wait(queue, op.lambda_s, op.beta).w_p, 8.0, 1e-9)

    assert q.optimize(queue, market, 0.25).region == q.Region.INFEASIBLE
    assert close(q.sensitivity(queue, market, 8.0), 18.0, 1e-9)

    theta, s_s, beta = q.best_response_provider(queue, market, 8.0, op.lambda_s)
    assert close(theta, op.theta, 1e-6) and close(s_s, op.s_s, 1e-6)
    assert close(beta, op.beta, 1e-6)
    assert close(q.best_response_user(market, theta, s_s), op.lambda_s, 1e-9)

    ne = q.run_dynamics(queue, market, 8.0, 3.0)
    assert ne.is_equilibrium and ne.revenue < op.revenue
    best = max(r.revenue for r in q.ne_continuum(queue, market, 8.0, 25))
    assert best <= op.revenue + 1e-6

    cfg = q.SimConfig(seed=7, replications=4, departures_per_replication=20000)
    sim = q.simulate_ddp(queue, 3.0, 1.0, cfg)
    wf = q.w_fcfs(queue, 3.0)
    assert close(sim.w_p_est, wf, max(4.0 * sim.w_p_ci_half, 0.01))
    again = q.simulate_ddp(queue, 3.0, 1.0, cfg)
    assert sim.w_p_est == again.w_p_est and sim.w_s_est == again.w_s_est

    try:
        q.w_fcfs(queue, 7.0)
    except ValueError:
        pass
    else:
        raise AssertionError("instability must raise")

    print("python smoke: OK")


if __name__ == "__main__":
    main()
