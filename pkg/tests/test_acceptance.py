"""Acceptance criteria, one printed PASS/FAIL line each.

Reference numbers are the published ones. Parts that need a fixture which is
not committed count as failures: the criterion is not demonstrated without it.
Run alone with ``pytest tests/test_acceptance.py -v``; the LSTM criterion is
marked ``slow`` (about 17 minutes on one core).
"""

import time

import numpy as np
import pytest

from regimecast.data import chrono_split, load_fixture, make_lagged
from regimecast.eval import SweepSpec, derive_seed, mape, rrmse, run_full_series, run_regimes
from regimecast.models import TrainConfig, fit_model
from regimecast.models.lstm import LstmModel
from regimecast.models.mlp import MlpModel
from regimecast.models.ols import ols_fit
from regimecast.regimes import RegimeConfig, regime_stats, segment
from regimecast.stats import acf, adf_test, decompose, describe, first_difference

from conftest import DATA
from test_networks import numeric_grad, rel_err
from test_regimes import brute_force_windows

SERIES = ("BTC", "MSFT", "INTC", "NKSH")

TABLE1 = {
    "BTC": (3622.5, 4083.2, 2913.9),
    "MSFT": (26.2, 3.9, 26.3),
    "INTC": (19.9, 3.6, 19.9),
    "NKSH": (24.3, 3.9, 24.5),
}

TABLE2 = {
    "BTC": {
        0: (419.0, 39.5, 420.9),
        120: (549.9, 97.2, 548.6),
        240: (705.6, 120.9, 691.3),
        360: (1106.5, 356.1, 1046.9),
        480: (2483.9, 1116.4, 2415.4),
        600: (7384.1, 4719.8, 6829.7),
        720: (10278.8, 3002.7, 9904.6),
    },
    "MSFT": {
        0: (30.7, 2.8, 30.5),
        120: (26.1, 3.2, 26.4),
        240: (20.6, 3.9, 20.4),
        360: (22.8, 3.8, 22.8),
        480: (28.2, 2.3, 28.4),
        600: (26.8, 2.2, 26.7),
        720: (26.1, 1.3, 26.1),
        840: (26.0, 1.2, 26.0),
    },
    "INTC": {
        0: (23.5, 2.4, 23.5),
        120: (20.0, 3.6, 20.3),
        240: (15.4, 2.3, 15.1),
        360: (17.3, 2.3, 17.4),
        480: (20.6, 1.4, 20.4),
    },
    "NKSH": {
        0: (18.5, 0.9, 18.5),
        120: (22.2, 3.0, 22.2),
        240: (26.5, 1.4, 26.5),
        360: (25.9, 1.9, 26.0),
        480: (26.5, 2.5, 26.3),
    },
}

REGIME_COUNTS = {"BTC": 7, "MSFT": 8, "INTC": 5, "NKSH": 5}
ADF = {"BTC": (-1.61, 0.47), "MSFT": (-1.98, 0.29), "INTC": (-1.98, 0.29), "NKSH": (-2.10, 0.25)}
FULL_LR = {"BTC": (0.030, 0.046), "MSFT": (0.010, 0.015), "INTC": (0.010, 0.017)}

REL_1PCT = 0.01
ADF_STAT_TOL = 0.15
ADF_P_TOL = 0.08
LR_TOL = 0.005
REGIME_LR_MAX = 0.011
SPOT = {240: 0.00835, 360: 0.010}
SPOT_TOL = 0.003
LSTM_FULL, LSTM_FULL_TOL = 0.036, 0.006
LSTM_REGIME_MAX = 0.010
LSTM_BUDGET = 30 * 60

LINES = []


class Criterion:
    """Collects named sub-checks and reports them as one line."""

    def __init__(self, number, title):
        self.number, self.title = number, title
        self.parts = []
        self.t0 = time.perf_counter()

    def check(self, label, ok, detail=""):
        self.parts.append((label, bool(ok), detail))

    def missing(self, label, name):
        self.parts.append((label, False, f"{name}.csv not committed"))

    def close(self, capsys, extra=""):
        elapsed = time.perf_counter() - self.t0
        failed = [p for p in self.parts if not p[1]]
        status = "FAIL" if failed or not self.parts else "PASS"
        line = f"{status} criterion {self.number} {self.title}: {len(self.parts) - len(failed)}/{len(self.parts)} checks ({elapsed:.1f}s){extra}"
        LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
            for label, ok, detail in self.parts:
                if not ok:
                    print(f"    - {label}: {detail}")
        assert not failed, "; ".join(f"{l}: {d}" for l, _, d in failed)
        return elapsed


def fixture(name):
    return load_fixture(name) if (DATA / f"{name}.csv").is_file() else None


def within_rel(got, want, tol=REL_1PCT):
    return abs(got - want) <= tol * abs(want)


def test_criterion_1_descriptive_statistics(capsys):
    c = Criterion(1, "descriptive statistics within 1%")
    for name in SERIES:
        s = fixture(name)
        if s is None:
            c.missing(name, name)
            continue
        st = describe(s.close, 0.1)
        for field, got, want in zip(("mu", "sigma", "mu_trimmed"), (st.mu, st.sigma, st.mu_trimmed), TABLE1[name]):
            c.check(f"{name} {field}", within_rel(got, want), f"{got:.4g} vs {want} ({(got - want) / want:+.2%})")
    elapsed = time.perf_counter() - c.t0
    c.check("runtime < 1 s", elapsed < 1.0, f"{elapsed:.2f}s")
    c.close(capsys)


def test_criterion_2_regime_statistics(capsys):
    c = Criterion(2, "regime statistics within 1%")
    for name, rows in TABLE2.items():
        s = fixture(name)
        if s is None:
            c.missing(f"{name} ({len(rows)} rows)", name)
            continue
        got = regime_stats(segment(s, RegimeConfig(200, 120)), 0.1)
        for offset, want in rows.items():
            if offset not in got:
                c.check(f"{name} offset {offset}", False, "window absent")
                continue
            st = got[offset]
            for field, g, w in zip(("mu", "sigma", "mu_trimmed"), (st.mu, st.sigma, st.mu_trimmed), want):
                c.check(f"{name} offset {offset} {field}", within_rel(g, w), f"{g:.4g} vs {w} ({(g - w) / w:+.2%})")
    elapsed = time.perf_counter() - c.t0
    c.check("runtime < 1 s", elapsed < 1.0, f"{elapsed:.2f}s")
    c.close(capsys)


def test_criterion_3_regime_counts(capsys):
    c = Criterion(3, "regime counts 7/8/5/5")
    for name, want in REGIME_COUNTS.items():
        s = fixture(name)
        if s is None:
            c.missing(name, name)
            continue
        got = len(segment(s, RegimeConfig(200, 120)))
        c.check(name, got == want, f"{got} windows vs {want}")
    c.close(capsys)


def test_criterion_4_unit_root(capsys):
    c = Criterion(4, "ADF statistics and p-values")
    for name, (stat, p) in ADF.items():
        s = fixture(name)
        if s is None:
            c.missing(name, name)
            continue
        res = adf_test(s.close)
        c.check(f"{name} statistic", abs(res.statistic - stat) <= ADF_STAT_TOL, f"{res.statistic:.3f} vs {stat}")
        c.check(f"{name} p-value", abs(res.p_value - p) <= ADF_P_TOL, f"{res.p_value:.3f} vs {p}")
    for seed in range(3):
        rng = np.random.default_rng(seed)
        noise = adf_test(rng.normal(size=500))
        walk = adf_test(np.cumsum(rng.normal(size=500)))
        c.check(f"white noise seed {seed} rejects", noise.p_value < 0.05, f"p={noise.p_value:.3g}")
        c.check(f"random walk seed {seed} does not reject", walk.p_value >= 0.05, f"p={walk.p_value:.3g}")
    c.close(capsys)


def test_criterion_5_full_series_regression(capsys):
    c = Criterion(5, "full-series linear regression")
    for name, (m, r) in FULL_LR.items():
        s = fixture(name)
        if s is None:
            c.missing(name, name)
            continue
        best = run_full_series(s, "slr").best
        c.check(f"{name} best kp", best.kp == 1, f"kp={best.kp}")
        c.check(f"{name} MAPE", abs(best.mape - m) <= LR_TOL, f"{best.mape:.4f} vs {m}")
        c.check(f"{name} rRMSE", abs(best.rrmse - r) <= LR_TOL, f"{best.rrmse:.4f} vs {r}")
    elapsed = time.perf_counter() - c.t0
    c.check("runtime < 10 s", elapsed < 10.0, f"{elapsed:.2f}s")
    c.close(capsys)


def test_criterion_6_regime_regression(capsys):
    c = Criterion(6, "regime linear regression on BTC")
    s = fixture("BTC")
    if s is None:
        c.missing("BTC", "BTC")
    else:
        res = run_regimes(s, "slr")
        b = res.best
        c.check("global best offset", b.offset == 120, f"offset={b.offset} kp={b.kp}")
        c.check("global best MAPE", b.mape <= REGIME_LR_MAX, f"{b.mape:.4f} <= {REGIME_LR_MAX}")
        for offset, want in SPOT.items():
            got = res.per_regime[offset].best
            c.check(f"offset {offset} best MAPE", abs(got.mape - want) <= SPOT_TOL, f"{got.mape:.4f} (kp={got.kp}) vs {want}")
    c.close(capsys)


@pytest.mark.slow
def test_criterion_7_lstm(capsys):
    c = Criterion(7, "LSTM on BTC, 600 epochs, median of 5 seeds")
    s = fixture("BTC")
    if s is None:
        c.missing("BTC", "BTC")
        c.close(capsys)
    # full series at the published lag; a full 1..10 sweep would not fit the budget
    full = run_full_series(s, "lstm", SweepSpec(kp=(1,), models=("lstm",))).best
    c.check("full-series MAPE", abs(full.mape - LSTM_FULL) <= LSTM_FULL_TOL, f"{full.mape:.4f} vs {LSTM_FULL}±{LSTM_FULL_TOL} (seed {full.seed})")
    reg = run_regimes(s, "lstm").best
    c.check("regime best MAPE", reg.mape <= LSTM_REGIME_MAX, f"{reg.mape:.4f} at offset {reg.offset} kp={reg.kp} (seed {reg.seed})")
    elapsed = time.perf_counter() - c.t0
    c.check("runtime <= 30 min", elapsed <= LSTM_BUDGET, f"{elapsed / 60:.1f} min")
    c.close(capsys, f"; full {full.mape:.4f}, regime {reg.mape:.4f} at offset {reg.offset} kp={reg.kp}")


def test_criterion_8_properties(capsys):
    c = Criterion(8, "property suite without fixtures")
    rng = np.random.default_rng(0)

    mlp = MlpModel.init(3, 5, rng)
    X, y = rng.normal(size=(9, 3)), rng.normal(size=9)
    err = rel_err(mlp.loss_and_grads(X, y)[1], numeric_grad(mlp, X, y))
    c.check("MLP gradient", err < 1e-4, f"relative error {err:.2e}")
    lstm = LstmModel.init(2, 3, rng)
    lstm.b[:] = rng.normal(size=lstm.b.shape)
    X, y = rng.normal(size=(4, 5, 2)), rng.normal(size=4)
    err = rel_err(lstm.loss_and_grads(X, y)[1], numeric_grad(lstm, X, y))
    c.check("LSTM gradient", err < 1e-4, f"relative error {err:.2e}")

    A = rng.normal(size=(60, 4))
    Y = A @ rng.normal(size=4) + rng.normal(size=60)
    lm = ols_fit(A, Y)
    resid = Y - lm.predict(A)
    design = np.hstack([np.ones((60, 1)), A])
    orth = np.max(np.abs(design.T @ resid)) / (np.linalg.norm(design) * np.linalg.norm(resid))
    c.check("OLS residual orthogonality", orth < 1e-8, f"{orth:.2e}")

    x = 50 + np.cumsum(rng.normal(size=120)) * 0.1 + np.sin(np.arange(120) / 2)
    for kind in ("additive", "multiplicative"):
        d = decompose(x, 12, kind)
        ok = ~np.isnan(d.trend)
        if kind == "additive":
            err = np.max(np.abs(d.trend + d.seasonal + d.residual - x)[ok])
        else:
            err = np.max(np.abs(d.trend * d.seasonal * d.residual / x - 1)[ok])
        c.check(f"{kind} reconstruction", err < 1e-9, f"{err:.2e}")

    y = rng.uniform(1, 100, 50)
    f = y * rng.uniform(0.9, 1.1, 50)
    exact = all(mape(a * y, a * f) == mape(y, f) and rrmse(a * y, a * f) == rrmse(y, f) for a in (0.25, 2.0, 1024.0))
    c.check("metric scale invariance", exact, "powers of two, exact equality")

    bad = []
    for _ in range(300):
        D, A_, h = int(rng.integers(1, 1500)), int(rng.integers(2, 300)), int(rng.integers(1, 300))
        if RegimeConfig(A_, h).count(D) != len(brute_force_windows(D, A_, h)):
            bad.append((D, A_, h))
    c.check("segmentation count vs enumerator", not bad, f"mismatches {bad[:3]}")

    walk = 100 + np.cumsum(rng.normal(size=160))
    from conftest import make_series

    s = make_series(walk)
    spec = SweepSpec(kp=(2,), models=("lstm",), train=TrainConfig(epochs=3), lstm_units=4, repeats=3)
    row = run_full_series(s, "lstm", spec).best
    sp = chrono_split(make_lagged(s, 2))
    refit = fit_model("lstm", sp.train, TrainConfig(epochs=3), seed=row.seed, units=4)
    again = mape(sp.test.Y, refit.predict(sp.test.X))
    c.check("rerun from recorded seed", again == row.mape, f"{again!r} vs {row.mape!r}")
    c.check("seed is one of the derived seeds", row.seed in {derive_seed(0, "SYN", "lstm", 2, 0, "full", r) for r in range(3)})
    c.close(capsys)


def test_criterion_9_qualitative_claims(capsys):
    c = Criterion(9, "qualitative figure-level claims")
    for name in SERIES:
        s = fixture(name)
        if s is None:
            c.missing(f"{name} differenced ACF", name)
            continue
        r = acf(first_difference(s.close), 50)
        outside = [k for k in range(1, 51) if abs(r.r[k]) > r.bound99]
        c.check(f"{name} differenced ACF inside 99% bounds", not outside, f"lags outside: {outside}")
    btc = fixture("BTC")
    if btc is None:
        c.missing("BTC right skew", "BTC")
    else:
        st = describe(btc.close, 0.1)
        c.check("BTC trimmed mean below mean", st.mu_trimmed < st.mu, f"{st.mu_trimmed:.1f} < {st.mu:.1f}")
    c.close(capsys)
