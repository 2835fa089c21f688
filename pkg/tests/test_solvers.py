import itertools
import math

import numpy as np
import pytest

from reprolab.core import InvalidInputError, RngState
from reprolab.costs import CostFunction, RegularityMeta
from reprolab.oracles import NoiseSchedule, OracleSpec
from reprolab.scenarios import build_instance
from reprolab.solvers import (
    AveragingScheme,
    CoefficientMatrix,
    StepSchedule,
    average_iterates,
    averaging_weights,
    eta_at,
    gd_step,
    run_foi,
    run_general_foi,
)

EXACT = OracleSpec("exact", NoiseSchedule("none", 0.0))


def quadratic(dim, center, scale=1.0):
    c = np.asarray(center, dtype=float)
    return CostFunction(
        dim=dim,
        value=lambda v: 0.5 * scale * float(np.sum((v - c) ** 2)),
        subgrad=lambda v: scale * (v - c),
        meta=RegularityMeta(smoothness_L=scale, strong_convexity_mu=scale),
        optimum=(c, 0.0),
    )


class TestGdStep:
    def test_plain(self):
        out = gd_step(np.array([1.0, 0.0]), np.array([1.0, 1.0]), 0.5)
        np.testing.assert_array_equal(out, [0.5, -0.5])

    def test_projected(self):
        out = gd_step(np.array([1.0, 0.0]), np.array([1.0, 1.0]), 0.5, radius=0.5)
        r = 0.5 / math.sqrt(0.5)
        np.testing.assert_allclose(out, [0.5 * r, -0.5 * r], rtol=0, atol=1e-15)

    def test_zero_gradient(self):
        x = np.array([0.3, -0.7])
        np.testing.assert_array_equal(gd_step(x, np.zeros(2), 1.0), x)

    def test_validation(self):
        with pytest.raises(InvalidInputError):
            gd_step(np.zeros(2), np.zeros(3), 0.5)
        with pytest.raises(InvalidInputError):
            gd_step(np.zeros(2), np.zeros(2), 0.0)


class TestEtaAt:
    def test_sc_classic(self):
        assert eta_at(StepSchedule("sc_classic", {"mu": 2.0}), 0) == 1.0

    def test_smooth_sc(self):
        sched = StepSchedule("smooth_sc", {"L": 1.0, "mu": 1.0, "k": 4})
        # lambda_0 = 2/(4-2) = 1, eta_0 = 1/(1+1)
        assert eta_at(sched, 0) == 0.5
        # default k = ceil(4L/mu)
        assert eta_at(StepSchedule("smooth_sc", {"L": 1.0, "mu": 1.0}), 0) == 0.5

    def test_slowed(self):
        assert eta_at(StepSchedule("slowed", {"epsilon": 0.1, "T": 100}), 7) == 0.1

    def test_inverse_l_and_sc_det(self):
        assert eta_at(StepSchedule("inverse_L", {"L": 4.0}), 3) == 0.25
        assert eta_at(StepSchedule("sc_det", {"mu": 0.5}), 1) == 1.0

    def test_missing_param(self):
        from reprolab.core import MissingParameterError
        with pytest.raises(MissingParameterError):
            eta_at(StepSchedule("constant", {}), 0)


class TestAveraging:
    @pytest.mark.parametrize("kind", ["last", "uniform", "shifted_linear",
                                      "sc_linear", "sc_linear_det"])
    @pytest.mark.parametrize("T", [1, 2, 5, 33])
    def test_weights_normalized(self, kind, T):
        w = averaging_weights(AveragingScheme(kind, {"k": 4}), T)
        assert w.shape == (T,)
        assert np.all(w >= 0.0)
        assert abs(float(np.sum(w)) - 1.0) <= 1e-12

    def test_last(self):
        traj = [np.array([1.0, 1.0]), np.array([2.0, 0.0])]
        np.testing.assert_array_equal(
            average_iterates(traj, AveragingScheme("last")), [2.0, 0.0])

    def test_uniform(self):
        traj = [np.array([0.0, 0.0]), np.array([2.0, 0.0])]
        np.testing.assert_array_equal(
            average_iterates(traj, AveragingScheme("uniform")), [1.0, 0.0])

    def test_sc_linear_example(self):
        # T=2: weights (1/3, 2/3) on (x_1, x_2)
        traj = [np.array([3.0, 0.0]), np.array([0.0, 0.0])]
        out = average_iterates(traj, AveragingScheme("sc_linear"))
        np.testing.assert_allclose(out, [1.0, 0.0], rtol=0, atol=1e-15)

    def test_shifted_linear_profile(self):
        w = averaging_weights(AveragingScheme("shifted_linear", {"k": 4}), 3)
        raw = np.array([3.0, 4.0, 5.0])
        np.testing.assert_allclose(w, raw / raw.sum(), rtol=0, atol=1e-15)

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            average_iterates([], AveragingScheme("uniform"))


class TestCoefficientMatrix:
    def test_rejects_upper_triangle(self):
        lam = np.zeros((3, 3))
        lam[0, 1] = 1.0
        with pytest.raises(InvalidInputError):
            CoefficientMatrix(lam)

    def test_zero_diagonal_warns_and_flags(self):
        lam = np.tril(np.ones((3, 3)))
        lam[1, 1] = 0.0
        with pytest.warns(UserWarning):
            cm = CoefficientMatrix(lam)
        assert cm.latest_nonzero is False

    def test_leading_ratio(self):
        lam = np.tril(np.ones((3, 3)))
        lam[2] = [2.0, 1.0, 1.0]
        cm = CoefficientMatrix(lam)
        assert abs(cm.leading_ratio() - 1.0) <= 1e-15


class TestRunFoi:
    def test_single_step_quadratic(self):
        cost = quadratic(2, [0.0, 0.0])
        x0 = np.array([2.0, -4.0])
        res = run_foi(cost, EXACT, x0, StepSchedule("constant", {"eta": 0.5}),
                      AveragingScheme("last"), 1)
        np.testing.assert_array_equal(res.output, 0.5 * x0)

    def test_one_step_convergence_when_eta_is_inverse_l(self):
        cost = quadratic(3, [1.0, -2.0, 0.5])
        res = run_foi(cost, EXACT, np.zeros(3),
                      StepSchedule("inverse_L", {"L": 1.0}),
                      AveragingScheme("last"), 1)
        np.testing.assert_allclose(res.output, [1.0, -2.0, 0.5], rtol=0, atol=1e-15)
        assert res.suboptimality == 0.0

    def test_pure_noise_norm_is_deterministic(self):
        # brute force over all 2^4 sign patterns: ||noise part||^2 = sum eta^2 delta^2
        inst = build_instance("pure_noise", {"T": 4, "delta": 1.0, "eta": 0.5})
        for signs in itertools.product((-1.0, 1.0), repeat=4):
            x = np.zeros(5)
            for t, s in enumerate(signs):
                noise = np.zeros(5)
                noise[t] = s  # delta = 1
                x = x - 0.5 * noise
            assert abs(float(np.sum(x * x)) - 1.0) <= 1e-15
        for seed in range(20):
            res = run_foi(inst.cost, inst.oracle, inst.init, inst.solver.schedule,
                          AveragingScheme("last"), 4, rng=RngState(seed))
            assert abs(float(np.sum(res.output ** 2)) - 1.0) <= 1e-12

    def test_projection_applied_every_step(self):
        cost = quadratic(2, [10.0, 0.0])
        res = run_foi(cost, EXACT, np.zeros(2),
                      StepSchedule("constant", {"eta": 1.0}),
                      AveragingScheme("last"), 5, radius=1.0, keep_trajectory=True)
        for v in res.trajectory[1:]:
            assert float(np.sqrt(np.sum(v * v))) <= 1.0 + 1e-12

    def test_bitwise_determinism(self):
        inst = build_instance("nonsmooth_sto_lb", {"epsilon": 0.05, "T": 12,
                                                   "delta": 0.5})
        a = run_foi(inst.cost, inst.oracle, inst.init, inst.solver.schedule,
                    inst.solver.averaging, 12, rng=RngState(77).child("run"))
        b = run_foi(inst.cost, inst.oracle, inst.init, inst.solver.schedule,
                    inst.solver.averaging, 12, rng=RngState(77).child("run"))
        assert np.array_equal(a.output, b.output)
        assert a.oracle_calls == b.oracle_calls

    def test_incompatible_oracle(self):
        from reprolab.core import UnsupportedError
        cost = quadratic(2, [0.0, 0.0])
        comp = OracleSpec("component", NoiseSchedule("fixed_direction", 0.1))
        with pytest.raises(UnsupportedError):
            run_foi(cost, comp, np.zeros(2), StepSchedule("constant", {"eta": 0.1}),
                    AveragingScheme("last"), 2)


class TestRunGeneralFoi:
    def test_gd_equivalence_bitwise(self):
        inst = build_instance("smooth_str_lb", {"mu": 1.0, "T": 6, "delta": 0.25})
        eta = 0.3
        lam = np.tril(np.full((6, 6), eta))
        cm = CoefficientMatrix(lam)
        rng = RngState(5).child("equal")
        gd = run_foi(inst.cost, inst.oracle, inst.init,
                     StepSchedule("constant", {"eta": eta}),
                     AveragingScheme("last"), 6, rng=rng, keep_trajectory=True)
        foi = run_general_foi(inst.cost, inst.oracle, inst.init, cm, rng=rng)
        np.testing.assert_array_equal(gd.output, foi.output)

    def test_zero_coefficients_stay_at_start(self):
        inst = build_instance("smooth_str_lb", {"mu": 1.0, "T": 4, "delta": 0.25})
        with pytest.warns(UserWarning):
            cm = CoefficientMatrix(np.zeros((4, 4)))
        res = run_general_foi(inst.cost, inst.oracle, inst.init, cm,
                              rng=RngState(1))
        for v in res.trajectory:
            np.testing.assert_array_equal(v, inst.init)

    def test_coupled_sum_identity_random_coeffs(self):
        # with the deterministic coordinate-walk drift, delta*y_t equals the
        # summed error block at every t, for arbitrary coefficients
        from reprolab.lab import _coordinate_walk_schedule, _random_lower_triangular
        T, mu, delta = 16, 1.0, 0.25
        inst = build_instance("smooth_str_lb", {"mu": mu, "T": T, "delta": delta})
        oracle = OracleSpec("nonstochastic_inexact", _coordinate_walk_schedule(delta))
        gen = RngState(31).child("m").generator()
        for _ in range(5):
            cm = _random_lower_triangular(gen, T)
            res = run_general_foi(inst.cost, oracle, inst.init, cm, rng=RngState(2))
            for v in res.trajectory:
                assert abs(delta * v[-1] - float(np.sum(v[:-1]))) <= 1e-9


class TestContractionProperties:
    def _random_psd_batch(self, gen, n, dim, lo, hi):
        qs = np.linalg.qr(gen.standard_normal((n, dim, dim)))[0]
        eigs = gen.uniform(lo, hi, size=(n, dim))
        return np.einsum("nij,nj,nkj->nik", qs, eigs, qs)

    def test_one_step_deviation_inequality(self):
        # smooth convex: ||step(x) - step(y)|| <= ||x-y|| + eta(||D|| + ||D'||)
        gen = RngState(41).child("contract").generator()
        n, dim, L = 10_000, 4, 2.0
        hs = self._random_psd_batch(gen, n, dim, 0.0, L)
        xs = gen.standard_normal((n, dim))
        ys = gen.standard_normal((n, dim))
        d1 = gen.standard_normal((n, dim))
        d2 = gen.standard_normal((n, dim))
        etas = gen.uniform(0.0, 2.0 / L, size=n)
        gx = np.einsum("nij,nj->ni", hs, xs)
        gy = np.einsum("nij,nj->ni", hs, ys)
        lhs = np.sqrt(np.sum(
            ((xs - ys) - etas[:, None] * (gx + d1 - gy - d2)) ** 2, axis=1))
        rhs = (np.sqrt(np.sum((xs - ys) ** 2, axis=1))
               + etas * np.sqrt(np.sum(d1 ** 2, axis=1))
               + etas * np.sqrt(np.sum(d2 ** 2, axis=1)))
        assert np.all(lhs <= rhs + 1e-12)

    def test_strong_contraction_inequality(self):
        # mu-strongly convex, eta <= 1/L: squared distances contract by (1-eta*mu)
        gen = RngState(42).child("contract_sc").generator()
        n, dim, mu, L = 10_000, 4, 0.5, 2.0
        hs = self._random_psd_batch(gen, n, dim, mu, L)
        xs = gen.standard_normal((n, dim))
        ys = gen.standard_normal((n, dim))
        etas = gen.uniform(0.0, 1.0 / L, size=n)
        gx = np.einsum("nij,nj->ni", hs, xs)
        gy = np.einsum("nij,nj->ni", hs, ys)
        lhs = np.sum(((xs - ys) - etas[:, None] * (gx - gy)) ** 2, axis=1)
        rhs = (1.0 - etas * mu) * np.sum((xs - ys) ** 2, axis=1)
        assert np.all(lhs <= rhs + 1e-12)

    def test_first_accurate_iterate_stays_bounded(self):
        # unprojected GD with eta = 1/L under any norm-delta drift: the first
        # eps-accurate iterate is within twice the start distance
        gen = RngState(43).child("bounded").generator()
        n, dim = 1000, 3
        for k in range(n):
            L = float(gen.uniform(0.5, 3.0))
            mu = float(gen.uniform(0.05, L))
            q = np.linalg.qr(gen.standard_normal((dim, dim)))[0]
            eigs = gen.uniform(mu, L, size=dim)
            H = (q * eigs) @ q.T
            c = gen.standard_normal(dim)
            cost = CostFunction(
                dim=dim,
                value=lambda v, H=H, c=c: 0.5 * float((v - c) @ (H @ (v - c))),
                subgrad=lambda v, H=H, c=c: H @ (v - c),
                optimum=(c, 0.0),
            )
            x0 = c + gen.standard_normal(dim)
            d0 = float(np.sqrt(np.sum((x0 - c) ** 2)))
            eps = float(gen.uniform(0.1, 1.0)) * min(1.0, 2.0 * L * d0 ** 2)
            delta = float(gen.uniform(0.0, 1.0)) * eps / d0
            adv = RngState(44).child("adv", k)

            def drift(x, t, hist, adv=adv, delta=delta, dim=dim):
                g = adv.child("d", t).generator().standard_normal(dim)
                return g * (delta / float(np.sqrt(np.sum(g * g))))

            sched = NoiseSchedule("custom_adversary", delta, {"fn": drift})
            oracle = OracleSpec("nonstochastic_inexact", sched)
            res = run_foi(cost, oracle, x0, StepSchedule("inverse_L", {"L": L}),
                          AveragingScheme("last"), 400, keep_trajectory=True)
            hit = None
            for t, v in enumerate(res.trajectory):
                if cost.value(v) - 0.0 <= eps:
                    hit = t
                    break
            assert hit is not None, "never reached the accuracy target"
            dT = float(np.sqrt(np.sum((res.trajectory[hit] - c) ** 2)))
            assert dT <= 2.0 * d0 + 1e-9


def test_negative_suboptimality_rejected():
    bad = CostFunction(
        dim=1,
        value=lambda v: float(v[0] ** 2),
        subgrad=lambda v: 2 * v,
        optimum=(np.zeros(1), 1.0),  # wrong: claims minimum value 1
    )
    with pytest.raises(InvalidInputError):
        run_foi(bad, EXACT, np.zeros(1), StepSchedule("constant", {"eta": 0.1}),
                AveragingScheme("last"), 1)
