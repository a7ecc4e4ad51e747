import math

import numpy as np
import pytest

from mkdv_selfsim.fixedpoint import solve_fixed_point
from mkdv_selfsim.model import ModelConfig, SpectralField, TailModel
from mkdv_selfsim.transform import (
    InverseTransformSpec,
    _solve_alpha_zero,
    composite_field,
    cross_validate_prop7,
    inverse_profile,
)

CFG = ModelConfig(epsilon=-1)


@pytest.fixture(scope="module")
def field01():
    state = solve_fixed_point(0.1, CFG)
    return state, composite_field(state, CFG)


class TestSpecValidation:
    def test_bad_method(self, field01):
        _, f = field01
        with pytest.raises(ValueError):
            InverseTransformSpec(field=f, y_targets=[-40.0], method="magic")

    def test_range(self, field01):
        _, f = field01
        with pytest.raises(ValueError):
            InverseTransformSpec(field=f, y_targets=[-70.0])
        with pytest.raises(ValueError):
            InverseTransformSpec(field=f, y_targets=[11.0])
        with pytest.raises(ValueError):
            InverseTransformSpec(field=f, y_targets=[])


class TestInverseProfile:
    def test_zero_field(self):
        grid = np.linspace(0.0, 30.0, 50)
        f = SpectralField(grid=grid, values=np.zeros(50, dtype=complex))
        prof = inverse_profile(
            InverseTransformSpec(field=f, y_targets=[-40.0, -30.0, 5.0]), CFG
        )
        assert np.all(prof.vs == 0.0)

    def test_composite_field_origin(self, field01):
        state, f = field01
        theta = state.c + 1.5j * state.alpha / math.pi
        assert f(0.0) == theta  # cutoff kills the ansatz at the origin
        # tail continuity: the A e^{ia ln xi} model meets the grid data
        assert abs(f(29.999) - f(30.001)) < 2e-4 * abs(state.params.A)

    def test_brute_matches_stationary(self, field01):
        # one-point stationary phase within 5% of the envelope at y << 0
        _, f = field01
        ys = [-50.0, -40.0, -30.0]
        brute = inverse_profile(InverseTransformSpec(field=f, y_targets=ys), CFG)
        stat = inverse_profile(
            InverseTransformSpec(field=f, y_targets=ys, method="stationary"), CFG
        )
        A = 0.1
        for y, vb, vs in zip(brute.ys, brute.vs, stat.vs):
            env = A / (math.sqrt(math.pi) * (3.0 * abs(y)) ** 0.25)
            assert abs(vb - vs) < 0.05 * env, f"y={y}"

    def test_stationary_envelope_formula(self, field01):
        # max |V| over one oscillation ~ |A| / (sqrt(pi) |3y|^{1/4})
        _, f = field01
        ys = np.linspace(-39.0, -41.0, 101)
        stat = inverse_profile(
            InverseTransformSpec(field=f, y_targets=ys, method="stationary"), CFG
        )
        env = 0.1 / (math.sqrt(math.pi) * (3.0 * 40.0) ** 0.25)
        assert np.max(np.abs(stat.vs)) == pytest.approx(env, rel=0.03)

    def test_stationary_requires_far_field(self, field01):
        _, f = field01
        with pytest.raises(ValueError):
            inverse_profile(
                InverseTransformSpec(field=f, y_targets=[-5.0], method="stationary"),
                CFG,
            )

    def test_stationary_point_outside_range(self):
        grid = np.linspace(0.0, 4.0, 40)
        f = SpectralField(
            grid=grid,
            values=np.full(40, 0.1, dtype=complex),
            tail=TailModel(amplitude=0.1),
        )
        with pytest.raises(ValueError, match="increase xi_max"):
            inverse_profile(InverseTransformSpec(field=f, y_targets=[-50.0]), CFG)

    def test_output_sorted_decreasing(self, field01):
        _, f = field01
        prof = inverse_profile(
            InverseTransformSpec(
                field=f, y_targets=[-30.0, -35.0, -32.0], method="stationary"
            ),
            CFG,
        )
        assert list(prof.ys) == [-30.0, -32.0, -35.0]


class TestAlphaZeroRootFind:
    def test_alpha_driven_to_zero(self):
        state = _solve_alpha_zero(0.1, +1.0, CFG)
        assert abs(state.alpha) <= 1e-9
        assert state.params.A.real > 0

    def test_negative_sign(self):
        state = _solve_alpha_zero(0.1, -1.0, CFG)
        assert abs(state.alpha) <= 1e-9
        assert state.params.A.real < 0


class TestCrossValidate:
    def test_kappa_zero_trivial(self):
        rep = cross_validate_prop7(0.0)
        assert rep["rho_ode"] == 0.0 and rep["A"] == {"re": 0.0, "im": 0.0}

    def test_kappa_range(self):
        with pytest.raises(ValueError):
            cross_validate_prop7(0.6)

    def test_requires_defocusing(self):
        with pytest.raises(ValueError):
            cross_validate_prop7(0.3, ModelConfig(epsilon=1))
