import json
import math

import numpy as np
import pytest

from mkdv_selfsim.model import (
    BoundaryData,
    ModelConfig,
    SpectralField,
    TailModel,
    eval_field,
    field_envelope_json,
    field_from_csv,
    field_to_csv,
    make_grid,
    oscillation_spacing_limit,
    zero_field,
    zk_norm,
)


def _field_from_callable(fn, dfn, config, tail=TailModel(), **grid_kw):
    g = make_grid(config, **grid_kw)
    return SpectralField(grid=g, values=fn(g), deriv=dfn(g), tail=tail)


class TestConfig:
    def test_defaults_valid(self):
        c = ModelConfig()
        assert c.epsilon == -1 and c.xi_max == 30.0

    def test_validation(self):
        with pytest.raises(ValueError):
            ModelConfig(epsilon=2)
        with pytest.raises(ValueError):
            ModelConfig(k=0.7)
        with pytest.raises(ValueError):
            ModelConfig(gamma=0.5)
        with pytest.raises(ValueError):
            ModelConfig(xi_max=5.0)

    def test_boundary_smallness(self):
        BoundaryData(0.1, 0.1).check_smallness(0.3)
        with pytest.raises(ValueError):
            BoundaryData(0.3, 0.3).check_smallness(0.3)


class TestGrid:
    def test_example_counts(self):
        c = ModelConfig(xi_max=10.0)
        g = make_grid(c, n_low=16, n_high=16)
        assert len(g) == 32
        assert g[0] == 0.0 and abs(g[-1] - 10.0) < 1e-12
        assert np.all(np.diff(g) > 0)

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            make_grid(ModelConfig(), n_low=8)

    def test_spacing_limit_formula(self):
        # resolving d/dxi (8 xi^3/9) * dxi <= pi/4 at xi=10
        xi = 10.0
        dxi = oscillation_spacing_limit(xi)
        assert abs((8.0 / 3.0) * xi * xi * dxi - math.pi / 4.0) < 1e-14


class TestSpectralField:
    def setup_method(self):
        self.config = ModelConfig()
        self.f = _field_from_callable(
            lambda x: 1.0 / (1.0 + x**2) + 1j * x / (1.0 + x**2) ** 2,
            lambda x: -2 * x / (1 + x**2) ** 2
            + 1j * (1 - 3 * x**2) / (1 + x**2) ** 3,
            self.config,
            tail=TailModel(amplitude=0.0011 + 0.0002j, decay_exponent=2.0),
        )

    def test_conjugate_rule_exact(self):
        for xi in (0.3, 1.7, 12.0, 45.0):
            assert self.f(-xi) == np.conjugate(self.f(xi))

    def test_node_values(self):
        g = self.f.grid
        vals = self.f(g)
        assert np.max(np.abs(vals - self.f.values)) < 1e-13

    def test_tail_used_beyond_xi_max(self):
        v = self.f(60.0)
        expected = (0.0011 + 0.0002j) * (60.0 / 30.0) ** -2.0
        assert abs(v - expected) < 1e-15

    def test_scalar_vs_array(self):
        xs = np.array([-2.0, 0.5, 31.0])
        arr = self.f(xs)
        assert arr.shape == (3,)
        assert arr[1] == eval_field(self.f, 0.5)

    def test_interpolation_accuracy(self):
        xs = np.linspace(0.05, 25.0, 400)
        exact = 1.0 / (1.0 + xs**2) + 1j * xs / (1.0 + xs**2) ** 2
        assert np.max(np.abs(self.f(xs) - exact)) < 2e-4

    def test_validation_errors(self):
        with pytest.raises(ValueError):
            SpectralField(grid=np.array([1.0, 2.0]), values=np.zeros(2))
        with pytest.raises(ValueError):
            SpectralField(grid=np.array([0.0, 1.0]), values=np.array([0.0, np.nan]))

    def test_readonly(self):
        with pytest.raises(ValueError):
            self.f.values[0] = 1.0


class TestNorms:
    def test_zero_field(self):
        c = ModelConfig()
        rep = zk_norm(zero_field(make_grid(c)), c)
        assert rep.zk_norm == 0.0

    def test_decaying_profile_value_piece(self):
        # f = 1/(1+xi^k): value piece sup |f| (1+xi^k) = 1 exactly
        c = ModelConfig()
        k = c.k
        f = _field_from_callable(
            lambda x: 1.0 / (1.0 + x**k),
            lambda x: np.where(
                x > 0, -k * x ** (k - 1) / (1.0 + x**k) ** 2, 0.0
            ).astype(complex),
            c,
        )
        rep = zk_norm(f, c)
        assert abs(rep.pieces[0] - 1.0) < 0.02

    def test_jump_at_zero_no_penalty(self):
        c = ModelConfig()
        f = _field_from_callable(
            lambda x: (0.1 + 0.05j) * np.exp(-x),
            lambda x: -(0.1 + 0.05j) * np.exp(-x),
            c,
        )
        rep = zk_norm(f, c)
        assert np.isfinite(rep.zk_norm)

    def test_homogeneity(self):
        c = ModelConfig()
        f = _field_from_callable(
            lambda x: (0.3 - 0.2j) / (1.0 + x**2),
            lambda x: -(0.3 - 0.2j) * 2 * x / (1.0 + x**2) ** 2,
            c,
        )
        g = SpectralField(grid=f.grid, values=3.0 * f.values, deriv=3.0 * f.deriv)
        assert abs(zk_norm(g, c).zk_norm - 3.0 * zk_norm(f, c).zk_norm) < 1e-12

    def test_low_seminorm_with_boundary(self):
        c = ModelConfig()
        b = BoundaryData(0.05, 0.02)
        theta = b.c + 1.5j * b.alpha / math.pi
        f = _field_from_callable(
            lambda x: theta * np.exp(-(x**2)),
            lambda x: -2 * x * theta * np.exp(-(x**2)),
            c,
        )
        rep = zk_norm(f, c, boundary=b)
        assert rep.low_seminorm is not None
        # near 0 the field equals theta + O(xi^2): first piece small
        assert rep.low_seminorm < 10 * abs(theta)

    def test_grid_refinement_stability(self):
        c = ModelConfig()
        fn = lambda x: (0.2 + 0.1j) / (1.0 + x**2)
        dfn = lambda x: -(0.2 + 0.1j) * 2 * x / (1.0 + x**2) ** 2
        r1 = zk_norm(_field_from_callable(fn, dfn, c), c).zk_norm
        r2 = zk_norm(
            _field_from_callable(fn, dfn, c, n_low=240, n_high=560), c
        ).zk_norm
        assert abs(r1 - r2) / r2 < 0.01


class TestSerialization:
    def test_csv_roundtrip(self):
        c = ModelConfig()
        f = _field_from_callable(
            lambda x: np.exp(-x) * (1 + 0.5j),
            lambda x: -np.exp(-x) * (1 + 0.5j),
            c,
            tail=TailModel(0.001, -0.01, 1.0),
        )
        g = field_from_csv(field_to_csv(f), tail=f.tail)
        assert np.max(np.abs(g.values - f.values)) < 1e-12
        assert np.max(np.abs(g.grid - f.grid)) < 1e-12
        assert np.max(np.abs(g.deriv - f.deriv)) < 1e-12

    def test_envelope_json(self):
        c = ModelConfig()
        f = zero_field(make_grid(c))
        doc = json.loads(field_envelope_json(f, c))
        assert doc["config"]["xi_max"] == 30.0
        assert doc["n_points"] == len(f.grid)
