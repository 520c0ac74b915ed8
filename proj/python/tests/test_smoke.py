import numpy as np
import pytest

import opschwarz as ops


def test_grid_and_decomposition():
    grid = ops.build_grid(50, 50)
    assert grid.num_nodes == 2601
    assert grid.num_triangles == 5000
    assert grid.nodes.shape == (2601, 2)
    subs = ops.decompose(grid, ops.DecompositionConfig(ops.Layout.Vertical, 10))
    assert [s.cells for s in subs] == [(0, 30, 0, 50), (20, 50, 0, 50)]
    assert subs[0].schwarz_boundary[0][1] == 1


def test_bad_grid_raises_value_error():
    with pytest.raises(ValueError):
        ops.build_grid(0, 4)
    with pytest.raises(ops.ConfigError):
        ops.decompose(ops.build_grid(9, 4), ops.DecompositionConfig(ops.Layout.Vertical, 2))


def test_monolithic_and_coupled_agree():
    grid = ops.build_grid(8, 8)
    bc = ops.BoundaryCondition.time_varying_case()
    ic = np.zeros(grid.num_nodes)
    mono = ops.solve_monolithic(grid, bc, ic, 0.02, 0.4)
    assert mono.num_snapshots == 21
    run = ops.run_coupled(grid, ops.DecompositionConfig(ops.Layout.FourSquares, 2), [ops.ModelKind.Fom],
                          bc, ic, 0.02, 0.4)
    err = ops.relative_error_series(mono.full_states(), run.merged)
    assert err.e_max < 1e-9
    assert run.average_sweeps >= 1


def test_reduced_coupling_uses_training_snapshots():
    grid = ops.build_grid(16, 16)
    bc = ops.BoundaryCondition.static_case()
    ic = np.zeros(grid.num_nodes)
    mono = ops.solve_monolithic(grid, bc, ic, 0.02, 1.0)
    run = ops.run_coupled(grid, ops.DecompositionConfig(ops.Layout.Vertical, 4), [ops.ModelKind.Rom], bc, ic,
                          0.02, 1.0, training=mono, rom=ops.RomOptions(r=6, n_train=30))
    assert len(run.projection_errors) == 2
    assert ops.relative_error_series(mono.full_states(), run.merged).e_avg < 5e-2


def test_pod_and_operator_inference():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((30, 12))
    basis = ops.pod_basis(x, 5, centering=True, n_train=12)
    assert np.allclose(basis.modes.T @ basis.modes, np.eye(5), atol=1e-12)
    assert ops.energy_fraction(basis, basis.numerical_rank) == pytest.approx(1.0)

    k = rng.standard_normal((3, 3))
    b = rng.standard_normal((3, 2))
    states = rng.standard_normal((3, 10))
    inputs = rng.standard_normal((2, 10))
    deriv = k @ states[:, 1:] + b @ inputs[:, 1:]
    k_hat, b_hat = ops.infer_operators(states, deriv, inputs, 0.0)
    assert np.allclose(k_hat, k, atol=1e-10)
    assert np.allclose(b_hat, b, atol=1e-10)
    step = ops.rom_step(np.array([[-1.0]]), np.zeros((1, 1)), np.array([1.0]), np.array([0.0]), 0.01)
    assert step[0] == pytest.approx(1 / 1.01)


def test_non_convergence_is_a_numerical_error():
    grid = ops.build_grid(10, 10)
    with pytest.raises(ops.NumericalError):
        ops.run_coupled(grid, ops.DecompositionConfig(ops.Layout.Vertical, 1), [ops.ModelKind.Fom],
                        ops.BoundaryCondition.static_case(), np.zeros(grid.num_nodes), 0.01, 0.1,
                        schwarz=ops.SchwarzConfig(max_sweeps=1))


def test_experiment_config():
    cfg = ops.parse_config("nx = 10\nny = 10\noverlap = 2\ndt = 0.05\n")
    stats = ops.run_experiment(cfg)
    assert stats["e_avg"] < 1e-12
    assert stats["layout"] == "vertical"
    again = ops.parse_config(cfg.serialize())
    assert again.serialize() == cfg.serialize()
