#include <cmath>

#include <doctest.h>

#include "opschwarz/errors.hpp"
#include "opschwarz/metrics.hpp"
#include "opschwarz/schwarz.hpp"
#include "oracle.hpp"

using namespace opschwarz;

namespace {

constexpr Layout kLayouts[] = {Layout::Vertical, Layout::Horizontal, Layout::FourSquares};

struct Fixture {
  StructuredGrid grid;
  std::vector<Subdomain> subs;
  std::vector<SubdomainModel> models;
  TransmissionPlan plan;

  Fixture(int nx, int ny, DecompositionConfig d, double dt, const Vector& start)
      : grid(build_grid(nx, ny, {})), subs(decompose(grid, d)) {
    for (const auto& s : subs) models.push_back(SubdomainModel::full_order(s, dt));
    for (auto& m : models) m.load(start);
    plan = build_transmission_plan(models);
  }
};

Vector with_boundary(const StructuredGrid& g, const BoundaryCondition& bc, double interior) {
  Vector v = Vector::Constant(g.num_nodes(), interior);
  for (int n = 0; n < g.num_nodes(); ++n)
    if (g.on_boundary(n)) v[n] = bc.value(*g.side_of(n), 0.0);
  return v;
}

}  // namespace

TEST_CASE("model kind names") {
  CHECK(model_kind_from_string("fom") == ModelKind::Fom);
  CHECK(model_kind_from_string("rom") == ModelKind::Rom);
  CHECK(std::string(to_string(ModelKind::Rom)) == "rom");
  CHECK_THROWS_AS(model_kind_from_string("dmd"), ConfigError);
}

TEST_CASE("convergence measures follow the formulas") {
  Vector a(2), b(2), c(3), d(3);
  a << 1, 2;
  b << 1.5, 2;
  c << 0, 3, 4;
  d << 0, 3, 3;
  const auto m = convergence_measures({a, c}, {b, d});
  CHECK(m.eps_abs == doctest::Approx(std::sqrt(0.25 + 1.0)));
  CHECK(m.eps_rel == doctest::Approx(std::sqrt(0.25 / 5.0 + 1.0 / 25.0)));
  // zero iterate uses its absolute term
  const Vector z = Vector::Zero(2);
  const auto g = convergence_measures({z}, {b});
  CHECK(g.eps_rel == doctest::Approx(b.norm()));
  CHECK(g.eps_abs == doctest::Approx(b.norm()));
}

TEST_CASE("zero problem converges in one sweep") {
  for (Layout layout : kLayouts) {
    CAPTURE(to_string(layout));
    const auto grid = build_grid(8, 8, {});
    const CoupledRun run = run_coupled(grid, {layout, 2}, {ModelKind::Fom}, {},
                                       BoundaryCondition::uniform(0.0),
                                       Vector::Zero(grid.num_nodes()), 0.05, 0.5);
    for (int s : run.sweeps) CHECK(s == 1);
    for (double e : run.eps_abs) CHECK(e == 0.0);
    CHECK(run.merged.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("reported measures equal direct evaluation on stored iterates") {
  const BoundaryCondition bc = BoundaryCondition::time_varying_case();
  Fixture f(10, 10, {Layout::FourSquares, 2}, 0.01, with_boundary(build_grid(10, 10, {}), bc, 0.0));
  for (int step = 0; step < 3; ++step) {
    const StepReport rep = schwarz_time_step(f.models, f.plan, f.grid, 0.01 * step, 0.01, bc, {}, true);
    REQUIRE(rep.iterates.size() == rep.eps_abs.size() + 1);
    for (std::size_t k = 1; k < rep.iterates.size(); ++k) {
      double abs_sum = 0.0, rel_sum = 0.0;
      for (std::size_t i = 0; i < f.models.size(); ++i) {
        const Vector& cur = rep.iterates[k][i];
        const Vector& prev = rep.iterates[k - 1][i];
        double diff = 0.0, norm = 0.0;
        for (Eigen::Index e = 0; e < cur.size(); ++e) {
          diff += (cur[e] - prev[e]) * (cur[e] - prev[e]);
          norm += cur[e] * cur[e];
        }
        abs_sum += diff;
        rel_sum += diff / norm;
      }
      CHECK(rep.eps_abs[k - 1] == std::sqrt(abs_sum));
      CHECK(rep.eps_rel[k - 1] == std::sqrt(rel_sum));
    }
    CHECK(rep.eps_abs.back() < 1e-10);
    CHECK(rep.eps_rel.back() < 1e-10);
  }
}

TEST_CASE("sweep cap raises non-convergence with the history") {
  const BoundaryCondition bc = BoundaryCondition::static_case();
  Fixture f(10, 10, {Layout::Vertical, 2}, 0.01, with_boundary(build_grid(10, 10, {}), bc, 0.0));
  SchwarzConfig cfg;
  cfg.max_sweeps = 2;
  try {
    schwarz_time_step(f.models, f.plan, f.grid, 0.0, 0.01, bc, cfg);
    FAIL("expected non-convergence");
  } catch (const NonConvergenceError& e) {
    CHECK(e.eps_abs_history().size() == 2);
    CHECK(e.eps_rel_history().size() == 2);
  }
  cfg.delta_abs = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("full-order coupling reproduces the monolithic solve") {
  for (auto [nx, ny] : {std::pair{4, 4}, std::pair{8, 8}, std::pair{10, 6}}) {
    const auto grid = build_grid(nx, ny, {});
    const auto p = oracle::build(nx, ny, -1, 1, -1, 1);
    for (int which = 0; which < 2; ++which) {
      const BoundaryCondition bc =
          which == 0 ? BoundaryCondition::static_case() : BoundaryCondition::time_varying_case();
      const Matrix ref =
          oracle::solve(p, which == 0 ? oracle::static_sides() : oracle::time_varying_sides(), 0.0, 0.02, 15);
      for (Layout layout : kLayouts)
        for (int o : {1, 2, 3}) {
          if ((o + 1) / 2 >= std::min(nx, ny) / 2) continue;
          CAPTURE(nx);
          CAPTURE(ny);
          CAPTURE(to_string(layout));
          CAPTURE(o);
          const CoupledRun run = run_coupled(grid, {layout, o}, {ModelKind::Fom}, {}, bc,
                                             Vector::Zero(grid.num_nodes()), 0.02, 0.3);
          CHECK((run.merged - ref).cwiseAbs().maxCoeff() <= 1e-9);
        }
    }
  }
}

TEST_CASE("interface samples") {
  const auto grid = build_grid(4, 4, {});
  const auto subs = decompose(grid, {Layout::Vertical, 2});
  SubdomainModel right = SubdomainModel::full_order(subs[1], 0.01);
  right.load(Vector::Constant(grid.num_nodes(), 1.25));
  std::vector<int> gamma;
  for (const auto& e : subs[0].partition.schwarz_bnd)
    for (int n : e.nodes) gamma.push_back(subs[0].parent_of[n]);
  REQUIRE(!gamma.empty());
  CHECK((sample_gamma(right, gamma, grid).array() - 1.25).abs().maxCoeff() == 0.0);

  // a node far outside the supplier
  CHECK_THROWS_AS(sample_gamma(right, {grid.node_index(0, 2)}, grid), ConfigError);

  // reduced supplier at the origin of its coordinates returns the mean
  const NodeOrdering ord = node_ordering(subs[1].partition);
  ReducedModel rom;
  rom.basis.modes = Matrix::Zero(ord.n_interior(), 1);
  rom.basis.modes(0, 0) = 1.0;
  rom.basis.mean = Vector::LinSpaced(ord.n_interior(), 0.5, 2.0);
  rom.K = Matrix::Zero(1, 1);
  rom.B = Matrix::Zero(1, ord.n_boundary());
  rom.boundary_map = ord.boundary_map;
  SubdomainModel reduced = SubdomainModel::reduced(subs[1], rom, 0.01);
  reduced.set_reduced_state(Vector::Zero(1));
  const Vector v = sample_gamma(reduced, gamma, grid);
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    const int local = subs[1].local_of(gamma[k], grid);
    const int slot = reduced.slot_of(local);
    if (slot >= 0) CHECK(v[k] == rom.basis.mean[slot]);
  }

  ReducedModel wrong = rom;
  std::reverse(wrong.boundary_map.begin(), wrong.boundary_map.end());
  CHECK_THROWS_AS(SubdomainModel::reduced(subs[1], wrong, 0.01), ConfigError);
}

TEST_CASE("converged interface values match the monolithic solution") {
  const auto grid = build_grid(4, 4, {});
  const BoundaryCondition bc = BoundaryCondition::static_case();
  Fixture f(4, 4, {Layout::Vertical, 2}, 0.01, with_boundary(grid, bc, 0.0));
  const Matrix ref = oracle::solve(oracle::build(4, 4, -1, 1, -1, 1), oracle::static_sides(), 0.0, 0.01, 1);
  schwarz_time_step(f.models, f.plan, f.grid, 0.0, 0.01, bc, {});
  for (std::size_t i = 0; i < f.subs.size(); ++i)
    for (const auto& e : f.subs[i].partition.schwarz_bnd) {
      std::vector<int> parents;
      for (int n : e.nodes) parents.push_back(f.subs[i].parent_of[n]);
      const Vector v = sample_gamma(f.models[e.neighbor], parents, grid);
      for (std::size_t k = 0; k < parents.size(); ++k) CHECK(std::abs(v[k] - ref(parents[k], 1)) <= 1e-10);
    }
}

TEST_CASE("merge plan") {
  SUBCASE("monolithic is the identity") {
    const auto grid = build_grid(6, 5, {});
    const BoundaryCondition bc = BoundaryCondition::static_case();
    const auto subs = decompose(grid, {Layout::Monolithic, 0});
    std::vector<SubdomainModel> models;
    models.push_back(SubdomainModel::full_order(subs[0], 0.1));
    Vector u = with_boundary(grid, bc, 0.0);
    for (int n = 0; n < grid.num_nodes(); ++n)
      if (!grid.on_boundary(n)) u[n] = 0.1 * n;
    models[0].load(u);
    const Vector merged = merge_solutions(build_merge_plan(grid, subs), models, grid, bc, 0.0);
    CHECK((merged - u).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("midline ties go to the first subdomain") {
    const auto grid = build_grid(10, 4, {});
    const auto subs = decompose(grid, {Layout::Vertical, 2});
    const MergePlan plan = build_merge_plan(grid, subs);
    CHECK(plan.owner[grid.node_index(5, 2)] == 0);
    CHECK(plan.owner[grid.node_index(4, 2)] == 0);
    CHECK(plan.owner[grid.node_index(6, 2)] == 1);
  }
  SUBCASE("every node is assigned exactly once") {
    const auto grid = build_grid(12, 10, {0, 2, 0, 1});
    for (Layout layout : kLayouts)
      for (int o : {1, 2, 4}) {
        const auto subs = decompose(grid, {layout, o});
        const MergePlan plan = build_merge_plan(grid, subs);
        for (int n = 0; n < grid.num_nodes(); ++n) {
          if (grid.on_boundary(n)) {
            CHECK(plan.owner[n] == -1);
            continue;
          }
          REQUIRE(plan.owner[n] >= 0);
          const Subdomain& s = subs[plan.owner[n]];
          const NodeOrdering ord = node_ordering(s.partition);
          CHECK(s.parent_of[ord.interior_map[plan.position[n]]] == n);
        }
      }
  }
}

TEST_CASE("coupled runs are deterministic") {
  const auto grid = build_grid(10, 10, {});
  auto once = [&] {
    return run_coupled(grid, {Layout::FourSquares, 2}, {ModelKind::Fom}, {},
                       BoundaryCondition::time_varying_case(), Vector::Zero(grid.num_nodes()), 0.02, 0.2);
  };
  const CoupledRun a = once(), b = once();
  CHECK((a.merged - b.merged).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.sweeps == b.sweeps);
}

TEST_CASE("wider overlap needs fewer sweeps") {
  const auto grid = build_grid(50, 50, {});
  auto sweeps = [&](int o) {
    return run_coupled(grid, {Layout::Vertical, o}, {ModelKind::Fom}, {},
                       BoundaryCondition::static_case(), Vector::Zero(grid.num_nodes()), 0.01, 1.0)
        .average_sweeps();
  };
  CHECK(sweeps(10) < sweeps(1));
}

TEST_CASE("reduced training uses the subdomain boundary ordering") {
  const auto grid = build_grid(12, 12, {});
  const BoundaryCondition bc = BoundaryCondition::time_varying_case();
  const SnapshotSet mono = solve_monolithic(grid, bc, Vector::Zero(grid.num_nodes()), 0.02, 1.0);
  const auto subs = decompose(grid, {Layout::FourSquares, 2});
  RomOptions opts;
  opts.r = 3;
  opts.n_train = 20;
  for (const auto& s : subs) {
    double err = -1.0;
    const ReducedModel m = train_reduced_model(s, grid, mono, 0.02, opts, &err);
    const NodeOrdering ord = node_ordering(s.partition);
    CHECK(m.boundary_map == ord.boundary_map);
    CHECK(m.B.cols() == ord.n_boundary());
    CHECK(m.K.rows() == 3);
    CHECK(err >= 0.0);
    CHECK(err < 1.0);
  }
  // missing training data
  CHECK_THROWS_AS(run_coupled(grid, {Layout::Vertical, 2}, {ModelKind::Rom}, {}, bc,
                              Vector::Zero(grid.num_nodes()), 0.02, 1.0),
                  ConfigError);
}

TEST_CASE("hybrid run with a reduced subdomain stays close to the reference") {
  const auto grid = build_grid(16, 16, {});
  const BoundaryCondition bc = BoundaryCondition::static_case();
  Vector ic = with_boundary(grid, bc, 0.0);
  const SnapshotSet mono = solve_monolithic(grid, bc, ic, 0.02, 1.0);
  RomOptions opts;
  opts.r = 8;
  opts.n_train = 51;
  const CoupledRun run = run_coupled(grid, {Layout::Vertical, 4}, {ModelKind::Fom, ModelKind::Rom}, {},
                                     bc, ic, 0.02, 1.0, &mono, opts);
  CHECK(run.projection_errors.size() == 1);
  const ErrorSeries e = relative_error_series(mono.full_states(), run.merged);
  CHECK(e.e_avg < 1e-2);
}
