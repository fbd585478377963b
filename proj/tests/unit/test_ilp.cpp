#include <doctest.h>

#include <random>
#include <thread>

#include "ilpminer/error.hpp"
#include "ilpminer/ilp.hpp"
#include "../support/fixtures.hpp"
#include "../support/generators.hpp"

using namespace ilpminer;

namespace {

struct Enumerated {
  bool feasible = false;
  std::int64_t objective = 0;
  std::vector<std::uint8_t> assignment;
};

// Every binary vector in increasing lexicographic order; the first strict
// improvement wins, which makes the lexicographically smallest optimum stick.
Enumerated enumerate(const IlpInstance& inst) {
  const auto& cs = *inst.system;
  const auto n = cs.num_variables();
  Enumerated best;
  std::vector<std::uint8_t> v(n, 0);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    for (std::size_t i = 0; i < n; ++i) v[i] = (code >> (n - 1 - i)) & 1;
    bool ok = true;
    for (const auto& f : inst.fixings) ok = ok && v[f.variable] == f.value;
    std::int64_t arcs = 0;
    for (std::size_t i = 1; i < n; ++i) arcs += v[i];
    ok = ok && arcs >= 1;
    for (std::size_t r = 0; ok && r < cs.inequalities.size(); ++r) {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < n; ++i) s += cs.inequalities[r].coefficients[i] * v[i];
      ok = s >= 0;
    }
    for (std::size_t r = 0; ok && r < cs.equalities.size(); ++r) {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < n; ++i) s += cs.equalities[r].coefficients[i] * v[i];
      ok = s == 0;
    }
    if (!ok) continue;
    std::int64_t z = 0;
    for (std::size_t i = 0; i < n; ++i) z += cs.objective[i] * v[i];
    if (!best.feasible || z < best.objective) best = {true, z, v};
  }
  return best;
}

IlpInstance random_instance(std::mt19937_64& rng) {
  const auto n = ilpminer::testing::pick(rng, 1, 5);
  IlpInstance inst;
  inst.system = ilpminer::testing::random_system(rng, n);
  const auto vars = 2 * n + 1;
  const auto fixes = ilpminer::testing::pick(rng, 0, 3);
  for (std::size_t k = 0; k < fixes; ++k) {
    inst.fixings.push_back({ilpminer::testing::pick(rng, 0, vars - 1), static_cast<std::uint8_t>(ilpminer::testing::pick(rng, 0, 1))});
  }
  return inst;
}

std::shared_ptr<const ConstraintSystem> unit_log_system() {
  return std::make_shared<const ConstraintSystem>(build_constraint_system(prefix_closure(use_transform(parse_trace_log("a")))));
}

}  // namespace

TEST_CASE("self-loop fixing on the single-event log") {
  auto cs = unit_log_system();
  IlpInstance inst{cs, {{0, 0}, {2, 1}, {5, 1}}, std::nullopt};
  const auto expect = enumerate(inst);
  REQUIRE(expect.feasible);
  const auto got = solve(inst);
  REQUIRE(got.optimal());
  CHECK(got.assignment[1] == 1);
  CHECK(got.assignment == expect.assignment);
  CHECK(got.objective == expect.objective);
  CHECK(satisfies(inst, got.assignment));
  CHECK(brute_force(inst).assignment == expect.assignment);
}

TEST_CASE("contradictory fixing is infeasible") {
  auto sys = std::make_shared<ConstraintSystem>(*unit_log_system());
  std::vector<std::int64_t> row(7, 0);
  row[2] = -1;
  sys->inequalities.push_back({EncodingVector(row), {}, 1});
  IlpInstance inst{sys, {{2, 1}}, std::nullopt};
  CHECK(solve(inst).status == SolveStatus::infeasible);
  CHECK(brute_force(inst).status == SolveStatus::infeasible);
  CHECK(lp_relax(inst).status == SolveStatus::infeasible);
  IlpInstance twice{unit_log_system(), {{2, 1}, {2, 0}}, std::nullopt};
  CHECK(solve(twice).status == SolveStatus::infeasible);
}

TEST_CASE("all variables fixed") {
  auto cs = unit_log_system();
  IlpInstance inst{cs, {}, std::nullopt};
  const std::vector<std::uint8_t> target{0, 1, 0, 0, 0, 0, 1};
  for (std::size_t i = 0; i < target.size(); ++i) inst.fixings.push_back({i, target[i]});
  REQUIRE(satisfies(inst, target));
  CHECK(brute_force(inst).assignment == target);
  CHECK(solve(inst).assignment == target);
}

TEST_CASE("malformed instances") {
  auto sys = std::make_shared<ConstraintSystem>(*unit_log_system());
  sys->objective.pop_back();
  CHECK_THROWS_AS(solve(IlpInstance{sys, {}, std::nullopt}), Error);
  CHECK_THROWS_AS(solve(IlpInstance{unit_log_system(), {{99, 1}}, std::nullopt}), Error);
  CHECK_THROWS_AS(solve(IlpInstance{unit_log_system(), {{1, 2}}, std::nullopt}), Error);

  std::mt19937_64 rng(1);
  IlpInstance big{ilpminer::testing::random_system(rng, 13), {}, std::nullopt};
  CHECK_THROWS_AS(brute_force(big), Error);
}

TEST_CASE("relaxation") {
  std::mt19937_64 rng(71);
  SUBCASE("bounds the integer optimum") {
    for (int i = 0; i < 50; ++i) {
      const auto inst = random_instance(rng);
      const auto lp = lp_relax(inst);
      const auto ip = enumerate(inst);
      if (ip.feasible) {
        REQUIRE(lp.status == SolveStatus::optimal);
        CHECK(lp.bound <= mpq_class(ip.objective));
      }
      if (lp.status == SolveStatus::optimal) {
        for (const auto& v : lp.values) {
          CHECK(v >= 0);
          CHECK(v <= 1);
        }
      }
    }
  }
  SUBCASE("only the arc row") {
    for (int i = 0; i < 20; ++i) {
      const auto n = ilpminer::testing::pick(rng, 1, 5);
      auto sys = std::make_shared<ConstraintSystem>();
      std::vector<Activity> names;
      for (std::size_t a = 0; a < n; ++a) names.emplace_back(1, static_cast<char>('a' + a));
      sys->alphabet = Alphabet(names);
      sys->objective.resize(2 * n + 1);
      for (auto& c : sys->objective) c = static_cast<std::int64_t>(ilpminer::testing::pick(rng, 1, 20));
      const auto lp = lp_relax(IlpInstance{sys, {}, std::nullopt});
      REQUIRE(lp.status == SolveStatus::optimal);
      CHECK(lp.bound == mpq_class(*std::min_element(sys->objective.begin() + 1, sys->objective.end())));
    }
  }
  SUBCASE("integral relaxation agrees with the integer optimum") {
    const auto cs = std::make_shared<const ConstraintSystem>(
        build_constraint_system(prefix_closure(use_transform(ilpminer::testing::l1()))));
    const auto inst = instantiate_causal_ilp(cs, "a", "d");
    const auto lp = lp_relax(inst);
    const auto ip = solve(inst);
    REQUIRE(ip.optimal());
    bool integral = true;
    for (const auto& v : lp.values) integral = integral && v.get_den() == 1;
    if (integral) {
      for (std::size_t i = 0; i < lp.values.size(); ++i) CHECK(lp.values[i] == ip.assignment[i]);
    }
    CHECK(lp.bound == mpq_class(ip.objective));
  }
}

TEST_CASE("branch-and-bound agrees with enumeration") {
  std::mt19937_64 rng(73);
  for (int i = 0; i < 150; ++i) {
    const auto inst = random_instance(rng);
    const auto expect = enumerate(inst);
    const auto got = solve(inst);
    const auto brute = brute_force(inst);
    REQUIRE(got.optimal() == expect.feasible);
    CHECK(brute.optimal() == expect.feasible);
    if (!expect.feasible) continue;
    CHECK(got.objective == expect.objective);
    CHECK(got.assignment == expect.assignment);
    CHECK(brute.assignment == expect.assignment);
    CHECK(satisfies(inst, got.assignment));
  }
}

TEST_CASE("concurrent solves share a system safely") {
  const auto cs = std::make_shared<const ConstraintSystem>(
      build_constraint_system(prefix_closure(use_transform(ilpminer::testing::l1()))));
  const auto inst = instantiate_causal_ilp(cs, "e", "g");
  const auto reference = solve(inst);
  std::vector<Solution> results(4);
  std::vector<std::thread> pool;
  for (auto& r : results) pool.emplace_back([&r, &inst] { r = solve(inst); });
  for (auto& t : pool) t.join();
  for (const auto& r : results) CHECK(r.assignment == reference.assignment);
}

TEST_CASE("solver interface") {
  const BranchAndBoundSolver bb;
  const BruteForceSolver bf;
  IlpInstance inst{unit_log_system(), {{0, 0}, {2, 1}, {5, 1}}, std::nullopt};
  CHECK(bb.solve(inst).assignment == bf.solve(inst).assignment);
  CHECK(bb.name() != bf.name());
}
