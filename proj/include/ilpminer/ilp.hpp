#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ilpminer/region_constraints.hpp"

namespace ilpminer {

enum class SolveStatus { optimal, infeasible };

struct Solution {
  SolveStatus status = SolveStatus::infeasible;
  std::vector<std::uint8_t> assignment;  // (m, x..., y...) when optimal
  std::int64_t objective = 0;            // c . assignment
  std::uint64_t nodes = 0;               // search nodes visited

  bool optimal() const noexcept { return status == SolveStatus::optimal; }
};

struct Relaxation {
  SolveStatus status = SolveStatus::infeasible;
  std::vector<mpq_class> values;
  mpq_class bound;
};

/// Exact branch-and-bound. Among optimal assignments the lexicographically
/// smallest one in (m, x..., y...) order is returned.
Solution solve(const IlpInstance& instance);

/// Continuous relaxation (all variables in [0,1]) solved exactly.
Relaxation lp_relax(const IlpInstance& instance);

/// Exhaustive enumeration with the same ordering as solve(); at most 25 variables.
Solution brute_force(const IlpInstance& instance);

/// Feasibility of a full binary assignment against every row and fixing.
bool satisfies(const IlpInstance& instance, const std::vector<std::uint8_t>& assignment);

class IlpSolver {
 public:
  virtual ~IlpSolver() = default;
  virtual Solution solve(const IlpInstance& instance) const = 0;
  virtual std::string name() const = 0;
};

class BranchAndBoundSolver final : public IlpSolver {
 public:
  Solution solve(const IlpInstance& instance) const override { return ilpminer::solve(instance); }
  std::string name() const override { return "branch-and-bound"; }
};

class BruteForceSolver final : public IlpSolver {
 public:
  Solution solve(const IlpInstance& instance) const override { return brute_force(instance); }
  std::string name() const override { return "brute-force"; }
};

}  // namespace ilpminer
