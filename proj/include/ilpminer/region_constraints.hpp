#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ilpminer/causal_graph.hpp"
#include "ilpminer/event_log.hpp"

namespace ilpminer {

/// Constraint row of a prefix, laid out as (1, p(prefix minus last), -p(prefix)).
/// The empty sequence maps to (1, 0, ..., 0).
class EncodingVector {
 public:
  EncodingVector() = default;
  explicit EncodingVector(std::vector<std::int64_t> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  std::int64_t operator[](std::size_t i) const { return values_[i]; }
  const std::vector<std::int64_t>& values() const noexcept { return values_; }

  /// `([a_s,a,b^2],c)` style: bag of the proper prefix, then the last activity.
  std::string shorthand(const Alphabet& alphabet) const;
  std::string to_string() const;

  auto operator<=>(const EncodingVector&) const = default;

 private:
  std::vector<std::int64_t> values_;
};

EncodingVector sequence_encoding(const Trace& sequence, const Alphabet& alphabet);
EncodingVector sequence_encoding(const PrefixClosure& closure, std::size_t node);

/// Variable layout shared by regions, rows and solver assignments:
/// index 0 is m, 1..n are x, n+1..2n are y.
struct VariableLayout {
  std::size_t n = 0;
  std::size_t count() const noexcept { return 2 * n + 1; }
  static constexpr std::size_t m() noexcept { return 0; }
  std::size_t x(std::size_t a) const noexcept { return 1 + a; }
  std::size_t y(std::size_t a) const noexcept { return 1 + n + a; }
};

struct RegionCandidate {
  bool m = false;
  std::vector<std::uint8_t> x;
  std::vector<std::uint8_t> y;

  static RegionCandidate from_assignment(std::span<const std::uint8_t> assignment);
  std::vector<std::uint8_t> assignment() const;

  auto operator<=>(const RegionCandidate&) const = default;
};

struct InequalityRow {
  EncodingVector coefficients;  // row . (m, x, y) >= 0
  Trace source;                 // first sequence (canonical order) producing this row
  std::uint64_t weight = 0;     // summed closure frequency of all merged sequences
};

struct EqualityRow {
  std::vector<std::int64_t> coefficients;  // (1, p(trace), -p(trace)); row . (m, x, y) == 0
  Trace source;
};

/// Region constraint body. The min-arc row (sum x + sum y >= 1) and binary
/// bounds are implicit and always part of the system.
struct ConstraintSystem {
  Alphabet alphabet;
  std::optional<Activity> start;
  std::optional<Activity> end;
  std::vector<InequalityRow> inequalities;
  std::vector<EqualityRow> equalities;
  std::vector<std::int64_t> objective;

  VariableLayout layout() const noexcept { return {alphabet.size()}; }
  std::size_t num_variables() const noexcept { return 2 * alphabet.size() + 1; }
};

using RetainedSet = std::set<EncodingVector>;

enum class ObjectiveKind {
  /// z = m + sum_{s != eps} f(s) * (m + p(s)x - p(s)y): tokens left in the
  /// place after every prefix, weighted by prefix frequency.
  token_residency,
  /// z = m + sum_{s = s'.a != eps} f(s) * (m + p(s')x - p(s)y): summed slack
  /// of the region rows. Rewards self-loops.
  constraint_slack,
};

/// Rows are deduplicated by vector value. With `retained`, only rows whose
/// vector is retained are emitted, and an equality row only when every
/// non-empty prefix of its trace is retained.
ConstraintSystem build_constraint_system(const PrefixClosure& closure,
                                         const std::optional<RetainedSet>& retained = std::nullopt,
                                         ObjectiveKind objective = ObjectiveKind::token_residency);

/// With `retained`, only sequences whose encoding is retained contribute.
std::vector<std::int64_t> objective_vector(const PrefixClosure& closure,
                                           const std::optional<RetainedSet>& retained = std::nullopt,
                                           ObjectiveKind kind = ObjectiveKind::token_residency);

struct Fixing {
  std::size_t variable = 0;
  std::uint8_t value = 0;

  auto operator<=>(const Fixing&) const = default;
};

struct IlpInstance {
  std::shared_ptr<const ConstraintSystem> system;
  std::vector<Fixing> fixings;
  std::optional<ActivityPair> pair;
};

/// Fixes m = 0, x(a) = 1, y(b) = 1. Requires a != end and b != start.
IlpInstance instantiate_causal_ilp(std::shared_ptr<const ConstraintSystem> system, const Activity& a,
                                   const Activity& b);

struct RegionCheck {
  bool is_region = true;
  std::optional<Trace> violated;  // first violated sequence in canonical order
  std::int64_t value = 0;         // row value at the violation
};

RegionCheck check_region(const RegionCandidate& r, const PrefixClosure& closure);
/// Same check against the (possibly filtered) inequality rows of a system.
RegionCheck check_region(const RegionCandidate& r, const ConstraintSystem& system);

/// The always-feasible place used in the existence proof for USE logs: start
/// feeds the place, end drains it, and a and b (unless they are start/end)
/// carry self-loops.
RegionCandidate trivial_causal_solution(const Alphabet& alphabet, const Activity& start,
                                        const Activity& end, const Activity& a, const Activity& b);

void write_lp(std::ostream& out, const IlpInstance& instance);

}  // namespace ilpminer
