#include <doctest.h>

#include <random>
#include <sstream>

#include "ilpminer/error.hpp"
#include "ilpminer/region_constraints.hpp"
#include "ilpminer/sequence_filter.hpp"
#include "../support/fixtures.hpp"
#include "../support/generators.hpp"

using namespace ilpminer;
using ilpminer::testing::tr;

namespace {

const Alphabet& use_alphabet() {
  static const Alphabet a(std::vector<Activity>{"__start__", "a", "b", "c", "d", "e", "f", "g", "h", "__end__"});
  return a;
}

// m + p(prefix minus last) x - p(prefix) y, evaluated straight from Parikh vectors.
std::int64_t row_value(const RegionCandidate& r, const Trace& s, const Alphabet& alphabet) {
  const auto before = parikh(Trace(s.begin(), s.end() - 1), alphabet);
  const auto after = parikh(s, alphabet);
  std::int64_t v = r.m;
  for (std::size_t a = 0; a < alphabet.size(); ++a) v += before[a] * r.x[a] - after[a] * r.y[a];
  return v;
}

bool region_by_definition(const RegionCandidate& r, const PrefixClosure& pc) {
  for (const auto& [s, f] : pc.entries()) {
    if (!s.empty() && row_value(r, s, pc.alphabet()) < 0) return false;
  }
  return true;
}

RegionCandidate random_candidate(std::mt19937_64& rng, std::size_t n) {
  RegionCandidate r{ilpminer::testing::pick(rng, 0, 1) == 1, std::vector<std::uint8_t>(n), std::vector<std::uint8_t>(n)};
  for (auto& v : r.x) v = ilpminer::testing::pick(rng, 0, 1);
  for (auto& v : r.y) v = ilpminer::testing::pick(rng, 0, 1);
  return r;
}

RegionCandidate with_arcs(std::size_t n, std::initializer_list<std::size_t> in, std::initializer_list<std::size_t> out) {
  RegionCandidate r{false, std::vector<std::uint8_t>(n), std::vector<std::uint8_t>(n)};
  for (auto a : in) r.x[a] = 1;
  for (auto a : out) r.y[a] = 1;
  return r;
}

}  // namespace

TEST_CASE("sequence encoding") {
  const auto& A = use_alphabet();
  CHECK(sequence_encoding(tr("__start__ a b"), A).values() ==
        std::vector<std::int64_t>{1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0});
  std::vector<std::int64_t> root(21, 0);
  root[0] = 1;
  CHECK(sequence_encoding({}, A).values() == root);
  CHECK(sequence_encoding({}, A).shorthand(A) == "([],⊥)");

  const auto e = sequence_encoding(tr("__start__ a c d e f d"), A);
  CHECK(e.shorthand(A) == "([__start__,a,c,d,e,f],d)");
  CHECK(e[1 + 10 + 4] == -2);
  CHECK(sequence_encoding(tr("__start__ a d c e f b d e"), A).shorthand(A) == "([__start__,a,b,c,d^2,e,f],e)");
  CHECK_THROWS_AS(sequence_encoding(tr("__start__ z"), A), Error);

  // Encodings computed from the trie agree with the direct definition.
  const auto pc = prefix_closure(use_transform(ilpminer::testing::l1_prime()));
  for (std::size_t id = 0; id < pc.size(); ++id) CHECK(sequence_encoding(pc, id) == sequence_encoding(pc.sequence(id), A));
}

TEST_CASE("constraint rows") {
  SUBCASE("single-event log") {
    const auto pc = prefix_closure(use_transform(parse_trace_log("a")));
    const auto cs = build_constraint_system(pc);
    CHECK(cs.inequalities.size() == 3);
    CHECK(cs.equalities.size() == 1);
    CHECK(cs.equalities[0].source == tr("__start__ a __end__"));
    CHECK(cs.equalities[0].coefficients == std::vector<std::int64_t>{1, 1, 1, 1, -1, -1, -1});
  }
  SUBCASE("first row is m - y(start) >= 0") {
    const auto cs = build_constraint_system(prefix_closure(use_transform(ilpminer::testing::l1_prime())));
    std::vector<std::int64_t> expect(21, 0);
    expect[0] = 1;
    expect[11] = -1;
    CHECK(cs.inequalities.front().coefficients.values() == expect);
    CHECK(cs.inequalities.front().source == tr("__start__"));
    // One row per distinct encoding; the two orderings of c and d after a share a row.
    std::set<EncodingVector> distinct;
    for (const auto& [s, f] : prefix_closure(use_transform(ilpminer::testing::l1_prime())).entries()) {
      if (!s.empty()) distinct.insert(sequence_encoding(s, cs.alphabet));
    }
    CHECK(cs.inequalities.size() == distinct.size());
    const auto merged = sequence_encoding(tr("__start__ a c d e"), cs.alphabet);
    for (const auto& row : cs.inequalities) {
      if (row.coefficients == merged) CHECK(row.weight == 12 + 22);
    }
    CHECK(cs.equalities.size() == 6);
  }
  SUBCASE("filtered rows drop the deviating path") {
    const auto pc = prefix_closure(use_transform(ilpminer::testing::l1_prime()));
    const SequenceEncodingGraph g(pc);
    const auto kept = retained_encodings(g, sef_bfs(g, make_kappa_max(0.75)));
    const auto cs = build_constraint_system(pc, kept);
    const auto& A = cs.alphabet;
    for (const auto& row : cs.inequalities) {
      CHECK(row.coefficients.shorthand(A) != "([__start__,a,b],c)");
      CHECK(row.source != tr("__start__ a b c d"));
    }
    CHECK(cs.equalities.size() == 5);
    for (const auto& eq : cs.equalities) CHECK(eq.source != tr("__start__ a b c d e g __end__"));

    RetainedSet bogus{EncodingVector(std::vector<std::int64_t>(21, 7))};
    CHECK_THROWS_AS(build_constraint_system(pc, bogus), Error);
  }
}

TEST_CASE("objective coefficients by direct expansion") {
  std::mt19937_64 rng(41);
  std::vector<EventLog> logs{parse_trace_log("a"), ilpminer::testing::l1_prime()};
  for (int i = 0; i < 30; ++i) logs.push_back(ilpminer::testing::random_log(rng));
  for (const auto& log : logs) {
    const auto pc = prefix_closure(use_transform(log));
    const auto& A = pc.alphabet();
    const auto n = A.size();
    std::vector<std::int64_t> slack(2 * n + 1, 0), residency(2 * n + 1, 0);
    slack[0] = residency[0] = 1;
    for (const auto& [s, f] : pc.entries()) {
      if (s.empty()) continue;
      const auto f64 = static_cast<std::int64_t>(f);
      const auto before = parikh(Trace(s.begin(), s.end() - 1), A);
      const auto after = parikh(s, A);
      slack[0] += f64;
      residency[0] += f64;
      for (std::size_t a = 0; a < n; ++a) {
        slack[1 + a] += f64 * before[a];
        residency[1 + a] += f64 * after[a];
        slack[1 + n + a] -= f64 * after[a];
        residency[1 + n + a] -= f64 * after[a];
      }
    }
    CHECK(objective_vector(pc, std::nullopt, ObjectiveKind::constraint_slack) == slack);
    CHECK(objective_vector(pc, std::nullopt, ObjectiveKind::token_residency) == residency);
    CHECK(objective_vector(pc).back() == -static_cast<std::int64_t>(log.total()));
  }
  const auto unit = objective_vector(prefix_closure(use_transform(parse_trace_log("a"))), std::nullopt,
                                     ObjectiveKind::constraint_slack);
  CHECK(unit[0] == 4);
}

TEST_CASE("causal instances") {
  auto cs = std::make_shared<const ConstraintSystem>(
      build_constraint_system(prefix_closure(use_transform(ilpminer::testing::l1_prime()))));
  const auto inst = instantiate_causal_ilp(cs, "__start__", "a");
  CHECK(inst.fixings == std::vector<Fixing>{{0, 0}, {1, 1}, {12, 1}});
  CHECK(inst.system == cs);
  CHECK_THROWS_AS(instantiate_causal_ilp(cs, "__end__", "b"), Error);
  CHECK_THROWS_AS(instantiate_causal_ilp(cs, "a", "__start__"), Error);
  CHECK_THROWS_AS(instantiate_causal_ilp(cs, "a", "zz"), Error);

  const auto trivial = trivial_causal_solution(cs->alphabet, "__start__", "__end__", "a", "b");
  CHECK(trivial == with_arcs(10, {0, 1, 2}, {1, 2, 9}));
  CHECK(check_region(trivial, *cs).is_region);
}

TEST_CASE("check_region") {
  const auto pc1 = prefix_closure(use_transform(ilpminer::testing::l1()));
  const auto pc1p = prefix_closure(use_transform(ilpminer::testing::l1_prime()));
  const auto place_to_d = with_arcs(10, {1, 6}, {4});
  CHECK(check_region(place_to_d, pc1).is_region);

  RegionCandidate ones{true, std::vector<std::uint8_t>(10, 1), std::vector<std::uint8_t>(10, 1)};
  CHECK(check_region(ones, pc1p).is_region);

  const auto place_to_bc = with_arcs(10, {1, 6}, {2, 3});
  CHECK(check_region(place_to_bc, pc1).is_region);
  const auto r = check_region(place_to_bc, pc1p);
  CHECK_FALSE(r.is_region);
  REQUIRE(r.violated);
  CHECK(*r.violated == tr("__start__ a b c"));
  CHECK(r.value == -1);
}

TEST_CASE("region properties on random closures") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 60; ++i) {
    const auto pc = prefix_closure(use_transform(ilpminer::testing::random_log(rng)));
    const auto n = pc.alphabet().size();
    const auto cs = build_constraint_system(pc);
    RegionCandidate zero{false, std::vector<std::uint8_t>(n), std::vector<std::uint8_t>(n)};
    RegionCandidate ones{true, std::vector<std::uint8_t>(n, 1), std::vector<std::uint8_t>(n, 1)};
    CHECK(check_region(zero, pc).is_region);
    CHECK(check_region(ones, pc).is_region);

    // A random subset of the kept rows stands in for a filtered system.
    const SequenceEncodingGraph g(pc);
    RetainedSet subset;
    for (std::size_t v = 1; v < g.size(); ++v) {
      if (ilpminer::testing::pick(rng, 0, 2) != 0) subset.insert(g.encoding(v));
    }
    const auto filtered = build_constraint_system(pc, subset);
    for (int k = 0; k < 40; ++k) {
      const auto r = random_candidate(rng, n);
      const bool truth = region_by_definition(r, pc);
      CHECK(check_region(r, pc).is_region == truth);
      CHECK(check_region(r, cs).is_region == truth);
      if (truth) CHECK(check_region(r, filtered).is_region);
    }
  }
}

TEST_CASE("LP dump") {
  auto cs = std::make_shared<const ConstraintSystem>(build_constraint_system(prefix_closure(use_transform(parse_trace_log("a")))));
  std::ostringstream out;
  write_lp(out, instantiate_causal_ilp(cs, "__start__", "a"));
  const auto text = out.str();
  CHECK(text.rfind("\\ causal pair __start__ -> a\n", 0) == 0);
  CHECK(text.find("\nMinimize\n") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("fix_m: m = 0") != std::string::npos);
  CHECK(text.find("Binary") != std::string::npos);
  CHECK(text.substr(text.size() - 4) == "End\n");
}
