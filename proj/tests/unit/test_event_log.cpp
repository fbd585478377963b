#include <doctest.h>

#include <random>
#include <sstream>

#include "ilpminer/error.hpp"
#include "ilpminer/event_log.hpp"
#include "../support/fixtures.hpp"
#include "../support/generators.hpp"

using namespace ilpminer;
using ilpminer::testing::tr;

TEST_CASE("parse_trace_log reads the five-variant running example") {
  const auto log = parse_trace_log(
      "10;a b d e g\n12;a c d e f d b e g\n9;a d c e h\n11;a b d e f c d e g\n13;a d c e f b d e h");
  CHECK(log.variants() == 5);
  CHECK(log.total() == 55);
  CHECK(log.multiplicity(tr("a b d e g")) == 10);
  CHECK(log.multiplicity(tr("a c d e f d b e g")) == 12);
  CHECK(log.multiplicity(tr("a d c e h")) == 9);
  CHECK(log.multiplicity(tr("a b d e f c d e g")) == 11);
  CHECK(log.multiplicity(tr("a d c e f b d e h")) == 13);
  CHECK(log.activities() == std::set<Activity>{"a", "b", "c", "d", "e", "f", "g", "h"});
  CHECK(log == ilpminer::testing::l1());
}

TEST_CASE("parse_trace_log edge cases") {
  CHECK(parse_trace_log("").empty());
  CHECK(parse_trace_log("").activities().empty());
  const auto merged = parse_trace_log("2;a b\n1;a b");
  CHECK(merged.multiplicity(tr("a b")) == 3);
  CHECK(merged.variants() == 1);
  CHECK(parse_trace_log("# comment\n\n a b \n").multiplicity(tr("a b")) == 1);
  CHECK(parse_trace_log("3;").multiplicity(Trace{}) == 3);
}

TEST_CASE("parse_trace_log rejects malformed lines with their line number") {
  for (const std::string bad : {"0;a", "x;a", "-1;a", "1.5;a", ";a"}) {
    try {
      parse_trace_log("a b\n" + bad);
      FAIL("accepted " << bad);
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  CHECK_THROWS_AS(parse_trace_log("a  b"), ParseError);
}

TEST_CASE("serialize then parse is the identity") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto log = ilpminer::testing::random_log(rng);
    CHECK(parse_trace_log(serialize_trace_log(log)) == log);
  }
}

TEST_CASE("parse_xes") {
  SUBCASE("hand-counted fixture") {
    const auto log = read_xes(ilpminer::testing::fixture("sample.xes"));
    CHECK(log == read_trace_log(ilpminer::testing::fixture("sample_expected.log")));
  }
  SUBCASE("identical traces merge") {
    std::istringstream in(
        R"(<log><trace><event><string key="concept:name" value="a"/></event><event><string key="concept:name" value="b"/></event></trace>)"
        R"(<trace><event><string key="concept:name" value="a"/></event><event><string key="concept:name" value="b"/></event></trace></log>)");
    const auto log = parse_xes(in);
    CHECK(log.multiplicity(tr("a b")) == 2);
    CHECK(log.variants() == 1);
  }
  SUBCASE("no traces") {
    std::istringstream in("<log></log>");
    CHECK(parse_xes(in).empty());
  }
  SUBCASE("malformed xml") {
    std::istringstream in("<log><trace></log>");
    CHECK_THROWS_AS(parse_xes(in), ParseError);
  }
  SUBCASE("event without a name names the trace") {
    std::istringstream in(
        R"(<log><trace><event><string key="concept:name" value="a"/></event></trace>)"
        R"(<trace><event><string key="org:resource" value="x"/></event></trace></log>)");
    try {
      parse_xes(in);
      FAIL("accepted");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("trace index 1") != std::string::npos);
    }
  }
}

TEST_CASE("parikh") {
  const auto alphabet = Alphabet::canonical({"a", "b", "c", "d", "e", "f", "g", "h"});
  CHECK(parikh(tr("a d c e f b d e h"), alphabet) == ParikhVector{1, 1, 1, 2, 2, 1, 0, 1});
  CHECK(parikh({}, alphabet) == ParikhVector(8, 0));
  CHECK_THROWS_AS(parikh(tr("a z"), alphabet), Error);

  std::mt19937_64 rng(11);
  const auto small = Alphabet::canonical({"a", "b", "c", "d"});
  for (int i = 0; i < 100; ++i) {
    Trace t(12);
    for (auto& a : t) a = small[ilpminer::testing::pick(rng, 0, 3)];
    const auto p = parikh(t, small);
    std::int64_t sum = 0;
    for (std::size_t k = 0; k < small.size(); ++k) {
      CHECK(p[k] == std::count(t.begin(), t.end(), small[k]));
      sum += p[k];
    }
    CHECK(sum == 12);
  }
}

TEST_CASE("use_transform") {
  const auto use = use_transform(ilpminer::testing::l1());
  CHECK(use.start == "__start__");
  CHECK(use.end == "__end__");
  CHECK(use.log.total() == 55);
  CHECK(is_use_log(use.log, use.start, use.end));
  for (const auto& [t, n] : use.log.traces()) {
    CHECK(t.front() == use.start);
    CHECK(t.back() == use.end);
  }
  CHECK(use.alphabet().names().front() == "__start__");
  CHECK(use.alphabet().names().back() == "__end__");

  const auto unit = use_transform(parse_trace_log("a"));
  CHECK(unit.log.multiplicity(tr("__start__ a __end__")) == 1);

  const auto clash = use_transform(parse_trace_log("__start__ __end__ __start__'"));
  CHECK_FALSE(parse_trace_log("__start__ __end__ __start__'").activities().count(clash.start));
  CHECK_FALSE(parse_trace_log("__start__ __end__ __start__'").activities().count(clash.end));
  CHECK(clash.start != clash.end);
  CHECK(is_use_log(clash.log, clash.start, clash.end));

  CHECK_THROWS_AS(use_transform(EventLog{}), Error);
  CHECK_FALSE(is_use_log(parse_trace_log("s a e\ns e a e"), "s", "e"));
}

TEST_CASE("prefix_closure frequencies") {
  SUBCASE("two-variant example") {
    const auto pc = prefix_closure(parse_trace_log("5;a b\n3;a c"));
    const std::map<Trace, std::uint64_t> expected{{{}, 8}, {tr("a"), 8}, {tr("a b"), 5}, {tr("a c"), 3}};
    CHECK(pc.entries() == expected);
  }
  SUBCASE("single trace") {
    const std::map<Trace, std::uint64_t> expected{{{}, 1}, {tr("a"), 1}};
    CHECK(prefix_closure(parse_trace_log("a")).entries() == expected);
  }
  SUBCASE("use-wrapped log with the deviating trace") {
    const auto pc = prefix_closure(use_transform(ilpminer::testing::l1_prime()));
    CHECK(pc.frequency(tr("__start__ a")) == 56);
    CHECK(pc.frequency(tr("__start__ a b")) == 22);
    CHECK(pc.frequency(tr("__start__ a b c")) == 1);
  }
}

TEST_CASE("prefix_closure recurrence and closure on random logs") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto log = ilpminer::testing::random_log(rng);
    const auto pc = prefix_closure(log);
    const auto entries = pc.entries();
    CHECK(pc.frequency({}) == log.total());
    for (const auto& [seq, freq] : entries) {
      if (!seq.empty()) CHECK(entries.count(Trace(seq.begin(), seq.end() - 1)) == 1);
      std::uint64_t sum = log.multiplicity(seq);
      for (const auto& [other, f] : entries) {
        if (other.size() == seq.size() + 1 && std::equal(seq.begin(), seq.end(), other.begin())) sum += f;
      }
      CHECK(freq == sum);
    }
    // Closing the closure reproduces its support.
    EventLog as_log;
    for (const auto& [seq, f] : entries) as_log.add(seq, f);
    std::set<Trace> support, again;
    for (const auto& [seq, f] : entries) support.insert(seq);
    for (const auto& [seq, f] : prefix_closure(as_log).entries()) again.insert(seq);
    CHECK(support == again);
  }
}
