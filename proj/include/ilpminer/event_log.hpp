#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ilpminer {

using Activity = std::string;
using Trace = std::vector<Activity>;

/// Ordered set of activities. The position of an activity fixes its index in
/// every Parikh vector, encoding vector and ILP variable block built over it.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<Activity> ordered);

  /// Lexicographic by name; `start` (if given) is moved to the front and `end`
  /// to the back.
  static Alphabet canonical(const std::set<Activity>& names,
                            const std::optional<Activity>& start = std::nullopt,
                            const std::optional<Activity>& end = std::nullopt);

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const Activity& operator[](std::size_t i) const { return names_[i]; }
  const std::vector<Activity>& names() const noexcept { return names_; }

  bool contains(const Activity& a) const { return index_.count(a) != 0; }
  std::optional<std::size_t> find(const Activity& a) const;
  /// Throws Error for activities outside the alphabet.
  std::size_t index_of(const Activity& a) const;

  bool operator==(const Alphabet& other) const { return names_ == other.names_; }

 private:
  std::vector<Activity> names_;
  std::unordered_map<Activity, std::size_t> index_;
};

/// A bag of traces. Multiplicities are always >= 1.
class EventLog {
 public:
  EventLog() = default;

  void add(Trace trace, std::uint64_t count = 1);

  const std::map<Trace, std::uint64_t>& traces() const noexcept { return traces_; }
  const std::set<Activity>& activities() const noexcept { return activities_; }
  Alphabet alphabet() const { return Alphabet::canonical(activities_); }

  std::uint64_t multiplicity(const Trace& t) const;
  /// Number of trace instances (sum of multiplicities).
  std::uint64_t total() const noexcept { return total_; }
  std::size_t variants() const noexcept { return traces_.size(); }
  bool empty() const noexcept { return traces_.empty(); }

  bool operator==(const EventLog& other) const { return traces_ == other.traces_; }

 private:
  std::map<Trace, std::uint64_t> traces_;
  std::set<Activity> activities_;
  std::uint64_t total_ = 0;
};

/// `count;a b c` per line, `#` comments, blank lines ignored. Count defaults to 1.
EventLog parse_trace_log(std::string_view text);
std::string serialize_trace_log(const EventLog& log);
EventLog read_trace_log(const std::filesystem::path& path);
void write_trace_log(const std::filesystem::path& path, const EventLog& log);

/// Reads the `concept:name` of every event; all other attributes are ignored.
EventLog parse_xes(std::istream& in);
EventLog read_xes(const std::filesystem::path& path);

using ParikhVector = std::vector<std::int64_t>;

ParikhVector parikh(const Trace& trace, const Alphabet& alphabet);

/// Log in which every trace is wrapped as <start> . trace . <end>.
struct UseLog {
  EventLog log;
  Activity start;
  Activity end;

  /// Canonical alphabet with `start` first and `end` last.
  Alphabet alphabet() const { return Alphabet::canonical(log.activities(), start, end); }
};

UseLog use_transform(const EventLog& log);
bool is_use_log(const EventLog& log, const Activity& start, const Activity& end);

/// Frequency-annotated prefix-closure stored as a trie. Node 0 is the empty
/// sequence; every other node is the one-step extension of its parent.
class PrefixClosure {
 public:
  struct Node {
    std::size_t parent = 0;
    std::uint32_t symbol = 0;  // index into alphabet(); meaningless for the root
    std::uint32_t depth = 0;
    std::uint64_t frequency = 0;  // closure frequency
    std::uint64_t terminal = 0;   // multiplicity of this exact sequence in the source log
    std::map<std::uint32_t, std::size_t> children;
  };

  static constexpr std::size_t root = 0;

  PrefixClosure(const EventLog& log, Alphabet alphabet,
                std::optional<Activity> start = std::nullopt,
                std::optional<Activity> end = std::nullopt);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const std::optional<Activity>& start() const noexcept { return start_; }
  const std::optional<Activity>& end() const noexcept { return end_; }

  std::size_t size() const noexcept { return nodes_.size(); }
  const Node& node(std::size_t id) const { return nodes_.at(id); }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }

  Trace sequence(std::size_t id) const;
  std::optional<std::size_t> find(const Trace& t) const;
  /// Closure frequency of `t`, 0 when `t` is not a member.
  std::uint64_t frequency(const Trace& t) const;

  /// Node ids ordered by length, then lexicographically in alphabet order.
  std::vector<std::size_t> canonical_order() const;
  std::map<Trace, std::uint64_t> entries() const;

 private:
  Alphabet alphabet_;
  std::optional<Activity> start_;
  std::optional<Activity> end_;
  std::vector<Node> nodes_;
};

PrefixClosure prefix_closure(const EventLog& log);
PrefixClosure prefix_closure(const UseLog& log);

std::string to_string(const Trace& t);

}  // namespace ilpminer
