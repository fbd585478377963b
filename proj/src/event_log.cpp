#include "ilpminer/event_log.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "ilpminer/error.hpp"

namespace ilpminer {

Alphabet::Alphabet(std::vector<Activity> ordered) : names_(std::move(ordered)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second) {
      throw Error("duplicate activity in alphabet: " + names_[i]);
    }
  }
}

Alphabet Alphabet::canonical(const std::set<Activity>& names, const std::optional<Activity>& start,
                             const std::optional<Activity>& end) {
  std::vector<Activity> ordered;
  ordered.reserve(names.size() + 2);
  if (start) ordered.push_back(*start);
  for (const auto& n : names) {
    if ((start && n == *start) || (end && n == *end)) continue;
    ordered.push_back(n);
  }
  if (end) ordered.push_back(*end);
  return Alphabet(std::move(ordered));
}

std::optional<std::size_t> Alphabet::find(const Activity& a) const {
  auto it = index_.find(a);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Alphabet::index_of(const Activity& a) const {
  auto it = index_.find(a);
  if (it == index_.end()) throw Error("activity outside alphabet: " + a);
  return it->second;
}

void EventLog::add(Trace trace, std::uint64_t count) {
  if (count == 0) throw Error("trace multiplicity must be positive");
  for (const auto& a : trace) {
    if (a.empty()) throw Error("empty activity name");
    activities_.insert(a);
  }
  traces_[std::move(trace)] += count;
  total_ += count;
}

std::uint64_t EventLog::multiplicity(const Trace& t) const {
  auto it = traces_.find(t);
  return it == traces_.end() ? 0 : it->second;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Trace split_activities(std::string_view body, std::size_t line) {
  Trace trace;
  body = trim(body);
  if (body.empty()) return trace;
  std::size_t pos = 0;
  while (true) {
    const auto next = body.find(' ', pos);
    const auto token = body.substr(pos, next == std::string_view::npos ? next : next - pos);
    if (token.empty()) throw ParseError("empty activity token", line);
    if (token.find_first_of(";\t") != std::string_view::npos) {
      throw ParseError("invalid activity token '" + std::string(token) + "'", line);
    }
    trace.emplace_back(token);
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return trace;
}

}  // namespace

EventLog parse_trace_log(std::string_view text) {
  EventLog log;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    std::uint64_t count = 1;
    std::string_view body = line;
    if (const auto semi = line.find(';'); semi != std::string_view::npos) {
      const auto count_text = trim(line.substr(0, semi));
      const auto* first = count_text.data();
      const auto* last = first + count_text.size();
      auto [ptr, ec] = std::from_chars(first, last, count);
      if (count_text.empty() || ec != std::errc() || ptr != last || count == 0) {
        throw ParseError("malformed count '" + std::string(count_text) + "'", line_no);
      }
      body = line.substr(semi + 1);
    }
    log.add(split_activities(body, line_no), count);
  }
  return log;
}

std::string serialize_trace_log(const EventLog& log) {
  std::string out;
  for (const auto& [trace, count] : log.traces()) {
    out += std::to_string(count);
    out += ';';
    for (std::size_t i = 0; i < trace.size(); ++i) {
      if (i) out += ' ';
      out += trace[i];
    }
    out += '\n';
  }
  return out;
}

EventLog read_trace_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace_log(buf.str());
}

void write_trace_log(const std::filesystem::path& path, const EventLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize_trace_log(log);
}

EventLog parse_xes(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree doc;
  try {
    pt::read_xml(in, doc);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("malformed XES: " + std::string(e.message()), e.line());
  }
  const auto root = doc.get_child_optional("log");
  if (!root) throw ParseError("XES document has no <log> element");

  EventLog log;
  std::size_t trace_index = 0;
  for (const auto& [tag, trace_node] : *root) {
    if (tag != "trace") continue;
    Trace trace;
    std::size_t event_index = 0;
    for (const auto& [etag, event_node] : trace_node) {
      if (etag != "event") continue;
      std::optional<std::string> name;
      for (const auto& [atag, attr] : event_node) {
        if (atag == "<xmlattr>") continue;
        if (attr.get<std::string>("<xmlattr>.key", "") == "concept:name") {
          if (auto v = attr.get_optional<std::string>("<xmlattr>.value")) name = *v;
          break;
        }
      }
      if (!name || name->empty()) {
        throw ParseError("event " + std::to_string(event_index) + " of trace index " +
                         std::to_string(trace_index) + " lacks concept:name");
      }
      trace.push_back(*name);
      ++event_index;
    }
    log.add(std::move(trace));
    ++trace_index;
  }
  return log;
}

EventLog read_xes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return parse_xes(in);
}

ParikhVector parikh(const Trace& trace, const Alphabet& alphabet) {
  ParikhVector p(alphabet.size(), 0);
  for (const auto& a : trace) ++p[alphabet.index_of(a)];
  return p;
}

namespace {

Activity fresh_name(std::string base, const std::set<Activity>& taken) {
  while (taken.count(base)) base += '\'';
  return base;
}

}  // namespace

UseLog use_transform(const EventLog& log) {
  if (log.empty()) throw Error("cannot USE-transform an empty log");
  UseLog out;
  out.start = fresh_name("__start__", log.activities());
  out.end = fresh_name("__end__", log.activities());
  for (const auto& [trace, count] : log.traces()) {
    Trace wrapped;
    wrapped.reserve(trace.size() + 2);
    wrapped.push_back(out.start);
    wrapped.insert(wrapped.end(), trace.begin(), trace.end());
    wrapped.push_back(out.end);
    out.log.add(std::move(wrapped), count);
  }
  return out;
}

bool is_use_log(const EventLog& log, const Activity& start, const Activity& end) {
  if (start == end) return false;
  for (const auto& [trace, count] : log.traces()) {
    if (trace.size() < 2 || trace.front() != start || trace.back() != end) return false;
    if (std::count(trace.begin(), trace.end(), start) != 1) return false;
    if (std::count(trace.begin(), trace.end(), end) != 1) return false;
  }
  return true;
}

PrefixClosure::PrefixClosure(const EventLog& log, Alphabet alphabet, std::optional<Activity> start,
                             std::optional<Activity> end)
    : alphabet_(std::move(alphabet)), start_(std::move(start)), end_(std::move(end)) {
  nodes_.emplace_back();
  for (const auto& [trace, count] : log.traces()) {
    std::size_t cur = root;
    nodes_[cur].frequency += count;
    for (const auto& a : trace) {
      const auto sym = static_cast<std::uint32_t>(alphabet_.index_of(a));
      auto it = nodes_[cur].children.find(sym);
      std::size_t next;
      if (it == nodes_[cur].children.end()) {
        next = nodes_.size();
        Node n;
        n.parent = cur;
        n.symbol = sym;
        n.depth = nodes_[cur].depth + 1;
        nodes_[cur].children.emplace(sym, next);
        nodes_.push_back(std::move(n));
      } else {
        next = it->second;
      }
      cur = next;
      nodes_[cur].frequency += count;
    }
    nodes_[cur].terminal += count;
  }
}

Trace PrefixClosure::sequence(std::size_t id) const {
  Trace t(nodes_.at(id).depth);
  for (std::size_t cur = id; cur != root; cur = nodes_[cur].parent) {
    t[nodes_[cur].depth - 1] = alphabet_[nodes_[cur].symbol];
  }
  return t;
}

std::optional<std::size_t> PrefixClosure::find(const Trace& t) const {
  std::size_t cur = root;
  for (const auto& a : t) {
    const auto sym = alphabet_.find(a);
    if (!sym) return std::nullopt;
    auto it = nodes_[cur].children.find(static_cast<std::uint32_t>(*sym));
    if (it == nodes_[cur].children.end()) return std::nullopt;
    cur = it->second;
  }
  return cur;
}

std::uint64_t PrefixClosure::frequency(const Trace& t) const {
  const auto id = find(t);
  return id ? nodes_[*id].frequency : 0;
}

std::vector<std::size_t> PrefixClosure::canonical_order() const {
  std::vector<std::size_t> order;
  order.reserve(nodes_.size());
  std::deque<std::size_t> queue{root};
  while (!queue.empty()) {
    const auto id = queue.front();
    queue.pop_front();
    order.push_back(id);
    for (const auto& [sym, child] : nodes_[id].children) queue.push_back(child);
  }
  return order;
}

std::map<Trace, std::uint64_t> PrefixClosure::entries() const {
  std::map<Trace, std::uint64_t> out;
  for (std::size_t id = 0; id < nodes_.size(); ++id) out.emplace(sequence(id), nodes_[id].frequency);
  return out;
}

PrefixClosure prefix_closure(const EventLog& log) {
  if (log.empty()) throw Error("prefix-closure of an empty log");
  return PrefixClosure(log, log.alphabet());
}

PrefixClosure prefix_closure(const UseLog& log) {
  if (log.log.empty()) throw Error("prefix-closure of an empty log");
  return PrefixClosure(log.log, log.alphabet(), log.start, log.end);
}

std::string to_string(const Trace& t) {
  std::string out = "<";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ',';
    out += t[i];
  }
  out += '>';
  return out;
}

}  // namespace ilpminer
