#include "ilpminer/region_constraints.hpp"

#include <cctype>
#include <map>
#include <ostream>

#include "ilpminer/error.hpp"

namespace ilpminer {

std::string EncodingVector::shorthand(const Alphabet& alphabet) const {
  const std::size_t n = alphabet.size();
  if (values_.size() != 2 * n + 1) throw Error("encoding vector does not match alphabet");
  std::string out = "([";
  bool first = true;
  std::optional<std::size_t> last;
  for (std::size_t a = 0; a < n; ++a) {
    const auto count = values_[1 + a];
    if (count > 0) {
      if (!first) out += ',';
      first = false;
      out += alphabet[a];
      if (count > 1) out += "^" + std::to_string(count);
    }
    // The y-part exceeds the x-part by exactly one, at the last activity.
    if (-values_[1 + n + a] - count == 1) last = a;
  }
  out += "],";
  out += last ? alphabet[*last] : std::string("⊥");
  out += ')';
  return out;
}

std::string EncodingVector::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values_[i]);
  }
  out += ')';
  return out;
}

EncodingVector sequence_encoding(const Trace& sequence, const Alphabet& alphabet) {
  const std::size_t n = alphabet.size();
  std::vector<std::int64_t> v(2 * n + 1, 0);
  v[0] = 1;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const auto a = alphabet.index_of(sequence[i]);
    if (i + 1 < sequence.size()) ++v[1 + a];
    --v[1 + n + a];
  }
  return EncodingVector(std::move(v));
}

EncodingVector sequence_encoding(const PrefixClosure& closure, std::size_t node) {
  const std::size_t n = closure.alphabet().size();
  std::vector<std::int64_t> v(2 * n + 1, 0);
  v[0] = 1;
  bool last = true;
  for (std::size_t cur = node; cur != PrefixClosure::root; cur = closure.node(cur).parent) {
    const auto a = closure.node(cur).symbol;
    if (!last) ++v[1 + a];
    --v[1 + n + a];
    last = false;
  }
  return EncodingVector(std::move(v));
}

RegionCandidate RegionCandidate::from_assignment(std::span<const std::uint8_t> assignment) {
  if (assignment.empty() || assignment.size() % 2 == 0) {
    throw Error("assignment length must be 2n+1");
  }
  const std::size_t n = (assignment.size() - 1) / 2;
  RegionCandidate r;
  r.m = assignment[0] != 0;
  r.x.assign(assignment.begin() + 1, assignment.begin() + 1 + n);
  r.y.assign(assignment.begin() + 1 + n, assignment.end());
  return r;
}

std::vector<std::uint8_t> RegionCandidate::assignment() const {
  std::vector<std::uint8_t> out;
  out.reserve(1 + x.size() + y.size());
  out.push_back(m ? 1 : 0);
  out.insert(out.end(), x.begin(), x.end());
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

namespace {

void check_retained(const PrefixClosure& closure, const RetainedSet& retained) {
  std::set<EncodingVector> present;
  for (std::size_t id = 0; id < closure.size(); ++id) present.insert(sequence_encoding(closure, id));
  for (const auto& v : retained) {
    if (!present.count(v)) throw Error("retained set contains a vector absent from the prefix-closure: " + v.to_string());
  }
}

std::int64_t evaluate(const std::vector<std::int64_t>& row, const RegionCandidate& r) {
  const std::size_t n = r.x.size();
  std::int64_t value = row[0] * (r.m ? 1 : 0);
  for (std::size_t a = 0; a < n; ++a) value += row[1 + a] * r.x[a] + row[1 + n + a] * r.y[a];
  return value;
}

void check_dimensions(const RegionCandidate& r, std::size_t n) {
  if (r.x.size() != n || r.y.size() != n) throw Error("region dimension does not match alphabet");
}

}  // namespace

ConstraintSystem build_constraint_system(const PrefixClosure& closure,
                                         const std::optional<RetainedSet>& retained, ObjectiveKind objective) {
  if (retained) check_retained(closure, *retained);

  ConstraintSystem cs;
  cs.alphabet = closure.alphabet();
  cs.start = closure.start();
  cs.end = closure.end();
  const std::size_t n = cs.alphabet.size();

  std::vector<EncodingVector> encodings(closure.size());
  std::vector<bool> kept(closure.size(), true);
  std::map<EncodingVector, std::size_t> row_of;
  for (const auto id : closure.canonical_order()) {
    encodings[id] = sequence_encoding(closure, id);
    if (id == PrefixClosure::root) continue;
    const auto& node = closure.node(id);
    kept[id] = !retained || retained->count(encodings[id]) != 0;
    if (!kept[id]) continue;
    auto [it, fresh] = row_of.emplace(encodings[id], cs.inequalities.size());
    if (fresh) cs.inequalities.push_back({encodings[id], closure.sequence(id), 0});
    cs.inequalities[it->second].weight += node.frequency;
  }

  for (const auto id : closure.canonical_order()) {
    const auto& node = closure.node(id);
    if (id == PrefixClosure::root || node.terminal == 0) continue;
    bool path_kept = true;
    for (std::size_t cur = id; cur != PrefixClosure::root; cur = closure.node(cur).parent) {
      path_kept = path_kept && kept[cur];
    }
    if (!path_kept) continue;
    std::vector<std::int64_t> row(2 * n + 1, 0);
    row[0] = 1;
    for (std::size_t a = 0; a < n; ++a) {
      row[1 + a] = -encodings[id][1 + n + a];
      row[1 + n + a] = encodings[id][1 + n + a];
    }
    cs.equalities.push_back({std::move(row), closure.sequence(id)});
  }

  cs.objective = objective_vector(closure, retained, objective);
  return cs;
}

std::vector<std::int64_t> objective_vector(const PrefixClosure& closure,
                                           const std::optional<RetainedSet>& retained, ObjectiveKind kind) {
  const std::size_t n = closure.alphabet().size();
  std::vector<std::int64_t> c(2 * n + 1, 0);
  c[0] = 1;
  for (std::size_t id = 1; id < closure.size(); ++id) {
    const auto enc = sequence_encoding(closure, id);
    if (retained && !retained->count(enc)) continue;
    const auto f = static_cast<std::int64_t>(closure.node(id).frequency);
    c[0] += f;
    for (std::size_t a = 0; a < n; ++a) {
      const auto produced = kind == ObjectiveKind::token_residency ? -enc[1 + n + a] : enc[1 + a];
      c[1 + a] += f * produced;
      c[1 + n + a] += f * enc[1 + n + a];
    }
  }
  return c;
}

IlpInstance instantiate_causal_ilp(std::shared_ptr<const ConstraintSystem> system, const Activity& a,
                                   const Activity& b) {
  if (!system) throw Error("null constraint system");
  if (system->end && a == *system->end) throw Error("causal pair source may not be the end activity");
  if (system->start && b == *system->start) throw Error("causal pair target may not be the start activity");
  const auto layout = system->layout();
  const auto ia = system->alphabet.index_of(a);
  const auto ib = system->alphabet.index_of(b);
  IlpInstance inst;
  inst.fixings = {{VariableLayout::m(), 0}, {layout.x(ia), 1}, {layout.y(ib), 1}};
  inst.pair = ActivityPair{a, b};
  inst.system = std::move(system);
  return inst;
}

RegionCheck check_region(const RegionCandidate& r, const PrefixClosure& closure) {
  check_dimensions(r, closure.alphabet().size());
  for (const auto id : closure.canonical_order()) {
    if (id == PrefixClosure::root) continue;
    const auto value = evaluate(sequence_encoding(closure, id).values(), r);
    if (value < 0) return {false, closure.sequence(id), value};
  }
  return {};
}

RegionCheck check_region(const RegionCandidate& r, const ConstraintSystem& system) {
  check_dimensions(r, system.alphabet.size());
  for (const auto& row : system.inequalities) {
    const auto value = evaluate(row.coefficients.values(), r);
    if (value < 0) return {false, row.source, value};
  }
  return {};
}

RegionCandidate trivial_causal_solution(const Alphabet& alphabet, const Activity& start,
                                        const Activity& end, const Activity& a, const Activity& b) {
  if (a == end || b == start) throw Error("pair outside the start/end domain");
  RegionCandidate r;
  r.x.assign(alphabet.size(), 0);
  r.y.assign(alphabet.size(), 0);
  r.x[alphabet.index_of(start)] = 1;
  r.y[alphabet.index_of(end)] = 1;
  for (const auto& t : {a, b}) {
    if (t == start || t == end) continue;
    r.x[alphabet.index_of(t)] = 1;
    r.y[alphabet.index_of(t)] = 1;
  }
  return r;
}

namespace {

std::string lp_name(char prefix, const Activity& a) {
  std::string out(1, prefix);
  out += '_';
  for (const char ch : a) {
    const auto u = static_cast<unsigned char>(ch);
    out += (std::isalnum(u) || ch == '_') ? ch : '_';
  }
  return out;
}

void write_terms(std::ostream& out, const std::vector<std::int64_t>& coeffs,
                 const std::vector<std::string>& names) {
  bool any = false;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const auto c = coeffs[i];
    if (c == 0) continue;
    out << (c < 0 ? (any ? " - " : "-") : (any ? " + " : ""));
    const auto mag = c < 0 ? -c : c;
    if (mag != 1) out << mag << ' ';
    out << names[i];
    any = true;
  }
  if (!any) out << "0 m";
}

}  // namespace

void write_lp(std::ostream& out, const IlpInstance& instance) {
  const auto& cs = *instance.system;
  const std::size_t n = cs.alphabet.size();
  std::vector<std::string> names{"m"};
  for (std::size_t a = 0; a < n; ++a) names.push_back(lp_name('x', cs.alphabet[a]));
  for (std::size_t a = 0; a < n; ++a) names.push_back(lp_name('y', cs.alphabet[a]));

  if (instance.pair) out << "\\ causal pair " << instance.pair->first << " -> " << instance.pair->second << '\n';
  for (std::size_t a = 0; a < n; ++a) {
    if (names[1 + a].substr(2) != cs.alphabet[a]) out << "\\ " << names[1 + a].substr(2) << " = " << cs.alphabet[a] << '\n';
  }
  out << "Minimize\n obj: ";
  write_terms(out, cs.objective, names);
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < cs.inequalities.size(); ++i) {
    out << " r" << i + 1 << ": ";
    write_terms(out, cs.inequalities[i].coefficients.values(), names);
    out << " >= 0\n";
  }
  for (std::size_t i = 0; i < cs.equalities.size(); ++i) {
    out << " e" << i + 1 << ": ";
    write_terms(out, cs.equalities[i].coefficients, names);
    out << " = 0\n";
  }
  std::vector<std::int64_t> arc(2 * n + 1, 1);
  arc[0] = 0;
  out << " arcs: ";
  write_terms(out, arc, names);
  out << " >= 1\n";
  for (const auto& f : instance.fixings) {
    out << " fix_" << names[f.variable] << ": " << names[f.variable] << " = " << int(f.value) << '\n';
  }
  out << "Binary\n";
  for (const auto& name : names) out << ' ' << name << '\n';
  out << "End\n";
}

}  // namespace ilpminer
