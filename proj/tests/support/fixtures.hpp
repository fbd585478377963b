#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ilpminer/event_log.hpp"

namespace ilpminer::testing {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(ILPMINER_FIXTURES) / name; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline EventLog l1() { return read_trace_log(fixture("l1.log")); }
inline EventLog l1_prime() { return read_trace_log(fixture("l1_prime.log")); }

inline Trace tr(const std::string& spaced) {
  Trace t;
  std::istringstream in(spaced);
  for (std::string a; in >> a;) t.push_back(a);
  return t;
}

}  // namespace ilpminer::testing
