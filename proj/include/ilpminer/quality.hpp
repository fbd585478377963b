#pragma once

#include <cstdint>
#include <string>

#include "ilpminer/event_log.hpp"
#include "ilpminer/workflow_net.hpp"

namespace ilpminer {

struct FitnessCounts {
  std::uint64_t produced = 0;
  std::uint64_t consumed = 0;
  std::uint64_t missing = 0;
  std::uint64_t remaining = 0;
  std::uint64_t traces = 0;
  std::uint64_t fitting_traces = 0;  // replayed without missing or remaining tokens
};

struct PrecisionCounts {
  std::uint64_t allowed = 0;   // frequency-weighted enabled labels over replayed prefixes
  std::uint64_t escaping = 0;  // of which never observed in the log
  std::uint64_t states = 0;    // replayed prefixes
};

struct QualityReport {
  double fitness = 0.0;
  double precision = 0.0;
  FitnessCounts fitness_counts;
  PrecisionCounts precision_counts;
};

/// Token replay with missing-token insertion, weighted by trace multiplicity:
/// 1/2 (1 - missing/consumed) + 1/2 (1 - remaining/produced). A term whose
/// denominator is zero contributes 0. Throws Error naming labels the net lacks.
double token_fitness(const WorkflowNet& wf, const EventLog& log, FitnessCounts* counts = nullptr);

/// 1 - sum_s w(s) |allowed(s) \ used(s)| / sum_s w(s) |allowed(s)| over log
/// prefixes s that replay without missing tokens; w is the prefix frequency.
double escaping_edges_precision(const WorkflowNet& wf, const EventLog& log, PrecisionCounts* counts = nullptr);

QualityReport evaluate(const WorkflowNet& wf, const EventLog& log);

/// `key=value` lines.
std::string to_key_value(const QualityReport& report);

/// Applies one random manipulation (head, tail or body removal, or a swap of
/// two events) to ceil(level * instances) uniformly chosen trace instances.
/// Traces shorter than two events are left untouched.
EventLog inject_noise(const EventLog& log, double level, std::uint64_t seed);

/// Random runs from [source] to [sink], choosing uniformly among enabled
/// transitions. Silent transitions are not recorded.
EventLog simulate(const WorkflowNet& wf, std::uint64_t traces, std::uint64_t seed, std::size_t max_steps = 10000);

}  // namespace ilpminer
