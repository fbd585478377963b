#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ilpminer/event_log.hpp"

namespace ilpminer {

/// Token count per place, indexed like PetriNet::place().
using Marking = std::vector<std::uint32_t>;

/// Labeled place/transition net. Transitions without a label are silent.
class PetriNet {
 public:
  struct Transition {
    std::string id;
    std::optional<Activity> label;

    bool silent() const noexcept { return !label.has_value(); }
  };

  /// Node ids are unique across places and transitions.
  std::size_t add_place(std::string id);
  std::size_t add_transition(std::string id, std::optional<Activity> label = std::nullopt);
  void add_input_arc(std::size_t place, std::size_t transition);
  void add_output_arc(std::size_t transition, std::size_t place);

  std::size_t place_count() const noexcept { return places_.size(); }
  std::size_t transition_count() const noexcept { return transitions_.size(); }
  std::size_t arc_count() const;
  const std::string& place(std::size_t p) const { return places_.at(p); }
  const Transition& transition(std::size_t t) const { return transitions_.at(t); }

  /// Input / output places of a transition.
  const std::set<std::size_t>& preset(std::size_t t) const { return pre_.at(t); }
  const std::set<std::size_t>& postset(std::size_t t) const { return post_.at(t); }
  /// Transitions producing into / consuming from a place.
  std::set<std::size_t> producers(std::size_t p) const;
  std::set<std::size_t> consumers(std::size_t p) const;

  std::optional<std::size_t> find_place(const std::string& id) const;
  std::optional<std::size_t> find_transition(const std::string& id) const;
  std::vector<std::size_t> transitions_labeled(const Activity& a) const;
  std::set<Activity> labels() const;

  Marking empty_marking() const { return Marking(places_.size(), 0); }

 private:
  std::vector<std::string> places_;
  std::vector<Transition> transitions_;
  std::vector<std::set<std::size_t>> pre_;
  std::vector<std::set<std::size_t>> post_;
  std::map<std::string, bool> ids_;  // id -> is place
};

struct WorkflowNet {
  PetriNet net;
  std::size_t source = 0;
  std::size_t sink = 0;

  Marking initial_marking() const;
  Marking final_marking() const;
};

bool enabled(const PetriNet& net, const Marking& m, std::size_t t);
/// Throws Error when `t` is not enabled.
Marking fire(const PetriNet& net, const Marking& m, std::size_t t);

struct ReplayResult {
  bool completed = false;  // every label fired
  /// Index of the label that could not fire; trace.size() when all labels
  /// fired but the final marking was not reached.
  std::optional<std::size_t> blocked_at;
  Marking marking;                  // marking when replay stopped
  std::vector<std::size_t> fired;   // transitions fired, silent ones included
  bool reached_final = false;       // completed and marking == [sink]

  bool ok() const noexcept { return completed && reached_final; }
};

/// Fires silent transitions until `target` is enabled, or until the marking
/// equals `goal` when no target is given. A silent step is taken only when it
/// is the unique one reaching that aim in one step, or else the unique enabled
/// silent transition. Fired transitions are appended to `fired`.
void fire_silent_towards(const PetriNet& net, Marking& m, std::optional<std::size_t> target, const Marking& goal,
                         std::vector<std::size_t>& fired);

/// Replays visible labels; silent transitions fire when they are the unique
/// enabled silent step (preferring one that enables the awaited transition).
/// Throws Error for labels with zero or several transitions.
ReplayResult replay(const WorkflowNet& wf, const Trace& trace);

struct WfNetReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::vector<std::string> off_path;  // node ids not on a source -> sink path
};

WfNetReport is_wf_net(const PetriNet& net, std::size_t source, std::size_t sink);
inline WfNetReport is_wf_net(const WorkflowNet& wf) { return is_wf_net(wf.net, wf.source, wf.sink); }

/// Per transition: the first log trace (sorted log order) whose replay fires it
/// and ends in [sink], or nullopt when no trace does.
std::map<std::size_t, std::optional<Trace>> relaxed_soundness_witnesses(const WorkflowNet& wf,
                                                                        const EventLog& log);
/// Same, for a USE log whose start/end markers are not net labels.
std::map<std::size_t, std::optional<Trace>> relaxed_soundness_witnesses(const WorkflowNet& wf,
                                                                        const UseLog& log);
bool full_witness_coverage(const std::map<std::size_t, std::optional<Trace>>& witnesses);

struct StateSpace {
  struct Edge {
    std::size_t from;
    std::size_t transition;
    std::size_t to;
  };
  bool complete = false;  // false: bound reached before exhaustion
  std::vector<Marking> markings;  // index 0 is the start marking
  std::vector<Edge> edges;
};

StateSpace explore_state_space(const PetriNet& net, const Marking& start, std::size_t bound = 100000);

enum class SoundnessVerdict { relaxed_sound, not_relaxed_sound, undecided };

/// Every transition fires on some run from [source] that can still reach [sink].
SoundnessVerdict relaxed_soundness_by_state_space(const WorkflowNet& wf, std::size_t bound = 100000);

void write_pnml(std::ostream& out, const WorkflowNet& wf, const std::string& name = "net");

struct PnmlDocument {
  PetriNet net;
  Marking initial;
  std::optional<Marking> final;
};

PnmlDocument read_pnml(std::istream& in);
PnmlDocument read_pnml_file(const std::filesystem::path& path);
/// Source = the single initially marked place; sink = the final-marking place,
/// or else the unique place without consumers.
WorkflowNet to_workflow_net(PnmlDocument doc);

/// Places as circles (initial tokens drawn as dots), transitions as boxes.
void write_dot(std::ostream& out, const WorkflowNet& wf);

}  // namespace ilpminer
