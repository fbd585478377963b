#include "ilpminer/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ilpminer/discovery.hpp"
#include "ilpminer/error.hpp"
#include "ilpminer/quality.hpp"

namespace fs = std::filesystem;

namespace ilpminer::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void report(std::ostream& err, const char* kind, const std::string& message) {
  err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
}

// Output paths are checked up front so that a long run does not fail at the end.
void require_writable_parent(const std::string& path) {
  if (path.empty()) return;
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) throw UsageError("output directory does not exist: " + parent.string());
}

EventLog load_log(const std::string& path, bool xes) { return xes ? read_xes(path) : read_trace_log(path); }

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !(v >= 0.0 && v <= 1.0)) {
      throw UsageError(flag + ": expected comma-separated numbers in [0,1], got '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

std::string file_stem(const Activity& a) {
  std::string s;
  for (const char ch : a) s += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
  return s;
}

struct DiscoverArgs {
  std::string log;
  bool xes = false;
  double alpha = 0.75;
  bool no_filter = false;
  double threshold = 0.9;
  std::string out_pnml;
  std::string out_dot;
  std::string seg_dot;
  std::string causal_dot;
  std::string lp_dir;
  bool sequential = false;
};

int do_discover(const DiscoverArgs& a, std::ostream& out, std::ostream& err) {
  for (const auto* p : {&a.out_pnml, &a.out_dot, &a.seg_dot, &a.causal_dot}) require_writable_parent(*p);
  if (!a.lp_dir.empty()) {
    if (fs::exists(a.lp_dir) && !fs::is_directory(a.lp_dir)) throw UsageError("--emit-lp: not a directory: " + a.lp_dir);
    require_writable_parent(fs::path(a.lp_dir).lexically_normal().string());
  }

  const auto log = load_log(a.log, a.xes);
  DiscoveryOptions options;
  if (!a.no_filter) options.alpha = a.alpha;
  options.dependency_threshold = a.threshold;
  options.parallel_pairs = !a.sequential;
  const auto result = discover_detailed(log, options);

  {
    auto f = open_output(a.out_pnml);
    write_pnml(f, result.net, "discovered");
  }
  if (!a.out_dot.empty()) {
    auto f = open_output(a.out_dot);
    write_dot(f, result.net);
  }
  if (!a.causal_dot.empty()) {
    auto f = open_output(a.causal_dot);
    write_dot(f, result.causal);
  }
  if (!a.seg_dot.empty()) {
    auto f = open_output(a.seg_dot);
    if (result.encoding_graph) {
      write_dot(f, *result.encoding_graph, result.kept);
    } else {
      write_dot(f, SequenceEncodingGraph(prefix_closure(result.use_log)));
    }
  }
  if (!a.lp_dir.empty()) {
    fs::create_directories(a.lp_dir);
    for (const auto& p : result.pairs) {
      auto f = open_output((fs::path(a.lp_dir) / (file_stem(p.pair.first) + "__" + file_stem(p.pair.second) + ".lp")).string());
      write_lp(f, p.instance);
    }
  }
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  out << "places=" << result.places.size() << '\n';
  out << "causal_pairs=" << result.pairs.size() << '\n';
  out << "transitions=" << result.net.net.transition_count() << '\n';
  return exit_ok;
}

int do_evaluate(const std::string& log_path, bool xes, const std::string& pnml, std::ostream& out) {
  const auto log = load_log(log_path, xes);
  const auto net = to_workflow_net(read_pnml_file(pnml));
  out << to_key_value(evaluate(net, log));
  return exit_ok;
}

int do_noise(const std::string& log_path, bool xes, double level, std::uint64_t seed, const std::string& target) {
  require_writable_parent(target);
  const auto log = load_log(log_path, xes);
  write_trace_log(target, inject_noise(log, level, seed));
  return exit_ok;
}

int do_sweep(const std::string& log_path, bool xes, const std::string& alphas_text, const std::string& noise_text,
             std::uint64_t seed, bool sequential, std::ostream& out) {
  const auto alphas = parse_list(alphas_text, "--alphas");
  const auto levels = parse_list(noise_text, "--noise-levels");
  const auto ground_truth = load_log(log_path, xes);
  out << "noise,alpha,fitness,precision,wall_ms\n";
  out << std::fixed;
  for (const auto level : levels) {
    const auto noisy = inject_noise(ground_truth, level, seed);
    for (const auto alpha : alphas) {
      DiscoveryOptions options;
      options.alpha = alpha;
      options.parallel_pairs = !sequential;
      const auto begin = std::chrono::steady_clock::now();
      const auto net = discover(noisy, options);
      const auto wall = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - begin).count();
      // Scored against the log before noise was injected.
      const auto q = evaluate(net, ground_truth);
      out << std::setprecision(4) << level << ',' << alpha << ',' << std::setprecision(6) << q.fitness << ','
          << q.precision << ',' << std::setprecision(1) << wall << '\n';
    }
  }
  return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Region-based process discovery with sequence encoding filtering", "ilpminer"};
  app.require_subcommand(1);

  DiscoverArgs d;
  auto* discover_cmd = app.add_subcommand("discover", "Discover a workflow net from an event log");
  discover_cmd->add_option("--log", d.log, "Event log (trace format, or XES with --xes)")->required()->check(CLI::ExistingFile);
  discover_cmd->add_flag("--xes", d.xes, "Read --log as XES");
  auto* alpha_opt = discover_cmd->add_option("--alpha", d.alpha, "Filter threshold")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  auto* nofilter_opt = discover_cmd->add_flag("--no-filter", d.no_filter, "Disable sequence encoding filtering");
  alpha_opt->excludes(nofilter_opt);
  discover_cmd->add_option("--dependency-threshold", d.threshold, "Causal dependency threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  discover_cmd->add_option("--out-pnml", d.out_pnml, "PNML output")->required();
  discover_cmd->add_option("--out-dot", d.out_dot, "DOT rendering of the net");
  discover_cmd->add_option("--emit-seg-dot", d.seg_dot, "DOT dump of the sequence encoding graph");
  discover_cmd->add_option("--emit-causal-dot", d.causal_dot, "DOT dump of the causal graph");
  discover_cmd->add_option("--emit-lp", d.lp_dir, "Directory receiving one LP file per causal pair");
  discover_cmd->add_flag("--sequential", d.sequential, "Solve causal pairs on one thread");

  std::string log_path, pnml_path, out_path, xes_path;
  bool xes = false;
  bool sequential = false;
  double level = 0;
  std::uint64_t seed = 1;
  std::string alphas = "0,0.25,0.5,0.75,1";
  std::string levels = "0,0.05,0.1,0.2,0.5";

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a PNML net against a log");
  evaluate_cmd->add_option("--log", log_path, "Event log")->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_flag("--xes", xes, "Read --log as XES");
  evaluate_cmd->add_option("--pnml", pnml_path, "Net to score")->required()->check(CLI::ExistingFile);

  auto* noise_cmd = app.add_subcommand("noise", "Inject noise into a log");
  noise_cmd->add_option("--log", log_path, "Event log")->required()->check(CLI::ExistingFile);
  noise_cmd->add_flag("--xes", xes, "Read --log as XES");
  noise_cmd->add_option("--level", level, "Fraction of trace instances to manipulate")->required()->check(CLI::Range(0.0, 1.0));
  noise_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
  noise_cmd->add_option("--out", out_path, "Output trace log")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Noise and filter-threshold grid as CSV");
  sweep_cmd->add_option("--log", log_path, "Ground-truth event log")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_flag("--xes", xes, "Read --log as XES");
  sweep_cmd->add_option("--alphas", alphas, "Comma-separated filter thresholds")->capture_default_str();
  sweep_cmd->add_option("--noise-levels", levels, "Comma-separated noise levels")->capture_default_str();
  sweep_cmd->add_option("--seed", seed, "Random seed for noise injection")->capture_default_str();
  sweep_cmd->add_flag("--sequential", sequential, "Solve causal pairs on one thread");

  auto* convert_cmd = app.add_subcommand("convert", "Convert XES to the trace format");
  convert_cmd->add_option("--xes", xes_path, "XES input")->required()->check(CLI::ExistingFile);
  convert_cmd->add_option("--out", out_path, "Output trace log")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    report(err, "usage", e.what());
    return exit_usage;
  }

  try {
    if (discover_cmd->parsed()) return do_discover(d, out, err);
    if (evaluate_cmd->parsed()) return do_evaluate(log_path, xes, pnml_path, out);
    if (noise_cmd->parsed()) return do_noise(log_path, xes, level, seed, out_path);
    if (sweep_cmd->parsed()) return do_sweep(log_path, xes, alphas, levels, seed, sequential, out);
    require_writable_parent(out_path);
    write_trace_log(out_path, read_xes(xes_path));
    return exit_ok;
  } catch (const UsageError& e) {
    report(err, "usage", e.what());
    return exit_usage;
  } catch (const std::exception& e) {
    report(err, "pipeline", e.what());
    return exit_failure;
  }
}

}  // namespace ilpminer::cli
