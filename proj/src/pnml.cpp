#include <algorithm>
#include <fstream>
#include <ostream>
#include <tuple>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "ilpminer/error.hpp"
#include "ilpminer/workflow_net.hpp"
#include "text_util.hpp"

namespace ilpminer {

namespace {

constexpr const char* invisible = "$invisible$";

}  // namespace

void write_pnml(std::ostream& out, const WorkflowNet& wf, const std::string& name) {
  const auto& net = wf.net;
  std::vector<std::size_t> places(net.place_count());
  std::vector<std::size_t> transitions(net.transition_count());
  for (std::size_t i = 0; i < places.size(); ++i) places[i] = i;
  for (std::size_t i = 0; i < transitions.size(); ++i) transitions[i] = i;
  std::sort(places.begin(), places.end(), [&](auto a, auto b) { return net.place(a) < net.place(b); });
  std::sort(transitions.begin(), transitions.end(),
            [&](auto a, auto b) { return net.transition(a).id < net.transition(b).id; });

  std::vector<std::pair<std::string, std::string>> arcs;
  for (std::size_t t = 0; t < net.transition_count(); ++t) {
    for (const auto p : net.preset(t)) arcs.emplace_back(net.place(p), net.transition(t).id);
    for (const auto p : net.postset(t)) arcs.emplace_back(net.transition(t).id, net.place(p));
  }
  std::sort(arcs.begin(), arcs.end());

  const auto initial = wf.initial_marking();
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<pnml>\n";
  out << "  <net id=\"net1\" type=\"http://www.pnml.org/version-2009/grammar/pnmlcoremodel\">\n";
  out << "    <name><text>" << xml_escape(name) << "</text></name>\n";
  out << "    <page id=\"page1\">\n";
  for (const auto p : places) {
    const auto id = xml_escape(net.place(p));
    out << "      <place id=\"" << id << "\">\n        <name><text>" << id << "</text></name>\n";
    if (initial[p] > 0) out << "        <initialMarking><text>" << initial[p] << "</text></initialMarking>\n";
    out << "      </place>\n";
  }
  for (const auto t : transitions) {
    const auto& tr = net.transition(t);
    const auto id = xml_escape(tr.id);
    out << "      <transition id=\"" << id << "\">\n";
    out << "        <name><text>" << xml_escape(tr.label ? *tr.label : tr.id) << "</text></name>\n";
    if (tr.silent()) {
      out << "        <toolspecific tool=\"ProM\" version=\"6.4\" activity=\"" << invisible << "\" localNodeID=\""
          << id << "\"/>\n";
    }
    out << "      </transition>\n";
  }
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    out << "      <arc id=\"arc" << i + 1 << "\" source=\"" << xml_escape(arcs[i].first) << "\" target=\""
        << xml_escape(arcs[i].second) << "\"/>\n";
  }
  out << "    </page>\n";
  out << "    <finalmarkings>\n      <marking>\n";
  for (const auto p : places) {
    out << "        <place idref=\"" << xml_escape(net.place(p)) << "\"><text>" << (p == wf.sink ? 1 : 0)
        << "</text></place>\n";
  }
  out << "      </marking>\n    </finalmarkings>\n";
  out << "  </net>\n</pnml>\n";
}

namespace {

namespace pt = boost::property_tree;

struct RawNet {
  std::vector<std::tuple<std::string, std::uint32_t>> places;
  std::vector<std::tuple<std::string, std::optional<Activity>>> transitions;
  std::vector<std::pair<std::string, std::string>> arcs;
};

std::uint32_t parse_count(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const auto v = std::stoul(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return static_cast<std::uint32_t>(v);
  } catch (const std::exception&) {
    throw ParseError("invalid token count '" + text + "' in " + where);
  }
}

std::string trimmed(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

void collect(const pt::ptree& node, RawNet& raw) {
  for (const auto& [tag, child] : node) {
    if (tag == "page") {
      collect(child, raw);
    } else if (tag == "place") {
      const auto id = child.get<std::string>("<xmlattr>.id", "");
      if (id.empty()) throw ParseError("PNML place without id");
      std::uint32_t tokens = 0;
      if (auto text = child.get_optional<std::string>("initialMarking.text")) {
        tokens = parse_count(trimmed(*text), "place " + id);
      }
      raw.places.emplace_back(id, tokens);
    } else if (tag == "transition") {
      const auto id = child.get<std::string>("<xmlattr>.id", "");
      if (id.empty()) throw ParseError("PNML transition without id");
      bool silent = false;
      for (const auto& [ttag, tchild] : child) {
        if (ttag == "toolspecific" && tchild.get<std::string>("<xmlattr>.activity", "") == invisible) silent = true;
      }
      std::optional<Activity> label;
      if (!silent) label = trimmed(child.get<std::string>("name.text", id));
      raw.transitions.emplace_back(id, label);
    } else if (tag == "arc") {
      const auto source = child.get<std::string>("<xmlattr>.source", "");
      const auto target = child.get<std::string>("<xmlattr>.target", "");
      if (source.empty() || target.empty()) throw ParseError("PNML arc without source or target");
      raw.arcs.emplace_back(source, target);
    }
  }
}

}  // namespace

PnmlDocument read_pnml(std::istream& in) {
  pt::ptree doc;
  try {
    pt::read_xml(in, doc);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("malformed PNML: " + std::string(e.message()), e.line());
  }
  const auto net_node = doc.get_child_optional("pnml.net");
  if (!net_node) throw ParseError("PNML document has no <net> element");

  RawNet raw;
  collect(*net_node, raw);
  PnmlDocument out;
  for (const auto& [id, tokens] : raw.places) {
    out.net.add_place(id);
    out.initial.push_back(tokens);
  }
  for (const auto& [id, label] : raw.transitions) out.net.add_transition(id, label);
  for (const auto& [source, target] : raw.arcs) {
    const auto sp = out.net.find_place(source);
    const auto tt = out.net.find_transition(target);
    if (sp && tt) {
      out.net.add_input_arc(*sp, *tt);
      continue;
    }
    const auto st = out.net.find_transition(source);
    const auto tp = out.net.find_place(target);
    if (st && tp) {
      out.net.add_output_arc(*st, *tp);
      continue;
    }
    throw ParseError("PNML arc " + source + " -> " + target + " does not connect a place and a transition");
  }

  if (const auto finals = net_node->get_child_optional("finalmarkings")) {
    for (const auto& [tag, marking] : *finals) {
      if (tag != "marking") continue;
      Marking m = out.net.empty_marking();
      for (const auto& [ptag, place] : marking) {
        if (ptag != "place") continue;
        const auto ref = place.get<std::string>("<xmlattr>.idref", "");
        const auto p = out.net.find_place(ref);
        if (!p) throw ParseError("final marking refers to unknown place " + ref);
        m[*p] = parse_count(trimmed(place.get<std::string>("text", "0")), "final marking");
      }
      out.final = std::move(m);
      break;
    }
  }
  return out;
}

PnmlDocument read_pnml_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_pnml(in);
}

WorkflowNet to_workflow_net(PnmlDocument doc) {
  auto single = [](const Marking& m) -> std::optional<std::size_t> {
    std::optional<std::size_t> found;
    for (std::size_t p = 0; p < m.size(); ++p) {
      if (m[p] == 0) continue;
      if (m[p] != 1 || found) return std::nullopt;
      found = p;
    }
    return found;
  };
  const auto source = single(doc.initial);
  if (!source) throw Error("PNML initial marking is not a single token on one place");

  std::optional<std::size_t> sink;
  if (doc.final) {
    sink = single(*doc.final);
    if (!sink) throw Error("PNML final marking is not a single token on one place");
  } else {
    for (std::size_t p = 0; p < doc.net.place_count(); ++p) {
      if (!doc.net.consumers(p).empty()) continue;
      if (sink) throw Error("PNML net has several places without outgoing arcs");
      sink = p;
    }
    if (!sink) throw Error("PNML net has no place without outgoing arcs");
  }
  WorkflowNet wf;
  wf.net = std::move(doc.net);
  wf.source = *source;
  wf.sink = *sink;
  return wf;
}

}  // namespace ilpminer
