#include "instar/trace.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "instar/parser.hpp"

namespace instar {

namespace {

std::string location(const std::string& file, int line) {
  return (file.empty() ? "input" : file) + ":" + std::to_string(line);
}

std::string trimmed(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<EventSet> parse_trace_text(const std::string& text, const std::string& file) {
  std::vector<EventSet> steps;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = trimmed(line.substr(0, line.find('%')));
    if (body.empty()) continue;

    std::istringstream fields(body);
    long step = -1;
    std::string agent;
    if (!(fields >> step >> agent) || step < 0)
      throw Error(ErrorKind::io,
                  location(file, line_no) + ": expected '<step> <agent> <formula>'");
    std::string formula_text;
    std::getline(fields, formula_text);
    formula_text = trimmed(formula_text);
    std::string error;
    auto formula = parse_formula_text(formula_text, &error);
    if (!formula)
      throw Error(ErrorKind::io, location(file, line_no) + ": " +
                                     (error.empty() ? "bad formula" : error));
    if (!formula->ground())
      throw Error(ErrorKind::non_ground_event,
                  location(file, line_no) + ": " + formula->str());
    if (steps.size() <= static_cast<size_t>(step))
      steps.resize(static_cast<size_t>(step) + 1);
    steps[static_cast<size_t>(step)].insert(std::move(*formula), agent);
  }
  return steps;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  out << content;
}

std::vector<EventSet> load_trace(const std::string& path) {
  return parse_trace_text(read_file(path), path);
}

StateOfAffairs parse_state_text(const std::string& text, const std::string& file) {
  std::vector<ConstrainedFormula> entries;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = trimmed(line.substr(0, line.find('%')));
    if (body.empty()) continue;
    if (body.back() == '.') body.pop_back();
    std::string error;
    auto cf = parse_constrained_formula_text(body, &error);
    if (!cf)
      throw Error(ErrorKind::io, location(file, line_no) + ": " +
                                     (error.empty() ? "bad formula" : error));
    entries.push_back(std::move(*cf));
  }
  return StateOfAffairs(std::move(entries));
}

StateOfAffairs load_state(const std::string& path) {
  return parse_state_text(read_file(path), path);
}

namespace {

nlohmann::json events_json(const std::vector<Event>& events) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : events)
    out.push_back({{"agent", e.agent}, {"formula", e.formula.str()}});
  return out;
}

nlohmann::json state_json(const StateOfAffairs& state) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& cf : state.entries()) out.push_back(cf.str());
  return out;
}

}  // namespace

std::string record_file_header() {
  return R"({"format":"instar-records","version":1})";
}

std::string record_json_line(const TransitionRecord& record) {
  nlohmann::json j;
  j["step"] = record.step;
  j["state_before"] = state_json(record.state_before);
  j["events"] = events_json(record.events);
  j["forced_events"] = events_json(record.forced_events);
  nlohmann::json fired = nlohmann::json::array();
  for (const auto& f : record.fired) {
    nlohmann::json subst = nlohmann::json::object();
    for (const auto& [var, term] : f.sigma.bindings()) subst[var] = term.str();
    fired.push_back({{"rule_id", f.rule_id.str()}, {"substitution", std::move(subst)}});
  }
  j["fired"] = std::move(fired);
  nlohmann::json ignored = nlohmann::json::array();
  for (const auto& id : record.ignored) ignored.push_back(id.str());
  j["ignored"] = std::move(ignored);
  nlohmann::json prevented = nlohmann::json::array();
  for (const auto& id : record.prevented) prevented.push_back(id.str());
  j["prevented"] = std::move(prevented);
  j["state_after"] = state_json(record.state_after);
  return j.dump();
}

std::string render_record_file(const std::vector<TransitionRecord>& records) {
  std::ostringstream os;
  os << record_file_header() << '\n';
  for (const auto& r : records) os << record_json_line(r) << '\n';
  return os.str();
}

namespace {

EventSet events_from_json(const nlohmann::json& array, const char* what) {
  EventSet out;
  for (const auto& e : array) {
    std::string error;
    auto formula = parse_formula_text(e.at("formula").get<std::string>(), &error);
    if (!formula)
      throw Error(ErrorKind::bad_record, std::string(what) + ": " + error);
    out.insert(std::move(*formula), e.at("agent").get<std::string>());
  }
  return out;
}

StateOfAffairs state_from_json(const nlohmann::json& array, const char* what) {
  std::vector<ConstrainedFormula> entries;
  for (const auto& s : array) {
    std::string error;
    auto cf = parse_constrained_formula_text(s.get<std::string>(), &error);
    if (!cf) throw Error(ErrorKind::bad_record, std::string(what) + ": " + error);
    entries.push_back(std::move(*cf));
  }
  return StateOfAffairs(std::move(entries));
}

}  // namespace

std::vector<EventSet> events_from_record_file(const std::string& text) {
  std::vector<EventSet> steps;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (trimmed(line).empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorKind::bad_record, "record file line is not JSON");
    if (first && j.contains("format")) {
      first = false;
      continue;
    }
    first = false;
    size_t step = j.at("step").get<size_t>();
    if (steps.size() <= step) steps.resize(step + 1);
    steps[step] = events_from_json(j.at("events"), "events");
  }
  return steps;
}

StepRequest parse_step_request(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::bad_record, "step input is not JSON");
  try {
    StepRequest request;
    request.step = j.value("step", 0);
    request.state = state_from_json(j.at("state"), "state");
    request.events = events_from_json(j.value("events", nlohmann::json::array()), "events");
    return request;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::bad_record, e.what());
  }
}

}  // namespace instar
