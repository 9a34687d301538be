#pragma once

#include <string>
#include <vector>

#include "instar/engine.hpp"

namespace instar {

/// Event trace file (.evt): one "<step> <agent> <ground-formula>" per line,
/// '%' comments. Returns one event set per step, index 0 upward; steps with
/// no lines come back empty.
std::vector<EventSet> parse_trace_text(const std::string& text,
                                       const std::string& file = "");
std::vector<EventSet> load_trace(const std::string& path);

/// Initial state file (.state): one constrained formula per line, optional
/// trailing '.', '%' comments.
StateOfAffairs parse_state_text(const std::string& text, const std::string& file = "");
StateOfAffairs load_state(const std::string& path);

/// Record files (.jsonl): a header object followed by one record per line.
std::string record_file_header();
std::string record_json_line(const TransitionRecord& record);
std::string render_record_file(const std::vector<TransitionRecord>& records);

/// Extracts the per-step input event sets back out of a record file.
std::vector<EventSet> events_from_record_file(const std::string& text);

/// Input to the single-step driver: current state plus the step's events.
struct StepRequest {
  int step = 0;
  StateOfAffairs state;
  EventSet events;
};
StepRequest parse_step_request(const std::string& json_text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace instar
