#pragma once

// File formats: StepPath as CSV (`t,value` header) or JSON
// ({"times":[...],"values":[...]}), solution and simulation JSON emitted by
// the CLI, and replay records for failed property scenarios. All numeric
// parsing goes through std::from_chars, so it is locale-independent by
// construction.

#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "skoromap/properties.hpp"
#include "skoromap/queue_sim.hpp"
#include "skoromap/step_path.hpp"
#include "skoromap/two_sided.hpp"

namespace skoromap {

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

inline double parse_double(const std::string& field, const std::string& file,
                           std::size_t row) {
  const std::string token = trim(field);
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw io_error(file + ":" + std::to_string(row) +
                   ": not a number: '" + field + "'");
  }
  return value;
}

inline std::string format_double(double value) {
  char buffer[32];
  const auto [ptr, ec] =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace detail

/// Parse the CSV form. Errors name the offending row (1-based, header
/// included).
inline StepPath parse_step_path_csv(std::istream& in,
                                    const std::string& name) {
  std::string line;
  std::size_t row = 0;
  if (!std::getline(in, line)) {
    throw io_error(name + ":1: empty input, expected 't,value' header");
  }
  ++row;
  if (detail::trim(line) != "t,value") {
    throw io_error(name + ":1: expected header 't,value', got '" +
                   detail::trim(line) + "'");
  }
  std::vector<double> times;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++row;
    if (detail::trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw io_error(name + ":" + std::to_string(row) +
                     ": expected 't,value', got '" + detail::trim(line) + "'");
    }
    times.push_back(detail::parse_double(line.substr(0, comma), name, row));
    values.push_back(detail::parse_double(line.substr(comma + 1), name, row));
  }
  try {
    return StepPath(std::move(times), std::move(values));
  } catch (const std::invalid_argument& e) {
    throw io_error(name + ": " + e.what());
  }
}

inline StepPath parse_step_path_json(const std::string& text,
                                     const std::string& name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw io_error(name + ": " + e.what());
  }
  if (!doc.contains("times") || !doc.contains("values")) {
    throw io_error(name + ": JSON path needs 'times' and 'values' arrays");
  }
  try {
    return StepPath(doc["times"].get<std::vector<double>>(),
                    doc["values"].get<std::vector<double>>());
  } catch (const std::exception& e) {
    throw io_error(name + ": " + e.what());
  }
}

/// Read a path file, recognizing JSON by its leading '{'.
inline StepPath read_step_path(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw io_error(file + ": cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    return parse_step_path_json(text, file);
  }
  std::istringstream stream(text);
  return parse_step_path_csv(stream, file);
}

inline std::string step_path_to_csv(const StepPath& p) {
  std::string out = "t,value\n";
  for (std::size_t k = 0; k < p.size(); ++k) {
    out += detail::format_double(p.times()[k]);
    out += ',';
    out += detail::format_double(p.values()[k]);
    out += '\n';
  }
  return out;
}

inline nlohmann::json step_path_to_json(const StepPath& p) {
  return nlohmann::json{{"times", p.times()}, {"values", p.values()}};
}

/// The CLI `map` output: input and solution columns over one grid.
inline nlohmann::json solution_to_json(const StepPath& psi,
                                       const TwoSidedSolution& sol) {
  return nlohmann::json{{"times", psi.times()},
                        {"psi", psi.values()},
                        {"phibar", sol.phibar.values()},
                        {"eta_l", sol.eta_l.values()},
                        {"eta_u", sol.eta_u.values()}};
}

struct CandidateSolution {
  StepPath psi;
  TwoSidedSolution solution;
};

/// Parse a candidate triple in the `map` output format for verification.
inline CandidateSolution parse_candidate_json(const std::string& text,
                                              const std::string& name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw io_error(name + ": " + e.what());
  }
  for (const char* key : {"times", "psi", "phibar", "eta_l", "eta_u"}) {
    if (!doc.contains(key)) {
      throw io_error(name + ": candidate JSON missing '" + std::string(key) +
                     "'");
    }
  }
  try {
    const auto times = doc["times"].get<std::vector<double>>();
    StepPath psi(times, doc["psi"].get<std::vector<double>>());
    StepPath phibar(times, doc["phibar"].get<std::vector<double>>());
    StepPath eta_l(times, doc["eta_l"].get<std::vector<double>>());
    StepPath eta_u(times, doc["eta_u"].get<std::vector<double>>());
    StepPath etabar = sub(phibar, psi);
    return CandidateSolution{
        std::move(psi),
        TwoSidedSolution{std::move(phibar), std::move(etabar),
                         std::move(eta_l), std::move(eta_u)}};
  } catch (const std::invalid_argument& e) {
    throw io_error(name + ": " + e.what());
  }
}

inline nlohmann::json sim_stats_to_json(const SimStats& stats) {
  const std::size_t bins = stats.occupancy_histogram.size();
  std::vector<double> bin_left(bins);
  std::vector<double> bin_right(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    bin_left[i] = stats.band.lower() +
                  stats.band.width() * static_cast<double>(i) /
                      static_cast<double>(bins);
    bin_right[i] = stats.band.lower() +
                   stats.band.width() * static_cast<double>(i + 1) /
                       static_cast<double>(bins);
  }
  return nlohmann::json{
      {"mean_occupancy", stats.mean_occupancy},
      {"frac_at_lower", stats.frac_at_lower},
      {"frac_at_upper", stats.frac_at_upper},
      {"total_loss", stats.total_loss},
      {"total_idle_push", stats.total_idle_push},
      {"steps", stats.steps},
      {"replications", stats.replications},
      {"occupancy_histogram",
       {{"bin_left", bin_left},
        {"bin_right", bin_right},
        {"count", stats.occupancy_histogram}}}};
}

inline std::string histogram_to_csv(const SimStats& stats) {
  const std::size_t bins = stats.occupancy_histogram.size();
  std::string out = "bin_left,bin_right,count\n";
  for (std::size_t i = 0; i < bins; ++i) {
    const double left = stats.band.lower() +
                        stats.band.width() * static_cast<double>(i) /
                            static_cast<double>(bins);
    const double right = stats.band.lower() +
                         stats.band.width() * static_cast<double>(i + 1) /
                             static_cast<double>(bins);
    out += detail::format_double(left);
    out += ',';
    out += detail::format_double(right);
    out += ',';
    out += std::to_string(stats.occupancy_histogram[i]);
    out += '\n';
  }
  return out;
}

inline nlohmann::json path_gen_spec_to_json(const PathGenSpec& spec) {
  return nlohmann::json{{"seed", spec.seed},         {"n", spec.n},
                        {"jump_scale", spec.jump_scale},
                        {"drift", spec.drift},       {"start", spec.start},
                        {"horizon", spec.horizon}};
}

inline nlohmann::json band_to_json(const Band& band) {
  return nlohmann::json{{"z", band.lower()}, {"a", band.upper()}};
}

/// Replay record for one failing scenario: everything needed to rerun it.
inline nlohmann::json replay_record(const std::string& check,
                                    const std::vector<PathGenSpec>& specs,
                                    const Band& band,
                                    const nlohmann::json& constants) {
  nlohmann::json spec_list = nlohmann::json::array();
  for (const auto& spec : specs) spec_list.push_back(path_gen_spec_to_json(spec));
  return nlohmann::json{{"check", check},
                        {"specs", spec_list},
                        {"band", band_to_json(band)},
                        {"constants", constants}};
}

inline void write_text_file(const std::string& file, const std::string& text) {
  std::ofstream out(file);
  if (!out) throw io_error(file + ": cannot open for writing");
  out << text;
}

}  // namespace skoromap
