#include "ionmap/tech.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "ionmap/errors.hpp"

namespace ionmap {

void TechParams::validate() const {
  if (t_gate_1q <= 0 || t_gate_2q <= 0)
    throw ConfigError(0, "gate delays must be positive");
  if (t_move < 0 || t_turn < 0)
    throw ConfigError(0, "move/turn delays must be nonnegative");
  if (channel_capacity < 1 || junction_capacity < 1)
    throw ConfigError(0, "capacities must be at least 1");
  if (!(priority_alpha >= 0.0) || !(priority_beta >= 0.0) ||
      !std::isfinite(priority_alpha) || !std::isfinite(priority_beta))
    throw ConfigError(0, "priority weights must be finite and nonnegative");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

long long parse_int(const std::string& value, int line) {
  try {
    std::size_t consumed = 0;
    long long v = std::stoll(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected an integer, got '" + value + "'");
  }
}

double parse_double(const std::string& value, int line) {
  try {
    std::size_t consumed = 0;
    double v = std::stod(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected a number, got '" + value + "'");
  }
}

}  // namespace

TechParams parse_tech_config(const std::string& text) {
  TechParams params;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line_no, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "t_move_us") {
      params.t_move = parse_int(value, line_no);
    } else if (key == "t_turn_us") {
      params.t_turn = parse_int(value, line_no);
    } else if (key == "t_gate_1q_us") {
      params.t_gate_1q = parse_int(value, line_no);
    } else if (key == "t_gate_2q_us") {
      params.t_gate_2q = parse_int(value, line_no);
    } else if (key == "channel_capacity") {
      params.channel_capacity = static_cast<int>(parse_int(value, line_no));
    } else if (key == "junction_capacity") {
      params.junction_capacity = static_cast<int>(parse_int(value, line_no));
    } else if (key == "priority_alpha") {
      params.priority_alpha = parse_double(value, line_no);
    } else if (key == "priority_beta") {
      params.priority_beta = parse_double(value, line_no);
    } else {
      throw ConfigError(line_no, "unknown key '" + key + "'");
    }
  }
  params.validate();
  return params;
}

}  // namespace ionmap
