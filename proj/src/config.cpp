#include "robincap/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace robincap {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_reals(const std::string& text, int line_no) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    try {
      size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected a decimal real, got '" + tok + "'");
    }
  }
  return out;
}

using Section = std::map<std::string, std::pair<std::vector<double>, int>>;

StarShape shape_from_section(const Section& sec, const std::string& name) {
  StarShape shape;
  bool have_a0 = false;
  for (const auto& [key, entry] : sec) {
    const auto& [vals, line] = entry;
    if (key == "center") {
      if (vals.size() != 2)
        throw ConfigError("[" + name + "] center needs exactly two reals");
      shape.center = {vals[0], vals[1]};
    } else if (key == "a0") {
      if (vals.size() != 1)
        throw ConfigError("[" + name + "] a0 needs exactly one real");
      shape.a0 = vals[0];
      have_a0 = true;
    } else if (key == "a") {
      shape.cos_coeffs = vals;
    } else if (key == "b") {
      shape.sin_coeffs = vals;
    } else {
      throw ConfigError("line " + std::to_string(line) + ": unknown key '" +
                        key + "' in [" + name + "]");
    }
  }
  if (!have_a0) throw ConfigError("[" + name + "] is missing a0");
  try {
    validate_shape(shape);
  } catch (const InvalidShape& err) {
    throw ConfigError("[" + name + "]: " + err.what());
  }
  return shape;
}

}  // namespace

ProblemConfig parse_config(std::istream& in) {
  std::map<std::string, Section> sections;
  std::string current;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current != "params" && current != "K" && current != "Omega")
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unknown section [" + current + "]");
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = values'");
    if (current.empty())
      throw ConfigError("line " + std::to_string(line_no) +
                        ": key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    sections[current][key] = {parse_reals(line.substr(eq + 1), line_no),
                              line_no};
  }

  if (!sections.count("params")) throw ConfigError("missing [params] section");
  if (!sections.count("K")) throw ConfigError("missing [K] section");

  ProblemConfig cfg;
  for (const auto& [key, entry] : sections["params"]) {
    const auto& [vals, ln] = entry;
    if (vals.size() != 1)
      throw ConfigError("line " + std::to_string(ln) + ": [params] " + key +
                        " needs exactly one real");
    if (key == "n") {
      cfg.n = static_cast<int>(vals[0]);
      if (cfg.n != vals[0] || cfg.n < 2)
        throw ConfigError("line " + std::to_string(ln) +
                          ": n must be an integer >= 2");
    } else if (key == "p") {
      cfg.p = vals[0];
    } else if (key == "beta") {
      cfg.beta = vals[0];
    } else if (key == "M") {
      cfg.M = vals[0];
    } else {
      throw ConfigError("line " + std::to_string(ln) +
                        ": unknown key '" + key + "' in [params]");
    }
  }

  try {
    cfg.params();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(err.what());
  }

  cfg.K = shape_from_section(sections["K"], "K");
  if (sections.count("Omega"))
    cfg.Omega = shape_from_section(sections["Omega"], "Omega");
  return cfg;
}

ProblemConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in);
}

}  // namespace robincap
