#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "robincap/radial.hpp"
#include "robincap/shape.hpp"

// Flat sectioned config files describing a problem instance:
//
//   [params]            # scalars; n defaults to 2
//   p = 2.0
//   beta = 1.0
//   M = 12.566370614359172
//   [K]
//   center = 0.0 0.0
//   a0 = 1.0
//   a = 0.0 0.0 0.1     # cosine coefficients a_1..a_k
//   b = 0.0             # sine coefficients b_1..b_k
//   [Omega]             # omit the whole section for K = Omega
//   center = 0.0 0.0
//   a0 = 2.0
//
// '#' starts a comment; keys are `name = values` with whitespace-separated
// decimal reals.

namespace robincap {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ProblemConfig {
  int n = 2;
  double p = 2.0;
  double beta = 1.0;
  std::optional<double> M;
  StarShape K;
  std::optional<StarShape> Omega;  // absent: K = Omega (no mesh needed)

  ProblemParams params() const { return ProblemParams(n, p, beta); }
};

ProblemConfig parse_config(std::istream& in);
ProblemConfig parse_config_file(const std::string& path);

}  // namespace robincap
