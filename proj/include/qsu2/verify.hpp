#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qsu2/integral.hpp"
#include "qsu2/numerics.hpp"

namespace qsu2 {

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  DeformationParameter dp = DeformationParameter::parse("1/2");
  HalfInt l_max = HalfInt::from_int(20);
  Precision prec = kDefaultPrecision;
  WeightSpec weight;
  std::uint64_t seed = 1;
};

/// Suites: "algebra", "spectral", "zeta", "integral", or "all". Throws Error on an
/// unknown name. Deterministic given (options, seed).
std::vector<CheckResult> run_suite(std::string_view suite, const VerifyOptions& opts);

const std::vector<std::string>& suite_names();

}  // namespace qsu2
