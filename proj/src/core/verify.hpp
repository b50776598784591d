#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/mapping.hpp"
#include "json.hpp"

namespace qed {

// How residual and tolerance are compared for a check to pass.
enum class Comparison { Less, LessEqual, Greater, GreaterEqual };
const char* comparison_name(Comparison c);

struct CheckRecord {
  std::string name;
  std::string anchor;  // the identity or property being checked
  double residual = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::Less;
  bool pass = false;
  bool skipped = false;
  long samples = 0;
  std::string note;
};

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  bool inject_error = false;  // perturbs the zero-period integrand
  int grid = 100;             // interior samples per direction
  int flow_levels = 10;
  int kernel_points = 1000;
  int b_samples = 500;
};

struct VerificationReport {
  DomainSpec spec;
  VerifyOptions options;
  std::vector<CheckRecord> checks;
  std::vector<std::string> warnings;
  bool all_pass = false;
  // Derived constants recorded for provenance.
  double c0 = 0.0, c_pole = 0.0;
  double boundary_bottom = 0.0, boundary_top = 0.0;
  Complex sigma_ratio, scale, period, alignment;
};

// Every check name a report contains, in report order.
const std::vector<std::string>& check_registry();

// Elliptic identity suite on the given lattices.
std::vector<CheckRecord> kernel_checks(const std::vector<Lattice>& lattices,
                                       std::uint64_t seed, int points);
// The fixed three-lattice suite behind the kernel self-test.
std::vector<CheckRecord> kernel_selftest(std::uint64_t seed = 20240601, int points = 1000);

VerificationReport run_verification(const ConstructedMap& cm, const VerifyOptions& opt);

nlohmann::ordered_json spec_json(const DomainSpec& spec);
nlohmann::ordered_json complex_json(Complex z);  // [re, im]

// Deterministic JSON (stable key order, schema 1).
std::string report_to_json(const VerificationReport& report);
std::string checks_to_json(const std::vector<CheckRecord>& checks, const std::string& kind);

}  // namespace qed
