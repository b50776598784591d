// qed: command-line front end for the quasi-exceptional domain library.
//
// Exit status: 0 success, 1 a verification check failed, 2 invalid arguments,
// 3 any other error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <limits>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "qed/qed.h"

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitError = 3;

struct Options {
  std::string type = "ii";
  double omega = 1.0;
  double omega_prime = 2.0;
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  int samples = 1024;
  std::string normalization = "neumann-unit";
  std::string format;
  std::string output = "-";
  std::uint64_t seed = 20240601;
  int levels = 10;
  bool inject_error = false;
};

void add_spec_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--type", o.type, "Domain type")
      ->check(CLI::IsMember({"i", "ii"}))
      ->capture_default_str();
  cmd->add_option("--omega", o.omega, "Real half period omega (period of G is 4 omega)")
      ->capture_default_str();
  cmd->add_option("--omega-prime", o.omega_prime, "Im omega', the height of G")
      ->capture_default_str();
  cmd->add_option("--epsilon", o.epsilon, "Pole height for Type II (default 0.5)");
  cmd->add_option("--samples", o.samples, "Boundary samples per side")->capture_default_str();
  cmd->add_option("--normalization", o.normalization, "Normalization of F")
      ->check(CLI::IsMember({"neumann-unit", "raw-sigma-ratio"}))
      ->capture_default_str();
}

void add_output_option(CLI::App* cmd, Options& o) {
  cmd->add_option("-o,--output", o.output, "Output path, '-' for standard output")
      ->capture_default_str();
}

void add_format_option(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "Output format (default svg)")
      ->check(CLI::IsMember({"csv", "svg", "json"}));
}

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

qed_spec make_spec(const Options& o) {
  qed_spec s;
  qed_spec_default(&s);
  s.kind = o.type == "i" ? QED_TYPE_I : QED_TYPE_II;
  s.omega = o.omega;
  s.omega_prime_imag = o.omega_prime;
  if (s.kind == QED_TYPE_I) {
    if (!std::isnan(o.epsilon)) throw UsageError("--epsilon applies to Type II domains only");
    s.epsilon = std::numeric_limits<double>::quiet_NaN();
  } else if (!std::isnan(o.epsilon)) {
    s.epsilon = o.epsilon;
  }
  s.samples_per_side = o.samples;
  s.normalization = o.normalization == "raw-sigma-ratio" ? QED_NORMALIZATION_RAW_SIGMA_RATIO
                                                         : QED_NORMALIZATION_NEUMANN_UNIT;
  return s;
}

qed_format make_format(const std::string& f) {
  static const std::map<std::string, qed_format> formats = {
      {"csv", QED_FORMAT_CSV}, {"svg", QED_FORMAT_SVG}, {"json", QED_FORMAT_JSON}};
  return formats.at(f.empty() ? "svg" : f);
}

int report(qed_status s) {
  std::cerr << "qed: " << qed_last_error() << '\n';
  return s == QED_INVALID_ARGUMENT ? kExitUsage : kExitError;
}

struct MapHandle {
  qed_map* map = nullptr;
  ~MapHandle() { qed_map_destroy(map); }
};

int write_json(char* text, const std::string& output) {
  int rc = 0;
  if (output == "-") {
    std::cout << text << std::flush;
  } else {
    std::FILE* f = std::fopen(output.c_str(), "wb");
    if (f == nullptr || std::fputs(text, f) < 0) {
      std::cerr << "qed: cannot write '" << output << "'\n";
      rc = kExitError;
    }
    if (f != nullptr && std::fclose(f) != 0) rc = kExitError;
  }
  qed_string_free(text);
  return rc;
}

int run(const std::string& command, const Options& o) {
  if (command == "kernel-selftest") {
    char* text = nullptr;
    int ok = 0;
    const qed_status s = qed_kernel_selftest_json(o.seed, &text, &ok);
    if (text == nullptr) return report(s);
    const int rc = write_json(text, o.output);
    if (rc != 0) return rc;
    return ok ? 0 : kExitCheckFailed;
  }

  const qed_spec spec = make_spec(o);
  MapHandle h;
  if (qed_status s = qed_map_create(&spec, &h.map); s != QED_OK) return report(s);
  for (std::size_t i = 0; i < qed_map_warning_count(h.map); ++i) {
    std::cerr << "qed: warning: " << qed_map_warning(h.map, i) << '\n';
  }

  if (command == "build") {
    char* text = nullptr;
    if (qed_status s = qed_map_summary_json(h.map, &text); s != QED_OK) return report(s);
    return write_json(text, o.output);
  }
  if (command == "verify") {
    char* text = nullptr;
    int ok = 0;
    const qed_status s = qed_verify_json(h.map, o.seed, o.inject_error ? 1 : 0, &text, &ok);
    if (text == nullptr) return report(s);
    const int rc = write_json(text, o.output);
    if (rc != 0) return rc;
    std::cerr << "qed: verification " << (ok ? "passed" : "FAILED") << '\n';
    return ok ? 0 : kExitCheckFailed;
  }
  if (command == "plot") {
    if (qed_status s = qed_plot_write(h.map, make_format(o.format), o.output.c_str());
        s != QED_OK) {
      return report(s);
    }
    return 0;
  }
  if (command == "flow") {
    if (qed_status s =
            qed_flow_write(h.map, o.levels, make_format(o.format), o.output.c_str());
        s != QED_OK) {
      return report(s);
    }
    return 0;
  }
  throw UsageError("unknown command " + command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-exceptional domains: build, verify and plot the conformal maps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qed_version()));
  Options o;

  CLI::App* build = app.add_subcommand("build", "Construct the map and print its constants");
  add_spec_options(build, o);
  add_output_option(build, o);

  CLI::App* verify = app.add_subcommand("verify", "Run the verification battery (JSON report)");
  add_spec_options(verify, o);
  add_output_option(verify, o);
  verify->add_option("--seed", o.seed, "Seed for randomized sampling")->capture_default_str();
  verify->add_flag("--inject-error", o.inject_error)->group("");

  CLI::App* plot = app.add_subcommand("plot", "Write the image of the boundary");
  add_spec_options(plot, o);
  add_output_option(plot, o);
  add_format_option(plot, o);

  CLI::App* flow = app.add_subcommand("flow", "Write streamlines of the hollow-vortex flow");
  add_spec_options(flow, o);
  add_output_option(flow, o);
  add_format_option(flow, o);
  flow->add_option("--levels", o.levels, "Number of stream function levels")
      ->capture_default_str();

  CLI::App* selftest = app.add_subcommand("kernel-selftest", "Elliptic function identity suite");
  add_output_option(selftest, o);
  selftest->add_option("--seed", o.seed, "Seed for randomized sampling")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), o);
  } catch (const UsageError& e) {
    std::cerr << "qed: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "qed: " << e.what() << '\n';
    return kExitError;
  }
}
