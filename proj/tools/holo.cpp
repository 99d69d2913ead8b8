// holo: command-line front end over the C API.
// Exit codes: 0 all checks met their expectation, 1 a check failed or a
// numerical error occurred, 2 configuration or usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "holo/holo.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct Flags {
  double step = 0.0;
  double tolerance = 0.0;
  int curves = 0;
  int vectors = 0;
  uint64_t seed = 0;
  std::string out;
};

void add_flags(CLI::App* cmd, Flags& f, holo_options& opts) {
  cmd->add_option("--step", f.step, "RK4 step size (default 1e-3)")->check(CLI::PositiveNumber)->each([&](const std::string&) {
    opts.set |= HOLO_OPT_STEP;
  });
  cmd->add_option("--tol", f.tolerance, "relative tolerance (default 1e-6)")->check(CLI::PositiveNumber)->each([&](const std::string&) {
    opts.set |= HOLO_OPT_TOLERANCE;
  });
  cmd->add_option("--curves", f.curves, "random curves (default 100)")->check(CLI::PositiveNumber)->each([&](const std::string&) {
    opts.set |= HOLO_OPT_CURVES;
  });
  cmd->add_option("--vectors", f.vectors, "vectors per sample (default 20)")->check(CLI::PositiveNumber)->each([&](const std::string&) {
    opts.set |= HOLO_OPT_VECTORS;
  });
  cmd->add_option("--seed", f.seed, "random seed (default 42)")->each([&](const std::string&) { opts.set |= HOLO_OPT_SEED; });
  cmd->add_option("--out", f.out, "write the report here instead of stdout");
}

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

int status_exit(holo_status s) {
  std::cerr << "holo: " << holo_last_error() << "\n";
  switch (s) {
    case HOLO_ERR_CONFIG:
    case HOLO_ERR_INVALID_ARGUMENT:
    case HOLO_ERR_INDEFINITE_NORM:
      return kExitConfig;
    default:
      return kExitFail;
  }
}

int emit(holo_status s, holo_report* report, const std::string& out_flag) {
  if (s != HOLO_OK) return status_exit(s);
  std::string path = out_flag.empty() ? holo_report_output_path(report) : out_flag;
  const std::string json = holo_report_json(report);
  const bool passed = holo_report_passed(report) != 0;
  holo_report_free(report);
  if (path.empty()) {
    std::cout << json;
  } else {
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << json)) {
      std::cerr << "holo: cannot write " << path << "\n";
      return kExitConfig;
    }
  }
  return passed ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Holonomy invariance and generalized Berwald checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(holo_version()));

  holo_options opts = holo_options_default();
  Flags flags;

  std::string fixture;
  auto* verify = app.add_subcommand("verify", "run a built-in fixture's full expectation suite");
  verify->add_option("fixture", fixture, "fixture name (see list-fixtures)")->required();
  add_flags(verify, flags, opts);

  std::string check_config;
  auto* check = app.add_subcommand("check", "run verification checks on a JSON config");
  check->add_option("config", check_config, "config file")->required();
  add_flags(check, flags, opts);

  std::string synth_config;
  auto* synth = app.add_subcommand("synthesize", "build a connection from a covering parallelism");
  synth->add_option("config", synth_config, "config file")->required();
  add_flags(synth, flags, opts);

  std::string norm_spec;
  std::string iso_out;
  auto* iso = app.add_subcommand("isometry-group", "list the linear isometries of a planar norm");
  iso->add_option("spec", norm_spec, "inline JSON norm spec or a file containing one")->required();
  iso->add_option("--out", iso_out, "write the result here instead of stdout");

  auto* list = app.add_subcommand("list-fixtures", "print built-in fixture names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  opts.step = flags.step;
  opts.tolerance = flags.tolerance;
  opts.curves = flags.curves;
  opts.vectors = flags.vectors;
  opts.seed = flags.seed;

  holo_report* report = nullptr;
  if (*list) {
    std::cout << holo_fixture_names();
    return kExitPass;
  }
  if (*verify) {
    const holo_status s = holo_verify(fixture.c_str(), &opts, &report);
    return emit(s, report, flags.out);
  }

  const std::string& path = *check ? check_config : *synth ? synth_config : norm_spec;
  std::string text;
  if (*iso && !norm_spec.empty() && norm_spec.front() == '{') {
    text = norm_spec;
  } else if (!read_file(path, text)) {
    std::cerr << "holo: cannot read " << path << "\n";
    return kExitConfig;
  }
  holo_status s;
  if (*check) s = holo_run_check(text.c_str(), &opts, &report);
  else if (*synth) s = holo_synthesize(text.c_str(), &opts, &report);
  else s = holo_isometry_group(text.c_str(), &report);
  return emit(s, report, *iso ? iso_out : flags.out);
}
