// eigenfam-check: verify eigenfamily identities declared in a JSON manifest.
//
//   eigenfam-check --manifest M.json [--out report.json] [--seed N] [--points N] [--tol X] [--quiet]
//   eigenfam-check --list-checks
//
// Exit status: 0 all checks pass, 1 some check fails, 2 bad manifest.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "eigenfam/cli/runner.hpp"

namespace {

using namespace eigenfam::cli;

void print_summary(const ReportDocument& doc) {
  for (const auto& c : doc.checks) {
    std::printf("%-4s %-30s %-24s max|res| %.3e  points %zu (excluded %zu, failed %zu)\n",
                c.report.passed ? "PASS" : "FAIL", c.name.c_str(), c.target.c_str(), c.report.max_abs(),
                c.report.points_sampled, c.report.points_excluded, c.report.points_failed);
    if (!c.report.passed) {
      for (const auto& r : c.report.identities)
        if (!r.passed)
          std::printf("       %s: max normalized %.3e > %.1e (%s) at %s %s\n", r.identity.c_str(), r.max_normalized,
                      r.tolerance.value, eigenfam::to_string(r.tolerance.mode).c_str(),
                      r.argmax ? r.argmax->chart_name.c_str() : "-",
                      r.argmax ? eigenfam::format_point(r.argmax->coords).c_str() : "");
      for (const auto& n : c.report.notes) std::printf("       note: %s\n", n.c_str());
    }
  }
  std::printf("%s (%.2fs)\n", doc.passed ? "all checks passed" : "some checks failed", doc.wall_clock_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify eigenfamily identities on sampled chart points"};
  std::string manifest_path, out_path;
  std::uint64_t seed = 0;
  std::size_t points = 0;
  double tol = 0.0;
  bool quiet = false, list = false;
  app.add_option("--manifest", manifest_path, "JSON manifest")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "write the JSON report here ('-' for stdout)");
  auto* seed_opt = app.add_option("--seed", seed, "override the sampling seed");
  auto* points_opt = app.add_option("--points", points, "override points per chart")->check(CLI::PositiveNumber);
  auto* tol_opt = app.add_option("--tol", tol, "override every tolerance value")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "no summary on stdout");
  app.add_flag("--list-checks", list, "print the check catalog as JSON and exit");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    json catalog = json::array();
    for (const auto& c : list_checks())
      catalog.push_back(
          {{"name", c.name}, {"description", c.description}, {"params", c.params}, {"default_tolerance", c.default_tolerance}});
    std::cout << catalog.dump(2) << "\n";
    return kAllPassed;
  }
  if (manifest_path.empty()) {
    std::cerr << "--manifest is required\n";
    return kConfigError;
  }

  RunOptions options;
  if (*seed_opt) options.seed = seed;
  if (*points_opt) options.points = points;
  if (*tol_opt) options.tol = tol;

  ReportDocument doc;
  try {
    std::ifstream in{manifest_path};
    std::stringstream text;
    text << in.rdbuf();
    doc = run(parse_manifest_text(text.str()), options);
  } catch (const ConfigError& e) {
    std::cerr << manifest_path << ": " << e.what() << "\n";
    return kConfigError;
  }

  const std::string report = json(doc).dump(2);
  if (out_path == "-") {
    std::cout << report << "\n";
  } else if (!out_path.empty()) {
    std::ofstream out{out_path};
    out << report << "\n";
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return kConfigError;
    }
  }
  if (!quiet && out_path != "-") print_summary(doc);
  return exit_code(doc);
}
