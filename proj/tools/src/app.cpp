#include "reicqed/cli/app.hpp"

#include <cstdio>
#include <ostream>

#include "CLI11.hpp"
#include "reicqed/cli/output.hpp"
#include "reicqed/cli/run.hpp"
#include "reicqed/cli/scenario.hpp"
#include "reicqed/errors.hpp"

namespace reicqed::cli {

namespace {

void list_ions(const std::string& catalog, std::ostream& out) {
  const auto ions = load_catalog(catalog);
  out << "name,lambda_a_m,t_spon_s,mu_cm,n_host,source\n";
  for (const auto& i : ions) {
    const auto r = resolve(i);
    char buf[256];
    std::snprintf(buf, sizeof buf, ",%.6e,%.6e,%.6e,%.4g,", r.lambda_a, *r.t_spon, *r.mu, r.n_host);
    out << csv_field(r.name) << buf << csv_field(r.source) << "\n";
  }
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
               const std::string& default_catalog) {
  CLI::App app{"Rare-earth-ion cavity QED simulator", "reicqed"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir;
  RunOptions opts;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario file");
  run_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (default: out/<scenario name>)");
  run_cmd->add_flag("--verify", opts.verify, "Run the task's built-in oracle and fail on disagreement");
  run_cmd->add_flag("--plot", opts.plot, "Also write SVG plots");

  std::string catalog = default_catalog;
  auto* cat_cmd = app.add_subcommand("catalog", "Inspect the ion catalog");
  cat_cmd->require_subcommand(1);
  auto* list_cmd = cat_cmd->add_subcommand("list-ions", "List catalog ions");
  list_cmd->add_option("--catalog", catalog, "Catalog file")->capture_default_str();

  auto* version_cmd = app.add_subcommand("version", "Print the tool version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*version_cmd) {
      out << "reicqed " << tool_version() << "\n";
    } else if (*list_cmd) {
      list_ions(catalog, out);
    } else if (*run_cmd) {
      const auto s = parse_scenario(scenario_path);
      opts.out_dir = out_dir.empty() ? "out/" + s.name : out_dir;
      const auto m = run(s, opts, out, err);
      out << "wrote " << m.outputs.size() << " files to " << opts.out_dir << " (scenario hash " << m.scenario_hash
          << ")\n";
    }
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace reicqed::cli
