#include <sdwave/experiments.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>

namespace ex = sdwave::experiments;

namespace {

void print_report(const ex::RunReport& r) {
  fmt::print("scenario {} -> {}\n", r.scenario, r.out_dir.string());
  for (const auto& v : r.verdicts) {
    fmt::print("  {:<28} {}  measured {:.6g}  threshold {:.6g}\n", v.check, v.pass ? "PASS" : "FAIL", v.measured,
               v.threshold);
  }
  if (!r.has_verdict()) fmt::print("  (exploratory, no verdict)\n");
  fmt::print("  {} files, {:.2f} s\n", r.files.size(), r.seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sdwave: semi-discrete wave equation experiments"};
  app.require_subcommand(1);

  std::string out = "sdwave-out";
  int threads = 1;
  double tol = 0.0;
  app.add_option("--out", out, "Output root directory")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads for mode integration")->check(CLI::Range(1, 1024));
  app.add_option("--tol", tol, "Override the solver tolerance")->check(CLI::PositiveNumber);

  std::string config;
  auto* run = app.add_subcommand("run", "Run a scenario (INI file or built-in name)");
  run->add_option("config", config, "Config path or built-in scenario name")->required();
  auto* verify = app.add_subcommand("verify", "Verify the hypotheses of a scenario's speed profile");
  verify->add_option("config", config, "Config path or built-in scenario name")->required();
  auto* list = app.add_subcommand("list", "List built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ex::exit_config_error;
  }

  if (list->parsed()) {
    for (const auto& e : ex::builtin_scenarios()) {
      fmt::print("{:<24} [{}] {}\n", e.name, e.tag, e.description);
    }
    return ex::exit_ok;
  }

  try {
    ex::Config c = ex::resolve_config(config);
    if (tol > 0.0) c.set("solver", "tol", fmt::format("{:.17g}", tol));
    const ex::Scenario s = ex::make_scenario(c);
    const ex::RunOptions opts{out, threads};
    const ex::RunReport r = run->parsed() ? ex::run(s, opts) : ex::verify(s, opts);
    print_report(r);
    return r.pass() ? ex::exit_ok : ex::exit_verdict_failed;
  } catch (...) {
    std::string message;
    const int code = ex::classify_current_exception(message);
    fmt::print(stderr, "sdwave: {}\n", message);
    return code;
  }
}
