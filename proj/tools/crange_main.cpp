#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crange/commands.hpp"

namespace {

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw CLI::ValidationError(what, "bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError(what, "empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crange: numerical closed-range tests for composition operators on H^p"};
  app.require_subcommand(1);

  crange::RunConfig config;
  std::string symbols;
  bool given_symbols = false;
  std::string ps;
  std::string values;
  std::vector<std::string> overrides;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--symbols", symbols,
                    "symbol file or inline records separated by ';' (default: built-in corpus)");
    cmd->add_option("--p", ps, "comma-separated exponents (default 2)");
    cmd->add_option("--seed", config.seed, "base seed")->capture_default_str();
    cmd->add_option("--depth", config.depth, "grid depth for kernel, G_c and window tests (0 = defaults)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", config.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--format", config.format, "json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();
    cmd->add_option("--set", overrides, "key=value override, repeatable");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "run the closed-range criteria per (symbol, p)");
  CLI::App* verify = app.add_subcommand("verify", "check the integral identities and inequalities");
  CLI::App* sweep = app.add_subcommand("sweep", "criterion estimates along one parameter");
  add_common(analyze);
  add_common(verify);
  add_common(sweep);
  sweep->add_option("--param", config.sweep_param, "x (substituted for {x} in the record) or p")
      ->check(CLI::IsMember({"x", "p"}))
      ->capture_default_str();
  sweep->add_option("--values", values, "comma-separated parameter values");
  app.add_subcommand("keys", "list the keys accepted by --set")->callback([] {
    for (const auto& k : crange::override_keys()) std::cout << k << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? crange::kExitOk : crange::kExitUsage;
  }
  if (app.got_subcommand("keys")) return crange::kExitOk;

  for (CLI::App* cmd : {analyze, verify, sweep}) {
    given_symbols = given_symbols || cmd->count("--symbols") > 0;
  }
  try {
    if (given_symbols) {
      config.symbols_source = symbols;
      config.symbols_text = crange::resolve_symbols_source(symbols);
    }
    if (!ps.empty()) config.ps = parse_list(ps, "--p");
    if (!values.empty()) config.sweep_values = parse_list(values, "--values");
    for (const auto& kv : overrides) crange::apply_override(config, kv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return crange::kExitUsage;
  }

  try {
    if (app.got_subcommand(analyze)) return crange::cmd_analyze(config, std::cout, std::cerr);
    if (app.got_subcommand(verify)) return crange::cmd_verify(config, std::cout, std::cerr);
    return crange::cmd_sweep(config, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return crange::kExitFailure;
  }
}
