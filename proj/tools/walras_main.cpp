// Command-line front end: economy files in, deterministic reports out.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "walras/cli.hpp"

namespace {

std::string read_document(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("document", "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<double> parse_tuple(const std::string& text) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"walras — pure-exchange general-equilibrium engine"};
  app.require_subcommand(1);

  std::string document_path;
  std::string format = "report";
  std::string price_flag, start_flag;
  walras::cli::CommandRequest request;
  double epsilon = -1.0;
  double margin = -1.0;
  std::int64_t seed = -1;

  auto add_common = [&](CLI::App* cmd, bool document_required) {
    auto* doc = cmd->add_option("document", document_path,
                                "economy document (JSON file, or - for stdin)");
    if (document_required) doc->required();
    cmd->add_option("--format", format, "report (human) or machine (JSON line)")
        ->check(CLI::IsMember({"report", "machine"}));
    cmd->add_option("--epsilon", epsilon, "tolerance override");
    cmd->add_option("--margin", margin, "truncation margin override");
    cmd->add_option("--seed", seed, "seed override");
  };

  auto* solve = app.add_subcommand("solve", "find a certified equilibrium by grid refinement");
  add_common(solve, true);
  solve->add_option("--max-refinements", request.max_refinements, "refinement budget");

  auto* certify = app.add_subcommand("certify", "check a price for the equilibrium contract");
  add_common(certify, true);
  certify->add_option("--price", price_flag, "comma-separated prices (auto-normalized)")
      ->required();

  auto* audit = app.add_subcommand("audit", "audit the structural assumptions");
  add_common(audit, true);

  auto* probe = app.add_subcommand("probe", "hemicontinuity probes at a price or the pathology");
  add_common(probe, false);
  probe->add_option("--price", price_flag, "comma-separated prices (auto-normalized)");
  probe->add_flag("--pathology", request.pathology, "probe the built-in pathology instance");
  probe->add_option("--agent", request.agent_index, "agent index to probe (default 0)");

  auto* trace = app.add_subcommand("trace", "tatonnement price-adjustment trace");
  add_common(trace, true);
  trace->add_option("--start", start_flag, "comma-separated starting prices")->required();
  trace->add_option("--step", request.step, "adjustment step size");
  trace->add_option("--iters", request.iterations, "maximum iterations");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* active = app.get_subcommands().front();
    request.verb = active->get_name();
    request.format = format == "machine" ? walras::cli::ReportFormat::machine
                                         : walras::cli::ReportFormat::human;
    if (!document_path.empty()) request.document_text = read_document(document_path);
    if (request.verb == "probe" && !request.pathology && document_path.empty()) {
      std::fprintf(stderr, "probe needs a document unless --pathology is given\n");
      return walras::cli::kExitSchemaError;
    }
    if (!price_flag.empty()) request.price = parse_tuple(price_flag);
    if (!start_flag.empty()) request.start = parse_tuple(start_flag);
    if (epsilon > 0.0) request.epsilon = epsilon;
    if (margin > 0.0) request.margin_override = margin;
    if (seed >= 0) request.seed_override = static_cast<std::uint64_t>(seed);

    const walras::cli::RunOutcome outcome = walras::cli::run_command(request);
    std::fputs(outcome.report.c_str(), stdout);
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return walras::cli::kExitSchemaError;
  }
}
