#include "walras/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <sstream>

#include <json.hpp>

#include "walras/demand.hpp"
#include "walras/diagnostics.hpp"
#include "walras/equilibrium.hpp"
#include "walras/excess.hpp"
#include "walras/geometry.hpp"

namespace walras::cli {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw SchemaError(message, path);
}

const json& member(const json& node, const std::string& path, const char* key) {
  if (!node.is_object()) fail(path, "expected an object");
  auto it = node.find(key);
  if (it == node.end()) fail(path + "/" + key, std::string("missing required field '") + key + "'");
  return *it;
}

std::vector<double> number_array(const json& node, const std::string& path,
                                 std::size_t expected = 0) {
  if (!node.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number()) fail(path + "/" + std::to_string(i), "expected a number");
    out.push_back(node[i].get<double>());
  }
  if (expected != 0 && out.size() != expected) {
    fail(path, "expected " + std::to_string(expected) + " entries, got " +
                   std::to_string(out.size()));
  }
  return out;
}

void reject_unknown_keys(const json& node, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    bool ok = false;
    for (const char* key : allowed) ok = ok || it.key() == key;
    if (!ok) fail(path + "/" + it.key(), "unknown field '" + it.key() + "'");
  }
}

UtilityFunction parse_utility(const json& node, const std::string& path, std::size_t goods) {
  if (!node.is_object()) fail(path, "expected a utility object");
  const json& kind_node = member(node, path, "kind");
  if (!kind_node.is_string()) fail(path + "/kind", "expected a string");
  const std::string kind = kind_node.get<std::string>();
  try {
    if (kind == "cobb_douglas") {
      reject_unknown_keys(node, path, {"kind", "weights"});
      return UtilityFunction::cobb_douglas(
          number_array(member(node, path, "weights"), path + "/weights", goods));
    }
    if (kind == "ces") {
      reject_unknown_keys(node, path, {"kind", "weights", "rho"});
      const json& rho = member(node, path, "rho");
      if (!rho.is_number()) fail(path + "/rho", "expected a number");
      return UtilityFunction::ces(
          number_array(member(node, path, "weights"), path + "/weights", goods),
          rho.get<double>());
    }
    if (kind == "linear") {
      reject_unknown_keys(node, path, {"kind", "weights"});
      return UtilityFunction::linear(
          number_array(member(node, path, "weights"), path + "/weights", goods));
    }
    if (kind == "leontief") {
      reject_unknown_keys(node, path, {"kind", "coefficients"});
      return UtilityFunction::leontief(
          number_array(member(node, path, "coefficients"), path + "/coefficients", goods));
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  fail(path + "/kind", "unknown utility kind '" + kind + "'");
}

json utility_to_json(const UtilityFunction& u) {
  json node;
  node["kind"] = to_string(u.kind());
  if (u.kind() == UtilityKind::leontief) {
    node["coefficients"] = u.weights();
  } else {
    node["weights"] = u.weights();
  }
  if (u.kind() == UtilityKind::ces) node["rho"] = u.rho();
  return node;
}

json economy_to_json(const Economy& econ, std::uint64_t seed, std::optional<double> epsilon) {
  json doc;
  doc["schema"] = 1;
  doc["goods"] = econ.goods();
  json agents = json::array();
  for (const Agent& agent : econ.agents()) {
    json a;
    a["utility"] = utility_to_json(agent.utility);
    a["endowment"] = agent.endowment.values();
    a["lower_bounds"] = agent.lower_bounds.values();
    agents.push_back(std::move(a));
  }
  doc["agents"] = std::move(agents);
  json options;
  options["truncation_margin"] = econ.truncation_margin();
  options["seed"] = seed;
  if (epsilon.has_value()) options["epsilon"] = *epsilon;
  doc["options"] = std::move(options);
  return doc;
}

json certificate_to_json(const Economy& econ, const EquilibriumCertificate& cert) {
  json node;
  node["price"] = cert.price.values();
  node["excess"] = cert.excess.values();
  json slack = json::array();
  for (std::size_t j = 0; j < cert.slack.size(); ++j) {
    slack.push_back({{"good", econ.goods()[j]},
                     {"price", cert.slack[j].price},
                     {"excess", cert.slack[j].excess}});
  }
  node["slack"] = std::move(slack);
  node["epsilon"] = cert.epsilon;
  node["steps"] = cert.steps;
  node["method"] = to_string(cert.method);
  return node;
}

json audit_to_json(const AssumptionAuditReport& report) {
  json checks = json::array();
  for (const AssumptionCheck& check : report.checks) {
    checks.push_back({{"assumption", check.assumption},
                      {"status", to_string(check.status)},
                      {"note", check.note}});
  }
  return json{{"all_pass", report.all_pass()}, {"checks", std::move(checks)}};
}

json violations_to_json(const std::vector<StructureViolation>& violations) {
  json out = json::array();
  for (const StructureViolation& v : violations) {
    out.push_back({{"assumption", v.assumption}, {"witness", v.witness}});
  }
  return out;
}

json probe_to_json(const ContinuityReport& report) {
  json dirs = json::array();
  for (const DirectionTrace& trace : report.directions) {
    dirs.push_back({{"direction", trace.direction},
                    {"radii", trace.radii},
                    {"residuals", trace.residuals},
                    {"degenerate", trace.degenerate}});
  }
  json node{{"at", report.at.values()},
            {"target", to_string(report.target)},
            {"verdict", to_string(report.verdict)},
            {"note", report.note},
            {"directions", std::move(dirs)}};
  if (report.witness.has_value()) {
    json seq = json::array();
    for (const PriceVector& p : report.witness->price_sequence) seq.push_back(p.values());
    node["witness"] = {{"direction_index", report.witness->direction_index},
                       {"price_sequence", std::move(seq)},
                       {"point", report.witness->point.values()},
                       {"residual", report.witness->residual}};
  } else {
    node["witness"] = nullptr;
  }
  return node;
}

PriceVector price_from_flag(const std::vector<double>& raw, bool& normalized) {
  double sum = 0.0;
  for (double v : raw) sum += v;
  normalized = std::abs(sum - 1.0) > kSimplexTol;
  return normalize_prices(raw);
}

std::string render_human(const std::string& verb, const json& report, double wall_ms);

}  // namespace

SchemaError::SchemaError(std::string message, std::string path)
    : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

ParsedDocument parse_economy(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Compute line/column from the byte offset for a readable pointer.
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < e.byte; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw SchemaError("document is not well-formed JSON (line " + std::to_string(line) +
                          ", column " + std::to_string(column) + ")",
                      "");
  }

  if (!root.is_object()) fail("", "document root must be an object");
  reject_unknown_keys(root, "", {"schema", "goods", "agents", "options"});

  if (root.contains("schema")) {
    const json& schema = root["schema"];
    if (!schema.is_number_integer() || schema.get<int>() != 1) {
      fail("/schema", "unsupported schema version");
    }
  }

  const json& goods_node = member(root, "", "goods");
  if (!goods_node.is_array() || goods_node.size() < 2) {
    fail("/goods", "expected an array of at least two good names");
  }
  std::vector<std::string> goods;
  for (std::size_t j = 0; j < goods_node.size(); ++j) {
    if (!goods_node[j].is_string() || goods_node[j].get<std::string>().empty()) {
      fail("/goods/" + std::to_string(j), "expected a non-empty string");
    }
    goods.push_back(goods_node[j].get<std::string>());
  }
  const std::size_t l = goods.size();

  const json& agents_node = member(root, "", "agents");
  if (!agents_node.is_array() || agents_node.empty()) {
    fail("/agents", "expected a non-empty array of agents");
  }
  std::vector<Agent> agents;
  for (std::size_t i = 0; i < agents_node.size(); ++i) {
    const std::string path = "/agents/" + std::to_string(i);
    const json& a = agents_node[i];
    if (!a.is_object()) fail(path, "expected an agent object");
    reject_unknown_keys(a, path, {"utility", "endowment", "lower_bounds"});
    UtilityFunction utility = parse_utility(member(a, path, "utility"), path + "/utility", l);
    std::vector<double> endowment =
        number_array(member(a, path, "endowment"), path + "/endowment", l);
    std::vector<double> lower(l, 0.0);
    if (a.contains("lower_bounds")) {
      lower = number_array(a["lower_bounds"], path + "/lower_bounds", l);
    }
    try {
      agents.emplace_back(std::move(utility), Bundle(std::move(endowment)),
                          Bundle(std::move(lower)));
    } catch (const std::exception& e) {
      fail(path, e.what());
    }
  }

  double margin = Economy::kDefaultTruncationMargin;
  std::uint64_t seed = kDefaultSeed;
  std::optional<double> epsilon;
  if (root.contains("options")) {
    const json& options = root["options"];
    if (!options.is_object()) fail("/options", "expected an object");
    reject_unknown_keys(options, "/options", {"truncation_margin", "seed", "epsilon"});
    if (options.contains("truncation_margin")) {
      if (!options["truncation_margin"].is_number()) {
        fail("/options/truncation_margin", "expected a number");
      }
      margin = options["truncation_margin"].get<double>();
    }
    if (options.contains("seed")) {
      if (!options["seed"].is_number_unsigned()) {
        fail("/options/seed", "expected a non-negative integer");
      }
      seed = options["seed"].get<std::uint64_t>();
    }
    if (options.contains("epsilon")) {
      if (!options["epsilon"].is_number() || options["epsilon"].get<double>() <= 0.0) {
        fail("/options/epsilon", "expected a positive number");
      }
      epsilon = options["epsilon"].get<double>();
    }
  }

  try {
    Economy econ(std::move(goods), std::move(agents), margin);
    std::vector<StructureViolation> violations = validate_structure(econ);
    std::string canonical = serialize_economy(econ, seed, epsilon);
    return ParsedDocument{std::move(econ), std::move(violations), seed, epsilon,
                          std::move(canonical)};
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    fail("", e.what());
  }
}

std::string serialize_economy(const Economy& econ, std::uint64_t seed,
                              std::optional<double> epsilon) {
  return economy_to_json(econ, seed, epsilon).dump(2) + "\n";
}

std::string economy_digest(const Economy& econ) {
  json body;
  body["goods"] = econ.goods();
  json agents = json::array();
  for (const Agent& agent : econ.agents()) {
    agents.push_back({{"utility", utility_to_json(agent.utility)},
                      {"endowment", agent.endowment.values()},
                      {"lower_bounds", agent.lower_bounds.values()}});
  }
  body["agents"] = std::move(agents);
  body["truncation_margin"] = econ.truncation_margin();
  return hex64(fnv1a(body.dump()));
}

namespace {

struct Dispatch {
  int exit_code = kExitOk;
  std::string status = "ok";
  json result;
};

Dispatch dispatch_solve(const Economy& econ, const ParsedDocument& doc,
                        const CommandRequest& req, std::uint64_t seed) {
  Dispatch out;
  const double epsilon = req.epsilon ? *req.epsilon : doc.epsilon.value_or(kDefaultSolveEpsilon);
  out.result["audit"] = audit_to_json(audit_assumptions(econ, seed));
  out.result["structure_violations"] = violations_to_json(doc.violations);
  try {
    const EquilibriumCertificate cert = find_equilibrium_grid(econ, epsilon, req.max_refinements);
    out.result["certificate"] = certificate_to_json(econ, cert);
    out.result["residual"] = cert.excess.max_coordinate();
  } catch (const SearchBudgetExhausted& e) {
    out.result["failure"] = {{"message", e.what()},
                             {"best_price", e.best_price().values()},
                             {"best_residual", e.best_residual()},
                             {"refinements", e.refinements()}};
    out.status = "budget_exhausted";
    out.exit_code = kExitBudgetExhausted;
  } catch (const std::exception& e) {
    out.result["failure"] = {{"message", e.what()}};
    out.status = "budget_exhausted";
    out.exit_code = kExitBudgetExhausted;
  }
  return out;
}

Dispatch dispatch_certify(const Economy& econ, const ParsedDocument& doc,
                          const CommandRequest& req) {
  Dispatch out;
  if (!req.price.has_value()) fail("", "certify requires --price");
  const double epsilon = req.epsilon ? *req.epsilon : doc.epsilon.value_or(1e-6);
  bool normalized = false;
  const PriceVector p = price_from_flag(*req.price, normalized);
  out.result["price_normalized"] = normalized;

  const CertifyOutcome outcome = certify(econ, p, epsilon);
  json violations = json::array();
  for (const CertificateViolation& v : outcome.violations) {
    violations.push_back({{"good", econ.goods()[v.good]},
                          {"price", v.price},
                          {"excess", v.excess},
                          {"reason", v.reason}});
  }
  out.result["accepted"] = outcome.accepted;
  out.result["certificate"] = certificate_to_json(econ, outcome.certificate);
  out.result["violations"] = std::move(violations);
  out.result["disposal"] = disposal(econ, p).amounts;
  if (!outcome.accepted) {
    out.status = "rejected";
    out.exit_code = kExitAnalyticFail;
  }
  return out;
}

Dispatch dispatch_audit(const Economy& econ, const ParsedDocument& doc, std::uint64_t seed) {
  Dispatch out;
  out.result["audit"] = audit_to_json(audit_assumptions(econ, seed));
  out.result["structure_violations"] = violations_to_json(doc.violations);
  return out;
}

Dispatch dispatch_probe(const Economy& econ, const CommandRequest& req, std::uint64_t seed) {
  Dispatch out;
  const std::vector<double> radii = default_probe_radii();

  bool any_fail = false;
  if (req.pathology) {
    const PathologyInstance instance = build_cheapest_point_pathology();
    const ContinuityReport upper =
        probe_upper_hemicontinuity(instance.economy, instance.agent_index, instance.price, radii,
                                   ProbeTarget::budget_set, seed);
    const ContinuityReport lower = probe_lower_hemicontinuity(
        instance.economy, instance.agent_index, instance.price, {instance.target}, radii,
        ProbeTarget::budget_set, seed);
    any_fail = upper.verdict == ProbeVerdict::fail || lower.verdict == ProbeVerdict::fail;
    out.result["pathology"] = true;
    out.result["instance"] = {{"price", instance.price.values()},
                              {"target", instance.target.values()},
                              {"agent", instance.agent_index}};
    out.result["upper"] = probe_to_json(upper);
    out.result["lower"] = probe_to_json(lower);
  } else {
    if (!req.price.has_value()) fail("", "probe requires --price or --pathology");
    if (req.agent_index >= econ.num_agents()) fail("", "probe agent index out of range");
    bool normalized = false;
    const PriceVector p = price_from_flag(*req.price, normalized);
    out.result["pathology"] = false;
    out.result["price_normalized"] = normalized;

    const std::vector<Bundle> demand_targets =
        demand(econ, req.agent_index, p).extreme_points;
    std::vector<Bundle> budget_targets{econ.agent(req.agent_index).endowment};
    const std::vector<Bundle> vertices = budget_polytope_vertices(econ, req.agent_index, p);
    for (std::size_t v = 0; v < vertices.size() && v < 6; ++v) budget_targets.push_back(vertices[v]);

    const ContinuityReport demand_upper = probe_upper_hemicontinuity(
        econ, req.agent_index, p, radii, ProbeTarget::demand_set, seed);
    const ContinuityReport demand_lower = probe_lower_hemicontinuity(
        econ, req.agent_index, p, demand_targets, radii, ProbeTarget::demand_set, seed);
    const ContinuityReport budget_upper = probe_upper_hemicontinuity(
        econ, req.agent_index, p, radii, ProbeTarget::budget_set, seed);
    const ContinuityReport budget_lower = probe_lower_hemicontinuity(
        econ, req.agent_index, p, budget_targets, radii, ProbeTarget::budget_set, seed);

    for (const ContinuityReport* r : {&demand_upper, &demand_lower, &budget_upper, &budget_lower}) {
      any_fail = any_fail || r->verdict == ProbeVerdict::fail;
    }
    out.result["demand"] = {{"upper", probe_to_json(demand_upper)},
                            {"lower", probe_to_json(demand_lower)}};
    out.result["budget"] = {{"upper", probe_to_json(budget_upper)},
                            {"lower", probe_to_json(budget_lower)}};
  }
  if (any_fail) {
    out.status = "probe_failed";
    out.exit_code = kExitAnalyticFail;
  }
  return out;
}

Dispatch dispatch_trace(const Economy& econ, const ParsedDocument& doc,
                        const CommandRequest& req) {
  Dispatch out;
  if (!req.start.has_value()) fail("", "trace requires --start");
  const double epsilon = req.epsilon ? *req.epsilon : doc.epsilon.value_or(1e-6);
  bool normalized = false;
  const PriceVector p0 = price_from_flag(*req.start, normalized);
  out.result["start_normalized"] = normalized;

  const TatonnementResult result = tatonnement(econ, p0, req.step, req.iterations, epsilon);
  json steps = json::array();
  for (const TatonnementStep& step : result.trace) {
    steps.push_back({{"iteration", step.iteration},
                     {"price", step.price.values()},
                     {"excess", step.excess.values()},
                     {"residual", step.residual}});
  }
  out.result["trace"] = std::move(steps);
  out.result["converged"] = result.certificate.has_value();
  if (result.certificate.has_value()) {
    out.result["certificate"] = certificate_to_json(econ, *result.certificate);
  } else {
    out.result["certificate"] = nullptr;
  }
  return out;
}

json flags_to_json(const CommandRequest& req) {
  json flags;
  flags["epsilon"] = req.epsilon.has_value() ? json(*req.epsilon) : json(nullptr);
  flags["max_refinements"] = req.max_refinements;
  flags["agent"] = req.agent_index;
  flags["pathology"] = req.pathology;
  flags["price"] = req.price.has_value() ? json(*req.price) : json(nullptr);
  flags["start"] = req.start.has_value() ? json(*req.start) : json(nullptr);
  flags["step"] = req.step;
  flags["iterations"] = req.iterations;
  flags["margin"] = req.margin_override.has_value() ? json(*req.margin_override) : json(nullptr);
  return flags;
}

}  // namespace

RunOutcome run_command(const CommandRequest& request) {
  const auto t0 = std::chrono::steady_clock::now();
  json report;
  report["command"] = {{"verb", request.verb}, {"flags", flags_to_json(request)}};

  Dispatch outcome;
  try {
    if (request.verb != "solve" && request.verb != "certify" && request.verb != "audit" &&
        request.verb != "probe" && request.verb != "trace") {
      fail("", "unknown command '" + request.verb + "'");
    }

    if (request.verb == "probe" && request.pathology) {
      report["economy_digest"] = nullptr;
      report["seed"] = request.seed_override.value_or(kDefaultSeed);
      outcome = dispatch_probe(build_cheapest_point_pathology().economy, request,
                               request.seed_override.value_or(kDefaultSeed));
    } else {
      ParsedDocument doc = parse_economy(request.document_text);
      Economy econ = doc.economy;
      if (request.margin_override.has_value()) {
        econ = Economy(econ.goods(), econ.agents(), *request.margin_override);
        doc.violations = validate_structure(econ);
      }
      const std::uint64_t seed = request.seed_override.value_or(doc.seed);
      report["economy_digest"] = economy_digest(econ);
      report["seed"] = seed;

      if (request.verb == "solve") {
        outcome = dispatch_solve(econ, doc, request, seed);
      } else if (request.verb == "certify") {
        outcome = dispatch_certify(econ, doc, request);
      } else if (request.verb == "audit") {
        outcome = dispatch_audit(econ, doc, seed);
      } else if (request.verb == "probe") {
        outcome = dispatch_probe(econ, request, seed);
      } else {
        outcome = dispatch_trace(econ, doc, request);
      }
    }
  } catch (const SchemaError& e) {
    outcome.exit_code = kExitSchemaError;
    outcome.status = "schema_error";
    outcome.result = {{"error", e.what()}, {"path", e.path()}};
    if (!report.contains("economy_digest")) report["economy_digest"] = nullptr;
    if (!report.contains("seed")) report["seed"] = request.seed_override.value_or(kDefaultSeed);
  } catch (const std::exception& e) {
    // Analytic dead-end (an empty budget set at the probed price, say)
    // rather than a malformed document.
    outcome.exit_code = kExitAnalyticFail;
    outcome.status = "error";
    outcome.result = {{"error", e.what()}};
    if (!report.contains("economy_digest")) report["economy_digest"] = nullptr;
    if (!report.contains("seed")) report["seed"] = request.seed_override.value_or(kDefaultSeed);
  }

  report["status"] = outcome.status;
  report["result"] = std::move(outcome.result);

  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  RunOutcome run;
  run.exit_code = outcome.exit_code;
  if (request.format == ReportFormat::machine) {
    run.report = report.dump() + "\n";
  } else {
    run.report = render_human(request.verb, report, wall_ms);
  }
  return run;
}

namespace {

std::string join_numbers(const json& array) {
  std::ostringstream out;
  out.precision(12);
  for (std::size_t i = 0; i < array.size(); ++i) {
    if (i) out << ", ";
    out << array[i].get<double>();
  }
  return out.str();
}

std::string render_human(const std::string& verb, const json& report, double wall_ms) {
  std::ostringstream out;
  out.precision(12);
  out << "walras " << verb << " report\n";
  if (!report["economy_digest"].is_null()) {
    out << "economy digest: " << report["economy_digest"].get<std::string>() << "\n";
  }
  out << "seed: " << report["seed"].get<std::uint64_t>() << "\n";
  out << "status: " << report["status"].get<std::string>() << "\n";
  const json& result = report["result"];

  if (report["status"] == "schema_error") {
    out << "error: " << result["error"].get<std::string>() << "\n";
  } else if (verb == "solve") {
    if (result.contains("certificate")) {
      const json& cert = result["certificate"];
      out << "method: " << cert["method"].get<std::string>() << " (steps "
          << cert["steps"].get<std::size_t>() << ", epsilon " << cert["epsilon"].get<double>()
          << ")\n";
      out << "price:  [" << join_numbers(cert["price"]) << "]\n";
      out << "excess: [" << join_numbers(cert["excess"]) << "]\n";
    } else {
      const json& failure = result["failure"];
      out << "no certificate: " << failure["message"].get<std::string>() << "\n";
      if (failure.contains("best_price")) {
        out << "best price: [" << join_numbers(failure["best_price"]) << "] residual "
            << failure["best_residual"].get<double>() << "\n";
      }
    }
    const json& audit = result["audit"];
    out << "audit: " << (audit["all_pass"].get<bool>() ? "all assumptions hold" : "failures");
    for (const json& check : audit["checks"]) {
      if (check["status"] == "fail") {
        out << "\n  fail: " << check["assumption"].get<std::string>() << " — "
            << check["note"].get<std::string>();
      }
    }
    out << "\n";
  } else if (verb == "certify") {
    if (result.value("price_normalized", false)) {
      out << "note: raw prices were rescaled onto the simplex\n";
    }
    out << (result["accepted"].get<bool>() ? "accepted" : "rejected") << "\n";
    const json& cert = result["certificate"];
    out << "price:  [" << join_numbers(cert["price"]) << "]\n";
    out << "excess: [" << join_numbers(cert["excess"]) << "]\n";
    for (const json& v : result["violations"]) {
      out << "violation: " << v["good"].get<std::string>() << " — "
          << v["reason"].get<std::string>() << " (price " << v["price"].get<double>()
          << ", excess " << v["excess"].get<double>() << ")\n";
    }
    out << "disposal: [" << join_numbers(result["disposal"]) << "]\n";
  } else if (verb == "audit") {
    const json& audit = result["audit"];
    out << "assumptions: " << (audit["all_pass"].get<bool>() ? "all hold" : "failures found")
        << "\n";
    for (const json& check : audit["checks"]) {
      out << "  " << check["status"].get<std::string>() << ": "
          << check["assumption"].get<std::string>() << " — " << check["note"].get<std::string>()
          << "\n";
    }
    for (const json& v : result["structure_violations"]) {
      out << "  structure: " << v["assumption"].get<std::string>() << " — "
          << v["witness"].get<std::string>() << "\n";
    }
  } else if (verb == "probe") {
    auto render_probe = [&](const char* name, const json& probe) {
      out << name << ": " << probe["note"].get<std::string>() << "\n";
      if (!probe["witness"].is_null()) {
        out << "  witness point: [" << join_numbers(probe["witness"]["point"]) << "] residual "
            << probe["witness"]["residual"].get<double>() << "\n";
      }
    };
    if (result["pathology"].get<bool>()) {
      out << "built-in cheapest-point pathology instance\n";
      render_probe("upper (budget set)", result["upper"]);
      render_probe("lower (budget set)", result["lower"]);
    } else {
      if (result.value("price_normalized", false)) {
        out << "note: raw prices were rescaled onto the simplex\n";
      }
      render_probe("upper (demand)", result["demand"]["upper"]);
      render_probe("lower (demand)", result["demand"]["lower"]);
      render_probe("upper (budget)", result["budget"]["upper"]);
      render_probe("lower (budget)", result["budget"]["lower"]);
    }
  } else if (verb == "trace") {
    if (result.value("start_normalized", false)) {
      out << "note: raw starting prices were rescaled onto the simplex\n";
    }
    const json& steps = result["trace"];
    out << "iterations: " << steps.size() - 1 << "\n";
    out << "converged: " << (result["converged"].get<bool>() ? "yes" : "no") << "\n";
    const std::size_t show = std::min<std::size_t>(steps.size(), 10);
    for (std::size_t i = 0; i < show; ++i) {
      out << "  t=" << steps[i]["iteration"].get<std::size_t>() << " p=["
          << join_numbers(steps[i]["price"]) << "] residual "
          << steps[i]["residual"].get<double>() << "\n";
    }
    if (steps.size() > show) {
      out << "  ... (" << steps.size() - show << " more steps)\n";
      const json& last = steps.back();
      out << "  t=" << last["iteration"].get<std::size_t>() << " p=["
          << join_numbers(last["price"]) << "] residual " << last["residual"].get<double>()
          << "\n";
    }
  }

  out << "wall-time: " << wall_ms << " ms\n";
  return out.str();
}

}  // namespace

}  // namespace walras::cli
