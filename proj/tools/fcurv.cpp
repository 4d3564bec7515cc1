// fcurv: command-line front end for the curvature verification library.
//
//   fcurv report  --scenario FILE [--point CSV] [--direction CSV]
//   fcurv verify  [--suite NAME] [--scenario FILE] [--samples N] [--seed S]
//                 [--box B] [--margin M] [--json]
//   fcurv catalog [NAME] [--json]
//
// Exit codes: 0 all checks pass, 1 at least one check fails, 2 the only
// deviations are recorded errata, 64 usage or input error.
//
// JSON output is emitted with lexicographically sorted keys and is
// byte-identical across runs for the same scenario and seed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "finsler/verify.hpp"

namespace {

using nlohmann::json;
using namespace finsler;

// --- scenario files ---------------------------------------------------------

struct Scenario {
  NamedScenario named;
  bool has_samples = false;
  int samples = 50;
  bool has_seed = false;
  std::uint64_t seed = 42;
  bool has_box = false;
  double box = 0.3;
  json echo;  // scenario as parsed, with expression strings passed through verbatim
};

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("scenario file " + path + " is not valid JSON: " + e.what());
  }

  Scenario sc;
  if (!j.contains("dimension") || !j["dimension"].is_number_integer())
    throw std::invalid_argument("scenario needs an integer \"dimension\"");
  const int n = j["dimension"].get<int>();
  if (n < 2) throw std::invalid_argument("scenario dimension must be at least 2");

  if (!j.contains("metric") || !j["metric"].is_array() || static_cast<int>(j["metric"].size()) != n)
    throw std::invalid_argument("scenario needs a \"metric\" array of " + std::to_string(n) +
                                " rows");
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : j["metric"]) {
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw std::invalid_argument("each metric row must hold " + std::to_string(n) +
                                  " expression strings");
    std::vector<std::string> r;
    for (const auto& cell : row) r.push_back(cell.get<std::string>());
    rows.push_back(std::move(r));
  }

  if (!j.contains("oneform") || !j["oneform"].is_array() ||
      static_cast<int>(j["oneform"].size()) != n)
    throw std::invalid_argument("scenario needs a \"oneform\" array of " + std::to_string(n) +
                                " expression strings");
  std::vector<std::string> entries;
  for (const auto& cell : j["oneform"]) entries.push_back(cell.get<std::string>());

  PhiFunction phi = PhiFunction::matsumoto();
  if (j.contains("phi")) {
    const auto& p = j["phi"];
    if (p.is_string()) {
      const std::string name = p.get<std::string>();
      if (name == "matsumoto")
        phi = PhiFunction::matsumoto();
      else if (name == "randers")
        phi = PhiFunction::randers();
      else
        throw std::invalid_argument("unknown phi name: " + name +
                                    " (use \"matsumoto\", \"randers\", or {\"custom\": expr})");
    } else if (p.is_object() && p.contains("custom") && p["custom"].is_string()) {
      phi = PhiFunction::custom_expr(p["custom"].get<std::string>());
    } else {
      throw std::invalid_argument("\"phi\" must be a name string or {\"custom\": expr}");
    }
  }

  try {
    sc.named.fm = FinslerMetric{MetricField::from_strings(n, rows),
                                OneFormField::from_strings(n, entries), phi};
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("scenario expression error: ") + e.what());
  }
  sc.named.name = j.value("name", std::string("user scenario"));

  if (j.contains("samples")) {
    sc.samples = j["samples"].get<int>();
    sc.has_samples = true;
  }
  if (j.contains("seed")) {
    sc.seed = j["seed"].get<std::uint64_t>();
    sc.has_seed = true;
  }
  if (j.contains("box")) {
    sc.box = j["box"].get<double>();
    sc.has_box = true;
  }

  // echo rebuilt from the parsed fields so output round-trips byte-exactly
  sc.echo["name"] = sc.named.name;
  sc.echo["dimension"] = n;
  json mrows = json::array();
  for (const auto& row : sc.named.fm.metric.source) {
    json r = json::array();
    for (const auto& cell : row) r.push_back(cell);
    mrows.push_back(std::move(r));
  }
  sc.echo["metric"] = std::move(mrows);
  sc.echo["oneform"] = sc.named.fm.oneform.source;
  if (phi.kind == PhiFunction::Kind::custom)
    sc.echo["phi"] = json{{"custom", phi.source}};
  else
    sc.echo["phi"] = phi.name();
  if (sc.has_samples) sc.echo["samples"] = sc.samples;
  if (sc.has_seed) sc.echo["seed"] = sc.seed;
  if (sc.has_box) sc.echo["box"] = sc.box;
  return sc;
}

std::vector<double> parse_csv_doubles(const std::string& text, int n, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(what) + " has a malformed entry: " + item);
    }
  }
  if (static_cast<int>(out.size()) != n)
    throw std::invalid_argument(std::string(what) + " must have " + std::to_string(n) +
                                " comma-separated entries");
  return out;
}

// --- report -----------------------------------------------------------------

int cmd_report(const Scenario& sc, const std::string& point_csv,
               const std::string& direction_csv) {
  const FinslerMetric& fm = sc.named.fm;
  const int n = fm.n();

  SampleOptions opt;
  opt.samples = 1;
  opt.seed = sc.seed;
  opt.box = sc.box;

  std::vector<double> x, y;
  if (!point_csv.empty() || !direction_csv.empty()) {
    if (point_csv.empty() || direction_csv.empty())
      throw std::invalid_argument("--point and --direction must be given together");
    x = parse_csv_doubles(point_csv, n, "--point");
    y = parse_csv_doubles(direction_csv, n, "--direction");
  } else {
    auto sp = draw_samples(fm.metric, fm.oneform, opt);
    x = sp[0].x;
    y = sp[0].y;
  }

  json out;
  out["command"] = "report";
  out["scenario"] = sc.echo;
  out["point"] = x;
  out["direction"] = y;

  auto crep = curvature_report(fm, x, y);
  json curv;
  curv["R"] = crep.R;
  curv["ric"] = crep.ric;
  curv["flag_curvature"] = crep.flag_curvature;
  curv["scalar_flag_residual"] = crep.flag_residual;
  curv["ry_residual"] = crep.ry_residual;
  curv["weyl_norm"] = crep.weyl_norm;
  curv["curvature_scale"] = crep.curvature_scale;
  out["curvature"] = std::move(curv);

  json spray;
  auto split = projective_split(fm, x, y);
  auto closed = spray_closed_form(fm, x, y);
  auto direct = spray_direct(fm, x, y);
  double diff = 0.0;
  for (int i = 0; i < n; ++i)
    diff = std::max(diff, std::fabs(closed[static_cast<std::size_t>(i)] -
                                    direct[static_cast<std::size_t>(i)]));
  spray["alpha_part"] = split.alpha_part;
  spray["transverse"] = split.transverse;
  spray["projective_factor"] = split.P;
  spray["closed"] = closed;
  spray["direct"] = direct;
  spray["max_closed_direct_diff"] = diff;
  out["spray"] = std::move(spray);

  auto cls = killing_classifier(fm.metric, fm.oneform, 20, sc.seed, sc.box);
  json ob;
  ob["parallel"] = cls.parallel;
  ob["killing"] = cls.killing;
  ob["closed"] = cls.closed;
  ob["constant_length"] = cls.constant_length;
  ob["max_nabla"] = cls.max_nabla;
  ob["max_r"] = cls.max_r;
  ob["max_s"] = cls.max_s;
  ob["max_dlen"] = cls.max_dlen;
  out["oneform_classification"] = std::move(ob);

  // headline values duplicated at top level for plot/CI consumers
  out["G_closed"] = closed;
  out["G_direct"] = direct;
  out["K"] = crep.flag_curvature;
  out["W_norm"] = crep.weyl_norm;
  out["scalar_residual"] = crep.flag_residual;

  std::cout << out.dump(2) << "\n";
  return 0;
}

// --- verify -----------------------------------------------------------------

json check_to_json(const CheckRecord& c) {
  json j;
  j["name"] = c.name;
  j["status"] = c.status;
  j["max_error"] = c.max_error;
  j["samples"] = c.samples;
  if (!c.details.empty()) j["details"] = c.details;
  return j;
}

int cmd_verify(const std::string& suite, const Scenario* sc, const SampleOptions& opt,
               bool as_json) {
  VerifyReport rep;
  try {
    rep = run_suite(suite, opt, sc ? &sc->named : nullptr);
  } catch (const std::invalid_argument&) {
    throw;  // unknown suite or unsupported scenario/suite combination: usage error
  }

  const bool failed = rep.failed();
  const bool errata = rep.has_erratum();
  const std::string result = failed ? "fail" : (errata ? "pass with errata" : "pass");

  if (as_json) {
    json out;
    out["command"] = "verify";
    out["suite"] = rep.suite;
    json o;
    o["samples"] = opt.samples;
    o["seed"] = opt.seed;
    o["box"] = opt.box;
    o["margin"] = opt.margin;
    out["options"] = std::move(o);
    if (sc) out["scenario"] = sc->echo;
    json checks = json::array();
    for (const auto& c : rep.checks) checks.push_back(check_to_json(c));
    out["checks"] = std::move(checks);
    out["result"] = result;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "suite: " << rep.suite << "\n";
    int nfail = 0, nerr = 0;
    for (const auto& c : rep.checks) {
      std::string tag = c.status == "pass" ? "PASS   " : (c.status == "fail" ? "FAIL   " : "ERRATUM");
      if (c.status == "fail") ++nfail;
      if (c.status == "erratum") ++nerr;
      std::ostringstream line;
      line << tag << "  " << c.name << "  (max_error=" << c.max_error
           << ", samples=" << c.samples << ")";
      std::cout << line.str() << "\n";
      if (!c.details.empty()) std::cout << "         " << c.details << "\n";
    }
    std::cout << "result: " << result << " (checks: " << rep.checks.size()
              << ", failed: " << nfail << ", errata: " << nerr << ")\n";
  }
  return failed ? 1 : (errata ? 2 : 0);
}

// --- catalog ------------------------------------------------------------------

int cmd_catalog(const std::string& show, bool as_json) {
  auto entries = catalog_entries();
  if (!show.empty()) {
    const CatalogEntry* found = nullptr;
    for (const auto& e : entries)
      if (e.name == show) found = &e;
    if (!found) throw std::invalid_argument("unknown catalog entry: " + show);
    if (as_json) {
      json out;
      out["name"] = found->name;
      out["signature"] = found->signature;
      out["description"] = found->description;
      out["sample"] = found->sample;
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << found->name << "\n  " << found->signature << "\n  " << found->description
                << "\n  sample components:\n";
      for (const auto& line : found->sample) std::cout << "    " << line << "\n";
    }
    return 0;
  }
  if (as_json) {
    json out = json::array();
    for (const auto& e : entries) {
      json je;
      je["name"] = e.name;
      je["signature"] = e.signature;
      je["description"] = e.description;
      je["sample"] = e.sample;
      out.push_back(std::move(je));
    }
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& e : entries)
      std::cout << e.name << "\n  " << e.signature << "\n  " << e.description << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic-numeric verification of (alpha,beta)-metric curvature formulas"};
  app.require_subcommand(1);

  std::string scenario_path, point_csv, direction_csv, suite = "all", show_name;
  int samples = 50;
  std::uint64_t seed = 42;
  double box = 0.3, margin = 0.05;
  bool as_json = false;

  auto* report = app.add_subcommand("report", "curvature report at one flag of a scenario");
  report->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  report->add_option("--point", point_csv, "base point, comma-separated");
  report->add_option("--direction", direction_csv, "flag direction, comma-separated");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite,
                     "one of: spray, weyl, contraction, killing, symbolic, theorem, all");
  verify->add_option("--scenario", scenario_path, "scenario JSON file");
  auto* opt_samples = verify->add_option("--samples", samples, "samples per sweep");
  auto* opt_seed = verify->add_option("--seed", seed, "sampler seed");
  auto* opt_box = verify->add_option("--box", box, "base-point box half-width");
  verify->add_option("--margin", margin, "domain margin for sample rejection");
  verify->add_flag("--json", as_json, "emit JSON instead of text");

  auto* catalog = app.add_subcommand("catalog", "list built-in metric/1-form families");
  catalog->add_option("name", show_name, "entry to show in full");
  catalog->add_flag("--json", as_json, "emit JSON instead of text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  try {
    if (app.got_subcommand(report)) {
      Scenario sc = load_scenario(scenario_path);
      return cmd_report(sc, point_csv, direction_csv);
    }
    if (app.got_subcommand(verify)) {
      Scenario sc;
      const bool have_sc = !scenario_path.empty();
      if (have_sc) sc = load_scenario(scenario_path);
      SampleOptions opt;
      if (have_sc && sc.has_samples) opt.samples = sc.samples;
      if (have_sc && sc.has_seed) opt.seed = sc.seed;
      if (have_sc && sc.has_box) opt.box = sc.box;
      if (opt_samples->count() > 0) opt.samples = samples;
      if (opt_seed->count() > 0) opt.seed = seed;
      if (opt_box->count() > 0) opt.box = box;
      opt.margin = margin;
      if (opt.samples <= 0) throw std::invalid_argument("--samples must be positive");
      return cmd_verify(suite, have_sc ? &sc : nullptr, opt, as_json);
    }
    if (app.got_subcommand(catalog)) return cmd_catalog(show_name, as_json);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 64;
}
