// wbmo: runs the verification suites and writes report.json plus CSV tables.
//
// Settings come from, in increasing precedence: a JSON config file
// (--config), WBMO_* environment variables, and command-line flags.
// Exit status: 0 when no check fails, 1 when a check fails or a computation
// aborts, 2 on invalid configuration.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wbmo/io.hpp"
#include "wbmo/suites.hpp"

namespace {

using nlohmann::json;
using wbmo::suites::SuiteConfig;

struct Flags {
  std::string config;
  std::optional<int> depth;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> n_max;
  std::optional<double> tolerance;
  std::optional<std::string> weights;
  std::optional<unsigned> threads;
};

struct Settings {
  SuiteConfig suite;
  std::string out = ".";
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::optional<std::string> env(const char* name) {
  if (const char* v = std::getenv(name); v && *v) return std::string(v);
  return std::nullopt;
}

template <class T>
T parse_env(const std::string& name, const std::string& text) {
  std::istringstream is(text);
  T v{};
  is >> v;
  if (!is || !is.eof()) throw wbmo::contract_violation("cannot parse " + name + "='" + text + "'");
  return v;
}

void apply_file(Settings& s, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw wbmo::contract_violation("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
    if (j.contains("depth")) s.suite.depth = j.at("depth").get<int>();
    if (j.contains("seed")) s.suite.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("n_max")) s.suite.n_max = j.at("n_max").get<int>();
    if (j.contains("tolerance")) s.suite.tolerance = j.at("tolerance").get<double>();
    if (j.contains("threads")) s.suite.threads = j.at("threads").get<unsigned>();
    if (j.contains("weights")) s.suite.weights = j.at("weights").get<std::vector<std::string>>();
    if (j.contains("out")) s.out = j.at("out").get<std::string>();
  } catch (const json::exception& e) {
    throw wbmo::contract_violation("malformed config file " + path + ": " + e.what());
  }
}

void apply_env(Settings& s) {
  if (auto v = env("WBMO_DEPTH")) s.suite.depth = parse_env<int>("WBMO_DEPTH", *v);
  if (auto v = env("WBMO_SEED")) s.suite.seed = parse_env<std::uint64_t>("WBMO_SEED", *v);
  if (auto v = env("WBMO_N_MAX")) s.suite.n_max = parse_env<int>("WBMO_N_MAX", *v);
  if (auto v = env("WBMO_TOLERANCE")) s.suite.tolerance = parse_env<double>("WBMO_TOLERANCE", *v);
  if (auto v = env("WBMO_THREADS")) s.suite.threads = parse_env<unsigned>("WBMO_THREADS", *v);
  if (auto v = env("WBMO_WEIGHTS")) s.suite.weights = split_list(*v);
  if (auto v = env("WBMO_OUT")) s.out = *v;
}

void apply_flags(Settings& s, const Flags& f) {
  if (f.depth) s.suite.depth = *f.depth;
  if (f.seed) s.suite.seed = *f.seed;
  if (f.n_max) s.suite.n_max = *f.n_max;
  if (f.tolerance) s.suite.tolerance = *f.tolerance;
  if (f.threads) s.suite.threads = *f.threads;
  if (f.weights) s.suite.weights = split_list(*f.weights);
  if (f.out) s.out = *f.out;
}

json config_json(const SuiteConfig& c) {
  return {{"depth", c.depth}, {"seed", c.seed}, {"n_max", c.n_max}, {"tolerance", c.tolerance}, {"weights", c.weights}};
}

int run(const std::string& suite, const Settings& s) {
  const auto out = wbmo::suites::run_suite(suite, s.suite);
  namespace fs = std::filesystem;
  fs::create_directories(s.out);
  json doc = wbmo::io::report_document(out.rows);
  doc["suite"] = suite;
  doc["config"] = config_json(s.suite);
  {
    std::ofstream f(fs::path(s.out) / "report.json");
    f << doc.dump(2) << '\n';
    if (!f) throw std::runtime_error("cannot write report.json in " + s.out);
  }
  for (const auto& [name, table] : out.tables) {
    std::ofstream f(fs::path(s.out) / (name + ".csv"));
    table.write(f);
    if (!f) throw std::runtime_error("cannot write " + name + ".csv in " + s.out);
  }
  std::size_t fails = 0;
  for (const auto& r : out.rows) {
    if (r.passed()) continue;
    ++fails;
    std::cerr << "FAIL " << r.check_id << ": lhs " << r.lhs << " rhs " << r.rhs << (r.notes.empty() ? "" : " (")
              << r.notes << (r.notes.empty() ? "" : ")") << '\n';
  }
  const auto& summary = doc["summary"];
  std::cout << suite << ": " << summary["pass"] << " pass, " << summary["fail"] << " fail, " << summary["skipped"]
            << " skipped; report in " << (fs::path(s.out) / "report.json").string() << '\n';
  return fails == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted BMO verification suites"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  app.add_option("--config", flags.config, "JSON config file");
  app.add_option("--depth", flags.depth, "grid depth (4..16)");
  app.add_option("--seed", flags.seed, "random seed");
  app.add_option("--out", flags.out, "output directory");
  app.add_option("--n-max", flags.n_max, "largest n for the counterexample suite");
  app.add_option("--tolerance", flags.tolerance, "relative tolerance for inequality and identity checks");
  app.add_option("--weights", flags.weights, "comma list: identity, step, lacunary, power:<delta>, stock");
  app.add_option("--threads", flags.threads, "worker threads (0 = all cores)");

  std::string chosen;
  const std::vector<std::pair<std::string, std::string>> subs{
      {"constants", "weight characteristics and the B(Omega) embedding"},
      {"counterexamples", "exact sparse-operator counterexamples"},
      {"sparse-bmo", "BMO bounds for sparse operators"},
      {"rdf", "Rubio de Francia weights and the extrapolation chain"},
      {"czo", "Hilbert transform: sparse domination and weighted BMO bounds"},
      {"all", "every suite"}};
  for (const auto& [name, help] : subs) {
    auto* sub = app.add_subcommand(name, help);
    sub->callback([&chosen, n = name] { chosen = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Settings settings;
  try {
    if (!flags.config.empty()) apply_file(settings, flags.config);
    apply_env(settings);
    apply_flags(settings, flags);
    settings.suite.validate();
  } catch (const std::exception& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 2;
  }

  try {
    return run(chosen, settings);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
