#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heraldsim/analytic.hpp"
#include "heraldsim/config.hpp"
#include "heraldsim/scans.hpp"
#include "heraldsim/sweep.hpp"
#include "heraldsim/verify.hpp"

namespace {

using heraldsim::linspace;
using heraldsim::logspace;
using heraldsim::pi;
using nlohmann::json;

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm split{};
  gmtime_r(&now, &split);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &split);
  return buffer;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  stream << content;
  if (!stream) throw std::runtime_error("write to '" + path.string() + "' failed");
}

json read_json_file(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) throw std::invalid_argument("config: cannot open '" + path + "'");
  json doc;
  try {
    stream >> doc;
  } catch (const json::parse_error& error) {
    throw std::invalid_argument("config: '" + path + "' is not valid JSON: " +
                                error.what());
  }
  return doc;
}

heraldsim::Complex complex_field(const json& node) {
  if (node.is_number()) return heraldsim::Complex(node.get<double>());
  if (node.is_array() && node.size() == 2 && node[0].is_number() && node[1].is_number())
    return heraldsim::Complex(node[0].get<double>(), node[1].get<double>());
  throw std::invalid_argument("config: amplitudes must be numbers or [re, im] pairs");
}

// Flat key-value system description: n and g are required; model ("rwa"),
// delta (0), cut (2 exchange-only / 3 full), omega (full model), amplitudes,
// and ground_amplitude are optional.
heraldsim::SystemConfig load_config(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config: expected a JSON object");
  for (const char* key : {"n", "g"})
    if (!doc.contains(key))
      throw std::invalid_argument(std::string("config: missing required key '") + key +
                                  "'");
  const int arms = doc.at("n").get<int>();
  const double area = doc.at("g").get<double>();
  const double delta = doc.value("delta", 0.0);
  const std::string model = doc.value("model", "rwa");

  heraldsim::SystemConfig config;
  if (model == "rwa") {
    config = heraldsim::symmetric_rwa_config(arms, area, delta, doc.value("cut", 2));
  } else if (model == "full") {
    if (!doc.contains("omega"))
      throw std::invalid_argument("config: the full model requires 'omega'");
    const double omega = doc.at("omega").get<double>();
    config = heraldsim::resonant_full_config(arms, area, omega, 1.0, doc.value("cut", 3));
    if (delta != 0.0) {
      config.omega0 = omega - 2.0 * delta;
      for (auto& arm : config.arms) arm.detuning = 2.0 * delta;
    }
  } else {
    throw std::invalid_argument("config: unknown model '" + model + "'");
  }
  if (doc.contains("amplitudes")) {
    std::vector<heraldsim::Complex> amplitudes;
    for (const auto& entry : doc.at("amplitudes")) amplitudes.push_back(complex_field(entry));
    config.excitation_amplitudes = std::move(amplitudes);
  }
  if (doc.contains("ground_amplitude"))
    config.ground_amplitude = complex_field(doc.at("ground_amplitude"));
  config.validate();
  return config;
}

struct Flags {
  int n = 3;
  std::string model = "rwa";
  double g = 0.0;
  double delta = 0.0;
  int points = 0;
  std::string kind = "coupling";
  std::string config_path;
  std::string out_dir = ".";
  bool svg = false;
};

// the integrator the counter-rotating comparison is calibrated for
heraldsim::IntegratorSpec beyond_rwa_integrator() {
  return {heraldsim::StepMethod::fixed_step, 1e-6, 0.0, 512, 120};
}

json manifest_from_flags(const std::string& subcommand, const Flags& flags,
                         const CLI::App* sub) {
  const auto given = [&](const char* name) {
    const auto* option = sub->get_option_no_throw(name);
    return option != nullptr && option->count() > 0;
  };

  int arms = flags.n;
  double area = flags.g;
  double delta = flags.delta;
  heraldsim::scans::ScanOptions options;
  bool have_area = given("--g");
  bool have_delta = given("--delta");
  if (given("--model")) {
    if (flags.model != "rwa" && flags.model != "full")
      throw CLI::ValidationError("--model", "expected 'rwa' or 'full'");
    options.model = flags.model == "rwa" ? heraldsim::Model::rwa : heraldsim::Model::full;
    if (options.model == heraldsim::Model::full) options.sideband_cut = 3;
  }

  // a flat config file supplies whatever the flags left unset
  if (!flags.config_path.empty()) {
    const auto config = load_config(read_json_file(flags.config_path));
    if (!given("--n")) arms = config.arm_count();
    if (!have_area) {
      area = heraldsim::accumulated_area(config.arms.front().envelope, 1.0);
      have_area = true;
    }
    if (!have_delta) {
      delta = config.arms.front().detuning / 2.0;
      have_delta = true;
    }
    if (!given("--model")) {
      options.model = config.model;
      options.sideband_cut = config.sideband_cut;
      if (config.model == heraldsim::Model::full) options.omega = config.omega;
    }
  }

  const int points = flags.points;
  const auto grid_points = [&](int fallback) { return points > 0 ? points : fallback; };

  json manifest{{"subcommand", subcommand}};
  json parameters = json::object();
  json grids = json::object();
  if (subcommand == "sweep-area") {
    parameters["arms"] = arms;
    grids["g"] = linspace(0.01, pi / 2, grid_points(50));
  } else if (subcommand == "optimize") {
    parameters["arms"] = arms;
  } else if (subcommand == "sweep-detuning") {
    parameters["arms"] = arms;
    parameters["g"] = have_area ? area : heraldsim::analytic::g_optimal(arms);
    grids["delta"] = linspace(-5.0, 5.0, grid_points(41));
  } else if (subcommand == "mismatch") {
    if (flags.kind != "coupling" && flags.kind != "detuning")
      throw CLI::ValidationError("--kind", "expected 'coupling' or 'detuning'");
    parameters["kind"] = flags.kind;
    parameters["g"] = have_area ? area : heraldsim::analytic::g_optimal(3);
    parameters["delta"] = delta;
    grids["spread"] =
        linspace(0.0, flags.kind == "coupling" ? 0.3 : 0.5, grid_points(7));
  } else if (subcommand == "time-trace") {
    parameters["samples"] = grid_points(201);
    parameters["total_area"] = have_area ? area : pi / 2;
  } else if (subcommand == "weighted-scan") {
    parameters["g"] = have_area ? area : 0.0;
    grids["theta"] = linspace(0.0, pi / 2, grid_points(11));
    grids["phi"] = linspace(0.0, pi / 2, grid_points(11));
  } else if (subcommand == "beyond-rwa") {
    parameters["g"] = have_area ? area : 0.6;
    parameters["kappa"] = 6.0;
    grids["omega_t"] = logspace(20.0, 200.0, grid_points(17));
    options.model = heraldsim::Model::full;
    options.sideband_cut = 3;
    options.omega = 1.0;
    options.integrator = beyond_rwa_integrator();
  } else if (subcommand == "gaussian") {
    parameters["peak_area"] = have_area ? area : 0.0;
    grids["tau_over_t"] = linspace(0.2, 2.0, grid_points(10));
    grids["delta"] = linspace(-5.0, 5.0, 21);
  }
  manifest["parameters"] = parameters;
  manifest["grids"] = grids;
  manifest["options"] = heraldsim::scans::options_to_json(options);
  return manifest;
}

int run_subcommand(const std::string& subcommand, const Flags& flags,
                   const CLI::App* sub) {
  if (subcommand == "verify") {
    const auto results = heraldsim::verify::run_all_checks();
    return heraldsim::verify::report(results, std::cout) == 0 ? 0 : 1;
  }

  json manifest;
  if (!flags.config_path.empty()) {
    const json doc = read_json_file(flags.config_path);
    if (doc.is_object() && doc.contains("subcommand")) {
      const auto recorded = doc.at("subcommand").get<std::string>();
      if (recorded != subcommand)
        throw std::invalid_argument("config: manifest records subcommand '" + recorded +
                                    "' but '" + subcommand + "' was requested");
      manifest = doc; // reproduce the recorded run exactly
    } else {
      manifest = manifest_from_flags(subcommand, flags, sub);
    }
  } else {
    manifest = manifest_from_flags(subcommand, flags, sub);
  }

  auto output = heraldsim::scans::run_from_manifest(manifest);
  if (!output.summary.empty()) std::cout << output.summary;

  const std::filesystem::path out_dir(flags.out_dir);
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;
  for (const auto& [name, table] : output.tables) {
    const std::string stem = subcommand + (name.empty() ? "" : "_" + name);
    const auto csv_path = out_dir / (stem + ".csv");
    write_text(csv_path, to_csv(table));
    written.push_back(csv_path.filename().string());
    if (flags.svg) {
      const auto svg_path = out_dir / (stem + ".svg");
      write_text(svg_path, render_svg(table));
      written.push_back(svg_path.filename().string());
    }
  }
  json recorded = output.manifest;
  recorded["generated_at"] = utc_timestamp();
  const auto manifest_path = out_dir / (subcommand + ".manifest.json");
  recorded["outputs"] = written;
  write_text(manifest_path, recorded.dump(2) + "\n");
  written.push_back(manifest_path.filename().string());
  for (const auto& file : written)
    std::cout << "wrote " << (out_dir / file).string() << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"heralded multipartite entanglement-transfer toolkit"};
  app.require_subcommand(1);
  Flags flags;

  const std::vector<std::pair<std::string, std::string>> table_commands = {
      {"sweep-area", "heralding probability against pulse area"},
      {"optimize", "pulse area maximizing the heralding probability"},
      {"sweep-detuning", "heralding and conditional content against common detuning"},
      {"mismatch", "conditional fidelity under arm parameter spread"},
      {"time-trace", "entanglement and yield across the pulse window"},
      {"weighted-scan", "weighted-resource transfer over a (theta, phi) grid"},
      {"beyond-rwa", "full-model heralding versus the rotating-frame closed forms"},
      {"gaussian", "gaussian envelopes against the square pulse"},
  };
  for (const auto& [name, description] : table_commands) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("--config", flags.config_path,
                    "flat system config, or a recorded manifest to reproduce");
    sub->add_option("--out", flags.out_dir, "output directory (default '.')");
    sub->add_flag("--svg", flags.svg, "also render each table as a line plot");
    sub->add_option("--points", flags.points, "grid size (subcommand default if unset)");
    if (name == "sweep-area" || name == "optimize" || name == "sweep-detuning") {
      sub->add_option("--n", flags.n, "number of arms (default 3)");
      sub->add_option("--model", flags.model, "'rwa' (default) or 'full'");
    }
    if (name != "optimize" && name != "sweep-area")
      sub->add_option("--g", flags.g, "pulse area (subcommand default if unset)");
    if (name == "mismatch") {
      sub->add_option("--delta", flags.delta, "common normalized detuning (default 0)");
      sub->add_option("--kind", flags.kind, "'coupling' (default) or 'detuning'");
    }
  }
  auto* verify_command =
      app.add_subcommand("verify", "run the analytic-vs-numeric check suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help); // prints help, exits 0
  } catch (const CLI::ParseError& error) {
    std::cerr << error.what() << "\nrun 'heraldsim --help' for usage\n";
    return 2;
  }

  try {
    if (verify_command->parsed()) return run_subcommand("verify", flags, verify_command);
    for (const auto* sub : app.get_subcommands())
      return run_subcommand(sub->get_name(), flags, sub);
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "heraldsim: " << error.what() << '\n';
    return 1;
  }
}
