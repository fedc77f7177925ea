// fockbell: Schmidt decomposition, CH Bell certification and sector
// feasibility analysis for pure multimode states on truncated Fock spaces.
//
// Exit codes: 0 success, 2 parse/validation failure, 3 separable input where
// a Bell pair is required, 4 numerical failure.

#include <complex>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fockbell/bell.hpp"
#include "fockbell/errors.hpp"
#include "fockbell/io.hpp"
#include "fockbell/run.hpp"
#include "fockbell/states.hpp"

namespace {

using namespace fockbell;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ValidationError("cannot parse number: " + item);
    }
  }
  if (values.empty()) throw ValidationError("empty number list");
  return values;
}

SettingsChoice parse_settings_flag(const std::string& text) {
  SettingsChoice choice;
  if (text == "gisin") {
    choice.source = SettingsChoice::Source::ClosedForm;
  } else if (text == "numeric") {
    choice.source = SettingsChoice::Source::Numeric;
  } else if (text.rfind("explicit:", 0) == 0) {
    const std::vector<double> angles = parse_double_list(text.substr(9));
    if (angles.size() != 4)
      throw ValidationError("--settings explicit needs four radians: a,a',b,b'");
    choice.source = SettingsChoice::Source::Explicit;
    choice.explicit_angles = {angles[0], angles[1], angles[2], angles[3]};
  } else {
    throw ValidationError("--settings must be gisin, numeric or explicit:a,a',b,b'");
  }
  return choice;
}

ModeId parse_mode_name(const std::string& name) {
  if (name.size() < 2 || (name[0] != 'a' && name[0] != 'b'))
    throw ValidationError("mode names look like a1, b2: " + name);
  try {
    const int index = std::stoi(name.substr(1));
    return name[0] == 'a' ? mode_a(index) : mode_b(index);
  } catch (const std::exception&) {
    throw ValidationError("cannot parse mode name: " + name);
  }
}

std::vector<Complex> load_bghz_coefficients(const std::string& path) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("coefficients file is not valid JSON: ") + e.what());
  }
  std::vector<Complex> coefficients;
  try {
    for (const auto& entry : root) {
      if (entry.is_number()) {
        coefficients.emplace_back(entry.get<double>(), 0.0);
      } else {
        coefficients.emplace_back(entry.at("re").get<double>(), entry.at("im").get<double>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed coefficients file: ") + e.what());
  }
  if (coefficients.empty()) throw ValidationError("coefficients file is empty");
  return coefficients;
}

void emit(const std::string& output_path, const Json& document) {
  if (output_path.empty() || output_path == "-")
    std::cout << document.dump();
  else
    write_text_file(output_path, document.dump());
}

struct GenerateOptions {
  std::string kind;
  std::string output;
  double gamma = 0.5;
  int cutoff = 8;
  std::string lambdas;
  std::string coeffs_file;
  std::optional<double> z_re;
  double z_im = 0.0;
  std::string subtract;
};

int run_generate(const GenerateOptions& options) {
  FieldState state = [&] {
    if (options.kind == "tmsv") {
      if (!options.lambdas.empty())
        return tmsv_from_lambdas(parse_double_list(options.lambdas), options.cutoff);
      return tmsv(options.gamma, options.cutoff);
    }
    if (options.kind == "bsv") return bsv(options.gamma, options.cutoff);
    if (options.kind == "bghz") {
      if (options.coeffs_file.empty())
        throw ValidationError("bghz needs --coeffs-file with the gain-dependent coefficients");
      return bghz(load_bghz_coefficients(options.coeffs_file), options.cutoff);
    }
    if (options.kind == "beamsplit-photon") return beamsplit_single_photon(options.cutoff);
    throw ValidationError("unknown state kind: " + options.kind);
  }();

  if (options.z_re) {
    state = attach_coherent_ancillas(state, Complex{*options.z_re, options.z_im}, options.cutoff);
    if (state.pruned_weight() > 1e-6)
      std::cerr << "warning: coherent ancilla truncation loss "
                << format_double(state.pruned_weight()) << " exceeds 1e-6; raise --cutoff\n";
  }
  if (!options.subtract.empty()) {
    std::vector<ModeId> modes;
    std::stringstream stream(options.subtract);
    std::string name;
    while (std::getline(stream, name, ',')) modes.push_back(parse_mode_name(name));
    state = photon_subtract(state, modes);
  }

  if (options.output.empty() || options.output == "-")
    std::cout << state_to_json(state);
  else
    write_text_file(options.output, state_to_json(state));
  return 0;
}

FieldState load_state(const std::string& path) {
  FieldState s = state_from_json(read_text_file(path));
  require_normalized(s);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fock-space Schmidt decomposition and CH Bell certification"};
  app.require_subcommand(1);

  GenerateOptions generate_options;
  CLI::App* generate = app.add_subcommand("generate", "emit an example state as a state file");
  generate->add_option("kind", generate_options.kind, "tmsv | bsv | bghz | beamsplit-photon")
      ->required();
  generate->add_option("--output,-o", generate_options.output, "output path (default stdout)");
  generate->add_option("--gamma", generate_options.gamma, "amplification gain");
  generate->add_option("--cutoff", generate_options.cutoff, "max quanta per side");
  generate->add_option("--lambdas", generate_options.lambdas,
                       "comma-separated Schmidt coefficients (tmsv)");
  generate->add_option("--coeffs-file", generate_options.coeffs_file,
                       "JSON array of coefficients (bghz)");
  generate->add_option("--z", generate_options.z_re,
                       "coherent amplitude; attaches one ancilla mode per party");
  generate->add_option("--z-imag", generate_options.z_im, "imaginary part of the amplitude");
  generate->add_option("--subtract", generate_options.subtract,
                       "comma-separated modes for photon subtraction, e.g. a2,a4");

  std::string input_path, output_path, settings_flag = "numeric", sector_flag;
  Tolerances tolerances;

  CLI::App* schmidt = app.add_subcommand("schmidt", "Schmidt decomposition report");
  CLI::App* bell = app.add_subcommand("bell", "CH / CHSH certification report");
  CLI::App* feasibility =
      app.add_subcommand("feasibility", "sector table and projective-measurement analysis");
  CLI::App* pipeline = app.add_subcommand("pipeline", "schmidt + bell + feasibility verdict");

  for (CLI::App* command : {schmidt, bell, feasibility, pipeline}) {
    command->add_option("--input,-i", input_path, "state file")->required();
    command->add_option("--output,-o", output_path, "report path (default stdout)");
    command->add_option("--rank-tol", tolerances.rank_tol, "relative Schmidt rank tolerance");
  }
  for (CLI::App* command : {bell, feasibility, pipeline})
    command->add_option("--settings", settings_flag, "gisin | numeric | explicit:a,a',b,b'");
  for (CLI::App* command : {feasibility, pipeline})
    command->add_option("--weight-tol", tolerances.weight_tol, "sector weight tolerance");
  feasibility->add_option("--sector", sector_flag, "restrict the violation report to one n,m");

  try {
    app.parse(argc, argv);

    if (generate->parsed()) return run_generate(generate_options);

    const SettingsChoice choice = parse_settings_flag(settings_flag);
    const FieldState state = load_state(input_path);

    if (schmidt->parsed()) {
      emit(output_path, schmidt_report_json(schmidt_decompose(state, tolerances.rank_tol)));
    } else if (bell->parsed()) {
      const SchmidtDecomposition d = schmidt_decompose(state, tolerances.rank_tol);
      emit(output_path, bell_report_json(analyze_bell(state, d, choice)));
    } else if (feasibility->parsed()) {
      std::optional<std::pair<int, int>> only;
      if (!sector_flag.empty()) {
        const std::vector<double> nm = parse_double_list(sector_flag);
        if (nm.size() != 2) throw ValidationError("--sector needs n,m");
        only = {static_cast<int>(nm[0]), static_cast<int>(nm[1])};
      }
      emit(output_path,
           feasibility_report_json(analyze_feasibility(state, choice, tolerances, only),
                                   tolerances));
    } else if (pipeline->parsed()) {
      emit(output_path, pipeline_report_json(state, choice, tolerances));
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SeparableStateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
