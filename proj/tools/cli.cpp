#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "fourphoton/analysis.hpp"
#include "fourphoton/circuit.hpp"
#include "fourphoton/errors.hpp"
#include "fourphoton/family.hpp"
#include "fourphoton/imperfections.hpp"
#include "fourphoton/tomo.hpp"

namespace fourphoton::cli {

namespace {

constexpr double kPi = std::numbers::pi;

// Twelve significant digits everywhere. Rounding residue below 1e-14 (and
// negative zero) prints as 0.
std::string num(double x) {
  if (std::abs(x) < 1e-14) x = 0.0;
  return fmt::format("{:.12g}", x);
}

// JSON numbers go through the same rounding so both formats agree.
double rounded(double x) { return std::stod(num(x)); }

std::filesystem::path resolve_out(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') {
      p = std::filesystem::path(dir) / p;
    }
  }
  return p;
}

void write_file(const std::string& path, const std::string& content) {
  const auto p = resolve_out(path);
  std::ofstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot open '" + p.string() + "' for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("failed writing '" + p.string() + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Inline JSON when the argument starts with '{', otherwise a file path.
NoiseConfig load_noise(const std::string& arg) {
  if (arg.empty()) return NoiseConfig{};
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') return noise_config_from_json(arg);
  return noise_config_from_json(read_file(arg));
}

// Emits CSV to --out when given, else to stdout.
void emit(const std::string& out_path, const std::string& text, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
  }
}

std::map<std::size_t, CorrelationClass> class_of_term() {
  std::map<std::size_t, CorrelationClass> m;
  for (int c = 0; c < kNumClasses; ++c) {
    for (const auto& s : class_members(static_cast<CorrelationClass>(c))) {
      m[flat_index(s)] = static_cast<CorrelationClass>(c);
    }
  }
  return m;
}

std::string pairs_label(const Crossing& c) {
  std::string s;
  for (const auto& [a, b] : c.pairs) {
    if (!s.empty()) s += ';';
    s += class_name(a);
    s += '=';
    s += class_name(b);
  }
  return s;
}

struct SweepRow {
  double gamma = 0.0, alpha = 0.0, probability = 0.0, c = 0.0;
  ClassValues classes{};
};

std::vector<SweepRow> compute_sweep(int steps) {
  std::vector<SweepRow> rows(static_cast<std::size_t>(steps));
  const unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(), 16u));
  std::vector<std::string> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < rows.size(); i += workers) {
            const double g = static_cast<double>(i) * kGammaMax / (steps - 1);
            const FamilyPoint fp = state_at(g);
            rows[i] = {g, fp.alpha, fp.probability, biseparable_bound(fp.state), correlation_classes(g)};
          }
        } catch (const std::exception& e) {
          errors[w] = e.what();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw NumericError(e);
  }
  return rows;
}

std::string method_name(ReconstructionMethod m) {
  return m == ReconstructionMethod::kLinearInversion ? "linear" : "projected";
}

void print_report(std::ostream& out, double gamma, const TomographyReport& r, ReconstructionMethod m) {
  fmt::print(out, "gamma,{}\n", num(gamma));
  fmt::print(out, "gamma_pi,{}\n", num(gamma / kPi));
  fmt::print(out, "method,{}\n", method_name(m));
  fmt::print(out, "fidelity,{}\n", num(r.witness.fidelity));
  fmt::print(out, "linear_fidelity,{}\n", num(r.linear_fidelity));
  fmt::print(out, "clipped_mass,{}\n", num(r.clipped_mass));
  fmt::print(out, "c,{}\n", num(r.witness.c));
  fmt::print(out, "witness,{}\n", num(r.witness.witness_value));
  fmt::print(out, "detected,{}\n", r.witness.detected ? "true" : "false");
  fmt::print(out, "pairwise_ef,{}\n", num(r.pairwise.first));
  fmt::print(out, "pairwise_gh,{}\n", num(r.pairwise.second));
  fmt::print(out, "min_eigenvalue,{}\n", num(r.rho.min_eigenvalue()));
}

}  // namespace

double parse_angle(const std::string& text) {
  std::string_view s = text;
  bool in_pi = false;
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    in_pi = true;
    s.remove_suffix(2);
  }
  double v = 1.0;
  if (!(in_pi && s.empty())) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw std::invalid_argument("cannot parse angle '" + text + "' (use radians or e.g. 0.125pi)");
    }
  }
  return in_pi ? v * kPi : v;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Four-photon polarization-entangled state family: simulation and analysis", "fourphoton"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  std::string gamma_text;
  std::string out_path;
  std::string noise_arg;
  bool json = false, table = false;
  int steps = 101;
  std::uint64_t shots = 100000, seed = 1;
  std::string method_text = "linear";
  std::string counts_in, counts_out;

  auto* derive = app.add_subcommand("derive", "Family member at one gamma, with the circuit cross-check");
  derive->add_option("--gamma", gamma_text, "HWP angle in radians, or multiples of pi as e.g. 0.125pi")
      ->required();
  auto* json_flag = derive->add_flag("--json", json, "Print JSON");
  derive->add_flag("--table", table, "Print key,value rows (default)")->excludes(json_flag);

  auto* sweep = app.add_subcommand("sweep", "CSV of alpha, p, the five class moduli and c over [0, pi/4]");
  sweep->add_option("--steps", steps, "Number of rows, endpoints included")
      ->default_val(101)
      ->check(CLI::Range(2, 1000000));
  sweep->add_option("--out", out_path, "Output CSV (default: stdout)");

  auto* catalog_cmd = app.add_subcommand("catalog", "The nine distinguished family members");
  catalog_cmd->add_option("--out", out_path, "Output CSV (default: stdout)");

  auto* crossings_cmd = app.add_subcommand("crossings", "Crossing points of the correlation classes");
  crossings_cmd->add_option("--out", out_path, "Output CSV (default: stdout)");

  auto* corr = app.add_subcommand("correlations", "Non-zero correlations T_ijkl of Psi(gamma)");
  corr->add_option("--gamma", gamma_text, "HWP angle in radians, or multiples of pi")->required();
  corr->add_option("--out", out_path, "Output CSV (default: stdout)");

  auto* wit = app.add_subcommand("witness", "Fidelity-based witness c - F and the pairwise witnesses");
  wit->add_option("--gamma", gamma_text, "HWP angle in radians, or multiples of pi")->required();
  wit->add_option("--noise-json", noise_arg, "Noise config: JSON file path or inline object");

  auto* tomo = app.add_subcommand("tomo", "Simulated 81-setting tomography and reconstruction");
  tomo->add_option("--gamma", gamma_text, "HWP angle in radians, or multiples of pi")->required();
  tomo->add_option("--shots", shots, "Mean events per setting; 0 uses exact probabilities")
      ->default_val(100000);
  tomo->add_option("--seed", seed, "Random seed")->default_val(1);
  tomo->add_option("--noise-json", noise_arg, "Noise config: JSON file path or inline object");
  tomo->add_option("--method", method_text, "Reconstruction: linear or projected")
      ->default_val("linear")
      ->check(CLI::IsMember({"linear", "projected"}));
  tomo->add_option("--out", out_path, "Write the reconstructed density matrix as JSON");
  tomo->add_option("--counts-out", counts_out, "Write the simulated counts as CSV");
  tomo->add_option("--counts-in", counts_in, "Reconstruct from recorded counts instead of simulating");

  auto* noise = app.add_subcommand("noise", "Fidelity and witness of the noisy state");
  noise->add_option("--gamma", gamma_text, "HWP angle in radians, or multiples of pi");
  noise->add_option("--steps", steps, "Scan N points over [0, pi/4] instead of one gamma")
      ->check(CLI::Range(2, 1000000));
  noise->add_option("--noise-json", noise_arg, "Noise config: JSON file path or inline object");
  noise->add_option("--out", out_path, "Output CSV for a scan (default: stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("fourphoton");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (derive->parsed()) {
      const double g = parse_angle(gamma_text);
      const FamilyPoint fp = state_at(g);
      const PipelineResult sim = run_pipeline(g);
      const double overlap = overlap_modulus(sim.state, fp.state);
      if (json) {
        nlohmann::ordered_json j;
        j["gamma"] = rounded(g);
        j["gamma_pi"] = rounded(g / kPi);
        j["alpha"] = rounded(fp.alpha);
        j["probability"] = rounded(fp.probability);
        j["circuit_probability"] = rounded(sim.probability);
        j["circuit_overlap"] = rounded(overlap);
        auto& amps = j["amplitudes"] = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < 16; ++i) {
          amps.push_back({{"label", QubitState4::label_of(i)},
                          {"re", rounded(fp.state[i].real())},
                          {"im", rounded(fp.state[i].imag())}});
        }
        out << j.dump(2) << '\n';
      } else {
        fmt::print(out, "gamma,{}\ngamma_pi,{}\nalpha,{}\nprobability,{}\n", num(g), num(g / kPi),
                   num(fp.alpha), num(fp.probability));
        fmt::print(out, "circuit_probability,{}\ncircuit_overlap,{}\n", num(sim.probability), num(overlap));
        for (std::size_t i = 0; i < 16; ++i) {
          fmt::print(out, "{},{},{}\n", QubitState4::label_of(i), num(fp.state[i].real()),
                     num(fp.state[i].imag()));
        }
      }
    } else if (sweep->parsed()) {
      std::string csv = "gamma,gamma_pi,alpha,probability,T_i,T_ii,T_iii,T_iv,T_v,c\n";
      for (const SweepRow& r : compute_sweep(steps)) {
        csv += fmt::format("{},{},{},{}", num(r.gamma), num(r.gamma / kPi), num(r.alpha), num(r.probability));
        for (double v : r.classes) csv += "," + num(v);
        csv += "," + num(r.c) + "\n";
      }
      emit(out_path, csv, out);
    } else if (catalog_cmd->parsed()) {
      std::string csv = "name,gamma,gamma_pi,alpha,probability,c\n";
      for (const auto& e : catalog()) {
        csv += fmt::format("{},{},{},{},{},{}\n", e.name, num(e.gamma), num(e.gamma / kPi), num(e.alpha),
                           num(family_probability(e.gamma)), num(biseparable_bound(e.gamma)));
      }
      emit(out_path, csv, out);
    } else if (crossings_cmd->parsed()) {
      std::string csv = "gamma,gamma_pi,alpha,value,classes,state\n";
      for (const auto& c : find_crossings()) {
        csv += fmt::format("{},{},{},{},{},{}\n", num(c.gamma), num(c.gamma / kPi), num(c.alpha), num(c.value),
                           pairs_label(c), c.state_name);
      }
      emit(out_path, csv, out);
    } else if (corr->parsed()) {
      const double g = parse_angle(gamma_text);
      const CorrelationTensor t = correlations(family_state(g));
      const auto classes = class_of_term();
      std::string csv = "term,value,class\n";
      for (const auto& s : t.nonzero(1e-10)) {
        const auto it = classes.find(flat_index(s));
        csv += fmt::format("{},{},{}\n", to_string(s), num(t[s]), it == classes.end() ? "" : class_name(it->second));
      }
      emit(out_path, csv, out);
    } else if (wit->parsed()) {
      const double g = parse_angle(gamma_text);
      const NoiseConfig cfg = load_noise(noise_arg);
      const DensityMatrix rho = noisy_state(g, cfg);
      const WitnessReport r = witness(rho, g);
      const auto [ef, gh] = pairwise_witness(rho);
      fmt::print(out, "gamma,{}\ngamma_pi,{}\nc,{}\nfidelity,{}\nwitness,{}\ndetected,{}\n", num(g), num(g / kPi),
                 num(r.c), num(r.fidelity), num(r.witness_value), r.detected ? "true" : "false");
      fmt::print(out, "pairwise_ef,{}\npairwise_gh,{}\n", num(ef), num(gh));
    } else if (tomo->parsed()) {
      const double g = parse_angle(gamma_text);
      const ReconstructionMethod m = method_text == "projected" ? ReconstructionMethod::kPhysicalProjection
                                                                : ReconstructionMethod::kLinearInversion;
      TomographyReport r;
      if (!counts_in.empty()) {
        std::istringstream is(read_file(counts_in));
        std::vector<CountRecord> counts;
        try {
          counts = read_counts_csv(is);
        } catch (const std::invalid_argument& e) {
          throw IoError("'" + counts_in + "': " + e.what());
        }
        r = report_from_counts(g, std::move(counts), m);
      } else {
        r = reconstruct_and_report(g, load_noise(noise_arg), shots, seed, m);
      }
      print_report(out, g, r, m);
      if (!out_path.empty()) write_file(out_path, density_to_json(r.rho) + "\n");
      if (!counts_out.empty()) {
        if (r.counts.empty()) throw std::invalid_argument("--counts-out needs sampled counts (shots > 0)");
        std::ostringstream os;
        write_counts_csv(os, r.counts);
        write_file(counts_out, os.str());
      }
    } else if (noise->parsed()) {
      const NoiseConfig cfg = load_noise(noise_arg);
      const bool scan = noise->count("--steps") > 0;
      if (scan == !gamma_text.empty()) throw std::invalid_argument("noise needs exactly one of --gamma or --steps");
      const bool higher = cfg.pair_probability > 0.0 && cfg.efficiency < 1.0;
      auto row = [&](double g) {
        const DensityMatrix rho = noisy_state(g, cfg);
        const WitnessReport w = witness(rho, g);
        const double weight = higher ? higher_order_fourfolds(g, cfg).higher_order_weight : 0.0;
        return fmt::format("{},{},{},{},{},{},{}\n", num(g), num(g / kPi), num(w.fidelity), num(weight), num(w.c),
                           num(w.witness_value), w.detected ? "true" : "false");
      };
      std::string csv = "gamma,gamma_pi,fidelity,higher_order_weight,c,witness,detected\n";
      if (scan) {
        for (int k = 0; k < steps; ++k) csv += row(k * kGammaMax / (steps - 1));
        emit(out_path, csv, out);
      } else {
        out << csv << row(parse_angle(gamma_text));
      }
    }
  } catch (const NumericError& e) {
    fmt::print(err, "numeric failure: {}\n", e.what());
    return kNumeric;
  } catch (const IoError& e) {
    fmt::print(err, "i/o error: {}\n", e.what());
    return kIo;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsage;
  } catch (const std::domain_error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsage;
  }
  return kOk;
}

}  // namespace fourphoton::cli
