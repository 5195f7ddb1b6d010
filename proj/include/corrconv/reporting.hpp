#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "corrconv/protocol.hpp"

namespace corrconv {

/// File-system failures are reported with this type so the command-line
/// front end can map them to their own exit code.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Documented process exit map: 0 success, 1 bad arguments, 2 I/O failure,
/// 3 internal computation failure.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e) != nullptr) return 2;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e) != nullptr) return 2;
  if (dynamic_cast<const std::invalid_argument*>(&e) != nullptr) return 1;
  if (dynamic_cast<const std::domain_error*>(&e) != nullptr) return 1;
  return 3;
}

/// 12 significant digits, lowercase exponent, '.' separator; the one number
/// format used in every data file so outputs diff cleanly.
inline std::string format_sig(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

/// The double that the formatted text parses back to; JSON values are routed
/// through this so both encodings carry identical numerics.
inline double round_sig(double x) { return std::strtod(format_sig(x).c_str(), nullptr); }

enum class OutputFormat { csv, json };

struct SweepConfig {
  double p_min = 1.0 / 3.0;
  double p_max = 1.0;
  double p_step = 0.01;
  double delta_in = 1.0 / 3.0;
  std::optional<BellDiagonalParams> c_params;  // default: params_for_gap(delta_in)
  std::string output_path;
  OutputFormat format = OutputFormat::csv;
};

struct SweepRow {
  double p, e_closed, e_oracle, mutual_info, classical, discord, coherent_info, p0;
};

inline constexpr const char* kSweepHeader =
    "p,e_closed,e_oracle,mutual_info,classical,discord,coherent_info,p0";

/// Noise grid from p_min to p_max inclusive; the right endpoint is appended
/// when the stride does not land on it.
inline std::vector<double> sweep_grid(double p_min, double p_max, double p_step) {
  if (!(p_step > 0.0)) throw std::invalid_argument("p_step must be positive");
  if (!(p_min >= 1.0 / 3.0 - 1e-12) || !(p_min <= p_max) || !(p_max <= 1.0 + 1e-12))
    throw std::invalid_argument("need 1/3 <= p_min <= p_max <= 1");
  if ((p_max - p_min) / p_step > 1e6) throw std::invalid_argument("grid is unreasonably fine");
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double p = p_min + k * p_step;
    if (p > p_max + 1e-12) break;
    grid.push_back(std::min(p, 1.0));
  }
  if (grid.empty() || grid.back() < p_max - 1e-12) grid.push_back(p_max);
  return grid;
}

inline BellDiagonalParams sweep_input_params(const SweepConfig& config) {
  return config.c_params ? *config.c_params : params_for_gap(config.delta_in);
}

inline std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  if (!(config.delta_in > 0.0) || config.delta_in > 1.0 / 3.0 + 1e-12)
    throw std::invalid_argument("delta_in must lie in (0, 1/3]");
  const BellDiagonalParams input = sweep_input_params(config);
  const DensityMatrix input_state = bell_diagonal_state(input);  // rejects bad parameters early
  std::vector<SweepRow> rows;
  for (double p : sweep_grid(config.p_min, config.p_max, config.p_step)) {
    const CorrelationReport rep = analyze_output(input, p);
    const DensityMatrix output = kraus_apply(phase_flip(p), input_state, 1);
    const double p0 = decompose_output(output).p0;
    rows.push_back(SweepRow{p, rep.e_closed, rep.e_oracle, rep.mutual_info, rep.classical,
                            rep.discord, rep.coherent_info, p0});
  }
  return rows;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const SweepRow& r : rows) {
    out << format_sig(r.p) << ',' << format_sig(r.e_closed) << ',' << format_sig(r.e_oracle)
        << ',' << format_sig(r.mutual_info) << ',' << format_sig(r.classical) << ','
        << format_sig(r.discord) << ',' << format_sig(r.coherent_info) << ','
        << format_sig(r.p0) << '\n';
  }
}

inline nlohmann::json sweep_metadata(const SweepConfig& config) {
  const BellDiagonalParams input = sweep_input_params(config);
  return nlohmann::json{
      {"version", "0.1.0"},
      {"command", "sweep"},
      {"inputs",
       {{"p_min", round_sig(config.p_min)},
        {"p_max", round_sig(config.p_max)},
        {"p_step", round_sig(config.p_step)},
        {"delta_in", round_sig(config.delta_in)},
        {"c1", round_sig(input.c1)},
        {"c2", round_sig(input.c2)},
        {"c3", round_sig(input.c3)}}},
      {"quantities",
       {{"p", "dephasing error probability"},
        {"e_closed", "closed-form entanglement (1 - p) * delta_in"},
        {"e_oracle", "relative entropy to the separable set, grid minimization"},
        {"mutual_info", "total correlation of the output, bits"},
        {"classical", "classical correlation of the output, bits"},
        {"discord", "quantum discord of the output, bits"},
        {"coherent_info", "coherent information of the output, bits"},
        {"p0", "coherent-branch probability of the flag readout"}}}};
}

inline nlohmann::json sweep_json(const SweepConfig& config, const std::vector<SweepRow>& rows) {
  nlohmann::json out;
  out["metadata"] = sweep_metadata(config);
  nlohmann::json array = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    array.push_back({{"p", round_sig(r.p)},
                     {"e_closed", round_sig(r.e_closed)},
                     {"e_oracle", round_sig(r.e_oracle)},
                     {"mutual_info", round_sig(r.mutual_info)},
                     {"classical", round_sig(r.classical)},
                     {"discord", round_sig(r.discord)},
                     {"coherent_info", round_sig(r.coherent_info)},
                     {"p0", round_sig(r.p0)}});
  }
  out["rows"] = std::move(array);
  return out;
}

inline nlohmann::json claims_json(const InputSpec& spec, double p,
                                  const std::vector<ClaimResult>& claims) {
  nlohmann::json out;
  out["metadata"] = {{"version", "0.1.0"},
                     {"command", "verify"},
                     {"inputs", {{"delta_in", round_sig(spec.delta_in)}, {"p", round_sig(p)}}}};
  nlohmann::json array = nlohmann::json::array();
  for (const ClaimResult& c : claims) {
    array.push_back({{"id", c.id},
                     {"description", c.description},
                     {"expected", c.expected},
                     {"computed", c.computed},
                     {"verdict", to_string(c.verdict)}});
  }
  out["claims"] = std::move(array);
  return out;
}

inline nlohmann::json batch_json(const InputSpec& spec, double p, std::uint64_t seed,
                                 const BatchResult& batch) {
  return nlohmann::json{
      {"metadata",
       {{"version", "0.1.0"},
        {"command", "protocol"},
        {"inputs",
         {{"n", batch.n}, {"p", round_sig(p)}, {"delta_in", round_sig(spec.delta_in)},
          {"seed", seed}}}}},
      {"flag0_count", batch.entangled_indices.size()},
      {"empirical_rate", round_sig(batch.empirical_rate)},
      {"predicted_from_noise", batch.predicted_from_noise},
      {"predicted_from_model", round_sig(batch.predicted_from_model)}};
}

/// Writes the whole payload, failing with IoError on any stream problem.
inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace corrconv
