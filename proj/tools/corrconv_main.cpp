// Command-line front end: noise sweeps, claim verification, the
// post-selection Monte Carlo, and qudit threshold queries.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <corrconv/corrconv.hpp>

namespace {

std::string default_out(const std::string& filename) {
  const char* dir = std::getenv("CORRCONV_OUT_DIR");
  if (dir != nullptr && *dir != '\0') return (std::filesystem::path(dir) / filename).string();
  return filename;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
}

std::uint64_t parse_uint(const std::string& s) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("not a count: '" + s + "'");
  }
}

// Flat key=value settings, '#' comments. Command-line flags win: a value is
// applied only when the matching option was not given explicitly.
class ConfigFile {
 public:
  static ConfigFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw corrconv::IoError("cannot read config file '" + path + "'");
    ConfigFile cfg;
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("config line without '=': " + line);
      cfg.values_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
  }

  void number(const CLI::Option* opt, const std::string& key, double& var) {
    if (const std::string* v = take(opt, key)) var = parse_double(*v);
  }
  void count(const CLI::Option* opt, const std::string& key, std::uint64_t& var) {
    if (const std::string* v = take(opt, key)) var = parse_uint(*v);
  }
  void integer(const CLI::Option* opt, const std::string& key, int& var) {
    if (const std::string* v = take(opt, key)) var = static_cast<int>(parse_uint(*v));
  }
  void text(const CLI::Option* opt, const std::string& key, std::string& var) {
    if (const std::string* v = take(opt, key)) var = *v;
  }
  void number_list(const CLI::Option* opt, const std::string& key, std::vector<double>& var) {
    if (const std::string* v = take(opt, key)) {
      var.clear();
      std::string item;
      std::istringstream in(*v);
      while (std::getline(in, item, ',')) {
        std::istringstream words(item);
        std::string w;
        while (words >> w) var.push_back(parse_double(w));
      }
    }
  }
  bool was_set(const std::string& key) const { return consumed_.count(key) > 0; }

  void finish() const {
    for (const auto& [key, value] : values_)
      if (consumed_.count(key) == 0)
        throw std::invalid_argument("unknown config key '" + key + "'");
  }

 private:
  const std::string* take(const CLI::Option* opt, const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) return nullptr;
    consumed_.insert(key);
    if (opt != nullptr && opt->count() > 0) return nullptr;  // flag overrides config
    return &it->second;
  }

  std::map<std::string, std::string> values_;
  std::set<std::string> consumed_;
};

void print_claims(const std::vector<corrconv::ClaimResult>& claims) {
  for (const auto& c : claims) {
    std::ostringstream verdict;
    verdict << '[' << corrconv::to_string(c.verdict) << ']';
    std::cout << std::left << std::setw(30) << verdict.str() << ' ' << std::setw(36) << c.id
              << " expected: " << c.expected << " | computed: " << c.computed << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"correlation-conversion channel toolkit"};
  app.require_subcommand(1);

  // --- sweep ---------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "tabulate correlation measures over a noise range");
  double p_min = 1.0 / 3.0, p_max = 1.0, p_step = 0.01;
  double sweep_delta = 1.0 / 3.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  std::string sweep_format = "csv";
  std::string sweep_out, sweep_config;
  auto* opmin = sweep->add_option("--p-min", p_min, "lowest dephasing probability (>= 1/3)");
  auto* opmax = sweep->add_option("--p-max", p_max, "highest dephasing probability (<= 1)");
  auto* opstep = sweep->add_option("--p-step", p_step, "grid stride");
  auto* odelta = sweep->add_option("--delta-in", sweep_delta, "input corner-block gap in (0, 1/3]");
  auto* oc1 = sweep->add_option("--c1", c1, "override correlation coefficient c1");
  auto* oc2 = sweep->add_option("--c2", c2, "override correlation coefficient c2");
  auto* oc3 = sweep->add_option("--c3", c3, "override correlation coefficient c3");
  auto* ofmt = sweep->add_option("--format", sweep_format, "csv or json")
                   ->check(CLI::IsMember({"csv", "json"}));
  auto* oout =
      sweep->add_option("--out", sweep_out, "output path (default sweep.<format> in $CORRCONV_OUT_DIR)");
  sweep->add_option("--config", sweep_config, "flat key=value configuration file");
  sweep->callback([&] {
    bool cfg_c1 = false, cfg_c2 = false, cfg_c3 = false;
    if (!sweep_config.empty()) {
      ConfigFile cfg = ConfigFile::load(sweep_config);
      cfg.number(opmin, "p-min", p_min);
      cfg.number(opmax, "p-max", p_max);
      cfg.number(opstep, "p-step", p_step);
      cfg.number(odelta, "delta-in", sweep_delta);
      cfg.number(oc1, "c1", c1);
      cfg.number(oc2, "c2", c2);
      cfg.number(oc3, "c3", c3);
      cfg.text(ofmt, "format", sweep_format);
      cfg.text(oout, "out", sweep_out);
      cfg_c1 = cfg.was_set("c1");
      cfg_c2 = cfg.was_set("c2");
      cfg_c3 = cfg.was_set("c3");
      cfg.finish();
      if (sweep_format != "csv" && sweep_format != "json")
        throw std::invalid_argument("format must be csv or json");
    }
    corrconv::SweepConfig config;
    config.p_min = p_min;
    config.p_max = p_max;
    config.p_step = p_step;
    config.delta_in = sweep_delta;
    if (oc1->count() > 0 || oc2->count() > 0 || oc3->count() > 0 || cfg_c1 || cfg_c2 || cfg_c3) {
      corrconv::BellDiagonalParams q = corrconv::params_for_gap(sweep_delta);
      if (oc1->count() > 0 || cfg_c1) q.c1 = c1;
      if (oc2->count() > 0 || cfg_c2) q.c2 = c2;
      if (oc3->count() > 0 || cfg_c3) q.c3 = c3;
      config.c_params = q;
    }
    config.format = sweep_format == "json" ? corrconv::OutputFormat::json
                                           : corrconv::OutputFormat::csv;
    config.output_path = sweep_out.empty() ? default_out("sweep." + sweep_format) : sweep_out;

    const std::vector<corrconv::SweepRow> rows = corrconv::run_sweep(config);
    std::string payload;
    if (config.format == corrconv::OutputFormat::csv) {
      std::ostringstream buffer;
      corrconv::write_sweep_csv(buffer, rows);
      payload = buffer.str();
    } else {
      payload = corrconv::sweep_json(config, rows).dump(2);
      payload += '\n';
    }
    corrconv::write_file(config.output_path, payload);
    std::cout << "wrote " << rows.size() << " rows to " << config.output_path << '\n';
  });

  // --- verify ---------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "recompute the tracked reference claims");
  double verify_delta = 1.0 / 3.0, verify_p = 1.0 / 3.0;
  std::string verify_out, verify_config;
  auto* vdelta = verify->add_option("--delta-in", verify_delta, "input corner-block gap in (0, 1/3]");
  auto* vp = verify->add_option("--p", verify_p, "dephasing probability in [1/3, 1]");
  auto* vout = verify->add_option("--out", verify_out, "optional JSON report path");
  verify->add_option("--config", verify_config, "flat key=value configuration file");
  verify->callback([&] {
    if (!verify_config.empty()) {
      ConfigFile cfg = ConfigFile::load(verify_config);
      cfg.number(vdelta, "delta-in", verify_delta);
      cfg.number(vp, "p", verify_p);
      cfg.text(vout, "out", verify_out);
      cfg.finish();
    }
    const corrconv::InputSpec spec{verify_delta, std::nullopt};
    const auto claims = corrconv::verify_claims(spec, verify_p);
    print_claims(claims);
    if (!verify_out.empty())
      corrconv::write_file(verify_out,
                           corrconv::claims_json(spec, verify_p, claims).dump(2) + "\n");
  });

  // --- protocol ---------------------------------------------------------------
  auto* protocol = app.add_subcommand("protocol", "run the post-selection Monte Carlo");
  std::uint64_t n = 100000;
  double protocol_p = 1.0 / 3.0, protocol_delta = 1.0 / 3.0;
  std::uint64_t seed = 1;
  std::string protocol_out, protocol_config;
  auto* pn = protocol->add_option("--n", n, "number of transmissions (1..1e8)");
  auto* pp = protocol->add_option("--p", protocol_p, "dephasing probability in [1/3, 1]");
  auto* pdelta =
      protocol->add_option("--delta-in", protocol_delta, "input corner-block gap in (0, 1/3]");
  auto* pseed = protocol->add_option("--seed", seed, "master seed for the per-run streams");
  auto* pout = protocol->add_option("--out", protocol_out, "optional JSON summary path");
  protocol->add_option("--config", protocol_config, "flat key=value configuration file");
  protocol->callback([&] {
    if (!protocol_config.empty()) {
      ConfigFile cfg = ConfigFile::load(protocol_config);
      cfg.count(pn, "n", n);
      cfg.number(pp, "p", protocol_p);
      cfg.number(pdelta, "delta-in", protocol_delta);
      cfg.count(pseed, "seed", seed);
      cfg.text(pout, "out", protocol_out);
      cfg.finish();
    }
    if (n < 1 || n > 100000000) throw std::invalid_argument("n must lie in [1, 1e8]");
    const corrconv::InputSpec spec{protocol_delta, std::nullopt};
    const corrconv::BatchResult batch =
        corrconv::batch_repeater(static_cast<std::size_t>(n), spec, protocol_p, seed);
    std::cout << "n                    " << batch.n << '\n'
              << "flag0_count          " << batch.entangled_indices.size() << '\n'
              << "empirical_rate       " << corrconv::format_sig(batch.empirical_rate) << '\n'
              << "predicted_from_noise " << batch.predicted_from_noise << "  (floor(n*(1-p)))\n"
              << "predicted_from_model " << corrconv::format_sig(batch.predicted_from_model)
              << "  (n*p0)\n";
    if (!protocol_out.empty())
      corrconv::write_file(protocol_out,
                           corrconv::batch_json(spec, protocol_p, seed, batch).dump(2) + "\n");
  });

  // --- qudit ---------------------------------------------------------------
  auto* qudit = app.add_subcommand("qudit", "d-dimensional entanglement threshold verdict");
  int d = 2;
  std::vector<double> schmidt;
  double qudit_p = 1.0 / 3.0;
  double m_value = 0.0, a1 = 0.0, a2 = 0.0;
  std::string qudit_config;
  auto* qd = qudit->add_option("--d", d, "local dimension (2..6)");
  auto* qs = qudit->add_option("--schmidt", schmidt, "input Schmidt coefficients, descending");
  qs->expected(-1);
  auto* om = qudit->add_option("--m", m_value, "mixing parameter M (default b1*b2)");
  auto* oa1 = qudit->add_option("--a1", a1, "largest target coefficient (default b1)");
  auto* oa2 = qudit->add_option("--a2", a2, "second target coefficient (default b2)");
  auto* qp = qudit->add_option("--p", qudit_p, "channel noise in [0, 1]");
  qudit->add_option("--config", qudit_config, "flat key=value configuration file");
  qudit->callback([&] {
    bool cfg_m = false, cfg_a1 = false, cfg_a2 = false;
    if (!qudit_config.empty()) {
      ConfigFile cfg = ConfigFile::load(qudit_config);
      cfg.integer(qd, "d", d);
      cfg.number_list(qs, "schmidt", schmidt);
      cfg.number(om, "m", m_value);
      cfg.number(oa1, "a1", a1);
      cfg.number(oa2, "a2", a2);
      cfg.number(qp, "p", qudit_p);
      cfg_m = cfg.was_set("m");
      cfg_a1 = cfg.was_set("a1");
      cfg_a2 = cfg.was_set("a2");
      cfg.finish();
    }
    if (schmidt.empty()) schmidt = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    std::optional<double> m_opt;
    if (om->count() > 0 || cfg_m) m_opt = m_value;
    std::optional<std::pair<double, double>> a_opt;
    if (oa1->count() > 0 || oa2->count() > 0 || cfg_a1 || cfg_a2) {
      const double b1 = schmidt[0];
      const double b2 = schmidt.size() > 1 ? schmidt[1] : 0.0;
      a_opt = {(oa1->count() > 0 || cfg_a1) ? a1 : b1, (oa2->count() > 0 || cfg_a2) ? a2 : b2};
    }
    const corrconv::QuditConfig config =
        corrconv::make_qudit_config(d, schmidt, qudit_p, m_opt, a_opt);
    const double t = corrconv::tau(config);
    const double tg = (1.0 - config.p) * t;
    const double threshold = corrconv::qudit_threshold(config.a1, config.a2, config.d);
    const bool entangled = corrconv::qudit_entangled(tg, config.a1, config.a2, config.d);
    std::cout << "tau=" << corrconv::format_sig(t) << " gamma_tau=" << corrconv::format_sig(tg)
              << " threshold=" << corrconv::format_sig(threshold)
              << " entangled=" << (entangled ? "yes" : "no") << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return corrconv::exit_code_for(e);
  }
  return 0;
}
