#include "optomech/cli.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <CLI11.hpp>

#include "optomech/checks.hpp"
#include "optomech/coefficients.hpp"
#include "optomech/config.hpp"
#include "optomech/format.hpp"
#include "optomech/spectrum.hpp"

namespace optomech {
namespace {

using nlohmann::ordered_json;

class CheckFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Output {
  std::string suffix;  // appended to the base file name
  std::string ext;
  std::string content;
};

struct Result {
  std::vector<Output> outputs;
  int status = 0;
  std::string failure;
};

ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

Result single(Output o) {
  Result r;
  r.outputs.push_back(std::move(o));
  return r;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string output_format(const RunConfig& cfg, const char* fallback) {
  std::string f = cfg.string("format");
  if (f.empty()) f = fallback;
  if (f != "csv" && f != "json") throw ConfigError("format must be csv or json");
  return f;
}

Result cmd_coeffs(const RunConfig& cfg) {
  const CoefficientTable t(static_cast<int>(cfg.integer("kmax")));
  const std::string fmt = output_format(cfg, "csv");
  if (fmt == "json") {
    ordered_json rows = ordered_json::array();
    for (int k = 1; k <= t.kmax(); ++k)
      for (int j = 1; j <= t.kmax(); ++j)
        rows.push_back({{"k", k}, {"j", j}, {"g", t.g(k, j)}, {"h", t.h(k, j)}, {"d", t.d(k, j)}, {"r_k", t.r(k)}});
    return single({"", "json", dump(rows)});
  }
  std::string csv = "k,j,g,h,d,r_k\n";
  for (int k = 1; k <= t.kmax(); ++k)
    for (int j = 1; j <= t.kmax(); ++j)
      csv += csv_line({std::to_string(k), std::to_string(j), format_double(t.g(k, j)), format_double(t.h(k, j)),
                       format_double(t.d(k, j)), format_double(t.r(k))});
  return single({"", "csv", csv});
}

Result report_result(const CheckReport& r) {
  Result res = single({"", "json", dump(r.to_json())});
  if (!r.passed()) {
    res.status = 1;
    res.failure = "check failed: " + r.first_failure();
  }
  return res;
}

Result cmd_verify(const RunConfig& cfg) {
  CheckReport r = verify_coefficients(static_cast<int>(cfg.integer("kmax")), cfg.integer("jmax"), cfg.integer("ltrunc"),
                                      cfg.boolean("tail_correct"));
  r.note("tail", cfg.boolean("tail_correct") ? "leading tail 4k^2/J (series) and 4kj(-1)^(k+j)/L (Gram) added"
                                              : "no tail correction");
  return report_result(r);
}

Result cmd_evolve(const RunConfig& cfg) {
  const MirrorParams mp = cfg.mirror();
  const CoefficientTable table(mp.kmax);
  const ClassicalState s0 = cfg.initial_state();
  TrajectoryRecord rec;
  try {
    rec = integrate(s0, mp, table, cfg.number("t_end"), cfg.integrate_options());
  } catch (const StiffnessError& e) {
    throw CheckFailure(std::string(e.what()) + " at t=" + format_double(e.last_valid_state.t));
  }
  const std::string fmt = output_format(cfg, "csv");
  const int K = mp.kmax;
  std::vector<double> hs;
  for (const auto& s : rec.states) hs.push_back(single_mode_hamiltonian(s, mp));
  double h_drift = 0.0;
  for (double h : hs) h_drift = std::max(h_drift, std::abs(h - hs.front()));
  if (hs.front() != 0.0) h_drift /= std::abs(hs.front());

  ordered_json summary;
  summary["samples"] = rec.times.size();
  summary["accepted_steps"] = rec.statistics.accepted_steps;
  summary["rejected_steps"] = rec.statistics.rejected_steps;
  summary["rhs_evaluations"] = rec.statistics.rhs_evaluations;
  summary["rel_tol"] = number(rec.rel_tol);
  summary["abs_tol"] = number(rec.abs_tol);
  summary["stopped_at_floor"] = rec.stopped_at_floor;
  summary["legendre_energy_relative_drift"] = number(relative_energy_drift(rec));
  summary["single_mode_hamiltonian_relative_drift"] = number(h_drift);

  if (fmt == "json") {
    ordered_json j;
    j["summary"] = summary;
    ordered_json t = ordered_json::array(), q = t, qd = t, Q = t, Qd = t, e = t;
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
      const auto& s = rec.states[i];
      t.push_back(number(s.t));
      q.push_back(number(s.q));
      qd.push_back(number(s.qdot));
      Q.push_back(std::vector<double>(s.Q.data(), s.Q.data() + K));
      Qd.push_back(std::vector<double>(s.Qdot.data(), s.Qdot.data() + K));
      e.push_back(number(rec.energy[i]));
    }
    j["t"] = t;
    j["q"] = q;
    j["qdot"] = qd;
    j["Q"] = Q;
    j["Qdot"] = Qd;
    j["energy"] = e;
    return single({"", "json", dump(j)});
  }
  std::vector<std::string> header{"t", "q", "qdot"};
  for (int k = 1; k <= K; ++k) header.push_back("Q_" + std::to_string(k));
  for (int k = 1; k <= K; ++k) header.push_back("Qdot_" + std::to_string(k));
  header.push_back("energy");
  std::string csv = csv_line(header);
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    const auto& s = rec.states[i];
    std::vector<double> row{s.t, s.q, s.qdot};
    for (int k = 0; k < K; ++k) row.push_back(s.Q(k));
    for (int k = 0; k < K; ++k) row.push_back(s.Qdot(k));
    row.push_back(rec.energy[i]);
    csv += csv_line(row);
  }
  Result res = single({"", "csv", csv});
  res.outputs.push_back({"-summary", "json", dump(summary)});
  return res;
}

ordered_json rates_json(const RateSet& s, const RunConfig& cfg) {
  ordered_json j;
  j["x_zp"] = number(s.base.x_zp);
  j["theta"] = number(s.base.theta);
  j["R"] = number(s.base.R);
  j["r1"] = number(s.r1);
  j["alpha"] = number(s.base.alpha);
  j["beta"] = number(s.base.beta);
  j["beta_closed"] = number(s.base.beta_closed);
  j["beta_printed"] = number(s.base.beta_printed);
  j["gamma"] = number(s.base.gamma);
  j["g0"] = number(s.base.g0);
  j["g3"] = number(s.linear.g3);
  j["g4_plus"] = number(s.linear.g4_plus);
  j["theta_G"] = number(s.linear.theta_G);
  j["g4_minus"] = number(s.linear.g4_minus);
  j["G4_plus"] = number(s.linear.G4_plus);
  j["G4_minus"] = number(s.linear.G4_minus);
  j["J"] = number(s.linear.J);
  j["lambda"] = number(s.linear.lambda);
  j["J_mech"] = number(s.linear.J_mech);
  j["rho_arctanh_re"] = number(s.squeeze.rho_arctanh.real());
  j["rho_arctanh_im"] = number(s.squeeze.rho_arctanh.imag());
  j["rho_closed_re"] = number(s.squeeze.rho_closed.real());
  j["rho_closed_im"] = number(s.squeeze.rho_closed.imag());
  j["rho_branch_cut"] = s.squeeze.branch_cut;
  j["special_case_omega"] = number(special_case_frequency(cfg.number("eta"), s.params, s.options));
  j["w11"] = number(s.relativistic.w11);
  ordered_json w = ordered_json::array();
  for (Eigen::Index k = 0; k < s.relativistic.w.rows(); ++k) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index l = 0; l < s.relativistic.w.cols(); ++l) row.push_back(number(s.relativistic.w(k, l)));
    w.push_back(row);
  }
  j["w"] = w;
  j["w_over_beta"] = number(s.relativistic.w_over_beta);
  CheckReport notes;
  add_convention_notes(notes, cfg);
  j["notes"] = notes.to_json()["notes"];
  j["notes"]["r_convention"] = to_string(s.options.r_convention);
  j["notes"]["theta"] = s.options.theta_low_omega ? "theta = R Omega^2 x_zp / (omega^2 l)" : "theta = x_zp / l";
  j["notes"]["squeeze_ratio"] = "rho_arctanh evaluated from G4-/G4+ = R (Omega/omega)^2";
  if (!s.squeeze.note.empty()) j["notes"]["squeeze_branch"] = s.squeeze.note;
  return j;
}

Result cmd_rates(const RunConfig& cfg) {
  const RateSet s = compute_rates(cfg.cavity(), static_cast<int>(cfg.integer("kmax")), cfg.rate_options());
  return single({"", "json", dump(rates_json(s, cfg))});
}

std::string suffix_for(const std::vector<HamiltonianVariant>& vs, HamiltonianVariant v) {
  return vs.size() > 1 ? "-" + to_string(v) : "";
}

Result cmd_hamiltonian(const RunConfig& cfg) {
  const auto variants = cfg.variants();
  const CavityParams p = cfg.cavity();
  const FockSpace space = cfg.space();
  const HamiltonianOptions ho = cfg.hamiltonian_options();
  const std::string fmt = output_format(cfg, "csv");
  Result res;
  for (HamiltonianVariant v : variants) {
    const OperatorMatrix h = build_hamiltonian(v, p, space, ho);
    if (fmt == "json") {
      ordered_json j;
      j["variant"] = to_string(v);
      j["dim"] = space.dim();
      j["n_mech"] = space.n_mech;
      j["n_opt"] = space.n_opt;
      j["n_modes_opt"] = space.n_modes_opt;
      j["hermiticity_defect"] = number(hermiticity_defect(h.data));
      ordered_json entries = ordered_json::array();
      for (Eigen::Index r = 0; r < h.data.rows(); ++r)
        for (Eigen::Index c = 0; c < h.data.cols(); ++c)
          if (h.data(r, c) != std::complex<double>(0.0, 0.0))
            entries.push_back({r, c, number(h.data(r, c).real()), number(h.data(r, c).imag())});
      j["entries"] = entries;
      res.outputs.push_back({suffix_for(variants, v), "json", dump(j)});
    } else {
      std::string csv = "row,col,real,imag\n";
      for (Eigen::Index r = 0; r < h.data.rows(); ++r)
        for (Eigen::Index c = 0; c < h.data.cols(); ++c)
          if (h.data(r, c) != std::complex<double>(0.0, 0.0))
            csv += csv_line({std::to_string(r), std::to_string(c), format_double(h.data(r, c).real()),
                             format_double(h.data(r, c).imag())});
      res.outputs.push_back({suffix_for(variants, v), "csv", csv});
    }
  }
  return res;
}

Result cmd_spectrum(const RunConfig& cfg) {
  const auto variants = cfg.variants();
  const CavityParams p = cfg.cavity();
  const FockSpace space = cfg.space();
  const HamiltonianOptions ho = cfg.hamiltonian_options();
  const int count = static_cast<int>(cfg.integer("spectrum_count"));
  Result res;
  ordered_json summary;
  summary["ground_energy"] = ordered_json::object();
  summary["max_residual"] = ordered_json::object();
  bool has_new = false, has_law = false;
  for (HamiltonianVariant v : variants) {
    const OperatorMatrix h = build_hamiltonian(v, p, space, ho);
    const SpectrumResult sp = spectrum(h.data, count);
    std::string csv = "index,eigenvalue\n";
    for (Eigen::Index i = 0; i < sp.eigenvalues.size(); ++i)
      csv += csv_line({std::to_string(i), format_double(sp.eigenvalues(i))});
    res.outputs.push_back({suffix_for(variants, v), "csv", csv});
    summary["ground_energy"][to_string(v)] = number(sp.eigenvalues(0));
    summary["max_residual"][to_string(v)] = number(sp.max_residual);
    if (sp.max_residual > 1e-9 * sp.norm) {
      res.status = 1;
      res.failure = "eigenpair residual check failed for " + to_string(v);
    }
    has_new |= v == HamiltonianVariant::new_full;
    has_law |= v == HamiltonianVariant::law_full;
  }
  if (has_new && has_law) {
    const GroundStateComparison g = compare_ground_states(p, space, ho);
    ordered_json c;
    c["exact_shift"] = number(g.exact_shift);
    c["first_order"] = number(g.first_order);
    c["relative_error"] = number(g.relative_error);
    c["within_10_percent"] = g.relative_error <= 0.1;
    c["shift_negative"] = g.exact_shift < 0.0;
    summary["new_minus_law"] = c;
  }
  if (variants.size() > 1) res.outputs.push_back({"-summary", "json", dump(summary)});
  return res;
}

Result cmd_checks(const RunConfig& cfg) { return report_result(run_checks(cfg)); }

std::string grid_value(const nlohmann::json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::vector<std::string> sweep_point(const RunConfig& cfg, const std::string& target) {
  if (target == "rates") {
    const RateSet s = compute_rates(cfg.cavity(), static_cast<int>(cfg.integer("kmax")), cfg.rate_options());
    std::vector<double> v{s.base.x_zp, s.base.theta, s.base.R, s.base.alpha, s.base.beta, s.base.gamma,
                          s.base.g0, s.linear.g3, s.linear.g4_plus, s.linear.g4_minus, s.linear.G4_plus,
                          s.linear.G4_minus, s.linear.J, s.squeeze.rho_closed.real(), s.squeeze.rho_closed.imag(),
                          s.relativistic.w11, s.relativistic.w_over_beta};
    std::vector<std::string> out;
    for (double x : v) out.push_back(format_double(x));
    return out;
  }
  if (target == "spectrum") {
    const OperatorMatrix h = build_hamiltonian(cfg.variants().front(), cfg.cavity(), cfg.space(), cfg.hamiltonian_options());
    const SpectrumResult sp = spectrum(h.data, static_cast<int>(cfg.integer("spectrum_count")));
    std::vector<std::string> out;
    for (Eigen::Index i = 0; i < sp.eigenvalues.size(); ++i) out.push_back(format_double(sp.eigenvalues(i)));
    return out;
  }
  const MirrorParams mp = cfg.mirror();
  const TrajectoryRecord rec =
      integrate(cfg.initial_state(), mp, CoefficientTable(mp.kmax), cfg.number("t_end"), cfg.integrate_options());
  return {format_double(relative_energy_drift(rec)), format_double(rec.states.back().q),
          std::to_string(rec.statistics.accepted_steps), rec.stopped_at_floor ? "true" : "false"};
}

std::vector<std::string> sweep_header(const RunConfig& cfg, const std::string& target) {
  if (target == "rates")
    return {"x_zp", "theta", "R", "alpha", "beta", "gamma", "g0", "g3", "g4_plus", "g4_minus", "G4_plus",
            "G4_minus", "J", "rho_re", "rho_im", "w11", "w_over_beta"};
  if (target == "spectrum") {
    std::vector<std::string> h;
    const long n = std::min<long>(cfg.integer("spectrum_count") > 0 ? cfg.integer("spectrum_count") : cfg.space().dim(),
                                  cfg.space().dim());
    for (long i = 0; i < n; ++i) h.push_back("e_" + std::to_string(i));
    return h;
  }
  if (target == "evolve") return {"energy_drift", "final_q", "accepted_steps", "stopped_at_floor"};
  throw ConfigError("sweep_target must be rates, spectrum or evolve");
}

Result cmd_sweep(const RunConfig& cfg) {
  const nlohmann::json grid = cfg.raw()["sweep"];
  const std::string target = cfg.string("sweep_target");
  if (grid.empty()) throw ConfigError("sweep needs a nonempty grid, e.g. --sweep omega_opt=1,2,4");
  std::vector<std::string> keys;
  std::vector<std::vector<nlohmann::json>> values;
  std::size_t total = 1;
  for (const auto& [k, v] : grid.items()) {
    keys.push_back(k);
    values.push_back(v.get<std::vector<nlohmann::json>>());
    total *= values.back().size();
  }
  // Build every point's configuration up front so errors are usage errors.
  std::vector<RunConfig> points(total, cfg);
  std::vector<std::vector<std::string>> labels(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    std::vector<std::size_t> idx(keys.size());
    for (std::size_t d = keys.size(); d-- > 0;) {
      idx[d] = rest % values[d].size();
      rest /= values[d].size();
    }
    for (std::size_t d = 0; d < keys.size(); ++d) {
      points[i].set(keys[d], values[d][idx[d]]);
      labels[i].push_back(grid_value(values[d][idx[d]]));
    }
    points[i].resolved();
  }
  std::vector<std::string> header = keys;
  const auto th = sweep_header(points.front(), target);
  header.insert(header.end(), th.begin(), th.end());
  header.push_back("error");

  std::vector<std::vector<std::string>> rows(total);
  std::vector<std::string> errors(total);
  std::atomic<std::size_t> next{0};
  long threads = cfg.integer("threads");
  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<long>(threads, static_cast<long>(total));
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        rows[i] = sweep_point(points[i], target);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (long t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  Result res;
  std::string csv = csv_line(header);
  for (std::size_t i = 0; i < total; ++i) {
    std::vector<std::string> row = labels[i];
    std::vector<std::string> body = rows[i];
    body.resize(th.size(), "nan");
    row.insert(row.end(), body.begin(), body.end());
    std::string err = errors[i];
    for (char& c : err)
      if (c == ',' || c == '\n') c = ';';
    row.push_back(err);
    csv += csv_line(row);
    if (!errors[i].empty() && res.status == 0) {
      res.status = 1;
      res.failure = "sweep point " + std::to_string(i) + " failed: " + errors[i];
    }
  }
  res.outputs.push_back({"", "csv", csv});
  return res;
}

void emit(const std::string& subcommand, const RunConfig& cfg, const Result& res) {
  const std::string dir = cfg.string("out_dir");
  if (dir.empty()) {
    // Summaries go to stderr so stdout stays a single table per result.
    std::size_t tables = 0;
    for (const auto& o : res.outputs) tables += o.suffix != "-summary";
    for (const auto& o : res.outputs) {
      if (o.suffix == "-summary") {
        std::cerr << o.content;
        continue;
      }
      if (tables > 1) std::cout << "# " << subcommand << o.suffix << "\n";
      std::cout << o.content;
    }
    return;
  }
  std::filesystem::create_directories(dir);
  const std::string base = subcommand + "-" + cfg.hash();
  for (const auto& o : res.outputs) {
    const std::filesystem::path path = std::filesystem::path(dir) / (base + o.suffix + "." + o.ext);
    std::ofstream f(path, std::ios::binary);
    f << o.content;
    if (!f) throw std::runtime_error("cannot write " + path.string());
    std::cout << path.string() << "\n";
  }
}

std::string flag_name(const std::string& key) {
  std::string f = key;
  for (char& c : f)
    if (c == '_') c = '-';
  return "--" + f;
}

struct SubcommandFlags {
  std::string config_path;
  std::map<std::string, std::vector<std::string>> values;
};

std::string default_text(const ConfigKey& k) {
  if (k.default_value.is_null()) return "derived";
  if (k.default_value.is_string()) return "\"" + k.default_value.get<std::string>() + "\"";
  return k.default_value.dump();
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Moving-mirror cavity optomechanics: coefficients, dynamics, rates and Fock-space Hamiltonians"};
  app.require_subcommand(1);
  using Handler = Result (*)(const RunConfig&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
      {"coeffs", "coefficient table as CSV (k,j,g,h,d,r_k)", cmd_coeffs},
      {"verify", "series and Gram identity residuals", cmd_verify},
      {"evolve", "integrate the classical field-mirror equations", cmd_evolve},
      {"rates", "scalar coupling rates and squeeze ratio as JSON", cmd_rates},
      {"hamiltonian", "Hamiltonian matrices (nonzero entries)", cmd_hamiltonian},
      {"spectrum", "lowest eigenvalues of Hamiltonian variants", cmd_spectrum},
      {"checks", "full identity battery as a JSON report", cmd_checks},
      {"sweep", "Cartesian parameter grid evaluated in parallel", cmd_sweep},
  };
  std::vector<SubcommandFlags> flags(commands.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(std::get<0>(commands[i]), std::get<1>(commands[i]));
    sub->add_option("--config", flags[i].config_path, "JSON configuration file");
    for (const auto& key : config_keys()) {
      const bool multi = key.kind == KeyKind::string_list || key.kind == KeyKind::grid;
      auto* opt = sub->add_option(flag_name(key.name), flags[i].values[key.name],
                                  key.help + " [default: " + default_text(key) + "]");
      if (!multi) opt->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    const std::string name = std::get<0>(commands[i]);
    RunConfig cfg;
    try {
      if (!flags[i].config_path.empty()) {
        std::ifstream in(flags[i].config_path, std::ios::binary);
        if (!in) throw ConfigError("cannot read config file " + flags[i].config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg.merge_json_text(ss.str(), flags[i].config_path);
      }
      for (const auto& key : config_keys()) {
        const auto& given = flags[i].values[key.name];
        if (given.empty()) continue;
        if (key.kind == KeyKind::string_list) {
          cfg.set(key.name, given);
        } else if (key.kind == KeyKind::grid) {
          for (const auto& g : given) cfg.set_from_string(key.name, g);
        } else {
          cfg.set_from_string(key.name, given.back());
        }
      }
      cfg.resolved();
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    try {
      const Result res = std::get<2>(commands[i])(cfg);
      emit(name, cfg, res);
      if (res.status != 0) std::cerr << "error: " << res.failure << "\n";
      return res.status;
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << name << ": " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}

}  // namespace optomech
