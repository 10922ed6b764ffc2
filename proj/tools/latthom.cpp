// Command-line driver: hypothesis checking, cell problems, homogenized
// density estimation, sweeps, and the coercivity-margin table.
//
// Exit codes: 0 success, 1 check failure, 2 solver non-convergence,
// 3 configuration error.

#include <latthom/io.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <set>
#include <iostream>

namespace {

using namespace latthom;

int default_threads() {
  if (const char* env = std::getenv("LATTHOM_THREADS")) {
    int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return 1;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("config parse error: ") + ex.what());
  }
}

void emit(const std::string& path, const json& j) {
  std::string text = j.dump(2) + "\n";
  if (path.empty())
    std::cout << text;
  else
    write_atomic(path, text);
}

struct CommonArgs {
  std::string config_path;
  std::string output;
  int threads = default_threads();
};

PotentialSpec potential_from(const json& cfg) {
  if (!cfg.contains("potential")) throw ConfigError("config needs a 'potential' section");
  return make_potential(cfg.at("potential"));
}

int run_check(const CommonArgs& common, int samples_override, std::uint64_t seed_override,
              bool with_periodic) {
  json cfg = load_config(common.config_path);
  require_keys(cfg, "config", {"potential", "check", "threads", "output"});
  PotentialSpec spec = potential_from(cfg);
  json sect = cfg.contains("check") ? cfg.at("check") : json::object();
  require_keys(sect, "check section", {"samples", "seed", "eps", "delta", "periodic"});
  SampleSchedule sch;
  sch.samples_per_cell = samples_override > 0 ? samples_override
                                              : get_or(sect, "samples", sch.samples_per_cell);
  sch.seed = seed_override ? seed_override : get_or(sect, "seed", sch.seed);
  sch.eps_list = get_or(sect, "eps", sch.eps_list);
  sch.delta_list = get_or(sect, "delta", sch.delta_list);
  bool periodic = with_periodic || get_or(sect, "periodic", false);

  HypothesisReport rep = check_all(*spec.potential, sch);
  if (periodic) {
    if (auto* lj = dynamic_cast<const LJLinearizedPotential*>(spec.potential.get())) {
      auto fam = lj_truncation_family(std::max(4, std::min(6, lj->spec().k)));
      for (auto& e : check_Hp(fam, sch)) rep.entries.push_back(std::move(e));
    } else {
      HypothesisEntry e;
      e.name = "Hp4-Hp7";
      e.status = CheckStatus::NotApplicable;
      e.note = "no truncation family declared for this potential";
      rep.entries.push_back(std::move(e));
    }
  }

  json out{{"config", {{"potential", spec.resolved},
                       {"samples", sch.samples_per_cell},
                       {"seed", sch.seed},
                       {"eps", sch.eps_list},
                       {"delta", sch.delta_list}}},
           {"report", to_json(rep)}};
  emit(common.output, out);
  for (const auto& e : rep.entries) {
    std::cerr << e.name << ": " << to_string(e.status);
    if (e.fitted_constant) std::cerr << "  (fitted " << format_double(*e.fitted_constant) << ")";
    std::cerr << "\n";
  }
  return rep.all_pass() ? 0 : 1;
}

int run_cell(const CommonArgs& common, std::vector<double> Mflat, int L, int m,
             const std::string& method, double gtol, const std::string& dump_field) {
  json cfg = load_config(common.config_path);
  require_keys(cfg, "config", {"potential", "cell", "threads", "output"});
  PotentialSpec spec = potential_from(cfg);
  const MultibodyPotential& pot = *spec.potential;
  json sect = cfg.contains("cell") ? cfg.at("cell") : json::object();
  require_keys(sect, "cell section", {"M", "L", "m", "method", "gtol", "dump_field"});
  if (Mflat.empty() && sect.contains("M")) {
    Mat M = parse_matrix(sect.at("M"), pot.n(), pot.N(), "cell.M");
    for (std::int64_t r = 0; r < M.rows(); ++r)
      for (std::int64_t c = 0; c < M.cols(); ++c) Mflat.push_back(M(r, c));
  }
  if (Mflat.empty()) throw ConfigError("cell: slope M is required");
  Mat M = parse_matrix(json(Mflat), pot.n(), pot.N(), "M");
  if (L <= 0) L = get_or(sect, "L", 0);
  if (L <= 0) throw ConfigError("cell: cube side L is required and must be positive");
  if (m == -2) m = get_or(sect, "m", -1);
  std::string meth = !method.empty() ? method : get_or<std::string>(sect, "method", "auto");

  SolveMethod sm = SolveMethod::Auto;
  if (meth == "exact-quadratic") sm = SolveMethod::ExactQuadratic;
  else if (meth == "iterative-first-order") sm = SolveMethod::Iterative;
  else if (meth == "brute-oracle") sm = SolveMethod::BruteOracle;
  else if (meth != "auto") throw ConfigError("cell: unknown method '" + meth + "'");

  SolveOptions opt;
  opt.threads = common.threads;
  if (gtol > 0) opt.gtol_quadratic = opt.gtol_general = gtol;

  CellProblem prob{&pot, M, L, m};
  CellSolution sol = sm == SolveMethod::BruteOracle ? brute_oracle(prob)
                                                    : solve(prob, sm, opt);
  AssembledCell cell(prob);
  json out{{"config", {{"potential", spec.resolved},
                       {"M_rowmajor", Mflat},
                       {"L", L},
                       {"m", prob.layer_width()},
                       {"method", sol.method},
                       {"threads", common.threads}}},
           {"F_L", sol.per_volume_energy},
           {"iterations", sol.iterations},
           {"grad_norm", sol.grad_norm},
           {"converged", sol.converged},
           {"free_sites", std::int64_t(cell.free_sites().size())}};
  if (cell.dof() == 0) out["note"] = "no free sites; F_L is the affine-field value";
  emit(common.output, out);
  if (!dump_field.empty()) {
    std::ostringstream csv;
    csv << "# site coordinates, value components\n";
    sol.field.domain().for_each([&](std::int64_t idx, const IVec& i) {
      for (int k = 0; k < pot.N(); ++k) csv << i[k] << " ";
      for (int c = 0; c < pot.n(); ++c) {
        csv << format_double(sol.field.values()(c, idx));
        csv << (c + 1 == pot.n() ? "\n" : " ");
      }
    });
    write_atomic(dump_field, csv.str());
  }
  return sol.converged ? 0 : 2;
}

int run_fhom(const CommonArgs& common, std::vector<double> Mflat, std::vector<int> schedule,
             const std::string& csv_path, const std::string& plot_path) {
  json cfg = load_config(common.config_path);
  require_keys(cfg, "config", {"potential", "fhom", "threads", "output"});
  PotentialSpec spec = potential_from(cfg);
  const MultibodyPotential& pot = *spec.potential;
  json sect = cfg.contains("fhom") ? cfg.at("fhom") : json::object();
  require_keys(sect, "fhom section", {"M", "schedule"});
  if (Mflat.empty() && sect.contains("M")) {
    Mat M = parse_matrix(sect.at("M"), pot.n(), pot.N(), "fhom.M");
    for (std::int64_t r = 0; r < M.rows(); ++r)
      for (std::int64_t c = 0; c < M.cols(); ++c) Mflat.push_back(M(r, c));
  }
  if (Mflat.empty()) throw ConfigError("fhom: slope M is required");
  Mat M = parse_matrix(json(Mflat), pot.n(), pot.N(), "M");
  if (schedule.empty()) schedule = get_or(sect, "schedule", std::vector<int>{});

  SolveOptions opt;
  opt.threads = common.threads;
  HomogenizationEstimate est = estimate_fhom(pot, M, schedule, opt);
  json out{{"config", {{"potential", spec.resolved},
                       {"M_rowmajor", Mflat},
                       {"schedule", schedule},
                       {"threads", common.threads}}},
           {"estimate", to_json(est)}};
  emit(common.output, out);
  if (!csv_path.empty()) write_atomic(csv_path, sweep_csv({est}));
  if (!plot_path.empty())
    write_atomic(plot_path, curve_plot_data(est.schedule, "per-volume minimum vs cube side"));
  return est.converged ? 0 : 2;
}

int run_sweep(const CommonArgs& common, const std::string& record_path,
              const std::string& csv_path) {
  json cfg = load_config(common.config_path);
  require_keys(cfg, "config", {"potential", "sweep", "threads", "output"});
  PotentialSpec spec = potential_from(cfg);
  const MultibodyPotential& pot = *spec.potential;
  if (!cfg.contains("sweep")) throw ConfigError("sweep: config needs a 'sweep' section");
  json sect = cfg.at("sweep");
  require_keys(sect, "sweep section", {"grid", "schedule", "record"});
  if (!sect.contains("grid")) throw ConfigError("sweep: grid of slopes is required");
  std::vector<Mat> grid;
  for (const auto& gj : sect.at("grid"))
    grid.push_back(parse_matrix(gj, pot.n(), pot.N(), "sweep grid entry"));
  std::vector<int> schedule = get_or(sect, "schedule", std::vector<int>{});
  std::string record = !record_path.empty() ? record_path
                                            : get_or<std::string>(sect, "record", "");

  // resume bookkeeping: one JSON line per completed estimate
  std::vector<HomogenizationEstimate> done;
  auto key_of = [](const Mat& M) {
    std::string k;
    for (std::int64_t i = 0; i < M.size(); ++i) k += format_double(M.data()[i]) + ",";
    return k;
  };
  std::set<std::string> seen;
  if (!record.empty()) {
    std::ifstream in(record);
    std::string line;
    while (in && std::getline(in, line)) {
      if (line.empty()) continue;
      json j = json::parse(line);
      auto Mv = j.at("M_rowmajor").get<std::vector<double>>();
      Mat M = parse_matrix(json(Mv), pot.n(), pot.N(), "record entry");
      seen.insert(key_of(M));
      HomogenizationEstimate est;
      est.M = M;
      est.fhom = j.at("f_hom").get<double>();
      est.error = j.at("error_bar").get<double>();
      for (const auto& pj : j.at("schedule"))
        est.schedule.push_back({pj.at("L").get<int>(), pj.at("m").get<int>(),
                                pj.at("F_L").get<double>(), pj.at("grad_norm").get<double>(),
                                pj.at("iterations").get<int>(),
                                pj.at("converged").get<bool>()});
      done.push_back(std::move(est));
    }
  }

  SolveOptions opt;
  opt.threads = common.threads;
  std::ofstream rec;
  if (!record.empty()) rec.open(record, std::ios::app);
  int errors = 0;
  auto fresh = sweep(
      pot, grid, schedule, opt,
      [&](const Mat& M) { return seen.count(key_of(M)) > 0; },
      [&](const HomogenizationEstimate& est) {
        if (rec.is_open()) {
          rec << to_json(est).dump() << "\n";
          rec.flush();
        }
      },
      [&](const Mat& M, const std::string& what) {
        ++errors;
        std::cerr << "sweep entry failed for M=" << key_of(M) << ": " << what << "\n";
      });
  for (auto& est : fresh) done.push_back(std::move(est));

  json results = json::array();
  for (const auto& est : done) results.push_back(to_json(est));
  emit(common.output, json{{"config", {{"potential", spec.resolved},
                                       {"schedule", schedule},
                                       {"threads", common.threads}}},
                           {"results", results}});
  if (!csv_path.empty()) write_atomic(csv_path, sweep_csv(done));
  return errors == 0 ? 0 : 2;
}

int run_margin(const CommonArgs& common, int kmax, const std::string& plot_path) {
  std::vector<std::pair<int, double>> rows;
  json table = json::array();
  for (int K = 2; K <= kmax; ++K) {
    LjMargin m = lj_coercivity_margin(K);
    rows.push_back({K, m.value});
    if (K <= 64 || K % 50 == 0 || K == kmax)
      table.push_back({{"K", K}, {"margin", m.value}, {"tail_bound", m.tail_bound}});
  }
  emit(common.output, json{{"K_max", kmax}, {"table", table}});
  if (!plot_path.empty()) write_atomic(plot_path, margin_plot_data(rows));
  std::cerr << "margin(" << kmax << ") = " << format_double(rows.back().second) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multibody lattice energies: hypothesis checks, cell problems, "
               "homogenized density estimation"};
  app.require_subcommand(1);

  CommonArgs common;
  app.add_option("--config", common.config_path, "JSON configuration file")
      ->envname("LATTHOM_CONFIG");
  app.add_option("--output", common.output, "result JSON path (stdout if omitted)");
  app.add_option("--threads", common.threads, "worker thread count");

  auto* check = app.add_subcommand("check", "run the hypothesis suite");
  int samples = 0;
  std::uint64_t seed = 0;
  bool periodic = false;
  check->add_option("--samples", samples, "samples per cell");
  check->add_option("--seed", seed, "RNG seed");
  check->add_flag("--periodic", periodic, "include the truncation-family checks");

  auto* cell = app.add_subcommand("cell", "solve one cell problem");
  std::vector<double> Mflat;
  int L = 0, m = -2;
  std::string method, dump_field;
  double gtol = 0.0;
  cell->add_option("--M", Mflat, "affine slope, row-major");
  cell->add_option("--L", L, "cube side");
  cell->add_option("--m", m, "boundary-layer width (-1: floor(sqrt(L)))");
  cell->add_option("--method", method, "auto | exact-quadratic | iterative-first-order | brute-oracle");
  cell->add_option("--gtol", gtol, "gradient tolerance");
  cell->add_option("--dump-field", dump_field, "CSV path for the minimizer");

  auto* fhom = app.add_subcommand("fhom", "estimate the homogenized density at one slope");
  std::vector<double> Mf;
  std::vector<int> schedule;
  std::string csv_path, plot_path;
  fhom->add_option("--M", Mf, "affine slope, row-major");
  fhom->add_option("--schedule", schedule, "cube sides");
  fhom->add_option("--csv", csv_path, "CSV output path");
  fhom->add_option("--plot", plot_path, "plot data path");

  auto* sw = app.add_subcommand("sweep", "estimate over a grid of slopes");
  std::string record_path, sweep_csv_path;
  sw->add_option("--record", record_path, "resume record (JSON lines)");
  sw->add_option("--csv", sweep_csv_path, "CSV output path");

  auto* margin = app.add_subcommand("lj-margin", "coercivity margin table");
  int kmax = 1000;
  std::string margin_plot;
  margin->add_option("--kmax", kmax, "largest truncation level");
  margin->add_option("--plot", margin_plot, "plot data path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return run_check(common, samples, seed, periodic);
    if (cell->parsed()) return run_cell(common, Mflat, L, m, method, gtol, dump_field);
    if (fhom->parsed()) return run_fhom(common, Mf, schedule, csv_path, plot_path);
    if (sw->parsed()) return run_sweep(common, record_path, sweep_csv_path);
    if (margin->parsed()) return run_margin(common, kmax, margin_plot);
  } catch (const latthom::ConfigError& ex) {
    std::cerr << latthom::json{{"error", "config"}, {"detail", ex.what()}}.dump() << "\n";
    return 3;
  } catch (const std::exception& ex) {
    std::cerr << latthom::json{{"error", "runtime"}, {"detail", ex.what()}}.dump() << "\n";
    return 2;
  }
  return 3;
}
