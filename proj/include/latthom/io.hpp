// Configuration parsing, result serialization, and file emission.  All
// floating-point output uses 17 significant digits so values survive a
// round-trip; files are written to a temporary sibling and renamed.

#pragma once

#include <latthom/homogenize.hpp>
#include <latthom/hypotheses.hpp>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace latthom {

using json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
  }
  fs::rename(tmp, target);
}

// ---------------------------------------------------------------------------
// Config validation helpers

inline void require_keys(const json& j, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("bad value for '") + key + "': " + ex.what());
  }
}

inline Mat parse_matrix(const json& j, int rows, int cols, const char* what) {
  std::vector<double> flat;
  if (j.is_array() && !j.empty() && j.front().is_array()) {
    for (const auto& row : j)
      for (const auto& v : row) flat.push_back(v.get<double>());
  } else if (j.is_array()) {
    for (const auto& v : j) flat.push_back(v.get<double>());
  } else if (j.is_number()) {
    flat.push_back(j.get<double>());
  } else {
    throw ConfigError(std::string(what) + " must be a number or (nested) array");
  }
  if (int(flat.size()) != rows * cols)
    throw ConfigError(std::string(what) + " has " + std::to_string(flat.size()) +
                      " entries, expected " + std::to_string(rows * cols));
  Mat M(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) M(r, c) = flat[std::size_t(r * cols + c)];
  return M;
}

// ---------------------------------------------------------------------------
// Coefficient tables from CSV: each row is xi_1 ... xi_N followed by the
// per-residue coefficients.  Parse errors carry line/column diagnostics.

inline std::vector<PairPotential::Term> load_terms_csv(const std::string& path, int N,
                                                       int residues) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open coefficient table " + path);
  std::vector<PairPotential::Term> terms;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    PairPotential::Term t;
    t.xi = IVec::Zero(N);
    for (int k = 0; k < N; ++k) {
      long v = 0;
      if (!(ss >> v))
        throw ConfigError(path + ":" + std::to_string(lineno) + ": column " +
                          std::to_string(k + 1) + ": expected integer offset");
      t.xi[k] = int(v);
    }
    for (int k = 0; k < residues; ++k) {
      double c = 0.0;
      if (!(ss >> c))
        throw ConfigError(path + ":" + std::to_string(lineno) + ": column " +
                          std::to_string(N + k + 1) + ": expected coefficient");
      t.coeff.push_back(c);
    }
    std::string trailing;
    if (ss >> trailing)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": trailing data '" +
                        trailing + "'");
    terms.push_back(std::move(t));
  }
  if (terms.empty()) throw ConfigError(path + ": empty coefficient table");
  return terms;
}

// ---------------------------------------------------------------------------
// Potential factory

struct PotentialSpec {
  std::shared_ptr<MultibodyPotential> potential;
  json resolved;  // normalized spec echoed into outputs
};

inline PotentialSpec make_potential(const json& j) {
  if (!j.is_object() || !j.contains("family"))
    throw ConfigError("potential spec must be an object with a 'family' key");
  std::string fam = j.at("family").get<std::string>();
  PotentialSpec out;
  if (fam == "nn-quadratic") {
    require_keys(j, "potential", {"family", "N", "n"});
    int N = get_or(j, "N", 1), n = get_or(j, "n", N);
    out.potential = std::make_shared<PairPotential>(PairPotential::nn_quadratic(N, n));
    out.resolved = {{"family", fam}, {"N", N}, {"n", n}};
  } else if (fam == "spring-chain") {
    require_keys(j, "potential", {"family", "stiffness"});
    auto stiff = get_or(j, "stiffness", std::vector<double>{1.0, 3.0});
    out.potential = std::make_shared<PairPotential>(PairPotential::spring_chain(stiff));
    out.resolved = {{"family", fam}, {"stiffness", stiff}};
  } else if (fam == "pair") {
    require_keys(j, "potential", {"family", "N", "n", "p", "period", "terms", "terms_csv"});
    int N = get_or(j, "N", 1), n = get_or(j, "n", 1), T = get_or(j, "period", 1);
    double p = get_or(j, "p", 2.0);
    std::vector<PairPotential::Term> terms;
    int residues = 1;
    for (int k = 0; k < N; ++k) residues *= T;
    if (j.contains("terms_csv")) {
      terms = load_terms_csv(j.at("terms_csv").get<std::string>(), N, residues);
    } else if (j.contains("terms")) {
      if (j.at("terms").size() > 10000)
        throw ConfigError("inline coefficient tables are capped at 10^4 entries; use terms_csv");
      for (const auto& tj : j.at("terms")) {
        require_keys(tj, "pair term", {"xi", "coeff"});
        PairPotential::Term t;
        auto xi = tj.at("xi").get<std::vector<int>>();
        if (int(xi.size()) != N) throw ConfigError("pair term xi must have N entries");
        t.xi = IVec::Zero(N);
        for (int k = 0; k < N; ++k) t.xi[k] = xi[std::size_t(k)];
        t.coeff = tj.at("coeff").get<std::vector<double>>();
        if (int(t.coeff.size()) != residues)
          throw ConfigError("pair term needs one coefficient per residue class (T^N)");
        terms.push_back(std::move(t));
      }
    } else {
      throw ConfigError("pair potential needs 'terms' or 'terms_csv'");
    }
    out.potential = std::make_shared<PairPotential>(N, n, p, T, terms);
    json jt = json::array();
    for (const auto& t : terms) {
      std::vector<int> xi(t.xi.data(), t.xi.data() + t.xi.size());
      jt.push_back({{"xi", xi}, {"coeff", t.coeff}});
    }
    out.resolved = {{"family", fam}, {"N", N}, {"n", n}, {"p", p}, {"period", T}, {"terms", jt}};
  } else if (fam == "determinant-2d") {
    require_keys(j, "potential", {"family", "coeff"});
    double c = get_or(j, "coeff", 1.0);
    IVec e1 = IVec::Zero(2), e2 = IVec::Zero(2);
    e1[0] = 1;
    e2[1] = 1;
    out.potential = std::make_shared<DeterminantPotential>(
        2, 2.0, std::vector<DeterminantPotential::Tuple>{{{e1, e2}, c}});
    out.resolved = {{"family", fam}, {"coeff", c}};
  } else if (fam == "lj") {
    require_keys(j, "potential", {"family", "k", "mode"});
    int k = get_or(j, "k", 3);
    std::string mode = get_or<std::string>(j, "mode", "truncated");
    if (mode != "truncated" && mode != "monotone")
      throw ConfigError("lj mode must be 'truncated' or 'monotone'");
    out.potential = std::make_shared<LJLinearizedPotential>(
        k, mode == "monotone" ? LJLinearizedPotential::Mode::Monotone
                              : LJLinearizedPotential::Mode::Truncated);
    out.resolved = {{"family", fam}, {"k", k}, {"mode", mode}};
  } else {
    throw ConfigError("unknown potential family '" + fam + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON views of results

inline json to_json(const HypothesisEntry& e) {
  json j{{"name", e.name}, {"status", to_string(e.status)}, {"samples", e.samples}};
  if (e.fitted_constant) j["fitted_constant"] = *e.fitted_constant;
  if (!e.note.empty()) j["note"] = e.note;
  if (!e.decay.empty()) {
    json d = json::array();
    for (const auto& r : e.decay)
      d.push_back({{"eps", r.eps}, {"delta", r.delta}, {"total", r.total}});
    j["decay"] = d;
  }
  if (e.worst)
    j["worst_violation"] = {{"value", e.worst->value},
                            {"seed", e.worst->seed},
                            {"sample", e.worst->sample_index},
                            {"detail", e.worst->detail}};
  return j;
}

inline json to_json(const HypothesisReport& rep) {
  json j = json::array();
  for (const auto& e : rep.entries) j.push_back(to_json(e));
  return json{{"entries", j}, {"all_pass", rep.all_pass()}};
}

inline json to_json(const CurvePoint& p) {
  return {{"L", p.L},        {"m", p.m},
          {"F_L", p.value},  {"grad_norm", p.grad_norm},
          {"iterations", p.iterations}, {"converged", p.converged}};
}

inline json to_json(const HomogenizationEstimate& est) {
  json sched = json::array();
  for (const auto& p : est.schedule) sched.push_back(to_json(p));
  std::vector<double> M;
  for (std::int64_t r = 0; r < est.M.rows(); ++r)
    for (std::int64_t c = 0; c < est.M.cols(); ++c) M.push_back(est.M(r, c));
  json tiling = json::array();
  for (const auto& t : est.tiling)
    tiling.push_back({{"L", t.L},
                      {"S", t.S},
                      {"tiled_per_volume", t.tiled_per_volume},
                      {"residual", t.residual}});
  return {{"M_rowmajor", M},      {"schedule", sched},
          {"f_hom", est.fhom},    {"error_bar", est.error},
          {"fit_inv_L", est.fit_inv_L}, {"fit_layer", est.fit_layer},
          {"tiling", tiling},     {"converged", est.converged}};
}

// ---------------------------------------------------------------------------
// CSV / plot-data emission (whitespace-separated, header comments)

inline std::string sweep_csv(const std::vector<HomogenizationEstimate>& results) {
  std::ostringstream out;
  out << "# M_entries... L F_L grad_norm iterations f_hom_extrapolated error_bar\n";
  for (const auto& est : results)
    for (const auto& p : est.schedule) {
      for (std::int64_t r = 0; r < est.M.rows(); ++r)
        for (std::int64_t c = 0; c < est.M.cols(); ++c)
          out << format_double(est.M(r, c)) << " ";
      out << p.L << " " << format_double(p.value) << " " << format_double(p.grad_norm)
          << " " << p.iterations << " " << format_double(est.fhom) << " "
          << format_double(est.error) << "\n";
    }
  return out.str();
}

inline std::string curve_plot_data(const std::vector<CurvePoint>& curve,
                                   const std::string& title) {
  std::ostringstream out;
  out << "# " << title << "\n# L F_L\n";
  for (const auto& p : curve) out << p.L << " " << format_double(p.value) << "\n";
  return out.str();
}

inline std::string margin_plot_data(const std::vector<std::pair<int, double>>& rows) {
  std::ostringstream out;
  out << "# K margin\n";
  for (const auto& [K, v] : rows) out << K << " " << format_double(v) << "\n";
  return out.str();
}

}  // namespace latthom
