// Cell problems over the affine-boundary classes A^{M,m}(Q_L): assembly of
// the free/frozen partition, matrix-free CG for quadratic energies, L-BFGS
// for the general case, and a brute-force oracle for desk-scale instances.
// Internally the lattice spacing is 1 (the cell-problem change of variables).

#pragma once

#include <latthom/potentials.hpp>

#include <deque>
#include <string>

namespace latthom {

struct CellProblem {
  const MultibodyPotential* potential = nullptr;
  Mat M;       // n x N affine slope
  int L = 0;   // cube side
  int m = -1;  // boundary-layer width; -1 means floor(sqrt(L))

  int layer_width() const { return m >= 0 ? m : int(std::floor(std::sqrt(double(L)))); }
};

struct CellSolution {
  LatticeField field;
  double per_volume_energy = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
  std::string method;
};

// Free sites are those whose m-box stays inside Q_L:
// -L/2 + m <= i_k <= L/2 - m for every coordinate.
class AssembledCell {
 public:
  explicit AssembledCell(const CellProblem& prob)
      : prob_(prob),
        dom_(LatticeDomain::cube(prob.potential->N(), prob.potential->n(), 1.0, prob.L)) {
    const int m = prob.layer_width();
    const double half = prob.L / 2.0;
    dom_.for_each([&](std::int64_t idx, const IVec& i) {
      bool free = true;
      for (int k = 0; k < dom_.N(); ++k)
        if (double(i[k]) < -half + m || double(i[k]) > half - m) free = false;
      if (free) free_sites_.push_back(idx);
    });
  }

  const CellProblem& problem() const { return prob_; }
  const LatticeDomain& domain() const { return dom_; }
  const std::vector<std::int64_t>& free_sites() const { return free_sites_; }
  std::int64_t dof() const { return std::int64_t(free_sites_.size()) * dom_.n(); }

  LatticeField affine_field() const { return LatticeField::affine(dom_, prob_.M); }

  Vec pack(const LatticeField& u) const {
    Vec x(dof());
    for (std::size_t s = 0; s < free_sites_.size(); ++s)
      x.segment(std::int64_t(s) * dom_.n(), dom_.n()) = u.values().col(free_sites_[s]);
    return x;
  }

  void unpack(const Vec& x, LatticeField& u) const {
    for (std::size_t s = 0; s < free_sites_.size(); ++s)
      u.values().col(free_sites_[s]) = x.segment(std::int64_t(s) * dom_.n(), dom_.n());
  }

  double objective(const LatticeField& u, int threads = 1) const {
    return energy(*prob_.potential, u, dom_, threads);
  }

  Vec free_gradient(const LatticeField& u) const {
    Mat g = gradient(*prob_.potential, u, dom_);
    Vec x(dof());
    for (std::size_t s = 0; s < free_sites_.size(); ++s)
      x.segment(std::int64_t(s) * dom_.n(), dom_.n()) = g.col(free_sites_[s]);
    return x;
  }

 private:
  CellProblem prob_;
  LatticeDomain dom_;
  std::vector<std::int64_t> free_sites_;
};

struct SolveOptions {
  double gtol_quadratic = 1e-8;
  double gtol_general = 1e-6;
  int max_iterations = 0;  // 0: 10 * #free coordinates
  int threads = 1;
};

namespace detail {

// Conjugate gradients on the stationarity system of a quadratic objective,
// with the Hessian applied matrix-free through gradient differences.
inline CellSolution solve_quadratic(const AssembledCell& cell, const SolveOptions& opt,
                                    LatticeField start) {
  CellSolution sol{std::move(start), 0.0, 0, 0.0, false, "exact-quadratic"};
  LatticeField& u = sol.field;
  const std::int64_t dof = cell.dof();
  if (dof == 0) {
    sol.converged = true;
    sol.per_volume_energy =
        cell.objective(u, opt.threads) / std::pow(double(cell.problem().L), cell.domain().N());
    return sol;
  }
  Vec x = cell.pack(u);
  Vec g0 = cell.free_gradient(u);
  LatticeField work = u;
  auto hess_apply = [&](const Vec& d) {
    cell.unpack(x + d, work);
    return (cell.free_gradient(work) - g0).eval();
  };
  const int max_it = opt.max_iterations > 0 ? opt.max_iterations : int(10 * dof);
  Vec r = -g0;
  Vec pdir = r;
  double rr = r.squaredNorm();
  Vec dx = Vec::Zero(dof);
  int it = 0;
  while (r.lpNorm<Eigen::Infinity>() > opt.gtol_quadratic && it < max_it) {
    Vec Ap = hess_apply(pdir);
    double pAp = pdir.dot(Ap);
    if (pAp <= 0.0) break;  // lost positive definiteness; report as-is
    double alpha = rr / pAp;
    dx += alpha * pdir;
    r -= alpha * Ap;
    double rr_new = r.squaredNorm();
    pdir = r + (rr_new / rr) * pdir;
    rr = rr_new;
    ++it;
  }
  cell.unpack(x + dx, u);
  sol.iterations = it;
  sol.grad_norm = cell.free_gradient(u).lpNorm<Eigen::Infinity>();
  sol.converged = sol.grad_norm <= 10.0 * opt.gtol_quadratic;
  sol.per_volume_energy =
      cell.objective(u, opt.threads) / std::pow(double(cell.problem().L), cell.domain().N());
  return sol;
}

// Limited-memory BFGS with Armijo backtracking; accepted iterates never
// increase the objective.
inline CellSolution solve_lbfgs(const AssembledCell& cell, const SolveOptions& opt,
                                LatticeField start) {
  CellSolution sol{std::move(start), 0.0, 0, 0.0, false, "iterative-first-order"};
  LatticeField& u = sol.field;
  const std::int64_t dof = cell.dof();
  const double volume = std::pow(double(cell.problem().L), cell.domain().N());
  if (dof == 0) {
    sol.converged = true;
    sol.per_volume_energy = cell.objective(u, opt.threads) / volume;
    return sol;
  }
  const int max_it = opt.max_iterations > 0 ? opt.max_iterations : int(10 * dof);
  const int mem = 8;
  Vec x = cell.pack(u);
  LatticeField work = u;
  auto fval = [&](const Vec& xx) {
    cell.unpack(xx, work);
    return cell.objective(work, opt.threads);
  };
  auto fgrad = [&](const Vec& xx) {
    cell.unpack(xx, work);
    return cell.free_gradient(work);
  };
  double f = fval(x);
  Vec g = fgrad(x);
  std::deque<Vec> svec, yvec;
  std::deque<double> rho;
  int it = 0;
  while (g.lpNorm<Eigen::Infinity>() > opt.gtol_general && it < max_it) {
    // two-loop recursion
    Vec q = g;
    std::vector<double> alpha(svec.size());
    for (int k = int(svec.size()) - 1; k >= 0; --k) {
      alpha[k] = rho[k] * svec[k].dot(q);
      q -= alpha[k] * yvec[k];
    }
    if (!yvec.empty()) {
      double gamma = svec.back().dot(yvec.back()) / yvec.back().squaredNorm();
      q *= gamma;
    }
    for (std::size_t k = 0; k < svec.size(); ++k) {
      double beta = rho[k] * yvec[k].dot(q);
      q += (alpha[k] - beta) * svec[k];
    }
    Vec d = -q;
    if (d.dot(g) >= 0.0) d = -g;  // safeguard
    double t = 1.0;
    double slope = d.dot(g);
    double fnew = f;
    Vec xnew = x;
    bool accepted = false;
    for (int ls = 0; ls < 50; ++ls) {
      xnew = x + t * d;
      fnew = fval(xnew);
      if (fnew <= f + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    Vec gnew = fgrad(xnew);
    Vec s = xnew - x, y = gnew - g;
    double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      svec.push_back(s);
      yvec.push_back(y);
      rho.push_back(1.0 / sy);
      if (int(svec.size()) > mem) {
        svec.pop_front();
        yvec.pop_front();
        rho.pop_front();
      }
    }
    x = xnew;
    f = fnew;
    g = gnew;
    ++it;
  }
  cell.unpack(x, u);
  sol.iterations = it;
  sol.grad_norm = g.lpNorm<Eigen::Infinity>();
  sol.converged = sol.grad_norm <= opt.gtol_general;
  sol.per_volume_energy = f / volume;
  return sol;
}

}  // namespace detail

enum class SolveMethod { Auto, ExactQuadratic, Iterative, BruteOracle };

inline bool is_quadratic(const MultibodyPotential& pot) {
  if (dynamic_cast<const PairPotential*>(&pot)) return pot.p() == 2.0;
  return pot.p() == 2.0 && dynamic_cast<const DeterminantPotential*>(&pot) == nullptr;
}

inline CellSolution solve(const CellProblem& prob, SolveMethod method = SolveMethod::Auto,
                          SolveOptions opt = {},
                          std::optional<LatticeField> start = std::nullopt) {
  AssembledCell cell(prob);
  LatticeField u0 = start ? std::move(*start) : cell.affine_field();
  if (method == SolveMethod::Auto)
    method = is_quadratic(*prob.potential) ? SolveMethod::ExactQuadratic : SolveMethod::Iterative;
  CellSolution sol = method == SolveMethod::ExactQuadratic
                         ? detail::solve_quadratic(cell, opt, std::move(u0))
                         : detail::solve_lbfgs(cell, opt, std::move(u0));
  return sol;
}

// ---------------------------------------------------------------------------
// Brute oracle: dense linear solve for quadratic energies, zooming grid
// enumeration otherwise (at most 6 free scalars).

struct BruteLimits {
  std::int64_t max_dense_dof = 4000;
  std::int64_t max_grid_dof = 6;
};

inline CellSolution brute_oracle(const CellProblem& prob, BruteLimits lim = {}) {
  AssembledCell cell(prob);
  CellSolution sol{cell.affine_field(), 0.0, 0, 0.0, false, "brute-oracle"};
  const std::int64_t dof = cell.dof();
  const double volume = std::pow(double(prob.L), cell.domain().N());
  if (dof == 0) {
    sol.converged = true;
    sol.per_volume_energy = cell.objective(sol.field) / volume;
    return sol;
  }
  if (is_quadratic(*prob.potential)) {
    if (dof > lim.max_dense_dof)
      throw std::invalid_argument("brute_oracle: instance too large for dense solve");
    Vec x0 = cell.pack(sol.field);
    Vec g0 = cell.free_gradient(sol.field);
    LatticeField work = sol.field;
    Mat H(dof, dof);
    for (std::int64_t c = 0; c < dof; ++c) {
      Vec e = Vec::Zero(dof);
      e[c] = 1.0;
      cell.unpack(x0 + e, work);
      H.col(c) = cell.free_gradient(work) - g0;
    }
    Vec dx = H.ldlt().solve(-g0);
    cell.unpack(x0 + dx, sol.field);
    sol.grad_norm = cell.free_gradient(sol.field).lpNorm<Eigen::Infinity>();
    sol.converged = true;
    sol.per_volume_energy = cell.objective(sol.field) / volume;
    return sol;
  }
  if (dof > lim.max_grid_dof)
    throw std::invalid_argument("brute_oracle: instance too large for grid enumeration");
  // zooming grid search around the affine point
  Vec center = cell.pack(sol.field);
  double radius = 1.0 + center.lpNorm<Eigen::Infinity>();
  LatticeField work = sol.field;
  Vec best = center;
  double fbest = cell.objective(sol.field);
  const int steps = 9;  // 9^dof evaluations per level
  for (int level = 0; level < 14; ++level) {
    std::int64_t total = 1;
    for (std::int64_t k = 0; k < dof; ++k) total *= steps;
    for (std::int64_t t = 0; t < total; ++t) {
      Vec x = center;
      std::int64_t rem = t;
      for (std::int64_t k = 0; k < dof; ++k) {
        int s = int(rem % steps);
        rem /= steps;
        x[k] += radius * (2.0 * s / (steps - 1) - 1.0);
      }
      cell.unpack(x, work);
      double f = cell.objective(work);
      if (f < fbest) {
        fbest = f;
        best = x;
      }
    }
    center = best;
    radius *= 0.35;
  }
  cell.unpack(best, sol.field);
  sol.converged = true;
  sol.per_volume_energy = fbest / volume;
  sol.grad_norm = cell.free_gradient(sol.field).lpNorm<Eigen::Infinity>();
  return sol;
}

// ---------------------------------------------------------------------------
// Dirichlet infimum curves

struct CurvePoint {
  int L = 0;
  int m = 0;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline std::vector<CurvePoint> dirichlet_infimum_curve(const MultibodyPotential& pot,
                                                       const Mat& M, int m,
                                                       const std::vector<int>& Ls,
                                                       SolveOptions opt = {}) {
  std::vector<CurvePoint> curve;
  for (int L : Ls) {
    CellProblem prob{&pot, M, L, m};
    CellSolution sol = solve(prob, SolveMethod::Auto, opt);
    curve.push_back({L, prob.layer_width(), sol.per_volume_energy, sol.grad_norm,
                     sol.iterations, sol.converged});
  }
  return curve;
}

}  // namespace latthom
