// Per-site multibody energy densities phi_i and the concrete families:
// pair interactions and discrete-determinant densities. The regrouped
// Lennard-Jones linearization lives in lj.hpp.

#pragma once

#include <latthom/lattice.hpp>

#include <algorithm>
#include <limits>
#include <memory>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace latthom {

// ---------------------------------------------------------------------------
// Decay profiles: nonnegative coefficient tables C^{j,xi}

struct ProfileEntry {
  IVec j;    // site offset (integer lattice units)
  IVec xi;   // direction
  double value = 0.0;
};

struct DecayProfile {
  std::vector<ProfileEntry> entries;
  double tail_bound = 0.0;  // analytic bound on everything beyond the table

  double total() const {
    std::vector<double> buf;
    buf.reserve(entries.size());
    for (const auto& e : entries) buf.push_back(e.value);
    return pairwise_sum(buf) + tail_bound;
  }

  // sum over entries with max(eps |xi|_2, |eps j|_2) > threshold
  double tail_sum(double eps, double threshold) const {
    std::vector<double> buf;
    for (const auto& e : entries) {
      double r = std::max(eps * e.xi.cast<double>().norm(),
                          eps * e.j.cast<double>().norm());
      if (r > threshold) buf.push_back(e.value);
    }
    return pairwise_sum(buf) + tail_bound;
  }
};

// ---------------------------------------------------------------------------
// The multibody potential interface

class MultibodyPotential {
 public:
  virtual ~MultibodyPotential() = default;

  virtual int N() const = 0;
  virtual int n() const = 0;
  virtual double p() const = 0;
  virtual int period() const { return 1; }
  // window radius in the infinity norm (lattice steps)
  virtual int range() const = 0;

  virtual double evaluate(const LatticeField& u, const IVec& i) const = 0;

  // Adds d phi_i / d u(s) for every stored site s into grad (n x count,
  // the layout of u.values()). Contributions to sites outside the stored
  // box are dropped; they belong to the boundary data.
  virtual void add_gradient(const LatticeField& u, const IVec& i, Mat& grad) const {
    finite_difference_gradient(u, i, grad);
  }

  // Per-site energy of u(x) = Mx at an interior site, period-averaged.
  virtual double cauchy_born(const Mat& M) const {
    const int T = period();
    const int pad = range() + T + 1;
    LatticeDomain dom(N(), n(), 1.0, Box{IVec::Constant(N(), -pad), IVec::Constant(N(), pad)});
    LatticeField u = LatticeField::affine(dom, M);
    // average over one period cell
    std::vector<double> buf;
    IVec r = IVec::Zero(N());
    std::int64_t cells = 1;
    for (int k = 0; k < N(); ++k) cells *= T;
    for (std::int64_t c = 0; c < cells; ++c) {
      std::int64_t t = c;
      for (int k = N() - 1; k >= 0; --k) {
        r[k] = int(t % T);
        t /= T;
      }
      buf.push_back(evaluate(u, r));
    }
    return pairwise_sum(buf) / double(cells);
  }

  // (H4): coefficients C^{j,xi}_{eps,delta}; nullopt when the family does
  // not declare one.
  virtual std::optional<DecayProfile> locality_profile(double /*eps*/, double /*delta*/) const {
    return std::nullopt;
  }

  // (H5): the constant C and the plain table C^{j,xi}_eps.
  virtual std::optional<std::pair<double, DecayProfile>> convexity_profile(double /*eps*/) const {
    return std::nullopt;
  }

  // Declared constants, where the construction provides them.
  virtual std::optional<double> declared_coercivity() const { return std::nullopt; }
  virtual std::optional<double> declared_growth() const { return std::nullopt; }

 protected:
  void finite_difference_gradient(const LatticeField& u, const IVec& i, Mat& grad) const {
    const LatticeDomain& dom = u.domain();
    const int r = range();
    LatticeField w = u;
    IVec lo = i.array() - r, hi = i.array() + r;
    IVec s = lo;
    const double h = 1e-6;
    while (true) {
      if (dom.contains(s)) {
        std::int64_t idx = dom.linear(s);
        for (int c = 0; c < dom.n(); ++c) {
          double keep = w.values()(c, idx);
          w.values()(c, idx) = keep + h;
          double ep = evaluate(w, i);
          w.values()(c, idx) = keep - h;
          double em = evaluate(w, i);
          w.values()(c, idx) = keep;
          grad(c, idx) += (ep - em) / (2.0 * h);
        }
      }
      int k = dom.N() - 1;
      for (; k >= 0; --k) {
        if (++s[k] <= hi[k]) break;
        s[k] = lo[k];
      }
      if (k < 0) break;
    }
  }
};

// ---------------------------------------------------------------------------
// Energy and gradient of a field over a subregion

// F(u, A) = sum_{i in Z(A)} eps^N phi_i(u), summed in a fixed pairwise shape
// so serial and threaded runs agree bitwise.
inline double energy(const MultibodyPotential& pot, const LatticeField& u,
                     const LatticeDomain& A, int threads = 1) {
  const double wcell = std::pow(u.domain().epsilon(), pot.N());
  std::vector<double> buf(std::size_t(A.count()), 0.0);
  auto work = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx)
      buf[std::size_t(idx)] = wcell * pot.evaluate(u, A.site(idx));
  };
  if (threads <= 1) {
    work(0, A.count());
  } else {
    std::vector<std::thread> pool;
    std::int64_t chunk = (A.count() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      std::int64_t lo = t * chunk, hi = std::min<std::int64_t>(A.count(), lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return pairwise_sum(buf);
}

inline double energy(const MultibodyPotential& pot, const LatticeField& u, int threads = 1) {
  return energy(pot, u, u.domain(), threads);
}

// d F(u, A) / d u, in the layout of u.values(). Serial scatter in site order.
inline Mat gradient(const MultibodyPotential& pot, const LatticeField& u,
                    const LatticeDomain& A) {
  const double wcell = std::pow(u.domain().epsilon(), pot.N());
  Mat g = Mat::Zero(u.domain().n(), u.domain().count());
  A.for_each([&](std::int64_t, const IVec& i) { pot.add_gradient(u, i, g); });
  return wcell * g;
}

inline Mat gradient(const MultibodyPotential& pot, const LatticeField& u) {
  return gradient(pot, u, u.domain());
}

// ---------------------------------------------------------------------------
// Pair interactions:  phi_i(u) = sum_xi f^xi(i, D^xi u(i)),
// f^xi(i, z) = c^xi(i) |z|^p with T-periodic coefficients.

class PairPotential : public MultibodyPotential {
 public:
  struct Term {
    IVec xi;
    // coefficient per residue class of i (lexicographic over [0,T)^N);
    // size 1 means site-independent
    std::vector<double> coeff;
  };

  PairPotential(int N, int n, double p, int T, std::vector<Term> terms)
      : N_(N), n_(n), p_(p), T_(T), terms_(std::move(terms)) {
    range_ = 0;
    for (const auto& t : terms_) range_ = std::max(range_, norm_inf(t.xi));
  }

  static PairPotential nn_quadratic(int N, int n) {
    std::vector<Term> terms;
    for (int k = 0; k < N; ++k) {
      IVec e = IVec::Zero(N);
      e[k] = 1;
      terms.push_back({e, {1.0}});
    }
    return PairPotential(N, n, 2.0, 1, std::move(terms));
  }

  // 1D chain with NN stiffness alternating over a period-T pattern.
  static PairPotential spring_chain(std::vector<double> stiffness) {
    IVec e = IVec::Constant(1, 1);
    int T = int(stiffness.size());
    return PairPotential(1, 1, 2.0, T, {{e, std::move(stiffness)}});
  }

  int N() const override { return N_; }
  int n() const override { return n_; }
  double p() const override { return p_; }
  int period() const override { return T_; }
  int range() const override { return range_; }
  const std::vector<Term>& terms() const { return terms_; }

  double coeff_at(const Term& t, const IVec& i) const {
    if (t.coeff.size() == 1) return t.coeff[0];
    std::size_t idx = 0;
    for (int k = 0; k < N_; ++k) idx = idx * T_ + std::size_t(((i[k] % T_) + T_) % T_);
    return t.coeff[idx];
  }

  double evaluate(const LatticeField& u, const IVec& i) const override {
    double acc = 0.0;
    for (const auto& t : terms_)
      acc += coeff_at(t, i) * std::pow(difference_quotient(u, i, t.xi).norm(), p_);
    return acc;
  }

  void add_gradient(const LatticeField& u, const IVec& i, Mat& grad) const override {
    const LatticeDomain& dom = u.domain();
    for (const auto& t : terms_) {
      Vec d = difference_quotient(u, i, t.xi);
      double nrm = d.norm();
      if (nrm == 0.0 && p_ < 2.0) continue;
      double scale = coeff_at(t, i) * p_ * (nrm == 0.0 ? 0.0 : std::pow(nrm, p_ - 2.0)) /
                     (dom.epsilon() * t.xi.cast<double>().norm());
      Vec g = scale * d;
      IVec j = i + t.xi;
      if (dom.contains(j)) grad.col(dom.linear(j)) += g;
      if (dom.contains(i)) grad.col(dom.linear(i)) -= g;
    }
  }

  // max_i c^xi(i), the growth coefficient of f^xi
  double coeff_bound(const Term& t) const {
    return *std::max_element(t.coeff.begin(), t.coeff.end());
  }

  std::optional<DecayProfile> locality_profile(double eps, double delta) const override {
    // f^xi only reads sites i and i+xi, so only offsets with
    // eps |xi|_inf >= delta/2 can leave Q_delta(i).
    DecayProfile prof;
    for (const auto& t : terms_)
      if (eps * norm_inf(t.xi) >= delta / 2.0)
        prof.entries.push_back({IVec::Zero(N_), t.xi, coeff_bound(t)});
    return prof;
  }

  std::optional<std::pair<double, DecayProfile>> convexity_profile(double /*eps*/) const override {
    // Blend product rule: D^xi v(j) = psi(j) D^xi z(j) + (1-psi(j)) D^xi w(j)
    // + D^xi psi(j) (z-w)(j+eps xi), with |D^xi psi| <= sqrt(N) sup |D^e psi|.
    // Convexity of |.|^p then gives C = 3^{p-1} on phi(z)+phi(w) and the
    // (z-w)(j+eps xi) term is charged to the remainder's first sum.
    const double C = std::pow(3.0, p_ - 1.0);
    const double a = C * std::pow(double(N_), p_ / 2.0);
    DecayProfile prof;
    for (const auto& t : terms_)
      prof.entries.push_back({IVec::Zero(N_), t.xi, a * coeff_bound(t)});
    return std::make_pair(C, prof);
  }

  std::optional<double> declared_coercivity() const override {
    // min over coordinate directions of the worst-residue NN coefficient
    double c = std::numeric_limits<double>::infinity();
    for (int k = 0; k < N_; ++k) {
      IVec e = IVec::Zero(N_);
      e[k] = 1;
      double best = 0.0;
      for (const auto& t : terms_)
        if (t.xi == e)
          best = std::max(best, *std::min_element(t.coeff.begin(), t.coeff.end()));
      c = std::min(c, best);
    }
    return std::isfinite(c) ? std::optional<double>(c) : std::nullopt;
  }

  std::optional<double> declared_growth() const override {
    std::vector<double> buf;
    for (const auto& t : terms_) buf.push_back(coeff_bound(t));
    return pairwise_sum(buf);
  }

 private:
  int N_, n_;
  double p_;
  int T_;
  std::vector<Term> terms_;
  int range_ = 0;
};

// ---------------------------------------------------------------------------
// Discrete determinants:
//   phi_i(u) = sum_tuples g(det(D^{xi_1} u(i), ..., D^{xi_n} u(i)))
//              + sum_n |D^{e_n} u(i)|^p,
// g(z) = coeff * (sqrt(z^2 + eta^2) - eta), a smoothed |z|.

class DeterminantPotential : public MultibodyPotential {
 public:
  struct Tuple {
    std::vector<IVec> xis;  // n offsets
    double coeff = 1.0;
  };

  static constexpr double kEta = 1e-8;

  DeterminantPotential(int N, double p, std::vector<Tuple> tuples)
      : N_(N), p_(p), tuples_(std::move(tuples)) {
    range_ = 1;
    for (const auto& t : tuples_) {
      if (int(t.xis.size()) != N_)
        throw std::invalid_argument("determinant tuple arity must equal n");
      for (const auto& xi : t.xis) range_ = std::max(range_, norm_inf(xi));
    }
  }

  // built-in 2D example: a single tuple (e_1, e_2) with g = |.|
  static DeterminantPotential example2d() {
    IVec e1 = IVec::Zero(2), e2 = IVec::Zero(2);
    e1[0] = 1;
    e2[1] = 1;
    return DeterminantPotential(2, 2.0, {{{e1, e2}, 1.0}});
  }

  int N() const override { return N_; }
  int n() const override { return N_; }  // square determinants
  double p() const override { return p_; }
  int range() const override { return range_; }
  const std::vector<Tuple>& tuples() const { return tuples_; }

  static double smooth_abs(double z) { return std::sqrt(z * z + kEta * kEta) - kEta; }
  static double smooth_abs_d(double z) { return z / std::sqrt(z * z + kEta * kEta); }

  double det_of(const LatticeField& u, const IVec& i, const Tuple& t) const {
    Mat A(N_, N_);
    for (int c = 0; c < N_; ++c) A.col(c) = difference_quotient(u, i, t.xis[c]);
    return A.determinant();
  }

  double evaluate(const LatticeField& u, const IVec& i) const override {
    double acc = 0.0;
    for (const auto& t : tuples_) acc += t.coeff * smooth_abs(det_of(u, i, t));
    for (int k = 0; k < N_; ++k) {
      IVec e = IVec::Zero(N_);
      e[k] = 1;
      acc += std::pow(difference_quotient(u, i, e).norm(), p_);
    }
    return acc;
  }

  void add_gradient(const LatticeField& u, const IVec& i, Mat& grad) const override {
    const LatticeDomain& dom = u.domain();
    const double eps = dom.epsilon();
    for (const auto& t : tuples_) {
      Mat A(N_, N_);
      for (int c = 0; c < N_; ++c) A.col(c) = difference_quotient(u, i, t.xis[c]);
      double det = A.determinant();
      Mat cof = cofactor(A);  // d det / d A
      double s = t.coeff * smooth_abs_d(det);
      for (int c = 0; c < N_; ++c) {
        Vec g = (s / (eps * t.xis[c].cast<double>().norm())) * cof.col(c);
        IVec j = i + t.xis[c];
        if (dom.contains(j)) grad.col(dom.linear(j)) += g;
        if (dom.contains(i)) grad.col(dom.linear(i)) -= g;
      }
    }
    for (int k = 0; k < N_; ++k) {
      IVec e = IVec::Zero(N_);
      e[k] = 1;
      Vec d = difference_quotient(u, i, e);
      double nrm = d.norm();
      Vec g = (p_ * (nrm == 0.0 ? 0.0 : std::pow(nrm, p_ - 2.0)) / eps) * d;
      IVec j = i + e;
      if (dom.contains(j)) grad.col(dom.linear(j)) += g;
      if (dom.contains(i)) grad.col(dom.linear(i)) -= g;
    }
  }

  std::optional<DecayProfile> locality_profile(double eps, double delta) const override {
    // tuples with any offset at eps |xi|_inf >= delta/2 may read outside
    // Q_delta(i); charge 1/n of the tuple coefficient to each member offset
    DecayProfile prof;
    for (const auto& t : tuples_) {
      bool far = false;
      for (const auto& xi : t.xis)
        if (eps * norm_inf(xi) >= delta / 2.0) far = true;
      if (!far) continue;
      for (const auto& xi : t.xis)
        prof.entries.push_back({IVec::Zero(N_), xi, t.coeff / double(N_)});
    }
    // the nearest-neighbour p-terms themselves read outside once eps >= delta/2
    if (eps >= delta / 2.0)
      for (int k = 0; k < N_; ++k) {
        IVec e = IVec::Zero(N_);
        e[k] = 1;
        prof.entries.push_back({IVec::Zero(N_), e, 1.0});
      }
    return prof;
  }

  std::optional<std::pair<double, DecayProfile>> convexity_profile(double /*eps*/) const override {
    // Hadamard + AM-GM on the blended columns reduces the determinant terms
    // to p-th powers of blended quotients; the blend product rule (see the
    // pair family) then yields C = 3^{p-1} with the tuple quotients and the
    // (z-w) contributions charged to the remainder sums.
    const double C = std::pow(3.0, p_ - 1.0);
    const double a = C * std::max(1.0, std::pow(double(N_), p_ / 2.0));
    DecayProfile prof;
    for (const auto& t : tuples_)
      for (const auto& xi : t.xis)
        prof.entries.push_back({IVec::Zero(N_), xi, a * t.coeff / double(N_)});
    for (int k = 0; k < N_; ++k) {
      IVec e = IVec::Zero(N_);
      e[k] = 1;
      prof.entries.push_back({IVec::Zero(N_), e, a});
    }
    return std::make_pair(C, prof);
  }

  std::optional<double> declared_coercivity() const override { return 1.0; }

  std::optional<double> declared_growth() const override {
    // Hadamard + AM-GM: |det|^{p/n} <= (1/n) sum |D^{xi_j}|^p <= |M|^p on
    // affine fields, so each tuple contributes at most its coefficient
    std::vector<double> buf{double(N_)};
    for (const auto& t : tuples_) buf.push_back(t.coeff);
    return pairwise_sum(buf);
  }

  // (1/n) sum_j |D^{xi_j}|^p - |det|^{p/n}; nonnegative by Hadamard/AM-GM
  double hadamard_gap(const LatticeField& u, const IVec& i, const Tuple& t) const {
    double det = det_of(u, i, t);
    std::vector<double> buf;
    for (const auto& xi : t.xis)
      buf.push_back(std::pow(difference_quotient(u, i, xi).norm(), p_));
    return pairwise_sum(buf) / double(N_) - std::pow(std::abs(det), p_ / double(N_));
  }

 private:
  static Mat cofactor(const Mat& A) {
    const int m = int(A.rows());
    Mat C(m, m);
    if (m == 1) {
      C(0, 0) = 1.0;
      return C;
    }
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        Mat minor(m - 1, m - 1);
        for (int rr = 0, ri = 0; rr < m; ++rr) {
          if (rr == r) continue;
          for (int cc = 0, ci = 0; cc < m; ++cc) {
            if (cc == c) continue;
            minor(ri, ci++) = A(rr, cc);
          }
          ++ri;
        }
        C(r, c) = ((r + c) % 2 ? -1.0 : 1.0) * minor.determinant();
      }
    return C;
  }

  int N_;
  double p_;
  std::vector<Tuple> tuples_;
  int range_;
};

}  // namespace latthom
