// Lattice geometry, discrete fields, difference quotients, paths and
// cut-off functions. Everything here works in integer coordinates of the
// underlying lattice; positions are recovered as epsilon * i.
//
// Conventions:
//  * Cubes are half-open: Q_L(0) = [-L/2, L/2)^N, so integer translates
//    L*k + Q_L tile space without overlap and |Z^N cap Q_L| = L^N.
//  * Site enumeration is lexicographic (first coordinate slowest), so
//    every reduction over a domain has a fixed, reproducible order.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace latthom {

using IVec = Eigen::VectorXi;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline std::string to_string(const IVec& v) {
  std::string s = "(";
  for (int k = 0; k < v.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(v[k]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// Domain

struct Box {
  IVec lo;  // inclusive
  IVec hi;  // inclusive

  bool contains(const IVec& i) const {
    for (int k = 0; k < lo.size(); ++k)
      if (i[k] < lo[k] || i[k] > hi[k]) return false;
    return true;
  }
  std::int64_t count() const {
    std::int64_t c = 1;
    for (int k = 0; k < lo.size(); ++k) c *= std::int64_t(hi[k] - lo[k] + 1);
    return c;
  }
};

// Integer points of [-L/2, L/2)^N.
inline Box cube_box(int N, int L) {
  Box b;
  // even L: -L/2 .. L/2-1; odd L: -(L-1)/2 .. (L-1)/2 — L points either way
  b.lo = IVec::Constant(N, L % 2 == 0 ? -L / 2 : -(L - 1) / 2);
  b.hi = IVec::Constant(N, L % 2 == 0 ? L / 2 - 1 : (L - 1) / 2);
  return b;
}

// The index set Z_eps(region): integer lattice points of a box region with
// spacing eps, spatial dimension N and codomain dimension n.
class LatticeDomain {
 public:
  LatticeDomain(int N, int n, double epsilon, Box box)
      : N_(N), n_(n), eps_(epsilon), box_(std::move(box)) {
    if (N <= 0 || n <= 0) throw std::invalid_argument("dimensions must be positive");
    if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
    strides_.resize(N);
    std::int64_t s = 1;
    for (int k = N - 1; k >= 0; --k) {  // last coordinate fastest
      strides_[k] = s;
      s *= box_.hi[k] - box_.lo[k] + 1;
    }
    count_ = s;
  }

  static LatticeDomain cube(int N, int n, double epsilon, int L) {
    return LatticeDomain(N, n, epsilon, cube_box(N, L));
  }

  int N() const { return N_; }
  int n() const { return n_; }
  double epsilon() const { return eps_; }
  const Box& box() const { return box_; }
  std::int64_t count() const { return count_; }

  bool contains(const IVec& i) const { return box_.contains(i); }

  std::int64_t linear(const IVec& i) const {
    std::int64_t idx = 0;
    for (int k = 0; k < N_; ++k) idx += strides_[k] * std::int64_t(i[k] - box_.lo[k]);
    return idx;
  }

  IVec site(std::int64_t idx) const {
    IVec i(N_);
    for (int k = 0; k < N_; ++k) {
      std::int64_t extent = box_.hi[k] - box_.lo[k] + 1;
      i[k] = int(box_.lo[k] + (idx / strides_[k]) % extent);
    }
    return i;
  }

  // Lexicographic sweep: f(linear index, integer site).
  template <class F>
  void for_each(F&& f) const {
    IVec i = box_.lo;
    for (std::int64_t idx = 0; idx < count_; ++idx) {
      f(idx, i);
      for (int k = N_ - 1; k >= 0; --k) {
        if (++i[k] <= box_.hi[k]) break;
        i[k] = box_.lo[k];
      }
    }
  }

 private:
  int N_, n_;
  double eps_;
  Box box_;
  std::vector<std::int64_t> strides_;
  std::int64_t count_;
};

// ---------------------------------------------------------------------------
// Exterior resolution policy

// How a field resolves sites outside its stored box.
struct Extension {
  enum class Kind { Zero, Affine, Error };
  Kind kind = Kind::Error;
  Mat M;  // n x N slope for Kind::Affine, u(i) = M * (eps*i)

  static Extension zero() { return {Kind::Zero, {}}; }
  static Extension affine(Mat slope) { return {Kind::Affine, std::move(slope)}; }
  static Extension error() { return {Kind::Error, {}}; }
};

struct WindowEscapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Field

// A map Z_eps(region) -> R^n stored densely in enumeration order, plus the
// policy resolving sites outside the region.
class LatticeField {
 public:
  LatticeField(LatticeDomain dom, Extension ext = Extension::error())
      : dom_(std::move(dom)), ext_(std::move(ext)),
        vals_(Mat::Zero(dom_.n(), dom_.count())) {}

  const LatticeDomain& domain() const { return dom_; }
  const Extension& extension() const { return ext_; }
  void set_extension(Extension e) { ext_ = std::move(e); }

  Mat& values() { return vals_; }
  const Mat& values() const { return vals_; }

  Eigen::Ref<Vec> at(const IVec& i) { return vals_.col(dom_.linear(i)); }
  Eigen::Ref<const Vec> at(const IVec& i) const { return vals_.col(dom_.linear(i)); }

  // Resolve any integer site, applying the extension policy outside the box.
  Vec value(const IVec& i) const {
    if (dom_.contains(i)) return vals_.col(dom_.linear(i));
    switch (ext_.kind) {
      case Extension::Kind::Zero:
        return Vec::Zero(dom_.n());
      case Extension::Kind::Affine:
        return ext_.M * (dom_.epsilon() * i.cast<double>());
      case Extension::Kind::Error:
        throw WindowEscapeError("window escapes domain at site " + to_string(i));
    }
    return Vec::Zero(dom_.n());  // unreachable
  }

  static LatticeField affine(const LatticeDomain& dom, const Mat& M) {
    LatticeField u(dom, Extension::affine(M));
    dom.for_each([&](std::int64_t idx, const IVec& i) {
      u.vals_.col(idx) = M * (dom.epsilon() * i.cast<double>());
    });
    return u;
  }

  static LatticeField constant(const LatticeDomain& dom, const Vec& c,
                               Extension ext = Extension::error()) {
    LatticeField u(dom, std::move(ext));
    u.vals_.colwise() = c;
    return u;
  }

 private:
  LatticeDomain dom_;
  Extension ext_;
  Mat vals_;
};

// ---------------------------------------------------------------------------
// Difference quotients

// D^xi_eps u(i) = (u(i + xi) - u(i)) / (eps * |xi|_2), i in integer coords.
inline Vec difference_quotient(const LatticeField& u, const IVec& i, const IVec& xi) {
  double norm = xi.cast<double>().norm();
  if (norm == 0.0) throw std::invalid_argument("direction offset must be nonzero");
  return (u.value(i + xi) - u.value(i)) / (u.domain().epsilon() * norm);
}

// ---------------------------------------------------------------------------
// Lattice paths

// Coordinate-grouped unit-step path from j to j + xi: all +-e_1 steps first,
// then +-e_2, etc., sign matching the corresponding component of xi.
struct LatticePath {
  IVec origin;
  IVec offset;
  std::vector<IVec> steps;    // signed unit vectors, length |xi|_1
  std::vector<IVec> visited;  // length |xi|_1 + 1, visited[0] = origin
};

inline int norm1(const IVec& xi) { return xi.cwiseAbs().sum(); }
inline int norm_inf(const IVec& xi) { return xi.size() ? xi.cwiseAbs().maxCoeff() : 0; }

inline LatticePath build_path(const IVec& j, const IVec& xi) {
  if (norm1(xi) == 0) throw std::invalid_argument("direction offset must be nonzero");
  LatticePath p;
  p.origin = j;
  p.offset = xi;
  p.visited.push_back(j);
  IVec cur = j;
  for (int k = 0; k < xi.size(); ++k) {
    IVec e = IVec::Zero(xi.size());
    e[k] = xi[k] > 0 ? 1 : -1;
    for (int h = 0; h < std::abs(xi[k]); ++h) {
      p.steps.push_back(e);
      cur += e;
      p.visited.push_back(cur);
    }
  }
  return p;
}

// RHS - LHS of the discrete p-power path inequality
//   |D^xi_1 u(j)|^p <= Cfactor / |xi|_1 * sum_h |D^{e(h)}_1 u(j_h)|^p.
// The provable constant is Cfactor = N^{p/2} (Jensen over |xi|_1 terms plus
// the |xi|_2 >= |xi|_1 / sqrt(N) norm conversion).
inline double path_power_inequality_gap(const LatticeField& u, const IVec& j,
                                        const IVec& xi, double p, double Cfactor) {
  LatticePath path = build_path(j, xi);
  double lhs = std::pow(difference_quotient(u, j, xi).norm(), p);
  double rhs = 0.0;
  for (std::size_t h = 0; h < path.steps.size(); ++h)
    rhs += std::pow(difference_quotient(u, path.visited[h], path.steps[h]).norm(), p);
  rhs *= Cfactor / double(norm1(xi));
  return rhs - lhs;
}

inline double path_constant(int N, double p) { return std::pow(double(N), p / 2.0); }

// ---------------------------------------------------------------------------
// Cut-off functions

// psi : domain -> [0,1] with a declared bound on |D^{e_n}_eps psi|.
class CutoffFunction {
 public:
  CutoffFunction(LatticeDomain dom, std::function<double(const IVec&)> f,
                 double declared_gradient_bound)
      : dom_(std::move(dom)), vals_(dom_.count()),
        declared_bound_(declared_gradient_bound) {
    dom_.for_each([&](std::int64_t idx, const IVec& i) {
      double v = f(i);
      if (v < 0.0 || v > 1.0)
        throw std::invalid_argument("cut-off values must lie in [0,1]");
      vals_[idx] = v;
    });
    // verify the declared bound against the actual interior maximum
    double actual = 0.0;
    dom_.for_each([&](std::int64_t, const IVec& i) {
      for (int k = 0; k < dom_.N(); ++k) {
        IVec e = IVec::Zero(dom_.N());
        e[k] = 1;
        if (dom_.contains(i + e)) {
          double d = std::abs((*this)(i + e) - (*this)(i)) / dom_.epsilon();
          actual = std::max(actual, d);
        }
      }
    });
    if (actual > declared_bound_ * (1.0 + 1e-12))
      throw std::invalid_argument("declared cut-off gradient bound violated");
  }

  const LatticeDomain& domain() const { return dom_; }
  double declared_gradient_bound() const { return declared_bound_; }

  // Sites outside the box resolve to the clamped boundary value; the blends
  // in this codebase only read psi on its own domain.
  double operator()(const IVec& i) const {
    IVec c = i;
    for (int k = 0; k < dom_.N(); ++k)
      c[k] = std::min(std::max(c[k], dom_.box().lo[k]), dom_.box().hi[k]);
    return vals_[dom_.linear(c)];
  }

  static CutoffFunction constant(const LatticeDomain& dom, double v) {
    return CutoffFunction(dom, [v](const IVec&) { return v; }, 0.0);
  }

 private:
  LatticeDomain dom_;
  Eigen::VectorXd vals_;
  double declared_bound_;
};

// v = psi z + (1 - psi) w.  The exact product rule
//   D^xi v(j) = psi(j) D^xi z(j) + (1-psi(j)) D^xi w(j)
//               + D^xi psi(j) (z(j+eps xi) - w(j+eps xi))
// then holds at every site where the window resolves.
inline LatticeField blend(const LatticeField& z, const LatticeField& w,
                          const CutoffFunction& psi) {
  const LatticeDomain& dom = z.domain();
  if (w.domain().count() != dom.count() || w.domain().N() != dom.N() ||
      w.domain().n() != dom.n() ||
      w.domain().box().lo != dom.box().lo || w.domain().box().hi != dom.box().hi)
    throw std::invalid_argument("blend: mismatched field domains");
  LatticeField v(dom, z.extension());
  dom.for_each([&](std::int64_t idx, const IVec& i) {
    double s = psi(i);
    v.values().col(idx) = s * z.values().col(idx) + (1.0 - s) * w.values().col(idx);
  });
  return v;
}

// ---------------------------------------------------------------------------
// Piecewise-constant embedding (nearest lattice point, lexicographic ties)

class PiecewiseConstant {
 public:
  explicit PiecewiseConstant(const LatticeField& u) : u_(&u) {}

  // Nearest point of eps Z^N; exact half-integer ties go to the smaller
  // integer coordinate.
  Vec operator()(const Vec& x) const {
    const double eps = u_->domain().epsilon();
    IVec i(u_->domain().N());
    for (int k = 0; k < i.size(); ++k) {
      double t = x[k] / eps;
      double r = std::round(t);
      if (std::abs(t - std::floor(t) - 0.5) == 0.0) r = std::floor(t);
      i[k] = int(r);
    }
    return u_->value(i);
  }

  // L^p norm over the region: each site owns the cell eps*i + [-eps/2,eps/2)^N
  // clipped to the region box [eps(lo-1/2), eps(hi+1/2)).
  double lp_norm(double p) const {
    const LatticeDomain& dom = u_->domain();
    const double cell = std::pow(dom.epsilon(), dom.N());
    double acc = 0.0;
    dom.for_each([&](std::int64_t idx, const IVec&) {
      acc += std::pow(u_->values().col(idx).norm(), p) * cell;
    });
    return std::pow(acc, 1.0 / p);
  }

 private:
  const LatticeField* u_;
};

// ---------------------------------------------------------------------------
// Deterministic reductions

// Fixed-shape pairwise sum over a buffer of per-site contributions. Parallel
// producers fill the buffer by index; the reduction itself is order-fixed, so
// results are bit-identical for any thread count.
inline double pairwise_sum(const std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t k = lo; k < hi; ++k) s += buf[k];
    return s;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(buf, lo, mid) + pairwise_sum(buf, mid, hi);
}

inline double pairwise_sum(const std::vector<double>& buf) {
  return pairwise_sum(buf, 0, buf.size());
}

}  // namespace latthom
