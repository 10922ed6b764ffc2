// Quadratic (linearized) Lennard-Jones lattice energy in 3D and its
// regrouping into nonnegative per-site multibody densities.
//
// The raw truncated energy per site is
//   R_k(i) = sum_{0 < |xi|_inf <= k} V''(|xi|) |D^xi_1 u(i)|^2,
// indefinite because V'' < 0 beyond r = (13/7)^{1/6}. Routing each
// long-range bond along a nearest-neighbour lattice path,
//   f^xi_i = V''(|xi|) (|D^xi u(i)|^2 - (3/|xi|_1) sum_h |D^{step} u(i_h)|^2)
// is nonnegative (V'' < 0 times the nonpositive path-inequality gap), and
// the borrowed surrogates are paid back by correcting the nearest-neighbour
// coefficient. Summed over all sites the regrouped and raw energies agree
// exactly on compactly-perturbed affine fields.

#pragma once

#include <latthom/potentials.hpp>

#include <map>

namespace latthom {

// V(r) = r^-12 - 2 r^-6;  V''(r) = 156 r^-14 - 84 r^-8
inline double lj_vpp(double r) {
  if (r <= 0.0) throw std::invalid_argument("lj_vpp: r must be positive");
  return 156.0 * std::pow(r, -14.0) - 84.0 * std::pow(r, -8.0);
}

// Margin of (H3) coercivity for the corrected nearest-neighbour coefficient:
//   V''(1) + 12 V''(sqrt 2) + 3 sum_{k=2}^K V''(k) (3k^2 - 3k + 1).
// Every added term is <= 0, so the margin decreases in K; positivity for all
// K certifies coercivity of the regrouped potential.
struct LjMargin {
  double value = 0.0;
  double tail_bound = 0.0;  // |sum beyond K|, via |V''(r)| <= 84 r^-8
};

inline LjMargin lj_coercivity_margin(int K) {
  if (K < 2) throw std::invalid_argument("lj_coercivity_margin: K >= 2 required");
  double m = lj_vpp(1.0) + 12.0 * lj_vpp(std::sqrt(2.0));
  for (int k = 2; k <= K; ++k)
    m += 3.0 * lj_vpp(double(k)) * double(3 * k * k - 3 * k + 1);
  double tail = 0.0;
  for (int k = K + 1; k <= K + 64; ++k)
    tail += 3.0 * 84.0 * std::pow(double(k), -8.0) * double(3 * k * k - 3 * k + 1);
  // geometric-style closure for k > K+64: integrand < 84*4k^-6
  tail += 3.0 * 84.0 * 4.0 * std::pow(double(K + 64), -5.0) / 5.0;
  return {m, tail};
}

// ---------------------------------------------------------------------------
// Regrouped spec

struct LJLinearizedSpec {
  int k = 1;  // truncation radius, infinity norm
  struct LongRange {
    IVec xi;
    double vpp;                // V''(|xi|), negative for all non-unit xi
    std::vector<IVec> steps;   // path steps from 0 to xi
    std::vector<IVec> visited; // path sites, length |xi|_1 + 1
  };
  // borrowed path surrogates, aggregated per nearest-neighbour bond:
  // contributes w |u(i+b) - u(i+a)|^2 / eps^2 with w = sum -3 V''/|xi|_1 > 0
  struct Surrogate {
    IVec a, b;
    double w = 0.0;
  };
  std::vector<LongRange> long_range;  // all non-unit |xi|_inf <= k
  std::vector<Surrogate> surrogates;  // bond-aggregated path corrections
  double unit_coeff = 0.0;            // V''(1) + borrowed corrections, same for all 6 units
};

// Per signed unit direction v, the amount borrowed by paths of all included
// long-range bonds: sum over xi with sign(xi_axis) matching of
// |xi_axis| * 3 V''(|xi|) / |xi|_1  (negative).
inline double lj_unit_correction(int k) {
  std::vector<double> buf;
  for (int a = -k; a <= k; ++a)
    for (int b = -k; b <= k; ++b)
      for (int c = -k; c <= k; ++c) {
        IVec xi(3);
        xi << a, b, c;
        int l1 = norm1(xi);
        if (l1 == 0 || (l1 == 1)) continue;  // skip 0 and unit vectors
        if (xi[0] <= 0) continue;            // +e_1 steps only; symmetric in v
        buf.push_back(double(xi[0]) * 3.0 * lj_vpp(xi.cast<double>().norm()) / double(l1));
      }
  return pairwise_sum(buf);
}

inline LJLinearizedSpec lj_regroup(int k) {
  if (k < 1) throw std::invalid_argument("lj_regroup: k >= 1 required");
  LJLinearizedSpec spec;
  spec.k = k;
  for (int a = -k; a <= k; ++a)
    for (int b = -k; b <= k; ++b)
      for (int c = -k; c <= k; ++c) {
        IVec xi(3);
        xi << a, b, c;
        if (norm1(xi) <= 1) continue;
        LJLinearizedSpec::LongRange lr;
        lr.xi = xi;
        lr.vpp = lj_vpp(xi.cast<double>().norm());
        LatticePath path = build_path(IVec::Zero(3), xi);
        lr.steps = path.steps;
        lr.visited = path.visited;
        spec.long_range.push_back(std::move(lr));
      }
  // aggregate the borrowed surrogates per bond so evaluation touches each
  // nearest-neighbour difference once instead of once per crossing path
  std::map<std::array<int, 6>, double> bonds;
  for (const auto& lr : spec.long_range) {
    double w = -3.0 * lr.vpp / double(norm1(lr.xi));
    for (std::size_t h = 0; h < lr.steps.size(); ++h) {
      const IVec& a = lr.visited[h];
      IVec b = a + lr.steps[h];
      bonds[{a[0], a[1], a[2], b[0], b[1], b[2]}] += w;
    }
  }
  for (const auto& [key, w] : bonds) {
    LJLinearizedSpec::Surrogate s;
    s.a = IVec(3);
    s.b = IVec(3);
    s.a << key[0], key[1], key[2];
    s.b << key[3], key[4], key[5];
    s.w = w;
    spec.surrogates.push_back(std::move(s));
  }
  spec.unit_coeff = lj_vpp(1.0) + lj_unit_correction(k);
  return spec;
}

// ---------------------------------------------------------------------------
// Decay coefficient tables (the C^{j,e_n} of the regrouping)
//
// C^{0,v} = V''(1) and, for every site j visited with step direction v by the
// path of some non-unit xi starting at the origin, the magnitude of the
// borrowed surrogate 3 V''(|xi|) / |xi|_1 accumulates at (j, v).

inline DecayProfile lj_decay_coefficients(int k, int min_excluded = 0) {
  // min_excluded = 0: plain table over |xi|_inf <= k (the (Cj) table).
  // min_excluded = m > 0: truncation-tail table, only |xi|_inf > m, doubled
  // (the (Cjk) table with k as the enumeration cap).
  std::map<std::array<int, 6>, double> table;
  auto key = [](const IVec& j, const IVec& v) {
    return std::array<int, 6>{j[0], j[1], j[2], v[0], v[1], v[2]};
  };
  const double factor = min_excluded > 0 ? 2.0 : 1.0;
  for (int a = -k; a <= k; ++a)
    for (int b = -k; b <= k; ++b)
      for (int c = -k; c <= k; ++c) {
        IVec xi(3);
        xi << a, b, c;
        int l1 = norm1(xi);
        if (l1 <= 1) continue;
        if (min_excluded > 0 && norm_inf(xi) <= min_excluded) continue;
        double w = factor * 3.0 * std::abs(lj_vpp(xi.cast<double>().norm())) / double(l1);
        LatticePath path = build_path(IVec::Zero(3), xi);
        for (std::size_t h = 0; h < path.steps.size(); ++h)
          table[key(path.visited[h], path.steps[h])] += w;
      }
  DecayProfile prof;
  if (min_excluded == 0) {
    for (int axis = 0; axis < 3; ++axis)
      for (int s : {-1, 1}) {
        IVec v = IVec::Zero(3);
        v[axis] = s;
        prof.entries.push_back({IVec::Zero(3), v, lj_vpp(1.0)});
      }
  }
  for (const auto& [kk, val] : table) {
    IVec j(3), v(3);
    j << kk[0], kk[1], kk[2];
    v << kk[3], kk[4], kk[5];
    bool merged = false;
    for (auto& e : prof.entries)
      if (e.j == j && e.xi == v) {
        e.value += val;
        merged = true;
        break;
      }
    if (!merged) prof.entries.push_back({j, v, val});
  }
  return prof;
}

// ---------------------------------------------------------------------------
// The potential

// mode Truncated: the k-level corrected unit coefficient; total energy equals
//   the raw truncated double sum exactly (the regrouping identity).
// mode Monotone: unit coefficient frozen at the full-range value, so
//   phi^k <= phi^{k+1} pointwise (each level only adds nonnegative f^xi) —
//   the reordering that makes (Hp7) hold.
class LJLinearizedPotential : public MultibodyPotential {
 public:
  enum class Mode { Truncated, Monotone };
  static constexpr int kFullRangeCap = 24;  // |xi|_inf cap standing in for the full sum

  explicit LJLinearizedPotential(int k, Mode mode = Mode::Truncated)
      : spec_(lj_regroup(k)), mode_(mode) {
    if (mode_ == Mode::Monotone) spec_.unit_coeff = full_unit_coeff();
  }

  static double full_unit_coeff() {
    static const double c = lj_vpp(1.0) + lj_unit_correction(kFullRangeCap);
    return c;
  }

  const LJLinearizedSpec& spec() const { return spec_; }

  int N() const override { return 3; }
  int n() const override { return 3; }
  double p() const override { return 2.0; }
  int range() const override { return spec_.k + 1; }

  double evaluate(const LatticeField& u, const IVec& i) const override {
    const LatticeDomain& dom = u.domain();
    const double eps = dom.epsilon();
    // interior sites read stored columns directly; the boundary ring goes
    // through the extension policy.  Both paths perform the identical
    // floating-point operations, so results do not depend on the branch.
    bool fast = true;
    for (int c = 0; c < 3; ++c)
      if (i[c] - spec_.k < dom.box().lo[c] || i[c] + spec_.k > dom.box().hi[c]) {
        fast = false;
        break;
      }
    auto diff_sq = [&](const IVec& a, const IVec& b) {
      if (fast)
        return (u.values().col(dom.linear(b)) - u.values().col(dom.linear(a))).squaredNorm();
      return (u.value(b) - u.value(a)).squaredNorm();
    };
    const double eps2 = eps * eps;
    std::vector<double> buf;
    buf.reserve(spec_.long_range.size() + spec_.surrogates.size() + 6);
    IVec a(3), b(3);
    for (const auto& lr : spec_.long_range) {
      b = i + lr.xi;
      buf.push_back(lr.vpp * (diff_sq(i, b) / (eps2 * double(lr.xi.squaredNorm()))));
    }
    for (const auto& s : spec_.surrogates) {
      a = i + s.a;
      b = i + s.b;
      buf.push_back(s.w * (diff_sq(a, b) / eps2));
    }
    for (int axis = 0; axis < 3; ++axis)
      for (int s : {-1, 1}) {
        IVec v = IVec::Zero(3);
        v[axis] = s;
        b = i + v;
        buf.push_back(spec_.unit_coeff * (diff_sq(i, b) / eps2));
      }
    return pairwise_sum(buf);
  }

  void add_gradient(const LatticeField& u, const IVec& i, Mat& grad) const override {
    const LatticeDomain& dom = u.domain();
    const double eps = dom.epsilon();
    auto add_pair = [&](const IVec& a, const IVec& b, double w) {
      // contributes w * |u(b) - u(a)|^2 / eps^2
      Vec g = (2.0 * w / (eps * eps)) * (u.value(b) - u.value(a));
      if (dom.contains(b)) grad.col(dom.linear(b)) += g;
      if (dom.contains(a)) grad.col(dom.linear(a)) -= g;
    };
    for (const auto& lr : spec_.long_range) {
      double xin = lr.xi.cast<double>().squaredNorm();
      add_pair(i, i + lr.xi, lr.vpp / xin);
      double w = -lr.vpp * 3.0 / double(norm1(lr.xi));
      for (std::size_t h = 0; h < lr.steps.size(); ++h)
        add_pair(i + lr.visited[h], i + lr.visited[h] + lr.steps[h], w);
    }
    for (int axis = 0; axis < 3; ++axis)
      for (int s : {-1, 1}) {
        IVec v = IVec::Zero(3);
        v[axis] = s;
        add_pair(i, i + v, spec_.unit_coeff);
      }
  }

  std::optional<DecayProfile> locality_profile(double eps, double delta) const override {
    if (eps * 2.0 * (range() + 1) < delta) return DecayProfile{};  // window inside Q_delta
    DecayProfile prof = lj_decay_coefficients(spec_.k);
    return prof;
  }

  std::optional<std::pair<double, DecayProfile>> convexity_profile(double /*eps*/) const override {
    // Dropping the nonpositive -|D^xi v|^2 parts bounds every regrouped term
    // by decay-table quotients of the blend; the product rule then costs a
    // factor 3 per quotient, with the (z-w)(j+v) pieces landing exactly on
    // the remainder's first sum.  phi(z)+phi(w) is not needed, so C = 1.
    DecayProfile prof = lj_decay_coefficients(spec_.k);
    for (auto& e : prof.entries) e.value *= 3.0;
    return std::make_pair(1.0, prof);
  }

  std::optional<double> declared_coercivity() const override { return spec_.unit_coeff; }

  std::optional<double> declared_growth() const override {
    // phi_i <= sum C^{j,v} |D^v u(j)|^2 <= |M|^2 * sum C on affine fields
    return lj_decay_coefficients(spec_.k).total();
  }

 private:
  LJLinearizedSpec spec_;
  Mode mode_;
};

// Raw truncated pair double-sum, the independent oracle for the regrouping
// identity: sum over sites of box of sum_{0<|xi|_inf<=k} V'' |D^xi u|^2.
inline double lj_raw_energy(const LatticeField& u, const LatticeDomain& box, int k) {
  const LatticeDomain& dom = u.domain();
  const double inv_eps2 = 1.0 / (dom.epsilon() * dom.epsilon());
  // precompute per-offset coefficients and linear-index displacements
  // (linear() is affine in the site, so the displacement is site-independent)
  struct Bond {
    IVec xi;
    std::int64_t doff = 0;
    double coeff = 0.0;  // V''(|xi|) / |xi|^2
  };
  std::vector<Bond> bonds;
  for (int a = -k; a <= k; ++a)
    for (int b = -k; b <= k; ++b)
      for (int c = -k; c <= k; ++c) {
        IVec xi(3);
        xi << a, b, c;
        if (norm1(xi) == 0) continue;
        Bond bd;
        bd.xi = xi;
        bd.doff = dom.linear(dom.box().lo + xi) - dom.linear(dom.box().lo);
        bd.coeff = lj_vpp(xi.cast<double>().norm()) / double(xi.squaredNorm());
        bonds.push_back(std::move(bd));
      }
  std::vector<double> buf;
  buf.reserve(std::size_t(box.count()) * bonds.size());
  IVec j(3);
  box.for_each([&](std::int64_t, const IVec& i) {
    bool fast = true;
    for (int c = 0; c < 3; ++c)
      if (i[c] - k < dom.box().lo[c] || i[c] + k > dom.box().hi[c]) {
        fast = false;
        break;
      }
    const std::int64_t li = dom.linear(i);
    for (const Bond& bd : bonds) {
      double d2;
      if (fast) {
        d2 = (u.values().col(li + bd.doff) - u.values().col(li)).squaredNorm();
      } else {
        j = i + bd.xi;
        d2 = (u.value(j) - u.value(i)).squaredNorm();
      }
      buf.push_back(bd.coeff * (d2 * inv_eps2));
    }
  });
  return pairwise_sum(buf) * std::pow(dom.epsilon(), 3);
}

inline double lj_regrouped_energy(const LJLinearizedPotential& pot, const LatticeField& u,
                                  const LatticeDomain& box) {
  return energy(pot, u, box);
}

}  // namespace latthom
