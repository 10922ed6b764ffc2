// Sampling-based falsifiers and constant-fitters for the structural
// conditions a multibody potential must satisfy: translation invariance,
// affine growth, coercivity, decaying non-locality, controlled
// non-convexity, and the periodic-truncation variants.  A pass verdict
// means zero violations over the configured samples; a fail verdict
// carries the cell seed that replays its counterexample.

#pragma once

#include <latthom/lj.hpp>
#include <latthom/potentials.hpp>

#include <algorithm>
#include <functional>
#include <memory>
#include <random>
#include <string>

namespace latthom {

enum class CheckStatus { Pass, Fail, NotApplicable };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    default: return "not-applicable";
  }
}

struct Violation {
  double value = 0.0;         // signed slack, positive means violated
  std::uint64_t seed = 0;     // cell seed replaying the counterexample
  int sample_index = -1;
  std::string detail;
};

struct DecayTableRow {
  double eps = 0.0;
  double delta = 0.0;
  double total = 0.0;
};

struct HypothesisEntry {
  std::string name;
  CheckStatus status = CheckStatus::NotApplicable;
  std::optional<double> fitted_constant;
  std::vector<DecayTableRow> decay;
  std::optional<Violation> worst;
  std::int64_t samples = 0;
  std::string note;
};

struct HypothesisReport {
  std::vector<HypothesisEntry> entries;

  bool all_pass() const {
    for (const auto& e : entries)
      if (e.status == CheckStatus::Fail) return false;
    return true;
  }
};

struct SampleSchedule {
  std::vector<double> eps_list{0.25, 0.125, 1.0 / 16, 1.0 / 32, 1.0 / 64};
  std::vector<double> delta_list{1.0, 0.5, 0.25};
  int samples_per_cell = 1000;
  std::uint64_t seed = 20260823;
  double slope_scale = 2.0;

  std::uint64_t cell_seed(const std::string& name, std::size_t a, std::size_t b) const {
    std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ull;
    for (char c : name) h = (h ^ std::uint64_t(c)) * 0x100000001b3ull;
    h = (h ^ a) * 0x100000001b3ull;
    h = (h ^ b) * 0x100000001b3ull;
    return h;
  }
};

namespace detail {

inline Mat random_matrix(int rows, int cols, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Mat M(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) M(r, c) = dist(rng);
  return M;
}

// Field samplers: affine, affine + compact bumps, affine + a bounded-slope
// sinusoid.  Occasional large slopes stress the growth/coercivity fits.
inline LatticeField sample_field(const LatticeDomain& dom, std::mt19937_64& rng,
                                 double slope_scale) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double scale = slope_scale;
  if (rng() % 8 == 0) scale *= 25.0;  // heavy-slope minority
  Mat M = random_matrix(dom.n(), dom.N(), rng, scale);
  LatticeField u = LatticeField::affine(dom, M);
  switch (rng() % 3) {
    case 0:
      break;
    case 1: {  // compact bumps
      int bumps = 1 + int(rng() % 3);
      for (int b = 0; b < bumps; ++b) {
        std::int64_t idx = std::int64_t(rng() % std::uint64_t(dom.count()));
        for (int c = 0; c < dom.n(); ++c) u.values()(c, idx) += 2.0 * scale * unit(rng);
      }
      break;
    }
    default: {  // smooth bounded-gradient perturbation
      Vec amp(dom.n()), freq(dom.N());
      for (int c = 0; c < dom.n(); ++c) amp[c] = unit(rng);
      for (int k = 0; k < dom.N(); ++k) freq[k] = unit(rng);
      double phase = 3.0 * unit(rng);
      dom.for_each([&](std::int64_t idx, const IVec& i) {
        double arg = phase + freq.dot(i.cast<double>()) * dom.epsilon();
        u.values().col(idx) += amp * std::sin(arg);
      });
      break;
    }
  }
  return u;
}

// Cut-off samplers: constants, linear plateaus with slope <= 1/delta, and
// single-site spikes (slope 1/eps) to stress the sup-gradient factor.
inline CutoffFunction sample_cutoff(const LatticeDomain& dom, std::mt19937_64& rng,
                                    double delta) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  switch (rng() % 4) {
    case 0:
      return CutoffFunction::constant(dom, rng() % 2 ? 1.0 : 0.0);
    case 1:
      return CutoffFunction::constant(dom, 0.5 * (1.0 + unit(rng)));
    case 2: {  // plateau ramp along a random coordinate
      int axis = int(rng() % std::uint64_t(dom.N()));
      double offset = unit(rng);
      double slope = 1.0 / delta;
      return CutoffFunction(
          dom,
          [=, &dom](const IVec& i) {
            double x = dom.epsilon() * double(i[axis]) - offset;
            return std::clamp(0.5 + slope * x, 0.0, 1.0);
          },
          slope);
    }
    default: {  // spike
      IVec site = dom.site(std::int64_t(rng() % std::uint64_t(dom.count())));
      return CutoffFunction(
          dom, [site](const IVec& i) { return i == site ? 1.0 : 0.0; },
          1.0 / dom.epsilon());
    }
  }
}

inline LatticeDomain window_domain(const MultibodyPotential& pot, double eps,
                                   int extra = 0) {
  int half = pot.range() + 2 + extra;
  return LatticeDomain::cube(pot.N(), pot.n(), eps, 2 * half + 1);
}

inline void track(HypothesisEntry& e, double slack, std::uint64_t seed, int sample,
                  const std::string& detail) {
  if (!e.worst || slack > e.worst->value) e.worst = Violation{slack, seed, sample, detail};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// (H1) translation invariance: adding a constant leaves phi unchanged.

inline HypothesisEntry check_H1(const MultibodyPotential& pot, const SampleSchedule& sch) {
  HypothesisEntry e;
  e.name = "H1";
  e.status = CheckStatus::Pass;
  const IVec origin = IVec::Zero(pot.N());
  for (std::size_t ei = 0; ei < sch.eps_list.size(); ++ei) {
    std::uint64_t seed = sch.cell_seed(e.name, ei, 0);
    std::mt19937_64 rng(seed);
    LatticeDomain dom = detail::window_domain(pot, sch.eps_list[ei]);
    for (int s = 0; s < sch.samples_per_cell; ++s) {
      LatticeField z = detail::sample_field(dom, rng, sch.slope_scale);
      Vec c = detail::random_matrix(dom.n(), 1, rng, 5.0).col(0);
      double a = pot.evaluate(z, origin);
      LatticeField w = z;
      w.values().colwise() += c;
      double b = pot.evaluate(w, origin);
      double slack = std::abs(b - a) / (1.0 + std::abs(a)) - 1e-12;
      if (slack > 0.0) {
        e.status = CheckStatus::Fail;
        detail::track(e, slack, seed, s, "phi changed under constant shift");
      }
      ++e.samples;
    }
  }
  return e;
}

// ---------------------------------------------------------------------------
// (H2) affine growth: fitted C-hat = max phi(affine M) / (|M|^p + 1).

inline HypothesisEntry check_H2(const MultibodyPotential& pot, const SampleSchedule& sch) {
  HypothesisEntry e;
  e.name = "H2";
  e.status = CheckStatus::Pass;
  e.note = "per-site affine value is eps-independent for these families";
  double chat = 0.0;
  std::uint64_t seed = sch.cell_seed(e.name, 0, 0);
  std::mt19937_64 rng(seed);
  for (int s = 0; s < sch.samples_per_cell; ++s) {
    double scale = (s % 4 == 3) ? 50.0 : sch.slope_scale;
    Mat M = detail::random_matrix(pot.n(), pot.N(), rng, scale);
    double ratio = pot.cauchy_born(M) / (std::pow(M.norm(), pot.p()) + 1.0);
    if (!std::isfinite(ratio)) {
      e.status = CheckStatus::Fail;
      detail::track(e, std::numeric_limits<double>::infinity(), seed, s, "non-finite ratio");
    }
    chat = std::max(chat, ratio);
    if (auto g = pot.declared_growth()) {
      double slack = ratio - *g * (1.0 + 1e-10) - 1e-10;
      if (slack > 0.0) {
        e.status = CheckStatus::Fail;
        detail::track(e, slack, seed, s, "declared growth constant exceeded");
      }
    }
    ++e.samples;
  }
  e.fitted_constant = chat;
  return e;
}

// ---------------------------------------------------------------------------
// (H3) coercivity: fitted c-hat = min phi / (sum_n |D^{e_n}z(0)|^p - 1) over
// samples with positive denominator; must stay positive across eps.

inline HypothesisEntry check_H3(const MultibodyPotential& pot, const SampleSchedule& sch) {
  HypothesisEntry e;
  e.name = "H3";
  e.status = CheckStatus::Pass;
  const IVec origin = IVec::Zero(pot.N());
  double chat = std::numeric_limits<double>::infinity();
  for (std::size_t ei = 0; ei < sch.eps_list.size(); ++ei) {
    std::uint64_t seed = sch.cell_seed(e.name, ei, 0);
    std::mt19937_64 rng(seed);
    LatticeDomain dom = detail::window_domain(pot, sch.eps_list[ei]);
    for (int s = 0; s < sch.samples_per_cell; ++s) {
      LatticeField z = detail::sample_field(dom, rng, sch.slope_scale);
      std::vector<double> buf;
      for (int k = 0; k < pot.N(); ++k) {
        IVec ek = IVec::Zero(pot.N());
        ek[k] = 1;
        buf.push_back(std::pow(difference_quotient(z, origin, ek).norm(), pot.p()));
      }
      double denom = pairwise_sum(buf) - 1.0;
      if (denom <= 1e-6) continue;
      double ratio = pot.evaluate(z, origin) / denom;
      chat = std::min(chat, ratio);
      if (ratio <= 1e-8) {
        e.status = CheckStatus::Fail;
        detail::track(e, 1e-8 - ratio, seed, s, "coercivity ratio not positive");
      }
      if (auto c = pot.declared_coercivity()) {
        double slack = *c * denom - pot.evaluate(z, origin) - 1e-10 * (1.0 + std::abs(denom));
        if (slack > 0.0) {
          e.status = CheckStatus::Fail;
          detail::track(e, slack, seed, s, "declared coercivity constant violated");
        }
      }
      ++e.samples;
    }
  }
  if (std::isfinite(chat)) e.fitted_constant = chat;
  return e;
}

// ---------------------------------------------------------------------------
// (H4) decaying non-locality: phi(z) <= phi(w) + sum C^{j,xi}(|D^xi z(j)|^p+1)
// whenever z = w on Q_delta(0), plus decay of the profile totals in eps.

inline HypothesisEntry check_H4(const MultibodyPotential& pot, const SampleSchedule& sch) {
  HypothesisEntry e;
  e.name = "H4";
  const IVec origin = IVec::Zero(pot.N());
  bool any = false;
  for (std::size_t di = 0; di < sch.delta_list.size(); ++di) {
    double delta = sch.delta_list[di];
    std::vector<double> totals;
    for (std::size_t ei = 0; ei < sch.eps_list.size(); ++ei) {
      double eps = sch.eps_list[ei];
      auto prof = pot.locality_profile(eps, delta);
      if (!prof) {
        e.note = "no declared locality profile";
        e.status = CheckStatus::NotApplicable;
        return e;
      }
      any = true;
      totals.push_back(prof->total());
      e.decay.push_back({eps, delta, prof->total()});
      std::uint64_t seed = sch.cell_seed(e.name, ei, di);
      std::mt19937_64 rng(seed);
      LatticeDomain dom = detail::window_domain(pot, eps, pot.range() + 2);
      for (int s = 0; s < sch.samples_per_cell; ++s) {
        LatticeField z = detail::sample_field(dom, rng, sch.slope_scale);
        LatticeField w = detail::sample_field(dom, rng, sch.slope_scale);
        // impose w = z on Q_delta(0)
        dom.for_each([&](std::int64_t idx, const IVec& i) {
          if (eps * double(norm_inf(i)) <= delta / 2.0)
            w.values().col(idx) = z.values().col(idx);
        });
        double lhs = pot.evaluate(z, origin);
        std::vector<double> buf{pot.evaluate(w, origin)};
        for (const auto& en : prof->entries)
          buf.push_back(en.value *
                        (std::pow(difference_quotient(z, en.j, en.xi).norm(), pot.p()) + 1.0));
        double rhs = pairwise_sum(buf);
        double slack = lhs - rhs - 1e-10 * (1.0 + std::abs(lhs));
        if (slack > 0.0) {
          e.status = CheckStatus::Fail;
          detail::track(e, slack, seed, s, "locality inequality violated");
        }
        ++e.samples;
      }
    }
    // totals must be nonincreasing toward zero along the eps schedule
    for (std::size_t k = 1; k < totals.size(); ++k)
      if (totals[k] > totals[k - 1] + 1e-10) {
        e.status = CheckStatus::Fail;
        detail::track(e, totals[k] - totals[k - 1], sch.seed, -1,
                      "profile total not decreasing in eps");
      }
  }
  if (e.status != CheckStatus::Fail && any) e.status = CheckStatus::Pass;
  return e;
}

// ---------------------------------------------------------------------------
// (H5) controlled non-convexity: the blended field obeys
// phi(blend) <= C(phi(z)+phi(w)) + R with R built from the declared profile.

inline HypothesisEntry check_H5(const MultibodyPotential& pot, const SampleSchedule& sch,
                                std::optional<double> eps_override = std::nullopt,
                                const char* name = "H5") {
  HypothesisEntry e;
  e.name = name;
  const IVec origin = IVec::Zero(pot.N());
  std::vector<double> eps_list =
      eps_override ? std::vector<double>{*eps_override} : sch.eps_list;
  for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
    double eps = eps_list[ei];
    auto declared = pot.convexity_profile(eps);
    if (!declared) {
      e.note = "no declared convexity profile";
      e.status = CheckStatus::NotApplicable;
      return e;
    }
    const auto& [C, prof] = *declared;
    e.fitted_constant = C;
    e.decay.push_back({eps, 0.0, prof.total()});
    for (std::size_t di = 0; di < sch.delta_list.size(); ++di) {
      double delta = sch.delta_list[di];
      e.decay.push_back({eps, delta, prof.tail_sum(eps, delta)});
      std::uint64_t seed = sch.cell_seed(e.name, ei, di);
      std::mt19937_64 rng(seed);
      LatticeDomain dom = detail::window_domain(pot, eps, 1);
      for (int s = 0; s < sch.samples_per_cell; ++s) {
        LatticeField z = detail::sample_field(dom, rng, sch.slope_scale);
        LatticeField w = detail::sample_field(dom, rng, sch.slope_scale);
        CutoffFunction psi = detail::sample_cutoff(dom, rng, delta);
        LatticeField v = blend(z, w, psi);
        double lhs = pot.evaluate(v, origin);
        // global sup of the coordinate cut-off quotients
        double sup = 0.0;
        dom.for_each([&](std::int64_t, const IVec& i) {
          for (int k = 0; k < dom.N(); ++k) {
            IVec ek = IVec::Zero(dom.N());
            ek[k] = 1;
            if (dom.contains(i + ek))
              sup = std::max(sup, std::abs(psi(i + ek) - psi(i)) / eps);
          }
        });
        double supp = std::pow(sup, pot.p());
        std::vector<double> rbuf;
        for (const auto& en : prof.entries) {
          Vec dz = z.value(en.j + en.xi) - w.value(en.j + en.xi);
          rbuf.push_back(en.value * (supp + 1.0) * std::pow(dz.norm(), pot.p()));
          rbuf.push_back(en.value *
                         (std::pow(difference_quotient(z, en.j, en.xi).norm(), pot.p()) +
                          std::pow(difference_quotient(w, en.j, en.xi).norm(), pot.p()) + 1.0));
        }
        double rhs = C * (pot.evaluate(z, origin) + pot.evaluate(w, origin)) +
                     pairwise_sum(rbuf);
        double slack = lhs - rhs - 1e-10 * (1.0 + std::abs(lhs));
        if (slack > 0.0) {
          e.status = CheckStatus::Fail;
          detail::track(e, slack, seed, s, "blend inequality violated");
        }
        ++e.samples;
      }
    }
  }
  if (e.status != CheckStatus::Fail) e.status = CheckStatus::Pass;
  return e;
}

// ---------------------------------------------------------------------------
// Periodic-truncation conditions for a family k -> phi^k with declared
// window radius k+1 and closeness tables.

struct TruncationFamily {
  std::function<std::shared_ptr<const MultibodyPotential>(int)> member;
  int k_max = 6;
  // closeness table between truncation levels k1 < k2
  std::function<DecayProfile(int k1, int k2)> closeness;
};

inline TruncationFamily lj_truncation_family(int k_max = 6) {
  TruncationFamily fam;
  fam.k_max = k_max;
  fam.member = [](int k) {
    return std::make_shared<LJLinearizedPotential>(k, LJLinearizedPotential::Mode::Monotone);
  };
  fam.closeness = [](int k1, int k2) { return lj_decay_coefficients(k2, k1); };
  return fam;
}

inline std::vector<HypothesisEntry> check_Hp(const TruncationFamily& fam,
                                             const SampleSchedule& sch) {
  std::vector<HypothesisEntry> out;
  const SampleSchedule& s = sch;

  // Hp4: exact window locality, altering sites outside Q_{k+1}(0).
  {
    HypothesisEntry e;
  e.name = "Hp4";
    e.status = CheckStatus::Pass;
    for (int k = 1; k <= fam.k_max; ++k) {
      auto pot = fam.member(k);
      std::uint64_t seed = s.cell_seed(e.name, std::size_t(k), 0);
      std::mt19937_64 rng(seed);
      int half = pot->range() + 3;
      LatticeDomain dom = LatticeDomain::cube(pot->N(), pot->n(), 1.0, 2 * half + 1);
      const IVec origin = IVec::Zero(pot->N());
      for (int si = 0; si < std::max(1, s.samples_per_cell / 10); ++si) {
        LatticeField z = detail::sample_field(dom, rng, s.slope_scale);
        double a = pot->evaluate(z, origin);
        // pick a site strictly outside the declared window
        IVec far = IVec::Zero(pot->N());
        far[int(rng() % std::uint64_t(pot->N()))] = (rng() % 2 ? 1 : -1) * (pot->range() + 2);
        z.at(far).array() += 7.5;
        double b = pot->evaluate(z, origin);
        double slack = std::abs(b - a) / (1.0 + std::abs(a)) - 1e-12;
        if (slack > 0.0) {
          e.status = CheckStatus::Fail;
          detail::track(e, slack, seed, si, "value depends on site outside window");
        }
        ++e.samples;
      }
    }
    out.push_back(std::move(e));
  }

  // Hp5: controlled non-convexity at eps = 1.
  {
    auto pot = fam.member(std::min(3, fam.k_max));
    HypothesisEntry e = check_H5(*pot, s, 1.0, "Hp5");
    out.push_back(std::move(e));
  }

  // Hp6: closeness |phi^{k1} - phi^{k2}| bounded by the declared table.
  {
    HypothesisEntry e;
  e.name = "Hp6";
    e.status = CheckStatus::Pass;
    std::vector<std::pair<int, int>> pairs{{3, std::min(6, fam.k_max)},
                                           {2, std::min(4, fam.k_max)}};
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      auto [k1, k2] = pairs[pi];
      if (k1 >= k2) continue;
      auto p1 = fam.member(k1);
      auto p2 = fam.member(k2);
      DecayProfile table = fam.closeness(k1, k2);
      e.decay.push_back({double(k1), double(k2), table.total()});
      std::uint64_t seed = s.cell_seed(e.name, pi, 0);
      std::mt19937_64 rng(seed);
      LatticeDomain dom = detail::window_domain(*p2, 1.0);
      const IVec origin = IVec::Zero(p2->N());
      for (int si = 0; si < s.samples_per_cell; ++si) {
        LatticeField z = detail::sample_field(dom, rng, s.slope_scale);
        double gap = std::abs(p2->evaluate(z, origin) - p1->evaluate(z, origin));
        std::vector<double> buf;
        for (const auto& en : table.entries)
          buf.push_back(en.value *
                        (std::pow(difference_quotient(z, en.j, en.xi).norm(), p2->p()) + 1.0));
        double bound = pairwise_sum(buf);
        double slack = gap - bound - 1e-10 * (1.0 + gap);
        if (slack > 0.0) {
          e.status = CheckStatus::Fail;
          detail::track(e, slack, seed, si, "closeness bound violated");
        }
        ++e.samples;
      }
    }
    out.push_back(std::move(e));
  }

  // Hp7: pointwise monotonicity in k and convergence within the closeness
  // bound of the final level.
  {
    HypothesisEntry e;
  e.name = "Hp7";
    e.status = CheckStatus::Pass;
    std::uint64_t seed = s.cell_seed(e.name, 0, 0);
    std::mt19937_64 rng(seed);
    auto top = fam.member(fam.k_max);
    LatticeDomain dom = detail::window_domain(*top, 1.0);
    const IVec origin = IVec::Zero(top->N());
    std::vector<std::shared_ptr<const MultibodyPotential>> members;
    for (int k = 1; k <= fam.k_max; ++k) members.push_back(fam.member(k));
    for (int si = 0; si < s.samples_per_cell; ++si) {
      LatticeField z = detail::sample_field(dom, rng, s.slope_scale);
      double prev = members.front()->evaluate(z, origin);
      for (int k = 2; k <= fam.k_max; ++k) {
        double cur = members[std::size_t(k - 1)]->evaluate(z, origin);
        double slack = prev - cur - 1e-10 * (1.0 + std::abs(cur));
        if (slack > 0.0) {
          e.status = CheckStatus::Fail;
          detail::track(e, slack, seed, si, "truncation family not monotone");
        }
        prev = cur;
      }
      // convergence: distance to the top level within the declared table
      double gap = std::abs(members[std::size_t(fam.k_max - 1)]->evaluate(z, origin) -
                            members[std::size_t(fam.k_max - 2)]->evaluate(z, origin));
      DecayProfile table = fam.closeness(fam.k_max - 1, fam.k_max);
      std::vector<double> buf;
      for (const auto& en : table.entries)
        buf.push_back(en.value *
                      (std::pow(difference_quotient(z, en.j, en.xi).norm(), top->p()) + 1.0));
      double slack = gap - pairwise_sum(buf) - 1e-10 * (1.0 + gap);
      if (slack > 0.0) {
        e.status = CheckStatus::Fail;
        detail::track(e, slack, seed, si, "tail exceeds declared closeness bound");
      }
      ++e.samples;
    }
    out.push_back(std::move(e));
  }

  return out;
}

// ---------------------------------------------------------------------------
// Whole-suite driver and the negative controls.

inline HypothesisReport check_all(const MultibodyPotential& pot, const SampleSchedule& sch) {
  HypothesisReport rep;
  rep.entries.push_back(check_H1(pot, sch));
  rep.entries.push_back(check_H2(pot, sch));
  rep.entries.push_back(check_H3(pot, sch));
  rep.entries.push_back(check_H4(pot, sch));
  rep.entries.push_back(check_H5(pot, sch));
  return rep;
}

// Adds |u(i)|^2 to a nearest-neighbour quadratic: breaks translation
// invariance while keeping everything else tame.
class BrokenTranslationPotential : public MultibodyPotential {
 public:
  explicit BrokenTranslationPotential(int N)
      : base_(PairPotential::nn_quadratic(N, N)) {}

  int N() const override { return base_.N(); }
  int n() const override { return base_.n(); }
  double p() const override { return base_.p(); }
  int range() const override { return base_.range(); }

  double evaluate(const LatticeField& u, const IVec& i) const override {
    return base_.evaluate(u, i) + u.value(i).squaredNorm();
  }

 private:
  PairPotential base_;
};

inline std::shared_ptr<MultibodyPotential> negative_control_broken_translation(int N = 1) {
  return std::make_shared<BrokenTranslationPotential>(N);
}

// A long-range pair term with a negative coefficient and no regrouping:
// the energy dips below any coercive lower bound.
inline std::shared_ptr<PairPotential> negative_control_concave_pair() {
  IVec e1 = IVec::Ones(1);
  IVec xi = 3 * IVec::Ones(1);
  return std::make_shared<PairPotential>(
      1, 1, 2.0, 1,
      std::vector<PairPotential::Term>{{e1, {1.0}}, {xi, {-0.6}}});
}

}  // namespace latthom
