#include <doctest.h>

#include <latthom/potentials.hpp>

#include <random>

using namespace latthom;

namespace {

IVec iv(std::initializer_list<int> v) {
  IVec x(int(v.size()));
  int k = 0;
  for (int a : v) x[k++] = a;
  return x;
}

LatticeField random_field(const LatticeDomain& dom, unsigned seed, double amp = 1.0,
                          Extension ext = Extension::zero()) {
  LatticeField u(dom, std::move(ext));
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-amp, amp);
  for (std::int64_t c = 0; c < dom.count(); ++c)
    for (int r = 0; r < dom.n(); ++r) u.values()(r, c) = d(rng);
  return u;
}

// central-difference gradient of the total energy with respect to every
// stored degree of freedom
Mat fd_energy_gradient(const MultibodyPotential& pot, const LatticeField& u) {
  const LatticeDomain& dom = u.domain();
  Mat g = Mat::Zero(dom.n(), dom.count());
  LatticeField w = u;
  const double h = 1e-6;
  for (std::int64_t c = 0; c < dom.count(); ++c)
    for (int r = 0; r < dom.n(); ++r) {
      double keep = w.values()(r, c);
      w.values()(r, c) = keep + h;
      double ep = energy(pot, w);
      w.values()(r, c) = keep - h;
      double em = energy(pot, w);
      w.values()(r, c) = keep;
      g(r, c) = (ep - em) / (2.0 * h);
    }
  return g;
}

}  // namespace

TEST_CASE("pair density: hand-computed values") {
  // 1D, p = 2, single NN term with coefficient 1: phi_i = |(u_{i+1}-u_i)/eps|^2
  PairPotential pot = PairPotential::nn_quadratic(1, 1);
  LatticeDomain dom = LatticeDomain::cube(1, 1, 0.5, 4);
  LatticeField u(dom, Extension::zero());
  u.values() << 0.0, 1.0, 3.0, 3.0;  // sites -2..1
  CHECK(pot.evaluate(u, iv({-2})) == doctest::Approx(4.0));   // (1-0)/0.5 squared
  CHECK(pot.evaluate(u, iv({-1})) == doctest::Approx(16.0));  // (3-1)/0.5 squared
  CHECK(pot.evaluate(u, iv({0})) == doctest::Approx(0.0));
  // total with eps^N weight
  double expect = 0.5 * (4.0 + 16.0 + 0.0 + /*site 1 reads zero outside*/ 36.0);
  CHECK(energy(pot, u) == doctest::Approx(expect));
}

TEST_CASE("pair density: longer-range direction normalizes by |xi|_2") {
  std::vector<PairPotential::Term> terms;
  terms.push_back({iv({2, 1}), {0.7}});
  PairPotential pot(2, 1, 2.0, 1, std::move(terms));
  Mat M(1, 2);
  M << 2.0, -1.0;
  LatticeDomain dom = LatticeDomain::cube(2, 1, 0.25, 8);
  LatticeField u = LatticeField::affine(dom, M);
  // D^xi u = M xi / |xi|_2 = (4-1)/sqrt(5) = 3/sqrt(5)
  CHECK(pot.evaluate(u, iv({0, 0})) == doctest::Approx(0.7 * 9.0 / 5.0));
}

TEST_CASE("spring chain: periodic residue coefficients") {
  PairPotential pot = PairPotential::spring_chain({1.0, 3.0});
  CHECK(pot.period() == 2);
  LatticeDomain dom = LatticeDomain::cube(1, 1, 1.0, 6);
  Mat M(1, 1);
  M << 1.0;
  LatticeField u = LatticeField::affine(dom, M);
  CHECK(pot.evaluate(u, iv({0})) == doctest::Approx(1.0));   // residue 0
  CHECK(pot.evaluate(u, iv({1})) == doctest::Approx(3.0));   // residue 1
  CHECK(pot.evaluate(u, iv({-1})) == doctest::Approx(3.0));  // residue of -1 is 1
  // period-averaged energy of the affine state: (1+3)/2 per site
  CHECK(pot.cauchy_born(M) == doctest::Approx(2.0));
}

TEST_CASE("affine per-site energy of the nearest-neighbour quadratic is |M|_F^2") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-2, 2);
  for (int N : {1, 2, 3}) {
    for (int n : {1, 2}) {
      PairPotential pot = PairPotential::nn_quadratic(N, n);
      Mat M(n, N);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < N; ++c) M(r, c) = d(rng);
      CHECK(pot.cauchy_born(M) == doctest::Approx(M.squaredNorm()).epsilon(1e-12));
    }
  }
}

TEST_CASE("pair gradient matches central differences of the energy") {
  std::vector<PairPotential::Term> terms;
  terms.push_back({iv({1, 0}), {1.0, 0.5, 2.0, 1.5}});  // period-2 residues in 2D
  terms.push_back({iv({0, 1}), {0.8}});
  terms.push_back({iv({2, -1}), {0.3}});
  PairPotential pot(2, 2, 2.0, 2, std::move(terms));
  LatticeDomain dom = LatticeDomain::cube(2, 2, 0.5, 5);
  LatticeField u = random_field(dom, 17);
  Mat ga = gradient(pot, u);
  Mat gf = fd_energy_gradient(pot, u);
  CHECK((ga - gf).cwiseAbs().maxCoeff() < 1e-6 * (1.0 + ga.cwiseAbs().maxCoeff()));
}

TEST_CASE("pair gradient for p = 4") {
  std::vector<PairPotential::Term> terms;
  terms.push_back({iv({1}), {1.0}});
  terms.push_back({iv({3}), {0.25}});
  PairPotential pot(1, 2, 4.0, 1, std::move(terms));
  LatticeDomain dom = LatticeDomain::cube(1, 2, 0.5, 10);
  LatticeField u = random_field(dom, 21);
  Mat ga = gradient(pot, u);
  Mat gf = fd_energy_gradient(pot, u);
  CHECK((ga - gf).cwiseAbs().maxCoeff() < 1e-5 * (1.0 + ga.cwiseAbs().maxCoeff()));
}

TEST_CASE("determinant density: value, gradient, growth") {
  DeterminantPotential pot = DeterminantPotential::example2d();
  CHECK(pot.N() == 2);
  CHECK(pot.n() == 2);
  // affine field: det(D^{e_1}u, D^{e_2}u) = det M
  Mat M(2, 2);
  M << 1.0, 2.0, 0.5, 3.0;
  LatticeDomain dom = LatticeDomain::cube(2, 2, 0.25, 8);
  LatticeField u = LatticeField::affine(dom, M);
  double expect = std::abs(M.determinant()) + M.col(0).squaredNorm() + M.col(1).squaredNorm();
  CHECK(pot.evaluate(u, iv({0, 0})) == doctest::Approx(expect).epsilon(1e-6));
  CHECK(pot.cauchy_born(M) == doctest::Approx(expect).epsilon(1e-6));
  // growth bound on a spread of affine states
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> d(-3, 3);
  double declared = *pot.declared_growth();
  for (int t = 0; t < 50; ++t) {
    Mat A(2, 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) A(r, c) = d(rng);
    double cb = pot.cauchy_born(A);
    CHECK(cb <= declared * (A.squaredNorm() + 1.0) * (1.0 + 1e-10));
  }
  // analytic cofactor gradient vs energy differences
  LatticeField w = random_field(LatticeDomain::cube(2, 2, 0.5, 5), 33);
  Mat ga = gradient(pot, w);
  Mat gf = fd_energy_gradient(pot, w);
  CHECK((ga - gf).cwiseAbs().maxCoeff() < 1e-5 * (1.0 + ga.cwiseAbs().maxCoeff()));
}

TEST_CASE("hadamard gap is nonnegative on random fields") {
  DeterminantPotential pot = DeterminantPotential::example2d();
  LatticeDomain dom = LatticeDomain::cube(2, 2, 0.5, 8);
  std::mt19937 rng(41);
  for (int t = 0; t < 200; ++t) {
    LatticeField u = random_field(dom, rng(), 2.0);
    for (const auto& tu : pot.tuples())
      CHECK(pot.hadamard_gap(u, iv({0, 0}), tu) >= -1e-10);
  }
}

TEST_CASE("energy is bit-identical across thread counts") {
  std::vector<PairPotential::Term> terms;
  terms.push_back({iv({1, 0}), {1.0}});
  terms.push_back({iv({0, 1}), {1.0}});
  terms.push_back({iv({1, 1}), {0.25}});
  PairPotential pot(2, 1, 2.0, 1, std::move(terms));
  LatticeDomain dom = LatticeDomain::cube(2, 1, 0.125, 24);
  LatticeField u = random_field(dom, 55);
  double e1 = energy(pot, u, 1);
  for (int threads : {2, 3, 4, 7}) {
    double et = energy(pot, u, u.domain(), threads);
    CHECK(e1 == et);  // exact equality, not approximate
  }
}

TEST_CASE("decay profile bookkeeping: totals and tails") {
  DecayProfile prof;
  prof.entries.push_back({iv({0}), iv({1}), 1.0});
  prof.entries.push_back({iv({0}), iv({4}), 0.5});
  prof.tail_bound = 0.125;
  CHECK(prof.total() == doctest::Approx(1.625));
  // threshold selects entries with max(eps|xi|, eps|j|) > threshold
  CHECK(prof.tail_sum(0.5, 1.0) == doctest::Approx(0.5 + 0.125));
  CHECK(prof.tail_sum(0.5, 3.0) == doctest::Approx(0.125));
}

TEST_CASE("pair locality profile activates only far offsets") {
  std::vector<PairPotential::Term> terms;
  terms.push_back({iv({1}), {1.0}});
  terms.push_back({iv({5}), {0.2}});
  PairPotential pot(1, 1, 2.0, 1, std::move(terms));
  auto prof = pot.locality_profile(0.1, 2.0);
  REQUIRE(prof.has_value());
  CHECK(prof->entries.empty());  // 0.1*5 = 0.5 < 1.0
  prof = pot.locality_profile(0.25, 2.0);
  REQUIRE(prof.has_value());
  REQUIRE(prof->entries.size() == 1);  // 0.25*5 = 1.25 >= 1.0
  CHECK(prof->entries[0].value == doctest::Approx(0.2));
}

TEST_CASE("declared coercivity and growth of pair families") {
  PairPotential chain = PairPotential::spring_chain({1.0, 3.0});
  CHECK(*chain.declared_coercivity() == doctest::Approx(1.0));
  CHECK(*chain.declared_growth() == doctest::Approx(3.0));
  PairPotential nn = PairPotential::nn_quadratic(3, 2);
  CHECK(*nn.declared_coercivity() == doctest::Approx(1.0));
  CHECK(*nn.declared_growth() == doctest::Approx(3.0));
}
