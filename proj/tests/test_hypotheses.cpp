#include <doctest.h>

#include <latthom/hypotheses.hpp>

using namespace latthom;

namespace {

SampleSchedule quick_schedule() {
  SampleSchedule s;
  s.eps_list = {0.25, 0.125, 1.0 / 16};
  s.delta_list = {1.0, 0.5};
  s.samples_per_cell = 150;
  s.seed = 4242;
  return s;
}

// 1D density with two long-range terms based at different window sites:
//   c2 |(z(i+3)-z(i+1))/(2 eps)|^2 + c3 |(z(i+3)-z(i))/(3 eps)|^2.
// No direct nearest-neighbour term, yet coercive: the two differences
// control z(i+1)-z(i) by the triangle inequality, with constant 1/18.
class TwoGapDensity : public MultibodyPotential {
 public:
  int N() const override { return 1; }
  int n() const override { return 1; }
  double p() const override { return 2.0; }
  int range() const override { return 3; }

  double evaluate(const LatticeField& u, const IVec& i) const override {
    const double eps = u.domain().epsilon();
    IVec i1 = i, i3 = i;
    i1[0] += 1;
    i3[0] += 3;
    double a = (u.value(i3) - u.value(i1))[0] / (2.0 * eps);
    double b = (u.value(i3) - u.value(i))[0] / (3.0 * eps);
    return a * a + b * b;
  }
};

const HypothesisEntry* find(const HypothesisReport& rep, const std::string& name) {
  for (const auto& e : rep.entries)
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace

TEST_CASE("nearest-neighbour quadratic passes the whole suite") {
  PairPotential pot = PairPotential::nn_quadratic(2, 2);
  SampleSchedule sch = quick_schedule();
  HypothesisReport rep = check_all(pot, sch);
  REQUIRE(rep.entries.size() == 5);
  CHECK(rep.all_pass());
  for (const auto& e : rep.entries) CHECK(e.status == CheckStatus::Pass);
  const HypothesisEntry* h2 = find(rep, "H2");
  REQUIRE(h2);
  REQUIRE(h2->fitted_constant.has_value());
  // phi(affine M) = |M|^2, so the ratio |M|^2/(|M|^2+1) approaches 1 from
  // below as the sampled slopes grow
  CHECK(*h2->fitted_constant <= 1.0);
  CHECK(*h2->fitted_constant > 0.7);
  const HypothesisEntry* h3 = find(rep, "H3");
  REQUIRE(h3);
  REQUIRE(h3->fitted_constant.has_value());
  CHECK(*h3->fitted_constant >= 1.0 - 1e-9);  // equality by construction
}

TEST_CASE("long-range pair family passes, including decay tables") {
  std::vector<PairPotential::Term> terms;
  IVec e1 = IVec::Constant(1, 1), x2 = IVec::Constant(1, 2);
  terms.push_back({e1, {1.0}});
  terms.push_back({x2, {0.5}});
  PairPotential pot(1, 1, 2.0, 1, std::move(terms));
  SampleSchedule sch = quick_schedule();
  HypothesisReport rep = check_all(pot, sch);
  CHECK(rep.all_pass());
  const HypothesisEntry* h4 = find(rep, "H4");
  REQUIRE(h4);
  CHECK(h4->status == CheckStatus::Pass);
  REQUIRE(!h4->decay.empty());
  // per delta, profile totals are nonincreasing along the eps schedule
  for (std::size_t a = 0; a + 1 < h4->decay.size(); ++a)
    if (h4->decay[a].delta == h4->decay[a + 1].delta)
      CHECK(h4->decay[a + 1].total <= h4->decay[a].total + 1e-12);
}

TEST_CASE("determinant family passes the whole suite") {
  DeterminantPotential pot = DeterminantPotential::example2d();
  SampleSchedule sch = quick_schedule();
  sch.samples_per_cell = 100;
  HypothesisReport rep = check_all(pot, sch);
  CHECK(rep.all_pass());
  CHECK(find(rep, "H5")->status == CheckStatus::Pass);
}

TEST_CASE("regrouped Lennard-Jones (k = 2) passes the whole suite") {
  LJLinearizedPotential pot(2, LJLinearizedPotential::Mode::Monotone);
  SampleSchedule sch = quick_schedule();
  sch.samples_per_cell = 60;
  HypothesisReport rep = check_all(pot, sch);
  CHECK(rep.all_pass());
  const HypothesisEntry* h3 = find(rep, "H3");
  REQUIRE(h3);
  REQUIRE(h3->fitted_constant.has_value());
  CHECK(*h3->fitted_constant >= *pot.declared_coercivity() - 1e-9);
}

TEST_CASE("two-gap 1D density: coercive despite no direct NN term") {
  TwoGapDensity pot;
  SampleSchedule sch = quick_schedule();
  HypothesisEntry h3 = check_H3(pot, sch);
  CHECK(h3.status == CheckStatus::Pass);
  REQUIRE(h3.fitted_constant.has_value());
  CHECK(*h3.fitted_constant >= 1.0 / 18.0 - 1e-9);  // triangle-inequality bound
  // profiles are not declared, so H4/H5 are reported, not failed
  CHECK(check_H4(pot, sch).status == CheckStatus::NotApplicable);
  CHECK(check_H5(pot, sch).status == CheckStatus::NotApplicable);
  HypothesisEntry h1 = check_H1(pot, sch);
  CHECK(h1.status == CheckStatus::Pass);
}

TEST_CASE("negative control: broken translation invariance fails H1 replayably") {
  auto pot = negative_control_broken_translation(1);
  SampleSchedule sch = quick_schedule();
  HypothesisEntry e = check_H1(*pot, sch);
  CHECK(e.status == CheckStatus::Fail);
  REQUIRE(e.worst.has_value());
  CHECK(e.worst->value > 0.0);
  CHECK(e.worst->sample_index >= 0);
  // same schedule, same counterexample: the failure replays exactly
  HypothesisEntry again = check_H1(*pot, sch);
  REQUIRE(again.worst.has_value());
  CHECK(again.worst->seed == e.worst->seed);
  CHECK(again.worst->sample_index == e.worst->sample_index);
  CHECK(again.worst->value == e.worst->value);
}

TEST_CASE("negative control: unregrouped concave long-range pair fails H3") {
  auto pot = negative_control_concave_pair();
  SampleSchedule sch = quick_schedule();
  sch.samples_per_cell = 400;
  HypothesisEntry e = check_H3(*pot, sch);
  CHECK(e.status == CheckStatus::Fail);
  REQUIRE(e.worst.has_value());
  CHECK(!e.worst->detail.empty());
  HypothesisEntry again = check_H3(*pot, sch);
  REQUIRE(again.worst.has_value());
  CHECK(again.worst->value == e.worst->value);
  CHECK(again.worst->sample_index == e.worst->sample_index);
}

TEST_CASE("periodic-truncation suite passes for the regrouped Lennard-Jones family") {
  TruncationFamily fam = lj_truncation_family(4);
  SampleSchedule sch = quick_schedule();
  sch.samples_per_cell = 60;
  std::vector<HypothesisEntry> entries = check_Hp(fam, sch);
  REQUIRE(entries.size() == 4);
  for (const auto& e : entries) {
    INFO(e.name);
    CHECK(e.status == CheckStatus::Pass);
    CHECK(e.samples > 0);
  }
  CHECK(entries[0].name == "Hp4");
  CHECK(entries[1].name == "Hp5");
  CHECK(entries[2].name == "Hp6");
  CHECK(entries[3].name == "Hp7");
}

TEST_CASE("report aggregation: not-applicable does not fail the suite") {
  HypothesisReport rep;
  HypothesisEntry a;
  a.name = "H4";
  a.status = CheckStatus::NotApplicable;
  rep.entries.push_back(a);
  CHECK(rep.all_pass());
  HypothesisEntry b;
  b.name = "H1";
  b.status = CheckStatus::Fail;
  rep.entries.push_back(b);
  CHECK(!rep.all_pass());
}
