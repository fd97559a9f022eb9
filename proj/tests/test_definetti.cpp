#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "privattack/anatomy.hpp"
#include "privattack/definetti.hpp"
#include "privattack/errors.hpp"

using namespace privattack;
namespace df = privattack::definetti;

namespace {

// Two rows in one group: row 0 has QI x, truth a; row 1 has QI y, truth b.
// Model strongly associates x with a and y with b.
struct PairFixture {
  std::shared_ptr<const EncodedTable> table;
  AnatomyRelease release;
  NBModel model;
};

PairFixture make_pair_fixture() {
  auto ds = std::make_shared<DomainSet>();
  ds->qi_names = {"q"};
  ds->qi.push_back(Domain::from_values({"x", "y"}));
  ds->sa_name = "sa";
  ds->sa = Domain::from_values({"a", "b"});

  auto enc = std::make_shared<EncodedTable>();
  enc->domains = ds;
  enc->n = 2;
  enc->m = 1;
  enc->qi = {0, 1};
  enc->sa = {0, 1};

  PairFixture f;
  f.table = enc;
  f.release.l = 2;
  f.release.table = enc;
  Group g;
  g.rows = {0, 1};
  g.sa_multiset = {0, 1};
  f.release.groups.push_back(g);
  f.release.group_of = {0, 0};

  f.model.domains = ds;
  Eigen::ArrayXXd cond(2, 2);
  cond << 0.9, 0.1,  // Pr[x|a], Pr[x|b]
      0.1, 0.9;      // Pr[y|a], Pr[y|b]
  f.model.cond = {cond};
  f.model.log_cond = {cond.log()};
  f.model.prior = Eigen::ArrayXd::Constant(2, 0.5);
  f.model.log_prior = f.model.prior.log();
  return f;
}

std::shared_ptr<const EncodedTable> random_release_table(Rng& rng, int n,
                                                         int num_sa) {
  auto ds = std::make_shared<DomainSet>();
  ds->qi_names = {"q1", "q2"};
  ds->qi.push_back(Domain::from_values({"u", "v", "w"}));
  ds->qi.push_back(Domain::from_values({"p", "q"}));
  ds->sa_name = "sa";
  std::vector<std::string> sa_vals;
  for (int s = 0; s < num_sa; ++s) sa_vals.push_back("s" + std::to_string(s));
  ds->sa = Domain::from_values(sa_vals);

  auto enc = std::make_shared<EncodedTable>();
  enc->domains = ds;
  enc->n = n;
  enc->m = 2;
  for (int r = 0; r < n; ++r) {
    enc->qi.push_back(static_cast<std::int32_t>(rng.bounded(3)));
    enc->qi.push_back(static_cast<std::int32_t>(rng.bounded(2)));
    enc->sa.push_back(static_cast<std::int32_t>(rng.bounded(num_sa)));
  }
  return enc;
}

}  // namespace

TEST_CASE("init: singleton groups are forced, counts are consistent") {
  auto ds = std::make_shared<DomainSet>();
  ds->qi_names = {"q"};
  ds->qi.push_back(Domain::from_values({"x"}));
  ds->sa_name = "sa";
  ds->sa = Domain::from_values({"a", "b"});
  auto enc = std::make_shared<EncodedTable>();
  enc->domains = ds;
  enc->n = 2;
  enc->m = 1;
  enc->qi = {0, 0};
  enc->sa = {0, 1};

  AnatomyRelease rel;
  rel.l = 2;  // only used by validation, not by init
  rel.table = enc;
  Group g0, g1;
  g0.rows = {0};
  g0.sa_multiset = {0};
  g1.rows = {1};
  g1.sa_multiset = {1};
  rel.groups = {g0, g1};
  rel.group_of = {0, 1};

  Rng rng(3);
  const df::AssignmentState state = df::init(rel, rng);
  CHECK(state.assigned[0] == 0);
  CHECK(state.assigned[1] == 1);
  state.check_consistency();

  // per attribute, derived counts sum to n
  CHECK(state.counts[0].sum() == 2);
}

TEST_CASE("init explores both permutations of a 2-group across seeds") {
  const PairFixture f = make_pair_fixture();
  int identity = 0;
  const int trials = 4000;
  for (int seed = 0; seed < trials; ++seed) {
    Rng rng(derive_seed(7, "init-perm", seed));
    const df::AssignmentState state = df::init(f.release, rng);
    identity += state.assigned[0] == 0;
  }
  // uniform over the two bijections: about half, 4 sigma band
  const double se = std::sqrt(0.25 * trials);
  CHECK(std::abs(identity - trials / 2.0) < 4 * se);
}

TEST_CASE("estimate equals the noiseless fit when the assignment is the truth") {
  Rng rng(19);
  auto enc = random_release_table(rng, 40, 3);
  AnatomyRelease rel;
  rel.l = 2;
  rel.table = enc;
  // groups of one: the assignment can only be the truth
  for (std::int32_t r = 0; r < enc->n; ++r) {
    Group g;
    g.rows = {r};
    g.sa_multiset = {enc->sa[r]};
    rel.groups.push_back(g);
    rel.group_of.push_back(r);
  }
  Rng rng2(5);
  df::AssignmentState state = df::init(rel, rng2);
  const NBModel via_state = df::estimate(state);
  const NBModel direct = fit(exact_counts(*enc));
  for (std::size_t i = 0; i < via_state.cond.size(); ++i)
    CHECK((via_state.cond[i] == direct.cond[i]).all());
  CHECK((via_state.prior == direct.prior).all());

  // all groups of size 1: the model is a fixed point of run()
  const df::RunResult run = df::run(rel, 10, 5, rng2);
  for (const double l1 : run.trace.l1) CHECK(l1 == 0.0);
}

TEST_CASE("a single swap changes only the touched model entries") {
  Rng rng(23);
  auto enc = random_release_table(rng, 40, 3);
  Rng arng(31);
  const AnatomyRelease rel = anonymize(enc, 2, arng);
  df::AssignmentState state = df::init(rel, arng);

  // force one swap in the first group with two distinct values
  const Group& g = rel.groups[0];
  const std::int32_t r0 = g.rows[0], r1 = g.rows[1];
  const std::int32_t s0 = state.assigned[r0], s1 = state.assigned[r1];
  REQUIRE(s0 != s1);
  const NBModel before = df::estimate(state);

  for (int i = 0; i < enc->m; ++i) {
    const auto row0 = enc->row(r0), row1 = enc->row(r1);
    state.counts[i](row0[i], s0) -= 1;
    state.counts[i](row0[i], s1) += 1;
    state.counts[i](row1[i], s1) -= 1;
    state.counts[i](row1[i], s0) += 1;
  }
  std::swap(state.assigned[r0], state.assigned[r1]);
  state.check_consistency();  // incremental update equals a recount

  const NBModel after = df::estimate(state);
  for (int i = 0; i < enc->m; ++i) {
    for (Eigen::Index v = 0; v < after.cond[i].rows(); ++v) {
      for (Eigen::Index s = 0; s < after.cond[i].cols(); ++s) {
        const bool touched_col = s == s0 || s == s1;
        if (!touched_col)
          CHECK(after.cond[i](v, s) == before.cond[i](v, s));
      }
    }
  }
}

TEST_CASE("sweep accepts a strongly favored swap deterministically") {
  PairFixture f = make_pair_fixture();
  // assignment is the bad permutation: row x -> b, row y -> a
  df::AssignmentState state;
  state.release = &f.release;
  state.assigned = {1, 0};
  state.counts = {Eigen::ArrayXXi::Zero(2, 2)};
  state.counts[0](0, 1) = 1;  // x assigned b
  state.counts[0](1, 0) = 1;  // y assigned a

  // R = (0.9*0.9)/(0.1*0.1) = 81: accepted no matter what the rng says
  for (int seed = 0; seed < 20; ++seed) {
    df::AssignmentState s = state;
    Rng rng(seed);
    const std::int64_t accepted = df::sweep(s, f.model, rng);
    CHECK(accepted == 1);
    CHECK(s.assigned[0] == 0);
    CHECK(s.assigned[1] == 1);
    s.check_consistency();
  }
}

TEST_CASE("sweep accepts the reverse swap at close to rate 1/81") {
  PairFixture f = make_pair_fixture();
  df::AssignmentState good;
  good.release = &f.release;
  good.assigned = {0, 1};
  good.counts = {Eigen::ArrayXXi::Zero(2, 2)};
  good.counts[0](0, 0) = 1;
  good.counts[0](1, 1) = 1;

  const int trials = 100000;
  int accepted = 0;
  Rng rng(777);
  for (int t = 0; t < trials; ++t) {
    df::AssignmentState s = good;
    s.release = &f.release;
    accepted += df::sweep(s, f.model, rng) == 1;
  }
  const double p = 1.0 / 81.0;
  const double se = std::sqrt(p * (1 - p) * trials);
  INFO("accepted=", accepted, " expected=", trials * p);
  CHECK(std::abs(accepted - trials * p) < 4 * se);
}

TEST_CASE("swap between equal SA values is a semantic no-op") {
  // one group, two rows, both assigned the same SA value
  auto ds = std::make_shared<DomainSet>();
  ds->qi_names = {"q"};
  ds->qi.push_back(Domain::from_values({"x", "y"}));
  ds->sa_name = "sa";
  ds->sa = Domain::from_values({"a", "b"});
  auto enc = std::make_shared<EncodedTable>();
  enc->domains = ds;
  enc->n = 4;
  enc->m = 1;
  enc->qi = {0, 1, 0, 1};
  enc->sa = {0, 0, 1, 1};

  AnatomyRelease rel;
  rel.l = 2;
  rel.table = enc;
  Group g;
  g.rows = {0, 1, 2, 3};
  g.sa_multiset = {0, 0, 1, 1};
  rel.groups = {g};
  rel.group_of = {0, 0, 0, 0};

  Rng rng(13);
  df::AssignmentState state = df::init(rel, rng);
  const NBModel model = df::estimate(state);
  for (int t = 0; t < 50; ++t) {
    df::sweep(state, model, rng);
    state.check_consistency();
  }
}

TEST_CASE("detailed balance on a single pair under a frozen model") {
  PairFixture f = make_pair_fixture();
  Rng rng(2718);
  df::AssignmentState state = df::init(f.release, rng);

  // stationary frequencies of the two assignments should match R : 1
  std::int64_t good = 0;
  const int sweeps = 100000;
  for (int t = 0; t < sweeps; ++t) {
    df::sweep(state, f.model, rng);
    good += state.assigned[0] == 0;
  }
  const double expected = 81.0 / 82.0;
  const double se = std::sqrt(expected * (1 - expected) / sweeps);
  INFO("fraction=", static_cast<double>(good) / sweeps);
  // the lag-1 autocorrelation of this two-state chain is negative, so the
  // iid standard error is conservative
  CHECK(std::abs(static_cast<double>(good) / sweeps - expected) < 3 * se);
}

TEST_CASE("run: trace lengths follow iterations and window") {
  Rng rng(101);
  auto enc = random_release_table(rng, 24, 3);
  Rng arng(7);
  const AnatomyRelease rel = anonymize(enc, 2, arng);

  const df::RunResult result = df::run(rel, 40, 10, arng);
  CHECK(result.trace.l1.size() == 40);
  CHECK(result.trace.window() == 10);
  CHECK(result.trace.recorded == 10);
  result.state.check_consistency();

  // a window larger than the run clamps to the iteration count
  const df::RunResult clamped = df::run(rel, 5, 50, arng);
  CHECK(clamped.trace.window() == 5);
  CHECK(clamped.trace.recorded == 5);

  CHECK_THROWS_AS(df::run(rel, 0, 5, arng), ConfigError);
}

TEST_CASE("l1_convergence: zero on identical models, symmetric, exact delta") {
  const PairFixture f = make_pair_fixture();
  CHECK(df::l1_convergence(f.model, f.model) == 0.0);

  // move delta of joint mass within one column: exactly 2*delta of L1
  NBModel other = f.model;
  const double delta = 0.05;
  other.cond[0](0, 0) -= delta / other.prior(0);
  other.cond[0](1, 0) += delta / other.prior(0);
  const double d_ab = df::l1_convergence(f.model, other);
  const double d_ba = df::l1_convergence(other, f.model);
  CHECK(d_ab == doctest::Approx(2 * delta).epsilon(1e-12));
  CHECK(d_ab == d_ba);

  // single-cell difference in the raw joint table
  NBModel third = f.model;
  third.cond[0](0, 0) += delta / third.prior(0);
  CHECK(df::l1_convergence(f.model, third) ==
        doctest::Approx(delta).epsilon(1e-12));

  NBModel mismatched = f.model;
  mismatched.prior = Eigen::ArrayXd::Constant(3, 1.0 / 3);
  CHECK_THROWS_AS(df::l1_convergence(f.model, mismatched), DataError);
}

TEST_CASE("predict_permutation: forced history, majority and tie rules") {
  df::SamplerTrace trace;
  trace.history = Eigen::ArrayXXi::Zero(2, 3);
  trace.recorded = 3;
  trace.history.row(0) << 2, 2, 2;
  CHECK(df::predict_permutation(trace, 0) == 2);

  trace.history.row(1) << 0, 0, 1;  // majority a
  CHECK(df::predict_permutation(trace, 1) == 0);

  df::SamplerTrace tied;
  tied.history = Eigen::ArrayXXi::Zero(1, 4);
  tied.recorded = 4;
  tied.history.row(0) << 0, 1, 0, 1;  // tie, most recent wins
  CHECK(df::predict_permutation(tied, 0) == 1);
}

TEST_CASE("predict_group: singleton multiset, ties, hand example") {
  const PairFixture f = make_pair_fixture();

  AnatomyRelease singleton = f.release;
  singleton.groups[0].rows = {0, 1};
  singleton.groups[0].sa_multiset = {1, 1};
  // forced: only b is possible (synthetic multiset, not truth-consistent)
  CHECK(df::predict_group(f.model, singleton, 0) == 1);

  // hand example: row x -> a, row y -> b under the strong model
  CHECK(df::predict_group(f.model, f.release, 0) == 0);
  CHECK(df::predict_group(f.model, f.release, 1) == 1);

  // all-equal weights fall back to the first SA value in domain order
  NBModel flat = f.model;
  flat.cond[0].setConstant(0.5);
  flat.log_cond[0] = flat.cond[0].log();
  CHECK(df::predict_group(flat, f.release, 0) == 0);
}

TEST_CASE("predict_open ignores the group structure") {
  const PairFixture f = make_pair_fixture();
  CHECK(df::predict_open(f.model, *f.table, 0) ==
        predict(f.model, f.table->row(0)));

  // regrouping the release leaves open predictions untouched
  AnatomyRelease regrouped = f.release;
  regrouped.groups[0].rows = {1, 0};
  CHECK(df::predict_open(f.model, *f.table, 0) == 0);
  CHECK(df::predict_open(f.model, *f.table, 1) == 1);
}

TEST_CASE("after every sweep the group multisets are preserved") {
  Rng rng(404);
  auto enc = random_release_table(rng, 60, 4);
  Rng arng(11);
  const AnatomyRelease rel = anonymize(enc, 3, arng);
  df::AssignmentState state = df::init(rel, arng);
  for (int t = 0; t < 25; ++t) {
    const NBModel model = df::estimate(state);
    df::sweep(state, model, arng);
    state.check_consistency();
  }
}
