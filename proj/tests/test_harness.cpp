#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ase/harness.hpp"
#include "ase/io.hpp"
#include "ase/rng.hpp"
#include "helpers.hpp"

using namespace ase;

TEST_CASE("noiseless trial is exact") {
  RunOptions opt;
  opt.noiseless = true;
  TrialRecord rec = run_trial(example21_config(), 150, 1, opt);
  CHECK_FALSE(rec.degenerate);
  CHECK(rec.err_2inf <= 1e-8);
  CHECK(rec.miscluster == 0);
  CHECK(rec.cert_holds);
  CHECK(!rec.bounds.empty());
}

TEST_CASE("records serialize identically across repeated runs") {
  RunOptions opt;
  TrialRecord a = run_trial(example21_config(), 300, 12345, opt, 3);
  TrialRecord b = run_trial(example21_config(), 300, 12345, opt, 3);
  std::ostringstream sa, sb;
  write_records_csv(sa, {a});
  write_records_csv(sb, {b});
  CHECK(sa.str() == sb.str());
  CHECK(a.err_2inf == b.err_2inf);
  CHECK(a.miscluster == b.miscluster);
}

TEST_CASE("sweep output is byte-identical across parallelism degrees") {
  RunOptions opt;
  opt.with_bounds = false;
  ModelConfig cfg = example21_config();
  const std::vector<int> grid = {100, 200};
  std::string csv[3];
  int which = 0;
  for (int threads : {1, 2, 8}) {
    SweepResult res = sweep(cfg, grid, 5, 777, threads, opt);
    std::ostringstream os;
    write_records_csv(os, res.records);
    std::ostringstream js;
    write_summary_json(js, res.summary);
    csv[which++] = os.str() + js.str();
  }
  CHECK(csv[0] == csv[1]);
  CHECK(csv[0] == csv[2]);
}

TEST_CASE("manufactured power law fits with slope exactly -1/2") {
  auto stub = [](int n, int trial, uint64_t seed) {
    TrialRecord rec;
    rec.model_id = "stub";
    rec.n = n;
    rec.trial = trial;
    rec.seed = seed;
    rec.err_2inf = 3.0 / std::sqrt((double)n);
    rec.cert_holds = true;
    return rec;
  };
  SweepResult res = sweep_with(stub, "stub", {250, 500, 1000, 2000}, 4, 1, 1, 0.05);
  CHECK(std::fabs(res.summary.fit.slope - (-0.5)) <= 1e-10);
  CHECK(res.summary.fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
}

TEST_CASE("dense-preset mini sweep decays with n") {
  RunOptions opt;
  opt.with_bounds = false;
  SweepResult res = sweep(example21_config(), {250, 500, 1000}, 8, 99, 2, opt);
  REQUIRE(res.summary.per_n.size() == 3);
  for (const auto& p : res.summary.per_n) CHECK(p.degenerate == 0);
  CHECK(res.summary.per_n[0].mean_err > res.summary.per_n[1].mean_err);
  CHECK(res.summary.per_n[1].mean_err > res.summary.per_n[2].mean_err);
  CHECK(res.summary.fit.slope < -0.2);
  CHECK(res.summary.fit.slope > -0.8);
  // the clustering certificate from the proof holds on every trial
  for (const auto& r : res.records) {
    CHECK(r.cert_holds);
    CHECK(r.miscluster == 0);
  }
}

TEST_CASE("degenerate embeddings are flagged and excluded from the means") {
  // at n=6 the second-largest adjacency eigenvalue is frequently <= 0
  RunOptions opt;
  opt.with_bounds = false;
  ModelConfig cfg = example21_config();
  int found = -1;
  for (int s = 0; s < 200; ++s) {
    TrialRecord rec = run_trial(cfg, 6, hash2(31337, s), opt);
    if (rec.degenerate) {
      found = s;
      break;
    }
  }
  REQUIRE(found >= 0);
  // within a sweep the degenerate trial is counted, not averaged
  auto stub = [&](int n, int trial, uint64_t) {
    return run_trial(cfg, n, hash2(31337, trial == 0 ? found : trial), opt);
  };
  SweepResult res = sweep_with(stub, cfg.id, {6}, 3, 0, 1, 0.05);
  CHECK(res.summary.per_n[0].degenerate >= 1);
  CHECK(res.summary.per_n[0].trials == 3);
}

TEST_CASE("records csv header is stable") {
  CHECK(records_csv_header() ==
        "model_id,n,trial,seed,degenerate,err_2inf,miscluster_count,sse,cert_lhs,cert_rhs,"
        "cert_holds,b_a_minus_p_lhs,b_a_minus_p_rhs,b_a_minus_p_holds,b_vhat_minus_v_sq_lhs,"
        "b_vhat_minus_v_sq_rhs,b_vhat_minus_v_sq_holds,b_shat_minus_s_lhs,b_shat_minus_s_rhs,"
        "b_shat_minus_s_holds,b_vtvhat_minus_i_lhs,b_vtvhat_minus_i_rhs,b_vtvhat_minus_i_holds,"
        "b_avs_minus_xhat_lhs,b_avs_minus_xhat_rhs,b_avs_minus_xhat_holds,b_shat_cap_lhs,"
        "b_shat_cap_rhs,b_shat_cap_holds,b_two_inf_lhs,b_two_inf_rhs,b_two_inf_holds,"
        "b_sphere_lhs,b_sphere_rhs,b_sphere_holds");
  CHECK(records_csv_header(true) == records_csv_header() +
                                        ",t_build,t_sample,t_embed,t_cluster,t_bounds");
}

TEST_CASE("consistency experiment") {
  ModelConfig cfg = example21_config();
  LatentDistribution F = distribution_from_model(cfg);
  RunOptions opt;

  SUBCASE("single point mass: both objectives are zero") {
    Matrix atom(1, 1);
    atom(0, 0) = 0.6;
    LatentDistribution single = LatentDistribution::point_masses(atom, {1.0});
    ConsistencyResult res = consistency_experiment(single, {50, 100}, 1, 3, 5, 1, opt);
    for (const auto& t : res.trials) {
      CHECK(t.phi_true <= 1e-25);  // centroid rounding leaves eps^2-level residue
      CHECK(t.gap == doctest::Approx(t.phi_embedded).epsilon(1e-12));
    }
  }

  SUBCASE("two point masses: true objective is zero, embedded gap shrinks") {
    ConsistencyResult res = consistency_experiment(F, {250, 1000}, 2, 5, 21, 2, opt);
    REQUIRE(res.rows.size() == 2);
    int shrank = 0;
    for (int t = 0; t < 5; ++t) {
      CHECK(res.trials[t].phi_true <= 1e-25);
      if (res.trials[5 + t].gap < res.trials[t].gap) ++shrank;
    }
    CHECK(shrank >= 4);
    CHECK(res.rows[1].mean_gap < res.rows[0].mean_gap);
  }

  SUBCASE("per-trial csv includes the paired gaps") {
    ConsistencyResult res = consistency_experiment(F, {100}, 2, 2, 3, 1, opt);
    std::ostringstream os;
    write_consistency_csv(os, res);
    CHECK(os.str().rfind("n,trial,seed,phi_true,phi_embedded,gap\n", 0) == 0);
  }
}

TEST_CASE("slope fit handles short inputs") {
  SlopeFit two = fit_loglog({100, 200}, {1.0, 0.5});
  CHECK(two.points == 2);
  CHECK(std::isfinite(two.slope));
  CHECK(!std::isfinite(two.stderr_slope));
  SlopeFit none = fit_loglog({100}, {0.0});
  CHECK(none.points == 0);
  CHECK(!std::isfinite(none.slope));
}
