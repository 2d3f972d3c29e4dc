#include <random>

#include <gtest/gtest.h>

#include "nlrm/datagen.hpp"
#include "nlrm/nmf.hpp"
#include "nlrm/solvers.hpp"
#include "oracles.hpp"

namespace {

using nlrm::DenseMatrix;
using nlrm::Index;
using nlrm::NmfMethod;
using nlrm::SolverConfig;
using namespace nlrm::testing;

SolverConfig nmf_config(Index rank, std::size_t max_iter, double tol = 1e-6) {
  SolverConfig cfg;
  cfg.rank = rank;
  cfg.max_iter = max_iter;
  cfg.rel_change_tol = tol;
  cfg.seed = 17;
  return cfg;
}

DenseMatrix planted(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  return naive_matmul(random_uniform(30, 3, gen), random_uniform(3, 20, gen));
}

class NmfMethods : public ::testing::TestWithParam<NmfMethod> {};

TEST_P(NmfMethods, RecoversPlantedFactorization) {
  const DenseMatrix a = planted(50);
  const auto result = nlrm::nmf_solve(GetParam(), a, nmf_config(3, 20000, 1e-12));
  EXPECT_LT(result.rel_error, 1e-3);
  EXPECT_GE(result.b.min_entry(), 0.0);
  EXPECT_GE(result.c.min_entry(), 0.0);
}

TEST_P(NmfMethods, ZeroIterationsReturnsInitialization) {
  const DenseMatrix a = nlrm::gen_uniform(12, 9, 1);
  const auto result = nlrm::nmf_solve(GetParam(), a, nmf_config(3, 0));
  const auto [b0, c0] = nlrm::detail::nmf_initial_factors(12, 9, 3, 17);
  EXPECT_EQ(result.b, b0);
  EXPECT_EQ(result.c, c0);
  EXPECT_TRUE(result.trace.empty());
  EXPECT_DOUBLE_EQ(result.rel_error, nlrm::relative_error(a, nlrm::matmul(b0, c0)));
}

TEST_P(NmfMethods, ObjectiveIsNonincreasing) {
  const DenseMatrix a = nlrm::gen_uniform(40, 35, 2);
  const auto result = nlrm::nmf_solve(GetParam(), a, nmf_config(5, 300, 1e-14));
  ASSERT_GT(result.trace.size(), 10U);
  for (std::size_t k = 1; k < result.trace.size(); ++k) {
    const double prev = result.trace.records[k - 1].rel_error;
    const double cur = result.trace.records[k].rel_error;
    EXPECT_LE(cur * cur, prev * prev * (1.0 + 1e-12)) << "iteration " << k + 1;
  }
}

TEST_P(NmfMethods, FactorsStayNonnegative) {
  const DenseMatrix a = nlrm::gen_uniform(25, 20, 3);
  const auto result = nlrm::nmf_solve(GetParam(), a, nmf_config(4, 200));
  EXPECT_GE(result.b.min_entry(), 0.0);
  EXPECT_GE(result.c.min_entry(), 0.0);
}

TEST_P(NmfMethods, Deterministic) {
  const DenseMatrix a = nlrm::gen_uniform(25, 20, 4);
  const auto first = nlrm::nmf_solve(GetParam(), a, nmf_config(4, 50));
  const auto second = nlrm::nmf_solve(GetParam(), a, nmf_config(4, 50));
  EXPECT_EQ(first.b, second.b);
  EXPECT_EQ(first.c, second.c);
}

INSTANTIATE_TEST_SUITE_P(Nmf, NmfMethods,
                         ::testing::Values(NmfMethod::kMultiplicative, NmfMethod::kHals),
                         [](const auto& info) { return std::string(nlrm::method_name(info.param)); });

TEST(Nmf, InputValidation) {
  const DenseMatrix a = nlrm::gen_uniform(6, 5, 1);
  SolverConfig cfg = nmf_config(2, 10);
  cfg.seed.reset();
  EXPECT_THROW(nlrm::nmf_mu_solve(a, cfg), nlrm::ConfigError);
  DenseMatrix negative = a;
  negative.eigen()(0, 0) = -1.0;
  EXPECT_THROW(nlrm::nmf_hals_solve(negative, nmf_config(2, 10)), nlrm::DomainError);
  EXPECT_THROW(nlrm::nmf_mu_solve(DenseMatrix(4, 4), nmf_config(2, 10)), nlrm::DomainError);
}

TEST(Nmf, BestOfRestartsKeepsLowestError) {
  const DenseMatrix a = nlrm::gen_uniform(20, 15, 5);
  const auto runs = nlrm::nmf_best_of(NmfMethod::kHals, a, nmf_config(3, 100), 4);
  ASSERT_EQ(runs.rel_errors.size(), 4U);
  EXPECT_EQ(runs.best.rel_error, *std::min_element(runs.rel_errors.begin(), runs.rel_errors.end()));
}

TEST(Nmf, MultiplicativeUpdatesDoNotBeatTap) {
  const DenseMatrix a = nlrm::gen_uniform(200, 200, 1);
  SolverConfig tap_cfg;
  tap_cfg.rank = 10;
  const double tap_error = nlrm::tap_solve(a, tap_cfg).rel_error_x;
  const auto mu = nlrm::nmf_mu_solve(a, nmf_config(10, 1000));
  EXPECT_GE(mu.rel_error, tap_error);
}

TEST(Nmf, HalsLandsInBandAboveTap) {
  const DenseMatrix a = nlrm::gen_uniform(200, 200, 1);
  SolverConfig tap_cfg;
  tap_cfg.rank = 20;
  const double tap_error = nlrm::tap_solve(a, tap_cfg).rel_error_x;
  const auto hals = nlrm::nmf_hals_solve(a, nmf_config(20, 1000));
  EXPECT_GE(hals.rel_error, 0.42);
  EXPECT_LE(hals.rel_error, 0.43);
  EXPECT_GT(hals.rel_error, tap_error);
}

}  // namespace
