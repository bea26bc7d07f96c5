#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gridstealth/case_file.hpp"
#include "gridstealth/covariance.hpp"
#include "gridstealth/jacobian.hpp"
#include "gridstealth/observation_model.hpp"
#include "gridstealth/random.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

using namespace gridstealth;

namespace {

ObservationModel scalar_model(double h, double sxx, double noise) {
  return ObservationModel(Eigen::MatrixXd::Constant(1, 1, h),
                          CovarianceMatrix::from(Eigen::MatrixXd::Constant(1, 1, sxx)), noise);
}

CovarianceMatrix scalar(double v) { return CovarianceMatrix::from(Eigen::MatrixXd::Constant(1, 1, v)); }

}  // namespace

TEST(Random, DeriveSeedIsSplitMix64) {
  for (std::uint64_t base : {0ULL, 1ULL, 20180415ULL, 0xFFFFFFFFFFFFFFFFULL}) {
    for (std::uint64_t i = 0; i < 5; ++i) {
      EXPECT_EQ(derive_seed(base, i), oracle::splitmix64(base + 0x9E3779B97F4A7C15ULL * i));
    }
  }
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Random, GaussianStreamFollowsDocumentedRecipe) {
  GaussianStream stream(12345);
  const auto expected = oracle::documented_normals(12345, 101);
  for (double e : expected) EXPECT_EQ(stream.next(), e);
}

TEST(Random, UniformsStayInsideOpenInterval) {
  GaussianStream stream(9);
  for (int i = 0; i < 100000; ++i) {
    const double u = stream.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(CovarianceMatrix, RejectsAsymmetricInput) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 0.5, 0.4, 1;
  EXPECT_GRIDSTEALTH_ERROR(CovarianceMatrix::from(a), ErrorKind::not_symmetric);
}

TEST(CovarianceMatrix, RejectsIndefiniteInput) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 2, 1;
  EXPECT_GRIDSTEALTH_ERROR(CovarianceMatrix::from(a), ErrorKind::not_psd);
}

TEST(CovarianceMatrix, RejectsNonSquareInput) {
  EXPECT_GRIDSTEALTH_ERROR(CovarianceMatrix::from(Eigen::MatrixXd::Zero(2, 3)),
                           ErrorKind::shape_error);
}

TEST(CovarianceMatrix, ClampsRoundOffNegatives) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 1, 1;
  a(1, 1) -= 1e-13;  // smallest eigenvalue about -5e-14
  const auto c = CovarianceMatrix::from(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c.matrix());
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-15);
  EXPECT_NEAR((c.matrix() - a).norm(), 0.0, 1e-12);
}

TEST(Toeplitz, ZeroCorrelationIsIdentity) {
  EXPECT_EQ(toeplitz_covariance(3, 0.0).matrix(), Eigen::MatrixXd::Identity(3, 3));
}

TEST(Toeplitz, HalfCorrelationEntries) {
  Eigen::MatrixXd expected(3, 3);
  expected << 1, 0.5, 0.25, 0.5, 1, 0.5, 0.25, 0.5, 1;
  EXPECT_LT((toeplitz_covariance(3, 0.5).matrix() - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Toeplitz, RejectsOutOfRangeStrength) {
  EXPECT_GRIDSTEALTH_ERROR(toeplitz_covariance(2, 1.0), ErrorKind::invalid_correlation);
  EXPECT_GRIDSTEALTH_ERROR(toeplitz_covariance(2, -0.1), ErrorKind::invalid_correlation);
  EXPECT_GRIDSTEALTH_ERROR(toeplitz_covariance(2, std::nan("")), ErrorKind::invalid_correlation);
}

TEST(Toeplitz, StrictlyPositiveDefiniteUpTo64) {
  for (Eigen::Index n = 1; n <= 64; ++n) {
    for (double rho : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999}) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(toeplitz_covariance(n, rho).matrix());
      EXPECT_GT(eig.eigenvalues().minCoeff(), 1e-12) << "n=" << n << " rho=" << rho;
    }
  }
}

TEST(MeasurementCovariance, ScalarExamples) {
  const auto model = scalar_model(1.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(measurement_covariance(model, std::nullopt)(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(measurement_covariance(model, scalar(1.0))(0, 0), 3.0);
}

TEST(MeasurementCovariance, ShapeMismatch) {
  const auto model = scalar_model(1.0, 1.0, 1.0);
  EXPECT_GRIDSTEALTH_ERROR(measurement_covariance(model, CovarianceMatrix::identity(2)),
                           ErrorKind::shape_error);
}

TEST(ObservationModel, RejectsBadInputs) {
  EXPECT_GRIDSTEALTH_ERROR(scalar_model(1.0, 1.0, 0.0), ErrorKind::shape_error);
  EXPECT_GRIDSTEALTH_ERROR(ObservationModel(Eigen::MatrixXd::Ones(2, 2), CovarianceMatrix::identity(3), 1.0),
                           ErrorKind::shape_error);
}

TEST(ObservationModel, CleanCovarianceIsSignalPlusNoise) {
  const auto h = build_jacobian(load_case(data_path("case5.m")));
  const ObservationModel model(h, toeplitz_covariance(h.states(), 0.4), 0.3);
  const Eigen::MatrixXd expected =
      h.matrix * toeplitz_covariance(h.states(), 0.4).matrix() * h.matrix.transpose() +
      0.3 * Eigen::MatrixXd::Identity(h.measurements(), h.measurements());
  EXPECT_LT((model.clean_covariance().matrix() - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Snr, Examples) {
  const ObservationModel unit(Eigen::MatrixXd::Identity(3, 3), CovarianceMatrix::identity(3), 1.0);
  EXPECT_NEAR(snr_db(unit), 0.0, 1e-12);
  EXPECT_NEAR(snr_db(scalar_model(1.0, 1.0, 0.1)), 10.0, 1e-12);
  const ObservationModel doubled(Eigen::MatrixXd::Identity(3, 3), CovarianceMatrix::identity(3), 2.0);
  EXPECT_NEAR(snr_db(unit) - snr_db(doubled), 10.0 * std::log10(2.0), 1e-12);
  EXPECT_NEAR(10.0 * std::log10(2.0), 3.0103, 1e-4);
}

TEST(NoiseVarianceForSnr, Examples) {
  const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(3, 3);
  const auto s = CovarianceMatrix::identity(3);
  EXPECT_NEAR(noise_variance_for_snr(h, s, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(noise_variance_for_snr(h, s, 10.0), 0.1, 1e-15);
  EXPECT_NEAR(noise_variance_for_snr(h, s, 20.0), 0.01, 1e-15);
}

TEST(NoiseVarianceForSnr, ZeroSignalRejected) {
  EXPECT_GRIDSTEALTH_ERROR(noise_variance_for_snr(Eigen::MatrixXd::Zero(3, 2), CovarianceMatrix::identity(2), 10.0),
                           ErrorKind::degenerate_signal);
}

TEST(NoiseVarianceForSnr, RoundTripsOnRandomModels) {
  std::mt19937_64 engine(3);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> snr(-20.0, 40.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(engine() % 8);
    const Eigen::Index m = n + static_cast<Eigen::Index>(engine() % 8);
    Eigen::MatrixXd h(m, n);
    for (Eigen::Index i = 0; i < h.size(); ++i) h.data()[i] = normal(engine);
    const auto prior = CovarianceMatrix::from(oracle::random_spd(n, 0.1, 3.0, engine));
    const double target = snr(engine);
    const ObservationModel model(h, prior, noise_variance_for_snr(h, prior, target));
    EXPECT_NEAR(snr_db(model), target, 1e-9);
  }
}

TEST(SampleGaussian, ZeroCovarianceGivesZeros) {
  const auto s = sample_gaussian(CovarianceMatrix::zero(4), 50, 1);
  EXPECT_EQ(s.count(), 50);
  EXPECT_EQ(s.dim(), 4);
  EXPECT_EQ(s.samples.cwiseAbs().maxCoeff(), 0.0);
}

TEST(SampleGaussian, BitIdenticalForSameSeed) {
  const auto cov = toeplitz_covariance(5, 0.7);
  const auto a = sample_gaussian(cov, 100, 99);
  const auto b = sample_gaussian(cov, 100, 99);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_NE(a.samples, sample_gaussian(cov, 100, 100).samples);
}

TEST(SampleGaussian, FillsCoordinatesInIndexOrder) {
  // identity covariance: the symmetric root is I, so rows are the raw stream
  const auto s = sample_gaussian(CovarianceMatrix::identity(3), 4, 5);
  const auto expected = oracle::documented_normals(5, 12);
  for (Eigen::Index r = 0; r < 4; ++r) {
    for (Eigen::Index c = 0; c < 3; ++c) {
      EXPECT_NEAR(s.samples(r, c), expected[static_cast<std::size_t>(3 * r + c)], 1e-15);
    }
  }
}

TEST(SampleGaussian, LawOfLargeNumbers) {
  const auto s = sample_covariance(sample_gaussian(CovarianceMatrix::identity(2), 10000, 2024));
  EXPECT_LT((s.matrix() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.1);
}

TEST(SampleGaussian, SingularCovarianceSampleable) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 1, 1;
  const auto s = sample_gaussian(CovarianceMatrix::from(a), 1000, 8);
  EXPECT_LT((s.samples.col(0) - s.samples.col(1)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SampleCovariance, Examples) {
  StateSampleSet pair{Eigen::MatrixXd(2, 1)};
  pair.samples << 1, -1;
  EXPECT_DOUBLE_EQ(sample_covariance(pair)(0, 0), 2.0);

  StateSampleSet zeros{Eigen::MatrixXd::Zero(6, 3)};
  EXPECT_EQ(sample_covariance(zeros).matrix(), Eigen::MatrixXd::Zero(3, 3));

  StateSampleSet one{Eigen::MatrixXd::Ones(1, 3)};
  EXPECT_GRIDSTEALTH_ERROR(sample_covariance(one), ErrorKind::insufficient_samples);
}

TEST(SampleCovariance, MatchesLoopOracleWithoutMeanSubtraction) {
  const auto samples = sample_gaussian(toeplitz_covariance(6, 0.5), 40, 17);
  const StateSampleSet shifted{samples.samples.array() + 3.0};
  for (const auto* s : {&samples, &shifted}) {
    EXPECT_LT((sample_covariance(*s).matrix() - oracle::sample_covariance_loops(s->samples))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
}

TEST(SampleCovariance, PositiveDefiniteAtKEqualsN) {
  const Eigen::Index n = 29;
  const auto prior = toeplitz_covariance(n, 0.8);
  int positive = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const auto s = sample_covariance(sample_gaussian(prior, n, derive_seed(77, trial)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.matrix());
    if (eig.eigenvalues().minCoeff() > 0.0) ++positive;
  }
  EXPECT_EQ(positive, 100);
}

TEST(SampleCovariance, AlwaysPsd) {
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    // fewer samples than dimensions: rank deficient but still PSD
    const auto s = sample_covariance(sample_gaussian(toeplitz_covariance(10, 0.6), 4, trial));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.matrix());
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-12);
  }
}
