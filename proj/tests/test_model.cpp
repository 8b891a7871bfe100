#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "oracles.hpp"
#include "unlearn/errors.hpp"
#include "unlearn/model.hpp"

using namespace unlearn;

TEST(Dataset, Validation) {
  EXPECT_THROW(Dataset(Matrix(0, 2), Vector{}), DimensionError);
  EXPECT_THROW(Dataset(Matrix(2, 1), Vector{1}), DimensionError);
  EXPECT_THROW(Dataset(Matrix(1, 1, {std::numeric_limits<double>::infinity()}), Vector{1}), NonFiniteError);
  EXPECT_THROW(Dataset(Matrix(1, 2), Vector{1}, {"a"}), DimensionError);
  const Dataset d(Matrix(3, 1, {1, 2, 3}), Vector{4, 5, 6});
  const std::vector<std::size_t> idx = {2, 0};
  const Dataset s = d.subset(idx);
  EXPECT_EQ(s.x(), Matrix(2, 1, {3, 1}));
  EXPECT_EQ(s.y(), (Vector{6, 4}));
}

TEST(DeletionRequest, Validation) {
  EXPECT_THROW(DeletionRequest({1, 1}, 5), std::invalid_argument);
  EXPECT_THROW(DeletionRequest({5}, 5), std::out_of_range);
  EXPECT_THROW(DeletionRequest({0, 1}, 2), std::invalid_argument);
  const DeletionRequest r({3, 0}, 5);
  EXPECT_EQ(r.indices(), (std::vector<std::size_t>{0, 3}));
  EXPECT_EQ(r.keep_mask(), (std::vector<std::uint8_t>{0, 1, 1, 0, 1}));
  EXPECT_EQ(r.remaining(), (std::vector<std::size_t>{1, 2, 4}));
  EXPECT_TRUE(DeletionRequest({}, 3).empty());
}

TEST(TrainFull, MeanOfLabels) {
  const Dataset d(Matrix(2, 1, {1, 1}), Vector{0, 2});
  EXPECT_DOUBLE_EQ(train_full(d, 0.0).theta[0], 1.0);
}

TEST(TrainFull, HeavyRegularizationShrinks) {
  std::mt19937_64 rng(1);
  const Dataset d = oracle::random_dataset(50, 5, rng);
  const RidgeModel m = train_full(d, 1e6);
  Vector xty(5, 0.0);
  for (std::size_t i = 0; i < 50; ++i) axpy(d.y()[i], d.x().row(i), xty);
  EXPECT_LE(norm2(m.theta), 1e-5 * norm2(xty));
}

TEST(TrainFull, OptimalityAndOracle) {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 10; ++rep) {
    const Dataset d = oracle::random_dataset(100, 10, rng);
    const RidgeModel m = train_full(d, 1e-3);
    const LossDerivatives ld = loss_derivatives(d, DeletionRequest({}, 100), m);
    EXPECT_LE(norm2(ld.grad), 1e-8);
    EXPECT_LE(oracle::dist(m.theta, oracle::ridge(d, 1e-3)), 1e-10);
  }
}

TEST(TrainFull, SingularWithoutRidge) {
  const Dataset d(Matrix(2, 2, {1, 1, 2, 2}), Vector{1, 2});
  EXPECT_THROW(train_full(d, 0.0), NotPositiveDefinite);
  EXPECT_NO_THROW(train_full(d, 1e-3));
  EXPECT_THROW(train_full(d, -1.0), std::invalid_argument);
}

TEST(TrainFull, ExclusionEqualsPhysicalRemoval) {
  std::mt19937_64 rng(3);
  const Dataset d = oracle::random_dataset(60, 6, rng);
  const DeletionRequest req({4, 17, 33}, 60);
  const auto mask = req.keep_mask();
  const FullFit masked = fit_full(d, 1e-3, mask);
  const auto rest = req.remaining();
  const RidgeModel physical = train_full(d.subset(rest), 1e-3);
  EXPECT_LE(oracle::dist(masked.model.theta, physical.theta), 1e-12);
}

TEST(Predict, ByHand) {
  EXPECT_EQ(predict(RidgeModel{{0, 0}, 1e-3}, Vector{3, 4}), 0.0);
  EXPECT_EQ(predict(RidgeModel{{1, 2}, 1e-3}, Vector{3, 4}), 11.0);
  EXPECT_EQ(predicted_class(RidgeModel{{-0.5}, 1e-3}, Vector{1}), -1);
  EXPECT_EQ(predicted_class(RidgeModel{{0.5}, 1e-3}, Vector{1}), 1);
  EXPECT_THROW(predict(RidgeModel{{1}, 1e-3}, Vector{1, 2}), DimensionError);
}

TEST(Accuracy, CountsSignAgreement) {
  const Dataset d(Matrix(4, 1, {1, 2, -1, -3}), Vector{1, -1, -1, 1});
  EXPECT_DOUBLE_EQ(classification_accuracy(RidgeModel{{1}, 0}, d), 0.5);
}

TEST(LossDerivatives, SinglePointByHand) {
  const Dataset d(Matrix(1, 2, {1, 0}), Vector{1});
  const LossDerivatives ld = loss_derivatives(d, DeletionRequest({}, 1), RidgeModel{{0, 0}, 0.0});
  EXPECT_DOUBLE_EQ(ld.loss, 0.5);
  EXPECT_EQ(ld.grad, (Vector{-1, 0}));
  EXPECT_EQ(ld.hessian, Matrix(2, 2, {1, 0, 0, 0}));
}

TEST(LossDerivatives, FiniteDifferences) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const Dataset d = oracle::random_dataset(30, 4, rng);
    const DeletionRequest ex({static_cast<std::size_t>(rep % 30), 29}, 30);
    RidgeModel m{Vector(4), 0.3};
    for (double& t : m.theta) t = normal(rng);
    const LossDerivatives ld = loss_derivatives(d, ex, m);
    const double h = 1e-5;
    for (std::size_t j = 0; j < 4; ++j) {
      RidgeModel up = m, dn = m;
      up.theta[j] += h;
      dn.theta[j] -= h;
      const double fd = (loss_derivatives(d, ex, up).loss - loss_derivatives(d, ex, dn).loss) / (2 * h);
      EXPECT_NEAR(ld.grad[j], fd, 1e-6 * (1.0 + std::abs(fd)));
      // The Hessian column is the derivative of the gradient.
      const Vector gup = loss_derivatives(d, ex, up).grad, gdn = loss_derivatives(d, ex, dn).grad;
      for (std::size_t i = 0; i < 4; ++i)
        EXPECT_NEAR(ld.hessian(i, j), (gup[i] - gdn[i]) / (2 * h), 1e-6 * (1.0 + std::abs(ld.hessian(i, j))));
    }
    EXPECT_NO_THROW(Cholesky{ld.hessian});
  }
}

TEST(FitFull, StoresPrecomputation) {
  std::mt19937_64 rng(5);
  const Dataset d = oracle::random_dataset(40, 5, rng);
  const FullFit f = fit_full(d, 0.1);
  EXPECT_EQ(f.model.lambda, 0.1);
  EXPECT_LE(norm2(subtract(matvec(f.hessian, f.model.theta), f.xty)), 1e-10);
  EXPECT_EQ(f.factor->size(), 5u);
}
