#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "sememe/common/error.hpp"
#include "sememe/loss/sequence_loss.hpp"
#include "sememe/loss/soft_target.hpp"
#include "sememe/nd/gradcheck.hpp"

namespace sememe::loss {
namespace {

using nd::Tape;
using nd::Tensor;

std::vector<Real> one_hot(std::size_t size, int id) {
  std::vector<Real> v(size, 0.0);
  v[static_cast<std::size_t>(id)] = 1.0;
  return v;
}

TEST(SoftTarget, TwoLabelBag) {
  const std::vector<int> labels = {3, 4};
  LabelBag bag(labels, 6);
  const auto y = soft_target(one_hot(6, 3), bag);
  EXPECT_EQ(y, (std::vector<Real>{0, 0, 0, 0.75, 0.25, 0}));
}

TEST(SoftTarget, SingleLabelIsOneHot) {
  const std::vector<int> labels = {4};
  LabelBag bag(labels, 6);
  EXPECT_EQ(soft_target(one_hot(6, 4), bag), one_hot(6, 4));
}

TEST(SoftTarget, EosStepSplitsHalfOverBag) {
  const std::vector<int> labels = {3, 5};
  LabelBag bag(labels, 6);
  const auto y = soft_target(one_hot(6, kEosId), bag);
  EXPECT_EQ(y, (std::vector<Real>{0, 0, 0.5, 0.25, 0, 0.25}));
}

TEST(SoftTarget, RejectsBadInputs) {
  const std::vector<int> labels = {3, 4};
  LabelBag bag(labels, 6);
  std::vector<Real> two_hot = {0, 0, 0, 1, 1, 0};
  EXPECT_THROW(soft_target(two_hot, bag), UsageError);
  std::vector<Real> half = {0, 0, 0, 0.5, 0, 0};
  EXPECT_THROW(soft_target(half, bag), UsageError);
  EXPECT_THROW(soft_target(one_hot(5, 3), bag), UsageError);
  const std::vector<int> dup = {3, 3};
  EXPECT_THROW(LabelBag(dup, 6), UsageError);
  const std::vector<int> eos = {kEosId};
  EXPECT_THROW(LabelBag(eos, 6), UsageError);
  const std::vector<int> out = {9};
  EXPECT_THROW(LabelBag(out, 6), UsageError);
  EXPECT_THROW(LabelBag(std::span<const int>{}, 6), UsageError);
}

TEST(SoftTarget, BagIndicator) {
  const std::vector<int> labels = {5, 3};
  LabelBag bag(labels, 7);
  EXPECT_EQ(bag.size(), 2u);
  EXPECT_TRUE(bag.contains(5));
  EXPECT_FALSE(bag.contains(kEosId));
  const auto q = bag.indicator();
  EXPECT_EQ(std::accumulate(q.begin(), q.end(), 0.0), 2.0);
  EXPECT_EQ(q[kEosId], 0.0);
}

TEST(SoftTarget, ProjectionsAgreeWithFreeFunction) {
  const std::vector<int> labels = {3, 4, 6};
  LabelBag bag(labels, 8);
  for (int gold : {2, 3, 4, 6}) {
    EXPECT_EQ(SoftProjection().project(gold, bag), soft_target(one_hot(8, gold), bag));
    EXPECT_EQ(HardProjection().project(gold, bag), one_hot(8, gold));
  }
  EXPECT_EQ(&projection_for(LossMode::kSoft), &projection_for(parse_loss_mode("soft")));
  EXPECT_EQ(projection_for(LossMode::kHard).name(), "hard");
  EXPECT_THROW(parse_loss_mode("medium"), UsageError);
}

TEST(SoftTarget, RandomBagsSumToOne) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t vocab = 3 + 1 + rng() % 40;
    const std::size_t m = 1 + rng() % std::min<std::size_t>(8, vocab - 3);
    std::vector<int> ids(vocab - 3);
    std::iota(ids.begin(), ids.end(), 3);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(m);
    LabelBag bag(ids, vocab);
    const int gold = (rng() % 4 == 0) ? kEosId : ids[rng() % m];
    const auto y = soft_target(one_hot(vocab, gold), bag);
    double sum = 0;
    for (std::size_t i = 0; i < vocab; ++i) {
      EXPECT_GE(y[i], 0.0);
      sum += y[i];
      const bool in_bag = std::find(ids.begin(), ids.end(), static_cast<int>(i)) != ids.end();
      const double expected = (in_bag ? 0.5 / static_cast<double>(m) : 0.0) + (static_cast<int>(i) == gold ? 0.5 : 0.0);
      EXPECT_NEAR(y[i], expected, 1e-15);
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

std::vector<Tensor> rows(const std::vector<std::vector<Real>>& values, bool grad = false) {
  std::vector<Tensor> out;
  for (const auto& v : values) out.push_back(Tensor::from({1, v.size()}, v, grad));
  return out;
}

double entropy(const std::vector<Real>& p) {
  double h = 0;
  for (Real x : p)
    if (x > 0) h -= x * std::log(x);
  return h;
}

TEST(SequenceLoss, MatchingTargetsGiveEntropyFloor) {
  const std::vector<int> labels = {3, 4};
  const std::vector<int> gold = {3, 4, kEosId};
  LabelBag bag(labels, 6);
  std::vector<std::vector<Real>> targets;
  double floor = 0;
  for (int g : gold) {
    targets.push_back(SoftProjection().project(g, bag));
    floor += entropy(targets.back());
  }
  Tape tape(false);
  const auto probs = rows(targets);
  const Real loss = sequence_loss(tape, probs, gold, bag, LossMode::kSoft).item();
  EXPECT_NEAR(loss, floor, 1e-12);
  EXPECT_GT(loss, 0.0);
}

TEST(SequenceLoss, HardLossVanishesOnOneHotPredictions) {
  const std::vector<int> labels = {3, 4};
  const std::vector<int> gold = {3, 4, kEosId};
  LabelBag bag(labels, 6);
  Tape tape(false);
  const auto probs = rows({one_hot(6, 3), one_hot(6, 4), one_hot(6, kEosId)});
  EXPECT_NEAR(sequence_loss(tape, probs, gold, bag, LossMode::kHard).item(), 0.0, 1e-12);
}

TEST(SequenceLoss, LengthMismatchIsAnError) {
  const std::vector<int> labels = {3};
  const std::vector<int> gold = {3, kEosId};
  LabelBag bag(labels, 5);
  Tape tape(false);
  const auto probs = rows({one_hot(5, 3)});
  EXPECT_THROW(sequence_loss(tape, probs, gold, bag, LossMode::kSoft), Error);
}

TEST(SequenceLoss, SingleLabelStepSoftEqualsHard) {
  // With M = 1 the label step target is one-hot; only the EOS step differs.
  const std::vector<int> labels = {4};
  LabelBag bag(labels, 6);
  Tape tape(false);
  const std::vector<Real> p0 = {0.1, 0.1, 0.2, 0.2, 0.3, 0.1};
  const std::vector<Real> p1 = {0.05, 0.05, 0.6, 0.1, 0.1, 0.1};
  const auto probs = rows({p0, p1});
  const std::vector<int> gold = {4, kEosId};
  const Real soft = sequence_loss(tape, probs, gold, bag, LossMode::kSoft).item();
  const Real hard = sequence_loss(tape, probs, gold, bag, LossMode::kHard).item();
  EXPECT_NEAR(hard, -std::log(0.3) - std::log(0.6), 1e-12);
  EXPECT_NEAR(soft, -std::log(0.3) - 0.5 * std::log(0.6) - 0.5 * std::log(0.1), 1e-12);
}

TEST(SequenceLoss, InBagMistakeCostsLessUnderSoftLossOnly) {
  // Step 1 gold is s3; a mass m moves from s3 onto either s4 (in the bag,
  // wrong position) or s6 (outside the bag).
  const std::vector<int> labels = {3, 4, 5};
  const std::vector<int> gold = {3};
  LabelBag bag(labels, 7);
  for (double m : {0.05, 0.2, 0.4}) {
    std::vector<Real> base = {0.02, 0.02, 0.06, 0.5, 0.1, 0.2, 0.1};
    auto in_bag = base;
    in_bag[3] -= m;
    in_bag[4] += m;
    auto out_bag = base;
    out_bag[3] -= m;
    out_bag[6] += m;
    Tape tape(false);
    const auto pin = rows({in_bag});
    const auto pout = rows({out_bag});
    EXPECT_LT(sequence_loss(tape, pin, gold, bag, LossMode::kSoft).item(),
              sequence_loss(tape, pout, gold, bag, LossMode::kSoft).item());
    EXPECT_EQ(sequence_loss(tape, pin, gold, bag, LossMode::kHard).item(),
              sequence_loss(tape, pout, gold, bag, LossMode::kHard).item());
  }
}

TEST(SequenceLoss, FloorKeepsLossFinite) {
  const std::vector<int> labels = {3};
  const std::vector<int> gold = {3, kEosId};
  LabelBag bag(labels, 5);
  Tape tape(false);
  const auto probs = rows({one_hot(5, 4), one_hot(5, 4)});
  const Real loss = sequence_loss(tape, probs, gold, bag, LossMode::kHard).item();
  EXPECT_NEAR(loss, -2.0 * std::log(kLogFloor), 1e-9);
}

TEST(SequenceLoss, GradientMatchesFiniteDifferences) {
  const std::vector<int> labels = {3, 5};
  const std::vector<int> gold = {5, 3, kEosId};
  LabelBag bag(labels, 7);
  for (LossMode mode : {LossMode::kSoft, LossMode::kHard}) {
    nd::Rng rng(static_cast<std::uint64_t>(mode) + 1);
    nd::ParamSet params;
    params.add("logits", nd::uniform({3, 7}, 2.0, rng));
    auto loss = [&](Tape& tape) {
      std::vector<Tensor> probs;
      for (std::size_t t = 0; t < 3; ++t) probs.push_back(tape.softmax(tape.slice(params.get("logits"), 0, t, 1)));
      return sequence_loss(tape, probs, gold, bag, mode);
    };
    EXPECT_LT(nd::grad_check(loss, params).max_rel_error, 1e-6) << loss_mode_name(mode);
  }
}

}  // namespace
}  // namespace sememe::loss
