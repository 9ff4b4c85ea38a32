// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <fstream>
#include <iterator>

#include "codesum/errors.hpp"
#include "codesum/nn/gradcheck.hpp"
#include "codesum/nn/serialize.hpp"
#include "codesum/nn/train.hpp"
#include "support.hpp"

using namespace codesum::nn;
using codesum::text::PreparedExample;

namespace {

ModelConfig small_config() {
  ModelConfig c = gradcheck_config(CellType::GRU);
  c.lr = 0.5;
  c.batch_size = 2;
  c.max_epochs = 6;
  c.patience = 3;
  c.seed = 21;
  return c;
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(EarlyStopping, StopsAfterPatienceEpochsWithoutImprovement) {
  EarlyStopping es(7);
  EXPECT_TRUE(es.update(3.0));
  EXPECT_TRUE(es.update(2.0));
  EXPECT_TRUE(es.update(1.0));
  EXPECT_EQ(es.best_epoch(), 3);
  for (int epoch = 4; epoch <= 9; ++epoch) {
    EXPECT_FALSE(es.update(2.0));
    EXPECT_FALSE(es.should_stop()) << epoch;
  }
  EXPECT_FALSE(es.update(1.0));  // equal is not an improvement
  EXPECT_TRUE(es.should_stop());
  EXPECT_EQ(es.epoch(), 10);
  EXPECT_EQ(es.best_loss(), 1.0);
}

TEST(Train, LossDecreasesAndBestWeightsRestored) {
  const ModelConfig c = small_config();
  const auto train_set = gradcheck_examples(c, 31, 6);
  const auto val_set = gradcheck_examples(c, 32, 2);
  Model fresh(c);
  fresh.init_params(c.seed);
  const double before = fresh.mean_loss(train_set);

  TrainResult r = train(c, train_set, val_set);
  ASSERT_FALSE(r.history.epochs.empty());
  EXPECT_LT(r.history.epochs.back().train_loss, before);
  const auto& best = r.history.epochs[static_cast<std::size_t>(r.history.best_epoch - 1)];
  EXPECT_TRUE(best.improved);
  EXPECT_NEAR(r.model.mean_loss(val_set), best.val_loss, 1e-12);
}

TEST(Train, Deterministic) {
  const ModelConfig c = small_config();
  const auto train_set = gradcheck_examples(c, 31, 6);
  const auto val_set = gradcheck_examples(c, 32, 2);
  EXPECT_EQ(train(c, train_set, val_set).model.checksum(), train(c, train_set, val_set).model.checksum());
}

TEST(Train, CallbackStopsEarly) {
  const ModelConfig c = small_config();
  const auto ex = gradcheck_examples(c, 31, 4);
  TrainOptions opts;
  opts.on_epoch = [](const EpochRecord& rec) { return rec.epoch >= 2; };
  EXPECT_EQ(train(c, ex, ex, opts).history.epochs.size(), 2u);
}

TEST(Train, EmptySplitRejected) {
  const ModelConfig c = small_config();
  EXPECT_THROW(train(c, {}, gradcheck_examples(c, 1, 1)), codesum::ValidationError);
}

TEST(Serialize, RoundTrip) {
  codesum::testing::TempDir dir;
  Model m(small_config());
  m.init_params(3);
  save_model(m, dir.file("a.bin"));
  Model back = load_model(dir.file("a.bin"));
  EXPECT_EQ(back.config(), m.config());
  ASSERT_EQ(back.parameters().size(), m.parameters().size());
  for (std::size_t i = 0; i < m.parameters().size(); ++i) {
    const auto& a = m.parameters()[i];
    const auto& b = back.parameters()[i];
    EXPECT_EQ(a.name, b.name);
    EXPECT_LT((a.value.cast<float>().cast<double>() - b.value).cwiseAbs().maxCoeff(), 1e-12);
  }
  save_model(back, dir.file("b.bin"));
  EXPECT_EQ(read_bytes(dir.file("a.bin")), read_bytes(dir.file("b.bin")));
}

TEST(Serialize, ShapeMismatchRejected) {
  codesum::testing::TempDir dir;
  Model m(small_config());
  save_model(m, dir.file("a.bin"));
  std::string bytes = read_bytes(dir.file("a.bin"));
  const auto pos = bytes.find("\"hidden_dim\":8");
  ASSERT_NE(pos, std::string::npos);
  bytes[pos + 13] = '9';
  std::ofstream(dir.file("b.bin"), std::ios::binary) << bytes;
  EXPECT_THROW(load_model(dir.file("b.bin")), codesum::ValidationError);
}

TEST(Serialize, MissingFileIsIoError) {
  EXPECT_THROW(load_model("/nonexistent/model.bin"), codesum::IoError);
}

TEST(Serialize, TruncatedFileRejected) {
  codesum::testing::TempDir dir;
  Model m(small_config());
  save_model(m, dir.file("a.bin"));
  const std::string bytes = read_bytes(dir.file("a.bin"));
  std::ofstream(dir.file("b.bin"), std::ios::binary) << bytes.substr(0, bytes.size() / 2);
  EXPECT_THROW(load_model(dir.file("b.bin")), codesum::Error);
}
