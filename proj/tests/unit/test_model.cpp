// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "codesum/errors.hpp"
#include "codesum/nn/gradcheck.hpp"
#include "codesum/nn/model.hpp"

using namespace codesum::nn;
using codesum::text::PreparedExample;

namespace {

ModelConfig tiny(CellType cell = CellType::GRU) {
  ModelConfig c;
  c.embed_dim = 4;
  c.hidden_dim = 8;
  c.cell = cell;
  c.dropout = 0.0;
  c.src_vocab = 20;
  c.tgt_vocab = 10;
  c.seed = 3;
  return c;
}

PreparedExample example() {
  PreparedExample ex;
  ex.id = "e";
  ex.code_ids = {4, 5, 6, 7};
  ex.ast_ids = {8, 9, 10};
  ex.desc_channels = {{11, 12}, {13}};
  ex.def_channels = {{14, 15, 16}, {17}};
  ex.target_ids = {1, 4, 5, 6, 2};
  return ex;
}

using Vec = Eigen::VectorXd;
Vec sig(const Vec& x) { return (1.0 / (1.0 + (-x.array()).exp())).matrix(); }

// Plain Eigen GRU step, gates ordered r, z, n.
Vec gru_step(const Matrix& wx, const Matrix& wh, const Vec& bx, const Vec& bh, const Vec& x, const Vec& h) {
  const Eigen::Index n = h.size();
  const Vec gx = wx * x + bx;
  const Vec gh = wh * h + bh;
  const Vec r = sig(gx.head(n) + gh.head(n));
  const Vec z = sig(gx.segment(n, n) + gh.segment(n, n));
  const Vec cand = (gx.tail(n) + r.cwiseProduct(gh.tail(n))).array().tanh().matrix();
  return (Vec::Ones(n) - z).cwiseProduct(cand) + z.cwiseProduct(h);
}

}  // namespace

TEST(Model, ClosedFormParameterCount) {
  for (CellType cell : {CellType::GRU, CellType::LSTM}) {
    const ModelConfig c = tiny(cell);
    const std::size_t e = 4, h = 8, vs = 20, vt = 10, g = cell == CellType::GRU ? 3 : 4;
    const std::size_t biases = cell == CellType::GRU ? 2 * g * h : g * h;
    auto cell_params = [&](std::size_t in) { return g * h * in + g * h * h + biases; };
    const std::size_t bi = 2 * cell_params(e) + h * 2 * h + h;
    const std::size_t want = (vs + vt) * e + 4 * bi + 2 * cell_params(h) + 4 * (2 * h * h + h) +
                             2 * (h * 4 * h + h) + cell_params(e + h) + vt * 2 * h + vt;
    Model m(c);
    EXPECT_EQ(m.parameter_count(), want);
    EXPECT_EQ(Model::closed_form_parameter_count(c), want);
  }
}

TEST(Model, DropoutOneRejected) {
  ModelConfig c = tiny();
  c.dropout = 1.0;
  EXPECT_THROW(Model m(c), codesum::ValidationError);
}

TEST(Model, ConfigJsonRoundTrip) {
  ModelConfig c = tiny(CellType::LSTM);
  c.n_apis = std::nullopt;
  EXPECT_EQ(config_from_json(to_json(c)), c);
}

TEST(Model, EncoderMatchesEigenOracle) {
  Model m(tiny());
  m.init_params(1, 0.5);
  const std::vector<int> ids = {4, 9, 2, 7};
  Graph g(m, false);
  const EncoderOutput out = m.encode_sequence(g, SeqChannel::Code, ids);

  const Matrix& emb = m.parameter("embed.src").value;
  auto P = [&](const std::string& n) -> const Matrix& { return m.parameter(n).value; };
  const Eigen::Index h = 8;
  std::vector<Vec> fwd(ids.size()), bwd(ids.size());
  Vec s = Vec::Zero(h);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    s = gru_step(P("enc.code.fwd.w_x"), P("enc.code.fwd.w_h"), P("enc.code.fwd.b_x"), P("enc.code.fwd.b_h"),
                 emb.row(ids[k]).transpose(), s);
    fwd[k] = s;
  }
  s = Vec::Zero(h);
  for (std::size_t k = ids.size(); k-- > 0;) {
    s = gru_step(P("enc.code.bwd.w_x"), P("enc.code.bwd.w_h"), P("enc.code.bwd.b_x"), P("enc.code.bwd.b_h"),
                 emb.row(ids[k]).transpose(), s);
    bwd[k] = s;
  }
  for (std::size_t k = 0; k < ids.size(); ++k) {
    Vec cat(2 * h);
    cat << fwd[k], bwd[k];
    const Vec want = P("enc.code.proj.w") * cat + P("enc.code.proj.b");
    EXPECT_LT((out.states.value().col(static_cast<Eigen::Index>(k)) - want).cwiseAbs().maxCoeff(), 1e-10);
  }
  Vec cat(2 * h);
  cat << fwd.back(), bwd.front();
  const Vec final_want = P("enc.code.proj.w") * cat + P("enc.code.proj.b");
  EXPECT_LT((out.final_state.value() - final_want).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Model, AttentionMatchesSoftmaxOracle) {
  Model m(tiny());
  m.init_params(2, 0.5);
  Graph g(m, false);
  EncoderOutput enc;
  Matrix states = Matrix::Random(8, 3);
  enc.states = g.tape().constant(states);
  enc.mask = {true, false, true};
  const Vec prev = Vec::Random(8);
  const Attention a = m.attend(g, Channel::Ast, g.tape().constant(prev), enc);

  const Matrix& wq = m.parameter("attn.ast.w_query").value;
  const Matrix& wk = m.parameter("attn.ast.w_key").value;
  const Matrix& v = m.parameter("attn.ast.v").value;
  std::vector<double> e(3);
  for (int j = 0; j < 3; ++j) e[j] = (v * (wq * prev + wk * states.col(j)).array().tanh().matrix())(0, 0);
  const double z = std::exp(e[0]) + std::exp(e[2]);
  EXPECT_NEAR(a.weights.value()(0, 0), std::exp(e[0]) / z, 1e-12);
  EXPECT_EQ(a.weights.value()(0, 1), 0.0);
  EXPECT_NEAR(a.weights.value()(0, 2), std::exp(e[2]) / z, 1e-12);
  const Vec ctx = states.col(0) * std::exp(e[0]) / z + states.col(2) * std::exp(e[2]) / z;
  EXPECT_LT((a.context.value() - ctx).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Model, FusionMatchesAffineOracle) {
  Model m(tiny());
  m.init_params(4, 0.5);
  Graph g(m, false);
  std::array<Var, kNumChannels> finals;
  Vec all(32);
  for (int c = 0; c < 4; ++c) {
    const Vec f = Vec::Random(8);
    all.segment(8 * c, 8) = f;
    finals[static_cast<std::size_t>(c)] = g.tape().constant(f);
  }
  const Vec want = m.parameter("fuse.init.w").value * all + m.parameter("fuse.init.b").value;
  EXPECT_LT((m.fuse_initial_state(g, finals).value() - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Model, ProbabilitiesSumToOne) {
  Model m(tiny());
  m.init_params(5);
  const PreparedExample ex = example();
  Graph g(m, false);
  const EncodedExample enc = m.encode(g, ex);
  CellState s = m.initial_state(g, enc);
  for (int id : {1, 4, 5}) {
    const DecoderStepOut out = m.decode_step(g, id, s, enc);
    EXPECT_NEAR(out.prob.sum(), 1.0, 1e-12);
    for (std::size_t c = 0; c < kNumChannels; ++c) {
      EXPECT_NEAR(out.attn_weights[c].value().sum(), 1.0, 1e-12);
    }
    s = out.state;
  }
}

TEST(Model, UniformLogitsGiveLogVocabLoss) {
  Model m(tiny());
  m.init_params(6);
  m.parameter("out.w").value.setZero();
  m.parameter("out.b").value.setZero();
  const PreparedExample ex = example();
  Graph g(m, false);
  const EncodedExample enc = m.encode(g, ex);
  const DecoderStepOut out = m.decode_step(g, 1, m.initial_state(g, enc), enc);
  for (Eigen::Index k = 0; k < out.prob.size(); ++k) EXPECT_NEAR(out.prob(k), 0.1, 1e-15);
  EXPECT_NEAR(m.mean_loss({ex}), std::log(10.0), 1e-12);
}

TEST(Model, ApiContentIgnoredWithoutApiContext) {
  ModelConfig c = tiny();
  c.use_api_context = false;
  Model m(c);
  m.init_params(7);
  PreparedExample a = example();
  PreparedExample b = a;
  b.desc_channels = {{18, 19, 4}};
  b.def_channels = {};
  EXPECT_EQ(m.mean_loss({a}), m.mean_loss({b}));
  EXPECT_EQ(m.greedy_decode(a, 6).ids, m.greedy_decode(b, 6).ids);

  Model with_api(tiny());
  with_api.init_params(7);
  EXPECT_NE(with_api.mean_loss({a}), with_api.mean_loss({b}));
}

TEST(Model, EmptyApiChannelGivesZeroFinalState) {
  Model m(tiny());
  m.init_params(8);
  Graph g(m, false);
  const EncoderOutput out = m.encode_api_channel(g, ApiKind::Definition, {});
  EXPECT_EQ(out.positions(), 0u);
  EXPECT_TRUE(out.final_state.value().isZero());
}

TEST(Model, GreedyDecodeDeterministicAndBounded) {
  Model m(tiny(CellType::LSTM));
  m.init_params(9);
  const auto a = m.greedy_decode(example(), 7);
  const auto b = m.greedy_decode(example(), 7);
  EXPECT_EQ(a.ids, b.ids);
  EXPECT_LE(a.ids.size(), 7u);
  EXPECT_EQ(a.attention.size() >= a.ids.size(), true);
  for (int id : a.ids) EXPECT_NE(id, codesum::text::Vocabulary::kEos);
}

TEST(Model, InitIsSeeded) {
  Model a(tiny()), b(tiny()), c(tiny());
  a.init_params(10);
  b.init_params(10);
  c.init_params(11);
  EXPECT_EQ(a.checksum(), b.checksum());
  EXPECT_NE(a.checksum(), c.checksum());
}

TEST(Gradcheck, CorruptedFusionGradientIsNamed) {
  GradcheckOptions opts;
  opts.corrupt = [](Model& m) { m.parameter("fuse.ctx.w").grad(0, 0) += 0.5; };
  const GradcheckReport report = gradcheck(gradcheck_config(CellType::GRU), opts);
  EXPECT_FALSE(report.passed);
  const auto failed = report.failed_tensors();
  ASSERT_EQ(failed.size(), 1u);
  EXPECT_EQ(failed[0], "fuse.ctx.w");
}

TEST(Gradcheck, RejectsLargeConfig) {
  ModelConfig c = gradcheck_config(CellType::GRU);
  c.hidden_dim = 256;
  EXPECT_THROW(gradcheck(c), codesum::ValidationError);
}
