// SPDX-License-Identifier: Apache-2.0
#include "codesum/nn/model.hpp"

#include <cstring>
#include <stdexcept>

#include "codesum/errors.hpp"
#include "codesum/util/hash.hpp"

namespace codesum::nn {

namespace {

int gate_count(CellType cell) { return cell == CellType::GRU ? 3 : 4; }

std::size_t cell_count(CellType cell, std::size_t input, std::size_t h) {
  const std::size_t g = static_cast<std::size_t>(gate_count(cell));
  const std::size_t biases = cell == CellType::GRU ? 2 * g * h : g * h;
  return g * h * input + g * h * h + biases;
}

const char* channel_name(std::size_t c) {
  static const char* names[] = {"code", "ast", "desc", "def"};
  return names[c];
}

}  // namespace

// ---- Graph -----------------------------------------------------------------

Graph::Graph(Model& model, bool grad_enabled, util::Rng* dropout_rng)
    : model_(model), tape_(grad_enabled), rng_(dropout_rng), leaves_(model.parameters().size()) {}

Var Graph::param(int index) {
  Var& v = leaves_[static_cast<std::size_t>(index)];
  if (!v.valid()) v = tape_.param(model_.parameters()[static_cast<std::size_t>(index)]);
  return v;
}

Var Graph::zeros(Eigen::Index rows) { return tape_.constant(Matrix::Zero(rows, 1)); }

Var Graph::dropout(Var x) {
  const double p = model_.config().dropout;
  if (rng_ == nullptr || p <= 0.0) return x;
  const double keep = 1.0 / (1.0 - p);
  Matrix mask(x.rows(), x.cols());
  for (Eigen::Index k = 0; k < mask.size(); ++k) mask(k) = rng_->uniform01() < p ? 0.0 : keep;
  return mask_mul(x, std::move(mask));
}

// ---- construction ----------------------------------------------------------

int Model::add_param(const std::string& name, Eigen::Index rows, Eigen::Index cols) {
  Parameter p;
  p.name = name;
  p.value = Matrix::Zero(rows, cols);
  params_.push_back(std::move(p));
  return static_cast<int>(params_.size() - 1);
}

Model::CellIdx Model::add_cell(const std::string& prefix, Eigen::Index input) {
  const Eigen::Index h = config_.hidden_dim;
  const Eigen::Index g = gate_count(config_.cell) * h;
  CellIdx c;
  c.wx = add_param(prefix + ".w_x", g, input);
  c.wh = add_param(prefix + ".w_h", g, h);
  if (config_.cell == CellType::GRU) {
    c.bx = add_param(prefix + ".b_x", g, 1);
    c.bh = add_param(prefix + ".b_h", g, 1);
  } else {
    c.bx = add_param(prefix + ".b", g, 1);
  }
  return c;
}

Model::BiIdx Model::add_bi(const std::string& prefix, Eigen::Index input) {
  const Eigen::Index h = config_.hidden_dim;
  BiIdx b;
  b.fwd = add_cell(prefix + ".fwd", input);
  b.bwd = add_cell(prefix + ".bwd", input);
  b.proj_w = add_param(prefix + ".proj.w", h, 2 * h);
  b.proj_b = add_param(prefix + ".proj.b", h, 1);
  return b;
}

Model::Model(const ModelConfig& config) : config_(config) {
  config_.validate();
  const Eigen::Index e = config_.embed_dim, h = config_.hidden_dim;
  src_embed_ = add_param("embed.src", config_.src_vocab, e);
  tgt_embed_ = add_param("embed.tgt", config_.tgt_vocab, e);
  code_enc_ = add_bi("enc.code", e);
  ast_enc_ = add_bi("enc.ast", e);
  desc_inner_ = add_bi("enc.desc_inner", e);
  def_inner_ = add_bi("enc.def_inner", e);
  desc_outer_ = add_cell("enc.desc_outer", h);
  def_outer_ = add_cell("enc.def_outer", h);
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    const std::string prefix = std::string("attn.") + channel_name(c);
    attn_[c].w_query = add_param(prefix + ".w_query", h, h);
    attn_[c].w_key = add_param(prefix + ".w_key", h, h);
    attn_[c].v = add_param(prefix + ".v", 1, h);
  }
  fuse_init_w_ = add_param("fuse.init.w", h, 4 * h);
  fuse_init_b_ = add_param("fuse.init.b", h, 1);
  fuse_ctx_w_ = add_param("fuse.ctx.w", h, 4 * h);
  fuse_ctx_b_ = add_param("fuse.ctx.b", h, 1);
  decoder_ = add_cell("dec.cell", e + h);
  out_w_ = add_param("out.w", config_.tgt_vocab, 2 * h);
  out_b_ = add_param("out.b", config_.tgt_vocab, 1);
}

void Model::init_params(std::uint64_t seed, double range) {
  util::Rng rng(seed);
  for (Parameter& p : params_) {
    for (Eigen::Index k = 0; k < p.value.size(); ++k) p.value(k) = rng.uniform(-range, range);
    p.grad.resize(0, 0);
  }
}

Parameter& Model::parameter(const std::string& name) {
  for (Parameter& p : params_) {
    if (p.name == name) return p;
  }
  throw std::out_of_range("no parameter named " + name);
}

std::size_t Model::parameter_count() const {
  std::size_t n = 0;
  for (const Parameter& p : params_) n += static_cast<std::size_t>(p.value.size());
  return n;
}

std::size_t Model::closed_form_parameter_count(const ModelConfig& c) {
  const std::size_t e = static_cast<std::size_t>(c.embed_dim), h = static_cast<std::size_t>(c.hidden_dim);
  const std::size_t vs = static_cast<std::size_t>(c.src_vocab), vt = static_cast<std::size_t>(c.tgt_vocab);
  const std::size_t embeddings = (vs + vt) * e;
  const std::size_t bi = 2 * cell_count(c.cell, e, h) + 2 * h * h + h;
  const std::size_t outer = cell_count(c.cell, h, h);
  const std::size_t attention = 2 * h * h + h;
  const std::size_t fusion = 4 * h * h + h;
  const std::size_t decoder = cell_count(c.cell, e + h, h);
  const std::size_t output = vt * 2 * h + vt;
  return embeddings + 4 * bi + 2 * outer + 4 * attention + 2 * fusion + decoder + output;
}

std::uint64_t Model::checksum() const {
  util::Fnv1a f;
  for (const Parameter& p : params_) {
    f.update(p.name);
    f.update(static_cast<std::uint64_t>(p.value.rows()));
    f.update(static_cast<std::uint64_t>(p.value.cols()));
    for (Eigen::Index k = 0; k < p.value.size(); ++k) {
      std::uint64_t bits;
      const double v = p.value(k);
      std::memcpy(&bits, &v, sizeof bits);
      f.update(bits);
    }
  }
  return f.digest();
}

void Model::zero_grad() {
  for (Parameter& p : params_) p.zero_grad();
}

// ---- recurrent cells -------------------------------------------------------

CellState Model::zero_state(Graph& g) {
  CellState s;
  s.h = g.zeros(config_.hidden_dim);
  if (config_.cell == CellType::LSTM) s.c = g.zeros(config_.hidden_dim);
  return s;
}

Var Model::input_gates(Graph& g, const CellIdx& cell, Var inputs) {
  return add_colwise(matmul(g.param(cell.wx), inputs), g.param(cell.bx));
}

CellState Model::cell_step(Graph& g, const CellIdx& cell, Var gx, const CellState& s) {
  const Eigen::Index h = config_.hidden_dim;
  if (config_.cell == CellType::GRU) {
    Var gh = affine(g.param(cell.wh), s.h, g.param(cell.bh));
    Var r = sigmoid(add(slice_rows(gx, 0, h), slice_rows(gh, 0, h)));
    Var z = sigmoid(add(slice_rows(gx, h, h), slice_rows(gh, h, h)));
    Var n = tanh(add(slice_rows(gx, 2 * h, h), mul(r, slice_rows(gh, 2 * h, h))));
    return {add(mul(one_minus(z), n), mul(z, s.h)), Var()};
  }
  Var pre = add(gx, matmul(g.param(cell.wh), s.h));
  Var i = sigmoid(slice_rows(pre, 0, h));
  Var f = sigmoid(slice_rows(pre, h, h));
  Var u = tanh(slice_rows(pre, 2 * h, h));
  Var o = sigmoid(slice_rows(pre, 3 * h, h));
  Var c = add(mul(f, s.c), mul(i, u));
  return {mul(o, tanh(c)), c};
}

// ---- encoders --------------------------------------------------------------

Var Model::embed_columns(Graph& g, int table, const IdSeq& ids, const std::vector<bool>* mask) {
  Parameter& t = params_[static_cast<std::size_t>(table)];
  std::vector<Var> cols;
  cols.reserve(ids.size());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (mask && !(*mask)[k]) continue;
    const text::TokenId id = ids[k];
    if (id < 0 || id >= t.value.rows()) throw std::out_of_range("token id outside the embedding table");
    cols.push_back(g.tape().embedding(t, id));
  }
  return g.dropout(hstack(cols));
}

EncoderOutput Model::run_bidirectional(Graph& g, const BiIdx& enc, Var inputs, const std::vector<bool>& mask) {
  const Eigen::Index n = inputs.cols();
  Var gf = input_gates(g, enc.fwd, inputs);
  Var gb = input_gates(g, enc.bwd, inputs);
  std::vector<Var> fwd(static_cast<std::size_t>(n)), bwd(static_cast<std::size_t>(n));
  CellState s = zero_state(g);
  for (Eigen::Index k = 0; k < n; ++k) {
    s = cell_step(g, enc.fwd, column(gf, k), s);
    fwd[static_cast<std::size_t>(k)] = s.h;
  }
  s = zero_state(g);
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    s = cell_step(g, enc.bwd, column(gb, k), s);
    bwd[static_cast<std::size_t>(k)] = s.h;
  }
  Var pw = g.param(enc.proj_w), pb = g.param(enc.proj_b);
  Var active = add_colwise(matmul(pw, concat_rows({hstack(fwd), hstack(bwd)})), pb);

  EncoderOutput out;
  out.mask = mask;
  out.final_state = affine(pw, concat_rows({fwd.back(), bwd.front()}), pb);
  if (static_cast<std::size_t>(n) == mask.size()) {
    out.states = active;
  } else {
    std::vector<Var> cols;
    Eigen::Index k = 0;
    for (bool m : mask) cols.push_back(m ? column(active, k++) : g.zeros(config_.hidden_dim));
    out.states = hstack(cols);
  }
  return out;
}

EncoderOutput Model::encode_sequence(Graph& g, SeqChannel channel, const IdSeq& ids) {
  return encode_sequence(g, channel, ids, std::vector<bool>(ids.size(), true));
}

EncoderOutput Model::encode_sequence(Graph& g, SeqChannel channel, const IdSeq& ids, const std::vector<bool>& mask) {
  if (mask.size() != ids.size()) throw std::invalid_argument("encode_sequence: mask length differs from ids");
  bool any = false;
  for (bool m : mask) any = any || m;
  if (!any) throw std::invalid_argument("encode_sequence: no unmasked positions");
  const BiIdx& enc = channel == SeqChannel::Code ? code_enc_ : ast_enc_;
  return run_bidirectional(g, enc, embed_columns(g, src_embed_, ids, &mask), mask);
}

EncoderOutput Model::encode_api_channel(Graph& g, ApiKind kind, const std::vector<IdSeq>& channels) {
  EncoderOutput out;
  if (channels.empty()) {
    out.final_state = g.zeros(config_.hidden_dim);
    return out;
  }
  const BiIdx& inner = kind == ApiKind::Description ? desc_inner_ : def_inner_;
  const CellIdx& outer = kind == ApiKind::Description ? desc_outer_ : def_outer_;
  std::vector<Var> finals;
  for (const IdSeq& ids : channels) {
    if (ids.empty()) throw std::invalid_argument("encode_api_channel: empty API channel");
    const std::vector<bool> all(ids.size(), true);
    finals.push_back(run_bidirectional(g, inner, embed_columns(g, src_embed_, ids, nullptr), all).final_state);
  }
  Var gx = input_gates(g, outer, hstack(finals));
  std::vector<Var> states;
  CellState s = zero_state(g);
  for (Eigen::Index k = 0; k < gx.cols(); ++k) {
    s = cell_step(g, outer, column(gx, k), s);
    states.push_back(s.h);
  }
  out.states = hstack(states);
  out.final_state = states.back();
  out.mask.assign(channels.size(), true);
  return out;
}

// ---- attention and decoding ------------------------------------------------

Attention Model::attend(Graph& g, Channel channel, Var prev_state, const EncoderOutput& enc) {
  Attention a;
  if (enc.positions() == 0) {
    a.context = g.zeros(config_.hidden_dim);
    return a;
  }
  const AttnIdx& p = attn_[static_cast<std::size_t>(channel)];
  if (!enc.keys.valid()) enc.keys = matmul(g.param(p.w_key), enc.states);
  Var query = matmul(g.param(p.w_query), prev_state);
  Var scores = matmul(g.param(p.v), tanh(add_colwise(enc.keys, query)));
  a.weights = softmax(scores, enc.mask);
  a.context = matmul(enc.states, transpose(a.weights));
  return a;
}

Var Model::fuse_initial_state(Graph& g, const std::array<Var, kNumChannels>& finals) {
  return affine(g.param(fuse_init_w_), concat_rows(std::span<const Var>(finals)), g.param(fuse_init_b_));
}

EncodedExample Model::encode(Graph& g, const text::PreparedExample& ex) {
  EncodedExample enc;
  auto& ch = enc.channels;
  ch[0] = encode_sequence(g, SeqChannel::Code, ex.code_ids);
  ch[1] = encode_sequence(g, SeqChannel::Ast, ex.ast_ids);
  const std::vector<IdSeq> none;
  const bool api = config_.use_api_context;
  ch[2] = encode_api_channel(g, ApiKind::Description, api ? ex.desc_channels : none);
  ch[3] = encode_api_channel(g, ApiKind::Definition, api ? ex.def_channels : none);
  return enc;
}

CellState Model::initial_state(Graph& g, const EncodedExample& enc) {
  std::array<Var, kNumChannels> finals;
  for (std::size_t c = 0; c < kNumChannels; ++c) finals[c] = enc.channels[c].final_state;
  CellState s;
  s.h = fuse_initial_state(g, finals);
  if (config_.cell == CellType::LSTM) s.c = g.zeros(config_.hidden_dim);
  return s;
}

DecoderStepOut Model::decode_step(Graph& g, text::TokenId prev, const CellState& state, const EncodedExample& enc) {
  DecoderStepOut out;
  std::array<Var, kNumChannels> contexts;
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    Attention a = attend(g, static_cast<Channel>(c), state.h, enc.channels[c]);
    contexts[c] = a.context;
    out.attn_weights[c] = a.weights;
  }
  Var ctx = affine(g.param(fuse_ctx_w_), concat_rows(std::span<const Var>(contexts)), g.param(fuse_ctx_b_));
  Parameter& table = params_[static_cast<std::size_t>(tgt_embed_)];
  if (prev < 0 || prev >= table.value.rows()) throw std::out_of_range("decode_step: token id outside the vocabulary");
  Var emb = g.dropout(g.tape().embedding(table, prev));
  Var gx = affine(g.param(decoder_.wx), concat_rows({emb, ctx}), g.param(decoder_.bx));
  out.state = cell_step(g, decoder_, gx, state);
  Var features = g.dropout(concat_rows({out.state.h, ctx}));
  out.logits = affine(g.param(out_w_), features, g.param(out_b_));
  const Matrix& l = out.logits.value();
  const double mx = l.maxCoeff();
  out.prob = (l.array() - mx).exp().matrix();
  out.prob /= out.prob.sum();
  return out;
}

Model::Loss Model::example_loss(Graph& g, const text::PreparedExample& ex) {
  if (ex.target_ids.size() < 2) throw std::invalid_argument("example_loss: target needs BOS and EOS");
  EncodedExample enc = encode(g, ex);
  CellState s = initial_state(g, enc);
  std::vector<Var> terms;
  for (std::size_t t = 1; t < ex.target_ids.size(); ++t) {
    DecoderStepOut step = decode_step(g, ex.target_ids[t - 1], s, enc);
    terms.push_back(cross_entropy(step.logits, ex.target_ids[t]));
    s = step.state;
  }
  return {sum(terms), terms.size()};
}

double Model::mean_loss(const std::vector<text::PreparedExample>& examples) {
  double total = 0.0;
  std::size_t tokens = 0;
  for (const auto& ex : examples) {
    Graph g(*this, false);
    Loss l = example_loss(g, ex);
    total += l.total.value()(0, 0);
    tokens += l.tokens;
  }
  return tokens == 0 ? 0.0 : total / static_cast<double>(tokens);
}

DecodeResult Model::greedy_decode(const text::PreparedExample& ex, std::size_t max_len) {
  Graph g(*this, false);
  EncodedExample enc = encode(g, ex);
  CellState s = initial_state(g, enc);
  DecodeResult result;
  text::TokenId prev = text::Vocabulary::kBos;
  for (std::size_t t = 0; t < max_len; ++t) {
    DecoderStepOut step = decode_step(g, prev, s, enc);
    Eigen::Index best = 0;
    step.logits.value().col(0).maxCoeff(&best);
    StepAttention att;
    for (std::size_t c = 0; c < kNumChannels; ++c) {
      if (!step.attn_weights[c].valid()) continue;
      const Matrix& w = step.attn_weights[c].value();
      att[c].assign(w.data(), w.data() + w.size());
    }
    result.attention.push_back(std::move(att));
    if (best == text::Vocabulary::kEos) break;
    result.ids.push_back(static_cast<text::TokenId>(best));
    prev = static_cast<text::TokenId>(best);
    s = step.state;
  }
  return result;
}

}  // namespace codesum::nn
