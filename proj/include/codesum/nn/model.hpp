// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "codesum/nn/autodiff.hpp"
#include "codesum/nn/config.hpp"
#include "codesum/text/prepare.hpp"
#include "codesum/util/rng.hpp"

namespace codesum::nn {

using text::IdSeq;

enum class SeqChannel { Code, Ast };
enum class ApiKind { Description, Definition };
/// The four attention channels, in fusion order.
enum class Channel { Code = 0, Ast = 1, Description = 2, Definition = 3 };
inline constexpr std::size_t kNumChannels = 4;

/// Encoder states. `states` is hidden x positions (one column per position)
/// and is invalid when there are no positions.
struct EncoderOutput {
  Var states;
  Var final_state;
  std::vector<bool> mask;
  /// W2 * states for the attention that reads this output; filled lazily.
  mutable Var keys;

  std::size_t positions() const { return mask.size(); }
};

struct CellState {
  Var h;
  Var c;  // LSTM only
};

struct Attention {
  Var weights;  // 1 x positions; invalid for an empty channel
  Var context;  // hidden x 1
};

struct DecoderStepOut {
  Var logits;
  Eigen::VectorXd prob;
  CellState state;
  std::array<Var, kNumChannels> attn_weights;
};

struct EncodedExample {
  std::array<EncoderOutput, kNumChannels> channels;
};

/// Per-step attention weights of a decode, one vector per channel.
using StepAttention = std::array<std::vector<double>, kNumChannels>;

struct DecodeResult {
  std::vector<text::TokenId> ids;  // without BOS/EOS
  std::vector<StepAttention> attention;
};

class Model;

/// One forward pass: a tape, the parameter leaves recorded on it and the
/// dropout state. Dropout is active only when `dropout_rng` is given.
class Graph {
 public:
  Graph(Model& model, bool grad_enabled, util::Rng* dropout_rng = nullptr);

  Tape& tape() { return tape_; }
  Model& model() { return model_; }
  bool training() const { return rng_ != nullptr; }

  Var param(int index);
  Var zeros(Eigen::Index rows);
  /// Inverted dropout at the configured rate; identity outside training.
  Var dropout(Var x);

 private:
  Model& model_;
  Tape tape_;
  util::Rng* rng_;
  std::vector<Var> leaves_;
};

/// Four-channel encoder-decoder with API-context encoders.
class Model {
 public:
  /// Allocates every tensor (zero-filled) after validating `config`.
  explicit Model(const ModelConfig& config);

  static constexpr double kInitRange = 0.08;

  /// Uniform in [-range, range] from `seed`, tensor by tensor in table order.
  void init_params(std::uint64_t seed, double range = kInitRange);

  const ModelConfig& config() const { return config_; }
  std::vector<Parameter>& parameters() { return params_; }
  const std::vector<Parameter>& parameters() const { return params_; }
  Parameter& parameter(const std::string& name);
  std::size_t parameter_count() const;
  static std::size_t closed_form_parameter_count(const ModelConfig& config);
  /// FNV-1a over tensor names and the raw bytes of every value.
  std::uint64_t checksum() const;
  void zero_grad();

  EncoderOutput encode_sequence(Graph& g, SeqChannel channel, const IdSeq& ids,
                                const std::vector<bool>& mask);
  EncoderOutput encode_sequence(Graph& g, SeqChannel channel, const IdSeq& ids);
  EncoderOutput encode_api_channel(Graph& g, ApiKind kind, const std::vector<IdSeq>& channels);
  Attention attend(Graph& g, Channel channel, Var prev_state, const EncoderOutput& enc);
  Var fuse_initial_state(Graph& g, const std::array<Var, kNumChannels>& finals);
  CellState initial_state(Graph& g, const EncodedExample& enc);
  DecoderStepOut decode_step(Graph& g, text::TokenId prev, const CellState& state, const EncodedExample& enc);

  /// All four channels; API channels are left empty when use_api_context is off.
  EncodedExample encode(Graph& g, const text::PreparedExample& ex);

  struct Loss {
    Var total;  // summed cross-entropy over the target positions
    std::size_t tokens = 0;
  };
  /// Teacher-forced loss of one example.
  Loss example_loss(Graph& g, const text::PreparedExample& ex);
  /// Mean per-token cross-entropy without dropout.
  double mean_loss(const std::vector<text::PreparedExample>& examples);

  DecodeResult greedy_decode(const text::PreparedExample& ex, std::size_t max_len = 64);

 private:
  struct CellIdx {
    int wx = -1, wh = -1, bx = -1, bh = -1;  // LSTM uses bx as its only bias
  };
  struct BiIdx {
    CellIdx fwd, bwd;
    int proj_w = -1, proj_b = -1;
  };
  struct AttnIdx {
    int w_query = -1, w_key = -1, v = -1;
  };

  int add_param(const std::string& name, Eigen::Index rows, Eigen::Index cols);
  CellIdx add_cell(const std::string& prefix, Eigen::Index input);
  BiIdx add_bi(const std::string& prefix, Eigen::Index input);

  CellState cell_step(Graph& g, const CellIdx& cell, Var gx, const CellState& s);
  Var input_gates(Graph& g, const CellIdx& cell, Var inputs);
  CellState zero_state(Graph& g);
  EncoderOutput run_bidirectional(Graph& g, const BiIdx& enc, Var inputs, const std::vector<bool>& mask);
  Var embed_columns(Graph& g, int table, const IdSeq& ids, const std::vector<bool>* mask);

  ModelConfig config_;
  std::vector<Parameter> params_;
  int src_embed_ = -1, tgt_embed_ = -1;
  BiIdx code_enc_, ast_enc_, desc_inner_, def_inner_;
  CellIdx desc_outer_, def_outer_;
  std::array<AttnIdx, kNumChannels> attn_;
  int fuse_init_w_ = -1, fuse_init_b_ = -1, fuse_ctx_w_ = -1, fuse_ctx_b_ = -1;
  CellIdx decoder_;
  int out_w_ = -1, out_b_ = -1;
};

}  // namespace codesum::nn
