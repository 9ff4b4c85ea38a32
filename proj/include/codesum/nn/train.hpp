// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "codesum/errors.hpp"
#include "codesum/nn/model.hpp"
#include "json.hpp"

namespace codesum::nn {

/// Raised when a batch loss is NaN or infinite.
class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, int epoch, std::size_t batch)
      : Error(what), epoch_(epoch), batch_(batch) {}
  int epoch() const { return epoch_; }
  std::size_t batch() const { return batch_; }

 private:
  int epoch_;
  std::size_t batch_;
};

/// Patience counter over validation losses. Epochs are numbered from 1.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience);

  /// Records the next epoch's loss; true when it is a new best.
  bool update(double loss);
  bool should_stop() const { return epoch_ - best_epoch_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }
  int epoch() const { return epoch_; }

 private:
  int patience_;
  int epoch_ = 0;
  int best_epoch_ = 0;
  double best_loss_ = std::numeric_limits<double>::infinity();
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  bool improved = false;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  bool stopped_early = false;
};

nlohmann::json to_json(const TrainHistory& history);

struct TrainOptions {
  /// Called after every epoch; returning true ends training.
  std::function<bool(const EpochRecord&)> on_epoch;
};

/// SGD on mean token cross-entropy with early stopping. Leaves the model
/// holding the parameters of the best validation epoch.
TrainHistory train(Model& model, const std::vector<text::PreparedExample>& train_set,
                   const std::vector<text::PreparedExample>& val_set, const TrainOptions& options = {});

struct TrainResult {
  Model model;
  TrainHistory history;
};

/// Initializes a model from config.seed and trains it.
TrainResult train(const ModelConfig& config, const std::vector<text::PreparedExample>& train_set,
                  const std::vector<text::PreparedExample>& val_set, const TrainOptions& options = {});

}  // namespace codesum::nn
