// SPDX-License-Identifier: Apache-2.0
#include "codesum/nn/train.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace codesum::nn {

EarlyStopping::EarlyStopping(int patience) : patience_(patience) {
  if (patience < 1) throw ValidationError("patience must be >= 1");
}

bool EarlyStopping::update(double loss) {
  ++epoch_;
  if (loss < best_loss_) {
    best_loss_ = loss;
    best_epoch_ = epoch_;
    return true;
  }
  return false;
}

nlohmann::json to_json(const TrainHistory& h) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const EpochRecord& e : h.epochs) {
    epochs.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"val_loss", e.val_loss},
                      {"improved", e.improved}});
  }
  return {{"epochs", epochs}, {"best_epoch", h.best_epoch}, {"stopped_early", h.stopped_early}};
}

namespace {

void clip_gradients(std::vector<Parameter>& params, double max_norm) {
  double sq = 0.0;
  for (const Parameter& p : params) sq += p.grad.squaredNorm();
  const double norm = std::sqrt(sq);
  if (norm <= max_norm || norm == 0.0) return;
  const double s = max_norm / norm;
  for (Parameter& p : params) p.grad *= s;
}

}  // namespace

TrainHistory train(Model& model, const std::vector<text::PreparedExample>& train_set,
                   const std::vector<text::PreparedExample>& val_set, const TrainOptions& options) {
  if (train_set.empty()) throw ValidationError("training set is empty");
  if (val_set.empty()) throw ValidationError("validation set is empty");
  const ModelConfig& cfg = model.config();
  util::Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  EarlyStopping stopper(cfg.patience);
  TrainHistory history;
  std::vector<Matrix> best;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t batch_size = static_cast<std::size_t>(cfg.batch_size);

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_total = 0.0;
    std::size_t epoch_tokens = 0;
    for (std::size_t start = 0, batch = 0; start < order.size(); start += batch_size, ++batch) {
      const std::size_t end = std::min(order.size(), start + batch_size);
      std::size_t tokens = 0;
      for (std::size_t k = start; k < end; ++k) tokens += train_set[order[k]].target_ids.size() - 1;
      model.zero_grad();
      double batch_total = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        Graph g(model, true, &rng);
        Model::Loss loss = model.example_loss(g, train_set[order[k]]);
        batch_total += loss.total.value()(0, 0);
        g.tape().backward(loss.total, 1.0 / static_cast<double>(tokens));
      }
      if (!std::isfinite(batch_total)) {
        throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " + std::to_string(batch),
                            epoch, batch);
      }
      if (cfg.clip_norm > 0.0) clip_gradients(model.parameters(), cfg.clip_norm);
      for (Parameter& p : model.parameters()) p.value -= cfg.lr * p.grad;
      epoch_total += batch_total;
      epoch_tokens += tokens;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = epoch_total / static_cast<double>(epoch_tokens);
    rec.val_loss = model.mean_loss(val_set);
    if (!std::isfinite(rec.val_loss)) {
      throw TrainingError("non-finite validation loss at epoch " + std::to_string(epoch), epoch, 0);
    }
    rec.improved = stopper.update(rec.val_loss);
    if (rec.improved) {
      best.clear();
      for (const Parameter& p : model.parameters()) best.push_back(p.value);
    }
    history.epochs.push_back(rec);
    const bool requested = options.on_epoch && options.on_epoch(rec);
    if (stopper.should_stop()) history.stopped_early = true;
    if (requested || history.stopped_early) break;
  }

  history.best_epoch = stopper.best_epoch();
  auto& params = model.parameters();
  for (std::size_t i = 0; i < best.size(); ++i) params[i].value = best[i];
  for (Parameter& p : params) p.grad.resize(0, 0);
  return history;
}

TrainResult train(const ModelConfig& config, const std::vector<text::PreparedExample>& train_set,
                  const std::vector<text::PreparedExample>& val_set, const TrainOptions& options) {
  TrainResult r{Model(config), {}};
  r.model.init_params(config.seed, config.init_range);
  r.history = train(r.model, train_set, val_set, options);
  return r;
}

}  // namespace codesum::nn
