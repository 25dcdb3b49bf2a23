#include "resgcn/train.hpp"

#include <algorithm>
#include <cmath>

#include "resgcn/error.hpp"
#include "resgcn/text.hpp"

namespace resgcn {

TrainingSession::TrainingSession(const AttributedGraph& g, const Hyperparams& hp,
                                 ModelParams& params)
    : g_(g), hp_(hp), params_(params), s_(normalize_adjacency(g)) {
  hp_.validate();
  params_.check_shapes(g.dim(), hp_);
  require_finite(g.attributes(), "input attributes");
}

const ForwardState& TrainingSession::forward() {
  tape_.clear();
  leaves_.clear();
  grads_ready_ = false;

  ParamVars vars;
  for (const auto& t : params_.residual) vars.residual.push_back(tape_.leaf(t));
  for (const auto& stack : params_.attention) {
    vars.attention.emplace_back();
    for (const auto& t : stack) vars.attention.back().push_back(tape_.leaf(t));
  }
  for (const auto& t : params_.gcn) vars.gcn.push_back(tape_.leaf(t));
  for (const auto& t : params_.decoder) vars.decoder.push_back(tape_.leaf(t));
  // Same order as ModelParams::named_tensors().
  leaves_.insert(leaves_.end(), vars.residual.begin(), vars.residual.end());
  for (const auto& stack : vars.attention) leaves_.insert(leaves_.end(), stack.begin(), stack.end());
  leaves_.insert(leaves_.end(), vars.gcn.begin(), vars.gcn.end());
  leaves_.insert(leaves_.end(), vars.decoder.begin(), vars.decoder.end());

  recorded_ = record_forward(s_.matrix, g_.adjacency(), tape_.constant(g_.attributes()), vars, hp_);
  state_ = ForwardState{};
  state_.residual = recorded_.residual.value();
  for (const auto& a : recorded_.attention) state_.attention.push_back(a.value());
  for (const auto& h : recorded_.hidden) state_.hidden.push_back(h.value());
  state_.z = recorded_.z.value();
  state_.z_structure = recorded_.z_structure.value();
  state_.z_attribute = recorded_.z_attribute.value();
  state_.x_hat = recorded_.x_hat.value();
  state_.e_s = recorded_.e_s.value()(0, 0);
  state_.e_a = recorded_.e_a.value()(0, 0);
  state_.loss = recorded_.loss.value()(0, 0);
  forward_pending_ = true;
  return state_;
}

void TrainingSession::backward() {
  if (!forward_pending_) fail(ErrorCode::kState, "backward called before forward");
  tape_.backward(recorded_.loss);
  grads_.clear();
  grads_.reserve(leaves_.size());
  for (const auto& v : leaves_) grads_.push_back(v.grad());
  forward_pending_ = false;
  grads_ready_ = true;
}

void TrainingSession::step() {
  if (!grads_ready_) fail(ErrorCode::kState, "step called without gradients from backward");
  auto named = params_.named_tensors();
  std::vector<nn::ParamSlot> slots;
  slots.reserve(named.size());
  for (std::size_t i = 0; i < named.size(); ++i) {
    slots.push_back({named[i].first, named[i].second, &grads_[i]});
  }
  nn::adam_step(slots, params_.adam, nn::AdamConfig{.lr = hp_.lr});
  grads_ready_ = false;
}

EpochRecord TrainingSession::run_epoch(std::size_t epoch) {
  try {
    const ForwardState& st = forward();
    if (!std::isfinite(st.loss)) fail(ErrorCode::kNumeric, "loss is not finite");
    EpochRecord rec{epoch, st.e_s, st.e_a, st.loss};
    backward();
    step();
    return rec;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNumeric) throw;
    fail(ErrorCode::kNumeric, "epoch " + std::to_string(epoch) + ": " + e.what());
  }
}

TrainResult train(const AttributedGraph& g, const Hyperparams& hp) {
  hp.validate();
  return train(g, hp, ModelParams::initialize(g.dim(), hp));
}

TrainResult train(const AttributedGraph& g, const Hyperparams& hp, ModelParams initial) {
  TrainResult out{std::move(initial), {}};
  TrainingSession session(g, hp, out.params);
  out.history.reserve(hp.epochs);
  for (std::size_t e = 1; e <= hp.epochs; ++e) out.history.push_back(session.run_epoch(e));
  return out;
}

std::string format_history_csv(const TrainingHistory& history) {
  std::string out = "epoch,E_S,E_A,L\n";
  for (const auto& r : history) {
    out += std::to_string(r.epoch) + "," + format_double(r.e_s) + "," + format_double(r.e_a) +
           "," + format_double(r.loss) + "\n";
  }
  return out;
}

namespace {

// Elementwise residuals whose weighted squared sum is the loss.
struct LossTerms {
  Tensor2 structure;  // A - sigmoid(Zs·Zsᵀ), dense
  Tensor2 attribute;  // X - X̂ - λR
};

LossTerms loss_terms(const AttributedGraph& g, const ForwardState& st, double lambda) {
  return {sub(g.adjacency().to_dense(), sigmoid(matmul_nt(st.z_structure, st.z_structure))),
          sub(sub(g.attributes(), st.x_hat), scale(st.residual, lambda))};
}

// L(+) - L(-) as a sum of per-entry differences (p-m)(p+m). Summing first and
// subtracting afterwards would leave an error of ulp(L), which at h = 1e-5
// already rivals the smallest gradients of the attention stacks.
double loss_difference(const LossTerms& plus, const LossTerms& minus, double alpha) {
  auto part = [](const Tensor2& p, const Tensor2& m) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.data().size(); ++i) {
      acc += (p.data()[i] - m.data()[i]) * (p.data()[i] + m.data()[i]);
    }
    return acc;
  };
  return (1.0 - alpha) * part(plus.structure, minus.structure) +
         alpha * part(plus.attribute, minus.attribute);
}

}  // namespace

GradientCheckReport check_gradients(const AttributedGraph& g, const Hyperparams& hp,
                                    const ModelParams& params, double h, double floor) {
  ModelParams work = params;
  TrainingSession session(g, hp, work);
  session.forward();
  const std::uint64_t base_pattern = session.relu_pattern();
  session.backward();
  const std::vector<Tensor2> analytic = session.gradients();

  GradientCheckReport report;
  auto named = work.named_tensors();
  for (std::size_t p = 0; p < named.size(); ++p) {
    auto data = named[p].second->data();
    const auto grad = analytic[p].data();
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double saved = data[i];
      data[i] = saved + h;
      const auto plus = loss_terms(g, session.forward(), hp.lambda);
      const std::uint64_t plus_pattern = session.relu_pattern();
      data[i] = saved - h;
      const auto minus = loss_terms(g, session.forward(), hp.lambda);
      const std::uint64_t minus_pattern = session.relu_pattern();
      data[i] = saved;
      if (plus_pattern != base_pattern || minus_pattern != base_pattern) {
        ++report.skipped_kinks;
        continue;
      }
      const double numeric = loss_difference(plus, minus, hp.alpha) / (2.0 * h);
      const double a = grad[i];
      const double rel =
          std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
      ++report.checked;
      if (report.worst_param.empty() || rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_param = named[p].first;
        report.worst_index = i;
        report.worst_analytic = a;
        report.worst_numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace resgcn
