#include "edd/model.hpp"

#include <algorithm>
#include <cmath>

#include "edd/binio.hpp"
#include "edd/rng.hpp"

namespace edd {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::FCN: return "fcn";
    case ModelKind::RESNET: return "resnet";
    case ModelKind::FCN_LSTM: return "fcn_lstm";
  }
  throw ConfigError("unknown model kind");
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "fcn") return ModelKind::FCN;
  if (name == "resnet") return ModelKind::RESNET;
  if (name == "fcn_lstm") return ModelKind::FCN_LSTM;
  throw ConfigError("unknown model kind: " + name);
}

ModelSpec ModelSpec::fcn() { return ModelSpec{}; }

ModelSpec ModelSpec::resnet() {
  ModelSpec s;
  s.kind = ModelKind::RESNET;
  return s;
}

ModelSpec ModelSpec::fcn_lstm() {
  ModelSpec s;
  s.kind = ModelKind::FCN_LSTM;
  return s;
}

void ModelSpec::validate() const {
  if (input_channels < 1 || input_len < 1)
    throw ConfigError("model spec: input dimensions must be positive");
  if (num_classes < 2) throw ConfigError("model spec: need at least 2 classes");
  if (conv_filters.empty() || conv_filters.size() != conv_kernels.size())
    throw ConfigError("model spec: conv filter/kernel lists must match");
  for (int f : conv_filters)
    if (f < 1) throw ConfigError("model spec: conv filters must be positive");
  for (int k : conv_kernels)
    if (k < 1) throw ConfigError("model spec: conv kernels must be positive");
  if (kind == ModelKind::RESNET) {
    if (res_filters.empty())
      throw ConfigError("model spec: resnet needs at least one block");
    for (int f : res_filters)
      if (f < 1) throw ConfigError("model spec: block filters must be positive");
  }
  if (kind == ModelKind::FCN_LSTM) {
    if (sequence_len < 1)
      throw ConfigError("model spec: sequence length must be positive");
    if (lstm_hidden < 1)
      throw ConfigError("model spec: lstm hidden size must be positive");
  }
}

NeuralModel::NeuralModel(const ModelSpec& spec, std::uint64_t seed)
    : spec_(spec), seed_(seed) {
  spec_.validate();

  std::size_t offset = 0;
  auto add_group = [&](const char* kind, std::size_t count) {
    groups_.push_back(ParamGroup{kind, offset, count});
    const std::size_t at = offset;
    offset += count;
    return at;
  };
  auto add_unit = [&](int cin, int cout, int k, bool relu_after) {
    ConvUnit u{Conv1dSame(cin, cout, k), BatchNorm1d(cout), ReLU{}, relu_after,
               0, 0};
    u.p_conv = add_group("conv", std::size_t(u.conv.param_count()));
    u.p_bn = add_group("batch_norm", std::size_t(u.bn.param_count()));
    units_.push_back(std::move(u));
  };

  int dense_in = 0;
  if (spec_.kind == ModelKind::RESNET) {
    // Residual blocks: conv k8 / k5 / k3, BN after each, ReLU after the
    // first two; the shortcut (identity, or 1x1 conv + BN when the channel
    // count changes) is added before the block's final ReLU.
    int cin = spec_.input_channels;
    for (std::size_t b = 0; b < spec_.res_filters.size(); ++b) {
      const int mid = spec_.res_filters[b];
      add_unit(cin, mid, spec_.conv_kernels[0], true);
      add_unit(mid, mid, spec_.conv_kernels[std::min<std::size_t>(
                             1, spec_.conv_kernels.size() - 1)],
               true);
      add_unit(mid, mid, spec_.conv_kernels.back(), false);
      Shortcut sc;
      sc.projection = cin != mid;
      if (sc.projection) {
        sc.conv.emplace(cin, mid, 1);
        sc.bn.emplace(mid);
        sc.p_conv = add_group("conv", std::size_t(sc.conv->param_count()));
        sc.p_bn = add_group("batch_norm", std::size_t(sc.bn->param_count()));
      }
      shortcuts_.push_back(std::move(sc));
      cin = mid;
    }
    dense_in = cin;
  } else {
    int cin = spec_.input_channels;
    for (std::size_t i = 0; i < spec_.conv_filters.size(); ++i) {
      add_unit(cin, spec_.conv_filters[i], spec_.conv_kernels[i], true);
      cin = spec_.conv_filters[i];
    }
    dense_in = cin;
    if (spec_.kind == ModelKind::FCN_LSTM) {
      lstms_.emplace_back(cin, spec_.lstm_hidden);
      p_lstm_.push_back(
          add_group("lstm", std::size_t(lstms_.back().param_count())));
      lstms_.emplace_back(spec_.lstm_hidden, spec_.lstm_hidden);
      p_lstm_.push_back(
          add_group("lstm", std::size_t(lstms_.back().param_count())));
      dense_in = spec_.lstm_hidden;
    }
  }
  dense_.emplace(dense_in, spec_.num_classes);
  p_dense_ = add_group("dense", std::size_t(dense_->param_count()));

  params_.assign(offset, 0.0);
  grads_.assign(offset, 0.0);

  // Seeded initialization in allocation order.
  Rng rng(seed_);
  std::size_t unit_idx = 0;
  auto init_unit = [&](ConvUnit& u) {
    u.conv.init_params(params_.data() + u.p_conv, rng);
    u.bn.init_params(params_.data() + u.p_bn, rng);
  };
  if (spec_.kind == ModelKind::RESNET) {
    for (std::size_t b = 0; b < shortcuts_.size(); ++b) {
      for (int i = 0; i < 3; ++i) init_unit(units_[unit_idx++]);
      if (shortcuts_[b].projection) {
        shortcuts_[b].conv->init_params(params_.data() + shortcuts_[b].p_conv,
                                        rng);
        shortcuts_[b].bn->init_params(params_.data() + shortcuts_[b].p_bn,
                                      rng);
      }
    }
  } else {
    for (ConvUnit& u : units_) init_unit(u);
    for (std::size_t i = 0; i < lstms_.size(); ++i)
      lstms_[i].init_params(params_.data() + p_lstm_[i], rng);
  }
  dense_->init_params(params_.data() + p_dense_, rng);
}

Tensor NeuralModel::conv_stack_forward(Tensor h, bool train) {
  for (ConvUnit& u : units_) {
    h = u.conv.forward(h, params_.data() + u.p_conv);
    h = u.bn.forward(h, params_.data() + u.p_bn, train);
    if (u.relu_after) h = u.relu.forward(h);
  }
  return h;
}

Tensor NeuralModel::conv_stack_backward(Tensor g) {
  for (auto it = units_.rbegin(); it != units_.rend(); ++it) {
    ConvUnit& u = *it;
    if (u.relu_after) g = u.relu.backward(g);
    g = u.bn.backward(g, params_.data() + u.p_bn, grads_.data() + u.p_bn);
    g = u.conv.backward(g, params_.data() + u.p_conv,
                        grads_.data() + u.p_conv);
  }
  return g;
}

Tensor NeuralModel::forward_logits(const Tensor& x, bool train) {
  Tensor h;
  if (spec_.kind == ModelKind::FCN_LSTM) {
    if (x.rank() != 4 || x.dim(1) != spec_.sequence_len ||
        x.dim(2) != spec_.input_channels || x.dim(3) != spec_.input_len)
      throw DataError("model: expected {N, S, C, L} input");
    batch_n_ = x.dim(0);
    const int folded = batch_n_ * spec_.sequence_len;
    h = x.reshaped({folded, spec_.input_channels, spec_.input_len});
    h = conv_stack_forward(std::move(h), train);
    h = gap_.forward(h);  // {N*S, F}
    h = h.reshaped({batch_n_, spec_.sequence_len, h.dim(1)});
    for (std::size_t i = 0; i < lstms_.size(); ++i)
      h = lstms_[i].forward(h, params_.data() + p_lstm_[i]);
    Tensor last({batch_n_, spec_.lstm_hidden});
    for (int n = 0; n < batch_n_; ++n)
      for (int j = 0; j < spec_.lstm_hidden; ++j)
        last.at2(n, j) = h.at3(n, spec_.sequence_len - 1, j);
    h = std::move(last);
  } else {
    if (x.rank() != 3 || x.dim(1) != spec_.input_channels ||
        x.dim(2) != spec_.input_len)
      throw DataError("model: expected {N, C, L} input");
    batch_n_ = x.dim(0);
    if (spec_.kind == ModelKind::FCN) {
      h = conv_stack_forward(x, train);
    } else {
      h = x;
      for (std::size_t b = 0; b < shortcuts_.size(); ++b) {
        Shortcut& sc = shortcuts_[b];
        sc.block_input = h;
        for (std::size_t u = 3 * b; u < 3 * b + 3; ++u) {
          h = units_[u].conv.forward(h, params_.data() + units_[u].p_conv);
          h = units_[u].bn.forward(h, params_.data() + units_[u].p_bn, train);
          if (units_[u].relu_after) h = units_[u].relu.forward(h);
        }
        Tensor sc_out;
        if (sc.projection) {
          sc_out = sc.conv->forward(sc.block_input, params_.data() + sc.p_conv);
          sc_out = sc.bn->forward(sc_out, params_.data() + sc.p_bn, train);
        } else {
          sc_out = sc.block_input;
        }
        if (sc_out.size() != h.size())
          throw DataError("model: residual shape mismatch");
        for (std::size_t i = 0; i < h.data.size(); ++i)
          h.data[i] += sc_out.data[i];
        h = sc.post_relu.forward(h);
      }
    }
    h = gap_.forward(h);
  }
  return dense_->forward(h, params_.data() + p_dense_);
}

Tensor NeuralModel::backward_logits(const Tensor& grad_logits) {
  Tensor g = dense_->backward(grad_logits, params_.data() + p_dense_,
                              grads_.data() + p_dense_);
  if (spec_.kind == ModelKind::FCN_LSTM) {
    Tensor seq_grad({batch_n_, spec_.sequence_len, spec_.lstm_hidden});
    for (int n = 0; n < batch_n_; ++n)
      for (int j = 0; j < spec_.lstm_hidden; ++j)
        seq_grad.at3(n, spec_.sequence_len - 1, j) = g.at2(n, j);
    g = std::move(seq_grad);
    for (std::size_t i = lstms_.size(); i-- > 0;)
      g = lstms_[i].backward(g, params_.data() + p_lstm_[i],
                             grads_.data() + p_lstm_[i]);
    const int folded = batch_n_ * spec_.sequence_len;
    g = g.reshaped({folded, g.dim(2)});
    g = gap_.backward(g);
    g = conv_stack_backward(std::move(g));
    return g.reshaped(
        {batch_n_, spec_.sequence_len, spec_.input_channels, spec_.input_len});
  }
  if (spec_.kind == ModelKind::FCN) {
    g = gap_.backward(g);
    return conv_stack_backward(std::move(g));
  }
  // RESNET
  g = gap_.backward(g);
  for (std::size_t b = shortcuts_.size(); b-- > 0;) {
    Shortcut& sc = shortcuts_[b];
    g = sc.post_relu.backward(g);
    Tensor g_main = g;
    for (std::size_t u = 3 * b + 3; u-- > 3 * b;) {
      if (units_[u].relu_after) g_main = units_[u].relu.backward(g_main);
      g_main = units_[u].bn.backward(g_main, params_.data() + units_[u].p_bn,
                                     grads_.data() + units_[u].p_bn);
      g_main = units_[u].conv.backward(g_main,
                                       params_.data() + units_[u].p_conv,
                                       grads_.data() + units_[u].p_conv);
    }
    if (sc.projection) {
      Tensor g_sc = sc.bn->backward(g, params_.data() + sc.p_bn,
                                    grads_.data() + sc.p_bn);
      g_sc = sc.conv->backward(g_sc, params_.data() + sc.p_conv,
                               grads_.data() + sc.p_conv);
      for (std::size_t i = 0; i < g_main.data.size(); ++i)
        g_main.data[i] += g_sc.data[i];
    } else {
      for (std::size_t i = 0; i < g_main.data.size(); ++i)
        g_main.data[i] += g.data[i];
    }
    g = std::move(g_main);
  }
  return g;
}

Eigen::MatrixXd NeuralModel::forward_probs(const Tensor& x, bool train) {
  const Tensor logits = forward_logits(x, train);
  const int n = logits.dim(0);
  const int k = logits.dim(1);
  Eigen::MatrixXd probs(n, k);
  for (int i = 0; i < n; ++i) {
    double mx = logits.at2(i, 0);
    for (int j = 1; j < k; ++j) mx = std::max(mx, logits.at2(i, j));
    double denom = 0.0;
    for (int j = 0; j < k; ++j) denom += std::exp(logits.at2(i, j) - mx);
    for (int j = 0; j < k; ++j)
      probs(i, j) = std::exp(logits.at2(i, j) - mx) / denom;
  }
  return probs;
}

double NeuralModel::loss_and_grad(const Tensor& x,
                                  const std::vector<int>& targets) {
  std::fill(grads_.begin(), grads_.end(), 0.0);
  const Tensor logits = forward_logits(x, /*train=*/true);
  const double loss = xent_.forward(logits, targets);
  backward_logits(xent_.backward(targets));
  return loss;
}

std::vector<State> NeuralModel::predict(const Tensor& x) {
  const Eigen::MatrixXd probs = forward_probs(x, /*train=*/false);
  std::vector<State> out(std::size_t(probs.rows()));
  for (Eigen::Index i = 0; i < probs.rows(); ++i)
    out[std::size_t(i)] = probs(i, int(State::DISTRACTED)) >=
                                  probs(i, int(State::FOCUSED))
                              ? State::DISTRACTED
                              : State::FOCUSED;
  return out;
}

std::vector<BatchNorm1d*> NeuralModel::norm_layers() {
  std::vector<BatchNorm1d*> out;
  for (ConvUnit& u : units_) out.push_back(&u.bn);
  for (Shortcut& sc : shortcuts_)
    if (sc.projection) out.push_back(&*sc.bn);
  return out;
}

std::vector<const BatchNorm1d*> NeuralModel::norm_layers() const {
  std::vector<const BatchNorm1d*> out;
  for (const ConvUnit& u : units_) out.push_back(&u.bn);
  for (const Shortcut& sc : shortcuts_)
    if (sc.projection) out.push_back(&*sc.bn);
  return out;
}

std::vector<double> NeuralModel::norm_state() const {
  std::vector<double> state;
  for (const BatchNorm1d* bn : norm_layers()) {
    state.insert(state.end(), bn->running_mean.begin(), bn->running_mean.end());
    state.insert(state.end(), bn->running_var.begin(), bn->running_var.end());
    state.push_back(bn->initialized ? 1.0 : 0.0);
  }
  return state;
}

void NeuralModel::set_norm_state(const std::vector<double>& state) {
  std::size_t pos = 0;
  for (BatchNorm1d* bn : norm_layers()) {
    const std::size_t c = bn->running_mean.size();
    if (pos + 2 * c + 1 > state.size())
      throw DataError("model: batch-norm state size mismatch");
    std::copy_n(state.begin() + long(pos), c, bn->running_mean.begin());
    pos += c;
    std::copy_n(state.begin() + long(pos), c, bn->running_var.begin());
    pos += c;
    bn->initialized = state[pos++] != 0.0;
  }
  if (pos != state.size())
    throw DataError("model: batch-norm state size mismatch");
}

// ---------------------------------------------------------------------------
// EDN1 serialization

namespace {

void write_int_list(BinaryWriter& w, const std::vector<int>& v) {
  w.u32(static_cast<std::uint32_t>(v.size()));
  for (int x : v) w.u32(static_cast<std::uint32_t>(x));
}

std::vector<int> read_int_list(BinaryReader& r) {
  std::vector<int> v(r.u32());
  for (int& x : v) x = static_cast<int>(r.u32());
  return v;
}

}  // namespace

void save_neural_model(const NeuralModel& model, const std::string& path) {
  BinaryWriter w(path);
  w.magic("EDN1");
  w.u32(1);  // version
  const ModelSpec& s = model.spec();
  w.u32(static_cast<std::uint32_t>(s.kind));
  w.u32(static_cast<std::uint32_t>(s.input_channels));
  w.u32(static_cast<std::uint32_t>(s.input_len));
  w.u32(static_cast<std::uint32_t>(s.sequence_len));
  w.u32(static_cast<std::uint32_t>(s.num_classes));
  write_int_list(w, s.conv_filters);
  write_int_list(w, s.conv_kernels);
  write_int_list(w, s.res_filters);
  w.u32(static_cast<std::uint32_t>(s.lstm_hidden));
  w.u64(model.seed());

  w.u64(model.params().size());
  w.f64_array(model.params());
  const std::vector<double> norm = model.norm_state();
  w.u64(norm.size());
  w.f64_array(norm);

  w.u64(model.history.size());
  for (const EpochStats& e : model.history) {
    w.u32(static_cast<std::uint32_t>(e.epoch));
    w.f64(e.train_loss);
    w.f64(e.train_acc);
    w.f64(e.val_loss);
    w.f64(e.val_acc);
  }
  w.close();
}

NeuralModel load_neural_model(const std::string& path) {
  BinaryReader r(path);
  r.expect_magic("EDN1");
  const std::uint32_t version = r.u32();
  if (version != 1)
    throw DataError(path + ": unsupported model version " +
                    std::to_string(version));
  ModelSpec s;
  const std::uint32_t kind = r.u32();
  if (kind > 2) throw DataError(path + ": unknown model kind");
  s.kind = static_cast<ModelKind>(kind);
  s.input_channels = static_cast<int>(r.u32());
  s.input_len = static_cast<int>(r.u32());
  s.sequence_len = static_cast<int>(r.u32());
  s.num_classes = static_cast<int>(r.u32());
  s.conv_filters = read_int_list(r);
  s.conv_kernels = read_int_list(r);
  s.res_filters = read_int_list(r);
  s.lstm_hidden = static_cast<int>(r.u32());
  const std::uint64_t seed = r.u64();

  NeuralModel model(s, seed);
  const std::uint64_t n_params = r.u64();
  if (n_params != model.params().size())
    throw DataError(path + ": parameter count mismatch");
  r.f64_array(model.params().data(), n_params);
  const std::uint64_t n_norm = r.u64();
  model.set_norm_state(r.f64_vector(n_norm));

  model.history.resize(r.u64());
  for (EpochStats& e : model.history) {
    e.epoch = static_cast<int>(r.u32());
    e.train_loss = r.f64();
    e.train_acc = r.f64();
    e.val_loss = r.f64();
    e.val_acc = r.f64();
  }
  return model;
}

}  // namespace edd
