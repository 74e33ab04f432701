// Copyright 2026 The Setxpand Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "setxpand/mlp.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "setxpand/random.h"

namespace setxpand {
namespace {

double Activate(Activation activation, double a) {
  return activation == Activation::kRelu ? (a > 0.0 ? a : 0.0) : std::tanh(a);
}

double ActivationDerivative(Activation activation, double a, double h) {
  return activation == Activation::kRelu ? (a > 0.0 ? 1.0 : 0.0) : 1.0 - h * h;
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z))
double Softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double OutputLogit(const MlpParams &p, std::span<const double> x,
                   std::vector<double> *pre, std::vector<double> *act) {
  pre->assign(p.hidden, 0.0);
  act->assign(p.hidden, 0.0);
  for (int h = 0; h < p.hidden; ++h) {
    double a = p.bias_hidden[h];
    for (int i = 0; i < p.input_dim; ++i) a += p.w_in(i, h) * x[i];
    (*pre)[h] = a;
    (*act)[h] = Activate(p.activation, a);
  }
  double z = p.bias_out;
  for (int h = 0; h < p.hidden; ++h) z += p.weights_out[h] * (*act)[h];
  return z;
}

}  // namespace

std::string_view ActivationName(Activation activation) {
  return activation == Activation::kRelu ? "relu" : "tanh";
}

MlpParams MlpParams::Zeros(int input_dim, int hidden, Activation activation) {
  MlpParams p;
  p.input_dim = input_dim;
  p.hidden = hidden;
  p.weights_in.assign(static_cast<size_t>(input_dim) * hidden, 0.0);
  p.bias_hidden.assign(hidden, 0.0);
  p.weights_out.assign(hidden, 0.0);
  p.activation = activation;
  return p;
}

MlpParams MlpParams::Random(int input_dim, uint64_t seed, int hidden,
                            Activation activation) {
  MlpParams p = Zeros(input_dim, hidden, activation);
  p.seed = seed;
  Rng rng(seed);
  const double limit_in = std::sqrt(6.0 / (input_dim + hidden));
  for (double &w : p.weights_in) w = (2.0 * rng.Uniform() - 1.0) * limit_in;
  const double limit_out = std::sqrt(6.0 / (hidden + 1));
  for (double &w : p.weights_out) w = (2.0 * rng.Uniform() - 1.0) * limit_out;
  return p;
}

double &MlpParams::parameter(size_t i) {
  if (i < weights_in.size()) return weights_in[i];
  i -= weights_in.size();
  if (i < bias_hidden.size()) return bias_hidden[i];
  i -= bias_hidden.size();
  if (i < weights_out.size()) return weights_out[i];
  i -= weights_out.size();
  if (i == 0) return bias_out;
  throw std::out_of_range("parameter index");
}

bool MlpParams::AllFinite() const {
  for (const auto *v : {&weights_in, &bias_hidden, &weights_out}) {
    for (double x : *v) {
      if (!std::isfinite(x)) return false;
    }
  }
  return std::isfinite(bias_out);
}

double MlpForward(const MlpParams &params, std::span<const double> x) {
  if (static_cast<int>(x.size()) != params.input_dim) {
    throw std::invalid_argument("MLP input dimension mismatch");
  }
  std::vector<double> pre, act;
  return Sigmoid(OutputLogit(params, x, &pre, &act));
}

double MlpLoss(const MlpParams &params,
               std::span<const std::vector<double>> inputs,
               std::span<const double> labels, MlpParams *gradient) {
  if (inputs.size() != labels.size() || inputs.empty()) {
    throw std::invalid_argument("MlpLoss needs matching, non-empty batches");
  }
  if (gradient != nullptr) {
    *gradient = MlpParams::Zeros(params.input_dim, params.hidden,
                                 params.activation);
  }
  const double scale = 1.0 / static_cast<double>(inputs.size());
  std::vector<double> pre, act;
  double loss = 0.0;
  for (size_t n = 0; n < inputs.size(); ++n) {
    const std::vector<double> &x = inputs[n];
    const double y = labels[n];
    const double z = OutputLogit(params, x, &pre, &act);
    loss += Softplus(z) - y * z;
    if (gradient == nullptr) continue;
    const double dz = (Sigmoid(z) - y) * scale;
    gradient->bias_out += dz;
    for (int h = 0; h < params.hidden; ++h) {
      gradient->weights_out[h] += dz * act[h];
      const double da = dz * params.weights_out[h] *
                        ActivationDerivative(params.activation, pre[h], act[h]);
      if (da == 0.0) continue;
      gradient->bias_hidden[h] += da;
      for (int i = 0; i < params.input_dim; ++i) gradient->w_in(i, h) += da * x[i];
    }
  }
  return loss * scale;
}

FeatureScaler FeatureScaler::Identity(int dim) {
  return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

FeatureScaler FeatureScaler::Fit(std::span<const LabeledVector> examples) {
  const int dim = static_cast<int>(examples.front().x.size());
  FeatureScaler s = Identity(dim);
  std::vector<double> sq(dim, 0.0);
  for (const LabeledVector &e : examples) {
    for (int i = 0; i < dim; ++i) s.mean[i] += e.x[i];
  }
  for (double &m : s.mean) m /= static_cast<double>(examples.size());
  for (const LabeledVector &e : examples) {
    for (int i = 0; i < dim; ++i) {
      const double d = e.x[i] - s.mean[i];
      sq[i] += d * d;
    }
  }
  for (int i = 0; i < dim; ++i) {
    const double sd = std::sqrt(sq[i] / static_cast<double>(examples.size()));
    s.scale[i] = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

std::vector<double> FeatureScaler::Apply(std::span<const double> x) const {
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean[i]) / scale[i];
  return out;
}

double MlpModel::Predict(std::span<const double> x) const {
  return MlpForward(params, scaler.Apply(x));
}

void MlpModel::Save(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  char buffer[40];
  auto write_block = [&](const char *name, int rows, int cols,
                         const std::vector<double> &values) {
    out << name << ' ' << rows << ' ' << cols << '\n';
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        std::snprintf(buffer, sizeof(buffer), "%.17g", values[r * cols + c]);
        out << (c > 0 ? " " : "") << buffer;
      }
      out << '\n';
    }
  };
  out << "mlp " << params.input_dim << ' ' << params.hidden << ' '
      << ActivationName(params.activation) << ' ' << params.seed << '\n';
  write_block("scaler_mean", 1, params.input_dim, scaler.mean);
  write_block("scaler_scale", 1, params.input_dim, scaler.scale);
  write_block("weights_in", params.input_dim, params.hidden, params.weights_in);
  write_block("bias_hidden", 1, params.hidden, params.bias_hidden);
  write_block("weights_out", 1, params.hidden, params.weights_out);
  write_block("bias_out", 1, 1, {params.bias_out});
}

MlpModel MlpModel::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string tag, activation;
  int input_dim = 0, hidden = 0;
  uint64_t seed = 0;
  if (!(in >> tag >> input_dim >> hidden >> activation >> seed) || tag != "mlp") {
    throw std::runtime_error("bad MLP header in " + path);
  }
  MlpModel model;
  model.params = MlpParams::Zeros(
      input_dim, hidden,
      activation == "tanh" ? Activation::kTanh : Activation::kRelu);
  model.params.seed = seed;
  auto read_block = [&](const char *name, int rows, int cols) {
    std::string got;
    int r = 0, c = 0;
    if (!(in >> got >> r >> c) || got != name || r != rows || c != cols) {
      throw std::runtime_error(std::string("bad MLP block ") + name + " in " + path);
    }
    std::vector<double> values(static_cast<size_t>(rows) * cols);
    for (double &v : values) {
      std::string token;
      if (!(in >> token)) throw std::runtime_error("truncated MLP file " + path);
      v = std::strtod(token.c_str(), nullptr);
    }
    return values;
  };
  model.scaler.mean = read_block("scaler_mean", 1, input_dim);
  model.scaler.scale = read_block("scaler_scale", 1, input_dim);
  model.params.weights_in = read_block("weights_in", input_dim, hidden);
  model.params.bias_hidden = read_block("bias_hidden", 1, hidden);
  model.params.weights_out = read_block("weights_out", 1, hidden);
  model.params.bias_out = read_block("bias_out", 1, 1)[0];
  return model;
}

MlpModel TrainMlp(std::span<const LabeledVector> examples,
                  const MlpTrainConfig &config) {
  std::vector<size_t> positives, negatives;
  for (size_t i = 0; i < examples.size(); ++i) {
    (examples[i].positive ? positives : negatives).push_back(i);
  }
  if (positives.empty() || negatives.empty()) {
    throw std::invalid_argument("MLP training needs both classes");
  }
  Rng rng(config.seed);
  if (config.balance) {
    const size_t n = std::min(positives.size(), negatives.size());
    positives = rng.Sample(positives, n);
    negatives = rng.Sample(negatives, n);
  }
  std::vector<size_t> chosen = positives;
  chosen.insert(chosen.end(), negatives.begin(), negatives.end());
  std::sort(chosen.begin(), chosen.end());

  std::vector<LabeledVector> selected;
  selected.reserve(chosen.size());
  for (size_t i : chosen) selected.push_back(examples[i]);

  MlpModel model;
  model.positives_used = static_cast<int64_t>(positives.size());
  model.negatives_used = static_cast<int64_t>(negatives.size());
  const int dim = static_cast<int>(selected.front().x.size());
  model.scaler = config.standardize ? FeatureScaler::Fit(selected)
                                    : FeatureScaler::Identity(dim);
  std::vector<std::vector<double>> inputs;
  std::vector<double> labels;
  inputs.reserve(selected.size());
  for (const LabeledVector &e : selected) {
    inputs.push_back(model.scaler.Apply(e.x));
    labels.push_back(e.positive ? 1.0 : 0.0);
  }

  model.params = MlpParams::Random(dim, config.seed, kHiddenUnits,
                                   config.activation);
  const size_t batch = config.batch <= 0
                           ? inputs.size()
                           : static_cast<size_t>(config.batch);
  std::vector<size_t> order(inputs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<std::vector<double>> batch_inputs;
  std::vector<double> batch_labels;
  MlpParams gradient;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (batch < inputs.size()) rng.Shuffle(order);
    for (size_t start = 0; start < order.size(); start += batch) {
      const size_t end = std::min(order.size(), start + batch);
      batch_inputs.clear();
      batch_labels.clear();
      for (size_t i = start; i < end; ++i) {
        batch_inputs.push_back(inputs[order[i]]);
        batch_labels.push_back(labels[order[i]]);
      }
      MlpLoss(model.params, batch_inputs, batch_labels, &gradient);
      for (size_t p = 0; p < model.params.num_parameters(); ++p) {
        model.params.parameter(p) -= config.lr * gradient.parameter(p);
      }
    }
    model.epoch_loss.push_back(MlpLoss(model.params, inputs, labels, nullptr));
  }
  return model;
}

}  // namespace setxpand
