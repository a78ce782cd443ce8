/* Copyright 2026 The Trinity-Lite Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "trinity/kernel/model.hpp"
#include "trinity/kernel/layers.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "trinity/error.hpp"
#include "trinity/util/rng.hpp"

namespace trinity::kernel {
namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr int kEnc1 = 16;
constexpr int kEnc2 = 32;
constexpr int kEnc3 = 64;

// Zero-padded copy, one row per channel over the (H+2) x (W+2) grid.
template <typename T>
RowMat<T> Pad(const Tensor<T>& in) {
  const int wp = in.width + 2;
  RowMat<T> p = RowMat<T>::Zero(in.channels, static_cast<Eigen::Index>(in.height + 2) * wp);
  for (int c = 0; c < in.channels; ++c) {
    for (int y = 0; y < in.height; ++y) {
      const T* src = &in.data[(static_cast<std::size_t>(c) * in.height + y) * in.width];
      std::copy(src, src + in.width, p.row(c).data() + (y + 1) * wp + 1);
    }
  }
  return p;
}

template <typename T>
void GatherTap(const ParamTensor<T>& w, int dy, int dx, RowMat<T>& tap) {
  const int cout = w.dims[0], cin = w.dims[1];
  tap.resize(cout, cin);
  for (int o = 0; o < cout; ++o) {
    for (int i = 0; i < cin; ++i) tap(o, i) = w.values[((o * cin + i) * 3 + dy) * 3 + dx];
  }
}

}  // namespace

// 3x3 stride-1 zero-padded convolution as nine shifted GEMMs. Output
// position (y, x) lives at column y * (W+2) + x of the accumulator, so each
// tap reads a contiguous column range of the padded input; columns with
// x >= W are discarded.
template <typename T>
Tensor<T> Conv3x3(const Tensor<T>& in, const ParamTensor<T>& w, const ParamTensor<T>& b) {
  const int cout = w.dims[0];
  const int h = in.height, wd = in.width, wp = wd + 2;
  const Eigen::Index n = static_cast<Eigen::Index>(h - 1) * wp + wd;
  const RowMat<T> p = Pad(in);
  RowMat<T> acc = RowMat<T>::Zero(cout, n);
  RowMat<T> tap;
  for (int dy = 0; dy < 3; ++dy) {
    for (int dx = 0; dx < 3; ++dx) {
      GatherTap(w, dy, dx, tap);
      acc.noalias() += tap * p.middleCols(dy * wp + dx, n);
    }
  }
  Tensor<T> out(cout, h, wd);
  for (int o = 0; o < cout; ++o) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < wd; ++x) out.at(o, y, x) = acc(o, y * wp + x) + b.values[o];
    }
  }
  return out;
}

template <typename T>
void Conv3x3Backward(const Tensor<T>& in, const ParamTensor<T>& w, const Tensor<T>& dout,
                     ParamTensor<T>& dw, ParamTensor<T>& db, Tensor<T>* din) {
  const int cout = w.dims[0], cin = w.dims[1];
  const int h = in.height, wd = in.width, wp = wd + 2;
  const Eigen::Index n = static_cast<Eigen::Index>(h - 1) * wp + wd;
  const RowMat<T> p = Pad(in);
  RowMat<T> d = RowMat<T>::Zero(cout, n);
  for (int o = 0; o < cout; ++o) {
    T sum = T(0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < wd; ++x) {
        d(o, y * wp + x) = dout.at(o, y, x);
        sum += dout.at(o, y, x);
      }
    }
    db.values[o] += sum;
  }
  RowMat<T> dp;
  if (din) dp = RowMat<T>::Zero(cin, p.cols());
  RowMat<T> tap, g;
  for (int dy = 0; dy < 3; ++dy) {
    for (int dx = 0; dx < 3; ++dx) {
      const Eigen::Index off = dy * wp + dx;
      g.noalias() = d * p.middleCols(off, n).transpose();
      for (int o = 0; o < cout; ++o) {
        for (int i = 0; i < cin; ++i) dw.values[((o * cin + i) * 3 + dy) * 3 + dx] += g(o, i);
      }
      if (din) {
        GatherTap(w, dy, dx, tap);
        dp.middleCols(off, n).noalias() += tap.transpose() * d;
      }
    }
  }
  if (din) {
    *din = Tensor<T>(cin, h, wd);
    for (int i = 0; i < cin; ++i) {
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < wd; ++x) din->at(i, y, x) = dp(i, (y + 1) * wp + x + 1);
      }
    }
  }
}

template Tensor<float> Conv3x3(const Tensor<float>&, const ParamTensor<float>&,
                              const ParamTensor<float>&);
template Tensor<double> Conv3x3(const Tensor<double>&, const ParamTensor<double>&,
                               const ParamTensor<double>&);
template void Conv3x3Backward(const Tensor<float>&, const ParamTensor<float>&,
                              const Tensor<float>&, ParamTensor<float>&, ParamTensor<float>&,
                              Tensor<float>*);
template void Conv3x3Backward(const Tensor<double>&, const ParamTensor<double>&,
                              const Tensor<double>&, ParamTensor<double>&, ParamTensor<double>&,
                              Tensor<double>*);

namespace {

template <typename T>
Tensor<T> Relu(const Tensor<T>& z) {
  Tensor<T> a = z;
  for (auto& v : a.data) v = v > T(0) ? v : T(0);
  return a;
}

template <typename T>
void ReluBackwardInPlace(const Tensor<T>& z, Tensor<T>& grad) {
  for (std::size_t i = 0; i < grad.data.size(); ++i) {
    if (!(z.data[i] > T(0))) grad.data[i] = T(0);
  }
}

// 2x2 max pool; ties keep the first window element in row-major order.
template <typename T>
Tensor<T> MaxPool(const Tensor<T>& in, std::vector<std::uint8_t>& arg) {
  Tensor<T> out(in.channels, in.height / 2, in.width / 2);
  arg.assign(out.size(), 0);
  std::size_t k = 0;
  for (int c = 0; c < out.channels; ++c) {
    for (int y = 0; y < out.height; ++y) {
      for (int x = 0; x < out.width; ++x, ++k) {
        T best = in.at(c, 2 * y, 2 * x);
        std::uint8_t which = 0;
        for (std::uint8_t j = 1; j < 4; ++j) {
          const T v = in.at(c, 2 * y + j / 2, 2 * x + j % 2);
          if (v > best) {
            best = v;
            which = j;
          }
        }
        out.at(c, y, x) = best;
        arg[k] = which;
      }
    }
  }
  return out;
}

template <typename T>
Tensor<T> MaxPoolBackward(const Tensor<T>& dout, const std::vector<std::uint8_t>& arg) {
  Tensor<T> din(dout.channels, dout.height * 2, dout.width * 2);
  std::size_t k = 0;
  for (int c = 0; c < dout.channels; ++c) {
    for (int y = 0; y < dout.height; ++y) {
      for (int x = 0; x < dout.width; ++x, ++k) {
        din.at(c, 2 * y + arg[k] / 2, 2 * x + arg[k] % 2) += dout.at(c, y, x);
      }
    }
  }
  return din;
}

template <typename T>
Tensor<T> Upsample(const Tensor<T>& in) {
  Tensor<T> out(in.channels, in.height * 2, in.width * 2);
  for (int c = 0; c < out.channels; ++c) {
    for (int y = 0; y < out.height; ++y) {
      for (int x = 0; x < out.width; ++x) out.at(c, y, x) = in.at(c, y / 2, x / 2);
    }
  }
  return out;
}

template <typename T>
Tensor<T> UpsampleBackward(const Tensor<T>& dout) {
  Tensor<T> din(dout.channels, dout.height / 2, dout.width / 2);
  for (int c = 0; c < dout.channels; ++c) {
    for (int y = 0; y < dout.height; ++y) {
      for (int x = 0; x < dout.width; ++x) din.at(c, y / 2, x / 2) += dout.at(c, y, x);
    }
  }
  return din;
}

template <typename T>
void AddInPlace(Tensor<T>& a, const Tensor<T>& b) {
  for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
}

template <typename T>
Eigen::Map<const RowMat<T>> AsMatrix(const Tensor<T>& t) {
  return {t.data.data(), t.channels, static_cast<Eigen::Index>(t.plane_size())};
}

}  // namespace

const std::vector<ArchitectureInfo>& ArchitectureCatalog() {
  static const std::vector<ArchitectureInfo> catalog = {
      {kFcnMini, "3-level conv encoder, nearest-upsampling conv decoder, 1x1 task heads"},
      {kUnetMini, "fcn_mini with additive encoder-to-decoder skip connections"},
  };
  return catalog;
}

void ValidateModelSpec(const ModelSpec& spec) {
  const auto& cat = ArchitectureCatalog();
  if (std::none_of(cat.begin(), cat.end(), [&](const auto& a) {
        return a.architecture_id == spec.architecture_id;
      })) {
    throw ValidationError("unknown architecture_id '" + spec.architecture_id + "'");
  }
  if (spec.in_channels <= 0) throw ValidationError("in_channels must be positive");
  labels::ValidateTaskSpecs(spec.tasks);
}

void to_json(nlohmann::json& j, const ModelSpec& s) {
  j = nlohmann::json{{"architecture_id", s.architecture_id},
                     {"in_channels", s.in_channels},
                     {"tasks", s.tasks}};
}

void from_json(const nlohmann::json& j, ModelSpec& s) {
  j.at("architecture_id").get_to(s.architecture_id);
  j.at("in_channels").get_to(s.in_channels);
  j.at("tasks").get_to(s.tasks);
}

template <typename T>
std::size_t Parameters<T>::Count() const {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.values.size();
  return n;
}

template <typename T>
const ParamTensor<T>& Parameters<T>::Find(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return t;
  }
  throw NotFoundError("no parameter named '" + name + "'");
}

template <typename T>
ParamTensor<T>& Parameters<T>::Find(const std::string& name) {
  return const_cast<ParamTensor<T>&>(std::as_const(*this).Find(name));
}

template <typename T>
Parameters<T> Parameters<T>::ZerosLike() const {
  Parameters<T> out;
  out.tensors.reserve(tensors.size());
  for (const auto& t : tensors) {
    out.tensors.push_back({t.name, t.dims, std::vector<T>(t.values.size(), T(0))});
  }
  return out;
}

std::vector<std::pair<std::string, std::vector<int>>> ParameterLayout(const ModelSpec& spec) {
  std::vector<std::pair<std::string, std::vector<int>>> out;
  auto conv = [&out](const std::string& name, int cout, int cin, int k) {
    out.push_back({name + ".weight", {cout, cin, k, k}});
    out.push_back({name + ".bias", {cout}});
  };
  conv("enc1", kEnc1, spec.in_channels, 3);
  conv("enc2", kEnc2, kEnc1, 3);
  conv("enc3", kEnc3, kEnc2, 3);
  conv("dec1", kEnc2, kEnc3, 3);
  conv("dec2", kEnc1, kEnc2, 3);
  for (std::size_t t = 0; t < spec.tasks.size(); ++t) {
    conv("head." + std::to_string(t), spec.tasks[t].class_count, kEnc1, 1);
  }
  return out;
}

Parameters<float> InitParameters(const ModelSpec& spec, std::uint64_t init_seed) {
  ValidateModelSpec(spec);
  util::Lcg64 rng(init_seed);
  Parameters<float> params;
  for (auto& [name, dims] : ParameterLayout(spec)) {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    ParamTensor<float> t{name, dims, std::vector<float>(n, 0.0f)};
    if (dims.size() == 4) {
      const double fan_in = static_cast<double>(dims[1]) * dims[2] * dims[3];
      const double bound = std::sqrt(6.0 / fan_in);
      for (auto& v : t.values) v = static_cast<float>(bound * (2.0 * rng.NextUnit() - 1.0));
    }
    params.tensors.push_back(std::move(t));
  }
  return params;
}

template <typename T>
SegmentationModel<T>::SegmentationModel(ModelSpec spec, Parameters<T> params)
    : spec_(std::move(spec)), params_(std::move(params)) {
  ValidateModelSpec(spec_);
  const auto layout = ParameterLayout(spec_);
  if (layout.size() != params_.tensors.size()) {
    throw ValidationError("parameter set does not match the model spec");
  }
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto& t = params_.tensors[i];
    std::size_t n = 1;
    for (int d : layout[i].second) n *= static_cast<std::size_t>(d);
    if (t.name != layout[i].first || t.dims != layout[i].second || t.values.size() != n) {
      throw ValidationError("parameter '" + t.name + "' does not match the model spec");
    }
  }
}

template <typename T>
std::vector<Tensor<T>> SegmentationModel<T>::Forward(const Tensor<T>& image,
                                                     ForwardCache<T>* cache) const {
  if (image.channels != spec_.in_channels) {
    throw ValidationError("image has " + std::to_string(image.channels) +
                          " channels; model expects " + std::to_string(spec_.in_channels));
  }
  if (image.height <= 0 || image.width <= 0 || image.height % 4 || image.width % 4) {
    throw ValidationError("image height and width must be positive multiples of 4");
  }
  ForwardCache<T> local;
  ForwardCache<T>& c = cache ? *cache : local;
  const auto& p = params_;
  c.input = image;
  c.z1 = Conv3x3(image, p.Find("enc1.weight"), p.Find("enc1.bias"));
  c.a1 = Relu(c.z1);
  c.p1 = MaxPool(c.a1, c.pool1_arg);
  c.z2 = Conv3x3(c.p1, p.Find("enc2.weight"), p.Find("enc2.bias"));
  c.a2 = Relu(c.z2);
  c.p2 = MaxPool(c.a2, c.pool2_arg);
  c.z3 = Conv3x3(c.p2, p.Find("enc3.weight"), p.Find("enc3.bias"));
  c.a3 = Relu(c.z3);
  c.u3 = Upsample(c.a3);
  c.z4 = Conv3x3(c.u3, p.Find("dec1.weight"), p.Find("dec1.bias"));
  if (unet()) AddInPlace(c.z4, c.a2);
  c.a4 = Relu(c.z4);
  c.u4 = Upsample(c.a4);
  c.z5 = Conv3x3(c.u4, p.Find("dec2.weight"), p.Find("dec2.bias"));
  if (unet()) AddInPlace(c.z5, c.a1);
  c.a5 = Relu(c.z5);

  std::vector<Tensor<T>> logits;
  const auto a5 = AsMatrix(c.a5);
  for (std::size_t t = 0; t < spec_.tasks.size(); ++t) {
    const std::string head = "head." + std::to_string(t);
    const auto& w = p.Find(head + ".weight");
    const auto& b = p.Find(head + ".bias");
    const int k = w.dims[0];
    Eigen::Map<const RowMat<T>> wm(w.values.data(), k, w.dims[1]);
    Tensor<T> out(k, image.height, image.width);
    Eigen::Map<RowMat<T>> om(out.data.data(), k, static_cast<Eigen::Index>(out.plane_size()));
    om.noalias() = wm * a5;
    for (int o = 0; o < k; ++o) om.row(o).array() += b.values[o];
    logits.push_back(std::move(out));
  }
  return logits;
}

template <typename T>
Parameters<T> SegmentationModel<T>::Backward(const ForwardCache<T>& c,
                                             const std::vector<Tensor<T>>& upstream) const {
  if (upstream.size() != spec_.tasks.size()) {
    throw ValidationError("upstream gradient count does not match the task count");
  }
  Parameters<T> grads = params_.ZerosLike();
  const auto a5 = AsMatrix(c.a5);
  Tensor<T> d5(c.a5.channels, c.a5.height, c.a5.width);
  Eigen::Map<RowMat<T>> d5m(d5.data.data(), d5.channels, static_cast<Eigen::Index>(d5.plane_size()));
  for (std::size_t t = 0; t < spec_.tasks.size(); ++t) {
    const std::string head = "head." + std::to_string(t);
    const auto& w = params_.Find(head + ".weight");
    const int k = w.dims[0];
    if (upstream[t].channels != k || upstream[t].height != c.a5.height ||
        upstream[t].width != c.a5.width) {
      throw ValidationError("upstream gradient shape mismatch for task " + std::to_string(t));
    }
    const auto g = AsMatrix(upstream[t]);
    Eigen::Map<const RowMat<T>> wm(w.values.data(), k, w.dims[1]);
    auto& gw = grads.Find(head + ".weight");
    Eigen::Map<RowMat<T>> gwm(gw.values.data(), k, w.dims[1]);
    gwm.noalias() += g * a5.transpose();
    auto& gb = grads.Find(head + ".bias");
    for (int o = 0; o < k; ++o) {
      T sum = T(0);
      for (T v : upstream[t].plane(o)) sum += v;
      gb.values[o] += sum;
    }
    d5m.noalias() += wm.transpose() * g;
  }

  ReluBackwardInPlace(c.z5, d5);
  Tensor<T> du4;
  Conv3x3Backward(c.u4, params_.Find("dec2.weight"), d5, grads.Find("dec2.weight"),
                  grads.Find("dec2.bias"), &du4);
  Tensor<T> d4 = UpsampleBackward(du4);
  ReluBackwardInPlace(c.z4, d4);
  Tensor<T> du3;
  Conv3x3Backward(c.u3, params_.Find("dec1.weight"), d4, grads.Find("dec1.weight"),
                  grads.Find("dec1.bias"), &du3);
  Tensor<T> d3 = UpsampleBackward(du3);
  ReluBackwardInPlace(c.z3, d3);
  Tensor<T> dp2;
  Conv3x3Backward(c.p2, params_.Find("enc3.weight"), d3, grads.Find("enc3.weight"),
                  grads.Find("enc3.bias"), &dp2);
  Tensor<T> d2 = MaxPoolBackward(dp2, c.pool2_arg);
  if (unet()) AddInPlace(d2, d4);
  ReluBackwardInPlace(c.z2, d2);
  Tensor<T> dp1;
  Conv3x3Backward(c.p1, params_.Find("enc2.weight"), d2, grads.Find("enc2.weight"),
                  grads.Find("enc2.bias"), &dp1);
  Tensor<T> d1 = MaxPoolBackward(dp1, c.pool1_arg);
  if (unet()) AddInPlace(d1, d5);
  ReluBackwardInPlace(c.z1, d1);
  Conv3x3Backward<T>(c.input, params_.Find("enc1.weight"), d1, grads.Find("enc1.weight"),
                     grads.Find("enc1.bias"), nullptr);
  return grads;
}

template <typename T>
std::vector<std::uint8_t> SegmentationModel<T>::ActivationPattern(const ForwardCache<T>& c) {
  std::vector<std::uint8_t> out;
  for (const Tensor<T>* z : {&c.z1, &c.z2, &c.z3, &c.z4, &c.z5}) {
    for (T v : z->data) out.push_back(v > T(0));
  }
  out.insert(out.end(), c.pool1_arg.begin(), c.pool1_arg.end());
  out.insert(out.end(), c.pool2_arg.begin(), c.pool2_arg.end());
  return out;
}

template struct Parameters<float>;
template struct Parameters<double>;
template class SegmentationModel<float>;
template class SegmentationModel<double>;

}  // namespace trinity::kernel
