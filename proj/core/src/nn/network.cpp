#include "caelo/nn/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "caelo/error.hpp"

namespace caelo::nn {

namespace {

struct Grid {
  int d = 1, h = 1, w = 1, c = 1;
  std::size_t cells() const noexcept {
    return static_cast<std::size_t>(d) * static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
  }
};

Grid grid_of(const std::vector<int>& s) {
  if (s.size() == 3) return {1, s[0], s[1], s[2]};
  if (s.size() == 4) return {s[0], s[1], s[2], s[3]};
  throw ShapeError("expected a spatial tensor, got " + shape_string(s));
}

int kernel_volume(const LayerSpec& l) { return l.window[0] * l.window[1] * l.window[2]; }

const char* kind_name(LayerKind k) {
  switch (k) {
    case LayerKind::conv2d: return "conv2d";
    case LayerKind::conv3d: return "conv3d";
    case LayerKind::maxpool: return "maxpool";
    case LayerKind::upsample: return "upsample";
    case LayerKind::dense: return "dense";
    case LayerKind::flatten: return "flatten";
    case LayerKind::reshape: return "reshape";
  }
  return "?";
}

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::linear: return "linear";
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
  }
  return "?";
}

std::size_t param_count_for(const LayerSpec& l, const std::vector<int>& in) {
  switch (l.kind) {
    case LayerKind::conv2d:
    case LayerKind::conv3d: {
      const std::size_t cin = static_cast<std::size_t>(in.back());
      return static_cast<std::size_t>(kernel_volume(l)) * cin * l.units + l.units;
    }
    case LayerKind::dense:
      return static_cast<std::size_t>(in[0]) * l.units + l.units;
    default:
      return 0;
  }
}

template <typename T>
inline T activate(Activation a, T x) {
  switch (a) {
    case Activation::relu: return x > T(0) ? x : T(0);
    case Activation::sigmoid: return T(1) / (T(1) + std::exp(-x));
    case Activation::linear: break;
  }
  return x;
}

template <typename T>
inline T activation_slope(Activation a, T out) {
  switch (a) {
    case Activation::relu: return out > T(0) ? T(1) : T(0);
    case Activation::sigmoid: return out * (T(1) - out);
    case Activation::linear: break;
  }
  return T(1);
}

template <typename T>
void conv_forward(const LayerSpec& l, const T* params, const Tensor<T>& in, Tensor<T>& out) {
  const Grid g = grid_of(in.shape());
  const int cout = l.units;
  const int kd = l.window[0], kh = l.window[1], kw = l.window[2];
  const int pd = kd / 2, ph = kh / 2, pw = kw / 2;
  const T* weights = params;
  const T* bias = params + static_cast<std::size_t>(kernel_volume(l)) * g.c * cout;
  const T* src = in.data();
  T* dst = out.data();

  for (int od = 0; od < g.d; ++od) {
    for (int oh = 0; oh < g.h; ++oh) {
      for (int ow = 0; ow < g.w; ++ow) {
        T* o = dst + ((static_cast<std::size_t>(od) * g.h + oh) * g.w + ow) * cout;
        std::copy(bias, bias + cout, o);
        for (int a = 0; a < kd; ++a) {
          const int id = od + a - pd;
          if (id < 0 || id >= g.d) continue;
          for (int b = 0; b < kh; ++b) {
            const int ih = oh + b - ph;
            if (ih < 0 || ih >= g.h) continue;
            for (int c = 0; c < kw; ++c) {
              const int iw = ow + c - pw;
              if (iw < 0 || iw >= g.w) continue;
              const T* x = src + ((static_cast<std::size_t>(id) * g.h + ih) * g.w + iw) * g.c;
              const T* wk = weights + static_cast<std::size_t>((a * kh + b) * kw + c) * g.c * cout;
              for (int ci = 0; ci < g.c; ++ci) {
                const T v = x[ci];
                if (v == T(0)) continue;
                const T* wr = wk + static_cast<std::size_t>(ci) * cout;
                for (int co = 0; co < cout; ++co) o[co] += v * wr[co];
              }
            }
          }
        }
        for (int co = 0; co < cout; ++co) o[co] = activate(l.activation, o[co]);
      }
    }
  }
}

// `delta` is dLoss/d(pre-activation), laid out like the layer output.
template <typename T>
void conv_backward(const LayerSpec& l, const T* params, const Tensor<T>& in, const Tensor<T>& delta,
                   T* grad_params, Tensor<T>* grad_in) {
  const Grid g = grid_of(in.shape());
  const int cout = l.units;
  const int kd = l.window[0], kh = l.window[1], kw = l.window[2];
  const int pd = kd / 2, ph = kh / 2, pw = kw / 2;
  const T* weights = params;
  T* gw = grad_params;
  T* gb = grad_params + static_cast<std::size_t>(kernel_volume(l)) * g.c * cout;
  const T* src = in.data();
  T* gsrc = grad_in != nullptr ? grad_in->data() : nullptr;

  for (int od = 0; od < g.d; ++od) {
    for (int oh = 0; oh < g.h; ++oh) {
      for (int ow = 0; ow < g.w; ++ow) {
        const T* dl = delta.data() + ((static_cast<std::size_t>(od) * g.h + oh) * g.w + ow) * cout;
        bool any = false;
        for (int co = 0; co < cout; ++co) {
          if (dl[co] != T(0)) {
            any = true;
            break;
          }
        }
        if (!any) continue;
        for (int co = 0; co < cout; ++co) gb[co] += dl[co];
        for (int a = 0; a < kd; ++a) {
          const int id = od + a - pd;
          if (id < 0 || id >= g.d) continue;
          for (int b = 0; b < kh; ++b) {
            const int ih = oh + b - ph;
            if (ih < 0 || ih >= g.h) continue;
            for (int c = 0; c < kw; ++c) {
              const int iw = ow + c - pw;
              if (iw < 0 || iw >= g.w) continue;
              const std::size_t in_off = ((static_cast<std::size_t>(id) * g.h + ih) * g.w + iw) * g.c;
              const std::size_t k_off = static_cast<std::size_t>((a * kh + b) * kw + c) * g.c * cout;
              const T* x = src + in_off;
              for (int ci = 0; ci < g.c; ++ci) {
                const T v = x[ci];
                const std::size_t row = k_off + static_cast<std::size_t>(ci) * cout;
                if (v != T(0)) {
                  T* gwr = gw + row;
                  for (int co = 0; co < cout; ++co) gwr[co] += v * dl[co];
                }
                if (gsrc != nullptr) {
                  const T* wr = weights + row;
                  T acc = T(0);
                  for (int co = 0; co < cout; ++co) acc += wr[co] * dl[co];
                  gsrc[in_off + ci] += acc;
                }
              }
            }
          }
        }
      }
    }
  }
}

template <typename T>
void dense_forward(const LayerSpec& l, const T* params, const Tensor<T>& in, Tensor<T>& out) {
  const std::size_t n = in.size();
  const int units = l.units;
  const T* bias = params + n * units;
  T* o = out.data();
  std::copy(bias, bias + units, o);
  for (std::size_t i = 0; i < n; ++i) {
    const T v = in[i];
    if (v == T(0)) continue;
    const T* wr = params + i * units;
    for (int u = 0; u < units; ++u) o[u] += v * wr[u];
  }
  for (int u = 0; u < units; ++u) o[u] = activate(l.activation, o[u]);
}

template <typename T>
void dense_backward(const LayerSpec& l, const T* params, const Tensor<T>& in, const Tensor<T>& delta,
                    T* grad_params, Tensor<T>* grad_in) {
  const std::size_t n = in.size();
  const int units = l.units;
  const T* dl = delta.data();
  T* gb = grad_params + n * units;
  for (int u = 0; u < units; ++u) gb[u] += dl[u];
  for (std::size_t i = 0; i < n; ++i) {
    const T v = in[i];
    if (v != T(0)) {
      T* gwr = grad_params + i * units;
      for (int u = 0; u < units; ++u) gwr[u] += v * dl[u];
    }
    if (grad_in != nullptr) {
      const T* wr = params + i * units;
      T acc = T(0);
      for (int u = 0; u < units; ++u) acc += wr[u] * dl[u];
      (*grad_in)[i] += acc;
    }
  }
}

template <typename T>
void maxpool_forward(const LayerSpec& l, const Tensor<T>& in, Tensor<T>& out) {
  const Grid gi = grid_of(in.shape());
  const Grid go = grid_of(out.shape());
  const auto [pd, ph, pw] = l.window;
  for (int od = 0; od < go.d; ++od) {
    for (int oh = 0; oh < go.h; ++oh) {
      for (int ow = 0; ow < go.w; ++ow) {
        T* o = out.data() + ((static_cast<std::size_t>(od) * go.h + oh) * go.w + ow) * go.c;
        for (int ch = 0; ch < go.c; ++ch) {
          T best = T(0);
          bool first = true;
          for (int a = 0; a < pd; ++a) {
            for (int b = 0; b < ph; ++b) {
              for (int c = 0; c < pw; ++c) {
                const std::size_t idx =
                    ((static_cast<std::size_t>(od * pd + a) * gi.h + (oh * ph + b)) * gi.w + (ow * pw + c)) * gi.c + ch;
                if (first || in[idx] > best) {
                  best = in[idx];
                  first = false;
                }
              }
            }
          }
          o[ch] = best;
        }
      }
    }
  }
}

// Gradient goes to the first maximum in scan order.
template <typename T>
void maxpool_backward(const LayerSpec& l, const Tensor<T>& in, const Tensor<T>& grad_out, Tensor<T>& grad_in) {
  const Grid gi = grid_of(in.shape());
  const Grid go = grid_of(grad_out.shape());
  const auto [pd, ph, pw] = l.window;
  for (int od = 0; od < go.d; ++od) {
    for (int oh = 0; oh < go.h; ++oh) {
      for (int ow = 0; ow < go.w; ++ow) {
        const T* g = grad_out.data() + ((static_cast<std::size_t>(od) * go.h + oh) * go.w + ow) * go.c;
        for (int ch = 0; ch < go.c; ++ch) {
          if (g[ch] == T(0)) continue;
          std::size_t arg = 0;
          bool first = true;
          for (int a = 0; a < pd; ++a) {
            for (int b = 0; b < ph; ++b) {
              for (int c = 0; c < pw; ++c) {
                const std::size_t idx =
                    ((static_cast<std::size_t>(od * pd + a) * gi.h + (oh * ph + b)) * gi.w + (ow * pw + c)) * gi.c + ch;
                if (first || in[idx] > in[arg]) {
                  arg = idx;
                  first = false;
                }
              }
            }
          }
          grad_in[arg] += g[ch];
        }
      }
    }
  }
}

template <typename T>
void upsample_forward(const LayerSpec& l, const Tensor<T>& in, Tensor<T>& out) {
  const Grid gi = grid_of(in.shape());
  const Grid go = grid_of(out.shape());
  const auto [pd, ph, pw] = l.window;
  for (int od = 0; od < go.d; ++od) {
    for (int oh = 0; oh < go.h; ++oh) {
      for (int ow = 0; ow < go.w; ++ow) {
        const T* s = in.data() + ((static_cast<std::size_t>(od / pd) * gi.h + oh / ph) * gi.w + ow / pw) * gi.c;
        T* o = out.data() + ((static_cast<std::size_t>(od) * go.h + oh) * go.w + ow) * go.c;
        std::copy(s, s + go.c, o);
      }
    }
  }
}

template <typename T>
void upsample_backward(const LayerSpec& l, const Tensor<T>& grad_out, Tensor<T>& grad_in) {
  const Grid gi = grid_of(grad_in.shape());
  const Grid go = grid_of(grad_out.shape());
  const auto [pd, ph, pw] = l.window;
  for (int od = 0; od < go.d; ++od) {
    for (int oh = 0; oh < go.h; ++oh) {
      for (int ow = 0; ow < go.w; ++ow) {
        T* s = grad_in.data() + ((static_cast<std::size_t>(od / pd) * gi.h + oh / ph) * gi.w + ow / pw) * gi.c;
        const T* g = grad_out.data() + ((static_cast<std::size_t>(od) * go.h + oh) * go.w + ow) * go.c;
        for (int ch = 0; ch < go.c; ++ch) s[ch] += g[ch];
      }
    }
  }
}

}  // namespace

LayerSpec LayerSpec::conv2d(int kh, int kw, int filters, Activation act) {
  return {LayerKind::conv2d, {1, kh, kw}, filters, act, {}};
}
LayerSpec LayerSpec::conv3d(int k, int filters, Activation act) {
  return {LayerKind::conv3d, {k, k, k}, filters, act, {}};
}
LayerSpec LayerSpec::maxpool2d(int p) { return {LayerKind::maxpool, {1, p, p}, 0, Activation::linear, {}}; }
LayerSpec LayerSpec::maxpool3d(int p) { return {LayerKind::maxpool, {p, p, p}, 0, Activation::linear, {}}; }
LayerSpec LayerSpec::upsample2d(int p) { return {LayerKind::upsample, {1, p, p}, 0, Activation::linear, {}}; }
LayerSpec LayerSpec::upsample3d(int p) { return {LayerKind::upsample, {p, p, p}, 0, Activation::linear, {}}; }
LayerSpec LayerSpec::dense(int units, Activation act) {
  return {LayerKind::dense, {1, 1, 1}, units, act, {}};
}
LayerSpec LayerSpec::flatten() { return {LayerKind::flatten, {1, 1, 1}, 0, Activation::linear, {}}; }
LayerSpec LayerSpec::reshape(std::vector<int> shape) {
  return {LayerKind::reshape, {1, 1, 1}, 0, Activation::linear, std::move(shape)};
}

std::string to_string(const LayerSpec& l) {
  std::ostringstream s;
  s << kind_name(l.kind);
  switch (l.kind) {
    case LayerKind::conv2d:
      s << ' ' << l.window[1] << 'x' << l.window[2] << " -> " << l.units << ' ' << activation_name(l.activation);
      break;
    case LayerKind::conv3d:
      s << ' ' << l.window[0] << 'x' << l.window[1] << 'x' << l.window[2] << " -> " << l.units << ' '
        << activation_name(l.activation);
      break;
    case LayerKind::maxpool:
    case LayerKind::upsample:
      s << ' ' << l.window[0] << 'x' << l.window[1] << 'x' << l.window[2];
      break;
    case LayerKind::dense:
      s << " -> " << l.units << ' ' << activation_name(l.activation);
      break;
    case LayerKind::reshape:
      s << ' ' << shape_string(l.target_shape);
      break;
    case LayerKind::flatten:
      break;
  }
  return s.str();
}

std::vector<int> output_shape(const LayerSpec& l, const std::vector<int>& in) {
  auto fail = [&](const std::string& why) -> ShapeError {
    return ShapeError(to_string(l) + " cannot take input " + shape_string(in) + ": " + why);
  };
  switch (l.kind) {
    case LayerKind::conv2d:
    case LayerKind::conv3d: {
      const std::size_t rank = l.kind == LayerKind::conv2d ? 3 : 4;
      if (in.size() != rank) throw fail("wrong rank");
      if (l.units <= 0) throw fail("filters must be positive");
      for (int k : l.window) {
        if (k <= 0 || k % 2 == 0) throw fail("kernel dims must be odd and positive");
      }
      std::vector<int> out = in;
      out.back() = l.units;
      return out;
    }
    case LayerKind::maxpool:
    case LayerKind::upsample: {
      if (in.size() != 3 && in.size() != 4) throw fail("expected a spatial tensor");
      if (in.size() == 3 && l.window[0] != 1) throw fail("3D window on a 2D tensor");
      const std::size_t offset = in.size() == 3 ? 1 : 0;
      std::vector<int> out = in;
      for (std::size_t axis = 0; axis + 1 < in.size(); ++axis) {
        const int w = l.window[axis + offset];
        if (w <= 0) throw fail("window dims must be positive");
        if (l.kind == LayerKind::maxpool) {
          if (in[axis] % w != 0) throw fail("spatial size not divisible by the pool window");
          out[axis] = in[axis] / w;
        } else {
          out[axis] = in[axis] * w;
        }
      }
      return out;
    }
    case LayerKind::dense:
      if (in.size() != 1) throw fail("dense layers take flat input");
      if (l.units <= 0) throw fail("units must be positive");
      return {l.units};
    case LayerKind::flatten:
      return {static_cast<int>(element_count(in))};
    case LayerKind::reshape:
      if (element_count(l.target_shape) != element_count(in)) throw fail("element count differs");
      return l.target_shape;
  }
  throw fail("unknown layer kind");
}

template <typename T>
BasicNetwork<T>::BasicNetwork(std::vector<int> reference_input, std::vector<LayerSpec> layers)
    : reference_input_(std::move(reference_input)), layers_(std::move(layers)) {
  std::vector<int> shape = reference_input_;
  element_count(shape);
  std::size_t total = 0;
  for (const LayerSpec& l : layers_) {
    const std::size_t n = param_count_for(l, shape);
    shape = output_shape(l, shape);
    offsets_.push_back(total);
    counts_.push_back(n);
    total += n;
  }
  params_.assign(total, T(0));
}

template <typename T>
std::vector<std::vector<int>> BasicNetwork<T>::layer_shapes(const std::vector<int>& input) const {
  std::vector<std::vector<int>> shapes;
  std::vector<int> shape = input;
  bool has_dense = false;
  for (const LayerSpec& l : layers_) has_dense = has_dense || l.kind == LayerKind::dense;
  if (shape.size() != reference_input_.size() || shape.back() != reference_input_.back() ||
      (has_dense && shape != reference_input_)) {
    throw ShapeError("network expects input like " + shape_string(reference_input_) + ", got " +
                     shape_string(input));
  }
  for (const LayerSpec& l : layers_) {
    shape = output_shape(l, shape);
    shapes.push_back(shape);
  }
  return shapes;
}

template <typename T>
std::span<T> BasicNetwork<T>::layer_params(std::size_t i) {
  return std::span<T>(params_).subspan(offsets_.at(i), counts_.at(i));
}

template <typename T>
std::span<const T> BasicNetwork<T>::layer_params(std::size_t i) const {
  return std::span<const T>(params_).subspan(offsets_.at(i), counts_.at(i));
}

template <typename T>
void BasicNetwork<T>::init_glorot(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> shape = reference_input_;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const LayerSpec& l = layers_[i];
    auto p = layer_params(i);
    if (l.has_params()) {
      std::size_t fan_in = 0, fan_out = 0;
      if (l.kind == LayerKind::dense) {
        fan_in = static_cast<std::size_t>(shape[0]);
        fan_out = static_cast<std::size_t>(l.units);
      } else {
        fan_in = static_cast<std::size_t>(kernel_volume(l)) * shape.back();
        fan_out = static_cast<std::size_t>(kernel_volume(l)) * l.units;
      }
      const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
      std::uniform_real_distribution<double> dist(-limit, limit);
      const std::size_t n_weights = p.size() - static_cast<std::size_t>(l.units);
      for (std::size_t k = 0; k < n_weights; ++k) p[k] = static_cast<T>(dist(rng));
      for (std::size_t k = n_weights; k < p.size(); ++k) p[k] = T(0);
    }
    shape = output_shape(l, shape);
  }
}

template <typename T>
void BasicNetwork<T>::check_input(const Tensor<T>& input) const {
  layer_shapes(input.shape());
}

template <typename T>
Tensor<T> BasicNetwork<T>::forward(const Tensor<T>& input) const {
  return forward_to(input, layers_.size() - 1);
}

template <typename T>
Tensor<T> BasicNetwork<T>::forward_to(const Tensor<T>& input, std::size_t last) const {
  if (last >= layers_.size()) throw ShapeError("layer index out of range");
  const auto shapes = layer_shapes(input.shape());
  Tensor<T> current = input;
  for (std::size_t i = 0; i <= last; ++i) {
    const LayerSpec& l = layers_[i];
    const T* p = params_.data() + offsets_[i];
    switch (l.kind) {
      case LayerKind::conv2d:
      case LayerKind::conv3d: {
        Tensor<T> out(shapes[i]);
        conv_forward(l, p, current, out);
        current = std::move(out);
        break;
      }
      case LayerKind::dense: {
        Tensor<T> out(shapes[i]);
        dense_forward(l, p, current, out);
        current = std::move(out);
        break;
      }
      case LayerKind::maxpool: {
        Tensor<T> out(shapes[i]);
        maxpool_forward(l, current, out);
        current = std::move(out);
        break;
      }
      case LayerKind::upsample: {
        Tensor<T> out(shapes[i]);
        upsample_forward(l, current, out);
        current = std::move(out);
        break;
      }
      case LayerKind::flatten:
      case LayerKind::reshape:
        current.reshape(shapes[i]);
        break;
    }
  }
  return current;
}

template <typename T>
std::vector<Tensor<T>> BasicNetwork<T>::forward_trace(const Tensor<T>& input) const {
  const auto shapes = layer_shapes(input.shape());
  std::vector<Tensor<T>> trace;
  trace.reserve(layers_.size());
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const LayerSpec& l = layers_[i];
    const Tensor<T>& in = i == 0 ? input : trace.back();
    const T* p = params_.data() + offsets_[i];
    Tensor<T> out(shapes[i]);
    switch (l.kind) {
      case LayerKind::conv2d:
      case LayerKind::conv3d: conv_forward(l, p, in, out); break;
      case LayerKind::dense: dense_forward(l, p, in, out); break;
      case LayerKind::maxpool: maxpool_forward(l, in, out); break;
      case LayerKind::upsample: upsample_forward(l, in, out); break;
      case LayerKind::flatten:
      case LayerKind::reshape:
        out = Tensor<T>(shapes[i], std::vector<T>(in.values().begin(), in.values().end()));
        break;
    }
    trace.push_back(std::move(out));
  }
  return trace;
}

template <typename T>
void BasicNetwork<T>::backward(const Tensor<T>& input, const std::vector<Tensor<T>>& trace,
                               Tensor<T> grad_output, std::span<T> grad) const {
  if (trace.size() != layers_.size()) throw ShapeError("trace does not match network depth");
  if (grad.size() != params_.size()) throw ShapeError("gradient buffer has wrong length");
  if (grad_output.shape() != trace.back().shape()) throw ShapeError("output gradient has wrong shape");

  Tensor<T> g = std::move(grad_output);
  for (std::size_t idx = layers_.size(); idx-- > 0;) {
    const LayerSpec& l = layers_[idx];
    const Tensor<T>& in = idx == 0 ? input : trace[idx - 1];
    const Tensor<T>& out = trace[idx];
    const bool need_input_grad = idx > 0;
    Tensor<T> gin;
    if (need_input_grad) gin = Tensor<T>(in.shape());
    const T* p = params_.data() + offsets_[idx];
    T* gp = grad.data() + offsets_[idx];

    switch (l.kind) {
      case LayerKind::conv2d:
      case LayerKind::conv3d:
      case LayerKind::dense: {
        for (std::size_t k = 0; k < g.size(); ++k) g[k] *= activation_slope(l.activation, out[k]);
        if (l.kind == LayerKind::dense) {
          dense_backward(l, p, in, g, gp, need_input_grad ? &gin : nullptr);
        } else {
          conv_backward(l, p, in, g, gp, need_input_grad ? &gin : nullptr);
        }
        break;
      }
      case LayerKind::maxpool:
        if (need_input_grad) maxpool_backward(l, in, g, gin);
        break;
      case LayerKind::upsample:
        if (need_input_grad) upsample_backward(l, g, gin);
        break;
      case LayerKind::flatten:
      case LayerKind::reshape:
        if (need_input_grad) gin = Tensor<T>(in.shape(), std::vector<T>(g.values().begin(), g.values().end()));
        break;
    }
    if (!need_input_grad) break;
    g = std::move(gin);
  }
}

template <typename T>
std::string BasicNetwork<T>::architecture() const {
  std::ostringstream s;
  s << "in_channels=" << reference_input_.back();
  bool has_dense = false;
  for (const LayerSpec& l : layers_) has_dense = has_dense || l.kind == LayerKind::dense;
  if (has_dense) s << " input=" << shape_string(reference_input_);
  for (std::size_t i = 0; i < layers_.size(); ++i) s << "; " << to_string(layers_[i]) << " [" << counts_[i] << ']';
  return s.str();
}

template <typename T>
std::uint64_t BasicNetwork<T>::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : architecture()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

template class BasicNetwork<float>;
template class BasicNetwork<double>;

}  // namespace caelo::nn
