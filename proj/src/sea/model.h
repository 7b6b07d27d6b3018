// sea/model.h
//
// Self-expressing autoencoder: a per-frame encoder feeding a label head and
// a time-averaged non-label head, one shared decoder reconstructing the
// input from [Z|B] directly and from the self-expressed [Zbar|B]. Forward
// and backward are templated on the scalar so tests can run the whole model
// in double; the training path uses float storage.

#ifndef SEA_MODEL_H_
#define SEA_MODEL_H_

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "sea/error.h"
#include "sea/features.h"
#include "sea/kernels.h"
#include "sea/mat.h"
#include "sea/rng.h"
#include "sea/self_express.h"

namespace sea {

constexpr double kSelfExpressEps = 1e-8;

struct SeaConfig {
  int input_dim = 13;
  int hidden_dim = 256;
  int embed_dim = 64;
  int chunk_frames = 100;
  double learning_rate = 1e-3;
  double momentum = 0.9;
  int pretrain_epochs = 20;
  int sea_epochs = 20;
  uint32_t rng_seed = 1;
  // Ablation switch: when set, the similarity matrix is held constant in
  // the backward pass, so gradient reaches Z only through the explicit Z
  // factor of Zbar = W * Z. Not stored in checkpoints.
  bool stop_gradient = false;
};

enum class Mode { pretrain, sea };

// Learnable tensors. Weights are laid out input x output so a row of
// activations multiplies from the left. The decoder tensors exist once and
// serve both reconstruction branches.
template <typename T>
struct ParamsT {
  Mat<T> enc1_w, enc1_b;
  Mat<T> enc2_w, enc2_b;
  Mat<T> label_w, label_b;
  Mat<T> nonlabel_w, nonlabel_b;
  Mat<T> dec1_w, dec1_b;
  Mat<T> dec2_w, dec2_b;
  Mat<T> dec3_w, dec3_b;
};

using ModelParams = ParamsT<float>;

// Fixed tensor order: checkpoint layout and initialization draw order.
// Even indices are weights, odd indices their biases.
template <typename T>
std::vector<Mat<T>*> param_tensors(ParamsT<T>& p) {
  return {&p.enc1_w,     &p.enc1_b,     &p.enc2_w,     &p.enc2_b,
          &p.label_w,    &p.label_b,    &p.nonlabel_w, &p.nonlabel_b,
          &p.dec1_w,     &p.dec1_b,     &p.dec2_w,     &p.dec2_b,
          &p.dec3_w,     &p.dec3_b};
}

template <typename T>
std::vector<const Mat<T>*> param_tensors(const ParamsT<T>& p) {
  return {&p.enc1_w,     &p.enc1_b,     &p.enc2_w,     &p.enc2_b,
          &p.label_w,    &p.label_b,    &p.nonlabel_w, &p.nonlabel_b,
          &p.dec1_w,     &p.dec1_b,     &p.dec2_w,     &p.dec2_b,
          &p.dec3_w,     &p.dec3_b};
}

inline void validate_config(const SeaConfig& cfg) {
  if (cfg.input_dim < 1 || cfg.hidden_dim < 1 || cfg.embed_dim < 1) {
    throw Error(Err::range_error, "model dims must be >= 1");
  }
  if (cfg.chunk_frames < 2) {
    throw Error(Err::range_error, "chunk_frames must be >= 2");
  }
}

template <typename T>
ParamsT<T> zero_params(const SeaConfig& cfg) {
  const int d = cfg.input_dim;
  const int h = cfg.hidden_dim;
  const int k = cfg.embed_dim;
  ParamsT<T> p;
  p.enc1_w = Mat<T>(d, h);
  p.enc1_b = Mat<T>(1, h);
  p.enc2_w = Mat<T>(h, h);
  p.enc2_b = Mat<T>(1, h);
  p.label_w = Mat<T>(h, k);
  p.label_b = Mat<T>(1, k);
  p.nonlabel_w = Mat<T>(h, k);
  p.nonlabel_b = Mat<T>(1, k);
  p.dec1_w = Mat<T>(2 * k, h);
  p.dec1_b = Mat<T>(1, h);
  p.dec2_w = Mat<T>(h, h);
  p.dec2_b = Mat<T>(1, h);
  p.dec3_w = Mat<T>(h, d);
  p.dec3_b = Mat<T>(1, d);
  return p;
}

template <typename T>
ParamsT<T> zero_like(const ParamsT<T>& p) {
  ParamsT<T> g;
  auto src = param_tensors(p);
  auto dst = param_tensors(g);
  for (size_t i = 0; i < src.size(); ++i) *dst[i] = Mat<T>(src[i]->rows, src[i]->cols);
  return g;
}

template <typename U, typename T>
ParamsT<U> cast_params(const ParamsT<T>& p) {
  ParamsT<U> out;
  auto src = param_tensors(p);
  auto dst = param_tensors(out);
  for (size_t i = 0; i < src.size(); ++i) *dst[i] = src[i]->template cast<U>();
  return out;
}

// Xavier-uniform weights in +-sqrt(6/(fan_in+fan_out)), biases zero, drawn
// in checkpoint tensor order from a generator seeded with rng_seed.
template <typename T>
ParamsT<T> init_model_t(const SeaConfig& cfg) {
  validate_config(cfg);
  ParamsT<T> p = zero_params<T>(cfg);
  Rng rng(cfg.rng_seed);
  auto tensors = param_tensors(p);
  for (size_t i = 0; i < tensors.size(); i += 2) {
    Mat<T>& w = *tensors[i];
    const double limit = std::sqrt(6.0 / (w.rows + w.cols));
    for (T& x : w.v) x = static_cast<T>(rng.uniform(-limit, limit));
  }
  return p;
}

inline ModelParams init_model(const SeaConfig& cfg) {
  return init_model_t<float>(cfg);
}

// Everything the backward pass needs from one forward call.
template <typename T>
struct TraceT {
  Mode mode = Mode::pretrain;
  Mat<T> x;
  Mat<T> e1, e;                       // encoder activations, post-ReLU
  Mat<T> z;                           // label embeddings, N x K
  Mat<T> y;                           // per-frame non-label activations
  Mat<T> b;                           // 1 x K time mean of y
  Mat<T> a, w, zbar;                  // self-expression intermediates
  Mat<T> c_dir, h1_dir, h2_dir, xhat; // direct reconstruction branch
  Mat<T> c_self, h1_self, h2_self, xhat_self;  // self-expressed branch
  double loss_direct = 0.0;
  double loss_self = 0.0;
  double loss_total = 0.0;
};

using ForwardTrace = TraceT<float>;

template <typename T>
TraceT<T> forward(const ParamsT<T>& p, const Mat<T>& x, Mode mode) {
  if (x.rows < 2) {
    throw Error(Err::shape_mismatch, "forward needs at least 2 frames");
  }
  if (x.cols != p.enc1_w.rows) {
    throw Error(Err::shape_mismatch, "input width does not match model");
  }
  TraceT<T> tr;
  tr.mode = mode;
  tr.x = x;

  tr.e1 = matmul(x, p.enc1_w);
  add_row_inplace(tr.e1, p.enc1_b);
  relu_inplace(tr.e1);
  tr.e = matmul(tr.e1, p.enc2_w);
  add_row_inplace(tr.e, p.enc2_b);
  relu_inplace(tr.e);

  tr.z = matmul(tr.e, p.label_w);
  add_row_inplace(tr.z, p.label_b);
  relu_inplace(tr.z);

  tr.y = matmul(tr.e, p.nonlabel_w);
  add_row_inplace(tr.y, p.nonlabel_b);
  relu_inplace(tr.y);
  tr.b = col_sum(tr.y);
  for (int j = 0; j < tr.b.cols; ++j) {
    tr.b.at(0, j) = static_cast<T>(static_cast<double>(tr.b.at(0, j)) / x.rows);
  }

  SelfExpression<T> se = self_express(tr.z, kSelfExpressEps);
  tr.a = std::move(se.a);
  tr.w = std::move(se.w);
  tr.zbar = std::move(se.zbar);

  const Mat<T> brows = broadcast_rows(tr.b, x.rows);
  auto decode = [&p](const Mat<T>& c, Mat<T>* h1, Mat<T>* h2) {
    *h1 = matmul(c, p.dec1_w);
    add_row_inplace(*h1, p.dec1_b);
    relu_inplace(*h1);
    *h2 = matmul(*h1, p.dec2_w);
    add_row_inplace(*h2, p.dec2_b);
    relu_inplace(*h2);
    Mat<T> out = matmul(*h2, p.dec3_w);
    add_row_inplace(out, p.dec3_b);
    return out;
  };

  tr.c_dir = hconcat(tr.z, brows);
  tr.xhat = decode(tr.c_dir, &tr.h1_dir, &tr.h2_dir);
  tr.loss_direct = mse(x, tr.xhat);

  if (mode == Mode::sea) {
    tr.c_self = hconcat(tr.zbar, brows);
    tr.xhat_self = decode(tr.c_self, &tr.h1_self, &tr.h2_self);
    tr.loss_self = mse(x, tr.xhat_self);
  } else {
    tr.loss_self = 0.0;
  }
  tr.loss_total = tr.loss_direct + tr.loss_self;
  return tr;
}

// Analytic gradient of loss_total with respect to every parameter. The
// decoder accumulates contributions from both branches. Unless
// stop_gradient is set, gradient also flows through the similarity matrix:
// Zbar -> W -> A -> cosine Gram -> Z.
template <typename T>
ParamsT<T> backward(const ParamsT<T>& p, const TraceT<T>& tr,
                    bool stop_gradient = false) {
  const int n = tr.x.rows;
  const int d = tr.x.cols;
  const int k = tr.z.cols;
  ParamsT<T> g = zero_like(p);

  auto mse_grad = [n, d](const Mat<T>& x, const Mat<T>& xhat) {
    Mat<T> out(n, d);
    const double scale = 2.0 / (static_cast<double>(n) * static_cast<double>(d));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      const T* xr = x.row(i);
      const T* hr = xhat.row(i);
      T* o = out.row(i);
      for (int j = 0; j < d; ++j) {
        o[j] = static_cast<T>(
            scale * (static_cast<double>(hr[j]) - static_cast<double>(xr[j])));
      }
    }
    return out;
  };

  // Walks one reconstruction branch back to its concat input, accumulating
  // the shared decoder gradients.
  auto decoder_backward = [&p, &g](const Mat<T>& c, const Mat<T>& h1,
                                   const Mat<T>& h2, const Mat<T>& g_out) {
    add_inplace(g.dec3_w, matmul_tn(h2, g_out));
    add_inplace(g.dec3_b, col_sum(g_out));
    Mat<T> gh2 = matmul_nt(g_out, p.dec3_w);
    relu_backward_inplace(gh2, h2);
    add_inplace(g.dec2_w, matmul_tn(h1, gh2));
    add_inplace(g.dec2_b, col_sum(gh2));
    Mat<T> gh1 = matmul_nt(gh2, p.dec2_w);
    relu_backward_inplace(gh1, h1);
    add_inplace(g.dec1_w, matmul_tn(c, gh1));
    add_inplace(g.dec1_b, col_sum(gh1));
    return matmul_nt(gh1, p.dec1_w);
  };

  Mat<T> g_z(n, k);
  Mat<T> g_b(1, k);

  {
    const Mat<T> g_c = decoder_backward(tr.c_dir, tr.h1_dir, tr.h2_dir,
                                        mse_grad(tr.x, tr.xhat));
    add_inplace(g_z, slice_cols(g_c, 0, k));
    add_inplace(g_b, col_sum(slice_cols(g_c, k, 2 * k)));
  }

  if (tr.mode == Mode::sea) {
    const Mat<T> g_c = decoder_backward(tr.c_self, tr.h1_self, tr.h2_self,
                                        mse_grad(tr.x, tr.xhat_self));
    const Mat<T> g_zbar = slice_cols(g_c, 0, k);
    add_inplace(g_b, col_sum(slice_cols(g_c, k, 2 * k)));

    // Zbar = W * Z: explicit Z factor always contributes.
    add_inplace(g_z, matmul_tn(tr.w, g_zbar));

    if (!stop_gradient) {
      const Mat<T> g_w = matmul_nt(g_zbar, tr.z);

      // Row normalization: W_ij = A_ij / S_i with S_i the row sum of A.
      // Rows whose sum fell below the guard were emitted as zero and pass
      // no gradient.
      Mat<T> g_a(n, n);
#pragma omp parallel for schedule(static)
      for (int i = 0; i < n; ++i) {
        const T* arow = tr.a.row(i);
        const T* grow = g_w.row(i);
        const T* wrow = tr.w.row(i);
        T* out = g_a.row(i);
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += static_cast<double>(arow[j]);
        if (s < kSelfExpressEps) {
          for (int j = 0; j < n; ++j) out[j] = T(0);
          continue;
        }
        double dot = 0.0;
        for (int j = 0; j < n; ++j) {
          dot += static_cast<double>(grow[j]) * static_cast<double>(wrow[j]);
        }
        for (int j = 0; j < n; ++j) {
          out[j] = static_cast<T>((static_cast<double>(grow[j]) - dot) / s);
        }
        out[i] = T(0);  // diagonal was forced to zero before normalizing
      }

      // Cosine Gram: A_pj = <z_p, z_j> / max(|z_p||z_j|, eps). When the
      // guard clamps the denominator it is a constant, so only the dot
      // product differentiates.
      const std::vector<double> norms = row_norms(tr.z);
#pragma omp parallel for schedule(static)
      for (int pi = 0; pi < n; ++pi) {
        std::vector<double> acc(static_cast<size_t>(k), 0.0);
        for (int j = 0; j < n; ++j) {
          if (j == pi) continue;
          const double gsym = static_cast<double>(g_a.at(pi, j)) +
                              static_cast<double>(g_a.at(j, pi));
          if (gsym == 0.0) continue;
          const T* zj = tr.z.row(j);
          const double den = norms[static_cast<size_t>(pi)] *
                             norms[static_cast<size_t>(j)];
          if (den >= kSelfExpressEps) {
            const double inv = 1.0 / den;
            const double apj = static_cast<double>(tr.a.at(pi, j));
            const double inv_p2 = 1.0 / (norms[static_cast<size_t>(pi)] *
                                         norms[static_cast<size_t>(pi)]);
            const T* zp = tr.z.row(pi);
            for (int c = 0; c < k; ++c) {
              acc[static_cast<size_t>(c)] +=
                  gsym * (static_cast<double>(zj[c]) * inv -
                          apj * static_cast<double>(zp[c]) * inv_p2);
            }
          } else {
            const double inv = 1.0 / kSelfExpressEps;
            for (int c = 0; c < k; ++c) {
              acc[static_cast<size_t>(c)] += gsym * static_cast<double>(zj[c]) * inv;
            }
          }
        }
        T* gz = g_z.row(pi);
        for (int c = 0; c < k; ++c) {
          gz[c] += static_cast<T>(acc[static_cast<size_t>(c)]);
        }
      }
    }
  }

  // B is the time mean of Y, so its gradient spreads evenly over frames.
  Mat<T> g_y(n, k);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    T* r = g_y.row(i);
    for (int j = 0; j < k; ++j) {
      r[j] = static_cast<T>(static_cast<double>(g_b.at(0, j)) / n);
    }
  }
  relu_backward_inplace(g_y, tr.y);
  add_inplace(g.nonlabel_w, matmul_tn(tr.e, g_y));
  add_inplace(g.nonlabel_b, col_sum(g_y));
  Mat<T> g_e = matmul_nt(g_y, p.nonlabel_w);

  relu_backward_inplace(g_z, tr.z);
  add_inplace(g.label_w, matmul_tn(tr.e, g_z));
  add_inplace(g.label_b, col_sum(g_z));
  add_inplace(g_e, matmul_nt(g_z, p.label_w));

  relu_backward_inplace(g_e, tr.e);
  add_inplace(g.enc2_w, matmul_tn(tr.e1, g_e));
  add_inplace(g.enc2_b, col_sum(g_e));
  Mat<T> g_e1 = matmul_nt(g_e, p.enc2_w);
  relu_backward_inplace(g_e1, tr.e1);
  add_inplace(g.enc1_w, matmul_tn(tr.x, g_e1));
  add_inplace(g.enc1_b, col_sum(g_e1));

  for (const Mat<T>* t : param_tensors(static_cast<const ParamsT<T>&>(g))) {
    if (!t->all_finite()) {
      throw Error(Err::non_finite_gradient, "gradient has non-finite entries");
    }
  }
  return g;
}

// v <- momentum * v - lr * g; p <- p + v, elementwise in double.
template <typename T>
void sgd_step(ParamsT<T>& p, const ParamsT<T>& g, ParamsT<T>& velocity,
              double lr, double momentum) {
  auto pt = param_tensors(p);
  auto gt = param_tensors(g);
  auto vt = param_tensors(velocity);
  for (size_t t = 0; t < pt.size(); ++t) {
    detail::require(pt[t]->same_shape(*gt[t]) && pt[t]->same_shape(*vt[t]),
                    "sgd_step shapes");
    T* pv = pt[t]->v.data();
    const T* gv = gt[t]->v.data();
    T* vv = vt[t]->v.data();
    const size_t count = pt[t]->v.size();
    for (size_t i = 0; i < count; ++i) {
      const double vel = momentum * static_cast<double>(vv[i]) -
                         lr * static_cast<double>(gv[i]);
      vv[i] = static_cast<T>(vel);
      pv[i] = static_cast<T>(static_cast<double>(pv[i]) + vel);
    }
  }
}

// Per-epoch training summary.
struct TrainReport {
  std::vector<double> epoch_mean_loss;
  int skipped_utterances = 0;
  int num_chunks = 0;
};

// Stage 1: plain autoencoder (direct branch only) from fresh init.
ModelParams pretrain_autoencoder(const std::vector<FrameMatrix>& corpus,
                                 const SeaConfig& cfg,
                                 TrainReport* report = nullptr,
                                 std::ostream* log = nullptr);

// Stage 2: both reconstruction branches, starting from p.
ModelParams train_sea(ModelParams p, const std::vector<FrameMatrix>& corpus,
                      const SeaConfig& cfg, TrainReport* report = nullptr,
                      std::ostream* log = nullptr);

// Whole-utterance label embeddings; no chunking, any N >= 1.
MatF embed_utterance(const ModelParams& p, const FrameMatrix& feats);

// Checkpoint file: magic "SEAM", version, config fields, then every tensor
// as rows u32, cols u32, row-major little-endian float32, in the
// param_tensors order.
void save_checkpoint(const ModelParams& p, const SeaConfig& cfg,
                     const std::string& path);
std::pair<ModelParams, SeaConfig> load_checkpoint(const std::string& path);

}  // namespace sea

#endif  // SEA_MODEL_H_
