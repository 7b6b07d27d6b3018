// tests/test_model.cc

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sea/error.h"
#include "sea/grad_check.h"
#include "sea/model.h"
#include "sea/rng.h"
#include "test_util.h"

namespace {

using sea::Err;
using sea::Error;
using sea::FrameMatrix;
using sea::Mat;
using sea::MatF;
using sea::Mode;
using sea::ModelParams;
using sea::ParamsT;
using sea::SeaConfig;
using sea::TrainReport;

SeaConfig tiny_config(uint32_t seed) {
  SeaConfig cfg;
  cfg.input_dim = 6;
  cfg.hidden_dim = 10;
  cfg.embed_dim = 8;
  cfg.chunk_frames = 12;
  cfg.rng_seed = seed;
  return cfg;
}

template <typename T>
Mat<T> random_input(int rows, int cols, uint64_t seed) {
  sea::Rng rng(seed);
  Mat<T> x(rows, cols);
  for (T& v : x.v) v = static_cast<T>(rng.uniform(-1.0, 1.0));
  return x;
}

template <typename T>
std::vector<double> flatten(const ParamsT<T>& p) {
  std::vector<double> out;
  for (const Mat<T>* t : sea::param_tensors(p)) {
    for (const T& v : t->v) out.push_back(static_cast<double>(v));
  }
  return out;
}

void unflatten(const std::vector<double>& theta, ParamsT<double>* p) {
  size_t pos = 0;
  for (Mat<double>* t : sea::param_tensors(*p)) {
    std::copy(theta.begin() + static_cast<std::ptrdiff_t>(pos),
              theta.begin() + static_cast<std::ptrdiff_t>(pos + t->v.size()),
              t->v.begin());
    pos += t->v.size();
  }
}

template <typename T>
bool params_equal(const ParamsT<T>& a, const ParamsT<T>& b) {
  auto ta = sea::param_tensors(a);
  auto tb = sea::param_tensors(b);
  for (size_t i = 0; i < ta.size(); ++i) {
    if (ta[i]->rows != tb[i]->rows || ta[i]->cols != tb[i]->cols) return false;
    if (ta[i]->v != tb[i]->v) return false;
  }
  return true;
}

// Largest |analytic - central_difference| / max(1e-8, |central_difference|)
// over every parameter coordinate, all evaluated in double.
double max_grad_rel_err(const SeaConfig& cfg, Mode mode, uint64_t data_seed) {
  ParamsT<double> p = sea::init_model_t<double>(cfg);
  const Mat<double> x =
      random_input<double>(cfg.chunk_frames, cfg.input_dim, data_seed);
  const sea::TraceT<double> tr = sea::forward(p, x, mode);
  const ParamsT<double> g = sea::backward(p, tr, false);
  const std::vector<double> analytic = flatten(g);

  ParamsT<double> probe = p;
  auto objective = [&](const std::vector<double>& theta) {
    unflatten(theta, &probe);
    return sea::forward(probe, x, mode).loss_total;
  };
  // The step must stay well below the distance to the nearest relu kink;
  // 1e-3 straddles one on some seeds and corrupts single coordinates.
  const std::vector<double> fd =
      sea::finite_diff_grad(objective, flatten(p), 1e-5);

  REQUIRE(fd.size() == analytic.size());
  double worst = 0.0;
  for (size_t i = 0; i < fd.size(); ++i) {
    const double rel = std::fabs(analytic[i] - fd[i]) /
                       std::max(1e-8, std::fabs(fd[i]));
    worst = std::max(worst, rel);
  }
  return worst;
}

std::vector<FrameMatrix> make_corpus(const std::vector<int>& frame_counts,
                                     int dim, uint64_t seed) {
  std::vector<FrameMatrix> corpus;
  sea::Rng rng(seed);
  for (size_t u = 0; u < frame_counts.size(); ++u) {
    FrameMatrix f;
    f.utt_id = "u" + std::to_string(u);
    f.frame_period_s = 0.010;
    f.values = MatF(frame_counts[u], dim);
    for (float& v : f.values.v) v = static_cast<float>(rng.uniform(-1.0, 1.0));
    corpus.push_back(std::move(f));
  }
  return corpus;
}

// Frames lie near a fixed low-rank linear map, so a small autoencoder can
// actually reduce reconstruction error instead of chasing noise.
std::vector<FrameMatrix> make_low_rank_corpus(int utts, int frames, int dim,
                                              int factors, uint64_t seed) {
  sea::Rng rng(seed);
  Mat<double> basis(factors, dim);
  for (double& v : basis.v) v = rng.uniform(-1.0, 1.0);
  std::vector<FrameMatrix> corpus;
  for (int u = 0; u < utts; ++u) {
    FrameMatrix f;
    f.utt_id = "u" + std::to_string(u);
    f.frame_period_s = 0.010;
    f.values = MatF(frames, dim);
    for (int t = 0; t < frames; ++t) {
      std::vector<double> s(static_cast<size_t>(factors));
      for (double& v : s) v = rng.gaussian();
      for (int j = 0; j < dim; ++j) {
        double acc = 0.0;
        for (int q = 0; q < factors; ++q) acc += s[static_cast<size_t>(q)] * basis.at(q, j);
        f.values.at(t, j) = static_cast<float>(acc);
      }
    }
    corpus.push_back(std::move(f));
  }
  return corpus;
}

}  // namespace

TEST_CASE("model: config validation bounds") {
  SeaConfig cfg = tiny_config(1);
  CHECK_NOTHROW(sea::validate_config(cfg));
  cfg.chunk_frames = 2;
  CHECK_NOTHROW(sea::validate_config(cfg));

  SeaConfig bad = tiny_config(1);
  bad.input_dim = 0;
  CHECK_THROWS_AS(sea::validate_config(bad), Error);
  bad = tiny_config(1);
  bad.hidden_dim = -1;
  CHECK_THROWS_AS(sea::validate_config(bad), Error);
  bad = tiny_config(1);
  bad.chunk_frames = 1;
  CHECK_THROWS_AS(sea::validate_config(bad), Error);
}

TEST_CASE("model: initialization is deterministic, bounded, biases zero") {
  SeaConfig cfg;
  cfg.rng_seed = 7;
  const ModelParams a = sea::init_model(cfg);
  const ModelParams b = sea::init_model(cfg);
  CHECK(params_equal(a, b));

  cfg.rng_seed = 8;
  const ModelParams c = sea::init_model(cfg);
  CHECK_FALSE(params_equal(a, c));

  CHECK(a.enc1_w.rows == 13);
  CHECK(a.enc1_w.cols == 256);
  CHECK(a.dec1_w.rows == 128);
  CHECK(a.dec1_w.cols == 256);
  CHECK(a.dec3_w.rows == 256);
  CHECK(a.dec3_w.cols == 13);

  auto tensors = sea::param_tensors(a);
  for (size_t i = 0; i < tensors.size(); i += 2) {
    const double limit =
        std::sqrt(6.0 / (tensors[i]->rows + tensors[i]->cols));
    bool some_nonzero = false;
    for (float v : tensors[i]->v) {
      CHECK(std::fabs(v) <= limit + 1e-6);
      if (v != 0.0f) some_nonzero = true;
    }
    CHECK(some_nonzero);
  }
  for (size_t i = 1; i < tensors.size(); i += 2) {
    for (float v : tensors[i]->v) CHECK(v == 0.0f);
  }
}

TEST_CASE("model: forward shapes and loss bookkeeping") {
  const SeaConfig cfg = tiny_config(3);
  const ModelParams p = sea::init_model(cfg);
  const MatF x = random_input<float>(12, 6, 31);

  const sea::ForwardTrace pre = sea::forward(p, x, Mode::pretrain);
  CHECK(pre.xhat.rows == 12);
  CHECK(pre.xhat.cols == 6);
  CHECK(pre.z.rows == 12);
  CHECK(pre.z.cols == 8);
  CHECK(pre.b.rows == 1);
  CHECK(pre.b.cols == 8);
  CHECK(pre.a.rows == 12);
  CHECK(pre.a.cols == 12);
  CHECK(pre.w.rows == 12);
  CHECK(pre.zbar.rows == 12);
  CHECK(pre.zbar.cols == 8);
  CHECK(pre.xhat_self.rows == 0);
  CHECK(pre.loss_self == 0.0);
  CHECK(pre.loss_total == pre.loss_direct);
  CHECK(std::fabs(pre.loss_direct - sea::mse(x, pre.xhat)) <= 1e-12);
  for (float v : pre.z.v) CHECK(v >= 0.0f);

  const sea::ForwardTrace full = sea::forward(p, x, Mode::sea);
  CHECK(full.xhat_self.rows == 12);
  CHECK(full.xhat_self.cols == 6);
  CHECK(std::fabs(full.loss_self - sea::mse(x, full.xhat_self)) <= 1e-12);
  CHECK(std::fabs(full.loss_total - (full.loss_direct + full.loss_self)) <=
        1e-12);
  CHECK(full.loss_direct == pre.loss_direct);

  for (int j = 0; j < 8; ++j) {
    double mean = 0.0;
    for (int i = 0; i < 12; ++i) mean += full.y.at(i, j);
    mean /= 12.0;
    CHECK(std::fabs(mean - full.b.at(0, j)) <= 1e-6);
  }
}

TEST_CASE("model: forward rejects short or mismatched input") {
  const SeaConfig cfg = tiny_config(3);
  const ModelParams p = sea::init_model(cfg);
  CHECK_THROWS_AS(sea::forward(p, random_input<float>(1, 6, 1), Mode::sea),
                  Error);
  CHECK_THROWS_AS(sea::forward(p, random_input<float>(12, 5, 1), Mode::sea),
                  Error);
}

TEST_CASE("model: both reconstruction branches use the same decoder") {
  const SeaConfig cfg = tiny_config(5);
  ModelParams p = sea::init_model(cfg);
  const MatF x = random_input<float>(12, 6, 55);
  const sea::ForwardTrace before = sea::forward(p, x, Mode::sea);
  p.dec2_w.at(3, 4) += 0.25f;
  const sea::ForwardTrace after = sea::forward(p, x, Mode::sea);
  CHECK_FALSE(before.xhat.v == after.xhat.v);
  CHECK_FALSE(before.xhat_self.v == after.xhat_self.v);
}

TEST_CASE("model: analytic gradient matches central differences, pretrain") {
  const double worst = max_grad_rel_err(tiny_config(11), Mode::pretrain, 101);
  CHECK(worst < 1e-4);
}

TEST_CASE("model: analytic gradient matches central differences, sea") {
  const double worst = max_grad_rel_err(tiny_config(11), Mode::sea, 101);
  CHECK(worst < 1e-4);
}

TEST_CASE("model: perfect reconstruction yields all-zero gradients") {
  const SeaConfig cfg = tiny_config(4);
  const ModelParams p = sea::init_model(cfg);
  const MatF x = random_input<float>(12, 6, 41);
  sea::ForwardTrace tr = sea::forward(p, x, Mode::sea);
  tr.xhat = tr.x;
  tr.xhat_self = tr.x;
  const ModelParams g = sea::backward(p, tr);
  for (const MatF* t : sea::param_tensors(g)) {
    for (float v : t->v) CHECK(v == 0.0f);
  }
}

TEST_CASE("model: stop_gradient freezes only the similarity path") {
  const SeaConfig cfg = tiny_config(6);
  const ModelParams p = sea::init_model(cfg);
  const MatF x = random_input<float>(12, 6, 66);

  const sea::ForwardTrace pre = sea::forward(p, x, Mode::pretrain);
  CHECK(params_equal(sea::backward(p, pre, false), sea::backward(p, pre, true)));

  const sea::ForwardTrace tr = sea::forward(p, x, Mode::sea);
  const ModelParams full = sea::backward(p, tr, false);
  const ModelParams stopped = sea::backward(p, tr, true);
  CHECK(full.dec1_w.v == stopped.dec1_w.v);
  CHECK(full.dec2_w.v == stopped.dec2_w.v);
  CHECK(full.dec3_w.v == stopped.dec3_w.v);
  CHECK(full.nonlabel_w.v == stopped.nonlabel_w.v);
  CHECK(full.nonlabel_b.v == stopped.nonlabel_b.v);
  CHECK_FALSE(full.label_w.v == stopped.label_w.v);
  CHECK_FALSE(full.enc1_w.v == stopped.enc1_w.v);
}

TEST_CASE("model: sgd step arithmetic") {
  SeaConfig cfg;
  cfg.input_dim = 1;
  cfg.hidden_dim = 1;
  cfg.embed_dim = 1;
  ModelParams p = sea::zero_params<float>(cfg);
  ModelParams g = sea::zero_like(p);
  ModelParams v = sea::zero_like(p);

  SUBCASE("zero gradient leaves parameters untouched") {
    for (MatF* t : sea::param_tensors(p)) {
      for (float& x : t->v) x = 2.5f;
    }
    const ModelParams before = p;
    sea::sgd_step(p, g, v, 0.1, 0.9);
    CHECK(params_equal(p, before));
  }

  SUBCASE("unit gradient, no momentum") {
    for (MatF* t : sea::param_tensors(g)) {
      for (float& x : t->v) x = 1.0f;
    }
    sea::sgd_step(p, g, v, 1.0, 0.0);
    for (const MatF* t : sea::param_tensors(p)) {
      for (float x : t->v) CHECK(x == doctest::Approx(-1.0).epsilon(1e-7));
    }
  }

  SUBCASE("momentum accumulates across steps") {
    for (MatF* t : sea::param_tensors(g)) {
      for (float& x : t->v) x = 1.0f;
    }
    sea::sgd_step(p, g, v, 1.0, 0.9);
    CHECK(p.enc1_w.at(0, 0) == doctest::Approx(-1.0).epsilon(1e-7));
    sea::sgd_step(p, g, v, 1.0, 0.9);
    CHECK(p.enc1_w.at(0, 0) == doctest::Approx(-2.9).epsilon(1e-6));
  }
}

TEST_CASE("model: chunking counts full windows and skips short utterances") {
  SeaConfig cfg = tiny_config(2);
  cfg.pretrain_epochs = 1;
  cfg.learning_rate = 0.0;
  const std::vector<FrameMatrix> corpus = make_corpus({12, 3, 25}, 6, 9);
  TrainReport report;
  sea::pretrain_autoencoder(corpus, cfg, &report);
  CHECK(report.num_chunks == 3);
  CHECK(report.skipped_utterances == 1);
  CHECK(report.epoch_mean_loss.size() == 1);
}

TEST_CASE("model: training with zero learning rate returns the init") {
  SeaConfig cfg = tiny_config(21);
  cfg.pretrain_epochs = 2;
  cfg.learning_rate = 0.0;
  const std::vector<FrameMatrix> corpus = make_corpus({12, 24}, 6, 13);
  const ModelParams trained = sea::pretrain_autoencoder(corpus, cfg);
  CHECK(params_equal(trained, sea::init_model(cfg)));
}

TEST_CASE("model: training twice with one seed is bit-identical") {
  SeaConfig cfg = tiny_config(22);
  cfg.pretrain_epochs = 3;
  cfg.sea_epochs = 2;
  cfg.learning_rate = 0.01;
  const std::vector<FrameMatrix> corpus = make_corpus({24, 24, 36}, 6, 17);
  TrainReport ra, rb;
  const ModelParams a = sea::pretrain_autoencoder(corpus, cfg, &ra);
  const ModelParams b = sea::pretrain_autoencoder(corpus, cfg, &rb);
  CHECK(params_equal(a, b));
  CHECK(ra.epoch_mean_loss == rb.epoch_mean_loss);

  const ModelParams sa = sea::train_sea(a, corpus, cfg);
  const ModelParams sb = sea::train_sea(b, corpus, cfg);
  CHECK(params_equal(sa, sb));
}

TEST_CASE("model: empty or all-short corpus is rejected") {
  SeaConfig cfg = tiny_config(2);
  try {
    sea::pretrain_autoencoder({}, cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Err::empty_corpus);
  }
  const std::vector<FrameMatrix> shorties = make_corpus({5, 7, 11}, 6, 3);
  CHECK_THROWS_AS(sea::pretrain_autoencoder(shorties, cfg), Error);
}

TEST_CASE("model: zero sea epochs returns parameters unchanged") {
  SeaConfig cfg = tiny_config(23);
  cfg.sea_epochs = 0;
  const std::vector<FrameMatrix> corpus = make_corpus({24}, 6, 19);
  const ModelParams p = sea::init_model(cfg);
  TrainReport report;
  const ModelParams out = sea::train_sea(p, corpus, cfg, &report);
  CHECK(params_equal(out, p));
  CHECK(report.epoch_mean_loss.empty());
}

TEST_CASE("model: pretraining reduces loss on low-rank data") {
  SeaConfig cfg;
  cfg.input_dim = 5;
  cfg.hidden_dim = 16;
  cfg.embed_dim = 8;
  cfg.chunk_frames = 6;
  cfg.learning_rate = 0.05;
  cfg.momentum = 0.9;
  cfg.pretrain_epochs = 8;
  cfg.sea_epochs = 2;
  cfg.rng_seed = 5;
  const std::vector<FrameMatrix> corpus =
      make_low_rank_corpus(20, 12, 5, 2, 77);
  TrainReport report;
  const ModelParams p = sea::pretrain_autoencoder(corpus, cfg, &report);
  REQUIRE(report.epoch_mean_loss.size() == 8);
  CHECK(report.epoch_mean_loss.back() < report.epoch_mean_loss.front());

  TrainReport sea_report;
  const ModelParams q = sea::train_sea(p, corpus, cfg, &sea_report);
  for (double loss : sea_report.epoch_mean_loss) CHECK(std::isfinite(loss));
  for (const MatF* t : sea::param_tensors(q)) CHECK(t->all_finite());
}

TEST_CASE("model: embedding matches the forward label head") {
  const SeaConfig cfg = tiny_config(9);
  const ModelParams p = sea::init_model(cfg);
  FrameMatrix feats;
  feats.utt_id = "u0";
  feats.values = random_input<float>(12, 6, 91);
  const MatF z = sea::embed_utterance(p, feats);
  const sea::ForwardTrace tr = sea::forward(p, feats.values, Mode::pretrain);
  CHECK(z.v == tr.z.v);
  for (float v : z.v) CHECK(v >= 0.0f);

  FrameMatrix single;
  single.values = random_input<float>(1, 6, 92);
  const MatF z1 = sea::embed_utterance(p, single);
  CHECK(z1.rows == 1);
  CHECK(z1.cols == 8);

  FrameMatrix narrow;
  narrow.values = random_input<float>(4, 5, 93);
  CHECK_THROWS_AS(sea::embed_utterance(p, narrow), Error);
}

TEST_CASE("model: checkpoint roundtrip is bit-exact") {
  const std::string dir = sea::test::scratch_dir("model_ckpt");
  SeaConfig cfg = tiny_config(31);
  cfg.learning_rate = 0.0025;
  cfg.momentum = 0.85;
  cfg.pretrain_epochs = 4;
  cfg.sea_epochs = 6;
  const ModelParams p = sea::init_model(cfg);
  const std::string path = dir + "/model.seam";
  sea::save_checkpoint(p, cfg, path);

  const auto [q, loaded] = sea::load_checkpoint(path);
  CHECK(params_equal(p, q));
  CHECK(loaded.input_dim == cfg.input_dim);
  CHECK(loaded.hidden_dim == cfg.hidden_dim);
  CHECK(loaded.embed_dim == cfg.embed_dim);
  CHECK(loaded.chunk_frames == cfg.chunk_frames);
  CHECK(loaded.learning_rate == cfg.learning_rate);
  CHECK(loaded.momentum == cfg.momentum);
  CHECK(loaded.pretrain_epochs == cfg.pretrain_epochs);
  CHECK(loaded.sea_epochs == cfg.sea_epochs);
  CHECK(loaded.rng_seed == cfg.rng_seed);

  sea::save_checkpoint(q, loaded, dir + "/again.seam");
  CHECK(sea::test::slurp(path) == sea::test::slurp(dir + "/again.seam"));
}

TEST_CASE("model: checkpoint loader rejects damaged files") {
  const std::string dir = sea::test::scratch_dir("model_ckpt_bad");
  const SeaConfig cfg = tiny_config(32);
  const ModelParams p = sea::init_model(cfg);
  const std::string path = dir + "/model.seam";
  sea::save_checkpoint(p, cfg, path);
  const std::string bytes = sea::test::slurp(path);

  auto code_of = [](const std::string& file) {
    try {
      sea::load_checkpoint(file);
    } catch (const Error& e) {
      return e.code();
    }
    return Err::parse_error;  // sentinel: the load unexpectedly succeeded
  };

  CHECK(code_of(dir + "/absent.seam") == Err::missing_file);

  std::string magic = bytes;
  magic[0] = 'X';
  sea::test::spit(dir + "/magic.seam", magic);
  CHECK(code_of(dir + "/magic.seam") == Err::bad_magic);

  std::string version = bytes;
  version[4] = 9;
  sea::test::spit(dir + "/version.seam", version);
  CHECK(code_of(dir + "/version.seam") == Err::version_mismatch);

  sea::test::spit(dir + "/half.seam", bytes.substr(0, bytes.size() / 2));
  CHECK(code_of(dir + "/half.seam") == Err::io_error);

  sea::test::spit(dir + "/clipped.seam", bytes.substr(0, bytes.size() - 4));
  CHECK(code_of(dir + "/clipped.seam") == Err::io_error);
}
