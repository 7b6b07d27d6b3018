// sea/model.cc

#include "sea/model.h"

#include <cstring>
#include <fstream>
#include <utility>

#include "sea/io_util.h"

namespace sea {
namespace {

struct ChunkRef {
  int utt;
  int start;
};

// Non-overlapping chunk_frames windows per utterance; the remainder is
// dropped and too-short utterances are counted, not used.
std::vector<ChunkRef> make_chunks(const std::vector<FrameMatrix>& corpus,
                                  int chunk_frames, int* skipped) {
  std::vector<ChunkRef> out;
  int skip = 0;
  for (size_t u = 0; u < corpus.size(); ++u) {
    const int n = corpus[u].values.rows;
    if (n < chunk_frames) {
      ++skip;
      continue;
    }
    for (int s = 0; s + chunk_frames <= n; s += chunk_frames) {
      out.push_back({static_cast<int>(u), s});
    }
  }
  if (skipped) *skipped = skip;
  return out;
}

MatF copy_chunk(const FrameMatrix& f, int start, int chunk_frames) {
  MatF x(chunk_frames, f.values.cols);
  for (int r = 0; r < chunk_frames; ++r) {
    std::memcpy(x.row(r), f.values.row(start + r),
                sizeof(float) * static_cast<size_t>(f.values.cols));
  }
  return x;
}

ModelParams run_epochs(ModelParams p, const std::vector<FrameMatrix>& corpus,
                       const SeaConfig& cfg, Mode mode, int epochs,
                       uint64_t shuffle_seed, TrainReport* report,
                       std::ostream* log) {
  validate_config(cfg);
  int skipped = 0;
  std::vector<ChunkRef> chunks = make_chunks(corpus, cfg.chunk_frames, &skipped);
  if (chunks.empty()) {
    throw Error(Err::empty_corpus, "no utterance yields a full chunk of " +
                                       std::to_string(cfg.chunk_frames) +
                                       " frames");
  }
  if (report) {
    report->skipped_utterances = skipped;
    report->num_chunks = static_cast<int>(chunks.size());
  }
  if (log && skipped > 0) {
    *log << "skipping " << skipped << " utterance(s) shorter than "
         << cfg.chunk_frames << " frames\n";
  }

  ModelParams velocity = zero_like(p);
  Rng rng(shuffle_seed);
  const char* tag = (mode == Mode::pretrain) ? "pretrain" : "sea";
  for (int e = 0; e < epochs; ++e) {
    rng.shuffle(chunks);
    double loss_sum = 0.0;
    for (const ChunkRef& c : chunks) {
      const MatF x = copy_chunk(corpus[static_cast<size_t>(c.utt)], c.start,
                                cfg.chunk_frames);
      const ForwardTrace tr = forward(p, x, mode);
      const ModelParams g = backward(p, tr, cfg.stop_gradient);
      sgd_step(p, g, velocity, cfg.learning_rate, cfg.momentum);
      loss_sum += tr.loss_total;
    }
    const double mean = loss_sum / static_cast<double>(chunks.size());
    if (report) report->epoch_mean_loss.push_back(mean);
    if (log) {
      *log << tag << " epoch " << (e + 1) << "/" << epochs << " mean loss "
           << mean << "\n";
    }
  }
  return p;
}

}  // namespace

ModelParams pretrain_autoencoder(const std::vector<FrameMatrix>& corpus,
                                 const SeaConfig& cfg, TrainReport* report,
                                 std::ostream* log) {
  ModelParams p = init_model(cfg);
  return run_epochs(std::move(p), corpus, cfg, Mode::pretrain,
                    cfg.pretrain_epochs, static_cast<uint64_t>(cfg.rng_seed) + 1,
                    report, log);
}

ModelParams train_sea(ModelParams p, const std::vector<FrameMatrix>& corpus,
                      const SeaConfig& cfg, TrainReport* report,
                      std::ostream* log) {
  return run_epochs(std::move(p), corpus, cfg, Mode::sea, cfg.sea_epochs,
                    static_cast<uint64_t>(cfg.rng_seed) + 2, report, log);
}

MatF embed_utterance(const ModelParams& p, const FrameMatrix& feats) {
  if (feats.values.cols != p.enc1_w.rows) {
    throw Error(Err::shape_mismatch, "feature width does not match model");
  }
  MatF e1 = matmul(feats.values, p.enc1_w);
  add_row_inplace(e1, p.enc1_b);
  relu_inplace(e1);
  MatF e = matmul(e1, p.enc2_w);
  add_row_inplace(e, p.enc2_b);
  relu_inplace(e);
  MatF z = matmul(e, p.label_w);
  add_row_inplace(z, p.label_b);
  relu_inplace(z);
  return z;
}

void save_checkpoint(const ModelParams& p, const SeaConfig& cfg,
                     const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Err::io_error, "cannot open for write: " + path);
  os.write("SEAM", 4);
  write_u32(os, 1);
  write_u32(os, static_cast<uint32_t>(cfg.input_dim));
  write_u32(os, static_cast<uint32_t>(cfg.hidden_dim));
  write_u32(os, static_cast<uint32_t>(cfg.embed_dim));
  write_u32(os, static_cast<uint32_t>(cfg.chunk_frames));
  write_f64(os, cfg.learning_rate);
  write_f64(os, cfg.momentum);
  write_u32(os, static_cast<uint32_t>(cfg.pretrain_epochs));
  write_u32(os, static_cast<uint32_t>(cfg.sea_epochs));
  write_u32(os, cfg.rng_seed);
  for (const MatF* t : param_tensors(p)) {
    write_u32(os, static_cast<uint32_t>(t->rows));
    write_u32(os, static_cast<uint32_t>(t->cols));
    write_f32_array(os, t->v.data(), t->v.size());
  }
  if (!os) throw Error(Err::io_error, "write failed: " + path);
}

std::pair<ModelParams, SeaConfig> load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Err::missing_file, path);
  char magic[4] = {0, 0, 0, 0};
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "SEAM") {
    throw Error(Err::bad_magic, "not a checkpoint file: " + path);
  }
  const uint32_t version = read_u32(is);
  if (!is) throw Error(Err::io_error, "truncated checkpoint: " + path);
  if (version != 1) {
    throw Error(Err::version_mismatch,
                "checkpoint format version " + std::to_string(version));
  }
  SeaConfig cfg;
  cfg.input_dim = static_cast<int>(read_u32(is));
  cfg.hidden_dim = static_cast<int>(read_u32(is));
  cfg.embed_dim = static_cast<int>(read_u32(is));
  cfg.chunk_frames = static_cast<int>(read_u32(is));
  cfg.learning_rate = read_f64(is);
  cfg.momentum = read_f64(is);
  cfg.pretrain_epochs = static_cast<int>(read_u32(is));
  cfg.sea_epochs = static_cast<int>(read_u32(is));
  cfg.rng_seed = read_u32(is);
  if (!is) throw Error(Err::io_error, "truncated checkpoint: " + path);
  constexpr int kDimCap = 1 << 24;
  if (cfg.input_dim < 1 || cfg.hidden_dim < 1 || cfg.embed_dim < 1 ||
      cfg.chunk_frames < 2 || cfg.input_dim > kDimCap ||
      cfg.hidden_dim > kDimCap || cfg.embed_dim > kDimCap) {
    throw Error(Err::io_error, "corrupt checkpoint header: " + path);
  }

  ModelParams p = zero_params<float>(cfg);
  for (MatF* t : param_tensors(p)) {
    const uint32_t rows = read_u32(is);
    const uint32_t cols = read_u32(is);
    if (!is) throw Error(Err::io_error, "truncated checkpoint: " + path);
    if (rows != static_cast<uint32_t>(t->rows) ||
        cols != static_cast<uint32_t>(t->cols)) {
      throw Error(Err::dimension_mismatch,
                  "tensor shape disagrees with config: " + path);
    }
    read_f32_array(is, t->v.data(), t->v.size());
    if (!is) throw Error(Err::io_error, "truncated checkpoint: " + path);
  }
  return {std::move(p), cfg};
}

}  // namespace sea
