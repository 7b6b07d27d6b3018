// sea/synth.cc

#include "sea/synth.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "sea/error.h"
#include "sea/io_util.h"
#include "sea/rng.h"

namespace sea {

SynthCorpus gen_synthetic_corpus(const SynthConfig& cfg) {
  if (cfg.num_phones < 2) {
    throw Error(Err::range_error, "need at least 2 phones");
  }
  if (cfg.num_utts < 1 || cfg.dim < 1 || cfg.lexicon_size < 1 ||
      cfg.words_per_utt < 1) {
    throw Error(Err::range_error, "corpus size fields must be positive");
  }
  if (cfg.min_phone_frames < 1 ||
      cfg.min_phone_frames > cfg.max_phone_frames) {
    throw Error(Err::range_error, "bad phone duration range");
  }

  Rng rng(cfg.seed);

  // Draw order is fixed: phone means, then lexicon, then utterances.
  std::vector<std::vector<double>> means(static_cast<size_t>(cfg.num_phones));
  for (auto& m : means) {
    m.resize(static_cast<size_t>(cfg.dim));
    for (double& x : m) x = rng.gaussian();
  }

  SynthCorpus corpus;
  corpus.lexicon.reserve(static_cast<size_t>(cfg.lexicon_size));
  for (int w = 0; w < cfg.lexicon_size; ++w) {
    const int len = rng.uniform_int(2, 3);
    std::vector<int> word(static_cast<size_t>(len));
    for (int& p : word) p = rng.uniform_int(0, cfg.num_phones - 1);
    corpus.lexicon.push_back(std::move(word));
  }

  const double noise_sd = std::sqrt(cfg.noise_variance);
  char id_buf[32];
  for (int u = 0; u < cfg.num_utts; ++u) {
    std::snprintf(id_buf, sizeof(id_buf), "synth_%04d", u);
    const std::string utt_id = id_buf;

    std::vector<int> word_ids(static_cast<size_t>(cfg.words_per_utt));
    for (int& w : word_ids) w = rng.uniform_int(0, cfg.lexicon_size - 1);

    std::vector<float> samples;
    std::vector<int> frame_labels;
    GoldAlignment gold;
    gold.utt_id = utt_id;

    int frame = 0;
    for (int w : word_ids) {
      const std::vector<int>& word = corpus.lexicon[static_cast<size_t>(w)];
      const int word_start = frame;
      for (int phone : word) {
        const int dur = rng.uniform_int(cfg.min_phone_frames, cfg.max_phone_frames);
        const std::vector<double>& mean = means[static_cast<size_t>(phone)];
        for (int f = 0; f < dur; ++f) {
          for (int k = 0; k < cfg.dim; ++k) {
            samples.push_back(static_cast<float>(
                mean[static_cast<size_t>(k)] + noise_sd * rng.gaussian()));
          }
          frame_labels.push_back(phone);
        }
        const std::string label = "p" + std::to_string(phone);
        const double start_s = frame * cfg.frame_period_s;
        const double end_s = (frame + dur) * cfg.frame_period_s;
        // A run of one phone carries no internal boundary; extend the
        // previous entry instead of opening a new one.
        if (!gold.phones.empty() && gold.phones.back().label == label &&
            gold.phones.back().end_s == start_s) {
          gold.phones.back().end_s = end_s;
        } else {
          gold.phones.push_back({label, start_s, end_s});
        }
        frame += dur;
      }
      gold.words.push_back({"w" + std::to_string(w),
                            word_start * cfg.frame_period_s,
                            frame * cfg.frame_period_s});
    }

    FrameMatrix feats;
    feats.values = MatF(frame, cfg.dim);
    std::copy(samples.begin(), samples.end(), feats.values.v.begin());
    feats.frame_period_s = cfg.frame_period_s;
    feats.utt_id = utt_id;
    corpus.features.push_back(normalize_features(feats));
    corpus.frame_phone.push_back(std::move(frame_labels));
    corpus.gold[utt_id] = std::move(gold);
  }
  return corpus;
}

void write_synthetic_corpus(const SynthCorpus& corpus,
                            const std::string& out_dir) {
  ensure_dir(out_dir);
  ensure_dir(out_dir + "/feats");

  std::ofstream manifest(out_dir + "/manifest.txt");
  if (!manifest) {
    throw Error(Err::io_error, "cannot open for write: " + out_dir + "/manifest.txt");
  }
  for (const FrameMatrix& f : corpus.features) {
    write_features(f, out_dir + "/feats/" + f.utt_id + ".seaf");
    manifest << f.utt_id << "\t-\n";
  }
  if (!manifest) throw Error(Err::io_error, "manifest write failed");

  char buf[64];
  auto write_tier = [&](const std::string& path, bool words) {
    std::ofstream os(path);
    if (!os) throw Error(Err::io_error, "cannot open for write: " + path);
    for (const auto& [utt, gold] : corpus.gold) {
      const std::vector<AlignedUnit>& units = words ? gold.words : gold.phones;
      for (const AlignedUnit& unit : units) {
        std::snprintf(buf, sizeof(buf), "%.6f\t%.6f", unit.start_s, unit.end_s);
        os << utt << '\t' << buf << '\t' << unit.label << '\n';
      }
    }
    if (!os) throw Error(Err::io_error, "write failed: " + path);
  };
  write_tier(out_dir + "/gold.phn", false);
  write_tier(out_dir + "/gold.wrd", true);
}

}  // namespace sea
