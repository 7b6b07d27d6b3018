// sea/synth.h

#ifndef SEA_SYNTH_H_
#define SEA_SYNTH_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sea/alignment.h"
#include "sea/features.h"

namespace sea {

// Desk-scale stand-in corpus: each phone is a Gaussian cluster (mean drawn
// once per phone from a standard normal, diagonal covariance
// noise_variance * I), utterances are concatenations of words from a small
// fixed lexicon of bigrams and trigrams, phone durations uniform in
// [min_phone_frames, max_phone_frames].
struct SynthConfig {
  int num_phones = 2;
  int num_utts = 50;
  int dim = 13;
  int lexicon_size = 6;
  int words_per_utt = 8;
  int min_phone_frames = 5;
  int max_phone_frames = 20;
  double noise_variance = 0.1;
  double frame_period_s = 0.01;
  uint32_t seed = 1;
};

struct SynthCorpus {
  std::vector<FrameMatrix> features;          // per utterance, normalized
  std::map<std::string, GoldAlignment> gold;  // both tiers
  std::vector<std::vector<int>> frame_phone;  // true phone id per frame
  std::vector<std::vector<int>> lexicon;      // the sampled word inventory
};

// Fully deterministic for a fixed config. Runs of the same phone are merged
// in the gold phone tier (no boundary exists between identical neighbors),
// and features are per-utterance normalized, matching what the feature
// stage writes for real audio.
SynthCorpus gen_synthetic_corpus(const SynthConfig& cfg);

// Writes <out_dir>/manifest.txt (wav path "-"), <out_dir>/feats/<utt>.seaf,
// <out_dir>/gold.phn, <out_dir>/gold.wrd.
void write_synthetic_corpus(const SynthCorpus& corpus,
                            const std::string& out_dir);

}  // namespace sea

#endif  // SEA_SYNTH_H_
