// sea/features.h

#ifndef SEA_FEATURES_H_
#define SEA_FEATURES_H_

#include <string>
#include <utility>
#include <vector>

#include "sea/mat.h"
#include "sea/wav.h"

namespace sea {

struct MfccConfig {
  double window_length_s = 0.025;
  double hop_length_s = 0.010;
  int num_mel_filters = 26;
  int num_cepstra = 13;
  double log_floor = 1e-10;
  double preemphasis = 0.97;
};

// One utterance worth of per-frame feature vectors, row per frame.
struct FrameMatrix {
  MatF values;
  double frame_period_s = 0.010;
  std::string utt_id;

  int num_frames() const { return values.rows; }
  int dim() const { return values.cols; }
};

// Frames the signal (N = 1 + floor((L-W)/H)), then per frame: pre-emphasis,
// Hamming window, magnitude spectrum on a pow2 FFT, triangular mel filterbank
// over [0, Nyquist], floored log, orthonormal type-II DCT truncated to
// num_cepstra coefficients. Throws TooShort when the signal is under one
// window.
FrameMatrix compute_mfcc(const AudioSignal& signal, const MfccConfig& cfg,
                         const std::string& utt_id = "");

// Per-utterance mean/variance normalization, column-wise. Columns whose
// deviation is below 1e-8 are only mean-shifted.
FrameMatrix normalize_features(const FrameMatrix& feats);

// Feature file: "SEAF", version, N, d, frame period in microseconds,
// utt id, then N*d little-endian float32 row-major.
void write_features(const FrameMatrix& feats, const std::string& path);
FrameMatrix read_features(const std::string& path);

// Manifest: one "utt_id<TAB>wav_path" per line, returned sorted by utt_id.
// Duplicate ids are a ParseError.
std::vector<std::pair<std::string, std::string>> read_manifest(
    const std::string& path);

}  // namespace sea

#endif  // SEA_FEATURES_H_
