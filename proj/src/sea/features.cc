// sea/features.cc

#include "sea/features.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <set>
#include <utility>
#include <vector>

#include "sea/error.h"
#include "sea/io_util.h"

namespace sea {
namespace {

constexpr double kPi = 3.14159265358979323846;

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Iterative in-place radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>* a) {
  const int n = static_cast<int>(a->size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap((*a)[i], (*a)[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / len;
    const std::complex<double> step(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (int k = 0; k < len / 2; ++k) {
        const std::complex<double> u = (*a)[i + k];
        const std::complex<double> v = (*a)[i + k + len / 2] * w;
        (*a)[i + k] = u + v;
        (*a)[i + k + len / 2] = u - v;
        w *= step;
      }
    }
  }
}

// Triangular filters with centers equally spaced on the mel scale between
// 0 Hz and Nyquist; evaluated at the FFT bin frequencies.
Mat<double> mel_filterbank(int num_filters, int nfft, int sample_rate) {
  const int bins = nfft / 2 + 1;
  const double mel_hi = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edge_hz(num_filters + 2);
  for (int m = 0; m < num_filters + 2; ++m) {
    edge_hz[m] = mel_to_hz(mel_hi * m / (num_filters + 1));
  }
  Mat<double> fb(num_filters, bins);
  for (int m = 0; m < num_filters; ++m) {
    const double lo = edge_hz[m];
    const double mid = edge_hz[m + 1];
    const double hi = edge_hz[m + 2];
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / nfft;
      double w = 0.0;
      if (f > lo && f < mid) {
        w = (f - lo) / (mid - lo);
      } else if (f >= mid && f < hi) {
        w = (hi - f) / (hi - mid);
      }
      fb.at(m, k) = w;
    }
  }
  return fb;
}

}  // namespace

FrameMatrix compute_mfcc(const AudioSignal& signal, const MfccConfig& cfg,
                         const std::string& utt_id) {
  const int sr = signal.sample_rate;
  if (sr <= 0) throw Error(Err::range_error, "sample rate must be positive");
  if (cfg.hop_length_s > cfg.window_length_s) {
    throw Error(Err::range_error, "hop length exceeds window length");
  }
  if (cfg.num_cepstra > cfg.num_mel_filters || cfg.num_cepstra < 1) {
    throw Error(Err::range_error, "need 1 <= num_cepstra <= num_mel_filters");
  }
  const int win = static_cast<int>(std::lround(cfg.window_length_s * sr));
  const int hop = static_cast<int>(std::lround(cfg.hop_length_s * sr));
  if (win < 2 || hop < 1) {
    throw Error(Err::range_error, "window/hop too small at this sample rate");
  }
  const auto total = static_cast<int64_t>(signal.samples.size());
  if (total < win) {
    throw Error(Err::too_short, "signal has " + std::to_string(total) +
                                    " samples, window needs " +
                                    std::to_string(win));
  }
  const int num_frames = 1 + static_cast<int>((total - win) / hop);
  const int nfft = next_pow2(win);
  const int bins = nfft / 2 + 1;
  const int mels = cfg.num_mel_filters;
  const Mat<double> fb = mel_filterbank(mels, nfft, sr);

  // Orthonormal type-II DCT rows, truncated to num_cepstra.
  Mat<double> dct(cfg.num_cepstra, mels);
  for (int c = 0; c < cfg.num_cepstra; ++c) {
    const double scale =
        (c == 0) ? std::sqrt(1.0 / mels) : std::sqrt(2.0 / mels);
    for (int m = 0; m < mels; ++m) {
      dct.at(c, m) = scale * std::cos(kPi * c * (m + 0.5) / mels);
    }
  }

  std::vector<double> window(win);
  for (int i = 0; i < win; ++i) {
    window[i] = 0.54 - 0.46 * std::cos(2.0 * kPi * i / (win - 1));
  }

  FrameMatrix out;
  out.values = MatF(num_frames, cfg.num_cepstra);
  out.frame_period_s = cfg.hop_length_s;
  out.utt_id = utt_id;

  std::vector<std::complex<double>> buf(nfft);
  std::vector<double> logmel(mels);
  for (int n = 0; n < num_frames; ++n) {
    const int64_t off = static_cast<int64_t>(n) * hop;
    std::fill(buf.begin(), buf.end(), std::complex<double>(0.0, 0.0));
    // Pre-emphasis stays frame-local: the first sample is differenced
    // against itself so frames never reach outside their own window.
    for (int i = 0; i < win; ++i) {
      const double cur = signal.samples[off + i];
      const double prev = (i == 0) ? cur : signal.samples[off + i - 1];
      buf[i] = {(cur - cfg.preemphasis * prev) * window[i], 0.0};
    }
    fft_radix2(&buf);
    for (int m = 0; m < mels; ++m) {
      double acc = 0.0;
      for (int k = 0; k < bins; ++k) acc += fb.at(m, k) * std::abs(buf[k]);
      logmel[m] = std::log(std::max(acc, cfg.log_floor));
    }
    for (int c = 0; c < cfg.num_cepstra; ++c) {
      double acc = 0.0;
      for (int m = 0; m < mels; ++m) acc += dct.at(c, m) * logmel[m];
      out.values.at(n, c) = static_cast<float>(acc);
    }
  }
  return out;
}

FrameMatrix normalize_features(const FrameMatrix& feats) {
  const int n = feats.values.rows;
  const int d = feats.values.cols;
  if (n < 1 || d < 1) throw Error(Err::range_error, "empty feature matrix");
  FrameMatrix out = feats;
  for (int c = 0; c < d; ++c) {
    double sum = 0.0;
    for (int r = 0; r < n; ++r) sum += feats.values.at(r, c);
    const double mean = sum / n;
    double var = 0.0;
    for (int r = 0; r < n; ++r) {
      const double dv = feats.values.at(r, c) - mean;
      var += dv * dv;
    }
    const double sd = std::sqrt(var / n);
    const double scale = (sd < 1e-8) ? 1.0 : 1.0 / sd;
    for (int r = 0; r < n; ++r) {
      out.values.at(r, c) =
          static_cast<float>((feats.values.at(r, c) - mean) * scale);
    }
  }
  return out;
}

void write_features(const FrameMatrix& feats, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Err::io_error, "cannot open for write: " + path);
  os.write("SEAF", 4);
  write_u32(os, 1);
  write_u32(os, static_cast<uint32_t>(feats.values.rows));
  write_u32(os, static_cast<uint32_t>(feats.values.cols));
  write_u32(os, static_cast<uint32_t>(std::lround(feats.frame_period_s * 1e6)));
  if (feats.utt_id.size() > 0xFFFF) {
    throw Error(Err::io_error, "utt id too long: " + feats.utt_id);
  }
  write_u16(os, static_cast<uint16_t>(feats.utt_id.size()));
  os.write(feats.utt_id.data(),
           static_cast<std::streamsize>(feats.utt_id.size()));
  write_f32_array(os, feats.values.v.data(), feats.values.v.size());
  if (!os) throw Error(Err::io_error, "write failed: " + path);
}

FrameMatrix read_features(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Err::missing_file, path);
  char magic[4] = {0, 0, 0, 0};
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "SEAF") {
    throw Error(Err::bad_magic, "not a feature file: " + path);
  }
  const uint32_t version = read_u32(is);
  if (version != 1) {
    throw Error(Err::version_mismatch,
                "feature format version " + std::to_string(version));
  }
  const uint32_t n = read_u32(is);
  const uint32_t d = read_u32(is);
  const uint32_t period_us = read_u32(is);
  const uint16_t id_len = read_u16(is);
  std::string utt_id(id_len, '\0');
  if (id_len > 0) is.read(utt_id.data(), id_len);
  if (!is) throw Error(Err::io_error, "truncated header: " + path);

  const std::streampos payload_start = is.tellg();
  is.seekg(0, std::ios::end);
  const std::streampos end = is.tellg();
  const auto avail = static_cast<uint64_t>(end - payload_start);
  const uint64_t want = static_cast<uint64_t>(n) * d * 4;
  if (avail != want) {
    throw Error(Err::dimension_mismatch,
                "header declares " + std::to_string(n) + "x" +
                    std::to_string(d) + " but payload holds " +
                    std::to_string(avail / 4) + " values: " + path);
  }
  is.seekg(payload_start);

  FrameMatrix out;
  out.values = MatF(static_cast<int>(n), static_cast<int>(d));
  out.frame_period_s = period_us * 1e-6;
  out.utt_id = utt_id;
  read_f32_array(is, out.values.v.data(), out.values.v.size());
  if (!is) throw Error(Err::io_error, "truncated payload: " + path);
  return out;
}

std::vector<std::pair<std::string, std::string>> read_manifest(
    const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::set<std::string> seen;
  size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw Error(Err::parse_error, "manifest line " + std::to_string(line_no) +
                                        ": expected utt_id<TAB>wav_path");
    }
    std::string utt = line.substr(0, tab);
    if (!seen.insert(utt).second) {
      throw Error(Err::parse_error, "manifest line " + std::to_string(line_no) +
                                        ": duplicate utt_id " + utt);
    }
    entries.emplace_back(std::move(utt), line.substr(tab + 1));
  }
  std::sort(entries.begin(), entries.end());
  return entries;
}

}  // namespace sea
