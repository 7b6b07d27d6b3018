// tests/test_wav_mfcc.cc

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "ref/ref_mfcc.h"
#include "sea/error.h"
#include "sea/features.h"
#include "sea/rng.h"
#include "sea/wav.h"
#include "test_util.h"

using namespace sea;

namespace {

void put_u16(std::string& s, uint16_t v) {
  s.push_back(static_cast<char>(v & 0xFF));
  s.push_back(static_cast<char>((v >> 8) & 0xFF));
}
void put_u32(std::string& s, uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::string wav_bytes(const std::vector<int16_t>& samples, uint32_t rate,
                      uint16_t channels = 1, uint16_t bits = 16,
                      uint16_t format = 1) {
  std::string data;
  for (int16_t s : samples) put_u16(data, static_cast<uint16_t>(s));
  std::string out = "RIFF";
  put_u32(out, static_cast<uint32_t>(4 + 24 + 8 + data.size()));
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, format);
  put_u16(out, channels);
  put_u32(out, rate);
  put_u32(out, rate * channels * bits / 8);
  put_u16(out, static_cast<uint16_t>(channels * bits / 8));
  put_u16(out, bits);
  out += "data";
  put_u32(out, static_cast<uint32_t>(data.size()));
  out += data;
  return out;
}

}  // namespace

TEST_CASE("read_wav scaling and header fields") {
  const std::string dir = test::scratch_dir("wav_basic");
  test::spit(dir + "/a.wav", wav_bytes({0, 16384}, 16000));
  const AudioSignal sig = read_wav(dir + "/a.wav");
  CHECK(sig.sample_rate == 16000);
  REQUIRE(sig.samples.size() == 2);
  CHECK(sig.samples[0] == 0.0f);
  CHECK(sig.samples[1] == 0.5f);
}

TEST_CASE("read_wav error cases") {
  const std::string dir = test::scratch_dir("wav_errors");
  CHECK_THROWS_WITH_AS((void)read_wav(dir + "/missing.wav"),
                       doctest::Contains("missing.wav"), Error);

  std::string riffx = wav_bytes({0}, 16000);
  riffx[3] = 'X';
  test::spit(dir + "/bad.wav", riffx);
  try {
    (void)read_wav(dir + "/bad.wav");
    FAIL("expected BadMagic");
  } catch (const Error& e) {
    CHECK(e.code() == Err::bad_magic);
  }

  test::spit(dir + "/stereo.wav", wav_bytes({0, 0}, 16000, 2));
  try {
    (void)read_wav(dir + "/stereo.wav");
    FAIL("expected UnsupportedFormat");
  } catch (const Error& e) {
    CHECK(e.code() == Err::unsupported_format);
  }

  const std::string whole = wav_bytes({0, 0, 0, 0}, 16000);
  test::spit(dir + "/trunc.wav", whole.substr(0, whole.size() - 3));
  try {
    (void)read_wav(dir + "/trunc.wav");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == Err::io_error);
  }
}

TEST_CASE("mfcc frame count formula and TooShort") {
  MfccConfig cfg;
  AudioSignal sig;
  sig.sample_rate = 16000;
  sig.samples.assign(400, 0.0f);
  CHECK(compute_mfcc(sig, cfg, "u").values.rows == 1);

  sig.samples.assign(400 + 160 * 7 + 159, 0.0f);
  CHECK(compute_mfcc(sig, cfg, "u").values.rows == 8);

  sig.samples.assign(399, 0.0f);
  CHECK_THROWS_AS((void)compute_mfcc(sig, cfg, "u"), Error);
}

TEST_CASE("mfcc of silence is one constant frame vector") {
  MfccConfig cfg;
  AudioSignal sig;
  sig.sample_rate = 16000;
  sig.samples.assign(1200, 0.0f);
  const FrameMatrix f = compute_mfcc(sig, cfg, "u");
  REQUIRE(f.values.rows == 6);
  for (int r = 1; r < f.values.rows; ++r) {
    for (int c = 0; c < f.values.cols; ++c) {
      CHECK(f.values.at(r, c) == f.values.at(0, c));
    }
  }
}

TEST_CASE("mfcc agrees with the naive DFT oracle on a 1 kHz sine") {
  MfccConfig cfg;
  AudioSignal sig;
  sig.sample_rate = 16000;
  sig.samples.resize(16000);
  for (size_t i = 0; i < sig.samples.size(); ++i) {
    sig.samples[i] =
        static_cast<float>(0.5 * std::sin(2.0 * 3.14159265358979 * 1000.0 *
                                          static_cast<double>(i) / 16000.0));
  }
  const FrameMatrix fast = compute_mfcc(sig, cfg, "u");
  const MatF slow = ref::mfcc_serial(sig.samples, sig.sample_rate, cfg);
  REQUIRE(fast.values.rows == slow.rows);
  for (int r = 1; r + 1 < fast.values.rows; ++r) {
    for (int c = 0; c < fast.values.cols; ++c) {
      CHECK(std::fabs(fast.values.at(r, c) - slow.at(r, c)) <= 1e-3);
    }
  }
}

TEST_CASE("mfcc agrees with the oracle on noise") {
  MfccConfig cfg;
  Rng rng(31);
  AudioSignal sig;
  sig.sample_rate = 16000;
  sig.samples.resize(1600);
  for (float& s : sig.samples) {
    s = static_cast<float>(0.3 * rng.gaussian());
  }
  const FrameMatrix fast = compute_mfcc(sig, cfg, "u");
  const MatF slow = ref::mfcc_serial(sig.samples, sig.sample_rate, cfg);
  REQUIRE(fast.values.rows == slow.rows);
  for (int r = 0; r < fast.values.rows; ++r) {
    for (int c = 0; c < fast.values.cols; ++c) {
      CHECK(std::fabs(fast.values.at(r, c) - slow.at(r, c)) <= 1e-4);
    }
  }
}

TEST_CASE("hop-multiple time shift drops leading frames") {
  MfccConfig cfg;
  Rng rng(32);
  AudioSignal sig;
  sig.sample_rate = 16000;
  sig.samples.resize(3200);
  for (float& s : sig.samples) s = static_cast<float>(0.3 * rng.gaussian());
  AudioSignal shifted;
  shifted.sample_rate = 16000;
  shifted.samples.assign(sig.samples.begin() + 160 * 2, sig.samples.end());
  const FrameMatrix a = compute_mfcc(sig, cfg, "u");
  const FrameMatrix b = compute_mfcc(shifted, cfg, "u");
  REQUIRE(b.values.rows == a.values.rows - 2);
  for (int r = 0; r < b.values.rows; ++r) {
    for (int c = 0; c < b.values.cols; ++c) {
      CHECK(std::fabs(b.values.at(r, c) - a.values.at(r + 2, c)) <= 1e-5);
    }
  }
}

TEST_CASE("normalize_features column statistics") {
  FrameMatrix f;
  f.values = MatF(2, 1);
  f.values.v = {1.0f, 3.0f};
  const FrameMatrix n = normalize_features(f);
  CHECK(n.values.at(0, 0) == doctest::Approx(-1.0));
  CHECK(n.values.at(1, 0) == doctest::Approx(1.0));

  FrameMatrix c;
  c.values = MatF(3, 1);
  c.values.v = {5.0f, 5.0f, 5.0f};
  const FrameMatrix cn = normalize_features(c);
  for (float v : cn.values.v) CHECK(v == 0.0f);

  Rng rng(33);
  FrameMatrix r;
  r.values = MatF(10, 4);
  for (float& x : r.values.v) x = static_cast<float>(rng.gaussian() * 3 + 1);
  const FrameMatrix rn = normalize_features(r);
  for (int col = 0; col < 4; ++col) {
    double mean = 0.0;
    for (int row = 0; row < 10; ++row) mean += rn.values.at(row, col);
    mean /= 10;
    double var = 0.0;
    for (int row = 0; row < 10; ++row) {
      const double d = rn.values.at(row, col) - mean;
      var += d * d;
    }
    CHECK(std::fabs(mean) < 1e-6);
    CHECK(std::fabs(std::sqrt(var / 10) - 1.0) < 1e-6);
  }

  // Idempotence.
  const FrameMatrix again = normalize_features(rn);
  for (size_t i = 0; i < again.values.v.size(); ++i) {
    CHECK(std::fabs(again.values.v[i] - rn.values.v[i]) < 1e-6);
  }
}
