// sea/wav.h

#ifndef SEA_WAV_H_
#define SEA_WAV_H_

#include <string>
#include <vector>

namespace sea {

struct AudioSignal {
  std::vector<float> samples;  // in [-1, 1]
  int sample_rate = 0;
};

// Reads a RIFF/WAVE file. Only PCM, mono, 16-bit is accepted; samples are
// scaled by 1/32768. Unknown chunks are skipped.
// Errors: MissingFile, BadMagic, UnsupportedFormat, IoError (truncated data).
AudioSignal read_wav(const std::string& path);

}  // namespace sea

#endif  // SEA_WAV_H_
