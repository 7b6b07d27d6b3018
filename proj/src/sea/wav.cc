// sea/wav.cc

#include "sea/wav.h"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "sea/error.h"
#include "sea/io_util.h"

namespace sea {

namespace {

std::string read_tag(std::istream& is) {
  char tag[4];
  is.read(tag, 4);
  if (is.gcount() != 4) throw Error(Err::io_error, "truncated wav header");
  return std::string(tag, 4);
}

}  // namespace

AudioSignal read_wav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Err::missing_file, path);

  if (read_tag(is) != "RIFF") throw Error(Err::bad_magic, path + " is not RIFF");
  read_u32(is);  // riff payload size, unused
  if (read_tag(is) != "WAVE") throw Error(Err::bad_magic, path + " is not WAVE");

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  AudioSignal out;

  while (true) {
    char tag[4];
    is.read(tag, 4);
    if (is.gcount() == 0) break;  // clean end of chunk list
    if (is.gcount() != 4) throw Error(Err::io_error, "truncated chunk header");
    uint32_t size = read_u32(is);

    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (size < 16) throw Error(Err::io_error, "fmt chunk too small");
      format = read_u16(is);
      channels = read_u16(is);
      rate = read_u32(is);
      read_u32(is);  // byte rate
      read_u16(is);  // block align
      bits = read_u16(is);
      is.ignore(size - 16 + (size & 1));
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!have_fmt) throw Error(Err::io_error, "data chunk before fmt");
      if (format != 1) throw Error(Err::unsupported_format, "non-PCM wav");
      if (channels != 1) throw Error(Err::unsupported_format, "non-mono wav");
      if (bits != 16) throw Error(Err::unsupported_format, "non-16-bit wav");
      size_t n = size / 2;
      std::vector<int16_t> raw(n);
      is.read(reinterpret_cast<char*>(raw.data()),
              static_cast<std::streamsize>(size & ~1u));
      if (static_cast<uint32_t>(is.gcount()) != (size & ~1u))
        throw Error(Err::io_error, "truncated data chunk");
      out.samples.resize(n);
      for (size_t i = 0; i < n; ++i)
        out.samples[i] = static_cast<float>(raw[i]) / 32768.0f;
      out.sample_rate = static_cast<int>(rate);
      return out;
    } else {
      is.ignore(size + (size & 1));
      if (!is) throw Error(Err::io_error, "truncated chunk body");
    }
  }
  throw Error(Err::io_error, path + " has no data chunk");
}

}  // namespace sea
