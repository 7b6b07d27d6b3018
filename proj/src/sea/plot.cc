// sea/plot.cc

#include "sea/plot.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "sea/error.h"

namespace sea {

void emit_similarity_plot(const MatF& g, const std::vector<int>& hyp_boundaries,
                          const std::vector<int>& gold_boundaries,
                          const std::string& path) {
  if (g.rows != g.cols) throw Error(Err::not_square, "similarity plot input");
  const int n = g.rows;

  std::vector<char> hyp(static_cast<size_t>(n), 0), gold(static_cast<size_t>(n), 0);
  for (int b : hyp_boundaries) {
    if (b >= 0 && b < n) hyp[static_cast<size_t>(b)] = 1;
  }
  for (int b : gold_boundaries) {
    if (b >= 0 && b < n) gold[static_cast<size_t>(b)] = 1;
  }

  std::vector<uint8_t> pixels(static_cast<size_t>(n) * n * 3);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      uint8_t* px = pixels.data() + (static_cast<size_t>(i) * n + j) * 3;
      if (gold[static_cast<size_t>(i)] || gold[static_cast<size_t>(j)]) {
        px[0] = 255;
        px[1] = 0;
        px[2] = 0;
      } else if (hyp[static_cast<size_t>(i)] || hyp[static_cast<size_t>(j)]) {
        px[0] = 0;
        px[1] = 0;
        px[2] = 255;
      } else {
        const double v = std::clamp(static_cast<double>(g.at(i, j)), 0.0, 1.0);
        const auto gray = static_cast<uint8_t>(std::lround(255.0 * v));
        px[0] = gray;
        px[1] = gray;
        px[2] = gray;
      }
    }
  }

  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Err::io_error, "cannot open for write: " + path);
  os << "P6 " << n << ' ' << n << " 255\n";
  os.write(reinterpret_cast<const char*>(pixels.data()),
           static_cast<std::streamsize>(pixels.size()));
  if (!os) throw Error(Err::io_error, "write failed: " + path);
}

}  // namespace sea
