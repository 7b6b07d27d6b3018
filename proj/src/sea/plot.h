// sea/plot.h

#ifndef SEA_PLOT_H_
#define SEA_PLOT_H_

#include <string>
#include <vector>

#include "sea/mat.h"

namespace sea {

// Binary PPM ("P6 N N 255" header) of the similarity matrix: gray level
// round(255 * clamp(G_ij, 0, 1)) on all channels, hypothesis boundary rows
// and columns overdrawn blue, gold red (red wins where they overlap).
// Boundary values outside [0, N) are ignored.
void emit_similarity_plot(const MatF& g, const std::vector<int>& hyp_boundaries,
                          const std::vector<int>& gold_boundaries,
                          const std::string& path);

}  // namespace sea

#endif  // SEA_PLOT_H_
