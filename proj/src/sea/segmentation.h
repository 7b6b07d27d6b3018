// sea/segmentation.h

#ifndef SEA_SEGMENTATION_H_
#define SEA_SEGMENTATION_H_

#include <string>
#include <vector>

#include "sea/mat.h"

namespace sea {

struct SegConfig {
  int tau = 2;
  int min_frames = 2;   // 20 ms at a 10 ms hop
  int max_frames = 50;  // 500 ms
  // Row-mean threshold variant: drop the diagonal term from epsilon_i.
  bool eps_exclude_diagonal = false;
};

void validate_config(const SegConfig& cfg);

struct Segment {
  std::string utt_id;
  int start_frame = 0;
  int end_frame = 0;   // exclusive
  int cluster_id = -1; // assigned by the clustering stage; -1 = unassigned
};

// Frame-by-frame cosine self-similarity with the diagonal kept.
MatF similarity_matrix(const MatF& z);

// epsilon_i = mean of row i (diagonal included unless excluded by flag).
std::vector<double> adaptive_thresholds(const MatF& g,
                                        bool exclude_diagonal = false);

// For each frame i: the smallest j in [i+min_frames, min(i+max_frames, N-1)]
// whose next tau similarities G(i, j..j+tau-1) all fall below epsilon_i,
// with every probe inside the utterance; otherwise min(i+max_frames, N-1).
// The predicted index is the first frame of the next segment.
std::vector<int> predict_endpoints(const MatF& g,
                                   const std::vector<double>& eps,
                                   const SegConfig& cfg);

// Counts predictions per frame, keeps local peaks (strictly above the left
// neighbor, at least the right one), then accepts peaks by descending count
// (leftmost first on ties), dropping any candidate within min_frames of an
// accepted boundary; frame 0 and N are pre-accepted and never emitted.
// Segments still longer than max_frames are split at max_frames intervals.
// Returns sorted interior boundaries.
std::vector<int> vote_boundaries(const std::vector<int>& predictions, int n,
                                 const SegConfig& cfg);

// Composition of the four steps; the result tiles [0, N).
std::vector<Segment> segment_utterance(const MatF& z, const SegConfig& cfg,
                                       const std::string& utt_id = "");

// Text format: utt_id, start_frame, end_frame, optionally cluster_id,
// tab-separated, one segment per line.
void write_segments(const std::vector<Segment>& segments,
                    const std::string& path, bool include_cluster);
std::vector<Segment> read_segments(const std::string& path);

}  // namespace sea

#endif  // SEA_SEGMENTATION_H_
