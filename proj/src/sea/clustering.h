// sea/clustering.h

#ifndef SEA_CLUSTERING_H_
#define SEA_CLUSTERING_H_

#include <utility>
#include <vector>

#include "sea/mat.h"
#include "sea/segmentation.h"

namespace sea {

struct ClusterConfig {
  double threshold = 0.6;  // cosine needed to join an existing cluster
};

// Single-pass threshold-growing state. Cluster ids start at 1; id 0 is
// reserved for all-zero segment embeddings, which never touch centroid math.
struct ClusterModel {
  std::vector<std::vector<double>> centroids;  // unit norm, id = index + 1
  std::vector<std::vector<double>> sums;       // raw embedding sums per cluster
  std::vector<int> member_counts;
  double threshold = 0.6;
  int zero_members = 0;
};

// Mean of Z rows [start, end), then length-normalized; an all-zero mean is
// returned as the zero vector.
std::vector<double> segment_embedding(const MatF& z, const Segment& seg);

// Processes embeddings in their given order (callers supply corpus order:
// utt_id lexicographic, then start_frame). Each embedding joins the best
// existing cluster when the cosine reaches the threshold (ties to the
// lowest id) and the centroid becomes the re-normalized running mean of its
// raw members; otherwise it opens a new cluster.
std::pair<std::vector<int>, ClusterModel> grow_clusters(
    const std::vector<std::vector<double>>& embeddings, double threshold);

// Attaches ids to segments, index by index.
std::vector<Segment> label_segments(const std::vector<Segment>& segments,
                                    const std::vector<int>& ids);

}  // namespace sea

#endif  // SEA_CLUSTERING_H_
