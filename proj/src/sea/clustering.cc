// sea/clustering.cc

#include "sea/clustering.h"

#include <cmath>

#include "sea/error.h"

namespace sea {
namespace {

double norm(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

std::vector<double> segment_embedding(const MatF& z, const Segment& seg) {
  if (seg.start_frame < 0 || seg.end_frame <= seg.start_frame ||
      seg.end_frame > z.rows) {
    throw Error(Err::range_error, "segment outside embedding matrix");
  }
  std::vector<double> mean(static_cast<size_t>(z.cols), 0.0);
  for (int r = seg.start_frame; r < seg.end_frame; ++r) {
    const float* row = z.row(r);
    for (int c = 0; c < z.cols; ++c) mean[static_cast<size_t>(c)] += row[c];
  }
  const double count = seg.end_frame - seg.start_frame;
  for (double& x : mean) x /= count;
  const double len = norm(mean);
  if (len > 0.0) {
    for (double& x : mean) x /= len;
  }
  return mean;
}

std::pair<std::vector<int>, ClusterModel> grow_clusters(
    const std::vector<std::vector<double>>& embeddings, double threshold) {
  ClusterModel model;
  model.threshold = threshold;
  std::vector<int> ids;
  ids.reserve(embeddings.size());

  for (const std::vector<double>& e : embeddings) {
    const double elen = norm(e);
    if (elen == 0.0) {
      ids.push_back(0);
      ++model.zero_members;
      continue;
    }
    int best = -1;
    double best_cos = -1.0;
    for (size_t c = 0; c < model.centroids.size(); ++c) {
      const double cs = dot(e, model.centroids[c]) / elen;
      if (cs > best_cos) {
        best_cos = cs;
        best = static_cast<int>(c);
      }
    }
    if (best >= 0 && best_cos >= threshold) {
      std::vector<double>& sum = model.sums[static_cast<size_t>(best)];
      if (sum.size() != e.size()) {
        throw Error(Err::length_mismatch, "embedding width changed mid-run");
      }
      for (size_t i = 0; i < sum.size(); ++i) sum[i] += e[i];
      ++model.member_counts[static_cast<size_t>(best)];
      std::vector<double> centroid = sum;
      const double slen = norm(centroid);
      if (slen > 0.0) {
        for (double& x : centroid) x /= slen;
      }
      model.centroids[static_cast<size_t>(best)] = std::move(centroid);
      ids.push_back(best + 1);
    } else {
      std::vector<double> centroid = e;
      for (double& x : centroid) x /= elen;
      model.centroids.push_back(std::move(centroid));
      model.sums.push_back(e);
      model.member_counts.push_back(1);
      ids.push_back(static_cast<int>(model.centroids.size()));
    }
  }
  return {std::move(ids), std::move(model)};
}

std::vector<Segment> label_segments(const std::vector<Segment>& segments,
                                    const std::vector<int>& ids) {
  if (segments.size() != ids.size()) {
    throw Error(Err::length_mismatch, "segments and ids differ in length");
  }
  std::vector<Segment> out = segments;
  for (size_t i = 0; i < out.size(); ++i) out[i].cluster_id = ids[i];
  return out;
}

}  // namespace sea
