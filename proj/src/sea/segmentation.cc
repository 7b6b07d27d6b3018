// sea/segmentation.cc

#include "sea/segmentation.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "sea/error.h"
#include "sea/io_util.h"
#include "sea/self_express.h"

namespace sea {

void validate_config(const SegConfig& cfg) {
  if (cfg.min_frames < 1 || cfg.min_frames >= cfg.max_frames) {
    throw Error(Err::range_error, "need 1 <= min_frames < max_frames");
  }
  if (cfg.tau < 1) throw Error(Err::range_error, "tau must be >= 1");
}

MatF similarity_matrix(const MatF& z) {
  if (z.rows < 1) throw Error(Err::range_error, "empty embedding matrix");
  return cosine_gram(z, 1e-8);
}

std::vector<double> adaptive_thresholds(const MatF& g, bool exclude_diagonal) {
  if (g.rows != g.cols) throw Error(Err::not_square, "adaptive_thresholds");
  const int n = g.rows;
  std::vector<double> eps(static_cast<size_t>(n));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const float* row = g.row(i);
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += static_cast<double>(row[j]);
    if (exclude_diagonal) {
      sum -= static_cast<double>(g.at(i, i));
      eps[static_cast<size_t>(i)] = (n > 1) ? sum / (n - 1) : 0.0;
    } else {
      eps[static_cast<size_t>(i)] = sum / n;
    }
  }
  return eps;
}

std::vector<int> predict_endpoints(const MatF& g,
                                   const std::vector<double>& eps,
                                   const SegConfig& cfg) {
  validate_config(cfg);
  if (g.rows != g.cols) throw Error(Err::not_square, "predict_endpoints");
  const int n = g.rows;
  if (static_cast<int>(eps.size()) != n) {
    throw Error(Err::length_mismatch, "thresholds do not match matrix size");
  }
  std::vector<int> preds(static_cast<size_t>(n));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const int hi = std::min(i + cfg.max_frames, n - 1);
    int pred = hi;
    for (int j = i + cfg.min_frames; j <= hi; ++j) {
      if (j + cfg.tau - 1 >= n) break;  // run would probe past the end
      bool dissimilar = true;
      for (int t = 0; t < cfg.tau; ++t) {
        if (!(static_cast<double>(g.at(i, j + t)) < eps[static_cast<size_t>(i)])) {
          dissimilar = false;
          break;
        }
      }
      if (dissimilar) {
        pred = j;
        break;
      }
    }
    preds[static_cast<size_t>(i)] = pred;
  }
  return preds;
}

std::vector<int> vote_boundaries(const std::vector<int>& predictions, int n,
                                 const SegConfig& cfg) {
  validate_config(cfg);
  if (n < 1) throw Error(Err::range_error, "vote_boundaries needs n >= 1");
  std::vector<int> count(static_cast<size_t>(n) + 1, 0);
  for (int p : predictions) {
    if (p < 0 || p >= n) {
      throw Error(Err::index_error, "prediction outside [0, N)");
    }
    ++count[static_cast<size_t>(p)];
  }

  // Local peaks: strictly above the left neighbor, at least the right one.
  std::vector<std::pair<int, int>> cands;  // (count, frame)
  for (int j = 0; j < n; ++j) {
    const int here = count[static_cast<size_t>(j)];
    const int left = (j > 0) ? count[static_cast<size_t>(j) - 1] : 0;
    const int right = count[static_cast<size_t>(j) + 1];
    if (here >= 1 && here > left && here >= right) cands.emplace_back(here, j);
  }
  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  std::vector<int> accepted = {0, n};  // implicit utterance edges
  std::vector<int> emitted;
  for (const auto& [cnt, frame] : cands) {
    (void)cnt;
    bool clear = true;
    for (int b : accepted) {
      if (std::abs(frame - b) < cfg.min_frames) {
        clear = false;
        break;
      }
    }
    if (clear) {
      accepted.push_back(frame);
      emitted.push_back(frame);
    }
  }
  std::sort(emitted.begin(), emitted.end());

  // Duration cap: split any remaining over-long span at max_frames steps.
  std::vector<int> walls = {0};
  walls.insert(walls.end(), emitted.begin(), emitted.end());
  walls.push_back(n);
  std::vector<int> out;
  for (size_t i = 0; i + 1 < walls.size(); ++i) {
    if (walls[i] > 0) out.push_back(walls[i]);
    for (int s = walls[i] + cfg.max_frames; s < walls[i + 1];
         s += cfg.max_frames) {
      out.push_back(s);
    }
  }
  return out;
}

std::vector<Segment> segment_utterance(const MatF& z, const SegConfig& cfg,
                                       const std::string& utt_id) {
  validate_config(cfg);
  const int n = z.rows;
  if (n < 1) throw Error(Err::range_error, "empty utterance");
  const MatF g = similarity_matrix(z);
  const std::vector<double> eps = adaptive_thresholds(g, cfg.eps_exclude_diagonal);
  const std::vector<int> preds = predict_endpoints(g, eps, cfg);
  const std::vector<int> bounds = vote_boundaries(preds, n, cfg);

  std::vector<Segment> out;
  int prev = 0;
  for (int b : bounds) {
    out.push_back({utt_id, prev, b, -1});
    prev = b;
  }
  out.push_back({utt_id, prev, n, -1});
  return out;
}

void write_segments(const std::vector<Segment>& segments,
                    const std::string& path, bool include_cluster) {
  std::ofstream os(path);
  if (!os) throw Error(Err::io_error, "cannot open for write: " + path);
  for (const Segment& s : segments) {
    os << s.utt_id << '\t' << s.start_frame << '\t' << s.end_frame;
    if (include_cluster) os << '\t' << s.cluster_id;
    os << '\n';
  }
  if (!os) throw Error(Err::io_error, "write failed: " + path);
}

std::vector<Segment> read_segments(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<Segment> out;
  size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 3 && fields.size() != 4) {
      throw Error(Err::parse_error,
                  path + " line " + std::to_string(line_no) +
                      ": expected utt_id start end [cluster]");
    }
    Segment s;
    s.utt_id = fields[0];
    try {
      s.start_frame = std::stoi(fields[1]);
      s.end_frame = std::stoi(fields[2]);
      s.cluster_id = (fields.size() == 4) ? std::stoi(fields[3]) : -1;
    } catch (const std::logic_error&) {
      throw Error(Err::parse_error, path + " line " + std::to_string(line_no) +
                                        ": bad integer field");
    }
    if (s.start_frame < 0 || s.end_frame <= s.start_frame) {
      throw Error(Err::parse_error, path + " line " + std::to_string(line_no) +
                                        ": bad frame range");
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace sea
