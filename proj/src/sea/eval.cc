// sea/eval.cc

#include "sea/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include "sea/error.h"
#include "sea/io_util.h"

namespace sea {
namespace {

double harmonic(double p, double r) {
  return (p + r > 0.0) ? 2.0 * p * r / (p + r) : 0.0;
}

}  // namespace

int edit_distance(const std::vector<std::string>& a,
                  const std::vector<std::string>& b) {
  const size_t la = a.size();
  const size_t lb = b.size();
  std::vector<int> prev(lb + 1), cur(lb + 1);
  for (size_t j = 0; j <= lb; ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= la; ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= lb; ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[lb];
}

std::vector<std::string> transcribe_interval(const GoldAlignment& gold,
                                             double start_s, double end_s,
                                             const EvalConfig& cfg) {
  if (!(start_s < end_s)) {
    throw Error(Err::range_error, "interval start must precede end");
  }
  std::vector<std::string> out;
  for (const AlignedUnit& p : gold.phones) {
    const double overlap =
        std::min(end_s, p.end_s) - std::max(start_s, p.start_s);
    if (overlap <= 0.0) continue;
    const double dur = p.end_s - p.start_s;
    if (overlap >= cfg.overlap_min_fraction * dur ||
        overlap >= cfg.overlap_min_s) {
      out.push_back(p.label);
    }
  }
  return out;
}

NedResult ned(const std::map<int, std::vector<std::vector<std::string>>>&
                  transcriptions) {
  double sum = 0.0;
  long pairs = 0;
  for (const auto& [cls, toks] : transcriptions) {
    (void)cls;
    for (size_t i = 0; i < toks.size(); ++i) {
      for (size_t j = i + 1; j < toks.size(); ++j) {
        const int dist = edit_distance(toks[i], toks[j]);
        const size_t denom = std::max({toks[i].size(), toks[j].size(),
                                       static_cast<size_t>(1)});
        sum += static_cast<double>(dist) / static_cast<double>(denom);
        ++pairs;
      }
    }
  }
  NedResult r;
  if (pairs == 0) {
    r.no_pairs = true;
    return r;
  }
  r.value = sum / static_cast<double>(pairs);
  return r;
}

double coverage(const std::vector<TimedToken>& tokens,
                const std::map<std::string, GoldAlignment>& gold,
                const EvalConfig& cfg) {
  std::map<std::string, std::vector<const TimedToken*>> by_utt;
  for (const TimedToken& t : tokens) by_utt[t.utt_id].push_back(&t);

  long total = 0;
  long covered = 0;
  for (const auto& [utt, align] : gold) {
    const auto it = by_utt.find(utt);
    for (const AlignedUnit& p : align.phones) {
      ++total;
      if (it == by_utt.end()) continue;
      const double dur = p.end_s - p.start_s;
      for (const TimedToken* t : it->second) {
        const double overlap =
            std::min(t->end_s, p.end_s) - std::max(t->start_s, p.start_s);
        if (overlap <= 0.0) continue;
        if (overlap >= cfg.overlap_min_fraction * dur ||
            overlap >= cfg.overlap_min_s) {
          ++covered;
          break;
        }
      }
    }
  }
  return (total > 0) ? static_cast<double>(covered) / static_cast<double>(total)
                     : 0.0;
}

PRF boundary_prf(const std::map<std::string, std::vector<double>>& hyp,
                 const std::map<std::string, std::vector<double>>& gold,
                 double tolerance_s) {
  long hyp_total = 0;
  long gold_total = 0;
  long matched = 0;
  for (const auto& [utt, gl] : gold) gold_total += static_cast<long>(gl.size());

  for (const auto& [utt, hl] : hyp) {
    hyp_total += static_cast<long>(hl.size());
    const auto git = gold.find(utt);
    if (git == gold.end()) continue;
    const std::vector<double>& gl = git->second;
    std::vector<char> taken(gl.size(), 0);
    for (double h : hl) {
      int best = -1;
      double best_dist = tolerance_s;
      for (size_t gi = 0; gi < gl.size(); ++gi) {
        if (taken[gi]) continue;
        const double dist = std::fabs(h - gl[gi]);
        if (dist < best_dist || (dist == best_dist && best < 0)) {
          best_dist = dist;
          best = static_cast<int>(gi);
        }
      }
      if (best >= 0) {
        taken[static_cast<size_t>(best)] = 1;
        ++matched;
      }
    }
  }
  PRF out;
  out.precision = (hyp_total > 0)
                      ? static_cast<double>(matched) / static_cast<double>(hyp_total)
                      : 0.0;
  out.recall = (gold_total > 0)
                   ? static_cast<double>(matched) / static_cast<double>(gold_total)
                   : 0.0;
  out.fscore = harmonic(out.precision, out.recall);
  return out;
}

std::pair<PRF, PRF> token_type_prf(
    const std::map<int, std::vector<TimedToken>>& classes,
    const std::map<std::string, GoldAlignment>& gold, const EvalConfig& cfg) {
  const double tol = cfg.boundary_tolerance_s;

  // Token matching, per utterance, greedy by summed edge distance.
  struct Hyp {
    double start, end;
  };
  std::map<std::string, std::vector<Hyp>> hyp_by_utt;
  long hyp_total = 0;
  for (const auto& [cls, toks] : classes) {
    (void)cls;
    for (const TimedToken& t : toks) {
      hyp_by_utt[t.utt_id].push_back({t.start_s, t.end_s});
      ++hyp_total;
    }
  }
  long gold_total = 0;
  for (const auto& [utt, align] : gold) {
    gold_total += static_cast<long>(align.words.size());
  }

  long matched = 0;
  for (auto& [utt, hyps] : hyp_by_utt) {
    const auto git = gold.find(utt);
    if (git == gold.end()) continue;
    const std::vector<AlignedUnit>& words = git->second.words;
    std::vector<char> taken(words.size(), 0);
    std::sort(hyps.begin(), hyps.end(),
              [](const Hyp& a, const Hyp& b) { return a.start < b.start; });
    for (const Hyp& h : hyps) {
      int best = -1;
      double best_dist = 2.0 * tol + 1.0;
      for (size_t wi = 0; wi < words.size(); ++wi) {
        if (taken[wi]) continue;
        const double ds = std::fabs(h.start - words[wi].start_s);
        const double de = std::fabs(h.end - words[wi].end_s);
        if (ds > tol || de > tol) continue;
        const double dist = ds + de;
        if (dist < best_dist) {
          best_dist = dist;
          best = static_cast<int>(wi);
        }
      }
      if (best >= 0) {
        taken[static_cast<size_t>(best)] = 1;
        ++matched;
      }
    }
  }
  PRF token;
  token.precision = (hyp_total > 0)
                        ? static_cast<double>(matched) / static_cast<double>(hyp_total)
                        : 0.0;
  token.recall = (gold_total > 0)
                     ? static_cast<double>(matched) / static_cast<double>(gold_total)
                     : 0.0;
  token.fscore = harmonic(token.precision, token.recall);

  // Type sets: majority transcription per discovered class (ties to the
  // lexicographically smallest) against distinct gold word transcriptions.
  std::set<std::vector<std::string>> discovered_types;
  for (const auto& [cls, toks] : classes) {
    (void)cls;
    if (toks.empty()) continue;
    std::map<std::vector<std::string>, int> votes;
    for (const TimedToken& t : toks) {
      const auto git = gold.find(t.utt_id);
      std::vector<std::string> tr;
      if (git != gold.end() && t.start_s < t.end_s) {
        tr = transcribe_interval(git->second, t.start_s, t.end_s, cfg);
      }
      ++votes[tr];
    }
    const std::vector<std::string>* best = nullptr;
    int best_votes = 0;
    for (const auto& [tr, count] : votes) {
      if (count > best_votes) {  // map order makes ties lexicographic
        best_votes = count;
        best = &tr;
      }
    }
    discovered_types.insert(*best);
  }
  std::set<std::vector<std::string>> gold_types;
  for (const auto& [utt, align] : gold) {
    for (const AlignedUnit& w : align.words) {
      gold_types.insert(
          transcribe_interval(align, w.start_s, w.end_s, cfg));
    }
  }
  long common = 0;
  for (const auto& t : discovered_types) {
    if (gold_types.count(t)) ++common;
  }
  PRF type;
  type.precision = (!discovered_types.empty())
                       ? static_cast<double>(common) /
                             static_cast<double>(discovered_types.size())
                       : 0.0;
  type.recall = (!gold_types.empty())
                    ? static_cast<double>(common) /
                          static_cast<double>(gold_types.size())
                    : 0.0;
  type.fscore = harmonic(type.precision, type.recall);
  return {token, type};
}

Metrics evaluate_tokens(const std::map<int, std::vector<TimedToken>>& classes,
                        const std::map<std::string, GoldAlignment>& gold,
                        const EvalConfig& cfg) {
  Metrics m;

  std::map<int, std::vector<std::vector<std::string>>> transcriptions;
  std::vector<TimedToken> flat;
  for (const auto& [cls, toks] : classes) {
    auto& list = transcriptions[cls];
    for (const TimedToken& t : toks) {
      flat.push_back(t);
      const auto git = gold.find(t.utt_id);
      if (git != gold.end() && t.start_s < t.end_s) {
        list.push_back(transcribe_interval(git->second, t.start_s, t.end_s, cfg));
      } else {
        list.emplace_back();
      }
    }
  }
  const NedResult nr = ned(transcriptions);
  m.ned = nr.value;
  m.ned_no_pairs = nr.no_pairs;
  m.coverage = coverage(flat, gold, cfg);

  std::map<std::string, std::set<double>> hyp_set, gold_set;
  for (const TimedToken& t : flat) {
    hyp_set[t.utt_id].insert(t.start_s);
    hyp_set[t.utt_id].insert(t.end_s);
  }
  for (const auto& [utt, align] : gold) {
    for (const AlignedUnit& w : align.words) {
      gold_set[utt].insert(w.start_s);
      gold_set[utt].insert(w.end_s);
    }
  }
  std::map<std::string, std::vector<double>> hyp_b, gold_b;
  for (const auto& [utt, s] : hyp_set) hyp_b[utt].assign(s.begin(), s.end());
  for (const auto& [utt, s] : gold_set) gold_b[utt].assign(s.begin(), s.end());
  m.boundary = boundary_prf(hyp_b, gold_b, cfg.boundary_tolerance_s);

  const auto [token, type] = token_type_prf(classes, gold, cfg);
  m.token = token;
  m.type = type;
  return m;
}

namespace {

std::vector<std::pair<std::string, double>> metric_rows(const Metrics& m) {
  return {{"ned", m.ned},
          {"coverage", m.coverage},
          {"boundary_p", m.boundary.precision},
          {"boundary_r", m.boundary.recall},
          {"boundary_f", m.boundary.fscore},
          {"token_p", m.token.precision},
          {"token_r", m.token.recall},
          {"token_f", m.token.fscore},
          {"type_p", m.type.precision},
          {"type_r", m.type.recall},
          {"type_f", m.type.fscore}};
}

}  // namespace

void write_metrics(const Metrics& m, const std::string& txt_path,
                   const std::string& tsv_path) {
  char buf[64];
  {
    std::ofstream os(txt_path);
    if (!os) throw Error(Err::io_error, "cannot open for write: " + txt_path);
    for (const auto& [key, value] : metric_rows(m)) {
      std::snprintf(buf, sizeof(buf), "%.6f", value);
      os << key << ": " << buf << '\n';
    }
    if (m.ned_no_pairs) {
      os << "# warning: no within-class token pairs; ned reported as 0\n";
    }
    if (!os) throw Error(Err::io_error, "write failed: " + txt_path);
  }
  {
    std::ofstream os(tsv_path);
    if (!os) throw Error(Err::io_error, "cannot open for write: " + tsv_path);
    for (const auto& [key, value] : metric_rows(m)) {
      std::snprintf(buf, sizeof(buf), "%.6f", value);
      os << key << '\t' << buf << '\n';
    }
    if (!os) throw Error(Err::io_error, "write failed: " + tsv_path);
  }
}

std::map<std::string, double> read_metrics_tsv(const std::string& path) {
  const std::string text = read_text_file(path);
  std::map<std::string, double> out;
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
    if (fields.size() != 2) {
      throw Error(Err::parse_error,
                  path + " line " + std::to_string(line_no) + ": bad row");
    }
    try {
      out[fields[0]] = std::stod(fields[1]);
    } catch (const std::logic_error&) {
      throw Error(Err::parse_error,
                  path + " line " + std::to_string(line_no) + ": bad value");
    }
  }
  return out;
}

}  // namespace sea
