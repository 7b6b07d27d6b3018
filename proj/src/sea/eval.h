// sea/eval.h

#ifndef SEA_EVAL_H_
#define SEA_EVAL_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sea/alignment.h"
#include "sea/word_discovery.h"

namespace sea {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
};

struct EvalConfig {
  double boundary_tolerance_s = 0.03;
  double overlap_min_fraction = 0.5;
  double overlap_min_s = 0.03;
};

// Levenshtein distance with unit costs.
int edit_distance(const std::vector<std::string>& a,
                  const std::vector<std::string>& b);

// Gold phones overlapping [start_s, end_s) by at least
// overlap_min_fraction of their duration or at least overlap_min_s,
// in temporal order.
std::vector<std::string> transcribe_interval(const GoldAlignment& gold,
                                             double start_s, double end_s,
                                             const EvalConfig& cfg);

struct NedResult {
  double value = 0.0;
  bool no_pairs = false;  // no class had two tokens; value reported as 0
};

// Mean of edit_distance/max(len_a, len_b, 1) over every unordered token
// pair within every class of size >= 2.
NedResult ned(
    const std::map<int, std::vector<std::vector<std::string>>>& transcriptions);

// Fraction of gold phones covered by at least one token under the
// transcribe_interval inclusion rule.
double coverage(const std::vector<TimedToken>& tokens,
                const std::map<std::string, GoldAlignment>& gold,
                const EvalConfig& cfg);

// Greedy temporal matching: each hyp boundary takes the nearest unmatched
// gold boundary within tolerance (earlier gold on distance ties).
// P = matched/|hyp|, R = matched/|gold|; an empty side makes its ratio 0.
PRF boundary_prf(const std::map<std::string, std::vector<double>>& hyp,
                 const std::map<std::string, std::vector<double>>& gold,
                 double tolerance_s);

// Token: a discovered token is correct when both edges fall within
// tolerance of a gold word it is matched to one-to-one (greedy by edge
// distance). Type: majority transcription per discovered class versus the
// set of distinct gold word phone sequences.
std::pair<PRF, PRF> token_type_prf(
    const std::map<int, std::vector<TimedToken>>& classes,
    const std::map<std::string, GoldAlignment>& gold, const EvalConfig& cfg);

struct Metrics {
  double ned = 0.0;
  bool ned_no_pairs = false;
  double coverage = 0.0;
  PRF boundary;
  PRF token;
  PRF type;
};

// Full scoring of a discovered-word class map against gold alignments.
Metrics evaluate_tokens(const std::map<int, std::vector<TimedToken>>& classes,
                        const std::map<std::string, GoldAlignment>& gold,
                        const EvalConfig& cfg);

// key: value report plus a key<TAB>value flat file of the same numbers.
void write_metrics(const Metrics& m, const std::string& txt_path,
                   const std::string& tsv_path);
std::map<std::string, double> read_metrics_tsv(const std::string& path);

}  // namespace sea

#endif  // SEA_EVAL_H_
