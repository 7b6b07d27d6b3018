// sea/word_discovery.h

#ifndef SEA_WORD_DISCOVERY_H_
#define SEA_WORD_DISCOVERY_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sea/segmentation.h"

namespace sea {

// Virtual-phone ids of one utterance, in segment order.
struct PhoneSequence {
  std::string utt_id;
  std::vector<int> ids;
};

// Per-utterance, per-position coverage flags, aligned with the sequences.
using Coverage = std::vector<std::vector<char>>;

struct WordToken {
  std::string utt_id;
  int start_pos = 0;  // indices into the utterance's segment sequence
  int end_pos = 0;    // exclusive
  int start_frame = -1;  // filled by tokens_to_intervals
  int end_frame = -1;
  std::vector<int> phone_ids;
  int class_id = -1;
};

// Occurrence lists per distinct n-gram: (sequence index, position) pairs.
// An occurrence needs all n positions uncovered; per n-gram, occurrences
// are picked greedily left to right without overlap, walking sequences in
// their given (corpus) order. Only n-grams keeping at least two picked
// occurrences are returned.
std::map<std::vector<int>, std::vector<std::pair<int, int>>> count_recurring(
    const std::vector<PhoneSequence>& sequences, const Coverage& covered,
    int n);

// For n = max_n down to 2: commit recurring n-grams in order of selected
// occurrence count (descending), ties to the lexicographically smaller id
// sequence; occurrences are re-selected against current coverage at commit
// time and the commit is skipped if fewer than two survive. Remaining
// uncovered positions become unigram tokens. Class ids count up from 1 in
// first-commitment order; tokens share a class exactly when their phone id
// sequences are equal. Every position ends up in exactly one token.
std::vector<WordToken> discover_words(
    const std::vector<PhoneSequence>& sequences, int max_n = 3);

// Fills start/end frames from the constituent segments.
std::vector<WordToken> tokens_to_intervals(
    const std::vector<WordToken>& tokens,
    const std::map<std::string, std::vector<Segment>>& segments_by_utt);

// Challenge-style class file: "Class <id>" heading, one
// utt_id<TAB>start_s<TAB>end_s line per token, blank line between blocks.
struct TimedToken {
  std::string utt_id;
  double start_s = 0.0;
  double end_s = 0.0;
};

void write_words(const std::vector<WordToken>& tokens, double frame_period_s,
                 const std::string& path);
std::map<int, std::vector<TimedToken>> read_words(const std::string& path);

}  // namespace sea

#endif  // SEA_WORD_DISCOVERY_H_
