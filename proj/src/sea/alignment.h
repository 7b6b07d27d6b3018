// sea/alignment.h

#ifndef SEA_ALIGNMENT_H_
#define SEA_ALIGNMENT_H_

#include <map>
#include <string>
#include <vector>

namespace sea {

struct AlignedUnit {
  std::string label;
  double start_s = 0.0;
  double end_s = 0.0;
};

// Time-aligned transcription for one utterance. Each tier is sorted by
// start time and free of overlaps; every unit has end_s > start_s.
struct GoldAlignment {
  std::string utt_id;
  std::vector<AlignedUnit> phones;
  std::vector<AlignedUnit> words;
};

// Parses one tier file, lines of `utt_id<TAB>start_s<TAB>end_s<TAB>label`.
// Records are grouped by utterance and sorted by start time. The parsed
// tier lands in the `phones` slot; callers wanting both tiers should use
// load_alignments. Throws ParseError (with line number) on malformed
// lines and OverlapError when units in one utterance overlap.
std::vector<GoldAlignment> parse_alignment(const std::string& path);

// Reads a phone tier and a word tier and merges them per utterance.
std::map<std::string, GoldAlignment> load_alignments(
    const std::string& phn_path, const std::string& wrd_path);

}  // namespace sea

#endif  // SEA_ALIGNMENT_H_
