// sea/word_discovery.cc

#include "sea/word_discovery.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include "sea/error.h"
#include "sea/io_util.h"

namespace sea {
namespace {

// Greedy left-to-right non-overlapping occurrences of one n-gram over the
// uncovered positions, in corpus order.
std::vector<std::pair<int, int>> select_occurrences(
    const std::vector<PhoneSequence>& sequences, const Coverage& covered,
    const std::vector<int>& gram) {
  const int n = static_cast<int>(gram.size());
  std::vector<std::pair<int, int>> picks;
  for (size_t s = 0; s < sequences.size(); ++s) {
    const std::vector<int>& ids = sequences[s].ids;
    const std::vector<char>& mask = covered[s];
    int pos = 0;
    const int limit = static_cast<int>(ids.size()) - n;
    while (pos <= limit) {
      bool match = true;
      for (int t = 0; t < n; ++t) {
        if (ids[static_cast<size_t>(pos + t)] != gram[static_cast<size_t>(t)] ||
            mask[static_cast<size_t>(pos + t)]) {
          match = false;
          break;
        }
      }
      if (match) {
        picks.emplace_back(static_cast<int>(s), pos);
        pos += n;
      } else {
        ++pos;
      }
    }
  }
  return picks;
}

}  // namespace

std::map<std::vector<int>, std::vector<std::pair<int, int>>> count_recurring(
    const std::vector<PhoneSequence>& sequences, const Coverage& covered,
    int n) {
  if (n < 1) throw Error(Err::range_error, "n must be >= 1");
  if (covered.size() != sequences.size()) {
    throw Error(Err::length_mismatch, "coverage does not match sequences");
  }
  // Candidate grams: every fully uncovered run of length n.
  std::set<std::vector<int>> grams;
  for (size_t s = 0; s < sequences.size(); ++s) {
    const std::vector<int>& ids = sequences[s].ids;
    const std::vector<char>& mask = covered[s];
    if (mask.size() != ids.size()) {
      throw Error(Err::length_mismatch, "coverage mask length");
    }
    for (int pos = 0; pos + n <= static_cast<int>(ids.size()); ++pos) {
      bool open = true;
      for (int t = 0; t < n; ++t) {
        if (mask[static_cast<size_t>(pos + t)]) {
          open = false;
          break;
        }
      }
      if (open) {
        grams.insert(std::vector<int>(ids.begin() + pos, ids.begin() + pos + n));
      }
    }
  }
  std::map<std::vector<int>, std::vector<std::pair<int, int>>> out;
  for (const std::vector<int>& gram : grams) {
    std::vector<std::pair<int, int>> picks =
        select_occurrences(sequences, covered, gram);
    if (picks.size() >= 2) out[gram] = std::move(picks);
  }
  return out;
}

std::vector<WordToken> discover_words(
    const std::vector<PhoneSequence>& sequences, int max_n) {
  if (sequences.empty()) throw Error(Err::empty_corpus, "no phone sequences");
  if (max_n < 1) throw Error(Err::range_error, "max_n must be >= 1");

  Coverage covered;
  covered.reserve(sequences.size());
  for (const PhoneSequence& s : sequences) {
    covered.emplace_back(s.ids.size(), 0);
  }

  std::map<std::vector<int>, int> class_of;
  int next_class = 1;
  auto class_id_for = [&](const std::vector<int>& gram) {
    auto it = class_of.find(gram);
    if (it != class_of.end()) return it->second;
    class_of.emplace(gram, next_class);
    return next_class++;
  };

  std::vector<WordToken> tokens;
  auto commit = [&](int seq_idx, int pos, const std::vector<int>& gram) {
    const int n = static_cast<int>(gram.size());
    WordToken tok;
    tok.utt_id = sequences[static_cast<size_t>(seq_idx)].utt_id;
    tok.start_pos = pos;
    tok.end_pos = pos + n;
    tok.phone_ids = gram;
    tok.class_id = class_id_for(gram);
    tokens.push_back(std::move(tok));
    for (int t = 0; t < n; ++t) {
      covered[static_cast<size_t>(seq_idx)][static_cast<size_t>(pos + t)] = 1;
    }
  };

  for (int n = max_n; n >= 2; --n) {
    const auto recurring = count_recurring(sequences, covered, n);
    // Commit order: more selected occurrences first, then smaller sequence.
    std::vector<std::pair<std::vector<int>, size_t>> order;
    order.reserve(recurring.size());
    for (const auto& [gram, picks] : recurring) {
      order.emplace_back(gram, picks.size());
    }
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    for (const auto& [gram, count] : order) {
      (void)count;
      // Earlier commits this level may have covered positions; re-pick.
      const std::vector<std::pair<int, int>> picks =
          select_occurrences(sequences, covered, gram);
      if (picks.size() < 2) continue;
      for (const auto& [seq_idx, pos] : picks) commit(seq_idx, pos, gram);
    }
  }

  for (size_t s = 0; s < sequences.size(); ++s) {
    const std::vector<int>& ids = sequences[s].ids;
    for (int pos = 0; pos < static_cast<int>(ids.size()); ++pos) {
      if (!covered[s][static_cast<size_t>(pos)]) {
        commit(static_cast<int>(s), pos, {ids[static_cast<size_t>(pos)]});
      }
    }
  }
  return tokens;
}

std::vector<WordToken> tokens_to_intervals(
    const std::vector<WordToken>& tokens,
    const std::map<std::string, std::vector<Segment>>& segments_by_utt) {
  std::vector<WordToken> out = tokens;
  for (WordToken& tok : out) {
    const auto it = segments_by_utt.find(tok.utt_id);
    if (it == segments_by_utt.end()) {
      throw Error(Err::index_error, "no segments for utterance " + tok.utt_id);
    }
    const std::vector<Segment>& segs = it->second;
    if (tok.start_pos < 0 || tok.end_pos <= tok.start_pos ||
        tok.end_pos > static_cast<int>(segs.size())) {
      throw Error(Err::index_error,
                  "token positions outside segment list of " + tok.utt_id);
    }
    tok.start_frame = segs[static_cast<size_t>(tok.start_pos)].start_frame;
    tok.end_frame = segs[static_cast<size_t>(tok.end_pos) - 1].end_frame;
  }
  return out;
}

void write_words(const std::vector<WordToken>& tokens, double frame_period_s,
                 const std::string& path) {
  std::map<int, std::vector<const WordToken*>> by_class;
  for (const WordToken& tok : tokens) {
    if (tok.start_frame < 0 || tok.end_frame <= tok.start_frame) {
      throw Error(Err::range_error,
                  "token without frame interval; run tokens_to_intervals");
    }
    by_class[tok.class_id].push_back(&tok);
  }
  std::ofstream os(path);
  if (!os) throw Error(Err::io_error, "cannot open for write: " + path);
  bool first = true;
  char buf[64];
  for (auto& [cls, toks] : by_class) {
    std::sort(toks.begin(), toks.end(),
              [](const WordToken* a, const WordToken* b) {
                if (a->utt_id != b->utt_id) return a->utt_id < b->utt_id;
                return a->start_frame < b->start_frame;
              });
    if (!first) os << '\n';
    first = false;
    os << "Class " << cls << '\n';
    for (const WordToken* tok : toks) {
      std::snprintf(buf, sizeof(buf), "%.6f\t%.6f",
                    tok->start_frame * frame_period_s,
                    tok->end_frame * frame_period_s);
      os << tok->utt_id << '\t' << buf << '\n';
    }
  }
  if (!os) throw Error(Err::io_error, "write failed: " + path);
}

std::map<int, std::vector<TimedToken>> read_words(const std::string& path) {
  const std::string text = read_text_file(path);
  std::map<int, std::vector<TimedToken>> out;
  int current_class = -1;
  bool has_class = false;
  size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> fields = split_fields(line);
    if (fields.empty()) {
      has_class = false;
      continue;
    }
    if (fields[0] == "Class") {
      if (fields.size() != 2) {
        throw Error(Err::parse_error, path + " line " + std::to_string(line_no) +
                                          ": malformed class heading");
      }
      try {
        current_class = std::stoi(fields[1]);
      } catch (const std::logic_error&) {
        throw Error(Err::parse_error, path + " line " + std::to_string(line_no) +
                                          ": bad class id");
      }
      has_class = true;
      out[current_class];
      continue;
    }
    if (!has_class) {
      throw Error(Err::parse_error, path + " line " + std::to_string(line_no) +
                                        ": token line outside a class block");
    }
    if (fields.size() != 3) {
      throw Error(Err::parse_error, path + " line " + std::to_string(line_no) +
                                        ": expected utt_id start_s end_s");
    }
    TimedToken tok;
    tok.utt_id = fields[0];
    try {
      tok.start_s = std::stod(fields[1]);
      tok.end_s = std::stod(fields[2]);
    } catch (const std::logic_error&) {
      throw Error(Err::parse_error, path + " line " + std::to_string(line_no) +
                                        ": bad time field");
    }
    out[current_class].push_back(std::move(tok));
  }
  return out;
}

}  // namespace sea
