// tests/test_word_discovery.cc

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "ref/ref_words.h"
#include "sea/error.h"
#include "sea/rng.h"
#include "sea/word_discovery.h"
#include "test_util.h"

namespace {

using sea::Coverage;
using sea::Error;
using sea::PhoneSequence;
using sea::Segment;
using sea::WordToken;

std::vector<PhoneSequence> seqs(const std::vector<std::vector<int>>& ids) {
  std::vector<PhoneSequence> out;
  for (size_t i = 0; i < ids.size(); ++i) {
    out.push_back({"u" + std::to_string(i), ids[i]});
  }
  return out;
}

Coverage uncovered(const std::vector<PhoneSequence>& sequences) {
  Coverage c;
  for (const PhoneSequence& s : sequences) {
    c.emplace_back(s.ids.size(), 0);
  }
  return c;
}

// (sequence index, start position, gram) triples for comparison with the
// reference implementation.
std::set<sea::ref::RefToken> as_ref_tokens(
    const std::vector<PhoneSequence>& sequences,
    const std::vector<WordToken>& tokens) {
  std::map<std::string, int> index;
  for (size_t i = 0; i < sequences.size(); ++i) {
    index[sequences[i].utt_id] = static_cast<int>(i);
  }
  std::set<sea::ref::RefToken> out;
  for (const WordToken& t : tokens) {
    sea::ref::RefToken r;
    r.seq = index.at(t.utt_id);
    r.pos = t.start_pos;
    r.gram = t.phone_ids;
    out.insert(r);
  }
  return out;
}

void check_full_coverage(const std::vector<PhoneSequence>& sequences,
                         const std::vector<WordToken>& tokens) {
  std::map<std::string, std::vector<int>> hits;
  for (const PhoneSequence& s : sequences) {
    hits[s.utt_id] = std::vector<int>(s.ids.size(), 0);
  }
  for (const WordToken& t : tokens) {
    REQUIRE(hits.count(t.utt_id) == 1);
    REQUIRE(t.start_pos >= 0);
    REQUIRE(t.end_pos <= static_cast<int>(hits[t.utt_id].size()));
    REQUIRE(t.start_pos < t.end_pos);
    for (int p = t.start_pos; p < t.end_pos; ++p) ++hits[t.utt_id][static_cast<size_t>(p)];
  }
  for (const auto& [utt, counts] : hits) {
    CAPTURE(utt);
    for (int c : counts) CHECK(c == 1);
  }
}

}  // namespace

TEST_CASE("word discovery: recurring trigram is counted once per occurrence") {
  const std::vector<PhoneSequence> s = seqs({{1, 2, 3, 4, 1, 2, 3, 5}});
  const auto counts = sea::count_recurring(s, uncovered(s), 3);
  REQUIRE(counts.size() == 1);
  const auto it = counts.find({1, 2, 3});
  REQUIRE(it != counts.end());
  REQUIRE(it->second.size() == 2);
  CHECK(it->second[0] == std::pair<int, int>{0, 0});
  CHECK(it->second[1] == std::pair<int, int>{0, 4});
}

TEST_CASE("word discovery: overlapping matches are picked left to right") {
  // 1 1 1 1 has three windows of 1 1; greedy keeps positions 0 and 2.
  const std::vector<PhoneSequence> s = seqs({{1, 1, 1, 1}});
  const auto pairs = sea::count_recurring(s, uncovered(s), 2);
  REQUIRE(pairs.size() == 1);
  const auto it = pairs.find({1, 1});
  REQUIRE(it != pairs.end());
  REQUIRE(it->second.size() == 2);
  CHECK(it->second[0] == std::pair<int, int>{0, 0});
  CHECK(it->second[1] == std::pair<int, int>{0, 2});

  const auto triples = sea::count_recurring(s, uncovered(s), 3);
  CHECK(triples.empty());
}

TEST_CASE("word discovery: covered positions block occurrences") {
  const std::vector<PhoneSequence> s = seqs({{1, 2, 3, 4, 1, 2, 3, 5}});
  Coverage cov = uncovered(s);
  cov[0][1] = 1;
  const auto counts = sea::count_recurring(s, cov, 3);
  CHECK(counts.empty());
}

TEST_CASE("word discovery: n longer than every sequence finds nothing") {
  const std::vector<PhoneSequence> s = seqs({{1, 2}, {1, 2}});
  CHECK(sea::count_recurring(s, uncovered(s), 3).empty());
}

TEST_CASE("word discovery: repeated trigram plus leftovers") {
  const std::vector<PhoneSequence> s = seqs({{1, 2, 3, 4, 1, 2, 3, 5}});
  const std::vector<WordToken> tokens = sea::discover_words(s, 3);
  REQUIRE(tokens.size() == 4);

  std::vector<WordToken> sorted = tokens;
  std::sort(sorted.begin(), sorted.end(),
            [](const WordToken& a, const WordToken& b) {
              return a.start_pos < b.start_pos;
            });
  CHECK(sorted[0].phone_ids == std::vector<int>{1, 2, 3});
  CHECK(sorted[0].start_pos == 0);
  CHECK(sorted[1].phone_ids == std::vector<int>{4});
  CHECK(sorted[1].start_pos == 3);
  CHECK(sorted[2].phone_ids == std::vector<int>{1, 2, 3});
  CHECK(sorted[2].start_pos == 4);
  CHECK(sorted[3].phone_ids == std::vector<int>{5});
  CHECK(sorted[3].start_pos == 7);

  CHECK(sorted[0].class_id == sorted[2].class_id);
  CHECK(sorted[1].class_id != sorted[0].class_id);
  CHECK(sorted[1].class_id != sorted[3].class_id);
  check_full_coverage(s, tokens);
}

TEST_CASE("word discovery: run of one phone pairs up") {
  const std::vector<PhoneSequence> s = seqs({{1, 1, 1, 1}});
  const std::vector<WordToken> tokens = sea::discover_words(s, 3);
  REQUIRE(tokens.size() == 2);
  for (const WordToken& t : tokens) {
    CHECK(t.phone_ids == std::vector<int>{1, 1});
  }
  CHECK(tokens[0].class_id == tokens[1].class_id);
  check_full_coverage(s, tokens);
}

TEST_CASE("word discovery: no repeats leaves unigrams in corpus order") {
  const std::vector<PhoneSequence> s = seqs({{1, 2, 3}});
  const std::vector<WordToken> tokens = sea::discover_words(s, 3);
  REQUIRE(tokens.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(tokens[static_cast<size_t>(i)].start_pos == i);
    CHECK(tokens[static_cast<size_t>(i)].end_pos == i + 1);
    CHECK(tokens[static_cast<size_t>(i)].phone_ids ==
          std::vector<int>{s[0].ids[static_cast<size_t>(i)]});
  }
  CHECK(tokens[0].class_id == 1);
  CHECK(tokens[1].class_id == 2);
  CHECK(tokens[2].class_id == 3);
  check_full_coverage(s, tokens);
}

TEST_CASE("word discovery: equal grams share a class across utterances") {
  const std::vector<PhoneSequence> s =
      seqs({{7, 8, 1}, {7, 8, 2}, {3, 7, 8}});
  const std::vector<WordToken> tokens = sea::discover_words(s, 3);
  std::map<std::vector<int>, std::set<int>> classes_by_gram;
  for (const WordToken& t : tokens) {
    classes_by_gram[t.phone_ids].insert(t.class_id);
  }
  for (const auto& [gram, classes] : classes_by_gram) {
    CAPTURE(gram.size());
    CHECK(classes.size() == 1);
  }
  std::set<int> all_classes;
  for (const WordToken& t : tokens) all_classes.insert(t.class_id);
  CHECK(all_classes.count(1) == 1);
  check_full_coverage(s, tokens);
}

TEST_CASE("word discovery: random sequences match the reference") {
  sea::Rng rng(404);
  for (int trial = 0; trial < 80; ++trial) {
    const int num_seqs = rng.uniform_int(1, 6);
    std::vector<std::vector<int>> ids(static_cast<size_t>(num_seqs));
    for (auto& seq : ids) {
      const int len = rng.uniform_int(1, 30);
      seq.resize(static_cast<size_t>(len));
      for (int& v : seq) v = rng.uniform_int(1, 5);
    }
    const std::vector<PhoneSequence> s = seqs(ids);
    const int max_n = rng.uniform_int(2, 4);

    const std::vector<WordToken> tokens = sea::discover_words(s, max_n);
    check_full_coverage(s, tokens);

    std::vector<std::vector<int>> plain(ids.begin(), ids.end());
    const std::set<sea::ref::RefToken> expected_set = [&] {
      const std::vector<sea::ref::RefToken> expected =
          sea::ref::discover_serial(plain, max_n);
      return std::set<sea::ref::RefToken>(expected.begin(), expected.end());
    }();
    CAPTURE(trial);
    CHECK(as_ref_tokens(s, tokens) == expected_set);
  }
}

TEST_CASE("word discovery: intervals come from the constituent segments") {
  const std::vector<PhoneSequence> s = seqs({{4, 6, 4, 6}});
  std::vector<WordToken> tokens = sea::discover_words(s, 2);
  REQUIRE(tokens.size() == 2);
  std::sort(tokens.begin(), tokens.end(),
            [](const WordToken& a, const WordToken& b) {
              return a.start_pos < b.start_pos;
            });
  CHECK(tokens[0].phone_ids == std::vector<int>{4, 6});
  CHECK(tokens[1].phone_ids == std::vector<int>{4, 6});

  std::map<std::string, std::vector<Segment>> by_utt;
  by_utt["u0"] = {{"u0", 0, 5, 4},
                  {"u0", 5, 9, 6},
                  {"u0", 9, 14, 4},
                  {"u0", 14, 20, 6}};
  const std::vector<WordToken> timed = sea::tokens_to_intervals(tokens, by_utt);
  REQUIRE(timed.size() == 2);
  CHECK(timed[0].start_frame == 0);
  CHECK(timed[0].end_frame == 9);
  CHECK(timed[1].start_frame == 9);
  CHECK(timed[1].end_frame == 20);

  std::map<std::string, std::vector<Segment>> short_map;
  short_map["u0"] = {{"u0", 0, 5, 4}, {"u0", 5, 9, 6}, {"u0", 9, 14, 4}};
  CHECK_THROWS_AS(sea::tokens_to_intervals(tokens, short_map), Error);

  std::map<std::string, std::vector<Segment>> missing;
  CHECK_THROWS_AS(sea::tokens_to_intervals(tokens, missing), Error);
}

TEST_CASE("word discovery: class file roundtrip") {
  const std::string dir = sea::test::scratch_dir("words_io");
  const std::vector<PhoneSequence> s = seqs({{1, 2, 3, 4, 1, 2, 3, 5}});
  std::vector<WordToken> tokens = sea::discover_words(s, 3);
  std::map<std::string, std::vector<Segment>> by_utt;
  std::vector<Segment> segs;
  for (int i = 0; i < 8; ++i) segs.push_back({"u0", 3 * i, 3 * (i + 1), 0});
  by_utt["u0"] = segs;
  tokens = sea::tokens_to_intervals(tokens, by_utt);

  const std::string path = dir + "/words.txt";
  sea::write_words(tokens, 0.010, path);

  const std::string text = sea::test::slurp(path);
  CHECK(text.find("Class 1") != std::string::npos);
  CHECK(text.find("\n\n") != std::string::npos);
  CHECK(text.find("u0\t0.000000\t0.090000") != std::string::npos);

  const std::map<int, std::vector<sea::TimedToken>> classes =
      sea::read_words(path);
  REQUIRE_FALSE(classes.empty());
  size_t total = 0;
  for (const auto& [id, toks] : classes) {
    CHECK(id >= 1);
    total += toks.size();
  }
  CHECK(total == tokens.size());
  const auto it = classes.find(tokens[0].class_id);
  REQUIRE(it != classes.end());
  bool found = false;
  for (const sea::TimedToken& t : it->second) {
    if (t.utt_id == "u0" && t.start_s == doctest::Approx(0.0) &&
        t.end_s == doctest::Approx(0.09)) {
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("word discovery: malformed class files are rejected") {
  const std::string dir = sea::test::scratch_dir("words_io_bad");
  CHECK_THROWS_AS(sea::read_words(dir + "/absent.txt"), Error);

  sea::test::spit(dir + "/no_heading.txt", "u0\t0.0\t0.5\n");
  CHECK_THROWS_AS(sea::read_words(dir + "/no_heading.txt"), Error);

  sea::test::spit(dir + "/bad_time.txt", "Class 1\nu0\tzero\t0.5\n");
  CHECK_THROWS_AS(sea::read_words(dir + "/bad_time.txt"), Error);
}
