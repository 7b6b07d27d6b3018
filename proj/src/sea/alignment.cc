// sea/alignment.cc

#include "sea/alignment.h"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "sea/error.h"
#include "sea/io_util.h"

namespace sea {
namespace {

std::map<std::string, std::vector<AlignedUnit>> parse_tier(
    const std::string& path) {
  const std::string text = read_text_file(path);
  std::map<std::string, std::vector<AlignedUnit>> tiers;
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
    if (fields.size() != 4) {
      throw Error(Err::parse_error,
                  path + " line " + std::to_string(line_no) +
                      ": expected utt_id start_s end_s label");
    }
    AlignedUnit unit;
    unit.label = fields[3];
    try {
      size_t used = 0;
      unit.start_s = std::stod(fields[1], &used);
      if (used != fields[1].size()) throw std::invalid_argument(fields[1]);
      unit.end_s = std::stod(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument(fields[2]);
    } catch (const std::logic_error&) {
      throw Error(Err::parse_error, path + " line " + std::to_string(line_no) +
                                        ": bad time field");
    }
    if (!(unit.end_s > unit.start_s)) {
      throw Error(Err::parse_error, path + " line " + std::to_string(line_no) +
                                        ": end must exceed start");
    }
    tiers[fields[0]].push_back(std::move(unit));
  }
  for (auto& [utt, units] : tiers) {
    std::sort(units.begin(), units.end(),
              [](const AlignedUnit& a, const AlignedUnit& b) {
                return a.start_s < b.start_s;
              });
    for (size_t i = 1; i < units.size(); ++i) {
      if (units[i].start_s < units[i - 1].end_s - 1e-9) {
        throw Error(Err::overlap_error,
                    path + ": utterance " + utt + " units [" +
                        units[i - 1].label + ", " + units[i].label +
                        "] overlap in time");
      }
    }
  }
  return tiers;
}

}  // namespace

std::vector<GoldAlignment> parse_alignment(const std::string& path) {
  std::vector<GoldAlignment> out;
  for (auto& [utt, units] : parse_tier(path)) {
    GoldAlignment g;
    g.utt_id = utt;
    g.phones = std::move(units);
    out.push_back(std::move(g));
  }
  return out;
}

std::map<std::string, GoldAlignment> load_alignments(
    const std::string& phn_path, const std::string& wrd_path) {
  std::map<std::string, GoldAlignment> out;
  for (auto& [utt, units] : parse_tier(phn_path)) {
    out[utt].utt_id = utt;
    out[utt].phones = std::move(units);
  }
  for (auto& [utt, units] : parse_tier(wrd_path)) {
    out[utt].utt_id = utt;
    out[utt].words = std::move(units);
  }
  return out;
}

}  // namespace sea
