// sea/io_util.h

#ifndef SEA_IO_UTIL_H_
#define SEA_IO_UTIL_H_

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "sea/error.h"

namespace sea {

// Little-endian binary helpers shared by the feature and checkpoint formats.

void write_u16(std::ostream& os, uint16_t v);
void write_u32(std::ostream& os, uint32_t v);
void write_f32(std::ostream& os, float v);
void write_f64(std::ostream& os, double v);

uint16_t read_u16(std::istream& is);
uint32_t read_u32(std::istream& is);
float read_f32(std::istream& is);
double read_f64(std::istream& is);

void write_f32_array(std::ostream& os, const float* p, size_t n);
void read_f32_array(std::istream& is, float* p, size_t n);

// Reads a whole text file; MissingFile if it cannot be opened.
std::string read_text_file(const std::string& path);

// Splits a line on tabs or runs of spaces; empty fields from repeated
// separators are dropped.
std::vector<std::string> split_fields(const std::string& line);

bool file_exists(const std::string& path);
void ensure_dir(const std::string& path);

}  // namespace sea

#endif  // SEA_IO_UTIL_H_
