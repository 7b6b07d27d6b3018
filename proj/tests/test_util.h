// tests/test_util.h

#ifndef SEA_TESTS_TEST_UTIL_H_
#define SEA_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <fstream>
#include <string>

namespace sea {
namespace test {

// Fresh per-test directory under the working directory.
inline std::string scratch_dir(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::path("scratch") / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

inline std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is),
                     std::istreambuf_iterator<char>());
}

inline void spit(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace test
}  // namespace sea

#endif  // SEA_TESTS_TEST_UTIL_H_
