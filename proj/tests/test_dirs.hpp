#ifndef MBGDT_TESTS_TEST_DIRS_HPP_
#define MBGDT_TESTS_TEST_DIRS_HPP_

#include <gtest/gtest.h>

#include <filesystem>
#include <string>

namespace test_dirs {

// Fresh directory under the system temp dir, removed on destruction.
class Scratch {
 public:
  explicit Scratch(const std::string& tag) {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    std::string name = "mbgdt_" + tag;
    if (info) name += std::string("_") + info->test_suite_name() + "_" + info->name();
    path_ = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~Scratch() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace test_dirs

#endif  // MBGDT_TESTS_TEST_DIRS_HPP_
