#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace chromdev::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  bool soft = false;  // reported but never counted as a failure
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  /// Where campaign artifacts are written; a fresh temp dir when empty.
  std::filesystem::path scratch_dir;
  bool keep_scratch = false;
};

std::vector<CriterionResult> run_all(const Options& options = {});

/// One line per criterion: `[PASS] 1 title (0.01 s): detail`.
void print_results(std::ostream& out, const std::vector<CriterionResult>& results);

/// True when every hard criterion passed.
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace chromdev::acceptance
