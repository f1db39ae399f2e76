#pragma once

// The reproduction checks shared by `hasse reproduce-paper` and the
// acceptance binary.

#include <string>
#include <vector>

namespace hasse::acceptance {

struct Result {
  int id;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

std::vector<Result> run_all(int jobs = 1);

std::string format(const Result& r);

}  // namespace hasse::acceptance
