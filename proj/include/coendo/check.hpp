#pragma once

#include <string>
#include <vector>

namespace coendo {

struct Check {
  std::string suite;
  std::string name;
  bool pass = true;
  long count = 0;  // number of instances verified
  std::string detail;
  std::string unit = "cases";  // what count counts

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

inline bool all_pass(const std::vector<Check>& cs) {
  for (const auto& c : cs)
    if (!c.pass) return false;
  return true;
}

}  // namespace coendo
