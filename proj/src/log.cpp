#include "opdhg/log.hpp"

#include <iostream>

namespace opdhg {

void logWarn(const std::string& message) {
  std::cerr << "[opdhg] warning: " << message << "\n";
}

}  // namespace opdhg
