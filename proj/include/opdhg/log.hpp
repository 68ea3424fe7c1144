#pragma once

#include <string>

namespace opdhg {

void logWarn(const std::string& message);

}  // namespace opdhg
