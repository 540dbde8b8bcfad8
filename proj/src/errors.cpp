#include "dnls/errors.hpp"

namespace dnls {

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error([&] {
        std::string msg;
        for (const auto& v : violations) {
          if (!msg.empty()) msg += "; ";
          msg += v;
        }
        return msg;
      }()),
      violations_(std::move(violations)) {}

}  // namespace dnls
