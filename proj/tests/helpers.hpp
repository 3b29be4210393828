#pragma once

#include <string>

#include "mde/config.hpp"

namespace testing {

inline const char* kPresets[] = {"transport", "barycenter", "growth", "decay", "lipschitz"};

inline mde::RunConfig preset(const std::string& name) {
  return mde::load_config(std::string(MDE_PRESET_DIR) + "/" + name + ".cfg");
}

inline mde::DiscreteMeasure line(std::vector<double> x, std::vector<double> w) {
  return mde::DiscreteMeasure::on_line(x, w);
}

}  // namespace testing
