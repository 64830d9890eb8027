#pragma once

#include <string>
#include <vector>

#include "rspcycles/harness.hpp"
#include "rspcycles/maps.hpp"
#include "rspcycles/stability.hpp"

namespace rsp {

/// Every JSON document carries this top-level "version".
inline constexpr int kJsonVersion = 1;

std::string network_json();

/// Row-major entries rounded to 15 significant digits.
std::string matrices_json(const std::vector<TransitionMatrix>& matrices,
                          const PayoffParams& params);

struct LabelledReport {
  StabilityReport report;
  IndexPath path;
};

/// Index values are numbers, or the strings "inf" / "-inf".
std::string indices_json(const std::vector<LabelledReport>& reports);
std::string indices_csv(const std::vector<LabelledReport>& reports);

std::string basin_json(const BasinEstimate& estimate);

}  // namespace rsp
