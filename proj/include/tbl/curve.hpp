#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace tbl {

/// Accuracy after the first `pass` rules; pass 0 is the baseline.
struct CurvePoint {
    std::size_t pass = 0;
    double train_acc = 0.0;
    std::optional<double> test_acc;

    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

using Curve = std::vector<CurvePoint>;

} // namespace tbl
