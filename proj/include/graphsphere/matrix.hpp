#pragma once

#include <Eigen/Dense>

#include <string_view>
#include <type_traits>

namespace graphsphere {

// Row-major everywhere: node n's embedding is the contiguous row n, and the
// checkpoint format stores weight matrices row-major.
template <class Real>
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class Real>
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <class Real>
constexpr std::string_view precision_name() {
    static_assert(std::is_same_v<Real, double> || std::is_same_v<Real, float>,
                  "supported precisions are float64 and float32");
    if constexpr (std::is_same_v<Real, double>) {
        return "float64";
    } else {
        return "float32";
    }
}

}  // namespace graphsphere
