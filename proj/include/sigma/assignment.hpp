#pragma once

#include <Eigen/Core>

#include <vector>

namespace sigma {

/// Exact minimum-cost perfect matching on a square cost matrix via shortest
/// augmenting paths with dual potentials, O(n^3). Returns the column matched
/// to each row.
std::vector<Eigen::Index> min_cost_assignment(const Eigen::MatrixXd& cost);

}  // namespace sigma
