#pragma once

#include "koopmem/edmd.hpp"

#include <vector>

namespace koopmem {

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method
/// with potentials, O(n^3)). Returns row -> column.
std::vector<int> linear_sum_assignment(const Eigen::MatrixXd& cost);

/// Wasserstein-1 distance between two equal-size uniform empirical measures
/// on the complex plane: (1/n) min_perm sum |a_i - b_perm(i)|.
double wasserstein1(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

/// |Va - Vb|_F / (|Va|_F + |Vb|_F); zero when both are zero.
double mode_distance(const Eigen::MatrixXcd& va, const Eigen::MatrixXcd& vb);

struct SignatureDistance {
    double d_lambda = 0.0;
    double d_v = 0.0;
    double combined = 0.0;
};

SignatureDistance signature_distance(const SpectralSignature& a, const SpectralSignature& b);

}  // namespace koopmem
