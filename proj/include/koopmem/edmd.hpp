#pragma once

#include "koopmem/dictionary.hpp"

#include <complex>

namespace koopmem {

using cplx = std::complex<double>;

/// Moore-Penrose pseudoinverse via SVD. Singular values below
/// rel_tol * sigma_max are treated as zero; the zero matrix maps to zero.
Eigen::MatrixXcd pseudoinverse(const Eigen::MatrixXcd& m, double rel_tol = 1e-10);
Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& m, double rel_tol = 1e-10);

struct EdmdOptions {
    double rel_tol = 1e-10;        ///< pseudoinverse truncation
    double residual_tol = 1e-8;    ///< eigenpair acceptance, relative
    double reconstruction_tol = 1e-6;
};

/// Windowed EDMD operator, oriented so that lift(y) ~ k * lift(x) on column
/// vectors.
struct KoopmanModel {
    Eigen::MatrixXcd k;
    Eigen::VectorXcd eigenvalues;
    Eigen::MatrixXcd right_eigenvectors;  ///< unit-norm columns
    Eigen::MatrixXcd state_readout;       ///< (n_delays+1) x l, lifted -> state
    Eigen::VectorXd residuals;            ///< |k v - lambda v| / |v| per pair, relative to max(1, |k|)
    bool decomposed = false;              ///< false: eigensolver failed, window unusable

    /// Eigenpairs whose residual passed the acceptance check.
    std::vector<int> accepted(double residual_tol) const;
};

KoopmanModel edmd_fit(const SnapshotPair& pair, const Dictionary& dict, const EdmdOptions& opts = {});

/// Compact spectral description of one window: retained eigenvalues and the
/// amplitude-scaled modes restricted to state coordinates.
struct SpectralSignature {
    Eigen::VectorXcd eigenvalues;   ///< n_keep entries, canonical order
    Eigen::MatrixXcd scaled_modes;  ///< n_keep x (n_delays+1), row i pairs with eigenvalue i
    std::size_t t = 0;
    double anchor = 0.0;            ///< first raw value of the window
    bool fallback = false;          ///< not eligible for matching
    double amplitude_residual = 0.0;

    int n_keep() const { return static_cast<int>(eigenvalues.size()); }
    int state_dim() const { return static_cast<int>(scaled_modes.cols()); }
    /// Sum of scaled modes, i.e. the reconstruction of the current state.
    Eigen::VectorXcd reconstruct() const { return scaled_modes.colwise().sum().transpose(); }
};

/// Descending modulus, then ascending argument, then ascending imaginary part.
bool canonical_less(const cplx& a, const cplx& b);

/// Solves right_eigenvectors * a = current_lifted in the least-squares sense,
/// keeps the n_keep accepted eigenpairs with the largest |a_i lambda_i|
/// (conjugate partners ranked together) and sorts them canonically. Missing
/// slots are zero-padded.
SpectralSignature extract_signature(const KoopmanModel& model, const Eigen::VectorXd& current_lifted,
                                    const EmbeddedState& current_state, int n_keep,
                                    const EdmdOptions& opts = {});

/// Signature flagged unusable, with the right shape for a run.
SpectralSignature fallback_signature(int n_keep, int state_dim);

struct SlidingPrediction {
    double value = 0.0;
    double imag_residual = 0.0;
    bool overflow = false;
};

/// Real part of the last state coordinate of sum_i lambda_i^delta * mode_i.
/// Non-finite or |value| > magnitude_cap is clamped to +-magnitude_cap.
SlidingPrediction predict_sliding(const SpectralSignature& sig, int delta, double magnitude_cap = 1e12);

}  // namespace koopmem
