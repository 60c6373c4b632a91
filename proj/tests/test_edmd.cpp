#include "oracles.hpp"

#include "koopmem/edmd.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace koopmem;

namespace {

TimeSeries geometric(double ratio, double x0, std::size_t n) {
    TimeSeries s;
    s.values.resize(n);
    s.values[0] = x0;
    for (std::size_t i = 1; i < n; ++i) s.values[i] = ratio * s.values[i - 1];
    return s;
}

struct Fitted {
    Dictionary dict;
    KoopmanModel model;
    SpectralSignature sig;
};

Fitted fit_window(const TimeSeries& s, std::size_t t, int omega, int n_delays, int n_rbf, int n_keep) {
    const auto raw = window_raw_values(s, t, omega, n_delays);
    auto dict = build_dictionary(raw, n_delays, {n_rbf, 1e-8, true});
    const auto e = delay_embed(s, n_delays);
    auto model = edmd_fit(window_pair(e, t, omega), dict);
    auto sig = extract_signature(model, dict.lift(e.at(t)), e.at(t), n_keep);
    sig.t = t;
    return {std::move(dict), std::move(model), std::move(sig)};
}

bool has_eigenvalue(const Eigen::VectorXcd& ev, cplx target, double tol) {
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i) - target) <= tol) return true;
    return false;
}

}  // namespace

TEST_SUITE("edmd") {

TEST_CASE("pseudoinverse examples") {
    CHECK(pseudoinverse(Eigen::MatrixXd(Eigen::MatrixXd::Identity(3, 3))).isApprox(Eigen::MatrixXd::Identity(3, 3)));
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(0, 0) = 2.0;
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2, 2);
    expected(0, 0) = 0.5;
    CHECK(pseudoinverse(d).isApprox(expected));
    CHECK(pseudoinverse(Eigen::MatrixXd(Eigen::MatrixXd::Zero(2, 3))) == Eigen::MatrixXd::Zero(3, 2));
}

TEST_CASE("pseudoinverse satisfies the Penrose identities") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXcd a(5, 3);
        for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = {g(rng), g(rng)};
        if (trial % 2) a.col(2) = a.col(0) + a.col(1);  // rank deficient
        const Eigen::MatrixXcd p = pseudoinverse(a);
        CHECK((a * p * a - a).norm() < 1e-10);
        CHECK((p * a * p - p).norm() < 1e-10);
        CHECK(((a * p).adjoint() - a * p).norm() < 1e-10);
        CHECK(((p * a).adjoint() - p * a).norm() < 1e-10);
    }
}

TEST_CASE("identity dictionary recovers a linear multiplier") {
    const auto s = geometric(0.9, 2.0, 30);
    const auto f = fit_window(s, 10, 5, 0, 0, 1);
    REQUIRE(f.model.decomposed);
    CHECK(std::abs(f.model.eigenvalues(0) - 0.9) < 1e-6);
    CHECK(std::abs(f.sig.eigenvalues(0) - 0.9) < 1e-6);
    // scaled mode reconstructs the current state
    CHECK(std::abs(f.sig.scaled_modes(0, 0) - s.values[10]) < 1e-9);
    for (int delta = 1; delta <= 5; ++delta) {
        const double truth = s.values[10 + delta];
        CHECK(std::abs(predict_sliding(f.sig, delta).value - truth) / truth < 1e-6);
    }
}

TEST_CASE("constant series has unit top eigenvalue") {
    const TimeSeries s{std::vector<double>(20, 3.5), 0};
    const auto f = fit_window(s, 10, 5, 1, 10, 5);
    REQUIRE(f.model.decomposed);
    CHECK(std::abs(f.sig.eigenvalues(0) - 1.0) < 1e-8);
    CHECK((f.sig.reconstruct() - Eigen::Vector2cd(3.5, 3.5)).norm() < 1e-8);
    CHECK(predict_sliding(f.sig, 5).value == doctest::Approx(3.5).epsilon(1e-8));
}

TEST_CASE("delay-embedded cosine yields a unit-circle conjugate pair") {
    const double theta = 0.7;
    TimeSeries s;
    for (int t = 0; t < 40; ++t) s.values.push_back(std::cos(theta * t));
    const auto f = fit_window(s, 20, 6, 1, 0, 2);
    REQUIRE(f.model.decomposed);
    CHECK(has_eigenvalue(f.model.eigenvalues, std::polar(1.0, theta), 1e-5));
    CHECK(has_eigenvalue(f.model.eigenvalues, std::polar(1.0, -theta), 1e-5));
    CHECK(std::abs(f.sig.eigenvalues(0) - std::polar(1.0, -theta)) < 1e-5);
    CHECK(std::abs(f.sig.eigenvalues(1) - std::polar(1.0, theta)) < 1e-5);
    for (int delta = 1; delta <= 5; ++delta) {
        const auto p = predict_sliding(f.sig, delta);
        CHECK(p.value == doctest::Approx(s.values[20 + delta]).epsilon(1e-6));
        CHECK(p.imag_residual < 1e-9);
    }
}

TEST_CASE("rbf-lifted windows stay closed under conjugation") {
    const auto s = gen_piecewise_exponential(200, 10, 0.01, 9).series;
    for (std::size_t t = 6; t < 150; t += 7) {
        const auto f = fit_window(s, t, 5, 1, 10, 5);
        if (!f.model.decomposed) continue;
        const auto& ev = f.model.eigenvalues;
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            CHECK(has_eigenvalue(ev, std::conj(ev(i)), 0.0));
        for (int i : f.model.accepted(1e-8)) CHECK(f.model.residuals(i) <= 1e-8);
        // retained eigenvalues come out in canonical order
        for (int i = 0; i + 1 < f.sig.n_keep(); ++i)
            CHECK_FALSE(canonical_less(f.sig.eigenvalues(i + 1), f.sig.eigenvalues(i)));
    }
}

TEST_CASE("canonical order") {
    CHECK(canonical_less(cplx(2, 0), cplx(1, 0)));
    CHECK(canonical_less(cplx(0, -1), cplx(0, 1)));
    CHECK(canonical_less(cplx(1, 0), cplx(0, 1)));
    CHECK_FALSE(canonical_less(cplx(1, 0), cplx(1, 0)));
}

TEST_CASE("zero state gives zero modes") {
    const TimeSeries s{{0.9, 0.81, 0.729, 0.6561, 0.0}, 0};
    const auto raw = window_raw_values(s, 4, 3, 0);
    const auto dict = build_dictionary(raw, 0, {0, 1e-8, true});
    const auto e = delay_embed(s, 0);
    const auto model = edmd_fit(window_pair(e, 3, 3), dict);
    const auto sig = extract_signature(model, dict.lift(Eigen::VectorXd::Zero(1)), Eigen::VectorXd::Zero(1), 2);
    CHECK(sig.scaled_modes.norm() == 0.0);
    CHECK(sig.eigenvalues(1) == cplx(0, 0));  // padded slot
    CHECK(predict_sliding(sig, 3).value == 0.0);
}

TEST_CASE("sliding prediction examples") {
    SpectralSignature sig;
    sig.eigenvalues = Eigen::VectorXcd::Constant(1, 0.9);
    sig.scaled_modes = Eigen::MatrixXcd::Constant(1, 1, 5.0);
    CHECK(predict_sliding(sig, 2).value == doctest::Approx(4.05));

    const cplx lam = std::polar(1.0, 0.3);
    const cplx amp(0.5, 0.25);
    sig.eigenvalues = Eigen::Vector2cd(lam, std::conj(lam));
    sig.scaled_modes.resize(2, 1);
    sig.scaled_modes << amp, std::conj(amp);
    const auto p = predict_sliding(sig, 3);
    CHECK(p.value == doctest::Approx(2.0 * (std::pow(lam, 3) * amp).real()));
    CHECK(p.imag_residual < 1e-15);

    sig.eigenvalues = Eigen::VectorXcd::Constant(1, 1e5);
    sig.scaled_modes = Eigen::MatrixXcd::Constant(1, 1, -1.0);
    const auto big = predict_sliding(sig, 5, 1e12);
    CHECK(big.overflow);
    CHECK(big.value == -1e12);
    CHECK_THROWS_AS(predict_sliding(sig, 0), Error);
}

TEST_CASE("fallback signature shape") {
    const auto f = fallback_signature(4, 3);
    CHECK(f.fallback);
    CHECK(f.n_keep() == 4);
    CHECK(f.state_dim() == 3);
    KoopmanModel undecomposed;
    undecomposed.state_readout = Eigen::MatrixXcd::Zero(2, 3);
    CHECK(extract_signature(undecomposed, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(2), 3).fallback);
}

}
