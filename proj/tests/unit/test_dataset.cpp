#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "regarma/dataset.hpp"
#include "regarma/error.hpp"

using namespace regarma;

namespace {

TimeSeriesDataset make(std::initializer_list<double> y, Matrix X = Matrix(0, 0)) {
    Vector v(static_cast<Eigen::Index>(y.size()));
    int i = 0;
    for (double e : y) v[i++] = e;
    if (X.rows() == 0) X = Matrix(v.size(), 0);
    std::vector<std::string> names;
    for (int j = 0; j < X.cols(); ++j) names.push_back("x" + std::to_string(j + 1));
    return TimeSeriesDataset(v, X, names);
}

TimeSeriesDataset random_dataset(int T, int r, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(2.0, 3.0);
    Vector y(T);
    Matrix X(T, r);
    for (int t = 0; t < T; ++t) {
        y[t] = d(rng);
        for (int j = 0; j < r; ++j) X(t, j) = d(rng) * (j + 1);
    }
    std::vector<std::string> names;
    for (int j = 0; j < r; ++j) names.push_back("c" + std::to_string(j));
    return TimeSeriesDataset(y, X, names);
}

}  // namespace

TEST_CASE("standardize uses the population divisor") {
    Matrix X(3, 1);
    X << 1, 2, 3;
    const auto st = standardize(make({1, 2, 3}, X));
    const double v = 1.0 / std::sqrt(2.0 / 3.0);
    CHECK(st.data.X()(0, 0) == doctest::Approx(-v).epsilon(1e-12));
    CHECK(st.data.X()(1, 0) == doctest::Approx(0.0));
    CHECK(st.data.X()(2, 0) == doctest::Approx(v).epsilon(1e-12));
    CHECK(st.data.X()(2, 0) == doctest::Approx(1.224744871391589).epsilon(1e-12));
    CHECK(st.data.standardized());
}

TEST_CASE("standardize leaves standardized columns unchanged") {
    const auto once = standardize(random_dataset(40, 3, 1));
    const auto twice = standardize(once.data);
    CHECK((twice.data.X() - once.data.X()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((twice.data.y() - once.data.y()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("constant columns are rejected by name") {
    Matrix X(3, 1);
    X << 5, 5, 5;
    try {
        (void)standardize(make({1, 2, 3}, X));
        FAIL("expected ConstantColumn");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConstantColumn);
        CHECK(std::string(e.what()).find("x1") != std::string::npos);
    }
    CHECK_THROWS_AS((void)standardize(make({4, 4, 4})), Error);
}

TEST_CASE("non-finite values are rejected") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    try {
        (void)make({1, nan, 3});
        FAIL("expected NonFinite");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonFinite);
    }
}

TEST_CASE("standardization round-trips") {
    const auto ds = random_dataset(60, 4, 7);
    const auto st = standardize(ds);
    const auto back = unstandardize(st.data, st.transform);
    CHECK((back.X() - ds.X()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((back.y() - ds.y()).cwiseAbs().maxCoeff() < 1e-10);
    const auto again = apply_standardization(ds, st.transform);
    CHECK((again.X() - st.data.X()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("beta maps between scales consistently") {
    const auto st = standardize(random_dataset(50, 3, 3));
    Vector b(3);
    b << 0.3, -0.2, 0.0;
    const Vector orig = st.transform.beta_to_original(b);
    CHECK((st.transform.beta_to_standardized(orig) - b).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(orig[2] == 0.0);
    const double y = 1.7;
    CHECK(st.transform.response_to_original(st.transform.response_to_standardized(y)) ==
          doctest::Approx(y).epsilon(1e-14));
}

TEST_CASE("AR block by direct indexing") {
    const auto ds = make({1, 2, 3, 4, 5});
    const LagDesign d = build_lag_design(ds, 2, 0, Vector::Zero(5));
    REQUIRE(d.H.rows() == 3);
    REQUIRE(d.H.cols() == 2);
    Matrix expect(3, 2);
    expect << 2, 1, 3, 2, 4, 3;
    CHECK(d.H == expect);
    CHECK(d.y_eff == Vector((Vector(3) << 3, 4, 5).finished()));
    CHECK(d.n == 3);
    CHECK(d.T0 == 2);
}

TEST_CASE("zero orders give the plain regression design") {
    const auto ds = random_dataset(12, 3, 5);
    const LagDesign d = build_lag_design(ds, 0, 0, Vector::Zero(12));
    CHECK(d.H == ds.X());
    CHECK(d.y_eff == ds.y());
}

TEST_CASE("MA block takes lags of the supplied residuals") {
    const auto ds = make({1, 2, 3, 4});
    const Vector eps = (Vector(4) << 0.1, 0.2, 0.3, 0.4).finished();
    const LagDesign d = build_lag_design(ds, 1, 1, eps);
    REQUIRE(d.H.rows() == 2);
    CHECK(d.H(0, d.ma_offset()) == 0.2);
    CHECK(d.H(1, d.ma_offset()) == 0.3);
    CHECK(d.H(0, d.ar_offset()) == 2.0);
    CHECK(d.H(1, d.ar_offset()) == 3.0);
    CHECK(d.y_eff == Vector((Vector(2) << 3, 4).finished()));
}

TEST_CASE("AR rows are exact copies of the response") {
    const auto ds = random_dataset(30, 2, 9);
    for (int p = 0; p <= 4; ++p) {
        for (int q = 0; q <= 3; ++q) {
            const LagDesign d = build_lag_design(ds, p, q, Vector::Zero(30));
            for (int i = 0; i < d.n; ++i) {
                const int t = d.T0 + i;
                for (int j = 1; j <= p; ++j) CHECK(d.H(i, j - 1) == ds.y()[t - j]);
                for (int k = 0; k < ds.r(); ++k) CHECK(d.H(i, d.x_offset() + k) == ds.X()(t, k));
            }
        }
    }
}

TEST_CASE("lag design errors") {
    const auto ds = make({1, 2, 3, 4});
    try {
        (void)build_lag_design(ds, 2, 2, Vector::Zero(4));
        FAIL("expected OrderTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OrderTooLarge);
    }
    CHECK_THROWS_AS((void)build_lag_design(ds, 1, 1, Vector::Zero(3)), Error);
}

TEST_CASE("stationarity of simple polynomials") {
    const double half[] = {0.5};
    auto rep = check_stationarity(half);
    REQUIRE(rep.roots.size() == 1);
    CHECK(rep.roots[0].real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.is_stationary);

    const double unit[] = {1.0};
    rep = check_stationarity(unit);
    CHECK(std::abs(rep.roots[0]) == doctest::Approx(1.0));
    CHECK_FALSE(rep.is_stationary);

    rep = check_stationarity(std::span<const double>{});
    CHECK(rep.roots.empty());
    CHECK(rep.is_stationary);
}

TEST_CASE("two-lag polynomial roots match the quadratic formula") {
    const double c[] = {0.5, 0.6};
    const auto rep = check_stationarity(c);
    REQUIRE(rep.roots.size() == 2);
    const auto [r1, r2] = oracle::quadratic_roots(0.5, 0.6);
    std::vector<double> got{rep.roots[0].real(), rep.roots[1].real()};
    std::sort(got.begin(), got.end());
    CHECK(got[0] == doctest::Approx(r2.real()).epsilon(1e-10));
    CHECK(got[1] == doctest::Approx(r1.real()).epsilon(1e-10));
    // Frozen from the quadratic formula.
    CHECK(got[0] == doctest::Approx(-1.7732350496749758).epsilon(1e-10));
    CHECK(got[1] == doctest::Approx(0.9399017163416422).epsilon(1e-10));
    CHECK_FALSE(rep.is_stationary);
}

TEST_CASE("trailing zero coefficients do not add roots") {
    const double c[] = {0.5, 0.0, 0.0};
    const auto rep = check_stationarity(c);
    CHECK(rep.roots.size() == 1);
    CHECK(rep.is_stationary);
}

TEST_CASE("complex roots of random stationary quadratics") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 200; ++i) {
        const double c1 = u(rng), c2 = u(rng);
        if (std::abs(c2) < 1e-3) continue;
        const double c[] = {c1, c2};
        const auto rep = check_stationarity(c);
        const auto [a, b] = oracle::quadratic_roots(c1, c2);
        const double expect = std::min(std::abs(a), std::abs(b));
        CHECK(rep.min_modulus == doctest::Approx(expect).epsilon(1e-8));
        CHECK(rep.is_stationary == (expect > 1 + kStationarityMargin));
    }
}

TEST_CASE("slice keeps rows and names") {
    const auto ds = random_dataset(10, 2, 2);
    const auto s = ds.slice(3, 7);
    CHECK(s.T() == 4);
    CHECK(s.y()[0] == ds.y()[3]);
    CHECK(s.column_names() == ds.column_names());
    CHECK_THROWS_AS((void)ds.slice(5, 3), Error);
}
