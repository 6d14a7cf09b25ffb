#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "regarma/error.hpp"
#include "regarma/io.hpp"

using namespace regarma;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("regarma_io_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("doubles print in shortest round-trip form") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("dataset CSV reading") {
    const auto dir = scratch("read");
    write_text_file(dir / "a.csv", "date,y,x1,x2\n2020-01-01,1.5,2,3\n2020-01-02,2.5,4,-1\n"
                                   "2020-01-03,0.5,1e-3,7\n");
    const auto ds = read_dataset_csv(dir / "a.csv", "y");
    CHECK(ds.T() == 3);
    CHECK(ds.r() == 2);
    CHECK(ds.column_names() == std::vector<std::string>{"x1", "x2"});
    CHECK(ds.y()[1] == 2.5);
    CHECK(ds.X()(2, 0) == 1e-3);
    CHECK(ds.response_name() == "y");
}

TEST_CASE("dataset CSV errors name the problem") {
    const auto dir = scratch("errors");
    write_text_file(dir / "a.csv", "y,x1\n1,2\n2,oops\n3,4\n");
    try {
        (void)read_dataset_csv(dir / "a.csv", "y");
        FAIL("expected parse error");
    } catch (const Error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("x1") != std::string::npos);
        CHECK(msg.find("row 2") != std::string::npos);
    }
    try {
        (void)read_dataset_csv(dir / "a.csv", "price");
        FAIL("expected missing column");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("price") != std::string::npos);
    }
    write_text_file(dir / "empty.csv", "");
    CHECK_THROWS_AS((void)read_dataset_csv(dir / "empty.csv", "y"), Error);
    write_text_file(dir / "header.csv", "y,x1\n");
    CHECK_THROWS_AS((void)read_dataset_csv(dir / "header.csv", "y"), Error);
    write_text_file(dir / "ragged.csv", "y,x1\n1,2\n3\n");
    CHECK_THROWS_AS((void)read_dataset_csv(dir / "ragged.csv", "y"), Error);
    CHECK_THROWS_AS((void)read_dataset_csv(dir / "missing.csv", "y"), Error);
}

TEST_CASE("dataset CSV round trip") {
    const auto dir = scratch("roundtrip");
    SimulationConfig cfg{30, 4, 0.5, 0.5, 1, 1, 2, 500};
    const auto sim = generate_dataset(cfg);
    write_dataset_csv(sim.data, dir / "d.csv");
    const auto back = read_dataset_csv(dir / "d.csv", "y");
    CHECK(back.y() == sim.data.y());
    CHECK(back.X() == sim.data.X());
}

TEST_CASE("truth JSON round trip") {
    SimulationConfig cfg{40, 10, 0.5, 0.7, 2, 1, 3, 500};
    const auto sim = generate_dataset(cfg);
    const std::string text = truth_to_json(sim.truth, &cfg);
    const auto back = truth_from_json(text);
    CHECK(back.beta0 == sim.truth.beta0);
    CHECK(back.phi0 == sim.truth.phi0);
    CHECK(back.theta0 == sim.truth.theta0);
    CHECK(back.sigma == sim.truth.sigma);
    CHECK_THROWS_AS((void)truth_from_json("{}"), Error);
    CHECK_THROWS_AS((void)truth_from_json("not json"), Error);
}

TEST_CASE("fit JSON round trip") {
    SimulationConfig cfg{80, 5, 0.4, 0.5, 2, 1, 4, 500};
    const auto st = standardize(generate_dataset(cfg).data);
    const auto fit = fit_regarma(st.data, 2, 1, PenaltyConfig::uniform(5, 2, 1, 1.5));
    const std::string text = fit_to_json(fit, st.data.column_names(), &st.transform);
    auto loaded = fit_from_json(text);
    CHECK(loaded.fit.beta == fit.beta);
    CHECK(loaded.fit.phi == fit.phi);
    CHECK(loaded.fit.theta == fit.theta);
    CHECK(loaded.fit.df == fit.df);
    CHECK(loaded.fit.n == fit.n);
    CHECK(loaded.has_transform);
    CHECK(loaded.transform.y_scale == st.transform.y_scale);
    CHECK(loaded.column_names == st.data.column_names());
    restore_fit_series(loaded.fit, st.data);
    CHECK((loaded.fit.fitted - fit.fitted).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((loaded.fit.step1_residuals - fit.step1_residuals).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS((void)fit_from_json("{\"format\":\"other\"}"), Error);
}

TEST_CASE("table writers") {
    const auto dir = scratch("tables");
    write_metrics_csv({{0.5, 0.25, -3.0, 2, "REGAR(1)"}}, dir / "m.csv");
    CHECK(read_text_file(dir / "m.csv") == "model,mse,mae,bic,nonzero\nREGAR(1),0.5,0.25,-3,2\n");
    write_acf_csv((Vector(2) << 0.5, -0.25).finished(), dir / "acf.csv");
    CHECK(read_text_file(dir / "acf.csv") == "lag,acf\n0,1\n1,0.5\n2,-0.25\n");
    SelectionResult sel;
    sel.criterion_table.push_back({{1, 2, 3}, 1, 0, 9, 2, -4.5, true});
    write_selection_table_csv(sel, dir / "s.csv");
    CHECK(read_text_file(dir / "s.csv") ==
          "lambda_scale,gamma_scale,tau_scale,p,q,n,df,criterion\n1,2,3,1,0,9,2,-4.5\n");
}
