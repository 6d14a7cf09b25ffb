#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "regarma/io.hpp"
#include "regarma_cli/cli.hpp"

using namespace regarma;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("regarma_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("simulate writes a dataset and its truth") {
    const auto dir = scratch("simulate");
    const auto r = run({"simulate", "--T", "100", "--r", "25", "--seed", "7", "--out",
                        (dir / "a").string()});
    REQUIRE(r.code == 0);
    const auto table = read_csv(dir / "a" / "data.csv");
    CHECK(table.rows.size() == 100);
    CHECK(table.header.size() == 26);
    CHECK(fs::exists(dir / "a" / "truth.json"));

    run({"simulate", "--T", "100", "--r", "25", "--seed", "7", "--out", (dir / "b").string()});
    CHECK(read_text_file(dir / "a" / "data.csv") == read_text_file(dir / "b" / "data.csv"));
    CHECK(read_text_file(dir / "a" / "truth.json") == read_text_file(dir / "b" / "truth.json"));
}

TEST_CASE("simulated truth has the requested zeros") {
    const auto dir = scratch("zeros");
    REQUIRE(run({"simulate", "--r", "10", "--zero-prop", "0.5", "--seed", "3", "--out",
                 dir.string()}).code == 0);
    const auto truth = truth_from_json(read_text_file(dir / "truth.json"));
    CHECK((truth.beta0.array() == 0.0).count() == 5);
}

TEST_CASE("invalid simulation config exits 2") {
    const auto dir = scratch("badsim");
    CHECK(run({"simulate", "--T", "0", "--out", dir.string()}).code == 2);
    CHECK(run({"simulate", "--sigma", "-1", "--out", dir.string()}).code == 2);
}

TEST_CASE("fit writes the three artifacts") {
    const auto dir = scratch("fit");
    REQUIRE(run({"simulate", "--T", "150", "--r", "8", "--p", "2", "--q", "1", "--seed", "5",
                 "--out", dir.string()}).code == 0);
    const auto data = (dir / "data.csv").string();
    const auto before = read_text_file(data);
    const auto r = run({"fit", "--input", data, "--response", "y", "--p", "2", "--q", "1",
                        "--out", (dir / "fit").string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "fit" / "fit.json"));
    CHECK(fs::exists(dir / "fit" / "residual_acf.csv"));
    const auto metrics = read_csv(dir / "fit" / "metrics.csv");
    CHECK(metrics.rows.size() == 1);
    CHECK(metrics.rows[0][0] == "REGARMA(2,1)");
    CHECK(read_text_file(data) == before);

    const auto again = run({"fit", "--input", data, "--response", "y", "--p", "2", "--q", "1",
                            "--out", (dir / "fit2").string()});
    CHECK(read_text_file(dir / "fit" / "fit.json") == read_text_file(dir / "fit2" / "fit.json"));
}

TEST_CASE("order selection writes four model rows") {
    const auto dir = scratch("orders");
    REQUIRE(run({"simulate", "--T", "200", "--r", "6", "--p", "2", "--q", "1", "--seed", "9",
                 "--out", dir.string()}).code == 0);
    const auto r = run({"fit", "--input", (dir / "data.csv").string(), "--response", "y",
                        "--pmax", "4", "--qmax", "4", "--criterion", "bic", "--order-method", "b",
                        "--out", (dir / "fit").string()});
    REQUIRE(r.code == 0);
    const auto metrics = read_csv(dir / "fit" / "metrics.csv");
    REQUIRE(metrics.rows.size() == 4);
    CHECK(metrics.rows[0][0] == "ADAPTIVE-LASSO");
    CHECK(metrics.rows[1][0].rfind("REGAR(", 0) == 0);
    CHECK(metrics.rows[2][0].rfind("REGMA(", 0) == 0);
    CHECK(metrics.rows[3][0].rfind("REGARMA(", 0) == 0);
}

TEST_CASE("few observations print the method hint") {
    const auto dir = scratch("hint");
    REQUIRE(run({"simulate", "--T", "60", "--r", "5", "--seed", "2", "--out", dir.string()}).code == 0);
    const auto r = run({"select", "--input", (dir / "data.csv").string(), "--response", "y",
                        "--pmax", "2", "--qmax", "1", "--out", (dir / "sel").string()});
    CHECK(r.code == 0);
    CHECK(r.err.find("--order-method a") != std::string::npos);
    CHECK(fs::exists(dir / "sel" / "selection.csv"));
}

TEST_CASE("input errors exit 2 with a useful message") {
    const auto dir = scratch("inputs");
    REQUIRE(run({"simulate", "--T", "50", "--r", "3", "--seed", "1", "--out", dir.string()}).code == 0);
    auto r = run({"fit", "--input", (dir / "data.csv").string(), "--response", "price", "--out",
                  (dir / "o").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("price") != std::string::npos);

    write_text_file(dir / "empty.csv", "");
    r = run({"fit", "--input", (dir / "empty.csv").string(), "--response", "y", "--out",
             (dir / "o").string()});
    CHECK(r.code == 2);

    write_text_file(dir / "bad.csv", "y,x1\n1,2\n2,abc\n3,1\n");
    r = run({"fit", "--input", (dir / "bad.csv").string(), "--response", "y", "--out",
             (dir / "o").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("x1") != std::string::npos);

    r = run({"fit", "--input", (dir / "nope.csv").string(), "--response", "y", "--out",
             (dir / "o").string()});
    CHECK(r.code == 2);
    CHECK(run({"fit", "--bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"fit", "--input", (dir / "data.csv").string(), "--response", "y", "--criterion",
               "cp", "--out", (dir / "o").string()}).code == 2);
}

TEST_CASE("bench requires a seed and reruns byte-identically") {
    const auto dir = scratch("bench");
    CHECK(run({"bench", "--out", (dir / "x").string()}).code == 2);
    const std::vector<std::string> grid{"--T-values", "60", "--r-values", "10", "--sigma-values",
                                        "0.5", "--zero-props", "0.5", "--replicates", "2"};
    std::vector<std::string> first{"bench", "--seed", "4", "--out", (dir / "a").string()};
    first.insert(first.end(), grid.begin(), grid.end());
    REQUIRE(run(first).code == 0);
    REQUIRE(run({"bench", "--manifest", (dir / "a" / "manifest.json").string(), "--out",
                 (dir / "b").string()}).code == 0);
    for (const char* f : {"comparison.csv", "summary.csv", "figure_mspe_by_T_r.csv",
                          "figure_mspe_by_sigma.csv", "manifest.json"}) {
        CHECK(read_text_file(dir / "a" / f) == read_text_file(dir / "b" / f));
    }
}

TEST_CASE("bench under strict fails on aborted cells") {
    const auto dir = scratch("strict");
    const auto r = run({"bench", "--seed", "1", "--T-values", "60", "--r-values", "10",
                        "--sigma-values", "0.5", "--zero-props", "0.5", "--replicates", "2",
                        "--cell-budget", "0", "--strict", "--out", dir.string()});
    CHECK(r.code == 3);
}

TEST_CASE("bounds report matches the diagnostics module") {
    const auto dir = scratch("bounds");
    REQUIRE(run({"simulate", "--T", "120", "--r", "6", "--p", "1", "--q", "1", "--seed", "4",
                 "--out", dir.string()}).code == 0);
    const auto data = (dir / "data.csv").string();
    REQUIRE(run({"fit", "--input", data, "--response", "y", "--p", "1", "--q", "1", "--out",
                 (dir / "fit").string()}).code == 0);
    const auto r = run({"bounds", "--fit", (dir / "fit" / "fit.json").string(), "--input", data,
                        "--response", "y", "--truth", (dir / "truth.json").string(), "--strict"});
    REQUIRE(r.code == 0);

    const auto raw = read_dataset_csv(data, "y");
    const auto st = standardize(raw);
    const auto truth = truth_from_json(read_text_file(dir / "truth.json"));
    auto loaded = fit_from_json(read_text_file(dir / "fit" / "fit.json"));
    restore_fit_series(loaded.fit, st.data);
    const auto b = realized_bound_inputs(loaded.fit, st.data, truth.sigma / st.transform.y_scale);
    CHECK(r.out.find("theorem5_bound " + format_double(theorem5_bound(b))) != std::string::npos);
    CHECK(r.out.find("remark2_bound  " + format_double(remark2_bound(b))) != std::string::npos);
    CHECK(r.out.find("within") != std::string::npos);
}

TEST_CASE("bounds notes the lasso case and rejects mismatched data") {
    const auto dir = scratch("bounds_lasso");
    REQUIRE(run({"simulate", "--T", "80", "--r", "4", "--p", "0", "--q", "0", "--seed", "6",
                 "--out", dir.string()}).code == 0);
    const auto data = (dir / "data.csv").string();
    REQUIRE(run({"fit", "--input", data, "--response", "y", "--out", (dir / "fit").string()}).code == 0);
    const auto fit_json = (dir / "fit" / "fit.json").string();
    auto r = run({"bounds", "--fit", fit_json, "--input", data, "--response", "y", "--sigma", "0.5"});
    CHECK(r.code == 0);
    CHECK(r.out.find("lasso") != std::string::npos);

    REQUIRE(run({"simulate", "--T", "80", "--r", "5", "--seed", "6", "--out",
                 (dir / "other").string()}).code == 0);
    r = run({"bounds", "--fit", fit_json, "--input", (dir / "other" / "data.csv").string(),
             "--response", "y", "--sigma", "0.5"});
    CHECK(r.code == 2);
}
