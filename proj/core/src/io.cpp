#include "regarma/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "regarma/error.hpp"

namespace regarma {
namespace {

using nlohmann::json;

constexpr const char* kFitFormat = "regarma-fit";
constexpr int kFitVersion = 1;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    std::string out(s.substr(b, e - b + 1));
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"') {
        out = out.substr(1, out.size() - 2);
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    return out + "\"";
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
            cell.push_back(c);
        } else if (c == ',' && !quoted) {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    cells.push_back(trim(cell));
    return cells;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

json vec_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Vector json_vec(const json& a) {
    Vector v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    return out;
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw Error(ErrorCode::Parse, "row " + std::to_string(table.rows.size() + 1) + " has " +
                                              std::to_string(cells.size()) + " cells, header has " +
                                              std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    if (!have_header) throw Error(ErrorCode::Parse, path.string() + " is empty");
    return table;
}

TimeSeriesDataset read_dataset_csv(const std::filesystem::path& path, const std::string& response) {
    const CsvTable table = read_csv(path);
    if (table.rows.empty()) throw Error(ErrorCode::Parse, path.string() + " has no data rows");
    const auto it = std::find(table.header.begin(), table.header.end(), response);
    if (it == table.header.end()) {
        throw Error(ErrorCode::InvalidArgument, "response column '" + response + "' not found");
    }
    const std::size_t resp = static_cast<std::size_t>(it - table.header.begin());
    const std::size_t rows = table.rows.size();

    std::vector<std::size_t> numeric_cols;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        std::size_t parsed = 0;
        double v;
        for (const auto& row : table.rows) parsed += parse_number(row[c], v) ? 1 : 0;
        if (parsed == 0 && c != resp) continue;  // label/date column
        for (std::size_t i = 0; i < rows; ++i) {
            if (!parse_number(table.rows[i][c], v)) {
                throw Error(ErrorCode::Parse, "column '" + table.header[c] + "', row " +
                                                  std::to_string(i + 1) + ": '" +
                                                  table.rows[i][c] + "' is not numeric");
            }
        }
        if (c != resp) numeric_cols.push_back(c);
    }

    Vector y(static_cast<Eigen::Index>(rows));
    Matrix X(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(numeric_cols.size()));
    std::vector<std::string> names;
    for (std::size_t c : numeric_cols) names.push_back(table.header[c]);
    for (std::size_t i = 0; i < rows; ++i) {
        double v;
        parse_number(table.rows[i][resp], v);
        y[static_cast<Eigen::Index>(i)] = v;
        for (std::size_t j = 0; j < numeric_cols.size(); ++j) {
            parse_number(table.rows[i][numeric_cols[j]], v);
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    }
    return TimeSeriesDataset(std::move(y), std::move(X), std::move(names), response, false);
}

void write_dataset_csv(const TimeSeriesDataset& ds, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << ds.response_name();
    for (const auto& n : ds.column_names()) out << ',' << n;
    out << '\n';
    for (int t = 0; t < ds.T(); ++t) {
        out << format_double(ds.y()[t]);
        for (int j = 0; j < ds.r(); ++j) out << ',' << format_double(ds.X()(t, j));
        out << '\n';
    }
}

std::string truth_to_json(const SimulationTruth& truth, const SimulationConfig* config) {
    json j;
    j["format"] = "regarma-truth";
    j["version"] = 1;
    j["beta0"] = vec_json(truth.beta0);
    j["phi0"] = vec_json(truth.phi0);
    j["theta0"] = vec_json(truth.theta0);
    j["sigma"] = truth.sigma;
    if (config) {
        j["config"] = {{"T", config->T},
                       {"r", config->r},
                       {"zero_proportion", config->zero_proportion},
                       {"sigma", config->sigma},
                       {"p", config->p},
                       {"q", config->q},
                       {"seed", config->seed},
                       {"burn_in", config->burn_in}};
    }
    return j.dump(2) + "\n";
}

SimulationTruth truth_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        SimulationTruth t;
        t.beta0 = json_vec(j.at("beta0"));
        t.phi0 = json_vec(j.at("phi0"));
        t.theta0 = json_vec(j.at("theta0"));
        t.sigma = j.at("sigma").get<double>();
        return t;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("truth JSON: ") + e.what());
    }
}

std::string fit_to_json(const RegarmaFit& fit, const std::vector<std::string>& column_names,
                        const StandardizationTransform* transform) {
    json j;
    j["format"] = kFitFormat;
    j["version"] = kFitVersion;
    j["orders"] = {{"p", fit.p()}, {"q", fit.q()}};
    j["adaptive"] = fit.spec.adaptive;
    j["penalties"] = {{"lambda", vec_json(fit.spec.penalties.lambda)},
                      {"gamma", vec_json(fit.spec.penalties.gamma)},
                      {"tau", vec_json(fit.spec.penalties.tau)}};
    j["column_names"] = column_names;
    j["beta"] = vec_json(fit.beta);
    j["phi"] = vec_json(fit.phi);
    j["theta"] = vec_json(fit.theta);
    j["step1"] = {{"phi", vec_json(fit.step1_phi)}, {"beta", vec_json(fit.step1_beta)}};
    j["df"] = fit.df;
    j["sigma2_hat"] = fit.sigma2_hat;
    j["objective"] = fit.objective;
    j["T"] = fit.T;
    j["n"] = fit.n;
    j["convergence"] = {{"converged", fit.converged},
                        {"iterations", fit.iterations},
                        {"kkt_violation", fit.kkt_violation}};
    if (transform) {
        j["standardization"] = {{"y_mean", transform->y_mean},
                                {"y_scale", transform->y_scale},
                                {"x_means", vec_json(transform->x_means)},
                                {"x_scales", vec_json(transform->x_scales)}};
    }
    return j.dump(2) + "\n";
}

LoadedFit fit_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        if (j.at("format").get<std::string>() != kFitFormat) {
            throw Error(ErrorCode::Parse, "not a regarma-fit document");
        }
        if (j.at("version").get<int>() != kFitVersion) {
            throw Error(ErrorCode::Parse, "unsupported fit version");
        }
        LoadedFit out;
        RegarmaFit& f = out.fit;
        f.spec.p = j.at("orders").at("p").get<int>();
        f.spec.q = j.at("orders").at("q").get<int>();
        f.spec.adaptive = j.at("adaptive").get<bool>();
        f.spec.penalties.lambda = json_vec(j.at("penalties").at("lambda"));
        f.spec.penalties.gamma = json_vec(j.at("penalties").at("gamma"));
        f.spec.penalties.tau = json_vec(j.at("penalties").at("tau"));
        out.column_names = j.at("column_names").get<std::vector<std::string>>();
        f.beta = json_vec(j.at("beta"));
        f.phi = json_vec(j.at("phi"));
        f.theta = json_vec(j.at("theta"));
        f.step1_phi = json_vec(j.at("step1").at("phi"));
        f.step1_beta = json_vec(j.at("step1").at("beta"));
        f.df = j.at("df").get<int>();
        f.sigma2_hat = j.at("sigma2_hat").get<double>();
        f.objective = j.at("objective").get<double>();
        f.T = j.at("T").get<int>();
        f.n = j.at("n").get<int>();
        f.T0 = f.spec.p + f.spec.q;
        f.converged = j.at("convergence").at("converged").get<bool>();
        f.iterations = j.at("convergence").at("iterations").get<int>();
        f.kkt_violation = j.at("convergence").at("kkt_violation").get<double>();
        if (f.phi.size() != f.spec.p || f.theta.size() != f.spec.q ||
            f.beta.size() != static_cast<Eigen::Index>(out.column_names.size()) ||
            f.step1_phi.size() != f.spec.p || f.step1_beta.size() != f.beta.size()) {
            throw Error(ErrorCode::ShapeMismatch, "fit JSON vectors do not match its orders");
        }
        if (j.contains("standardization")) {
            const auto& s = j.at("standardization");
            out.has_transform = true;
            out.transform.y_mean = s.at("y_mean").get<double>();
            out.transform.y_scale = s.at("y_scale").get<double>();
            out.transform.x_means = json_vec(s.at("x_means"));
            out.transform.x_scales = json_vec(s.at("x_scales"));
        }
        return out;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("fit JSON: ") + e.what());
    }
}

void write_selection_table_csv(const SelectionResult& result, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "lambda_scale,gamma_scale,tau_scale,p,q,n,df,criterion\n";
    for (const auto& row : result.criterion_table) {
        out << format_double(row.scales.lambda) << ',' << format_double(row.scales.gamma) << ','
            << format_double(row.scales.tau) << ',' << row.p << ',' << row.q << ',' << row.n << ','
            << row.df << ',' << format_double(row.criterion) << '\n';
    }
}

void write_metrics_csv(const std::vector<MetricsReport>& rows, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "model,mse,mae,bic,nonzero\n";
    for (const auto& m : rows) {
        out << csv_field(m.model_label) << ',' << format_double(m.mse) << ',' << format_double(m.mae) << ','
            << format_double(m.bic) << ',' << m.df << '\n';
    }
}

void write_acf_csv(const Vector& acf, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "lag,acf\n0,1\n";
    for (Eigen::Index k = 0; k < acf.size(); ++k) {
        out << (k + 1) << ',' << format_double(acf[k]) << '\n';
    }
}

}  // namespace regarma
