#include "regarma/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "fit_internal.hpp"
#include "regarma/error.hpp"

namespace regarma {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Ordering used for the argmin: criterion, df, p + q, then the penalty scales.
bool better(const SelectionRow& a, const SelectionRow& b) {
    return std::make_tuple(a.criterion, a.df, a.p + a.q, a.scales.lambda, a.scales.gamma,
                           a.scales.tau) <
           std::make_tuple(b.criterion, b.df, b.p + b.q, b.scales.lambda, b.scales.gamma,
                           b.scales.tau);
}

bool nonincreasing(std::span<const PenaltyScales> grid) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i].lambda > grid[i - 1].lambda || grid[i].gamma > grid[i - 1].gamma ||
            grid[i].tau > grid[i - 1].tau) {
            return false;
        }
    }
    return true;
}

std::vector<double> log_spaced(double top, int count, double ratio) {
    if (count < 1) throw Error(ErrorCode::InvalidArgument, "grid count must be >= 1");
    if (!(ratio > 0.0 && ratio <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "grid ratio must lie in (0, 1]");
    }
    std::vector<double> out;
    if (top <= 0.0) {
        out.push_back(0.0);
        return out;
    }
    for (int i = 0; i < count; ++i) {
        const double frac = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        out.push_back(top * std::pow(ratio, frac));
    }
    return out;
}

// Design of the two-step fit when step 1 returns all zeros.
LagDesign null_step2_design(const TimeSeriesDataset& ds, int p, int q) {
    Vector eps = ds.y();
    eps.head(p).setZero();
    return build_lag_design(ds, p, q, eps);
}

double block_max(const LagDesign& d, int offset, int width) {
    if (width == 0) return 0.0;
    return (2.0 * (d.H.middleCols(offset, width).transpose() * d.y_eff)).cwiseAbs().maxCoeff();
}

// Fits one grid point, keeping warm starts between consecutive points.
class GridFitter {
public:
    GridFitter(const TimeSeriesDataset& ds, int p, int q, const SelectionOptions& opts,
               const RegarmaFit* fixed_pilot)
        : ds_(ds), p_(p), q_(q), opts_(opts), fixed_pilot_(fixed_pilot) {}

    RegarmaFit fit(const PenaltyScales& s) {
        const PenaltyConfig base = s.expand(ds_.r(), p_, q_);
        FitOptions fo = opts_.fit;
        if (!opts_.adaptive) {
            fo.warm_start = last_final_ ? &*last_final_ : nullptr;
            last_final_ = fit_regarma(ds_, p_, q_, base, fo);
            return *last_final_;
        }
        if (fixed_pilot_) {
            fo.warm_start = last_final_ ? &*last_final_ : nullptr;
            last_final_ = fit_weighted_from_pilot(ds_, *fixed_pilot_, base, opts_.adaptive_weights, fo);
            return *last_final_;
        }
        FitOptions final_opts = fo;
        final_opts.warm_start = last_final_ ? &*last_final_ : nullptr;
        AdaptiveFit af = fit_adaptive_regarma_with_pilot(
            ds_, p_, q_, base, opts_.adaptive_weights, final_opts,
            last_pilot_ ? &*last_pilot_ : nullptr);
        last_pilot_ = std::move(af.pilot);
        last_final_ = std::move(af.fit);
        return *last_final_;
    }

private:
    const TimeSeriesDataset& ds_;
    int p_;
    int q_;
    const SelectionOptions& opts_;
    const RegarmaFit* fixed_pilot_;
    std::optional<RegarmaFit> last_pilot_;
    std::optional<RegarmaFit> last_final_;
};

void finish(SelectionResult& res, const TimeSeriesDataset& ds, const SelectionRow& best) {
    res.best_scales = best.scales;
    res.best_p = best.p;
    res.best_q = best.q;
    res.best_criterion = best.criterion;
    res.best_df = best.df;
    res.best_penalties = best.scales.expand(ds.r(), best.p, best.q);
}

std::optional<RegarmaFit> selected_pilot(const TimeSeriesDataset& ds, int p, int q,
                                         std::span<const PenaltyScales> grid, CriterionKind kind,
                                         const SelectionOptions& options) {
    if (!options.adaptive || options.pilot_mode != PilotMode::Selected) return std::nullopt;
    SelectionOptions plain = options;
    plain.adaptive = false;
    return select_penalties(ds, p, q, grid, kind, plain).best_fit;
}

}  // namespace

std::string_view to_string(CriterionKind kind) noexcept {
    switch (kind) {
        case CriterionKind::BIC: return "bic";
        case CriterionKind::AIC: return "aic";
        case CriterionKind::CV: return "cv";
    }
    return "unknown";
}

CriterionKind criterion_from_string(std::string_view name) {
    if (name == "bic" || name == "BIC") return CriterionKind::BIC;
    if (name == "aic" || name == "AIC") return CriterionKind::AIC;
    if (name == "cv" || name == "CV") return CriterionKind::CV;
    throw Error(ErrorCode::Config, "unknown criterion '" + std::string(name) + "'");
}

double information_criterion(const RegarmaFit& fit, CriterionKind kind) {
    if (fit.n < 1) throw Error(ErrorCode::TooFewSamples, "fit has no effective sample");
    const double n = fit.n;
    const double rss = fit.rss();
    if (rss <= 0.0) return -kInf;
    const double fit_term = n * std::log(rss / n);
    switch (kind) {
        case CriterionKind::BIC: return fit_term + fit.df * std::log(n);
        case CriterionKind::AIC: return fit_term + 2.0 * fit.df;
        case CriterionKind::CV: break;
    }
    throw Error(ErrorCode::InvalidArgument, "cross-validation is not an information criterion");
}

double max_penalty(const TimeSeriesDataset& ds, int p, int q) {
    const Vector zeros = Vector::Zero(ds.T());
    const LagDesign d1 = build_lag_design(ds, p, 0, zeros);
    const double step1 = zero_solution_penalty(d1.H, d1.y_eff);
    if (q == 0) return step1;
    const LagDesign d2 = null_step2_design(ds, p, q);
    return std::max(step1, zero_solution_penalty(d2.H, d2.y_eff));
}

std::vector<PenaltyScales> default_penalty_grid(const TimeSeriesDataset& ds, int p, int q,
                                                int count, double ratio) {
    std::vector<PenaltyScales> grid;
    for (double s : log_spaced(max_penalty(ds, p, q), count, ratio)) {
        grid.push_back({s, s, s});
    }
    return grid;
}

std::vector<PenaltyScales> independent_penalty_grid(const TimeSeriesDataset& ds, int p, int q,
                                                    int count, double ratio) {
    const LagDesign d = null_step2_design(ds, p, q);
    const Vector zeros = Vector::Zero(ds.T());
    const LagDesign d1 = build_lag_design(ds, p, 0, zeros);
    // Block maxima over both steps so each block's top value zeroes it.
    const double lam_top = std::max(block_max(d, d.x_offset(), d.r), block_max(d1, d1.x_offset(), d1.r));
    const double gam_top = std::max(block_max(d, 0, p), block_max(d1, 0, p));
    const double tau_top = block_max(d, d.ma_offset(), q);
    const auto lams = log_spaced(lam_top, ds.r() > 0 ? count : 1, ratio);
    const auto gams = p > 0 ? log_spaced(gam_top, count, ratio) : std::vector<double>{0.0};
    const auto taus = q > 0 ? log_spaced(tau_top, count, ratio) : std::vector<double>{0.0};
    std::vector<PenaltyScales> grid;
    for (double l : lams) {
        for (double g : gams) {
            for (double t : taus) grid.push_back({l, g, t});
        }
    }
    return grid;
}

SelectionResult select_penalties(const TimeSeriesDataset& ds, int p, int q,
                                  std::span<const PenaltyScales> grid, CriterionKind kind,
                                  const SelectionOptions& options) {
    if (kind == CriterionKind::CV) {
        return cross_validate(ds, p, q, grid, options.folds, options);
    }
    if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "penalty grid is empty");

    const std::optional<RegarmaFit> pilot = selected_pilot(ds, p, q, grid, kind, options);
    GridFitter fitter(ds, p, q, options, pilot ? &*pilot : nullptr);
    const bool can_stop = nonincreasing(grid);
    const int n = ds.T() - p - q;

    SelectionResult res;
    res.criterion_kind = kind;
    std::optional<SelectionRow> best;
    bool best_eligible = false;
    bool stopped = false;
    for (const PenaltyScales& s : grid) {
        SelectionRow row{s, p, q, n, -1, kInf, false};
        if (!stopped) {
            RegarmaFit fit = fitter.fit(s);
            row.df = fit.df;
            row.criterion = information_criterion(fit, kind);
            row.eligible = fit.df <= options.max_df_fraction * n;
            // Ineligible rows only count when nothing eligible exists.
            const bool take = !best || (row.eligible && !best_eligible) ||
                              (row.eligible == best_eligible && better(row, *best));
            if (take) {
                best = row;
                best_eligible = row.eligible;
                res.best_fit = std::move(fit);
            }
            if (!row.eligible && can_stop) stopped = true;
        }
        res.criterion_table.push_back(row);
    }
    finish(res, ds, *best);
    return res;
}

SelectionResult select_penalties(const TimeSeriesDataset& ds, int p, int q, CriterionKind kind,
                                 const SelectionOptions& options) {
    const auto grid = default_penalty_grid(ds, p, q);
    return select_penalties(ds, p, q, grid, kind, options);
}

SelectionResult select_orders_method_a(const TimeSeriesDataset& ds, int p_max, int q_max,
                                       std::span<const PenaltyScales> grid, CriterionKind kind,
                                       const SelectionOptions& options) {
    if (p_max < 0 || q_max < 0) throw Error(ErrorCode::InvalidArgument, "negative order bound");
    if (p_max + q_max >= ds.T()) {
        throw Error(ErrorCode::OrderTooLarge, "Pmax + Qmax must be below T");
    }
    SelectionResult res;
    res.criterion_kind = kind;
    std::optional<SelectionRow> best;
    for (int p = 0; p <= p_max; ++p) {
        for (int q = 0; q <= q_max; ++q) {
            std::vector<PenaltyScales> own;
            std::span<const PenaltyScales> g = grid;
            if (grid.empty()) {
                own = default_penalty_grid(ds, p, q);
                g = own;
            }
            SelectionResult sub = select_penalties(ds, p, q, g, kind, options);
            res.criterion_table.insert(res.criterion_table.end(), sub.criterion_table.begin(),
                                       sub.criterion_table.end());
            SelectionRow row{sub.best_scales, p, q, ds.T() - p - q, sub.best_df,
                             sub.best_criterion, true};
            if (!best || better(row, *best)) {
                best = row;
                res.best_fit = std::move(sub.best_fit);
            }
        }
    }
    finish(res, ds, *best);
    return res;
}

SelectionResult select_orders_method_b(const TimeSeriesDataset& ds, int p_max, int q_max,
                                       std::span<const PenaltyScales> grid, CriterionKind kind,
                                       const SelectionOptions& options) {
    if (p_max < 0 || q_max < 0) throw Error(ErrorCode::InvalidArgument, "negative order bound");
    if (p_max + q_max >= ds.T()) {
        throw Error(ErrorCode::OrderTooLarge, "Pmax + Qmax must be below T");
    }
    std::vector<PenaltyScales> own;
    if (grid.empty()) {
        own = default_penalty_grid(ds, p_max, q_max);
        grid = own;
    }
    SelectionResult res = select_penalties(ds, p_max, q_max, grid, kind, options);
    const RegarmaFit& fit = *res.best_fit;
    auto last_nonzero = [](const Vector& v) {
        int k = 0;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (std::abs(v[i]) > kZeroThreshold) k = static_cast<int>(i) + 1;
        }
        return k;
    };
    res.best_p = last_nonzero(fit.phi);
    res.best_q = last_nonzero(fit.theta);
    return res;
}

std::vector<std::pair<int, int>> contiguous_folds(int n, int folds) {
    if (folds < 2) throw Error(ErrorCode::TooFewSamples, "need at least 2 folds");
    if (folds > n) throw Error(ErrorCode::TooFewSamples, "more folds than observations");
    std::vector<std::pair<int, int>> out;
    const int base = n / folds;
    const int extra = n % folds;
    int begin = 0;
    for (int f = 0; f < folds; ++f) {
        const int size = base + (f < extra ? 1 : 0);
        out.emplace_back(begin, begin + size);
        begin += size;
    }
    return out;
}

SelectionResult cross_validate(const TimeSeriesDataset& ds, int p, int q,
                               std::span<const PenaltyScales> grid, int folds,
                               const SelectionOptions& options) {
    if (options.shuffle_folds) {
        throw Error(ErrorCode::Config, "shuffled folds are not supported for time series");
    }
    if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "penalty grid is empty");
    if (p + q >= ds.T()) throw Error(ErrorCode::OrderTooLarge, "p + q must be below T");
    const int T0 = p + q;
    const int n = ds.T() - T0;
    const auto blocks = contiguous_folds(n, folds);
    if (n - (blocks.front().second - blocks.front().first) < 1) {
        throw Error(ErrorCode::TooFewSamples, "training blocks would be empty");
    }

    const std::optional<RegarmaFit> pilot =
        selected_pilot(ds, p, q, grid, CriterionKind::BIC, options);
    GridFitter full_fitter(ds, p, q, options, pilot ? &*pilot : nullptr);

    struct FoldState {
        std::vector<char> mask;
        std::optional<detail::TwoStep> pilot;
        std::optional<detail::TwoStep> last;
    };
    std::vector<FoldState> states(blocks.size());
    for (std::size_t f = 0; f < blocks.size(); ++f) {
        states[f].mask.assign(ds.T(), 1);
        for (int i = blocks[f].first; i < blocks[f].second; ++i) states[f].mask[T0 + i] = 0;
    }

    auto coef_weights = [&](const Vector& pilot_coef, const PenaltyConfig& base) {
        RegarmaFit shape;
        shape.phi = pilot_coef.head(p);
        shape.theta = pilot_coef.segment(p, q);
        shape.beta = pilot_coef.tail(ds.r());
        return compute_adaptive_weights(shape, base, options.adaptive_weights.exponent,
                                        options.adaptive_weights.cap);
    };
    auto warm = [](const std::optional<detail::TwoStep>& ts, bool step1) -> const Vector* {
        if (!ts) return nullptr;
        return step1 ? &ts->step1.coefficients : &ts->step2.coefficients;
    };

    const bool can_stop = nonincreasing(grid);
    SelectionResult res;
    res.criterion_kind = CriterionKind::CV;
    std::optional<SelectionRow> best;
    bool best_eligible = false;
    bool stopped = false;
    for (const PenaltyScales& s : grid) {
        SelectionRow row{s, p, q, n, -1, kInf, false};
        if (stopped) {
            res.criterion_table.push_back(row);
            continue;
        }
        const PenaltyConfig base = s.expand(ds.r(), p, q);
        double fold_mse_sum = 0.0;
        for (std::size_t f = 0; f < blocks.size(); ++f) {
            FoldState& st = states[f];
            PenaltyConfig pen = base;
            if (options.adaptive) {
                if (pilot) {
                    pen = compute_adaptive_weights(*pilot, base, options.adaptive_weights.exponent,
                                                   options.adaptive_weights.cap);
                } else {
                    st.pilot = detail::two_step(ds, p, q, base, options.fit, st.mask,
                                                warm(st.pilot, true), warm(st.pilot, false));
                    pen = coef_weights(st.pilot->step2.coefficients, base);
                }
            }
            st.last = detail::two_step(ds, p, q, pen, options.fit, st.mask, warm(st.last, true),
                                       warm(st.last, false));
            const Vector& c = st.last->step2.coefficients;
            double sse = 0.0;
            for (int i = blocks[f].first; i < blocks[f].second; ++i) {
                const double e = st.last->design.y_eff[i] - st.last->design.H.row(i).dot(c);
                sse += e * e;
            }
            fold_mse_sum += sse / (blocks[f].second - blocks[f].first);
        }
        RegarmaFit full = full_fitter.fit(s);
        row.df = full.df;
        row.criterion = fold_mse_sum / static_cast<double>(blocks.size());
        row.eligible = full.df <= options.max_df_fraction * n;
        const bool take = !best || (row.eligible && !best_eligible) ||
                          (row.eligible == best_eligible && better(row, *best));
        if (take) {
            best = row;
            best_eligible = row.eligible;
            res.best_fit = std::move(full);
        }
        if (!row.eligible && can_stop) stopped = true;
        res.criterion_table.push_back(row);
    }
    finish(res, ds, *best);
    return res;
}

}  // namespace regarma
