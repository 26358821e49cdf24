#include "attocell/report.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "attocell/analytic.hpp"
#include "attocell/simulator.hpp"

namespace attocell {
namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Coverage / rate row in the common 9-column schema. y1/y2 stay empty for the
// typical-user average, which has no fixed receiver.
void emit_row(std::ostringstream& csv, const NamedLocation& loc, double threshold,
              const std::string& engine, double value, double ci, int order, double eta) {
    csv << loc.name << ',';
    if (loc.point)
        csv << num(loc.point->x) << ',' << num(loc.point->y) << ',';
    else
        csv << ",,";
    csv << num(threshold) << ',' << engine << ',' << num(value) << ',' << num(ci) << ','
        << order << ',' << num(eta) << '\n';
}

// Analytic coverage at a configured location (fixed receiver or the
// typical-user average).
Estimate analytic_coverage(const ExperimentConfig& cfg, const NamedLocation& loc, double tau) {
    if (loc.point)
        return sinr_coverage(make_scenario(cfg.params, *loc.point), tau,
                             cfg.params.max_order, cfg.quad);
    return sinr_coverage_typical(cfg.params, tau, cfg.params.max_order, cfg.grid_n, cfg.quad);
}

// Lower empirical median: the element at index (n-1)/2 of the sorted sample.
// Deterministic for any sample size, which matters more here than the
// midpoint convention.
double lower_median(std::vector<double> sample) {
    const std::size_t mid = (sample.size() - 1) / 2;
    std::nth_element(sample.begin(), sample.begin() + static_cast<std::ptrdiff_t>(mid),
                     sample.end());
    return sample[mid];
}

// Thresholds 0, 3, 6, 9 dB: the grid the cross-engine validation runs on.
const std::vector<double>& validation_taus() {
    static const std::vector<double> taus{1.0, 1.9952623149688795, 3.9810717055349722,
                                          7.943282347242816};
    return taus;
}

}  // namespace

RunResult run_coverage(const ExperimentConfig& cfg) {
    RunResult res;
    const std::vector<double> grid = cfg.effective_tau_grid();
    const bool analytic = cfg.engine != Engine::MC;
    const bool mc = cfg.engine != Engine::ANALYTIC;
    if (analytic)
        for (double tau : grid)
            if (tau < 1.0) {
                res.exit_code = 1;
                res.message = "coverage: threshold " + num(tau) +
                              " is below one; the analytic engine cannot evaluate it";
                return res;
            }

    std::ostringstream csv;
    csv << "location_name,y1,y2,threshold,engine,value,ci_halfwidth,K,eta\n";
    const int order = cfg.params.max_order;
    const double eta = cfg.params.reflection_coeff;
    bool certified = true;
    long rows = 0;
    for (const NamedLocation& loc : cfg.locations) {
        if (analytic)
            for (double tau : grid) {
                const Estimate e = analytic_coverage(cfg, loc, tau);
                certified = certified && e.certified;
                emit_row(csv, loc, tau, "analytic", e.value, e.uncertainty, order, eta);
                ++rows;
            }
        if (mc) {
            const CoverageCurve curve = estimate_coverage(cfg.params, loc.point, grid, order,
                                                          cfg.mode, cfg.trials, cfg.seed);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                emit_row(csv, loc, grid[i], "mc", curve.values[i], curve.ci_halfwidth[i],
                         order, eta);
                ++rows;
            }
        }
    }
    res.csv = csv.str();
    res.exit_code = certified ? 0 : 2;
    res.message = "coverage: " + std::to_string(rows) + " rows" +
                  (certified ? "" : "; some analytic values are not certified");
    return res;
}

RunResult run_rate(const ExperimentConfig& cfg) {
    RunResult res;
    const std::vector<double> grid = cfg.effective_rho_grid();
    const bool analytic = cfg.engine != Engine::MC;
    const bool mc = cfg.engine != Engine::ANALYTIC;
    const NetworkParams& p = cfg.params;
    const double load = mean_load(p.user_density, p.density);

    if (analytic)
        for (double rho : grid) {
            const RateThreshold rt =
                rate_to_sinr_threshold(rho, load, p.bandwidth, p.zeta1, p.zeta2);
            if (!rt.valid) {
                res.exit_code = 1;
                res.message = "rate: target " + num(rho) +
                              " bits/s maps to a threshold below one; the analytic engine "
                              "cannot evaluate it";
                return res;
            }
        }

    std::ostringstream csv;
    csv << "location_name,y1,y2,threshold,engine,value,ci_halfwidth,K,eta\n";
    const int order = p.max_order;
    const double eta = p.reflection_coeff;
    const double rate_scale = p.zeta1 * p.bandwidth / load;
    bool certified = true;
    long rows = 0;
    for (const NamedLocation& loc : cfg.locations) {
        if (analytic)
            for (double rho : grid) {
                const RateThreshold rt =
                    rate_to_sinr_threshold(rho, load, p.bandwidth, p.zeta1, p.zeta2);
                const Estimate e = loc.point
                                       ? rate_coverage(make_scenario(p, *loc.point), rho,
                                                       order, cfg.quad)
                                       : sinr_coverage_typical(p, rt.tau, order, cfg.grid_n,
                                                               cfg.quad);
                certified = certified && e.certified;
                emit_row(csv, loc, rho, "analytic", e.value, e.uncertainty, order, eta);
                ++rows;
            }
        if (mc) {
            const CoverageCurve curve = estimate_rate_coverage(p, loc.point, grid, order,
                                                               cfg.mode, cfg.trials, cfg.seed);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                emit_row(csv, loc, grid[i], "mc", curve.values[i], curve.ci_halfwidth[i],
                         order, eta);
                ++rows;
            }
        }
    }

    // Empirical medians (and, with reflections on, the relative drop against a
    // zero-reflection run of the same seed). The threshold column carries the
    // quantile.
    if (mc)
        for (const NamedLocation& loc : cfg.locations) {
            std::vector<double> sinrs =
                sample_sinr(p, loc.point, order, cfg.mode, cfg.trials, cfg.seed);
            for (double& s : sinrs) s = rate_scale * std::log2(1.0 + p.zeta2 * s);
            const double med = lower_median(std::move(sinrs));
            emit_row(csv, loc, 0.5, "mc_median", med, 0.0, order, eta);
            ++rows;
            if (order > 0) {
                std::vector<double> base =
                    sample_sinr(p, loc.point, 0, cfg.mode, cfg.trials, cfg.seed);
                for (double& s : base) s = rate_scale * std::log2(1.0 + p.zeta2 * s);
                const double med0 = lower_median(std::move(base));
                if (med0 > 0.0) {
                    emit_row(csv, loc, 0.5, "mc_median_drop", (med0 - med) / med0, 0.0,
                             order, eta);
                    ++rows;
                }
            }
        }

    res.csv = csv.str();
    res.exit_code = certified ? 0 : 2;
    res.message = "rate: " + std::to_string(rows) + " rows" +
                  (certified ? "" : "; some analytic values are not certified");
    return res;
}

RunResult run_validate(const ExperimentConfig& cfg) {
    RunResult res;
    std::ostringstream csv;
    csv << "check,name,threshold,left,right,delta,tolerance,status\n";
    bool failed = false;
    bool certified = true;
    long rows = 0, passed = 0;

    auto emit_check = [&](const std::string& check, const std::string& name, double threshold,
                          double left, double right, double delta, double tol) {
        const bool ok = delta <= tol;
        failed = failed || !ok;
        ++rows;
        if (ok) ++passed;
        csv << check << ',' << name << ',' << num(threshold) << ',' << num(left) << ','
            << num(right) << ',' << num(delta) << ',' << num(tol) << ','
            << (ok ? "pass" : "fail") << '\n';
    };

    // Coverage-equivalence identities. The first two are direct-path
    // statements (image lattices differ between the paired rooms), the third
    // is scale-free and holds at the configured order.
    const Scenario base = make_scenario(cfg.params, Vec2{0.0, 0.0});
    for (int which = 1; which <= 3; ++which) {
        const CorollaryPair pair = corollary_transform(which, base);
        const int order = which == 3 ? cfg.params.max_order : 0;
        for (double tau : cfg.corollary_taus) {
            const Estimate left = sinr_coverage(pair.left, tau, order, cfg.quad);
            const Estimate right = sinr_coverage(pair.right, tau, order, cfg.quad);
            certified = certified && left.certified && right.certified;
            emit_check("corollary" + std::to_string(which), "identity", tau, left.value,
                       right.value, std::fabs(left.value - right.value), 1e-3);
        }
    }

    // Cross-engine coverage comparison at the fixed locations, plus the
    // typical-user envelope against those locations' Monte Carlo curves.
    const std::vector<double>& taus = validation_taus();
    const int order = cfg.params.max_order;
    std::vector<CoverageCurve> fixed_curves;
    bool have_typical = false;
    for (const NamedLocation& loc : cfg.locations) {
        if (!loc.point) {
            have_typical = true;
            continue;
        }
        const CoverageCurve curve = estimate_coverage(cfg.params, loc.point, taus, order,
                                                      cfg.mode, cfg.trials, cfg.seed);
        const Scenario sc = make_scenario(cfg.params, *loc.point);
        for (std::size_t i = 0; i < taus.size(); ++i) {
            const Estimate an = sinr_coverage(sc, taus[i], order, cfg.quad);
            certified = certified && an.certified;
            const double tol =
                std::max(0.01, 3.0 * curve.ci_halfwidth[i] + an.uncertainty);
            emit_check("coverage", loc.name, taus[i], an.value, curve.values[i],
                       std::fabs(an.value - curve.values[i]), tol);
        }
        fixed_curves.push_back(curve);
    }
    if (have_typical && !fixed_curves.empty()) {
        const CoverageCurve typical = estimate_coverage(cfg.params, std::nullopt, taus, order,
                                                        cfg.mode, cfg.trials, cfg.seed);
        for (std::size_t i = 0; i < taus.size(); ++i) {
            double lo = 1.0, hi = 0.0;
            for (const CoverageCurve& curve : fixed_curves) {
                lo = std::min(lo, curve.values[i] - curve.ci_halfwidth[i]);
                hi = std::max(hi, curve.values[i] + curve.ci_halfwidth[i]);
            }
            const double t = typical.values[i];
            const double nearest = std::clamp(t, lo, hi);
            emit_check("envelope", "typical", taus[i], t, nearest, std::fabs(t - nearest),
                       0.01 + typical.ci_halfwidth[i]);
        }
    }

    res.csv = csv.str();
    res.exit_code = failed ? 3 : (certified ? 0 : 2);
    res.message = "validate: " + std::to_string(passed) + "/" + std::to_string(rows) +
                  " checks passed" +
                  (certified ? "" : "; some analytic values are not certified");
    return res;
}

RunResult run_interference(const ExperimentConfig& cfg) {
    RunResult res;
    std::ostringstream csv;
    csv << "location_name,y1,y2,s,analytic,analytic_unc,mc,mc_ci,delta,tolerance,status\n";
    bool failed = false;
    bool certified = true;
    long rows = 0, passed = 0;
    const int order = cfg.params.max_order;
    const long median_trials = std::min<long>(cfg.trials, 20000);

    for (const NamedLocation& loc : cfg.locations) {
        if (!loc.point) continue;  // the averaged receiver has no single CDF

        const double median = lower_median(sample_interference(
            cfg.params, *loc.point, order, cfg.mode, median_trials, cfg.seed));
        if (!(median > 0.0)) continue;

        std::vector<double> s_grid;
        for (int i = 0; i < 10; ++i)
            s_grid.push_back(median * 0.5 * std::pow(4.0, i / 9.0));
        const std::vector<McEstimate> mc = estimate_interference_cdf(
            cfg.params, *loc.point, s_grid, order, cfg.mode, cfg.trials, cfg.seed);
        const Scenario sc = make_scenario(cfg.params, *loc.point);
        for (std::size_t i = 0; i < s_grid.size(); ++i) {
            const Estimate an = interference_cdf(sc, s_grid[i], order, cfg.quad);
            certified = certified && an.certified;
            const double delta = std::fabs(an.value - mc[i].value);
            const double tol = std::max(0.01, 3.0 * mc[i].ci_halfwidth + an.uncertainty);
            const bool ok = delta <= tol;
            failed = failed || !ok;
            ++rows;
            if (ok) ++passed;
            csv << loc.name << ',' << num(loc.point->x) << ',' << num(loc.point->y) << ','
                << num(s_grid[i]) << ',' << num(an.value) << ',' << num(an.uncertainty) << ','
                << num(mc[i].value) << ',' << num(mc[i].ci_halfwidth) << ',' << num(delta)
                << ',' << num(tol) << ',' << (ok ? "pass" : "fail") << '\n';
        }
    }

    res.csv = csv.str();
    res.exit_code = failed ? 3 : (certified ? 0 : 2);
    res.message = "interference: " + std::to_string(passed) + "/" + std::to_string(rows) +
                  " comparisons passed" +
                  (certified ? "" : "; some analytic values are not certified");
    return res;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f)
        throw std::runtime_error("cannot open '" + tmp + "' for writing: " +
                                 std::strerror(errno));
    const std::size_t written = std::fwrite(content.data(), 1, content.size(), f);
    const bool flushed = std::fflush(f) == 0;
    const bool closed = std::fclose(f) == 0;
    if (written != content.size() || !flushed || !closed) {
        std::remove(tmp.c_str());
        throw std::runtime_error("short write to '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot rename '" + tmp + "' to '" + path +
                                 "': " + std::strerror(errno));
    }
}

}  // namespace attocell
