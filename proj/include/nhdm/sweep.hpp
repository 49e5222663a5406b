#pragma once

// Parameter sweeps over the model pipelines with deterministic CSV emission.

#include <cstdio>
#include <string>
#include <vector>

#include "nhdm/density.hpp"
#include "nhdm/evolution.hpp"
#include "nhdm/models.hpp"

namespace nhdm {

enum class SweepCommand { SwansonRdm1, SwansonThermal, TwoState, Gdm };

struct SweepConfig {
    SweepCommand command = SweepCommand::SwansonRdm1;
    double alpha1 = 1.0;       // Swanson sweeps
    double beta = 1.0;         // thermal sweep
    double r = 1.0;            // two-state sweep
    double d = 0.5;
    double start = 0.0;
    double stop = 1.0;
    int count = 2;
    bool allow_ep = false;
    Tolerances tol{};

    void validate() const {
        if (count < 2) throw DomainError("sweep: count must be >= 2");
        if (start == stop) throw DomainError("sweep: start must differ from stop");
        tol.validate();
    }
};

struct SweepRow {
    double parameter;
    double trace_re;
    double trace_im;
    double purity;
    double entropy_trace;
    RegionTag region;
    double cond_R;  // sigma_max / sigma_min (nonzero sigmas for a GDM)
};

struct SweepResult {
    std::vector<std::string> columns;
    std::vector<SweepRow> rows;
};

namespace detail {

inline double cond_of(const CMatrix& r, bool skip_null) {
    Eigen::JacobiSVD<CMatrix> svd(r);
    const auto& sv = svd.singularValues();
    double smin = 0.0;
    for (Eigen::Index i = sv.size() - 1; i >= 0; --i) {
        if (!skip_null || sv(i) > 1e-12 * sv(0)) { smin = sv(i); break; }
    }
    return (smin > 0) ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

inline SweepRow swanson_rdm1_point(double alpha2, const SweepConfig& cfg) {
    const SwansonParams p{cfg.alpha1, alpha2};
    const Region region = classify_region(p.discriminant());
    if (region.tag == RegionTag::Exceptional) {
        if (!cfg.allow_ep)
            throw ExceptionalPointError("sweep: exceptional point hit", cplx(1, 0));
        // At the exceptional point mu = {1,1,1}: evaluate via the GDM pathway.
        const GeneralizedDM g = gdm_rho(cfg.alpha1, 1.0 / 3.0, cfg.tol);
        const cplx tr = g.mat.trace();
        return {alpha2, tr.real(), tr.imag(), purity(g, cfg.tol),
                entropy_trace(g, cfg.tol), region.tag, cond_of(g.R.R, true)};
    }
    const ModelSpectrum spec = swanson_spectrum(p, cfg.tol);
    const std::vector<double> lam = rdm1_lambdas(spec.eigenvalues);
    CMatrix rho0m = CMatrix::Zero(3, 3);
    for (int j = 0; j < 3; ++j) rho0m(j, j) = lam[j];
    const DeformationOp r = swanson_R(p, cfg.tol);
    const RieszDM rdm = rdm_new(r, dm_new(rho0m, cfg.tol), cfg.tol);
    const cplx tr = rdm.mat.trace();
    return {alpha2, tr.real(), tr.imag(), purity(rdm, cfg.tol),
            entropy_trace(rdm, cfg.tol), region.tag, cond_of(r.R, false)};
}

inline SweepRow swanson_thermal_point(double alpha2, const SweepConfig& cfg) {
    const SwansonParams p{cfg.alpha1, alpha2};
    const Region region = classify_region(p.discriminant());
    if (region.tag == RegionTag::Exceptional) {
        if (!cfg.allow_ep)
            throw ExceptionalPointError("sweep: exceptional point hit", cplx(1, 0));
        const GeneralizedDM g = gdm_rho(cfg.alpha1, 1.0 / 3.0, cfg.tol);
        const cplx tr = g.mat.trace();
        return {alpha2, tr.real(), tr.imag(), purity(g, cfg.tol),
                entropy_trace(g, cfg.tol), region.tag, cond_of(g.R.R, true)};
    }
    const ModelSpectrum spec = swanson_spectrum(p, cfg.tol);
    const std::vector<double> lam =
        thermal_lambdas(cfg.beta, spec.eigenvalues, cfg.tol);
    CMatrix rho0m = CMatrix::Zero(3, 3);
    for (int j = 0; j < 3; ++j) rho0m(j, j) = lam[j];
    const DeformationOp r = swanson_R(p, cfg.tol);
    const RieszDM rdm = rdm_new(r, dm_new(rho0m, cfg.tol), cfg.tol);
    const cplx tr = rdm.mat.trace();
    return {alpha2, tr.real(), tr.imag(), purity(rdm, cfg.tol),
            entropy_trace(rdm, cfg.tol), region.tag, cond_of(r.R, false)};
}

inline SweepRow two_state_point(double theta, const SweepConfig& cfg) {
    const TwoStateParams p{cfg.r, cfg.d, theta};
    const Region region = classify_region(p.discriminant());
    if (region.tag == RegionTag::Exceptional && !cfg.allow_ep)
        throw ExceptionalPointError("sweep: exceptional point hit",
                                    cplx(cfg.r * std::cos(theta), 0));
    const double y = std::sin(theta);
    const RieszDM rdm = two_state_rdm_closed(0.0, y, cfg.tol);
    const cplx tr = rdm.mat.trace();
    return {theta, tr.real(), tr.imag(), purity(rdm, cfg.tol),
            entropy_trace(rdm, cfg.tol), region.tag, cond_of(rdm.R.R, false)};
}

}  // namespace detail

inline SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    SweepResult out;
    out.columns = {"parameter", "trace_re", "trace_im", "purity",
                   "entropy_trace", "region", "cond_R"};
    for (int i = 0; i < cfg.count; ++i) {
        const double x = cfg.start + (cfg.stop - cfg.start) *
                                         static_cast<double>(i) /
                                         static_cast<double>(cfg.count - 1);
        switch (cfg.command) {
            case SweepCommand::SwansonRdm1:
                out.rows.push_back(detail::swanson_rdm1_point(x, cfg));
                break;
            case SweepCommand::SwansonThermal:
                out.rows.push_back(detail::swanson_thermal_point(x, cfg));
                break;
            case SweepCommand::TwoState:
                out.rows.push_back(detail::two_state_point(x, cfg));
                break;
            case SweepCommand::Gdm: {
                const GeneralizedDM g = gdm_rho(cfg.alpha1, x, cfg.tol);
                const cplx tr = g.mat.trace();
                out.rows.push_back({x, tr.real(), tr.imag(), purity(g, cfg.tol),
                                    entropy_trace(g, cfg.tol),
                                    RegionTag::Exceptional,
                                    detail::cond_of(g.R.R, true)});
                break;
            }
        }
    }
    return out;
}

inline const char* region_name(RegionTag tag) {
    switch (tag) {
        case RegionTag::Unbroken: return "unbroken";
        case RegionTag::Broken: return "broken";
        default: return "exceptional";
    }
}

inline std::string to_csv(const SweepResult& result) {
    std::string out;
    for (size_t j = 0; j < result.columns.size(); ++j) {
        if (j) out += ',';
        out += result.columns[j];
    }
    out += '\n';
    char buf[64];
    const auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        out += buf;
    };
    for (const SweepRow& row : result.rows) {
        num(row.parameter); out += ',';
        num(row.trace_re); out += ',';
        num(row.trace_im); out += ',';
        num(row.purity); out += ',';
        num(row.entropy_trace); out += ',';
        out += region_name(row.region); out += ',';
        num(row.cond_R);
        out += '\n';
    }
    return out;
}

}  // namespace nhdm
